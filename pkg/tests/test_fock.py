import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cosmoflux import (
    LeakageError,
    NumericError,
    TruncationSpec,
    enumerate_basis,
    squeeze_amplitude,
    squeeze_generator,
    squeeze_operator_oracle,
    suggested_cutoff,
    transition_kernel,
    vacuum_column_leakage,
)
from cosmoflux.fock import (
    basis_index,
    sector_amplitudes,
    sector_spectral,
    totals_vector,
)

from conftest import Z_CANON

# 50-digit reference values for <m| S |n> at tanh z = 1/2 (and one at z = 1).
AMPLITUDE_TABLE = [
    (Z_CANON, (0, 0), (0, 0), 0.8660254037844386),
    (Z_CANON, (0, 0), (1, 1), 0.4330127018922193),
    (Z_CANON, (0, 0), (2, 2), 0.21650635094610965),
    (Z_CANON, (1, 1), (0, 0), -0.4330127018922193),
    (Z_CANON, (1, 1), (1, 1), 0.4330127018922193),
    (Z_CANON, (1, 1), (2, 2), 0.5412658773652742),
    (Z_CANON, (1, 0), (2, 1), 0.5303300858899106),
    (Z_CANON, (2, 1), (1, 0), -0.5303300858899106),
    (1.0, (0, 0), (3, 3), 0.2862741853954013),
]


@pytest.mark.parametrize("z, n, m, expected", AMPLITUDE_TABLE)
def test_amplitude_reference_values(z, n, m, expected):
    assert squeeze_amplitude(z, n, m) == pytest.approx(expected, abs=5e-15)


def test_amplitude_cross_sector_is_zero():
    assert squeeze_amplitude(Z_CANON, (1, 0), (0, 1)) == 0.0
    assert squeeze_amplitude(Z_CANON, (2, 0), (1, 0)) == 0.0
    assert squeeze_amplitude(Z_CANON, (0, 0), (1, 0)) == 0.0


def test_amplitude_rejects_bad_arguments():
    with pytest.raises(ValueError):
        squeeze_amplitude(-0.1, (0, 0), (0, 0))
    with pytest.raises(ValueError):
        squeeze_amplitude(0.5, (-1, 0), (0, 0))


def test_truncation_spec_validation():
    with pytest.raises(ValueError):
        TruncationSpec(cutoff=-1)
    with pytest.raises(ValueError):
        TruncationSpec(cutoff=8, leakage_tolerance=0.0)
    with pytest.raises(ValueError):
        TruncationSpec(cutoff=8, leakage_tolerance=1.5)
    assert TruncationSpec(cutoff=12).dim == 169


def test_enumerate_basis_row_major():
    spec = TruncationSpec(cutoff=2)
    states = enumerate_basis(spec)
    assert states == [
        (0, 0), (0, 1), (0, 2),
        (1, 0), (1, 1), (1, 2),
        (2, 0), (2, 1), (2, 2),
    ]
    for i, n in enumerate(states):
        assert basis_index(n, 2) == i
    with pytest.raises(ValueError):
        basis_index((3, 0), 2)


def test_totals_vector_matches_basis():
    spec = TruncationSpec(cutoff=5)
    tot = totals_vector(spec)
    for i, n in enumerate(enumerate_basis(spec)):
        assert tot[i] == n[0] + n[1]


def test_generator_antisymmetric_and_sector_structured():
    spec = TruncationSpec(cutoff=6)
    G = squeeze_generator(0.7, spec)
    assert np.max(np.abs(G + G.T)) == 0.0
    states = enumerate_basis(spec)
    for i, n in enumerate(states):
        for j, m in enumerate(states):
            if G[i, j] != 0.0:
                # only pair creation/annihilation couples states
                assert abs(m[0] - n[0]) == 1 and m[0] - n[0] == m[1] - n[1]
    # matrix element of z(a+b+ - ab): <1,1| G |0,0> = z
    assert G[basis_index((1, 1), 6), 0] == pytest.approx(0.7)


@pytest.mark.parametrize("z", [Z_CANON, 1.0, 1.2])
def test_oracle_orthogonal_on_box(z):
    spec = TruncationSpec(cutoff=40, leakage_tolerance=1e-2)
    S = squeeze_operator_oracle(z, spec)
    defect = np.max(np.abs(S.T @ S - np.eye(spec.dim)))
    assert defect <= 1e-12


def test_oracle_difference_blocks_exact(spec40):
    S = squeeze_operator_oracle(Z_CANON, spec40)
    occ = np.arange(spec40.cutoff + 1)
    dif = (occ[:, None] - occ[None, :]).reshape(-1)
    assert np.max(np.abs(S[dif[:, None] != dif[None, :]])) == 0.0


def test_oracle_vacuum_gate_raises():
    with pytest.raises(LeakageError):
        squeeze_operator_oracle(1.2, TruncationSpec(cutoff=8, leakage_tolerance=1e-8))


def test_analytic_matches_spectral_small_indices():
    # spectral route needs headroom: the image of low states must stay
    # inside the box or reflection contaminates the comparison
    worst = 0.0
    for z in (0.25, Z_CANON, 1.0):
        for d in range(9):
            ana = sector_amplitudes(z, d, 9)
            spe = sector_spectral(z, d, 97)[:9, :9]
            worst = max(worst, float(np.max(np.abs(ana - spe))))
    assert worst <= 1e-10


def test_vacuum_column_law(kernel40):
    tau = np.tanh(Z_CANON)
    col = kernel40.probabilities[:, 0]
    for n in range(11):
        idx = basis_index((n, n), 40)
        expected = (1.0 - tau * tau) * tau ** (2 * n)
        assert abs(col[idx] - expected) / expected <= 1e-9


def test_vacuum_column_leakage_closed_form(kernel40):
    # closed form tau^(2(N+1)) equals the measured column defect
    measured = 1.0 - kernel40.probabilities[:, 0].sum()
    assert vacuum_column_leakage(Z_CANON, 40) == pytest.approx(measured, abs=1e-13)


def test_suggested_cutoff_restores_budget():
    n = suggested_cutoff(1.2, 1e-8)
    assert vacuum_column_leakage(1.2, n) <= 1e-8
    assert vacuum_column_leakage(1.2, n - 4) > 1e-8


def test_transition_kernel_gate_raises():
    with pytest.raises(LeakageError):
        transition_kernel(1.2, TruncationSpec(cutoff=8, leakage_tolerance=1e-8))


def test_transition_kernel_instability_raises():
    # the log-domain triangular product loses all significance well above
    # the leakage-driven cutoff; the column-sum excess check must fire
    with pytest.raises(NumericError):
        transition_kernel(1.2, TruncationSpec(cutoff=64, leakage_tolerance=1e-2))


def test_kernel_symmetry_exact(kernel40):
    P = kernel40.probabilities
    assert np.max(np.abs(P - P.T)) == 0.0


def test_kernel_probability_lookup(kernel40):
    tau = np.tanh(Z_CANON)
    p = kernel40.probability((1, 1), (0, 0))
    assert p == pytest.approx((1 - tau * tau) * tau * tau, rel=1e-12)
    assert kernel40.probability((1, 0), (0, 1)) == 0.0


def test_zero_squeeze_is_identity():
    spec = TruncationSpec(cutoff=10)
    kern = transition_kernel(0.0, spec)
    assert np.array_equal(kern.probabilities, np.eye(spec.dim))
    assert np.max(kern.column_leakage) == 0.0


@settings(max_examples=25, deadline=None)
@given(z=st.floats(min_value=0.0, max_value=1.0, allow_nan=False))
def test_kernel_columns_substochastic(z):
    spec = TruncationSpec(cutoff=14, leakage_tolerance=1e-2)
    kern = transition_kernel(z, spec)
    P = kern.probabilities
    assert np.min(P) >= 0.0
    colsums = P.sum(axis=0)
    assert np.max(colsums) <= 1.0 + 1e-12
    assert np.max(np.abs(P - P.T)) == 0.0
    # leakage is clipped at zero; an allowed excess below the stability
    # limit may leave a gap of that size
    assert np.max(np.abs((1.0 - colsums) - kern.column_leakage)) <= 2e-9


@settings(max_examples=20, deadline=None)
@given(
    z=st.floats(min_value=0.01, max_value=1.0, allow_nan=False),
    n=st.integers(min_value=0, max_value=6),
    m=st.integers(min_value=0, max_value=6),
    d=st.integers(min_value=0, max_value=4),
)
def test_amplitude_mirror_sign(z, n, m, d):
    # exchanging initial and final states flips the sign with the parity
    # of the number of pair steps between them
    fwd = squeeze_amplitude(z, (n + d, n), (m + d, m))
    bwd = squeeze_amplitude(z, (m + d, m), (n + d, n))
    assert fwd == pytest.approx((-1.0) ** abs(m - n) * bwd, abs=1e-14)


@settings(max_examples=20, deadline=None)
@given(z=st.floats(min_value=0.05, max_value=1.1, allow_nan=False),
       cutoff=st.integers(min_value=4, max_value=24))
def test_vacuum_leakage_monotone_in_cutoff(z, cutoff):
    assert vacuum_column_leakage(z, cutoff + 1) < vacuum_column_leakage(z, cutoff)
