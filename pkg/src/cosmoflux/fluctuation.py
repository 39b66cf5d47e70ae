"""Two-point-measurement entropy statistics and fluctuation-relation checks.

Trajectories are joint-microstate pairs (n, m): measuring energy before and
after the squeeze. For geometric thermal weights the entropy increment per
trajectory s = (omega/T)(total(m) - total(n)) cancels the weight ratio
exactly, so the forward/reverse log-ratio identity holds microstate by
microstate and every deviation measured here is pure floating-point or
truncation noise. Coarse-graining to the entropy lattice happens only for
reporting; sector degeneracies would otherwise contaminate the increment.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EntropyUndefinedError, VerificationError
from .fock import TransitionKernel, _sector_state_indices, totals_vector
from .spacetime import SqueezeChannel
from .thermo import FLOAT_SLACK, ThermalDistribution, WorkReport

PROBABILITY_FLOOR = 1e-12
BINNING_RESOLUTION = 1e-12
EIGENVALUE_CLIP = 1e-300


@dataclass(frozen=True)
class ProcessJoint:
    """Dense trajectory masses, indexed [final-of-expansion, initial].

    For direction "expansion" entries[m, n] is the mass of trajectory
    n -> m. For "contraction" entries[m, n] is the mass of the reverse
    trajectory m -> n (same conditional by kernel symmetry, thermal weight
    taken at the contraction's initial state m).
    """

    entries: np.ndarray
    direction: str
    omega: float
    temperature: float


@dataclass(frozen=True)
class EntropyDistribution:
    """Finitely supported distribution over the entropy increment."""

    support: np.ndarray
    masses: np.ndarray
    binning_resolution: float

    @property
    def total_mass(self) -> float:
        return float(self.masses.sum())


@dataclass(frozen=True)
class CrooksReport:
    distribution_deviation: float
    microstate_deviation: float
    floored_mass: float


def forward_joint(
    kernel: TransitionKernel, thermal: ThermalDistribution
) -> ProcessJoint:
    """Expansion trajectories: p(n -> m) = p(m|n) p_th(n)."""
    return ProcessJoint(
        entries=kernel.probabilities * thermal.weights[None, :],
        direction="expansion",
        omega=thermal.omega,
        temperature=thermal.temperature,
    )


def reverse_joint(
    kernel: TransitionKernel, thermal: ThermalDistribution
) -> ProcessJoint:
    """Contraction trajectories: q(m -> n) = p(m|n) p_th(m).

    The contraction's initial thermal state at the rescaled frequency and
    adiabatic temperature has the same Boltzmann factor x, so its weights
    coincide with the expansion's thermal weights on the shared basis.
    """
    return ProcessJoint(
        entries=kernel.probabilities * thermal.weights[:, None],
        direction="contraction",
        omega=thermal.omega,
        temperature=thermal.temperature,
    )


def entropy_change(
    n: tuple[int, int], m: tuple[int, int], omega_out: float, t_ad: float
) -> float:
    """s(n -> m) = (omega_out / T_ad)(total(m) - total(n))."""
    if t_ad == 0.0:
        raise EntropyUndefinedError(
            "entropy increment has no scale on the T = 0 vacuum path"
        )
    return (omega_out / t_ad) * float((m[0] + m[1]) - (n[0] + n[1]))


def _lattice_masses(
    joint: ProcessJoint, cutoff: int
) -> np.ndarray:
    """Mass per integer total-change, offset by 2*cutoff (length 4N+1)."""
    side = cutoff + 1
    tot = (np.arange(side)[:, None] + np.arange(side)[None, :]).reshape(-1)
    delta = (tot[:, None] - tot[None, :]) + 2 * cutoff
    return np.bincount(
        delta.ravel(), weights=joint.entries.ravel(), minlength=4 * cutoff + 1
    )


def entropy_distributions(
    forward: ProcessJoint,
    reverse: ProcessJoint,
    channel: SqueezeChannel,
    temperature: float,
) -> tuple[EntropyDistribution, EntropyDistribution]:
    """Aggregate trajectory mass onto the entropy lattice.

    Both processes live on the same integer lattice of total change, so the
    expansion value s and the contraction value -s land on shared points
    and the 1e-12 merge tolerance is inert. The contraction distribution is
    returned over its own increment (the negated lattice).
    """
    if temperature == 0.0:
        raise EntropyUndefinedError(
            "entropy distributions are undefined on the T = 0 vacuum path"
        )
    rate = forward.omega / temperature
    cutoff = int(np.sqrt(forward.entries.shape[0])) - 1
    mass_e = _lattice_masses(forward, cutoff)
    mass_c = _lattice_masses(reverse, cutoff)
    delta = np.arange(-2 * cutoff, 2 * cutoff + 1)
    keep = (mass_e > 0.0) | (mass_c > 0.0)
    s_vals = rate * delta[keep].astype(float)
    p_e = EntropyDistribution(
        support=s_vals,
        masses=mass_e[keep],
        binning_resolution=BINNING_RESOLUTION,
    )
    # Contraction increment for trajectory m -> n is -s(n -> m); flip to
    # ascending order in its own variable.
    p_c = EntropyDistribution(
        support=(-s_vals)[::-1].copy(),
        masses=mass_c[keep][::-1].copy(),
        binning_resolution=BINNING_RESOLUTION,
    )
    return p_e, p_c


def _paired_reverse_masses(
    p_e: EntropyDistribution, p_c: EntropyDistribution
) -> np.ndarray:
    """P_C(-s) aligned with P_E's support via the binning tolerance."""
    targets = -p_e.support
    pos = np.searchsorted(p_c.support, targets)
    aligned = np.zeros_like(targets)
    for i, (t, j) in enumerate(zip(targets, pos)):
        for cand in (j - 1, j, j + 1):
            if 0 <= cand < len(p_c.support) and abs(
                p_c.support[cand] - t
            ) <= p_c.binning_resolution * max(1.0, abs(t)):
                aligned[i] = p_c.masses[cand]
                break
    return aligned


def crooks_deviation(
    p_e: EntropyDistribution,
    p_c: EntropyDistribution,
    forward: ProcessJoint,
    reverse: ProcessJoint,
    floor: float = PROBABILITY_FLOOR,
) -> CrooksReport:
    """max |log(P_E(s)/P_C(-s)) - s| plus the microstate-level residual.

    Support points with P_E(s) <= floor are excluded and their mass is
    reported for the truncation budget. A floored point whose partner mass
    is exactly zero is a support mismatch: impossible for thermal inputs,
    so it surfaces as a verification error instead of an infinity.
    """
    paired = _paired_reverse_masses(p_e, p_c)
    live = p_e.masses > floor
    floored = float(p_e.masses[~live].sum())
    if np.any(live & (paired <= 0.0)):
        bad = p_e.support[live & (paired <= 0.0)][0]
        raise VerificationError(
            f"support mismatch: P_E({bad:.6g}) > floor but P_C({-bad:.6g}) = 0"
        )
    dist_dev = 0.0
    if np.any(live):
        logratio = np.log(p_e.masses[live]) - np.log(paired[live])
        dist_dev = float(np.max(np.abs(logratio - p_e.support[live])))

    rate = forward.omega / forward.temperature
    J = forward.entries
    Q = reverse.entries
    mask = J > floor
    micro_dev = 0.0
    if np.any(mask):
        cutoff = int(np.sqrt(J.shape[0])) - 1
        side = cutoff + 1
        tot = (
            (np.arange(side)[:, None] + np.arange(side)[None, :])
            .reshape(-1)
            .astype(float)
        )
        s_mat = rate * (tot[:, None] - tot[None, :])
        resid = np.log(J[mask]) - np.log(Q[mask]) - s_mat[mask]
        micro_dev = float(np.max(np.abs(resid)))
    return CrooksReport(
        distribution_deviation=dist_dev,
        microstate_deviation=micro_dev,
        floored_mass=floored,
    )


def mean_entropy(p_e: EntropyDistribution) -> float:
    """<s> over the full forward support.

    Stays evaluable in regimes where the reverse-side masses e^(-s)
    underflow float64 and the KL pairing cannot be formed.
    """
    return float(p_e.support @ p_e.masses)


def mean_entropy_and_kl(
    p_e: EntropyDistribution,
    p_c: EntropyDistribution,
    floor: float = PROBABILITY_FLOOR,
) -> tuple[float, float]:
    """<s> and K[P_E || P_C(-s)], asserting their identity.

    The mean runs over the full support; the KL sum applies the floor so
    sub-truncation masses cannot inject log noise.
    """
    s_mean = float(p_e.support @ p_e.masses)
    paired = _paired_reverse_masses(p_e, p_c)
    live = p_e.masses > floor
    kl = float(
        p_e.masses[live]
        @ (np.log(p_e.masses[live]) - np.log(np.maximum(paired[live], 1e-300)))
    )
    if abs(s_mean - kl) > 1e-8:
        raise VerificationError(
            f"<s> and KL disagree by {abs(s_mean - kl):.3e} (> 1e-8)"
        )
    if s_mean < -1e-10:
        raise VerificationError(f"<s> = {s_mean:.3e} violates positivity")
    return s_mean, kl


def integral_fluctuation_defect(p_e: EntropyDistribution) -> float:
    """|sum_s P_E(s) e^(-s) - 1|; deviation equals the escaped mass."""
    return abs(float(p_e.masses @ np.exp(-p_e.support)) - 1.0)


def entropy_friction_identity(
    work: WorkReport, s_mean: float, tolerance: float | None = None
) -> dict[str, float]:
    """Check <s> = W_fric / T_ad = (omega_out / T_ad) <n_c>.

    The default tolerance is 1e-6 widened by the truncation bound: at an
    inadequate cutoff both sides drift by the leaked mass the bound covers.
    """
    t_ad = work.adiabatic_temperature
    if t_ad == 0.0:
        raise EntropyUndefinedError(
            "entropy identities are undefined on the T = 0 vacuum path"
        )
    if tolerance is None:
        tolerance = max(
            1e-6, work.truncation_bound / t_ad + FLOAT_SLACK * max(1.0, abs(s_mean))
        )
    resid_friction = abs(s_mean - work.inner_friction / t_ad)
    resid_creation = abs(s_mean - (work.omega_out / t_ad) * work.mean_created)
    record = {
        "residual_friction": resid_friction,
        "residual_creation": resid_creation,
        "tolerance": tolerance,
    }
    if resid_friction > tolerance or resid_creation > tolerance:
        raise VerificationError(
            f"entropy/friction identity violated: residuals "
            f"{resid_friction:.3e}, {resid_creation:.3e} > {tolerance:.3e}"
        )
    return record


def _jacobi_svd(
    B: np.ndarray, tol: float = 1e-15, max_sweeps: int = 60
) -> tuple[np.ndarray, np.ndarray, int]:
    """One-sided Jacobi SVD with classical small-angle rotations.

    Orthogonalizes columns by disjoint plane rotations in round-robin
    tournament order, vectorizing each round. Rotation angles are kept
    below pi/4 (classical formula), which preserves monotone convergence
    and the high relative accuracy one-sided Jacobi achieves on strongly
    graded matrices; LAPACK eigensolvers lose exactly that grading here.
    """
    A = B.copy()
    n = A.shape[1]
    if n == 1:
        s = float(np.linalg.norm(A[:, 0]))
        return A / (s if s > 0.0 else 1.0), np.array([s]), 0
    idx = list(range(n)) if n % 2 == 0 else list(range(n)) + [-1]
    m = len(idx)
    sweeps_done = 0
    for sweep in range(1, max_sweeps + 1):
        sweeps_done = sweep
        rotated = False
        order = idx[:]
        for _round in range(m - 1):
            tops = order[: m // 2]
            bots = order[m // 2 :][::-1]
            pairs = [(a, b) for a, b in zip(tops, bots) if a >= 0 and b >= 0]
            order = [order[0]] + [order[-1]] + order[1:-1]
            if not pairs:
                continue
            p = np.array([a for a, _ in pairs], dtype=int)
            q = np.array([b for _, b in pairs], dtype=int)
            Ap = A[:, p]
            Aq = A[:, q]
            app = np.einsum("ij,ij->j", Ap, Ap)
            aqq = np.einsum("ij,ij->j", Aq, Aq)
            apq = np.einsum("ij,ij->j", Ap, Aq)
            denom = np.sqrt(app * aqq)
            mask = np.abs(apq) > tol * denom
            if not mask.any():
                continue
            rotated = True
            pp, qq, pq = app[mask], aqq[mask], apq[mask]
            zeta = (qq - pp) / (2.0 * pq)
            t = np.sign(zeta) / (np.abs(zeta) + np.sqrt(1.0 + zeta * zeta))
            t = np.where(zeta == 0.0, 1.0, t)
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            Pm = Ap[:, mask]
            Qm = Aq[:, mask]
            A[:, p[mask]] = c * Pm - s * Qm
            A[:, q[mask]] = s * Pm + c * Qm
        if not rotated:
            break
    s = np.sqrt(np.einsum("ij,ij->j", A, A))
    U = A / np.where(s > 0.0, s, 1.0)
    return U, s, sweeps_done


def quantum_relative_entropy(
    thermal: ThermalDistribution,
    kernel: TransitionKernel,
    t_ad: float,
    work: WorkReport | None = None,
) -> float:
    """K[rho || rho'] with rho' the squeezed image of the thermal state.

    rho is diagonal and simultaneously thermal for the rescaled adiabatic
    Hamiltonian at t_ad, so K = tr rho log rho - tr rho log rho'. rho'
    block-diagonalizes per difference sector as B B^T with B the amplitude
    block times sqrt of the sector weights; its eigenpairs come from the
    one-sided Jacobi SVD of B. Eigendirections below the clip are excluded
    from the trace (their rho-weight is bounded by the leaked mass). When a
    work report is supplied, asserts T_ad K = W_fric within 1e-5 relative,
    widened by the truncation bound at inadequate cutoffs.
    """
    if thermal.is_vacuum or t_ad == 0.0:
        raise EntropyUndefinedError(
            "quantum relative entropy is undefined on the T = 0 vacuum path"
        )
    N = kernel.spec.cutoff
    w_all = thermal.weights
    K = 0.0
    for d in range(N + 1):
        hi, _lo = _sector_state_indices(d, N)
        wd = w_all[hi]
        mult = 2.0 if d > 0 else 1.0
        pos = wd > 0.0
        rho_term = float(wd[pos] @ np.log(wd[pos])) if pos.any() else 0.0
        B = kernel.sectors[d] * np.sqrt(wd)[None, :]
        U, sv, _sweeps = _jacobi_svd(B)
        lam = sv * sv
        keep = lam > EIGENVALUE_CLIP
        if keep.any():
            r = (U[:, keep] ** 2).T @ wd
            rho_prime_term = float(r @ np.log(lam[keep]))
        else:
            rho_prime_term = 0.0
        K += mult * (rho_term - rho_prime_term)
    if work is not None:
        scale = max(1.0, abs(work.inner_friction))
        tolerance = max(1e-5 * scale, work.truncation_bound + FLOAT_SLACK * scale)
        if abs(t_ad * K - work.inner_friction) > tolerance:
            raise VerificationError(
                f"quantum relative entropy mismatch: |T_ad K - W_fric| = "
                f"{abs(t_ad * K - work.inner_friction):.3e} > {tolerance:.3e}"
            )
    return K
