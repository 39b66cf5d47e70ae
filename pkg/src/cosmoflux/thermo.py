"""Thermal initial states and work bookkeeping for the squeeze channel.

Energies use H = omega (n_a + n_b + 1): the pair carries one unit of
zero-point energy, which cancels inside thermal weights but not in work
differences, so the work decomposition keeps the explicit (omega_out -
omega_in) shift. All kernel averages carry a truncation bound equal to the
largest in-box energy times the initial-weighted mass lost to the box.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import LeakageError, VerificationError
from .fock import TransitionKernel, TruncationSpec, totals_vector

# Slack added to truncation-bound comparisons to absorb pure rounding noise.
FLOAT_SLACK = 1e-12


@dataclass(frozen=True)
class ThermalDistribution:
    """Diagonal Gibbs weights over the joint basis, renormalized to the box.

    temperature = 0 marks the vacuum path: a point mass on (0, 0) with no
    entropy scale. renorm_defect is the pre-renormalization tail mass.
    """

    temperature: float
    omega: float
    spec: TruncationSpec
    weights: np.ndarray
    renorm_defect: float

    @property
    def is_vacuum(self) -> bool:
        return self.temperature == 0.0


@dataclass(frozen=True)
class WorkReport:
    mean_work: float
    adiabatic_work: float
    inner_friction: float
    mean_initial: float
    mean_created: float
    adiabatic_temperature: float
    truncation_bound: float
    weighted_leakage: float
    omega_out: float


def thermal_distribution(
    temperature: float, omega: float, spec: TruncationSpec
) -> ThermalDistribution:
    """Gibbs weights (1-x)^2 x^total with x = exp(-omega/T), renormalized.

    Raises LeakageError when the untruncated tail mass exceeds the leakage
    budget: the box is too small to hold this temperature.
    """
    if temperature < 0.0:
        raise ValueError(f"temperature must be >= 0, got {temperature}")
    if omega <= 0.0:
        raise ValueError(f"omega must be > 0, got {omega}")
    dim = spec.dim
    if temperature == 0.0:
        weights = np.zeros(dim)
        weights[0] = 1.0
        return ThermalDistribution(
            temperature=0.0,
            omega=omega,
            spec=spec,
            weights=weights,
            renorm_defect=0.0,
        )
    x = np.exp(-omega / temperature)
    raw = (1.0 - x) ** 2 * x ** totals_vector(spec)
    in_box = float(raw.sum())
    defect = max(1.0 - in_box, 0.0)
    if defect > spec.leakage_tolerance:
        raise LeakageError(
            f"thermal tail mass {defect:.3e} > tolerance "
            f"{spec.leakage_tolerance:.3e}: cutoff {spec.cutoff} too small "
            f"for T/omega = {temperature / omega:.3g}"
        )
    return ThermalDistribution(
        temperature=temperature,
        omega=omega,
        spec=spec,
        weights=raw / in_box,
        renorm_defect=defect,
    )


def mean_initial_closed_form(temperature: float, omega: float) -> float:
    """Untruncated <n_a + n_b> = 2x/(1-x) for the two-mode Gibbs state."""
    if temperature == 0.0:
        return 0.0
    x = np.exp(-omega / temperature)
    return float(2.0 * x / (1.0 - x))


def mean_initial_total(thermal: ThermalDistribution) -> float:
    """Box-truncated <n_a + n_b> under the renormalized weights."""
    return float(totals_vector(thermal.spec) @ thermal.weights)


def adiabatic_work(temperature: float, omega_in: float, omega_out: float) -> float:
    """(omega_out - omega_in)(<n_i> + 1) with the untruncated <n_i>."""
    return (omega_out - omega_in) * (
        mean_initial_closed_form(temperature, omega_in) + 1.0
    )


def truncation_bound(
    spec: TruncationSpec, omega_out: float, weighted_leakage: float
) -> float:
    """Largest in-box energy times the initial-weighted escaped mass."""
    return omega_out * (2 * spec.cutoff + 1) * weighted_leakage


def weighted_kernel_leakage(
    kernel: TransitionKernel, thermal: ThermalDistribution
) -> float:
    """Kernel leakage weighted by the initial distribution, plus its tail."""
    return float(kernel.column_leakage @ thermal.weights) + thermal.renorm_defect


def average_work(
    kernel: TransitionKernel,
    thermal: ThermalDistribution,
    omega_in: float,
    omega_out: float,
) -> tuple[float, float]:
    """Mean work omega_out(<n_f> + 1) - omega_in(<n_i> + 1) and its bound."""
    tot = totals_vector(kernel.spec)
    w = thermal.weights
    n_f = float(tot @ kernel.probabilities @ w)
    n_i = float(tot @ w)
    mean_work = omega_out * (n_f + 1.0) - omega_in * (n_i + 1.0)
    bound = truncation_bound(
        kernel.spec, omega_out, weighted_kernel_leakage(kernel, thermal)
    )
    return mean_work, bound


def mean_created_kernel(
    kernel: TransitionKernel, thermal: ThermalDistribution
) -> float:
    """<total(m) - total(n)> under p(m|n) p_th(n), in-box."""
    tot = totals_vector(kernel.spec)
    P = kernel.probabilities
    w = thermal.weights
    colsums = P.sum(axis=0)
    return float((tot @ P - tot * colsums) @ w)


def mean_created_closed_form(z: float, temperature: float, omega: float) -> float:
    """Untruncated pair-creation count 2 sinh^2(z) (<n_i> + 1)."""
    s = np.sinh(z)
    return float(
        2.0 * s * s * (mean_initial_closed_form(temperature, omega) + 1.0)
    )


def inner_friction(
    kernel: TransitionKernel,
    thermal: ThermalDistribution,
    omega_in: float,
    omega_out: float,
) -> WorkReport:
    """Full work decomposition with the friction/creation consistency check.

    The identity W_fric = omega_out <n_c> holds untruncated; in the box the
    two sides differ by exactly the leaked-mass terms the truncation bound
    covers, so exceeding the bound signals an implementation bug rather
    than truncation.
    """
    mean_work, bound = average_work(kernel, thermal, omega_in, omega_out)
    w_ad = adiabatic_work(thermal.temperature, omega_in, omega_out)
    w_fric = mean_work - w_ad
    n_c = mean_created_kernel(kernel, thermal)
    scale = max(1.0, abs(w_fric))
    if abs(w_fric - omega_out * n_c) > bound + FLOAT_SLACK * scale:
        raise VerificationError(
            f"friction/creation mismatch {abs(w_fric - omega_out * n_c):.3e} "
            f"exceeds truncation bound {bound:.3e}"
        )
    t_ad = (
        0.0
        if thermal.temperature == 0.0
        else thermal.temperature * omega_out / omega_in
    )
    return WorkReport(
        mean_work=mean_work,
        adiabatic_work=w_ad,
        inner_friction=w_fric,
        mean_initial=mean_initial_total(thermal),
        mean_created=n_c,
        adiabatic_temperature=t_ad,
        truncation_bound=bound,
        weighted_leakage=weighted_kernel_leakage(kernel, thermal),
        omega_out=omega_out,
    )


def mean_created_spectral(
    z: float, temperature: float, omega: float, cutoff: int
) -> float:
    """<n_c> via per-sector spectral amplitudes at large cutoffs.

    The spectral route stays entrywise stable at box sizes where the
    analytic sum does not, and its in-box boundary reflection vanishes as
    the cutoff grows, so this converges to the untruncated value. Weights
    use the exact geometric normalization: at the cutoffs this targets the
    thermal tail is far below any tolerance of interest.
    """
    from .fock import sector_spectral

    if z == 0.0:
        return 0.0
    if temperature < 0.0:
        raise ValueError(f"temperature must be >= 0, got {temperature}")
    x = 0.0 if temperature == 0.0 else float(np.exp(-omega / temperature))
    norm = 0.0
    for d in range(cutoff + 1):
        i = np.arange(cutoff + 1 - d)
        mass = ((1.0 - x) ** 2 * x ** (2 * i + d)).sum()
        norm += (2.0 if d else 1.0) * mass
    acc = 0.0
    for d in range(cutoff + 1):
        size = cutoff + 1 - d
        S = sector_spectral(z, d, size)
        P = S**2
        i = np.arange(size)
        wd = (1.0 - x) ** 2 * x ** (2 * i + d) / norm
        tot = 2 * i + d
        acc += (2.0 if d else 1.0) * float((tot @ P - tot * P.sum(axis=0)) @ wd)
    return acc
