"""Configuration, scenario dispatch, sweeps, invariant battery, reports.

Config files are flat JSON with explicitly named keys; unknown keys are
errors so a typo cannot silently run different physics. Reports serialize
with a fixed field order and a fixed significant-digit rounding, making
repeated runs byte-identical.
"""

from __future__ import annotations

import csv
import io
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields as dataclass_fields

import numpy as np

from .errors import ConfigError, LeakageError, VerificationError
from . import fock, spacetime, thermo, fluctuation
from .fock import TruncationSpec, transition_kernel
from .spacetime import (
    BlackHoleParams,
    CosmologyParams,
    SqueezeChannel,
    UnruhParams,
    channel_from_blackhole,
    channel_from_cosmology,
    channel_from_unruh,
)
from .thermo import inner_friction, thermal_distribution

SCENARIOS = ("cosmology", "unruh", "blackhole", "direct-z")
SCENARIO_KEYS = {
    "cosmology": ("momentum", "mass", "epsilon", "sigma"),
    "unruh": ("omega", "acceleration"),
    "blackhole": ("omega", "mass_bh"),
    "direct-z": ("z", "omega_in", "omega_out"),
}
COMMON_KEYS = ("scenario", "temperature", "cutoff", "leakage_tolerance", "output", "precision")
FLOAT_KEYS = {
    "momentum", "mass", "epsilon", "sigma", "omega", "acceleration",
    "mass_bh", "z", "omega_in", "omega_out", "temperature", "leakage_tolerance",
}
INT_KEYS = {"cutoff", "precision"}
SWEEP_AXES = ("momentum", "sigma", "epsilon", "temperature")
SWEEP_ONLY_KEYS = ("axis", "grid", "grid_min", "grid_max", "grid_count", "grid_scale")

REPORT_FIELDS = (
    "scenario", "k", "m", "epsilon", "sigma", "T", "cutoff", "z",
    "omega_in", "omega_out", "mean_work", "adiabatic_work", "inner_friction",
    "mean_created", "mean_entropy", "kl_classical", "kl_quantum",
    "crooks_dev", "leakage", "flags",
)


@dataclass(frozen=True)
class RunConfig:
    scenario: str
    momentum: float | None = None
    mass: float | None = None
    epsilon: float | None = None
    sigma: float | None = None
    omega: float | None = None
    acceleration: float | None = None
    mass_bh: float | None = None
    z: float | None = None
    omega_in: float | None = None
    omega_out: float | None = None
    temperature: float = 1.0
    cutoff: int = 40
    leakage_tolerance: float = 1e-8
    output: str = "json"
    precision: int = 12

    @classmethod
    def from_mapping(cls, mapping: dict) -> "RunConfig":
        known = {f.name for f in dataclass_fields(cls)}
        unknown = sorted(set(mapping) - known)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        coerced = {}
        for key, value in mapping.items():
            coerced[key] = _coerce(key, value)
        if "scenario" not in coerced:
            raise ConfigError("missing required key: scenario")
        cfg = cls(**coerced)
        cfg.validate()
        return cfg

    def to_mapping(self) -> dict:
        out = {}
        for f in dataclass_fields(self):
            value = getattr(self, f.name)
            if value is not None:
                out[f.name] = value
        return out

    def replace(self, **updates) -> "RunConfig":
        mapping = self.to_mapping()
        mapping.update(updates)
        return RunConfig.from_mapping(mapping)

    def validate(self) -> None:
        if self.scenario not in SCENARIOS:
            raise ConfigError(
                f"scenario must be one of {SCENARIOS}, got {self.scenario!r}"
            )
        needed = SCENARIO_KEYS[self.scenario]
        missing = [k for k in needed if getattr(self, k) is None]
        if missing:
            raise ConfigError(
                f"scenario {self.scenario!r} requires keys: {', '.join(missing)}"
            )
        foreign = sorted(
            k
            for scen, keys in SCENARIO_KEYS.items()
            if scen != self.scenario
            for k in keys
            if k not in needed and getattr(self, k) is not None
        )
        if foreign:
            raise ConfigError(
                f"keys {', '.join(foreign)} do not belong to scenario "
                f"{self.scenario!r}: exactly one scenario block may be present"
            )
        if self.temperature < 0.0:
            raise ConfigError(f"temperature must be >= 0, got {self.temperature}")
        if self.cutoff < 8:
            raise ConfigError(f"cutoff must be >= 8, got {self.cutoff}")
        if not 0.0 < self.leakage_tolerance <= 0.01:
            raise ConfigError(
                f"leakage_tolerance must lie in (0, 0.01], got {self.leakage_tolerance}"
            )
        if self.output not in ("json", "csv"):
            raise ConfigError(f"output must be json or csv, got {self.output!r}")
        if self.precision < 1:
            raise ConfigError(f"precision must be >= 1, got {self.precision}")
        if self.scenario == "direct-z":
            if self.z < 0.0:
                raise ConfigError(f"z must be >= 0, got {self.z}")
            if not 0.0 < self.omega_in <= self.omega_out:
                raise ConfigError("need 0 < omega_in <= omega_out")


def _coerce(key: str, value):
    if value is None:
        return None
    try:
        if key in FLOAT_KEYS:
            return float(value)
        if key in INT_KEYS:
            if isinstance(value, float) and not value.is_integer():
                raise ValueError(f"{value} is not an integer")
            return int(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"config key {key!r}: {exc}") from exc
    return value


@dataclass(frozen=True)
class SweepConfig:
    base: RunConfig
    axis: str
    grid: tuple[float, ...]

    @classmethod
    def from_mapping(cls, mapping: dict) -> "SweepConfig":
        mapping = dict(mapping)
        axis = mapping.pop("axis", None)
        grid = mapping.pop("grid", None)
        grid_min = mapping.pop("grid_min", None)
        grid_max = mapping.pop("grid_max", None)
        grid_count = mapping.pop("grid_count", None)
        grid_scale = mapping.pop("grid_scale", "linear")
        base = RunConfig.from_mapping(mapping)
        if axis not in SWEEP_AXES:
            raise ConfigError(f"axis must be one of {SWEEP_AXES}, got {axis!r}")
        if axis != "temperature" and base.scenario != "cosmology":
            raise ConfigError(
                f"axis {axis!r} applies only to the cosmology scenario"
            )
        if grid is not None:
            if grid_min is not None or grid_max is not None or grid_count is not None:
                raise ConfigError("give either an explicit grid or min/max/count, not both")
            values = tuple(float(v) for v in grid)
        else:
            if grid_min is None or grid_max is None or grid_count is None:
                raise ConfigError("grid requires grid_min, grid_max and grid_count")
            count = _coerce("cutoff", grid_count)
            if count < 2:
                raise ConfigError(f"grid_count must be >= 2, got {count}")
            lo, hi = float(grid_min), float(grid_max)
            if grid_scale == "linear":
                values = tuple(np.linspace(lo, hi, count).tolist())
            elif grid_scale == "log":
                if lo <= 0.0 or hi <= 0.0:
                    raise ConfigError("log grids need positive endpoints")
                values = tuple(np.geomspace(lo, hi, count).tolist())
            else:
                raise ConfigError(
                    f"grid_scale must be linear or log, got {grid_scale!r}"
                )
        if len(values) < 2:
            raise ConfigError("grid must contain at least 2 points")
        return cls(base=base, axis=axis, grid=values)


def resolve_channel(cfg: RunConfig) -> tuple[SqueezeChannel, list[str]]:
    """Map the configured scenario to a squeeze channel plus report flags."""
    try:
        if cfg.scenario == "cosmology":
            params = CosmologyParams(
                epsilon=cfg.epsilon,
                sigma=cfg.sigma,
                mass=cfg.mass,
                momentum=cfg.momentum,
            )
            return channel_from_cosmology(params), []
        if cfg.scenario == "unruh":
            return (
                channel_from_unruh(
                    UnruhParams(acceleration=cfg.acceleration, omega=cfg.omega)
                ),
                ["formal-horizon"],
            )
        if cfg.scenario == "blackhole":
            return (
                channel_from_blackhole(
                    BlackHoleParams(mass_bh=cfg.mass_bh, omega=cfg.omega)
                ),
                ["formal-horizon"],
            )
        return (
            SqueezeChannel(
                z=cfg.z, omega_in=cfg.omega_in, omega_out=cfg.omega_out
            ),
            [],
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def run_simulation(cfg: RunConfig) -> dict:
    """End-to-end pipeline for one configuration; deterministic report."""
    cfg.validate()
    channel, flags = resolve_channel(cfg)
    spec = TruncationSpec(cutoff=cfg.cutoff, leakage_tolerance=cfg.leakage_tolerance)
    kernel = transition_kernel(channel.z, spec)
    thermal = thermal_distribution(cfg.temperature, channel.omega_in, spec)
    work = inner_friction(kernel, thermal, channel.omega_in, channel.omega_out)

    if thermal.is_vacuum:
        flags = flags + ["vacuum-path"]
        s_mean = kl = k_quantum = crooks_dev = None
        leakage = work.weighted_leakage
    else:
        fwd = fluctuation.forward_joint(kernel, thermal)
        rev = fluctuation.reverse_joint(kernel, thermal)
        p_e, p_c = fluctuation.entropy_distributions(
            fwd, rev, channel, cfg.temperature
        )
        crooks = fluctuation.crooks_deviation(p_e, p_c, fwd, rev)
        s_mean, kl = fluctuation.mean_entropy_and_kl(p_e, p_c)
        fluctuation.entropy_friction_identity(work, s_mean)
        k_quantum = fluctuation.quantum_relative_entropy(
            thermal, kernel, work.adiabatic_temperature, work
        )
        crooks_dev = max(crooks.distribution_deviation, crooks.microstate_deviation)
        leakage = work.weighted_leakage + crooks.floored_mass

    is_cosmo = cfg.scenario == "cosmology"
    return {
        "scenario": cfg.scenario,
        "k": cfg.momentum if is_cosmo else None,
        "m": cfg.mass if is_cosmo else None,
        "epsilon": cfg.epsilon if is_cosmo else None,
        "sigma": cfg.sigma if is_cosmo else None,
        "T": cfg.temperature,
        "cutoff": cfg.cutoff,
        "z": channel.z,
        "omega_in": channel.omega_in,
        "omega_out": channel.omega_out,
        "mean_work": work.mean_work,
        "adiabatic_work": work.adiabatic_work,
        "inner_friction": work.inner_friction,
        "mean_created": work.mean_created,
        "mean_entropy": s_mean,
        "kl_classical": kl,
        "kl_quantum": k_quantum,
        "crooks_dev": crooks_dev,
        "leakage": leakage,
        "flags": ";".join(["ok"] + flags),
    }


def _sweep_worker(cfg: RunConfig) -> dict:
    try:
        row = run_simulation(cfg)
        row["error"] = ""
        return row
    except Exception as exc:  # per-row capture: a bad point must not abort the sweep
        is_cosmo = cfg.scenario == "cosmology"
        row = {name: None for name in REPORT_FIELDS}
        row.update(
            scenario=cfg.scenario,
            k=cfg.momentum if is_cosmo else None,
            m=cfg.mass if is_cosmo else None,
            epsilon=cfg.epsilon if is_cosmo else None,
            sigma=cfg.sigma if is_cosmo else None,
            T=cfg.temperature,
            cutoff=cfg.cutoff,
            flags="error",
            error=f"{type(exc).__name__}: {exc}",
        )
        return row


def sweep_workers() -> int:
    env = os.environ.get("COSMOFLUX_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError as exc:
            raise ConfigError(f"COSMOFLUX_THREADS must be an integer: {env!r}") from exc
        if n < 1:
            raise ConfigError(f"COSMOFLUX_THREADS must be >= 1, got {n}")
        return n
    return min(4, os.cpu_count() or 1)


def run_sweep(sweep: SweepConfig) -> list[dict]:
    """Evaluate the grid concurrently; rows assembled in grid order."""
    configs = []
    for value in sweep.grid:
        try:
            configs.append(sweep.base.replace(**{sweep.axis: value}))
        except ConfigError:
            configs.append(None)
    rows: list[dict | None] = [None] * len(configs)
    with ThreadPoolExecutor(max_workers=sweep_workers()) as pool:
        futures = {}
        for i, cfg in enumerate(configs):
            if cfg is None:
                row = {name: None for name in REPORT_FIELDS}
                row.update(
                    scenario=sweep.base.scenario,
                    flags="error",
                    error=f"ConfigError: invalid {sweep.axis} value {sweep.grid[i]}",
                )
                rows[i] = row
            else:
                futures[pool.submit(_sweep_worker, cfg)] = i
        for future, i in futures.items():
            rows[i] = future.result()
    return rows  # type: ignore[return-value]


def round_sig(value: float, digits: int) -> float:
    """Round to a fixed significant-digit count for stable serialization."""
    if value == 0.0 or not np.isfinite(value):
        return float(value)
    return float(f"{value:.{digits - 1}e}")


def _rounded(row: dict, precision: int) -> dict:
    out = {}
    for key, value in row.items():
        if isinstance(value, float):
            out[key] = round_sig(value, precision)
        else:
            out[key] = value
    return out


def render_json(rows: dict | list[dict], precision: int) -> str:
    if isinstance(rows, dict):
        payload = _rounded(rows, precision)
    else:
        payload = [_rounded(r, precision) for r in rows]
    return json.dumps(payload, indent=2) + "\n"


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render_csv(rows: dict | list[dict], precision: int) -> str:
    if isinstance(rows, dict):
        rows = [rows]
    columns = list(REPORT_FIELDS)
    if any("error" in r for r in rows):
        columns.append("error")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        rounded = _rounded(row, precision)
        writer.writerow([_csv_cell(rounded.get(c)) for c in columns])
    return buf.getvalue()


# Canonical reference point used by the invariant battery.
def canonical_config() -> RunConfig:
    return RunConfig(
        scenario="direct-z",
        z=float(np.arctanh(0.5)),
        omega_in=1.0,
        omega_out=2.0,
        temperature=1.0,
        cutoff=40,
        leakage_tolerance=1e-8,
    )


def _battery_point(cfg: RunConfig) -> list[tuple[str, bool, str]]:
    """Identity checks at one configuration; returns (name, ok, detail)."""
    items: list[tuple[str, bool, str]] = []
    channel, _flags = resolve_channel(cfg)
    spec = TruncationSpec(cfg.cutoff, cfg.leakage_tolerance)
    kernel = transition_kernel(channel.z, spec)

    P = kernel.probabilities
    sym = float(np.max(np.abs(P - P.T)))
    items.append(("kernel-symmetry", sym <= 1e-12, f"max |p(m|n)-p(n|m)| = {sym:.3e}"))

    occ = np.arange(cfg.cutoff + 1)
    tot = (occ[:, None] + occ[None, :]).reshape(-1)
    dif = (occ[:, None] - occ[None, :]).reshape(-1)
    off_sector = dif[:, None] != dif[None, :]
    odd_parity = ((tot[:, None] - tot[None, :]) % 2) != 0
    v1 = float(np.max(np.abs(P[off_sector]))) if off_sector.any() else 0.0
    v2 = float(np.max(np.abs(P[odd_parity]))) if odd_parity.any() else 0.0
    items.append(("difference-conservation", v1 == 0.0, f"max off-sector mass = {v1:.3e}"))
    items.append(("parity-support", v2 == 0.0, f"max odd-change mass = {v2:.3e}"))

    vac_leak = fock.vacuum_column_leakage(channel.z, cfg.cutoff)
    items.append((
        "vacuum-column-budget",
        vac_leak <= cfg.leakage_tolerance,
        f"vacuum leakage = {vac_leak:.3e} (tol {cfg.leakage_tolerance:.1e})",
    ))

    ch = np.cosh(channel.z)
    sh = np.sinh(channel.z)
    bog = abs(ch * ch - sh * sh - 1.0)
    items.append(("bogoliubov-identity", bog <= 1e-12, f"|cosh^2-sinh^2-1| = {bog:.3e}"))

    thermal = thermal_distribution(cfg.temperature, channel.omega_in, spec)
    work = inner_friction(kernel, thermal, channel.omega_in, channel.omega_out)
    closed = thermo.mean_created_closed_form(
        channel.z, cfg.temperature, channel.omega_in
    )
    gap = abs(work.mean_created - closed)
    tol = max(1e-6, work.truncation_bound / max(channel.omega_out, 1e-300))
    items.append((
        "created-closed-form",
        gap <= tol,
        f"|<n_c> - closed| = {gap:.3e} (tol {tol:.1e})",
    ))
    items.append((
        "second-law",
        work.inner_friction >= -work.truncation_bound,
        f"W_fric = {work.inner_friction:.6e} >= -{work.truncation_bound:.3e}",
    ))

    if not thermal.is_vacuum:
        fwd = fluctuation.forward_joint(kernel, thermal)
        rev = fluctuation.reverse_joint(kernel, thermal)
        p_e, p_c = fluctuation.entropy_distributions(fwd, rev, channel, cfg.temperature)
        crooks = fluctuation.crooks_deviation(p_e, p_c, fwd, rev)
        items.append((
            "crooks-microstate",
            crooks.microstate_deviation <= 1e-10,
            f"residual = {crooks.microstate_deviation:.3e}",
        ))
        items.append((
            "crooks-distribution",
            crooks.distribution_deviation <= 1e-8,
            f"deviation = {crooks.distribution_deviation:.3e}",
        ))
        s_mean, kl = fluctuation.mean_entropy_and_kl(p_e, p_c)
        items.append((
            "kl-identity",
            abs(s_mean - kl) <= 1e-8 and s_mean >= -1e-10,
            f"|<s>-KL| = {abs(s_mean - kl):.3e}, <s> = {s_mean:.6e}",
        ))
        ift = fluctuation.integral_fluctuation_defect(p_e)
        items.append(("integral-fluctuation", ift <= 1e-6, f"|E[e^-s]-1| = {ift:.3e}"))
        try:
            rec = fluctuation.entropy_friction_identity(work, s_mean)
            ok = True
            detail = (
                f"residuals = {rec['residual_friction']:.3e}, "
                f"{rec['residual_creation']:.3e}"
            )
        except VerificationError as exc:
            ok, detail = False, str(exc)
        items.append(("entropy-friction-chain", ok, detail))
        try:
            K = fluctuation.quantum_relative_entropy(
                thermal, kernel, work.adiabatic_temperature, work
            )
            resid = abs(work.adiabatic_temperature * K - work.inner_friction)
            ok = True
            detail = f"|T_ad K - W_fric| = {resid:.3e}"
        except VerificationError as exc:
            ok, detail = False, str(exc)
        items.append(("quantum-relative-entropy", ok, detail))
    return items


def _battery_global() -> list[tuple[str, bool, str]]:
    """Point-independent checks: oracles, scenario limits, closed forms."""
    items: list[tuple[str, bool, str]] = []
    z_canon = float(np.arctanh(0.5))

    spec40 = TruncationSpec(40, 1e-2)
    worst = 0.0
    for z in (z_canon, 1.0, 1.2):
        S = fock.squeeze_operator_oracle(z, spec40)
        worst = max(worst, float(np.max(np.abs(S.T @ S - np.eye(S.shape[0])))))
    items.append(("oracle-orthogonality", worst <= 1e-12, f"max |S^T S - I| = {worst:.3e}"))

    # Equivalence measured at a box large enough that states up to index 8
    # keep their image inside; the spectral route reflects mass otherwise.
    worst = 0.0
    for z in (0.25, z_canon, 1.0):
        for d in range(9):
            size = 97 - d
            ana = fock.sector_amplitudes(z, d, 9)
            spe = fock.sector_spectral(z, d, size)[:9, :9]
            worst = max(worst, float(np.max(np.abs(ana - spe))))
    items.append(("oracle-equivalence", worst <= 1e-10, f"max |analytic - spectral| = {worst:.3e}"))

    tau = 0.5
    col = fock.sector_amplitudes(z_canon, 0, 12)[:, 0] ** 2
    expect = (1.0 - tau * tau) * tau ** (2 * np.arange(12))
    rel = float(np.max(np.abs(col[:11] - expect[:11]) / expect[:11]))
    items.append(("vacuum-law", rel <= 1e-9, f"max relative error = {rel:.3e}"))

    p = CosmologyParams(epsilon=1.0, sigma=1.0, mass=0.0, momentum=1.0)
    w_in, w_out = spacetime.asymptotic_frequencies(p)
    z0 = spacetime.squeeze_from_cosmology(w_in, w_out, p.sigma)
    items.append(("massless-null", z0 == 0.0, f"z(m=0) = {z0!r}"))

    w_in, w_out = np.sqrt(2.0), 2.0
    sudden = abs(
        np.tanh(spacetime.squeeze_from_cosmology(w_in, w_out, 1e6))
        - (w_out - w_in) / (w_out + w_in)
    )
    items.append(("sudden-limit", sudden <= 1e-9, f"deviation = {sudden:.3e}"))

    grid = np.geomspace(1e-3, 1e3, 7)
    zs = [spacetime.squeeze_from_cosmology(w_in, w_out, s) for s in grid]
    monotone = all(a <= b for a, b in zip(zs, zs[1:])) and zs[0] <= 1e-12
    items.append(("quasistatic-limit", monotone, f"z(sigma->0) = {zs[0]:.3e}, monotone = {monotone}"))

    wad = thermo.adiabatic_work(1.0, 1.0, 2.0)
    gap = abs(wad - 2.1639534137386528)
    items.append(("adiabatic-work-closed-form", gap <= 1e-12, f"|W_ad - ref| = {gap:.3e}"))

    cfg0 = canonical_config().replace(z=0.0)
    ch0, _ = resolve_channel(cfg0)
    spec0 = TruncationSpec(cfg0.cutoff, cfg0.leakage_tolerance)
    kern0 = transition_kernel(0.0, spec0)
    th0 = thermal_distribution(cfg0.temperature, ch0.omega_in, spec0)
    w0 = inner_friction(kern0, th0, ch0.omega_in, ch0.omega_out)
    adiabatic_gap = abs(w0.mean_work - w0.adiabatic_work)
    items.append((
        "adiabatic-consistency",
        adiabatic_gap <= 1e-12 and w0.mean_created == 0.0,
        f"|<W> - W_ad| = {adiabatic_gap:.3e}, <n_c> = {w0.mean_created!r}",
    ))
    return items


def verify_invariants(cfg: RunConfig | None = None) -> tuple[list[str], int]:
    """Run the invariant battery; returns printable lines and failure count.

    Leakage and numeric-instability errors propagate to the caller: they
    mean the configured point cannot be evaluated at all, which is a
    budget problem rather than a failed identity.
    """
    canon = canonical_config()
    if cfg is None:
        cfg = canon
    sections: list[tuple[str, list[tuple[str, bool, str]]]] = []
    sections.append((f"configured point (scenario={cfg.scenario})", _battery_point(cfg)))
    if cfg.to_mapping() != canon.to_mapping():
        sections.append(("canonical point", _battery_point(canon)))
    sections.append(("global", _battery_global()))

    lines: list[str] = []
    failures = 0
    for title, items in sections:
        lines.append(f"[{title}]")
        for name, ok, detail in items:
            status = "PASS" if ok else "FAIL"
            if not ok:
                failures += 1
            lines.append(f"  {status}  {name:28s} {detail}")
    lines.append(
        f"{failures} failure(s) out of "
        f"{sum(len(items) for _, items in sections)} checks"
    )
    return lines, failures
