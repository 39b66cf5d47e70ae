"""Command line interface: simulate, sweep, verify.

Every config key doubles as a CLI flag so a file can be overridden per
key. Unknown keys fail closed. Exit codes: 0 success, 1 config error,
2 verification failure, 3 leakage or numeric-instability error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import (
    ConfigError,
    CosmofluxError,
    EntropyUndefinedError,
    LeakageError,
    NumericError,
    VerificationError,
)
from .report import (
    RunConfig,
    SweepConfig,
    canonical_config,
    render_csv,
    render_json,
    run_simulation,
    run_sweep,
    verify_invariants,
)

CONFIG_FLAGS = (
    "scenario", "momentum", "mass", "epsilon", "sigma", "omega",
    "acceleration", "mass_bh", "z", "omega_in", "omega_out",
    "temperature", "cutoff", "leakage_tolerance", "output", "precision",
)
SWEEP_FLAGS = ("axis", "grid", "grid_min", "grid_max", "grid_count", "grid_scale")


def _add_common(parser: argparse.ArgumentParser, sweep: bool = False) -> None:
    parser.add_argument("--config", metavar="PATH", help="flat JSON config file")
    parser.add_argument("--outfile", metavar="PATH", help="write the report here instead of stdout")
    parser.add_argument("--quiet", action="store_true", help="suppress non-essential output")
    for key in CONFIG_FLAGS:
        parser.add_argument(f"--{key}", dest=key, default=None, metavar="V")
    if sweep:
        for key in SWEEP_FLAGS:
            parser.add_argument(f"--{key}", dest=key, default=None, metavar="V")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cosmoflux",
        description="squeezing-channel work and entropy statistics",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    _add_common(sub.add_parser("simulate", help="run one configuration"))
    _add_common(sub.add_parser("sweep", help="run a one-axis grid"), sweep=True)
    _add_common(sub.add_parser("verify", help="run the invariant battery"))
    return parser


def _load_mapping(args: argparse.Namespace, sweep: bool = False) -> dict:
    mapping: dict = {}
    if args.config:
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                mapping = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file is not valid JSON: {exc}") from exc
        if not isinstance(mapping, dict):
            raise ConfigError("config file must hold a single JSON object")
    keys = CONFIG_FLAGS + (SWEEP_FLAGS if sweep else ())
    for key in keys:
        value = getattr(args, key, None)
        if value is not None:
            if key == "grid":
                try:
                    mapping[key] = [float(v) for v in str(value).split(",") if v != ""]
                except ValueError as exc:
                    raise ConfigError(f"--grid expects comma-separated numbers: {exc}") from exc
            else:
                mapping[key] = value
    return mapping


def _emit(text: str, outfile: str | None) -> None:
    if outfile:
        with open(outfile, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_simulate(args: argparse.Namespace) -> int:
    cfg = RunConfig.from_mapping(_load_mapping(args))
    row = run_simulation(cfg)
    if cfg.output == "csv":
        text = render_csv(row, cfg.precision)
    else:
        text = render_json(row, cfg.precision)
    _emit(text, args.outfile)
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    sweep = SweepConfig.from_mapping(_load_mapping(args, sweep=True))
    rows = run_sweep(sweep)
    if sweep.base.output == "csv":
        text = render_csv(rows, sweep.base.precision)
    else:
        text = render_json(rows, sweep.base.precision)
    _emit(text, args.outfile)
    n_failed = sum(1 for r in rows if r.get("error"))
    if n_failed and not args.quiet:
        print(f"{n_failed} of {len(rows)} grid points failed", file=sys.stderr)
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    mapping = _load_mapping(args)
    cfg = RunConfig.from_mapping(mapping) if mapping else canonical_config()
    lines, failures = verify_invariants(cfg)
    text = ("\n".join(lines[-1:] if args.quiet else lines)) + "\n"
    _emit(text, args.outfile)
    if failures:
        raise VerificationError(f"{failures} invariant check(s) failed")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # bad command line is a config error, not a crash
        return 0 if exc.code in (0, None) else 1
    handlers = {
        "simulate": _cmd_simulate,
        "sweep": _cmd_sweep,
        "verify": _cmd_verify,
    }
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except (VerificationError, EntropyUndefinedError) as exc:
        print(f"verification error: {exc}", file=sys.stderr)
        return 2
    except (LeakageError, NumericError) as exc:
        print(f"numerical budget error: {exc}", file=sys.stderr)
        return 3
    except CosmofluxError as exc:  # any future subtype: fail closed, not a crash
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
