"""Sweep the expansion rate sigma and write a CSV of the observables.

Slow expansion is adiabatic (no pairs, no friction); fast expansion
approaches the sudden limit where creation saturates. The sweep walks a
log grid between the two regimes for a unit-mass, unit-momentum mode.
"""

import argparse

from cosmoflux import RunConfig, SweepConfig, render_csv, run_sweep


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sigma-min", type=float, default=0.05)
    parser.add_argument("--sigma-max", type=float, default=50.0)
    parser.add_argument("--count", type=int, default=13)
    parser.add_argument("--outfile", default=None)
    args = parser.parse_args()

    base = RunConfig(
        scenario="cosmology",
        momentum=1.0,
        mass=1.0,
        epsilon=1.0,
        sigma=1.0,
        temperature=1.0,
        output="csv",
    )
    sweep = SweepConfig.from_mapping(
        {
            **base.to_mapping(),
            "axis": "sigma",
            "grid_min": args.sigma_min,
            "grid_max": args.sigma_max,
            "grid_count": args.count,
            "grid_scale": "log",
        }
    )
    text = render_csv(run_sweep(sweep), base.precision)
    if args.outfile:
        with open(args.outfile, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        print(text, end="")


if __name__ == "__main__":
    main()
