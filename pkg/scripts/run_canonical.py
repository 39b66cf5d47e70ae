"""Run the canonical reference point and print its JSON report.

The point (tanh z = 1/2, omega 1 -> 2, T = 1, cutoff 40) exercises every
observable at once: friction, pair creation, the entropy distributions
and both relative entropies. Useful as a quick end-to-end smoke check.
"""

from cosmoflux import canonical_config, render_json, run_simulation


def main() -> None:
    cfg = canonical_config()
    row = run_simulation(cfg)
    print(render_json(row, cfg.precision), end="")


if __name__ == "__main__":
    main()
