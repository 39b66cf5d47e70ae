"""Evaluate the formal horizon analogies: uniform acceleration, black hole.

Both map a horizon temperature to an effective squeezing parameter via
tanh z. The in/out frequencies coincide, so no work is done on average
and the interest is in the created-pair and entropy statistics; reports
carry the formal-horizon flag because the single-mode-pair treatment is
an analogy, not a derivation, in these geometries.
"""

from cosmoflux import RunConfig, render_json, run_simulation


def main() -> None:
    rows = []
    for mapping in (
        {
            "scenario": "unruh",
            "omega": 1.0,
            "acceleration": 3.141592653589793,
            "temperature": 1.0,
        },
        {
            "scenario": "blackhole",
            "omega": 0.05,
            "mass_bh": 1.0,
            "temperature": 0.05,
        },
    ):
        cfg = RunConfig.from_mapping(mapping)
        rows.append(run_simulation(cfg))
    print(render_json(rows, 12), end="")


if __name__ == "__main__":
    main()
