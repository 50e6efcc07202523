"""Query-count exponents across the nearly frustration-free range.

For mu <= -1 + 2 delta^y the two-stage method needs ~ delta^(y/2 - 1)
queries. Three families cover y = 0 (Grover), y = 1/2 (quintic map with
x0 = delta^(1/3)) and y = 1 (quintic with x0 = delta, and a compressed
defect chain). Slopes are fitted after dividing out the log factor.
"""

import argparse

from nffprep import SweepConfig
from nffprep.bench import sweep_details

parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
parser.add_argument("--out", help="directory for per-family CSV/JSON files")
args = parser.parse_args()

pow2 = lambda lo, hi: [2.0**-j for j in range(lo, hi + 1)]  # noqa: E731
configs = {
    "grover": SweepConfig("grover", pow2(3, 9)),
    "quintic_third": SweepConfig("quintic", pow2(4, 10), nu=1 / 3),
    "quintic_one": SweepConfig("quintic", pow2(3, 9), nu=1.0),
    "defect_chain": SweepConfig("defect_chain", pow2(3, 9)),
}

for name, cfg in configs.items():
    if args.out:
        cfg = SweepConfig(**{**cfg.echo(), "output_path": f"{args.out}/{name}.csv"})
    fit, rows, info = sweep_details(cfg, "queries")
    raw = info["raw"]["slope"]
    print(f"\n{name}: y={cfg.y:.3f} expected {cfg.expected_slope:+.3f} fitted {fit.slope:+.3f} (raw {raw:+.3f})")
    for row in rows:
        print(f"  delta={row['delta']:.6f} degree={row['degree']:6d} queries={row['queries']:10d}")
