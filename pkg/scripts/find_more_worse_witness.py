#!/usr/bin/env python3
"""Search grid inputs for a witness that more iterations can be worse.

Scans every grid value y in (1, sup/2] of the demo profile, sweeps the
iteration count, and reports inputs where the exact error grows from one
count to the next while every row still meets its error bound.  The first
hit is frozen into fixtures/more_worse_witness.json, which the acceptance
suite re-verifies.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from certisqrt.cli import load_profile  # noqa: E402
from certisqrt.lut import build_root_table  # noqa: E402
from certisqrt.verify import grid_values, monotonicity_probe  # noqa: E402

REPO = Path(__file__).resolve().parent.parent


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--profile",
                        default=str(REPO / "fixtures/demo_profile.json"))
    parser.add_argument("--n-min", type=int, default=1)
    parser.add_argument("--n-max", type=int, default=6)
    parser.add_argument("--write", action="store_true",
                        help="freeze the first witness into fixtures/")
    args = parser.parse_args()

    fix, _fprof, step = load_profile(args.profile)
    table = build_root_table(fix, step.stp)
    first = None
    hits = 0
    for y in grid_values(fix, fix.sup_value / 2):
        rows = monotonicity_probe(y, step.eps, table, args.n_min, args.n_max)
        increases = [r.n for r in rows if r.error_increased]
        if increases and all(r.within_bound for r in rows):
            hits += 1
            if first is None:
                first = (y, increases)
                print(f"witness: y={y} increases at n={increases}")
    print(f"{hits} witnesses in (1, {fix.sup_value / 2}]")
    if first is None:
        print("no witness found; try another profile or a wider n range")
        return 1
    if args.write:
        y, increases = first
        doc = {
            "description": "grid input whose fix-point Newton error grows "
                           "when the iteration count grows, while every row "
                           "stays inside the eps/2 + n*delta bound",
            "profile": Path(args.profile).name,
            "y_count": y.count,
            "n_min": args.n_min,
            "n_max": args.n_max,
            "expect_increase_at": increases,
        }
        out = REPO / "fixtures/more_worse_witness.json"
        out.write_text(json.dumps(doc, indent=2) + "\n")
        print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
