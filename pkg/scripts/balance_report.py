#!/usr/bin/env python3
"""Print the table-size / iteration-count / accuracy trade-off.

For every step candidate that divides the range bound, reports the table
size sup/stp, the minimal iteration count n, the predicted error bound
stp/2**n + n*delta, and the worst error observed over sampled grid
inputs (exact verdict, displayed as a float).
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from certisqrt.cli import load_profile  # noqa: E402
from certisqrt.exact import rat_str  # noqa: E402
from certisqrt.fixarith import FixVal  # noqa: E402
from certisqrt.verify import balance_sweep  # noqa: E402

REPO = Path(__file__).resolve().parent.parent


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--profile",
                        default=str(REPO / "fixtures/demo_profile.json"))
    parser.add_argument("--max-size", type=int, default=256,
                        help="skip steps that would need a larger table")
    args = parser.parse_args()

    fix, _fprof, step = load_profile(args.profile)
    candidates = [
        FixVal(count, fix)
        for count in range(step.eps.count, fix.sup_count + 1)
        if fix.sup_count % count == 0 and count % step.eps.count == 0
        and fix.sup_count // count <= args.max_size
    ]
    rows = balance_sweep(fix, step.eps, candidates)
    print(f"{'stp':>10} {'size':>6} {'n':>3} {'predicted':>12} "
          f"{'worst_err':>12} {'ok':>3}")
    for r in rows:
        if not r.valid:
            print(f"{rat_str(r.stp.value):>10} {'invalid':>6}")
            continue
        print(f"{rat_str(r.stp.value):>10} {r.table_size:>6} {r.n:>3} "
              f"{str(r.predicted_bound):>12} {r.worst_err_display:>12.3g} "
              f"{'yes' if r.all_within_predicted else 'NO':>3}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
