"""Fitted size exponents of merge-compiled circuits next to the naive baseline.

    python3 scripts/size_table.py [--max-n 128] [--jobs 4] [--out results/size_table.json]
"""

import argparse
import json
from pathlib import Path

from pbpc.harness.bench import bench_scaling
from pbpc.harness.corpus import builtin_example

# program, expected exponent of the merge-compiled size, sizes
ROWS = [
    ("qft", 2.0, lambda hi: range(8, hi + 1, 8)),
    ("add", 1.0, lambda hi: [n for n in range(7, hi + 1) if n % 3 == 1]),
    ("chained(1)", 1.0, lambda hi: range(8, hi + 1, 4)),
    ("chained(2)", 1.0, lambda hi: range(8, hi + 1, 4)),
    ("sum(2)", 1.0, lambda hi: range(8, hi + 1, 4)),
    ("sum(3)", 1.0, lambda hi: range(8, hi + 1, 4)),
    ("pairs", 1.0, lambda hi: range(8, hi + 1, 4)),
]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-n", type=int, default=128)
    ap.add_argument("--baseline-max-n", type=int, default=64)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out")
    args = ap.parse_args()

    table = []
    print(f"{'program':<12} {'expected':>8} {'merge':>7} {'baseline':>9}")
    for ident, expected, sizes in ROWS:
        p = builtin_example(ident)
        merge = bench_scaling(p, "merge", sizes(args.max_n), ident, jobs=args.jobs)
        base = bench_scaling(p, "sequential", sizes(args.baseline_max_n), ident, count_mode=True, jobs=args.jobs)
        table.append({"program": ident, "expected": expected, "merge_slope": merge.slope, "baseline_slope": base.slope})
        print(f"{ident:<12} {expected:>8.1f} {merge.slope:>7.3f} {base.slope:>9.3f}")
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        Path(args.out).write_text(json.dumps(table, indent=2) + "\n")


if __name__ == "__main__":
    main()
