"""Write a CSV and a JSON scaling report per built-in program and strategy.

    python3 scripts/run_benches.py --out results/ [--n 8:128:8] [--jobs 4]
"""

import argparse
import json
from pathlib import Path

from pbpc.harness.bench import bench_scaling, parse_range
from pbpc.harness.corpus import builtin_example

PLAN = [
    ("pairs", "merge"),
    ("qft", "merge"),
    ("add", "merge"),
    ("sum(3)", "merge"),
    ("chained(1)", "merge"),
    ("rec", "swap"),
    ("skew", "swap"),
]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="results")
    ap.add_argument("--n", default="8:128:8")
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--check", action="store_true", help="assert orthogonality (slow on chained/sum)")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    ns = parse_range(args.n)
    for ident, strategy in PLAN:
        rep = bench_scaling(builtin_example(ident), strategy, ns, ident, jobs=args.jobs, check_orthogonality=args.check)
        stem = out / f"{ident.replace('(', '').replace(')', '')}_{strategy}"
        stem.with_suffix(".csv").write_text(rep.to_csv())
        stem.with_suffix(".json").write_text(json.dumps(rep.to_dict(timing=True), indent=2) + "\n")
        slope = "n/a" if rep.slope is None else f"{rep.slope:.3f}"
        print(f"{ident:<12} {strategy:<6} rows={len(rep.rows):<3} skipped={len(rep.skipped):<3} slope={slope}")


if __name__ == "__main__":
    main()
