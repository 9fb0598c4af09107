#!/usr/bin/env python3
"""Run the generator-degree bound sweep over all small graphs.

For every isomorphism class up to ``--nmax`` vertices this computes the
minimal generator degrees of the automorphism group's invariant ring and
checks them against the two conjectured bounds (vertex count; largest
vertex orbit).  Results go to a CSV table and, optionally, a JSON report
with the per-graph detail.

Typical timings on one core: ``--nmax 5`` with full certification runs
in about a second; ``--nmax 6`` (capped at degree 2n) takes a couple of
minutes; ``--nmax 7`` is the long-running opt-in sweep (1044 classes).

Exit code 3 signals a counterexample, so pipelines can alarm on it.
"""

import argparse
import json
import sys
import time

from invlayers import __version__
from invlayers.budgets import Budgets
from invlayers.cli import sweep_exit_code
from invlayers.invariant_ring import report_to_json_dict, sweep, write_reports_csv


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--nmax", type=int, default=5, help="largest vertex count")
    parser.add_argument(
        "--cap",
        default="auto",
        help="degree cap policy: full, 2n, an integer, or auto "
        "(full through n=5, 2n beyond)",
    )
    parser.add_argument(
        "--arith",
        choices=["auto", "exact", "modular"],
        default="auto",
        help="rank arithmetic (auto = exact through n=5, modular beyond)",
    )
    parser.add_argument("--jobs", type=int, default=None, help="worker processes")
    parser.add_argument("--out-csv", default=None, help="CSV path (default sweep_n<N>.csv)")
    parser.add_argument("--json-out", default=None, help="optional JSON report path")
    args = parser.parse_args(argv)

    cap = args.cap
    if cap == "auto":
        cap = "full" if args.nmax <= 5 else "2n"
    elif cap not in ("full", "2n"):
        cap = int(cap)
    csv_path = args.out_csv or f"sweep_n{args.nmax}.csv"

    start = time.perf_counter()
    result = sweep(
        args.nmax, cap, arithmetic=args.arith, budget=Budgets.from_env(), jobs=args.jobs
    )
    elapsed = time.perf_counter() - start

    write_reports_csv(result.reports, csv_path)
    if args.json_out:
        payload = {
            "version": __version__,
            "config": {
                "nmax": args.nmax,
                "cap": cap,
                "arith": args.arith,
                "jobs": args.jobs,
            },
            "elapsed_seconds": elapsed,
            "summary": result.summary,
            "reports": [report_to_json_dict(r) for r in result.reports],
        }
        with open(args.json_out, "w", encoding="utf-8") as fp:
            json.dump(payload, fp, indent=2, sort_keys=True)
            fp.write("\n")

    print(f"{len(result.reports)} graph classes in {elapsed:.1f}s -> {csv_path}")
    for n in sorted(result.summary):
        entry = result.summary[n]
        a, b = entry["a"], entry["b"]
        print(
            f"  n={n}: {entry['classes']} classes, "
            f"A true={a['true']} capped={a['capped']} false={a['false']}, "
            f"B true={b['true']} capped={b['capped']} false={b['false']}"
        )
    code = sweep_exit_code(result.reports)
    if code:
        print("COUNTEREXAMPLE FOUND — inspect the CSV for rows with 'false'", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
