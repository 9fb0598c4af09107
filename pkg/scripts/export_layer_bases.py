#!/usr/bin/env python3
"""Export indicator-tensor basis files for a family of typed node sets.

Writes one JSON basis file per requested (order, sizes) combination by
driving the ``basis`` subcommand, so the files are byte-identical to
what the command line produces.  Useful for priming downstream layer
implementations with the exact invariant bases.
"""

import argparse
import pathlib
import sys

from invlayers.cli import main as cli_main


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--k", type=int, nargs="+", default=[1, 2], help="tensor orders")
    parser.add_argument(
        "--sizes",
        action="append",
        default=None,
        help="comma list of type sizes; repeat the flag for more node sets",
    )
    parser.add_argument("--outdir", default="bases", help="output directory")
    args = parser.parse_args(argv)

    sizes_list = args.sizes or ["3", "2,1", "2,2"]
    outdir = pathlib.Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    for k in args.k:
        for sizes in sizes_list:
            name = f"basis_k{k}_sizes{sizes.replace(',', '-')}.json"
            path = outdir / name
            code = cli_main(
                ["basis", "--k", str(k), "--sizes", sizes, "--out", str(path)]
            )
            if code != 0:
                print(f"failed on k={k} sizes={sizes} (exit {code})", file=sys.stderr)
                return code
    return 0


if __name__ == "__main__":
    sys.exit(main())
