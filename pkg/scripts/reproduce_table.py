"""Median relative deviation of DSM-EDA on Taillard instances.

Example:
    python3 scripts/reproduce_table.py --qaplib data/qaplib --instances tai15a tai20a --out runs/table
"""

import argparse
import sys
from pathlib import Path

from dsm_eda import cli


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--qaplib", default="data/qaplib", help="directory holding <name>.dat files")
    ap.add_argument("--instances", nargs="+", default=["tai15a", "tai20a"])
    ap.add_argument("--samplers", nargs="+", default=["ps"], choices=["ps", "as", "gs"])
    ap.add_argument("--reps", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="runs/table")
    args = ap.parse_args(argv)

    argv = ["-v", "solve", "--reps", str(args.reps), "--seed", str(args.seed), "--out", args.out]
    for name in args.instances:
        argv += ["--instance", str(Path(args.qaplib) / f"{name}.dat")]
    for s in args.samplers:
        argv += ["--sampler", s]
    rc = cli.main(argv)
    if rc == 0:
        print((Path(args.out) / "summary.tsv").read_text(), end="")
    return rc


if __name__ == "__main__":
    sys.exit(main())
