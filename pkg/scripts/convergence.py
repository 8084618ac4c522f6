"""Averaged convergence curves for PS and AS on one instance, with a trend test.

Example:
    python3 scripts/convergence.py data/qaplib/tai20a.dat --out runs/conv
"""

import argparse
import sys
from pathlib import Path

import numpy as np
from scipy import stats

from dsm_eda import cli


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("instance")
    ap.add_argument("--reps", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="runs/conv")
    args = ap.parse_args(argv)

    rc = cli.main(["-v", "convergence", "--instance", args.instance, "--reps", str(args.reps),
                   "--seed", str(args.seed), "--out", args.out])
    if rc:
        return rc
    name = Path(args.instance).stem
    print("sampler\titerations\tfirst\tlast\trel_improvement\tkendall_tau\tp_value")
    for sampler in ("ps", "as"):
        lines = (Path(args.out) / f"convergence__{name}__{sampler}.csv").read_text().splitlines()[1:]
        mean = np.array([float(ln.split(",")[1]) for ln in lines])
        tau, p = stats.kendalltau(np.arange(len(mean)), mean)
        gain = (mean[0] - mean[-1]) / mean[0]
        print(f"{sampler}\t{len(mean)}\t{mean[0]:.1f}\t{mean[-1]:.1f}\t{gain:.4f}\t{tau:.3f}\t{p:.2e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
