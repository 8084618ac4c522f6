"""Compare the sequential PS sampler with the permanent-normalized target.

For random positive DSMs this prints the total-variation distance between
the empirical PS distribution and prod(d)/perm(D).
"""

import argparse

import numpy as np

from dsm_eda.dsm import DoublyStochasticMatrix
from dsm_eda.sampling import draw_many, pmf_table, rng_stream


def sinkhorn(m, iters=10_000):
    for _ in range(iters):
        m = m / m.sum(axis=1, keepdims=True)
        m = m / m.sum(axis=0, keepdims=True)
    return m


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=4)
    ap.add_argument("--models", type=int, default=5)
    ap.add_argument("--draws", type=int, default=200_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    for k in range(args.models):
        d = DoublyStochasticMatrix(sinkhorn(rng.uniform(0.05, 1.0, (args.n, args.n))))
        target = pmf_table(d)
        counts = {}
        for s in draw_many("ps", d, rng_stream(args.seed, k), args.draws):
            counts[s] = counts.get(s, 0) + 1
        tv = 0.5 * sum(abs(counts.get(s, 0) / args.draws - p) for s, p in target.items())
        print(f"model {k}: tv = {tv:.4f}")


if __name__ == "__main__":
    main()
