"""Metropolis sampler at level N: empirical ρ₁ against the kernel diagonal with batch-means bands.

    python3 scripts/sampler_check.py --n 3 --gp 0.5 --gm 0.5 --count 40000
"""

import argparse

import numpy as np

from gtplancherel.kernel import SpacetimePoint, kernel_K
from gtplancherel.sampler import SamplerConfig, batch_means_stderr, mcmc_sample
from gtplancherel.weights import PlancherelParams


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=3)
    ap.add_argument("--gp", type=float, default=0.5)
    ap.add_argument("--gm", type=float, default=0.5)
    ap.add_argument("--count", type=int, default=40_000)
    ap.add_argument("--burn-in", type=int, default=2_000)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    prm = PlancherelParams(args.gp, args.gm)
    cfg = SamplerConfig(args.n, prm, steps=args.count + args.burn_in, burn_in=args.burn_in, seed=args.seed)
    samples = mcmc_sample(cfg, args.count)
    pos = np.array([[s.parts[i] - (i + 1) for i in range(args.n)] for s in samples])
    print("x,empirical,kernel,z")
    for x in range(int(pos.min()), int(pos.max()) + 1):
        ind = (pos == x).any(axis=1).astype(float)
        rho = kernel_K(SpacetimePoint(args.n, x), SpacetimePoint(args.n, x), prm)
        se = batch_means_stderr(ind)
        z = abs(ind.mean() - rho) / se if se > 0 else float("nan")
        print(f"{x},{ind.mean():.5f},{rho:.5f},{z:.2f}")


if __name__ == "__main__":
    main()
