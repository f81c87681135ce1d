"""One-point density at fixed γ: finite N against (1/π)·arccos(β/(2√γ⁺)).

    python3 scripts/density_corollary.py --gp 1 --Ns 100,400
"""

import argparse

import numpy as np

from gtplancherel.experiments import density_fixed_gamma_finite
from gtplancherel.shape import density_fixed_gamma
from gtplancherel.weights import PlancherelParams


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--gp", type=float, default=1.0)
    ap.add_argument("--gm", type=float, default=1.0)
    ap.add_argument("--Ns", default="100,400")
    ap.add_argument("--betas", default="-1.5,-0.5,0,0.5,1.5")
    args = ap.parse_args()

    Ns = [int(v) for v in args.Ns.split(",")]
    betas = [float(v) for v in args.betas.split(",")]
    prm = PlancherelParams(args.gp, args.gm)
    print("beta,limit," + ",".join(f"rho_N{N}" for N in Ns))
    for b in betas:
        lim = density_fixed_gamma(b, args.gp)
        vals = [density_fixed_gamma_finite(N, b, prm) for N in Ns]
        print(f"{b:g},{lim:.6f}," + ",".join(f"{v:.6f}" for v in vals))
    worst = [max(abs(density_fixed_gamma_finite(N, b, prm) - density_fixed_gamma(b, args.gp)) for b in betas)
             for N in Ns]
    print("# max error per N:", dict(zip(Ns, np.round(worst, 5))))


if __name__ == "__main__":
    main()
