"""Run every default convergence table and write one CSV per (regime, probe set).

    python3 scripts/run_convergence.py --out results/ [--regime pearcey] [--workers 2]
"""

import argparse
import pathlib
import re
import time

from gtplancherel import experiments as ex


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results")
    ap.add_argument("--regime", help="limit to one regime (alias or name)")
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    only = ex.REGIME_ALIASES.get(args.regime, args.regime) if args.regime else None
    for regime, specs in ex.default_specs().items():
        if only and regime != only:
            continue
        for name, spec in specs:
            t0 = time.time()
            table = ex.converge(spec, workers=args.workers)
            slug = re.sub(r"[^A-Za-z0-9]+", "_", f"{regime}_{name}").strip("_")
            (out / f"{slug}.csv").write_text(table.to_csv())
            trend = "decreasing" if table.strictly_decreasing() else "NOT decreasing"
            print(f"{regime:17s} {name:22s} {table.errors}  {trend}  ({time.time() - t0:.0f} s)")


if __name__ == "__main__":
    main()
