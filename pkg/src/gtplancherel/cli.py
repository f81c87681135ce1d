"""Command-line front end: `python -m gtplancherel <command> ...`.

Scalar queries print one JSON object; tables print CSV.  Exit codes: 0 on
success, 1 on usage errors, 2 when a numerical method does not converge.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from typing import Sequence

from . import experiments as ex
from . import limitkernels as lk
from . import shape
from .combinatorics import Signature, UsageError, Window
from .kernel import KernelSettings, SpacetimePoint, kernel_K, kernel_K_delta
from .oracle import EnumerationSpec, compare
from .quadrature import NumericalFailure
from .sampler import SamplerConfig, empirical_density, exact_sample_small, mcmc_sample
from .weights import PlancherelParams, plancherel_weight

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _floats(text: str) -> list[float]:
    return [float(t) for t in text.split(",") if t.strip()]


def _ints(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t.strip()]


def _complex(v) -> object:
    if isinstance(v, complex):
        return {"re": v.real, "im": v.imag}
    return v


def _emit(obj: dict) -> None:
    print(json.dumps(obj, default=_complex))


def _params(args) -> PlancherelParams:
    return PlancherelParams(args.gp, args.gm)


# ------------------------------------------------------------------ commands


def cmd_kernel(args) -> int:
    st = KernelSettings(radius_policy=args.radius_policy, backend=args.backend)
    p1, p2 = SpacetimePoint(args.n1, args.x1), SpacetimePoint(args.n2, args.x2)
    fn = kernel_K if args.which == "K" else kernel_K_delta
    _emit({"value": fn(p1, p2, _params(args), st), "which": args.which, "backend": args.backend})
    return EXIT_OK


def cmd_measure(args) -> int:
    sig = Signature.parse(args.sig)
    _emit({"signature": list(sig.parts), "weight": plancherel_weight(sig, _params(args))})
    return EXIT_OK


def cmd_oracle(args) -> int:
    spec = EnumerationSpec(args.n, Window.parse(args.window), _params(args))
    rep = compare(spec, which=args.which, tuple_budget=args.budget, seed=args.seed)
    _emit(rep.to_json())
    return EXIT_OK


def cmd_shape(args) -> int:
    if args.what == "density" and args.gp is not None:
        _emit({"beta": args.beta, "alpha": args.alpha,
               "density": shape.density_fixed_gamma(args.beta, args.gp, args.alpha, args.gm)})
        return EXIT_OK
    if args.a is None or args.b is None:
        raise UsageError("--a and --b are required (or --gp/--beta for the fixed-γ density)")
    pp = shape.ProportionalParams(args.a, args.b)
    r = shape.q_real_roots(pp)
    out: dict = {"a": args.a, "b": args.b, "q_roots": list(r.roots),
                 "multiplicities": list(r.multiplicities), "m": r.m}
    if args.what != "roots":
        if args.c is None:
            raise UsageError("--c is required")
        region = shape.classify_region(pp, args.c)
        out.update(c=args.c, region=region.kind, z_plus=region.z_plus, density=shape.density_limit(region))
    _emit(out)
    return EXIT_OK


def _limit_args(args) -> dict:
    keys = ("s", "x", "t", "y", "dt", "dx", "k", "l", "deriv", "tau1", "sigma1", "tau2", "sigma2",
            "t1", "s1", "t2", "s2")
    out = {k: getattr(args, k) for k in keys if getattr(args, k) is not None}
    if args.z is not None:
        out["z"] = complex(args.z.replace(" ", "").replace("i", "j"))
    return out


def cmd_limit(args) -> int:
    try:
        res = lk.evaluate(args.name, _limit_args(args))
    except KeyError as exc:
        raise UsageError(f"missing argument --{exc.args[0]} for {args.name}") from exc
    _emit({"value": res.value, "converged": res.converged, "nodes_used": res.nodes_used})
    return EXIT_OK


def _probes(texts: Sequence[str] | None) -> tuple | None:
    """'t,x;t,x' per probe."""
    if not texts:
        return None
    out = []
    for text in texts:
        pts = []
        for item in text.split(";"):
            t, x = _floats(item)
            pts.append((t, x))
        out.append(tuple(pts))
    return tuple(out)


def cmd_converge(args) -> int:
    regime = ex.REGIME_ALIASES.get(args.regime, args.regime)
    if regime not in ex.REGIMES:
        raise UsageError(f"unknown regime {args.regime!r}")
    base = ex.default_specs()[regime][0][1]
    over = {k: getattr(args, k) for k in ("a", "b", "c", "z0", "c1") if getattr(args, k) is not None}
    if args.gp is not None:
        over["gamma_plus"] = args.gp
    if args.gm is not None:
        over["gamma_minus"] = args.gm
    if args.Ns:
        over["Ns"] = tuple(_ints(args.Ns))
    if args.probe:
        over["probes"] = _probes(args.probe)
    spec = ex.ConvergenceSpec(**{**base.__dict__, **over})
    table = ex.converge(spec, workers=args.workers)
    sys.stdout.write(table.to_csv())
    return EXIT_OK if all(r.converged for r in table.rows) else EXIT_NUMERIC


def cmd_sample(args) -> int:
    prm = _params(args)
    window = Window.parse(args.window) if args.window else None
    cfg = SamplerConfig(args.n, prm, steps=max(args.steps, args.burn_in + 1), burn_in=args.burn_in,
                        seed=args.seed, window=window, thin=args.thin)
    samples = exact_sample_small(cfg, args.count, widen=window is None) if args.exact else mcmc_sample(cfg, args.count)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow([f"lambda_{i}" for i in range(1, args.n + 1)])
    for s in samples:
        w.writerow(s.parts)
    summary = {"N": args.n, "count": len(samples), "empirical_density": empirical_density(samples, args.n)}
    text = json.dumps(summary)
    if args.summary:
        with open(args.summary, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text, file=sys.stderr)
    return EXIT_OK


# -------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gtplancherel", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def gammas(q, required=True):
        q.add_argument("--gp", type=float, required=required, help="γ⁺")
        q.add_argument("--gm", type=float, required=required, help="γ⁻")

    k = sub.add_parser("kernel", help="evaluate the correlation kernel")
    k.add_argument("action", choices=["eval"])
    for name in ("n1", "x1", "n2", "x2"):
        k.add_argument(f"--{name}", type=int, required=True)
    gammas(k)
    k.add_argument("--which", choices=["K", "K_delta"], default="K")
    k.add_argument("--backend", choices=["quadrature", "series"], default="quadrature")
    k.add_argument("--radius-policy", choices=["fixed", "auto"], default="fixed")
    k.set_defaults(func=cmd_kernel)

    m = sub.add_parser("measure", help="Plancherel weight of a signature")
    m.add_argument("action", choices=["weight"])
    gammas(m)
    m.add_argument("--sig", required=True, help="comma-separated nonincreasing parts")
    m.set_defaults(func=cmd_measure)

    o = sub.add_parser("oracle", help="compare kernel determinants with brute-force enumeration")
    o.add_argument("action", choices=["check"])
    o.add_argument("--n", type=int, required=True)
    gammas(o)
    o.add_argument("--window", default="-10,6")
    o.add_argument("--which", choices=["K", "K_delta"], default="K")
    o.add_argument("--budget", type=int, default=200)
    o.add_argument("--seed", type=int, default=0)
    o.set_defaults(func=cmd_oracle)

    s = sub.add_parser("shape", help="limit-shape polynomials and regions")
    s.add_argument("what", choices=["roots", "region", "density"])
    s.add_argument("--a", type=float)
    s.add_argument("--b", type=float)
    s.add_argument("--c", type=float)
    gammas(s, required=False)
    s.add_argument("--alpha", type=float, default=0.0)
    s.add_argument("--beta", type=float, default=0.0)
    s.set_defaults(func=cmd_shape)

    lim = sub.add_parser("limit", help="evaluate a limit kernel")
    lim.add_argument("name", choices=lk.LIMIT_NAMES)
    for name in ("s", "t", "dt", "tau1", "sigma1", "tau2", "sigma2", "t1", "s1", "t2", "s2"):
        lim.add_argument(f"--{name}", type=float)
    for name in ("x", "y", "dx", "k", "l", "deriv"):
        lim.add_argument(f"--{name}", type=float if name == "x" else int)
    lim.add_argument("--z", help="complex number such as 0.3+0.8j")
    lim.set_defaults(func=cmd_limit)

    c = sub.add_parser("converge", help="finite-N error table for a scaling regime (CSV)")
    c.add_argument("regime", help="poisson|bulk-fixed|bulk-proportional|pearcey|airy")
    c.add_argument("--Ns", help="comma-separated increasing N values")
    for name in ("a", "b", "c", "z0", "c1"):
        c.add_argument(f"--{name}", type=float)
    gammas(c, required=False)
    c.add_argument("--probe", action="append", help="'t,x;t,x' limit coordinates, repeatable")
    c.add_argument("--workers", type=int, default=1, help="process pool size over N")
    c.set_defaults(func=cmd_converge)

    sm = sub.add_parser("sample", help="draw level-N signatures (CSV) with a JSON density summary")
    sm.add_argument("--n", type=int, required=True)
    gammas(sm)
    sm.add_argument("--count", type=int, default=1000)
    sm.add_argument("--steps", type=int, default=2000)
    sm.add_argument("--burn-in", type=int, default=1000)
    sm.add_argument("--thin", type=int, default=1)
    sm.add_argument("--seed", type=int, default=0)
    sm.add_argument("--window")
    sm.add_argument("--exact", action="store_true", help="inverse-CDF sampling (N <= 3)")
    sm.add_argument("--summary", help="write the JSON summary here instead of stderr")
    sm.set_defaults(func=cmd_sample)
    return p


# values that may start with '-' but are not numbers, e.g. "--window -10,6"
_DASHED = ("--window", "--sig", "--probe", "--Ns", "--z")


def _join_dashed(argv: Sequence[str]) -> list[str]:
    out, it = [], iter(argv)
    for tok in it:
        if tok in _DASHED:
            val = next(it, None)
            out.append(tok if val is None else f"{tok}={val}")
        else:
            out.append(tok)
    return out


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        args = build_parser().parse_args(_join_dashed(argv))
        return args.func(args)
    except NumericalFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


cli_main = main

if __name__ == "__main__":
    sys.exit(main())
