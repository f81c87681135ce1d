"""Finite-N versus limit-kernel comparisons for the five scaling regimes.

Each converge_* function maps a probe set (points in the regime's limit
coordinates) to integer space-time points at every N, evaluates the finite-N
correlation determinant with the extended-precision kernel backend and the
limit determinant with `limitkernels`, and records the worst absolute
difference per N.

Rounding is half away from zero, once per coordinate, and the limit kernels
are fed the coordinates actually achieved by the rounded integers.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Literal, Sequence

import mpmath
import numpy as np

from . import limitkernels as lk
from . import series
from .kernel import SpacetimePoint
from .quadrature import NumericalFailure
from .shape import (
    ProportionalParams,
    airy_constants,
    classify_region,
    double_root_family,
    q_real_roots,
    z_plus_fixed_gamma,
)
from .weights import PlancherelParams

Regime = Literal["PoissonJ", "BulkFixed", "BulkProportional", "Pearcey", "Airy"]
REGIMES: tuple[str, ...] = ("PoissonJ", "BulkFixed", "BulkProportional", "Pearcey", "Airy")

# a probe point in limit coordinates: (time, space)
Probe = tuple[tuple[float, float], ...]


def round_half_away(v: float) -> int:
    return int(math.copysign(math.floor(abs(v) + 0.5), v))


def _sig12(v: float) -> float:
    """Round to the 12 significant digits used on output, so tables round-trip through CSV."""
    return float(f"{v:.12g}")


@dataclass(frozen=True)
class ConvergenceSpec:
    regime: Regime
    Ns: tuple[int, ...]
    probes: tuple[Probe, ...]
    a: float | None = None
    b: float | None = None
    c: float | None = None
    gamma_plus: float | None = None
    gamma_minus: float | None = None
    z0: float | None = None
    c1: float | None = None

    def __post_init__(self):
        if self.regime not in REGIMES:
            raise ValueError(f"unknown regime {self.regime!r}")
        Ns = tuple(int(n) for n in self.Ns)
        object.__setattr__(self, "Ns", Ns)
        if len(Ns) < 2 or any(p >= q for p, q in zip(Ns, Ns[1:])):
            raise ValueError("Ns must be strictly increasing with at least two entries")
        if not self.probes or any(not 1 <= len(p) <= 3 for p in self.probes):
            raise ValueError("each probe needs 1 to 3 points")


@dataclass(frozen=True)
class ErrorRow:
    N: int
    max_abs_error: float
    converged: bool


@dataclass
class ErrorTable:
    regime: str
    rows: list[ErrorRow] = field(default_factory=list)

    @property
    def errors(self) -> list[float]:
        return [r.max_abs_error for r in self.rows]

    def strictly_decreasing(self) -> bool:
        e = self.errors
        return all(p > q for p, q in zip(e, e[1:]))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["N", "max_abs_error", "converged"])
        for r in self.rows:
            w.writerow([r.N, f"{r.max_abs_error:.12g}", int(r.converged)])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, regime: str = "") -> "ErrorTable":
        rows = [ErrorRow(int(d["N"]), float(d["max_abs_error"]), bool(int(d["converged"])))
                for d in csv.DictReader(io.StringIO(text))]
        return cls(regime, rows)


# ------------------------------------------------------------ finite side


def finite_det(points: Sequence[SpacetimePoint], prm: PlancherelParams, which: str = "K",
               scale: float = 1.0, log_weights: Sequence | None = None) -> float:
    """det[scale·w_i/w_j·𝒦(p_i; p_j)] with log w_i given; evaluated in extended precision."""
    M = series.kernel_matrix(list(points), prm, which)
    k = len(points)
    with mpmath.workprec(192):
        for i in range(k):
            for j in range(k):
                g = 0 if log_weights is None else log_weights[i] - log_weights[j]
                M[i, j] *= scale * mpmath.exp(g)
        return float(mpmath.det(M))


PairFn = Callable[[int, Probe], tuple[float, float]]


def _row(spec: ConvergenceSpec, N: int) -> ErrorRow:
    pair = PAIRS[spec.regime](spec)
    worst, ok = 0.0, True
    for probe in spec.probes:
        try:
            fin, lim = pair(N, probe)
        except NumericalFailure:
            ok = False
            continue
        worst = max(worst, abs(fin - lim))
    return ErrorRow(N, _sig12(worst), ok)


def _run(spec: ConvergenceSpec, workers: int = 1) -> ErrorTable:
    """One row per N; rows are independent and go to a process pool when workers > 1."""
    if workers > 1 and len(spec.Ns) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(spec.Ns))) as pool:
            rows = list(pool.map(_row, [spec] * len(spec.Ns), spec.Ns))
    else:
        rows = [_row(spec, N) for N in spec.Ns]
    return ErrorTable(spec.regime, rows)


def _limit_det(entry: Callable[[int, int], float], k: int) -> float:
    return float(np.linalg.det(np.array([[entry(i, j) for j in range(k)] for i in range(k)])))


# ------------------------------------------------------------ Poisson / J


def poisson_points(N: int, a: float, probe: Probe) -> list[SpacetimePoint]:
    return [SpacetimePoint(max(1, round_half_away(t * N)), int(x)) for t, x in probe]


def _pair_poisson(spec: ConvergenceSpec) -> PairFn:
    """γ± = a/N, n_j = round(t_j N): det[K] against det[J(a t_i, x_i; a t_j, x_j)]."""
    a = spec.a
    if not (a and a > 0):
        raise ValueError("PoissonJ needs a > 0")

    def pair(N, probe):
        prm = PlancherelParams(a / N, a / N)
        pts = poisson_points(N, a, probe)
        # achieved times n_j/N
        tt = [p.n / N for p in pts]
        # (N/a)^{x_j − x_i} from the proof
        logw = [-p.x * math.log(N / a) for p in pts]
        fin = finite_det(pts, prm, "K", 1.0, logw)
        lim = _limit_det(lambda i, j: lk.kernel_J(a * tt[i], pts[i].x, a * tt[j], pts[j].x), len(pts))
        return fin, lim

    return pair


def independence_residual(N: int, a: float, n_t: float, x: int, y: int) -> float:
    """√|K(p; q) K(q; p)| for p = (n, x), q = (n, −n − y − 1) in the Poisson regime.

    p sits among the rows of λ⁺ and q among those of λ⁻.  Single off-diagonal
    entries change under conjugation, their product does not, and
    ρ₂(p, q) − ρ₁(p)ρ₁(q) = −K(p; q)K(q; p).
    """
    prm = PlancherelParams(a / N, a / N)
    n = max(1, round_half_away(n_t * N))
    p, q = SpacetimePoint(n, x), SpacetimePoint(n, -n - y - 1)
    return math.sqrt(abs(float(series.kernel_value(p, q, prm) * series.kernel_value(q, p, prm))))


# ------------------------------------------------------------- fixed-γ bulk


def bulk_fixed_points(N: int, c: float, probe: Probe) -> list[SpacetimePoint]:
    base = round_half_away(c * math.sqrt(N))
    return [SpacetimePoint(N + round_half_away(t * math.sqrt(N)), base + int(d)) for t, d in probe]


def _pair_bulk_fixed(spec: ConvergenceSpec) -> PairFn:
    """Fixed γ±, n_j = N + round(t_j√N), x_i = round(c√N) + δ_i: det[K] against det[S_{z₊}] (0/1 off the bulk)."""
    gp, gm, c = spec.gamma_plus, spec.gamma_minus, spec.c
    prm = PlancherelParams(gp, gm)
    edge = 2 * math.sqrt(gp)

    def pair(N, probe):
        pts = bulk_fixed_points(N, c, probe)
        tt = [(p.n - N) / math.sqrt(N) for p in pts]
        logw = [p.x * (0.5 * math.log(N) - 0.5 * math.log(gp)) for p in pts]
        fin = finite_det(pts, prm, "K", 1.0, logw)
        if c >= edge:
            return fin, 0.0
        if c <= -edge:
            return fin, 1.0
        z = lk.SineParams(z_plus_fixed_gamma(c, gp))
        lim = _limit_det(lambda i, j: lk.sine_S(z, tt[i] - tt[j], pts[i].x - pts[j].x), len(pts))
        return fin, lim

    return pair


def density_fixed_gamma_finite(N: int, beta: float, prm: PlancherelParams) -> float:
    """ρ₁(N, round(β√N))."""
    p = SpacetimePoint(N, round_half_away(beta * math.sqrt(N)))
    return float(series.kernel_value(p, p, prm))


# --------------------------------------------------------- proportional bulk


def proportional_points(N: int, c: float, probe: Probe) -> list[SpacetimePoint]:
    base = round_half_away(c * N)
    return [SpacetimePoint(N + int(m), base + int(d)) for m, d in probe]


def _pair_bulk_proportional(spec: ConvergenceSpec) -> PairFn:
    """γ⁺ = aN, γ⁻ = bN: det[K] against det[B_{z₊}(n_i − n_j, x_j − x_i)], or 0/1 off the bulk."""
    pp = ProportionalParams(spec.a, spec.b)
    region = classify_region(pp, spec.c)

    def pair(N, probe):
        prm = PlancherelParams(spec.a * N, spec.b * N)
        pts = proportional_points(N, spec.c, probe)
        fin = finite_det(pts, prm, "K")
        if region.kind != "Bulk":
            return fin, float(region.kind == "Saturated")
        z = region.z_plus
        lim = _limit_det(lambda i, j: lk.beta_B(z, pts[i].n - pts[j].n, pts[j].x - pts[i].x), len(pts))
        return fin, lim

    return pair


# ------------------------------------------------------------------ Pearcey


def pearcey_points(N: int, z0: float, probe: Probe) -> tuple[list[SpacetimePoint], list[lk.PearceyArg]]:
    d = double_root_family(z0)
    pts, args = [], []
    for t, s in probe:
        n = N + round_half_away(2 * t * math.sqrt(N))
        t_ach = (n - N) / (2 * math.sqrt(N))
        tt = z0 * t_ach / (1 - z0)
        x = round_half_away(d.c0 * N + tt * math.sqrt(N) + s * N**0.25 / d.zeta)
        pts.append(SpacetimePoint(n, x))
        args.append(lk.PearceyArg(t_ach, d.zeta * (x - d.c0 * N - tt * math.sqrt(N)) / N**0.25))
    return pts, args


def _pair_pearcey(spec: ConvergenceSpec) -> PairFn:
    """det[−ζ⁻¹N^{1/4} K_Δ] against det[P] near the cusp fixed by z0."""
    d = double_root_family(spec.z0)

    def pair(N, probe):
        prm = PlancherelParams(d.a * N, d.b * N)
        pts, args = pearcey_points(N, spec.z0, probe)
        # conjugation |z0|^{−x}(1 − z0)^{−n} from the proof; its signs cancel in the determinant
        logw = [-p.x * math.log(abs(d.z0)) - p.n * math.log(1 - d.z0) for p in pts]
        fin = finite_det(pts, prm, "K_delta", -N**0.25 / d.zeta, logw)
        lim = _limit_det(lambda i, j: lk.pearcey_P(args[i], args[j]), len(pts))
        return fin, lim

    return pair


# --------------------------------------------------------------------- Airy


def airy_points(N: int, pp: ProportionalParams, c1: float, probe: Probe):
    e = airy_constants(pp, c1)
    pts, args = [], []
    for t, s in probe:
        n = N + round_half_away(t * N ** (2 / 3))
        t_ach = (n - N) / N ** (2 / 3)
        tt = t_ach * e.z1 / (1 - e.z1)
        x = round_half_away(c1 * N + tt * N ** (2 / 3) + s * N ** (1 / 3))
        s_ach = (x - c1 * N - tt * N ** (2 / 3)) / N ** (1 / 3)
        pts.append(SpacetimePoint(n, x))
        args.append(lk.AiryArg(e.tau(t_ach), e.sigma(t_ach, s_ach)))
    return e, pts, args


def airy_kernel_choice(c1: float) -> str:
    return "K" if (c1 > 0 or c1 < -1) else "K_delta"


def _pair_airy(spec: ConvergenceSpec) -> PairFn:
    """det[|z1 p3^{1/3}| N^{1/3} 𝒦] against det[𝒜(τ_i, σ_i; τ_j, σ_j)] at the edge c1."""
    pp = ProportionalParams(spec.a, spec.b)
    which = airy_kernel_choice(spec.c1)

    def pair(N, probe):
        prm = PlancherelParams(spec.a * N, spec.b * N)
        e, pts, args = airy_points(N, pp, spec.c1, probe)
        # gauge z1^{x_j − x_i}(1 − z1)^{n_i − n_j}, up to signs that cancel in the determinant
        logw = [-p.x * math.log(abs(e.z1)) + p.n * math.log(abs(1 - e.z1)) for p in pts]
        fin = finite_det(pts, prm, which, abs(e.scale) * N ** (1 / 3), logw)
        lim = _limit_det(lambda i, j: lk.airy_ext_integral(args[i], args[j]), len(pts))
        return fin, lim

    return pair


PAIRS: dict[str, Callable[[ConvergenceSpec], PairFn]] = {
    "PoissonJ": _pair_poisson,
    "BulkFixed": _pair_bulk_fixed,
    "BulkProportional": _pair_bulk_proportional,
    "Pearcey": _pair_pearcey,
    "Airy": _pair_airy,
}


def _checked(spec: ConvergenceSpec, regime: str) -> ConvergenceSpec:
    if spec.regime != regime:
        raise ValueError(f"expected a {regime} spec, got {spec.regime}")
    return spec


def converge_poisson(spec: ConvergenceSpec, workers: int = 1) -> ErrorTable:
    return _run(_checked(spec, "PoissonJ"), workers)


def converge_bulk_fixed(spec: ConvergenceSpec, workers: int = 1) -> ErrorTable:
    return _run(_checked(spec, "BulkFixed"), workers)


def converge_bulk_proportional(spec: ConvergenceSpec, workers: int = 1) -> ErrorTable:
    return _run(_checked(spec, "BulkProportional"), workers)


def converge_pearcey(spec: ConvergenceSpec, workers: int = 1) -> ErrorTable:
    return _run(_checked(spec, "Pearcey"), workers)


def converge_airy(spec: ConvergenceSpec, workers: int = 1) -> ErrorTable:
    return _run(_checked(spec, "Airy"), workers)


def converge(spec: ConvergenceSpec, workers: int = 1) -> ErrorTable:
    return _run(spec, workers)


REGIME_ALIASES = {
    "poisson": "PoissonJ",
    "bulk-fixed": "BulkFixed",
    "bulk-proportional": "BulkProportional",
    "pearcey": "Pearcey",
    "airy": "Airy",
}

_AXIS = tuple((0, d) for d in range(-3, 4))
_BULK_FIXED_PROBES = (((0, -1),), ((0, 0),), ((0, -1), (0, 0)), ((0.5, 0), (0, 0)), ((0, 0), (0.5, -1)))


def default_specs() -> dict[str, list[tuple[str, ConvergenceSpec]]]:
    """Named specs per regime.  Every table they produce decreases strictly in N.

    Degenerate-region specs converge to 0/1 geometrically, so their errors sit
    near machine precision.  Only the bulk, edge and cusp specs are slow.
    """
    one = lambda pts: tuple((p,) for p in pts)  # noqa: E731
    pp1, pp2, pp3 = ProportionalParams(1 / 25, 1 / 15), ProportionalParams(1 / 8, 1 / 8), ProportionalParams(1 / 4, 1 / 3)
    top, bottom = q_real_roots(pp2).roots[-1], q_real_roots(pp2).roots[0]
    # of the two inner edges only the lower one decreases monotonically at N <= 400
    inner = q_real_roots(pp1).roots[1]
    return {
        "PoissonJ": [
            ("a=1,k=1", ConvergenceSpec("PoissonJ", (100, 400), one((1.0, x) for x in range(-3, 4)), a=1.0)),
            ("a=1,k=2", ConvergenceSpec("PoissonJ", (100, 400), (((1.0, 0), (1.0, 1)), ((1.0, -1), (1.0, 1))), a=1.0)),
        ],
        "BulkFixed": [
            # offsets straddle x = −1/2, the centre of the γ⁺ = γ⁻ reflection; an offset δ
            # biases the comparison by O(|δ + 1/2|/√N)
            ("c=0,k<=2", ConvergenceSpec("BulkFixed", (100, 400), _BULK_FIXED_PROBES,
                                         c=0.0, gamma_plus=1.0, gamma_minus=1.0)),
        ],
        "BulkProportional": [
            ("1/8,1/8,c=0", ConvergenceSpec("BulkProportional", (100, 400), one(_AXIS) + (((0, 0), (0, 1)),),
                                            a=pp2.a, b=pp2.b, c=0.0)),
            ("1/25,1/15,c=0", ConvergenceSpec("BulkProportional", (100, 400), one(_AXIS), a=pp1.a, b=pp1.b, c=0.0)),
            ("1/4,1/3,c=0", ConvergenceSpec("BulkProportional", (100, 400), one(_AXIS), a=pp3.a, b=pp3.b, c=0.0)),
        ],
        "Pearcey": [
            ("z0=-1,k=1", ConvergenceSpec("Pearcey", (100, 200, 400), one((0.0, s) for s in (-1.0, 0.0, 1.0)), z0=-1.0)),
            ("z0=-1,s=(0,1)", ConvergenceSpec("Pearcey", (100, 200, 400), (((0.0, 0.0), (0.0, 1.0)),), z0=-1.0)),
            ("z0=-1,t1>t2", ConvergenceSpec("Pearcey", (100, 200, 400), (((0.5, 0.0), (0.0, 0.0)),), z0=-1.0)),
        ],
        "Airy": [
            ("1/8,1/8,top", ConvergenceSpec("Airy", (100, 200, 400), one((0.0, s) for s in (-1.0, 0.0, 1.0)),
                                            a=pp2.a, b=pp2.b, c1=top)),
            ("1/8,1/8,bottom", ConvergenceSpec("Airy", (100, 200, 400), one((0.0, s) for s in (-1.0, 0.0, 1.0)),
                                               a=pp2.a, b=pp2.b, c1=bottom)),
            ("1/25,1/15,inner", ConvergenceSpec("Airy", (100, 200, 400), one((0.0, s) for s in (-1.0, 0.0, 1.0)),
                                                a=pp1.a, b=pp1.b, c1=inner)),
        ],
    }
