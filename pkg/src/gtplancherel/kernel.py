"""The finite-N space-time correlation kernel and its particle-hole version.

For n1 >= n2 the kernel is the double contour integral

    (1/2πi)² ∮∮ G1(u) h2(w) / (u − w) du dw,
    G(u) = e^{γ⁻u + γ⁺/u} u^x (1−u)^n,   h(w) = e^{−γ⁻w − γ⁺/w} w^{−1−x} (1−w)^{−n},

with u on |u| = r and w on |w − 1| = ε, r + ε < 1; for n1 < n2 a binomial
term is subtracted.  Evaluation happens in log space with per-point gauge
offsets g, so what is returned is exp(g1 − g2)·K.  Determinants do not see
the gauge.

Double-precision quadrature loses accuracy to cancellation once N reaches a
few hundred in the proportional regimes; `backend="series"` evaluates the
same kernel exactly in extended precision (see `series`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np

from .quadrature import (
    CircleContour,
    NumericalFailure,
    QuadratureSettings,
    QuadResult,
    double_circle_integral,
)
from .weights import PlancherelParams

Which = Literal["K", "K_delta"]

# radius grid scanned by radius_policy="auto"
RADIUS_GRID = tuple(np.round(np.arange(0.15, 0.751, 0.05), 2))


@dataclass(frozen=True, order=True)
class SpacetimePoint:
    n: int
    x: int

    def __post_init__(self):
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "x", int(self.x))
        if self.n < 1:
            raise ValueError("level must be >= 1")


@dataclass(frozen=True)
class KernelSettings:
    u_radius: float = 0.4
    w_radius: float = 0.4
    quad: QuadratureSettings = field(default_factory=lambda: QuadratureSettings(64, 4096, 1e-12))
    radius_policy: Literal["fixed", "auto"] = "fixed"
    backend: Literal["quadrature", "series"] = "quadrature"

    def __post_init__(self):
        if not (0 < self.u_radius < 1 and 0 < self.w_radius < 1 - self.u_radius):
            raise ValueError("need 0 < u_radius and u_radius + w_radius < 1")
        if self.radius_policy not in ("fixed", "auto"):
            raise ValueError(f"unknown radius policy {self.radius_policy!r}")
        if self.backend not in ("quadrature", "series"):
            raise ValueError(f"unknown backend {self.backend!r}")


# ------------------------------------------------------------ log integrands


def log_G(z, pt: SpacetimePoint, prm: PlancherelParams):
    """log of e^{γ⁻z + γ⁺/z} z^x (1−z)^n (any branch: only exp() of it is used)."""
    return prm.gamma_minus * z + prm.gamma_plus / z + pt.x * np.log(z) + pt.n * np.log(1 - z)


def log_h(z, pt: SpacetimePoint, prm: PlancherelParams):
    """log of e^{−γ⁻z − γ⁺/z} z^{−1−x} (1−z)^{−n}."""
    return -log_G(z, pt, prm) - np.log(z)


_PROBE = 256


def _circle_max(f, c: CircleContour) -> float:
    z, _ = c.sample(_PROBE)
    return float(np.max(np.real(f(z))))


def u_peak(pt: SpacetimePoint, prm: PlancherelParams, r: float) -> float:
    """max of log|G| on |u| = r."""
    return _circle_max(lambda z: log_G(z, pt, prm), CircleContour(0.0, r))


def w_peak(pt: SpacetimePoint, prm: PlancherelParams, eps: float) -> float:
    """max of log|h| on |w − 1| = ε."""
    return _circle_max(lambda z: log_h(z, pt, prm), CircleContour(1.0, eps))


def best_radii(p1: SpacetimePoint, p2: SpacetimePoint, prm: PlancherelParams) -> tuple[float, float]:
    """Admissible (r, ε) from the grid minimising the peak log-magnitude of the integrand."""
    best = (math.inf, 0.4, 0.4)
    for r in RADIUS_GRID:
        up = u_peak(p1, prm, r)
        for eps in RADIUS_GRID:
            if r + eps >= 1 - 1e-9:
                break
            # 1/|u − w| ≤ 1/(1 − r − ε)
            v = up + w_peak(p2, prm, eps) - math.log(1 - r - eps)
            if v < best[0]:
                best = (v, float(r), float(eps))
    return best[1], best[2]


def radii_for(p1: SpacetimePoint, p2: SpacetimePoint, prm: PlancherelParams, st: KernelSettings) -> tuple[float, float]:
    if st.radius_policy == "auto":
        return best_radii(p1, p2, prm)
    return st.u_radius, st.w_radius


def gauge_of(pt: SpacetimePoint, prm: PlancherelParams, st: KernelSettings) -> float:
    """−(log-magnitude of the u-integral): the smallest peak of log|G| over the u-circles in use."""
    radii = RADIUS_GRID if st.radius_policy == "auto" else (st.u_radius,)
    return -min(u_peak(pt, prm, r) for r in radii)


# --------------------------------------------------------------- quadrature


def double_integral(
    p1: SpacetimePoint,
    p2: SpacetimePoint,
    prm: PlancherelParams,
    radii: tuple[float, float],
    quad: QuadratureSettings,
    g1: float = 0.0,
    g2: float = 0.0,
) -> QuadResult:
    """exp(g1 − g2) times the double-contour part of K(p1; p2)."""
    r, eps = radii
    Cu, Cw = CircleContour(0.0, r), CircleContour(1.0, eps)
    for z in (0.0, 1.0):
        if abs(abs(z) - r) < 1e-14 or abs(abs(z - 1) - eps) < 1e-14:
            raise ValueError("contour passes through a singular point")
    # balance the two factors so that neither overflows on its own
    shift = 0.5 * (u_peak(p1, prm, r) + g1 - w_peak(p2, prm, eps) + g2)

    def F(u, w):
        return np.exp(log_G(u, p1, prm) + g1 - shift + log_h(w, p2, prm) - g2 + shift) / (u - w)

    return double_circle_integral(F, Cu, Cw, quad)


def _log_binom(n: int, k: int) -> float:
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def single_term(p1: SpacetimePoint, p2: SpacetimePoint, g1: float = 0.0, g2: float = 0.0) -> float:
    """−(1/2πi)∮ z^{x1−x2−1}(1−z)^{n1−n2} dz around 0, for n1 < n2 (times exp(g1−g2))."""
    m = p2.n - p1.n
    if m <= 0:
        raise ValueError("single_term needs n1 < n2")
    k = p2.x - p1.x
    if k < 0:
        return 0.0
    if g1 == g2:
        return -float(math.comb(m - 1 + k, k))
    return -math.exp(_log_binom(m - 1 + k, k) + g1 - g2)


def _real(res: QuadResult, what: str) -> float:
    val = complex(res.require(what))
    if abs(val.imag) > 1e-8 * (1 + abs(val)):
        raise NumericalFailure(f"{what} has imaginary part {val.imag:.3g}", val)
    return float(val.real)


def kernel_entry(
    p1: SpacetimePoint,
    p2: SpacetimePoint,
    prm: PlancherelParams,
    st: KernelSettings,
    g1: float = 0.0,
    g2: float = 0.0,
) -> float:
    """exp(g1 − g2)·K(p1; p2)."""
    if st.backend == "series":
        import mpmath

        from . import series

        return float(series.kernel_value(p1, p2, prm) * mpmath.exp(g1 - g2))
    res = double_integral(p1, p2, prm, radii_for(p1, p2, prm, st), st.quad, g1, g2)
    val = _real(res, f"K({p1}; {p2})")
    if p1.n < p2.n:
        val += single_term(p1, p2, g1, g2)
    return val


def kernel_K(p1: SpacetimePoint, p2: SpacetimePoint, prm: PlancherelParams,
             st: KernelSettings = KernelSettings()) -> float:
    return kernel_entry(p1, p2, prm, st)


def kernel_K_delta(p1: SpacetimePoint, p2: SpacetimePoint, prm: PlancherelParams,
                   st: KernelSettings = KernelSettings()) -> float:
    """Particle-hole kernel: −(double integral) for n1 > n2; single term minus it otherwise.

    The single term here is +binom(...), so on one level this is δ − K.
    """
    if p1.n > p2.n:
        return -kernel_entry(p1, p2, prm, st)
    if p1.n == p2.n:
        return float(p1.x == p2.x) - kernel_entry(p1, p2, prm, st)
    # K = D + single_term, K_Δ = −single_term − D = −K
    return -kernel_entry(p1, p2, prm, st)


def kernel_matrix(
    points: Sequence[SpacetimePoint],
    prm: PlancherelParams,
    st: KernelSettings = KernelSettings(),
    which: Which = "K",
    gauge: Sequence[float] | None = None,
) -> np.ndarray:
    """[exp(g_i − g_j) 𝒦(p_i; p_j)] with 𝒦 = K or K_Δ."""
    k = len(points)
    g = [0.0] * k if gauge is None else list(gauge)
    out = np.empty((k, k))
    for i, pi in enumerate(points):
        for j, pj in enumerate(points):
            val = kernel_entry(pi, pj, prm, st, g[i], g[j])
            if which == "K_delta":
                val = (float(pi.x == pj.x) if pi.n == pj.n else 0.0) - val
            out[i, j] = val
    return out


def corr_det(
    points: Sequence[SpacetimePoint],
    prm: PlancherelParams,
    st: KernelSettings = KernelSettings(),
    which: Which = "K",
    gauge: bool | Sequence[float] = True,
) -> float:
    """Correlation function det[𝒦(p_i; p_j)] (probability that all points are occupied,
    or all are holes for K_Δ)."""
    points = list(points)
    if len(set(points)) != len(points):
        raise ValueError("points must be distinct")
    if st.backend == "series":
        from . import series

        return series.corr_det(points, prm, which)
    if gauge is True:
        g = [gauge_of(p, prm, st) for p in points]
    elif gauge is False:
        g = None
    else:
        g = list(gauge)
    return float(np.linalg.det(kernel_matrix(points, prm, st, which, g)))


def swap_symmetry_residual(p1: SpacetimePoint, p2: SpacetimePoint, prm: PlancherelParams,
                           st: KernelSettings = KernelSettings()) -> float:
    """|(−1)^{n1−n2} K_{γ⁺,γ⁻}(n1,−x1−n1−1; n2,−x2−n2−1) − K_{γ⁻,γ⁺}(n1,x1; n2,x2)|."""
    q1 = SpacetimePoint(p1.n, -p1.x - p1.n - 1)
    q2 = SpacetimePoint(p2.n, -p2.x - p2.n - 1)
    lhs = (-1) ** (p1.n - p2.n) * kernel_K(q1, q2, prm, st)
    rhs = kernel_K(p1, p2, prm.swapped(), st)
    return abs(lhs - rhs)
