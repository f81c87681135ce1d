"""The universal limit kernels: discrete Bessel J, discrete sine S, incomplete
beta B, extended Airy and Pearcey, plus the Airy function itself.

All contour integrals are normalised as (1/2πi)∫.  Double integrals over
paths that pass through (or near) a common point use panels graded
geometrically towards that point, which keeps the 1/(u − w) singularity
integrable to full precision.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .quadrature import (
    CircleContour,
    NumericalFailure,
    PathContour,
    QuadratureSettings,
    QuadResult,
    Ray,
    _refine,
    double_circle_integral,
    gauss_legendre,
    path_integral,
)

TWO_PI_I = 2j * math.pi


@dataclass(frozen=True)
class SineParams:
    z_plus: complex

    def __post_init__(self):
        if not complex(self.z_plus).imag > 0:
            raise ValueError("z_plus must lie in the upper half-plane")


@dataclass(frozen=True)
class AiryArg:
    tau: float
    sigma: float


@dataclass(frozen=True)
class PearceyArg:
    t: float
    s: float


@dataclass(frozen=True)
class LimitSettings:
    quad: QuadratureSettings = field(default_factory=lambda: QuadratureSettings(64, 8192, 1e-12))
    # indentation of the Pearcey w-rays away from the origin
    pearcey_delta: float = 1e-3
    # ν1 + ν2 + τ1 − τ2 for the extended Airy double integral (0 is the reduction with ν1 = −τ1, ν2 = τ2)
    airy_offset: float = 0.0


DEFAULT = LimitSettings()


@dataclass(frozen=True)
class LimitValue:
    value: float
    converged: bool
    nodes_used: int


def _real(val: complex, what: str, tol: float = 1e-8) -> float:
    if abs(val.imag) > tol * (1 + abs(val.real)):
        raise NumericalFailure(f"{what} has imaginary part {val.imag:.3g}", val)
    return float(val.real)


# --------------------------------------------------------------- Bessel J


def kernel_J(s: float, x: int, t: float, y: int, st: LimitSettings = DEFAULT) -> float:
    return _kernel_J(s, x, t, y, st).value


def _kernel_J(s, x, t, y, st: LimitSettings) -> LimitValue:
    """(1/2πi)² ∮∮ e^{1/u − tu − 1/w + sw} u^y w^{−x−1} / (w − u) du dw.

    The w-circle encloses the u-circle when s ≥ t and is enclosed by it otherwise.
    """
    if s < 0 or t < 0:
        raise ValueError("s, t must be non-negative")
    # radii ratio kept modest: the nesting alone matters, and (r_w/r_u)^{|x|} drives cancellation
    ru, rw = (0.8, 1.25) if s >= t else (1.25, 0.8)

    def F(u, w):
        return np.exp(1 / u - t * u - 1 / w + s * w) * u**y * w ** (-x - 1) / (w - u)

    res = double_circle_integral(F, CircleContour(0.0, ru), CircleContour(0.0, rw), st.quad)
    return LimitValue(_real(res.require(f"J({s},{x};{t},{y})"), "J"), True, res.nodes)


# ------------------------------------------------------------- arcs z̄ → z


def _end_graded(panels: int, levels: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss–Legendre nodes/weights on [0, 1]: `panels` uniform panels, the two end
    panels further split geometrically (ratio 1/2) `levels` times toward 0 and 1."""
    h = 1.0 / panels
    inner = [h * 2.0**-j for j in range(levels, 0, -1)]
    edges = np.unique(np.concatenate([[0.0], inner, np.arange(1, panels) * h, 1 - np.array(inner[::-1]), [1.0]]))
    x, w = gauss_legendre(16)
    a, b = edges[:-1, None], edges[1:, None]
    return (a + (b - a) * x[None, :]).ravel(), ((b - a) * w[None, :]).ravel()


def _arc_integral(f, z: complex, through: float, quad: QuadratureSettings) -> QuadResult:
    """(1/2πi)∫ f(u) du from z̄ to z along the circle (centred on ℝ) through the real point `through`.

    The endpoints may sit close to the singular points 0 and 1; panels are graded
    toward both ends down to that distance.
    """
    z = complex(z)
    d = max(min(abs(z), abs(z - 1)), 1e-300)
    if abs(z.real - through) < 1e-12 * (1 + abs(through)):
        # z̄, through and z are collinear: a vertical segment
        def point(t):
            return z.conjugate() + (z - z.conjugate()) * t, np.full_like(t, z - z.conjugate(), dtype=complex)

        length = 2 * abs(z.imag)
    else:
        c0 = (abs(z) ** 2 - through**2) / (2 * (z.real - through))
        rho = abs(z - c0)
        th = cmath.phase(z - c0)  # in (0, π)
        # the arc passes θ = 0 when `through` lies right of the centre, θ = π otherwise
        th0, th1 = (-th, th) if through > c0 else (2 * math.pi - th, th)

        def point(t):
            e = np.exp(1j * (th0 + (th1 - th0) * t))
            return c0 + rho * e, 1j * rho * e * (th1 - th0)

        length = rho * abs(th1 - th0)

    def est(M):
        panels = max(1, M // 16)
        levels = max(0, math.ceil(math.log2(length / (panels * d))))
        t, w = _end_graded(panels, levels)
        u, du = point(t)
        terms = f(u) * du * w
        return terms.sum() / TWO_PI_I, float(np.abs(terms).sum()) / (2 * math.pi)

    return _refine(est, quad)


def sine_S(p: SineParams, dt: float, dx: int, st: LimitSettings = DEFAULT) -> float:
    """(1/2πi)∫_{z̄₊}^{z₊} u^{dx−1} e^{−dt·u} du; the arc crosses (0,∞) if dt ≥ 0, else (−∞,0)."""
    return _sine_S(p, dt, dx, st).value


def _sine_S(p: SineParams, dt: float, dx: int, st: LimitSettings) -> LimitValue:
    z = complex(p.z_plus)
    through = abs(z) if dt >= 0 else -abs(z)
    res = _arc_integral(lambda u: u ** (dx - 1) * np.exp(-dt * u), z, through, st.quad)
    return LimitValue(_real(res.require("S"), "S"), True, res.nodes)


def beta_B(z: complex, k: int, l: int, st: LimitSettings = DEFAULT) -> float:
    """(1/2πi)∫_{z̄}^{z} (1−u)^k u^{−l−1} du, crossing (0,1) if k ≥ 0 and (−∞,0) otherwise.

    The path is the arc of |u| = |z|; for k ≥ 0 it may cross beyond 1, which is
    equivalent because u = 1 is then a regular point.
    """
    return _beta_B(z, k, l, st).value


def _beta_B(z: complex, k: int, l: int, st: LimitSettings) -> LimitValue:
    z = complex(z)
    if not z.imag > 0:
        raise ValueError("need Im z > 0")
    # arcs of |u| = |z| stay |z| away from the pole at 0; for k >= 0, u = 1 is
    # not singular, so crossing the positive axis beyond 1 changes nothing
    through = -abs(z) if k < 0 else abs(z)
    res = _arc_integral(lambda u: (1 - u) ** k * u ** (-l - 1), z, through, st.quad)
    return LimitValue(_real(res.require("B"), "B"), True, res.nodes)


# ------------------------------------------------------------------- Airy

_W_LEFT, _W_RIGHT = cmath.exp(5j * math.pi / 6), cmath.exp(1j * math.pi / 6)


def _ai_contour(x: float) -> PathContour:
    """The bent contour ∞e^{5πi/6} → · → ∞e^{πi/6}, moved through the saddle points.

    For x ≥ 0 the corner sits at i√x; for x < 0 the path runs along the real
    axis between the two real saddles ±√|x|.  Both are deformations of the
    contour through 0 and keep |integrand| ≤ 1.
    """
    if x >= 0:
        return PathContour((1j * math.sqrt(x),), head=Ray(_W_LEFT), tail=Ray(_W_RIGHT))
    a = math.sqrt(-x)
    return PathContour((-a, a), head=Ray(_W_LEFT), tail=Ray(_W_RIGHT))


def _ai_integrand(x: float, deriv: int):
    def f(s):
        v = np.exp(1j * (s**3 / 3 + x * s))
        return v if deriv == 0 else 1j * s * v

    return f


def airy_Ai(x: float, deriv: int = 0, quad: QuadratureSettings = QuadratureSettings(32, 1 << 16, 1e-13),
            info: dict | None = None) -> float:
    """Ai(x) (or Ai′(x)) = (1/2π)∫ e^{is³/3 + ixs} ds over the bent contour."""
    if deriv not in (0, 1):
        raise ValueError("deriv must be 0 or 1")
    res = path_integral(_ai_integrand(x, deriv), _ai_contour(x), quad)
    if info is not None:
        info["nodes"] = res.nodes
    # (1/2π)∫ = i · (1/2πi)∫
    return _real(1j * res.require(f"Ai({x})"), "Ai", 1e-9)


@lru_cache(maxsize=1 << 16)
def airy_Ai_fixed(x: float, deriv: int = 0) -> float:
    """Ai on the same contour with a fixed rule sized from x (for bulk λ-quadrature)."""
    x = float(x)
    xg, wg = gauss_legendre(20)
    pieces = []
    a = math.sqrt(abs(x))
    # ray decay is at least e^{−r³/3}; r = 7 leaves e^{−114}
    L, ray_panels = 7.0, 28 + int(4 * a)
    if x >= 0:
        v = 1j * a
        pieces += [(v + L * _W_LEFT, v, ray_panels), (v, v + L * _W_RIGHT, ray_panels)]
    else:
        pieces += [(-a + L * _W_LEFT, -a, ray_panels), (a, a + L * _W_RIGHT, ray_panels)]
        # phase derivative on [−a, a] is ≤ a²
        pieces.append((-a, a, max(2, int(math.ceil(2 * a * max(2.0, a * a / 2))))))
    f = _ai_integrand(x, deriv)
    total = 0j
    for p, q, n in pieces:
        t = ((np.arange(n)[:, None] + xg[None, :]) / n).ravel()
        s = p + (q - p) * t
        total += np.sum(f(s) * np.tile(wg, n)) * (q - p) / n
    return float((total / (2 * math.pi)).real)


def airy_Ai_series(x: float, deriv: int = 0, terms: int = 80) -> float:
    """Maclaurin series of Ai (or Ai′); accurate for |x| ≲ 3, used as an independent check."""
    c1 = 1 / (3 ** (2 / 3) * math.gamma(2 / 3))
    c2 = 1 / (3 ** (1 / 3) * math.gamma(1 / 3))
    # f = Σ 3^k (1/3)_k x^{3k}/(3k)!,  g = Σ 3^k (2/3)_k x^{3k+1}/(3k+1)!
    f = g = fp = gp = 0.0
    tf, tg = 1.0, x
    for k in range(terms):
        f += tf
        g += tg
        if deriv:
            fp += tf * 3 * k / x if x != 0 else 0.0
            gp += tg * (3 * k + 1) / x if x != 0 else (1.0 if k == 0 else 0.0)
        tf *= 3 * (k + 1 / 3) * x**3 / ((3 * k + 1) * (3 * k + 2) * (3 * k + 3))
        tg *= 3 * (k + 2 / 3) * x**3 / ((3 * k + 2) * (3 * k + 3) * (3 * k + 4))
    return c1 * fp - c2 * gp if deriv else c1 * f - c2 * g


def _lambda_quad(fn, lo: float, hi: float, panel: float, order: int) -> tuple[float, float]:
    n = max(1, int(math.ceil((hi - lo) / panel)))
    xg, wg = gauss_legendre(order)
    lam = (lo + (hi - lo) * (np.arange(n)[:, None] + xg[None, :]) / n).ravel()
    vals = np.array([fn(v) for v in lam]) * np.tile(wg, n) * (hi - lo) / n
    return float(vals.sum()), float(np.abs(vals).sum())


def airy_ext_integral(a1: AiryArg, a2: AiryArg, rel_tol: float = 1e-10, info: dict | None = None) -> float:
    """Extended Airy kernel from its λ-integral over products of Airy functions."""
    d = a1.tau - a2.tau

    def integrand(lam):
        return math.exp(-lam * d) * airy_Ai_fixed(a1.sigma + lam) * airy_Ai_fixed(a2.sigma + lam)

    sign, direction = (1.0, 1.0) if d >= 0 else (-1.0, -1.0)
    # cutoff: for τ1 ≥ τ2 the Airy decay wins; otherwise e^{λ|d|} with λ → −∞ does
    L = 8.0 if d >= 0 else max(8.0, 48.0 / abs(d))
    for _ in range(8):
        tail = abs(integrand(direction * L)) + abs(integrand(direction * (L - 0.5)))
        lo, hi = (0.0, L) if d >= 0 else (-L, 0.0)
        v1, scale = _lambda_quad(integrand, lo, hi, 0.5, 16)
        v2, _ = _lambda_quad(integrand, lo, hi, 0.5, 24)
        if tail * 4 <= 1e-16 * max(scale, 1e-300) + 1e-300 and abs(v1 - v2) <= max(rel_tol * abs(v2), 1e-15 * scale):
            if info is not None:
                info["nodes"] = 40 * max(1, int(math.ceil((hi - lo) / 0.5)))
            return sign * v2
        L *= 2
    raise NumericalFailure("extended Airy λ-integral tail test failed", sign * v2)


# ----------------------------------------------- double integrals on rays


def _graded_panels(L: float, h0: float, order: int, split: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes/weights on [0, L] with panels halving towards 0 down to h0."""
    edges = [0.0]
    h = h0
    while h < min(1.0, L):
        edges.append(h)
        h *= 2
    r = edges[-1]
    while r < L - 1e-12:
        r = min(L, r + 0.5)
        edges.append(r)
    edges = np.array(edges)
    if split > 1:
        fine = [edges[0]]
        for p, q in zip(edges[:-1], edges[1:]):
            fine += list(p + (q - p) * np.arange(1, split + 1) / split)
        edges = np.array(fine)
    xg, wg = gauss_legendre(order)
    a, b = edges[:-1, None], edges[1:, None]
    return (a + (b - a) * xg).ravel(), ((b - a) * wg).ravel()


@dataclass(frozen=True)
class _RayPiece:
    """vertex + r·direction, r ∈ [0, ∞); sign +1 runs outward, −1 inward."""

    vertex: complex
    direction: complex
    sign: int


def _rays_rule(pieces, f, h0: float, order: int, split: int, L0: float = 4.0):
    """Nodes z, weights dz (with orientation) and f(z) on truncated rays; L doubles until f is negligible."""
    zs, ws, fs = [], [], []
    for pc in pieces:
        L = L0
        while True:
            end = pc.vertex + L * pc.direction
            r, w = _graded_panels(L, h0, order, split)
            z = pc.vertex + r * pc.direction
            fz = f(z)
            peak = np.max(np.abs(fz))
            if abs(f(np.array([end]))[0]) <= 1e-20 * peak or L >= 64:
                break
            L *= 2
        zs.append(z)
        ws.append(pc.sign * pc.direction * w)
        fs.append(fz)
    return np.concatenate(zs), np.concatenate(ws), np.concatenate(fs)


def _separable_double(u_pieces, f, w_pieces, g, denom, h0: float, rel_tol: float) -> tuple[complex, int]:
    """(1/2πi)² ∫∫ f(u) g(w) / denom(u, w) du dw with graded refinement."""
    prev = None
    for level, (order, split) in enumerate(((12, 1), (16, 2), (24, 2), (32, 3))):
        u, wu, fu = _rays_rule(u_pieces, f, h0, order, split)
        w, ww, gw = _rays_rule(w_pieces, g, h0, order, split)
        a = fu * wu
        b = gw * ww
        val = a @ (1 / denom(u[:, None], w[None, :])) @ b / TWO_PI_I**2
        scale = float(np.abs(a) @ np.abs(1 / denom(u[:, None], w[None, :])) @ np.abs(b)) / (4 * math.pi**2)
        nodes = len(u) * len(w)
        if prev is not None and abs(val - prev) <= max(rel_tol * abs(val), 1e-14 * scale):
            return val, nodes
        prev = val
    raise NumericalFailure(f"double ray integral did not settle (change {abs(val - prev):.3g})", val)


def airy_ext_double(a1: AiryArg, a2: AiryArg, st: LimitSettings = DEFAULT, rel_tol: float = 1e-10,
                    info: dict | None = None) -> float:
    """Extended Airy kernel from its double integral on bent contours.

    ν1 = −τ1 + δ/2, ν2 = τ2 + δ/2 with δ = st.airy_offset; δ = 0 is the
    reduction in which the denominator is u − w and both contours meet at 0.
    When τ1 < τ2 a Gaussian term is subtracted.
    """
    t1, s1, t2, s2 = a1.tau, a1.sigma, a2.tau, a2.sigma
    dl = st.airy_offset
    n1, n2 = -t1 + dl / 2, t2 + dl / 2
    D = t1 - t2 + n1 + n2
    pref = -n1 * s1 - n2 * s2 + n1**3 / 3 + n2**3 / 3

    def f(u):
        return np.exp(pref - (s1 - n1 * n1) * u + n1 * u * u + u**3 / 3)

    def g(w):
        return np.exp((s2 - n2 * n2) * w + n2 * w * w - w**3 / 3)

    e = lambda ang: cmath.exp(1j * ang)  # noqa: E731
    u_pieces = [_RayPiece(0, e(-math.pi / 3), -1), _RayPiece(0, e(math.pi / 3), 1)]
    w_pieces = [_RayPiece(0, e(4 * math.pi / 3), -1), _RayPiece(0, e(2 * math.pi / 3), 1)]
    h0 = 1e-12 if D == 0 else min(1e-3, D / 16)
    val, nodes = _separable_double(u_pieces, f, w_pieces, g, lambda u, w: D + u - w, h0, rel_tol)
    if info is not None:
        info["nodes"] = nodes
    out = _real(val, "extended Airy kernel")
    if t1 < t2:
        out -= airy_gaussian(a1, a2)
    return out


def airy_gaussian(a1: AiryArg, a2: AiryArg) -> float:
    """The extra term for τ1 < τ2."""
    d = a2.tau - a1.tau
    if not d > 0:
        raise ValueError("needs τ1 < τ2")
    return math.exp(-((a1.sigma - a2.sigma) ** 2) / (4 * d) - d * (a1.sigma + a2.sigma) / 2 + d**3 / 12) / math.sqrt(
        4 * math.pi * d
    )


def pearcey_P(p1: PearceyArg, p2: PearceyArg, st: LimitSettings = DEFAULT, rel_tol: float = 1e-10,
              info: dict | None = None) -> float:
    """(1/2πi)² ∫∫ e^{w⁴ − u⁴ + t1u² − t2w² + s1u − s2w} / (u − w) du dw, minus a Gaussian when t1 > t2.

    u runs up the imaginary axis.  w runs over two wedges: ∞e^{iπ/4} → δ →
    ∞e^{−iπ/4} and ∞e^{−3iπ/4} → −δ → ∞e^{3iπ/4}; the corners are pushed off
    the origin by δ so the contours never meet.
    """
    t1, s1, t2, s2 = p1.t, p1.s, p2.t, p2.s
    dl = st.pearcey_delta
    if not dl > 0:
        raise ValueError("pearcey_delta must be positive")

    def f(u):
        return np.exp(-(u**4) + t1 * u * u + s1 * u)

    def g(w):
        return np.exp(w**4 - t2 * w * w - s2 * w)

    e = lambda ang: cmath.exp(1j * ang)  # noqa: E731
    u_pieces = [_RayPiece(0, -1j, -1), _RayPiece(0, 1j, 1)]
    w_pieces = [
        _RayPiece(dl, e(math.pi / 4), -1), _RayPiece(dl, e(-math.pi / 4), 1),
        _RayPiece(-dl, e(-3 * math.pi / 4), -1), _RayPiece(-dl, e(3 * math.pi / 4), 1),
    ]
    val, nodes = _separable_double(u_pieces, f, w_pieces, g, lambda u, w: u - w, dl / 8, rel_tol)
    if info is not None:
        info["nodes"] = nodes
    out = _real(val, "Pearcey kernel")
    if t1 > t2:
        out -= math.exp(-((s2 - s1) ** 2) / (2 * (t1 - t2))) / math.sqrt(2 * math.pi * abs(t1 - t2))
    return out


# ----------------------------------------------------------------- dispatch

LIMIT_NAMES = ("J", "sine", "beta", "airy", "airy_ext", "airy_ext_double", "pearcey")


def evaluate(name: str, args: dict, st: LimitSettings = DEFAULT) -> LimitValue:
    """Evaluate a limit kernel by name; raises NumericalFailure when a quadrature does not settle."""
    if name == "J":
        return _kernel_J(args["s"], int(args["x"]), args["t"], int(args["y"]), st)
    if name == "sine":
        return _sine_S(SineParams(complex(args["z"])), args["dt"], int(args["dx"]), st)
    if name == "beta":
        return _beta_B(complex(args["z"]), int(args["k"]), int(args["l"]), st)
    info: dict = {}
    if name == "airy":
        v = airy_Ai(args["x"], int(args.get("deriv", 0)), info=info)
    elif name in ("airy_ext", "airy_ext_double"):
        a1, a2 = AiryArg(args["tau1"], args["sigma1"]), AiryArg(args["tau2"], args["sigma2"])
        v = airy_ext_integral(a1, a2, info=info) if name == "airy_ext" else airy_ext_double(a1, a2, st, info=info)
    elif name == "pearcey":
        v = pearcey_P(PearceyArg(args["t1"], args["s1"]), PearceyArg(args["t2"], args["s2"]), st, info=info)
    else:
        raise ValueError(f"unknown limit kernel {name!r}; choose from {', '.join(LIMIT_NAMES)}")
    return LimitValue(v, True, int(info.get("nodes", 0)))
