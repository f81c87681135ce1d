"""Contour integration in the complex plane.

Every routine returns (1/2πi)∫ f(z) dz.  Closed circles use the periodic
trapezoid rule (spectrally accurate for analytic integrands); open polylines
and rays use composite Gauss-Legendre panels.  Refinement doubles the node
count until two successive estimates agree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

_EPS = np.finfo(float).eps
TWO_PI_I = 2j * math.pi


class NumericalFailure(RuntimeError):
    """A quadrature did not converge; carries the last estimate."""

    def __init__(self, message: str, estimate: complex | float | None = None):
        super().__init__(message)
        self.estimate = estimate


@dataclass(frozen=True)
class QuadratureSettings:
    initial_nodes: int = 128
    max_nodes: int = 65536
    rel_tol: float = 1e-9

    def __post_init__(self):
        if self.initial_nodes < 2 or self.initial_nodes > self.max_nodes:
            raise ValueError("need 2 <= initial_nodes <= max_nodes")
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")


@dataclass(frozen=True)
class QuadResult:
    value: complex
    converged: bool
    nodes: int
    error: float
    scale: float = 0.0

    def require(self, what: str = "integral") -> complex:
        if not self.converged:
            raise NumericalFailure(
                f"{what} did not converge with {self.nodes} nodes (change {self.error:.3g})",
                self.value,
            )
        return self.value


@dataclass(frozen=True)
class CircleContour:
    """|z - center| = radius, counterclockwise unless orientation = -1."""

    center: complex = 0.0
    radius: float = 1.0
    orientation: int = 1

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("radius must be positive")
        if self.orientation not in (1, -1):
            raise ValueError("orientation is +1 or -1")

    def contains(self, z: complex) -> bool:
        return abs(z - self.center) < self.radius

    def sample(self, M: int) -> tuple[np.ndarray, np.ndarray]:
        """Nodes z_j and weights w_j with (1/2πi)∮f dz ≈ Σ w_j f(z_j)."""
        theta = 2 * math.pi * np.arange(M) / M
        e = np.exp(1j * theta)
        z = self.center + self.radius * e
        # dz = i r e^{iθ} dθ; dθ = 2π/M; divide by 2πi
        w = self.orientation * self.radius * e / M
        return z, w


# A cycle is a formal sum of oriented circles (e.g. an annulus boundary).
Cycle = Sequence[CircleContour]


def _as_cycle(c) -> tuple[CircleContour, ...]:
    return (c,) if isinstance(c, CircleContour) else tuple(c)


def sample_cycle(cycle, M: int) -> tuple[np.ndarray, np.ndarray]:
    zs, ws = zip(*(c.sample(M) for c in _as_cycle(cycle)))
    return np.concatenate(zs), np.concatenate(ws)


def _refine(estimate: Callable[[int], tuple[complex, float]], s: QuadratureSettings) -> QuadResult:
    M = s.initial_nodes
    prev, scale = estimate(M)
    change = math.inf
    while M < s.max_nodes:
        M *= 2
        cur, scale = estimate(M)
        change = abs(cur - prev)
        if change <= max(s.rel_tol * abs(cur), 64 * _EPS * scale):
            return QuadResult(cur, True, M, change, scale)
        prev = cur
    return QuadResult(prev, False, M, change, scale)


def circle_integral(f: Callable[[np.ndarray], np.ndarray], c, s: QuadratureSettings = QuadratureSettings()) -> QuadResult:
    """(1/2πi)∮ f(z) dz over a circle (or a cycle of circles)."""

    def est(M):
        z, w = sample_cycle(c, M)
        terms = np.asarray(f(z), dtype=complex) * w
        return terms.sum(), float(np.abs(terms).sum())

    return _refine(est, s)


def contours_intersect(a: CircleContour, b: CircleContour) -> bool:
    d = abs(a.center - b.center)
    return abs(a.radius - b.radius) <= d <= a.radius + b.radius


def double_circle_integral(
    F: Callable[[np.ndarray, np.ndarray], np.ndarray],
    Cu,
    Cw,
    s: QuadratureSettings = QuadratureSettings(),
    allow_crossing: bool = False,
    block: int = 2048,
) -> QuadResult:
    """(1/2πi)² ∮∮ F(u, w) du dw by a tensor-product trapezoid rule.

    F must broadcast over a column of u-values against a row of w-values.
    """
    if not allow_crossing:
        for a in _as_cycle(Cu):
            for b in _as_cycle(Cw):
                if contours_intersect(a, b):
                    raise ValueError("u and w contours intersect")
    max_nodes = min(s.max_nodes, 8192)

    def est(M):
        u, wu = sample_cycle(Cu, M)
        w, ww = sample_cycle(Cw, M)
        total, scale = 0j, 0.0
        for i in range(0, len(u), block):
            vals = np.asarray(F(u[i:i + block, None], w[None, :]), dtype=complex)
            vals = vals * wu[i:i + block, None] * ww[None, :]
            total += vals.sum()
            scale += float(np.abs(vals).sum())
        return total, scale

    return _refine(est, QuadratureSettings(s.initial_nodes, max(max_nodes, s.initial_nodes), s.rel_tol))


# ---------------------------------------------------------------- open paths


@dataclass(frozen=True)
class Ray:
    """Half line start + r*direction, r >= 0; cutoff is the current truncation."""

    direction: complex
    cutoff: float = 4.0


@dataclass(frozen=True)
class PathContour:
    """Piecewise-linear path, optionally entering from and leaving to infinity.

    `head` is a ray arriving at vertices[0] from infinity along -direction
    (i.e. the path runs from vertices[0] + ∞*direction inward); `tail` leaves
    vertices[-1] along its direction.
    """

    vertices: tuple[complex, ...]
    head: Ray | None = None
    tail: Ray | None = None
    panels: tuple[int, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        verts = tuple(complex(v) for v in self.vertices)
        object.__setattr__(self, "vertices", verts)
        if len(verts) < 2 and self.head is None and self.tail is None:
            raise ValueError("a path needs two vertices or at least one ray")


_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on [0, 1]."""
    if n not in _GL_CACHE:
        x, w = np.polynomial.legendre.leggauss(n)
        _GL_CACHE[n] = ((x + 1) / 2, w / 2)
    return _GL_CACHE[n]


def segment_rule(a: complex, b: complex, panels: int, order: int = 16) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre for ∫_a^b f(z) dz (weights include dz)."""
    x, w = gauss_legendre(order)
    t0 = np.arange(panels)[:, None] / panels
    t = (t0 + x[None, :] / panels).ravel()
    z = a + (b - a) * t
    wt = np.tile(w, panels) * (b - a) / panels
    return z, wt


def path_rule(p: PathContour, density: int, head_len: float | None = None, tail_len: float | None = None,
              order: int = 16) -> tuple[np.ndarray, np.ndarray]:
    """Nodes/weights for the whole path; `density` = panels per unit length (min 1 per segment)."""
    zs, ws = [], []
    v = p.vertices
    if p.head is not None:
        L = head_len if head_len is not None else p.head.cutoff
        start = v[0] + L * p.head.direction
        z, w = segment_rule(start, v[0], max(1, math.ceil(density * L)), order)
        zs.append(z)
        ws.append(w)
    for a, b in zip(v, v[1:]):
        z, w = segment_rule(a, b, max(1, math.ceil(density * abs(b - a))), order)
        zs.append(z)
        ws.append(w)
    if p.tail is not None:
        L = tail_len if tail_len is not None else p.tail.cutoff
        z, w = segment_rule(v[-1], v[-1] + L * p.tail.direction, max(1, math.ceil(density * L)), order)
        zs.append(z)
        ws.append(w)
    return np.concatenate(zs), np.concatenate(ws)


def path_integral(f: Callable[[np.ndarray], np.ndarray], p: PathContour,
                  s: QuadratureSettings = QuadratureSettings(), max_cutoff: float = 256.0) -> QuadResult:
    """(1/2πi)∫ f(z) dz along a polyline with optional infinite rays.

    Rays are truncated at their cutoff, which doubles until the integrand at
    the cut is negligible; panels per unit length double until the estimate
    settles.
    """
    head_len = p.head.cutoff if p.head else 0.0
    tail_len = p.tail.cutoff if p.tail else 0.0

    def tail_ok(L, ray, anchor, scale):
        if ray is None:
            return True
        end = anchor + L * ray.direction
        val = abs(complex(np.asarray(f(np.array([end])), dtype=complex)[0]))
        return val * max(L, 1.0) <= s.rel_tol * max(scale, 1e-300) * 1e-3

    density = max(1, s.initial_nodes // 128)
    result = None
    for _ in range(12):
        def est(M, hl=head_len, tl=tail_len):
            z, w = path_rule(p, M // 16, hl, tl)
            terms = np.asarray(f(z), dtype=complex) * w
            return terms.sum() / TWO_PI_I, float(np.abs(terms).sum()) / (2 * math.pi)

        result = _refine(est, QuadratureSettings(16 * density, max(16 * density, s.max_nodes // 16), s.rel_tol))
        h_ok = tail_ok(head_len, p.head, p.vertices[0], result.scale)
        t_ok = tail_ok(tail_len, p.tail, p.vertices[-1], result.scale)
        if h_ok and t_ok:
            return result
        if not h_ok:
            head_len *= 2
        if not t_ok:
            tail_len *= 2
        if max(head_len, tail_len) > max_cutoff:
            break
    return QuadResult(result.value, False, result.nodes, result.error, result.scale)
