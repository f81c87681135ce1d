"""Polynomials Q_{a,b} and R_{a,b,c}, region classification and scaling constants.

With γ⁺/N → a and γ⁻/N → b the kernel integrand is e^{N A(z)}, where

    A(z; c; d) = a/z + b z + c log z + d log(1 − z),

and z²(1 − z)A′(z; c; 1) = R_{a,b,c}(z) = −bz³ + (b − c − 1)z² + (c + a)z − a.
Q_{a,b}(c) = 16·disc(R_{a,b,c}) vanishes exactly where R has a multiple root,
which locates the edges of the limit shape.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Literal

import numpy as np

# distinct roots closer than this are merged into one multiple root
PAIR_TOL = 1e-5
# |c − q| below this counts as sitting on a boundary
BOUNDARY_TOL = 1e-9


class DomainError(ValueError):
    """Arguments outside the domain of a shape operation."""


class RegionError(ValueError):
    """z₊ requested where R_{a,b,c} has only real roots."""


class BoundaryError(ValueError):
    """c coincides with a root of Q_{a,b}."""


@dataclass(frozen=True)
class ProportionalParams:
    a: float
    b: float

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0):
            raise DomainError("need a, b > 0")


# ------------------------------------------------------------------ Q and R


def q_coefficients(pp: ProportionalParams) -> tuple[float, float, float, float, float]:
    """(p0, p1, p2, p3, 16): Q = Σ p_k (z + 1/2)^k."""
    a, b = pp.a, pp.b
    p0 = 1 - 12 * (a + b) + 4 * (a * a + b * b) + 184 * a * b - 256 * a * b * (a + b) + 64 * a * b * (a - b) ** 2
    p1 = 8 * (b - a) * (7 - 2 * a - 2 * b + 16 * a * b)
    p2 = 8 * (2 * (a + b) ** 2 - 10 * (a + b) - 1)
    p3 = 32 * (b - a)
    return p0, p1, p2, p3, 16.0


def _q_poly(pp: ProportionalParams) -> np.polynomial.Polynomial:
    """Q in the monomial basis of z."""
    shifted = np.polynomial.Polynomial(q_coefficients(pp))
    return shifted(np.polynomial.Polynomial([0.5, 1.0]))


def q_value(pp: ProportionalParams, c: float, deriv: int = 0) -> float:
    p = _q_poly(pp)
    return float(p.deriv(deriv)(c) if deriv else p(c))


@dataclass(frozen=True)
class RealRoots:
    roots: tuple[float, ...]  # distinct, increasing
    multiplicities: tuple[int, ...]

    @property
    def m(self) -> int:
        return len(self.roots)

    def with_multiplicity(self) -> list[float]:
        return [r for r, k in zip(self.roots, self.multiplicities) for _ in range(k)]


def _cluster_real(eigs: np.ndarray, poly: np.polynomial.Polynomial, imag_tol: float) -> RealRoots:
    """Real roots of poly from its eigenvalues, merging near-coincident pairs."""
    scale = max(1.0, float(np.max(np.abs(eigs))))
    # a double root splits into ±O(√eps) which can be imaginary
    real = sorted(float(z.real) for z in eigs if abs(z.imag) <= max(imag_tol, np.sqrt(PAIR_TOL) * 1e-2) * scale)
    groups: list[list[float]] = []
    for r in real:
        if groups and r - groups[-1][-1] <= PAIR_TOL * scale:
            groups[-1].append(r)
        else:
            groups.append([r])
    roots, mult = [], []
    for g in groups:
        z = float(np.mean(g))
        if len(g) > 1:
            # multiple root: polish as a root of the derivative
            d1, d2 = poly.deriv(1), poly.deriv(2)
            for _ in range(20):
                h = d2(z)
                if h == 0:
                    break
                step = d1(z) / h
                z -= step
                if abs(step) < 1e-16 * scale:
                    break
        roots.append(float(z))
        mult.append(len(g))
    return RealRoots(tuple(roots), tuple(mult))


def q_real_roots(pp: ProportionalParams, imag_tol: float = 1e-9) -> RealRoots:
    """Distinct real roots of Q_{a,b} with multiplicities (companion-matrix eigenvalues)."""
    p = _q_poly(pp)
    coef = p.coef
    if not np.all(np.isfinite(coef)):
        from .quadrature import NumericalFailure

        raise NumericalFailure("Q coefficients overflow")
    eigs = np.linalg.eigvals(np.polynomial.polynomial.polycompanion(coef))
    # polish simple roots against the polynomial itself
    return _cluster_real(eigs, p, imag_tol)


def r_coefficients(pp: ProportionalParams, c: float) -> tuple[float, float, float, float]:
    """(α, β, γ, δ) of R = αz³ + βz² + γz + δ."""
    return -pp.b, pp.b - c - 1, c + pp.a, -pp.a


def r_value(pp: ProportionalParams, c: float, z):
    al, be, ga, de = r_coefficients(pp, c)
    return ((al * z + be) * z + ga) * z + de


def r_roots(pp: ProportionalParams, c: float) -> np.ndarray:
    """The three roots of R_{a,b,c}, sorted by (real, imaginary) part."""
    al, be, ga, de = r_coefficients(pp, c)
    assert r_value(pp, c, 0.0) == -pp.a and abs(r_value(pp, c, 1.0) + 1) < 1e-12 * (1 + abs(c) + pp.a + pp.b)
    coef = [de / al, ga / al, be / al, 1.0]
    z = np.linalg.eigvals(np.polynomial.polynomial.polycompanion(coef)).astype(complex)
    return np.array(sorted(z, key=lambda w: (round(w.real, 12), w.imag)))


def cubic_discriminant(al: float, be: float, ga: float, de: float) -> float:
    return 18 * al * be * ga * de - 4 * be**3 * de + be**2 * ga**2 - 4 * al * ga**3 - 27 * al**2 * de**2


def discriminant_identity_residual(pp: ProportionalParams, c: float) -> float:
    """|Q(c) − 16·disc(R_{a,b,c})| / (1 + |Q(c)|)."""
    q = q_value(pp, c)
    return abs(q - 16 * cubic_discriminant(*r_coefficients(pp, c))) / (1 + abs(q))


# ------------------------------------------------------------- bulk regions


def z_plus_proportional(pp: ProportionalParams, c: float) -> complex:
    """The root of R_{a,b,c} in the open upper half-plane."""
    z = r_roots(pp, c)
    scale = max(1.0, float(np.max(np.abs(z))))
    upper = [w for w in z if w.imag > 1e-10 * scale]
    if not upper:
        raise RegionError(f"R_{{a,b,c}} has only real roots at c={c}; use classify_region")
    return complex(max(upper, key=lambda w: w.imag))


def z_plus_fixed_gamma(c: float, gamma_plus: float) -> complex:
    """(c + √(c² − 4γ⁺))/2, principal branch."""
    return (c + cmath.sqrt(c * c - 4 * gamma_plus)) / 2


@dataclass(frozen=True)
class RegionLabel:
    kind: Literal["Void", "Saturated", "Bulk"]
    z_plus: complex | None = None

    def __post_init__(self):
        if self.kind == "Bulk" and not (self.z_plus is not None and self.z_plus.imag > 0):
            raise ValueError("Bulk needs z_plus with positive imaginary part")


VOID = RegionLabel("Void")
SATURATED = RegionLabel("Saturated")


def classify_region(pp: ProportionalParams, c: float) -> RegionLabel:
    q = q_real_roots(pp).roots
    if any(abs(c - r) <= BOUNDARY_TOL * max(1.0, abs(r)) for r in q):
        raise BoundaryError(f"c={c} is a root of Q_{{a,b}}")
    if c < q[0] or c > q[-1]:
        return VOID
    if len(q) == 4 and q[1] < c < q[2]:
        return SATURATED
    return RegionLabel("Bulk", z_plus_proportional(pp, c))


def density_limit(region: RegionLabel) -> float:
    if region.kind == "Void":
        return 0.0
    if region.kind == "Saturated":
        return 1.0
    return cmath.phase(region.z_plus) / math.pi


def density_fixed_gamma(beta: float, gamma_plus: float, alpha: float = 0.0, gamma_minus: float | None = None) -> float:
    """lim ρ₁(N, αN + β√N) for fixed γ±.

    At α = −1 the lower diagram is governed by γ⁻ through the γ⁺ ↔ γ⁻ symmetry,
    x ↦ −x − N − 1, which gives 1 − arccos(β/(2√γ⁻))/π there.
    """
    if alpha > 0 or alpha < -1:
        return 0.0
    if -1 < alpha < 0:
        return 1.0
    if alpha == 0:
        edge = 2 * math.sqrt(gamma_plus)
        if beta >= edge:
            return 0.0
        if beta <= -edge:
            return 1.0
        return math.acos(beta / edge) / math.pi
    gm = gamma_plus if gamma_minus is None else gamma_minus
    return density_fixed_gamma(-beta, gm)


# ------------------------------------------------------------ special points


@dataclass(frozen=True)
class PearceyData:
    z0: float
    a: float
    b: float
    c0: float
    zeta: float


def double_root_family(z0: float) -> PearceyData:
    """(a, b, c0) for which R_{a,b,c0} has a triple root at z0 < 0."""
    if not z0 < 0:
        raise DomainError("need z0 < 0")
    d3 = (z0 - 1) ** 3
    return PearceyData(z0, z0**3 / d3, -1 / d3, -(z0**2) * (z0 - 3) / d3, (z0 - 1) / math.sqrt(abs(z0)))


@dataclass(frozen=True)
class EdgeData:
    c1: float
    z1: float
    p3: float
    tau: Callable[[float], float]
    sigma: Callable[[float, float], float]

    @property
    def scale(self) -> float:
        """z1 p3^{1/3}; its sign tells which way particles are flipped."""
        return self.z1 * float(np.cbrt(self.p3))


def airy_constants(pp: ProportionalParams, c1: float) -> EdgeData:
    """z1 (the double root of R_{a,b,c1}), p3 = A‴(z1)/2 and the (τ, σ) maps."""
    qscale = 1 + sum(abs(v) for v in q_coefficients(pp))
    if abs(q_value(pp, c1)) > 1e-9 * qscale:
        raise DomainError(f"c1={c1} is not a root of Q_{{a,b}}")
    if abs(q_value(pp, c1, 1)) <= 1e-6 * qscale:
        raise DomainError(f"c1={c1} is a multiple root of Q_{{a,b}}")
    z = r_roots(pp, c1)
    pairs = [(abs(z[i] - z[j]), i, j) for i in range(3) for j in range(i + 1, 3)]
    d, i, j = min(pairs)
    # c1 carries rounding, so the double root splits by O(√|Q(c1)|)
    if d > 1e-3 * max(1.0, abs(z[i])):
        raise DomainError("no double root of R_{a,b,c1}")
    z1 = float(((z[i] + z[j]) / 2).real)
    al, be, ga, _ = r_coefficients(pp, c1)
    for _ in range(30):
        # Newton on R′ = 3αz² + 2βz + γ
        step = (3 * al * z1 * z1 + 2 * be * z1 + ga) / (6 * al * z1 + 2 * be)
        z1 -= step
        if abs(step) < 1e-16 * max(1.0, abs(z1)):
            break
    a = pp.a
    p3 = -1 / (1 - z1) ** 3 - 3 * a / z1**4 + c1 / z1**3
    cr = float(np.cbrt(p3))

    def tau(t: float) -> float:
        return t / (2 * cr * cr * (z1 - 1) ** 2 * z1)

    def sigma(t: float, s: float) -> float:
        return tau(t) ** 2 - s / (z1 * cr)

    return EdgeData(c1, z1, p3, tau, sigma)


def phase_A(z: complex, c: float, d: float, pp: ProportionalParams) -> complex:
    """a/z + bz + c log z + d log(1 − z), principal logarithms."""
    z = complex(z)
    if z == 0 or z == 1:
        raise DomainError("A is singular at z = 0 and z = 1")
    return pp.a / z + pp.b * z + c * cmath.log(z) + d * cmath.log(1 - z)
