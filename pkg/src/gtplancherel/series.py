"""Extended-precision kernel backend: the double integral as an exact series.

With |u| < |w| on the contours, 1/(u − w) = −Σ_k u^k / w^{k+1}, so the double
integral splits into one-variable pieces,

    D(p1; p2) = −Σ_{m ≤ −1} g_m(p1) β_m(p2),

where g_m is the Laurent coefficient of u^m in G_{p1}(u) and
β_m = Res_{w=1} h_{p2}(w) w^m.  Both are finite sums:

    g_m = Σ_j (−1)^j C(n, j) s_{m−x−j},      s_l = [u^l] e^{γ⁻u + γ⁺/u},
    β_m = (−1)^n e^{−γ⁺−γ⁻} Σ_j E_{n−1−j} C(m−x−1, j),
    E(t) = e^{−γ⁻t + γ⁺t/(1+t)}.

Everything is carried as fixed-point big integers (numpy object arrays), so
the sums are exact apart from the rounding of s and E, which is tracked
explicitly.  The working precision grows until the tracked error is below
the requested relative tolerance.  This removes the cancellation that limits
double-precision quadrature at large N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import mpmath
import numpy as np

from .kernel import SpacetimePoint, single_term
from .quadrature import NumericalFailure
from .weights import PlancherelParams

# s_l with |s_l| 2^P below 2^-TAIL_BITS is dropped from the Laurent tail
TAIL_BITS = 64


@dataclass(frozen=True)
class SeriesSettings:
    rel_tol: float = 1e-15
    start_bits: int = 96
    max_bits: int = 1 << 15
    # values whose error bound drops below 2^-abs_bits are settled (an exact zero never
    # meets a relative test); 1100 bits is under the smallest normal double
    abs_bits: int = 1100

    def __post_init__(self):
        if not 0 < self.rel_tol < 1:
            raise ValueError("rel_tol must lie in (0, 1)")


def _log2_s(l: int, prm: PlancherelParams) -> float:
    """log2 |s_l| (−inf when s_l = 0)."""
    gp, gm = prm.gamma_plus, prm.gamma_minus
    if gp > 0 and gm > 0:
        with mpmath.workprec(53):
            v = mpmath.besseli(abs(l), 2 * mpmath.sqrt(gp * gm)) * mpmath.sqrt(mpmath.mpf(gm) / gp) ** l
            return float(mpmath.log(v, 2))
    if gp == 0 and gm == 0:
        return 0.0 if l == 0 else -math.inf
    lam, k = (gm, l) if gp == 0 else (gp, -l)
    if k < 0:
        return -math.inf
    return (k * math.log(lam) - math.lgamma(k + 1)) / math.log(2)


def tail_cutoff(prm: PlancherelParams, top: int, bits: int) -> int:
    """Smallest l ≤ top kept in the Laurent tail at `bits` fractional bits."""
    if prm.gamma_plus == 0:
        return min(0, top)
    floor = -(bits + TAIL_BITS)

    def keep(l):
        return _log2_s(l, prm) > floor

    # beyond l ≈ −γ⁺ the s_l decrease monotonically, so bisection is valid there
    hi = min(top, -int(prm.gamma_plus) - 2)
    if not keep(hi):
        return hi
    step = 8
    lo = hi - step
    while keep(lo):
        hi, step = lo, 2 * step
        lo = hi - step
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if keep(mid):
            hi = mid
        else:
            lo = mid
    return hi


def s_values(prm: PlancherelParams, lo: int, hi: int, prec: int) -> list:
    """[u^l] e^{γ⁻u + γ⁺/u} for lo ≤ l ≤ hi, as mpf at `prec` bits."""
    gp, gm = prm.gamma_plus, prm.gamma_minus
    with mpmath.workprec(prec):
        if gp > 0 and gm > 0:
            x = 2 * mpmath.sqrt(mpmath.mpf(gp) * gm)
            r = mpmath.sqrt(mpmath.mpf(gm) / gp)
            top = max(abs(lo), abs(hi)) + 1
            # downward recurrence I_{ν−1} = I_{ν+1} + (2ν/x) I_ν is stable
            I = [mpmath.mpf(0)] * (top + 1)
            I[top] = mpmath.besseli(top, x)
            I[top - 1] = mpmath.besseli(top - 1, x)
            for nu in range(top - 1, 0, -1):
                I[nu - 1] = I[nu + 1] + (2 * nu / x) * I[nu]
            return [r**l * I[abs(l)] for l in range(lo, hi + 1)]
        out = []
        for l in range(lo, hi + 1):
            if gp == 0 and gm == 0:
                out.append(mpmath.mpf(l == 0))
                continue
            lam, k = (gm, l) if gp == 0 else (gp, -l)
            out.append(mpmath.mpf(lam) ** k / mpmath.factorial(k) if k >= 0 else mpmath.mpf(0))
        return out


def _to_fixed(v, bits: int) -> int:
    """round(v·2^bits) computed exactly from the mantissa and exponent."""
    # mpf(v) would round to the ambient precision, so read the raw tuple
    sign, man, exp, _ = (v if isinstance(v, mpmath.mpf) else mpmath.mpf(v))._mpf_
    man = -int(man) if sign else int(man)
    k = exp + bits
    if k >= 0:
        return int(man) << k
    return (int(man) + (1 << (-k - 1))) >> -k


def _fixed(values, bits: int) -> np.ndarray:
    return np.array([_to_fixed(v, bits) for v in values], dtype=object)


@dataclass(frozen=True)
class LaurentTail:
    """g_m·2^bits for m in [m_lo, −1] (exact up to `err` units each)."""

    m_lo: int
    coeffs: np.ndarray
    bits: int
    err: int


@lru_cache(maxsize=512)
def laurent_tail(pt: SpacetimePoint, prm: PlancherelParams, bits: int) -> LaurentTail:
    top = -1 - pt.x  # largest l = m − x − j needed
    lo = tail_cutoff(prm, top, bits)
    if lo > top:
        return LaurentTail(-1, np.zeros(1, dtype=object), bits, 0)
    # Σ_l s_l = e^{γ⁺+γ⁻} bounds every s_l, which fixes the integer-part headroom
    headroom = int((prm.gamma_plus + prm.gamma_minus) / math.log(2)) + 1
    t = _fixed(s_values(prm, lo, top, bits + headroom + 32), bits)
    for _ in range(pt.n):
        t[1:] = t[1:] - t[:-1]
    # rounding of each s_l is ≤ 1/2 unit; the n differences amplify it by ≤ 2^n
    return LaurentTail(lo + pt.x, t, bits, 1 << pt.n)


@lru_cache(maxsize=64)
def e_coeffs(prm: PlancherelParams, n: int, bits: int) -> np.ndarray:
    """Taylor coefficients E_0..E_{n−1} of e^{−γ⁻t + γ⁺t/(1+t)}, fixed point."""
    gp, gm = prm.gamma_plus, prm.gamma_minus
    with mpmath.workprec(bits + 2 * n + 64):
        gp, gm = mpmath.mpf(gp), mpmath.mpf(gm)
        # (1+t)² E' = (γ⁺ − γ⁻(1+t)²) E
        E = [mpmath.mpf(1)]
        for j in range(n - 1):
            v = (gp - gm - 2 * j) * E[j]
            if j >= 1:
                v -= (j - 1 + 2 * gm) * E[j - 1]
            if j >= 2:
                v -= gm * E[j - 2]
            E.append(v / (j + 1))
        return _fixed(E, bits)


def residue_moments(pt: SpacetimePoint, prm: PlancherelParams, m_lo: int, bits: int) -> tuple[np.ndarray, np.ndarray]:
    """β_m·2^bits/((−1)^n e^{−γ⁺−γ⁻}) for m in [m_lo, −1], and per-entry error bounds."""
    n = pt.n
    E = e_coeffs(prm, n, bits)
    M = np.array([m - pt.x - 1 for m in range(m_lo, 0)], dtype=object)
    C = np.ones(len(M), dtype=object)
    acc = np.zeros(len(M), dtype=object)
    abs_acc = np.zeros(len(M), dtype=object)
    for j in range(n):
        acc = acc + E[n - 1 - j] * C
        abs_acc = abs_acc + np.abs(C)
        C = C * (M - j) // (j + 1)
    return acc, abs_acc // 2 + 1


def _pref(pt: SpacetimePoint, prm: PlancherelParams, prec: int):
    with mpmath.workprec(prec):
        return (-1) ** pt.n * mpmath.exp(-mpmath.mpf(prm.gamma_plus) - prm.gamma_minus)


def double_part(p1: SpacetimePoint, p2: SpacetimePoint, prm: PlancherelParams, bits: int):
    """(D, error bound) as mpf at the given fixed-point precision."""
    g = laurent_tail(p1, prm, bits)
    beta, beta_err = residue_moments(p2, prm, g.m_lo, bits)
    dot = int(np.dot(g.coeffs, beta)) if len(beta) else 0
    abs_g = np.abs(g.coeffs)
    bound = int(np.dot(abs_g, beta_err)) + g.err * int(np.sum(np.abs(beta))) + g.err * int(np.sum(beta_err))
    prec = max(bits, dot.bit_length() + 64)
    with mpmath.workprec(prec):
        pref = _pref(p2, prm, prec)
        scale = mpmath.mpf(2) ** (-2 * bits)
        return -pref * dot * scale, abs(pref) * bound * scale


def kernel_value(p1: SpacetimePoint, p2: SpacetimePoint, prm: PlancherelParams,
                 st: SeriesSettings = SeriesSettings()):
    """K(p1; p2) as an mpf with relative error ≤ st.rel_tol."""
    extra = mpmath.mpf(0)
    if p1.n < p2.n:
        extra = mpmath.mpf(single_term(p1, p2))
    bits = st.start_bits + p1.n + p2.n
    while bits <= st.max_bits:
        D, err = double_part(p1, p2, prm, bits)
        val = D + extra
        if err <= st.rel_tol * abs(val) or err <= mpmath.mpf(2) ** -st.abs_bits:
            return val
        deficit = 0 if err == 0 else float(mpmath.log(err / (st.rel_tol * max(abs(val), mpmath.mpf(2) ** -bits)), 2))
        bits = int(bits + max(32, deficit + 16))
    raise NumericalFailure(f"series for K({p1}; {p2}) needs more than {st.max_bits} bits")


def kernel_matrix(points: Sequence[SpacetimePoint], prm: PlancherelParams, which: str = "K",
                  st: SeriesSettings = SeriesSettings()) -> mpmath.matrix:
    k = len(points)
    out = mpmath.matrix(k, k)
    for i, a in enumerate(points):
        for j, b in enumerate(points):
            v = kernel_value(a, b, prm, st)
            if which == "K_delta":
                v = (1 if a == b else 0) - v
            out[i, j] = v
    return out


def corr_det(points: Sequence[SpacetimePoint], prm: PlancherelParams, which: str = "K",
             st: SeriesSettings = SeriesSettings(), weights: Sequence | None = None) -> float:
    """det[𝒦(p_i; p_j)·w_i/w_j] in extended precision (w optional conjugation)."""
    points = list(points)
    if len(set(points)) != len(points):
        raise ValueError("points must be distinct")
    M = kernel_matrix(points, prm, which, st)
    if weights is not None:
        for i in range(len(points)):
            for j in range(len(points)):
                M[i, j] *= mpmath.mpf(weights[i]) / weights[j]
    with mpmath.workprec(max(128, mpmath.mp.prec)):
        return float(mpmath.det(M))
