"""The weight function E(z), its Fourier coefficients and the level-N weights."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import special

from .combinatorics import GTPath, Signature, positions, weyl_dim


@dataclass(frozen=True)
class PlancherelParams:
    gamma_plus: float = 0.0
    gamma_minus: float = 0.0

    def __post_init__(self):
        gp, gm = float(self.gamma_plus), float(self.gamma_minus)
        if not (gp >= 0 and gm >= 0):
            raise ValueError("gamma parameters must be nonnegative")
        object.__setattr__(self, "gamma_plus", gp)
        object.__setattr__(self, "gamma_minus", gm)

    def swapped(self) -> "PlancherelParams":
        return PlancherelParams(self.gamma_minus, self.gamma_plus)


def E_eval(z, p: PlancherelParams):
    """E(z) = exp(γ⁺(z−1) + γ⁻(z⁻¹−1))."""
    z = np.asarray(z, dtype=complex)
    if np.any(z == 0):
        raise ZeroDivisionError("E is singular at z = 0")
    out = np.exp(p.gamma_plus * (z - 1) + p.gamma_minus * (1 / z - 1))
    return out[()] if out.ndim == 0 else out


@lru_cache(maxsize=100_000)
def fourier_coeff(l: int, p: PlancherelParams) -> float:
    """c(l) = e^{−γ⁺−γ⁻} Σ_k (γ⁺)^{k+l}(γ⁻)^k / ((k+l)! k!), k ≥ max(0, −l)."""
    gp, gm = p.gamma_plus, p.gamma_minus
    l = int(l)
    k = max(0, -l)
    if (gp == 0 and k + l > 0) or (gm == 0 and k > 0):
        return 0.0
    # log of the first term, then ratios term_{k+1}/term_k = gp*gm/((k+l+1)(k+1))
    log_first = -gp - gm
    if k + l > 0:
        log_first += (k + l) * math.log(gp) - math.lgamma(k + l + 1)
    if k > 0:
        log_first += k * math.log(gm) - math.lgamma(k + 1)
    term = math.exp(log_first)
    total = term
    ratio = gp * gm
    while True:
        term *= ratio / ((k + l + 1) * (k + 1))
        k += 1
        total += term
        if term < 1e-18 * total or term == 0.0:
            break
    return total


def skellam_pmf(l: int, p: PlancherelParams) -> float:
    """Law of Poisson(γ⁺) − Poisson(γ⁻) at l, via the modified Bessel function."""
    gp, gm = p.gamma_plus, p.gamma_minus
    if gp == 0 or gm == 0:
        lam, sign = (gp, 1) if gm == 0 else (gm, -1)
        m = sign * l
        if m < 0:
            return 0.0
        if lam == 0:
            return 1.0 if m == 0 else 0.0
        return math.exp(-lam + m * math.log(lam) - math.lgamma(m + 1))
    x = 2 * math.sqrt(gp * gm)
    # ive(v, x) = I_v(x) e^{-x}
    iv = float(special.ive(abs(l), x))
    if iv > 0:
        log_pmf = -gp - gm + x + 0.5 * l * math.log(gp / gm) + math.log(iv)
        if log_pmf < 700:
            return math.exp(log_pmf)
    # very lopsided γ±: the Bessel factor underflows; the power series stays in range
    return fourier_coeff(l, p)


def c_matrix(xs, p: PlancherelParams) -> np.ndarray:
    """[c(x_k + j)]_{j,k}, j = 1..N."""
    N = len(xs)
    return np.array([[fourier_coeff(x + j, p) for x in xs] for j in range(1, N + 1)])


def path_weight_of_top(sig, p: PlancherelParams) -> float:
    """det[c(λ_k − k + j)]: the probability of any single path ending at sig."""
    xs = positions(sig)
    return float(np.linalg.det(c_matrix(xs, p)))


def plancherel_weight(sig, p: PlancherelParams) -> float:
    sig = sig if isinstance(sig, Signature) else Signature(tuple(sig))
    return path_weight_of_top(sig, p) * weyl_dim(sig)


def path_weight(path: GTPath, p: PlancherelParams) -> float:
    return path_weight_of_top(path.top, p)
