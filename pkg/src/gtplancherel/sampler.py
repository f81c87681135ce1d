"""Sampling level-N signatures under the Plancherel weights.

Two samplers: exact inverse-CDF draws from the enumerated weight table
(N ≤ 3) and a Metropolis chain with single-coordinate ±1 moves for larger N.
Both take an explicit seed; nothing touches global random state.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .combinatorics import Signature, UsageError, Window, positions, signatures_in_window
from .oracle import EnumerationSpec, enum_signatures, widened
from .weights import PlancherelParams, plancherel_weight


def default_window(N: int, prm: PlancherelParams) -> Window:
    """[−N − 8√(γ⁻N + N), 8√(γ⁺N + N)] on positions λ_i − i."""
    lo = -N - math.ceil(8 * math.sqrt(prm.gamma_minus * N + N))
    hi = math.ceil(8 * math.sqrt(prm.gamma_plus * N + N))
    return Window(lo, hi)


@dataclass(frozen=True)
class SamplerConfig:
    N: int
    params: PlancherelParams = field(default_factory=PlancherelParams)
    steps: int = 10_000
    burn_in: int = 1_000
    seed: int = 0
    window: Window | None = None
    thin: int = 1

    def __post_init__(self):
        if self.N < 1:
            raise UsageError("N must be positive")
        if not self.steps > self.burn_in >= 0:
            raise UsageError("need steps > burn_in >= 0")
        if self.thin < 1:
            raise UsageError("thin must be positive")
        if self.window is None:
            object.__setattr__(self, "window", default_window(self.N, self.params))
        zero = positions(Signature.zero(self.N))
        if zero[0] not in self.window or zero[-1] not in self.window:
            raise UsageError("window must contain the zero signature")


# --------------------------------------------------------------- exact draws


def exact_sample_small(cfg: SamplerConfig, count: int, widen: bool = False) -> list[Signature]:
    """i.i.d. draws by inverse CDF over the enumerated, normalised weight table."""
    if cfg.N > 3:
        raise UsageError("exact sampling supports N <= 3")
    spec = EnumerationSpec(cfg.N, cfg.window, cfg.params)
    if widen:
        spec = widened(spec)
    table = enum_signatures(spec)
    sigs = [s for s, _ in table]
    w = np.clip(np.array([v for _, v in table]), 0, None)
    cdf = np.cumsum(w / w.sum())
    rng = np.random.default_rng(cfg.seed)
    idx = np.searchsorted(cdf, rng.random(count), side="right")
    return [sigs[min(i, len(sigs) - 1)] for i in idx]


# ------------------------------------------------------------- Metropolis


@lru_cache(maxsize=1 << 18)
def _weight(parts: tuple[int, ...], prm: PlancherelParams) -> float:
    return plancherel_weight(Signature(parts), prm)


def propose(parts: tuple[int, ...], i: int, step: int, window: Window) -> tuple[int, ...] | None:
    """λ with λ_i moved by step, or None if that breaks monotonicity or leaves the window."""
    new = list(parts)
    new[i] += step
    if i > 0 and new[i] > new[i - 1]:
        return None
    if i < len(new) - 1 and new[i] < new[i + 1]:
        return None
    x = new[i] - (i + 1)
    if x not in window:
        return None
    return tuple(new)


def mcmc_sample(cfg: SamplerConfig, count: int) -> list[Signature]:
    """Metropolis chain from the zero signature; `count` states recorded after burn-in.

    A sweep is N proposals.  The chain runs max(cfg.steps, burn_in + count·thin)
    sweeps and records every `thin`-th sweep after burn-in.
    """
    prm, N, window = cfg.params, cfg.N, cfg.window
    rng = np.random.default_rng(cfg.seed)
    state = tuple([0] * N)
    w = _weight(state, prm)
    if not w > 0:
        raise RuntimeError("zero-weight initial state")
    out: list[Signature] = []
    sweeps = max(cfg.steps, cfg.burn_in + count * cfg.thin)
    coords = rng.integers(0, N, size=(sweeps, N))
    signs = rng.integers(0, 2, size=(sweeps, N)) * 2 - 1
    us = rng.random((sweeps, N))
    for s in range(sweeps):
        for j in range(N):
            new = propose(state, int(coords[s, j]), int(signs[s, j]), window)
            if new is None:
                continue
            w_new = _weight(new, prm)
            if w_new >= w or us[s, j] * w < w_new:
                state, w = new, w_new
        if s >= cfg.burn_in and (s - cfg.burn_in) % cfg.thin == 0 and len(out) < count:
            out.append(Signature(state))
    return out


def transition_matrix(N: int, prm: PlancherelParams, window: Window) -> tuple[list[Signature], np.ndarray]:
    """One-proposal transition matrix of the Metropolis rule on all signatures in the window."""
    sigs = list(signatures_in_window(N, window))
    index = {s.parts: k for k, s in enumerate(sigs)}
    P = np.zeros((len(sigs), len(sigs)))
    for k, s in enumerate(sigs):
        w = _weight(s.parts, prm)
        for i in range(N):
            for step in (-1, 1):
                q = 1 / (2 * N)
                new = propose(s.parts, i, step, window)
                if new is None:
                    P[k, k] += q
                    continue
                acc = 1.0 if w <= 0 else min(1.0, max(_weight(new, prm), 0.0) / w)
                P[k, index[new]] += q * acc
                P[k, k] += q * (1 - acc)
    return sigs, P


def stationarity_residual(N: int, prm: PlancherelParams, window: Window) -> float:
    """max |πP − π| with π the normalised weights on the window."""
    sigs, P = transition_matrix(N, prm, window)
    pi = np.array([max(_weight(s.parts, prm), 0.0) for s in sigs])
    pi /= pi.sum()
    return float(np.max(np.abs(pi @ P - pi)))


# ---------------------------------------------------------------- summaries


def empirical_density(samples: Sequence[Signature], N: int | None = None) -> dict[int, float]:
    """Occupation frequency of each position under {λ_i − i}."""
    if not samples:
        raise ValueError("no samples")
    if N is not None and any(s.N != N for s in samples):
        raise UsageError("samples of mixed length")
    counts: Counter = Counter()
    for s in samples:
        counts.update(positions(s))
    return {x: c / len(samples) for x, c in sorted(counts.items())}


def batch_means_stderr(indicator: np.ndarray, batches: int = 50) -> float:
    """Standard error of the mean of a correlated series by non-overlapping batch means."""
    n = len(indicator) // batches * batches
    if n == 0:
        return float("nan")
    means = indicator[:n].reshape(batches, -1).mean(axis=1)
    return float(means.std(ddof=1) / math.sqrt(batches))
