"""Brute-force correlation functions from enumerated signatures and paths."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from .combinatorics import (
    GTPath,
    Signature,
    UsageError,
    Window,
    lower_neighbours,
    paths_to,
    positions,
    signatures_in_window,
    weyl_dim,
)
from .kernel import KernelSettings, SpacetimePoint, kernel_entry
from .weights import PlancherelParams, path_weight_of_top


class WindowTooSmall(ValueError):
    pass


BOUNDARY_TOL = 1e-12


@dataclass(frozen=True)
class EnumerationSpec:
    N: int
    window: Window
    params: PlancherelParams

    def __post_init__(self):
        if not 1 <= self.N <= 4:
            raise UsageError("enumeration supports 1 <= N <= 4")


@dataclass
class OracleReport:
    max_abs_error: float
    worst_tuple: list
    tuples_checked: int
    total_mass: float
    enumeration_window: tuple[int, int] = (0, 0)

    def to_json(self) -> dict:
        return {
            "max_abs_error": self.max_abs_error,
            "worst_tuple": [list(p) for p in self.worst_tuple],
            "tuples_checked": self.tuples_checked,
            "total_mass": self.total_mass,
            "enumeration_window": list(self.enumeration_window),
        }


@lru_cache(maxsize=64)
def _signature_table(spec: EnumerationSpec) -> tuple[tuple[Signature, ...], np.ndarray]:
    sigs = tuple(signatures_in_window(spec.N, spec.window))
    wts = np.array([path_weight_of_top(s, spec.params) * weyl_dim(s) for s in sigs])
    return sigs, wts


def boundary_mass(spec: EnumerationSpec) -> tuple[float, float]:
    """(mass of signatures touching the window edge, largest single weight)."""
    sigs, wts = _signature_table(spec)
    edge = np.array([positions(s)[0] == spec.window.hi or positions(s)[-1] == spec.window.lo for s in sigs])
    return float(np.abs(wts[edge]).sum()), float(wts.max())


def check_window(spec: EnumerationSpec, tol: float = BOUNDARY_TOL) -> None:
    edge, top = boundary_mass(spec)
    if edge > tol * top:
        raise WindowTooSmall(
            f"window [{spec.window.lo}, {spec.window.hi}] leaves boundary mass {edge:.3g} "
            f"(> {tol:g} of the largest weight {top:.3g})"
        )


def widened(spec: EnumerationSpec, tol: float = BOUNDARY_TOL, max_width: int = 80) -> EnumerationSpec:
    """Grow the window two sites at a time on each side until the boundary test passes."""
    cur = spec
    while True:
        try:
            check_window(cur, tol)
            return cur
        except WindowTooSmall:
            w = cur.window
            if w.hi - w.lo > max_width:
                raise
            cur = EnumerationSpec(cur.N, Window(w.lo - 2, w.hi + 2), cur.params)


def enum_signatures(spec: EnumerationSpec, check: bool = True) -> list[tuple[Signature, float]]:
    if check:
        check_window(spec)
    sigs, wts = _signature_table(spec)
    return list(zip(sigs, wts.tolist()))


def enum_paths(spec: EnumerationSpec, check: bool = True) -> Iterator[tuple[GTPath, float]]:
    if spec.N > 3:
        raise UsageError("path enumeration supports N <= 3")
    if check:
        check_window(spec)
    for sig in signatures_in_window(spec.N, spec.window):
        w = path_weight_of_top(sig, spec.params)
        for path in paths_to(sig):
            yield path, w


class PathTable:
    """Chains (λ^(N), ..., λ^(2)) with the level-1 choice left as an interval.

    Every path has probability det[c(x_k^(N) + j)], which depends on the top
    only, so the level-1 choices can be counted rather than listed.
    """

    def __init__(self, spec: EnumerationSpec):
        self.spec = spec
        N = spec.N
        rows_w, rows_pos, rows_iv = [], {n: [] for n in range(2, N + 1)}, []
        for top in signatures_in_window(N, spec.window):
            w = path_weight_of_top(top, spec.params)
            for chain in self._chains(top):
                rows_w.append(w)
                for sig in chain:
                    rows_pos[sig.N].append(positions(sig))
                low = chain[-1]
                rows_iv.append((low[1], low[0]) if low.N == 2 else (low[0], low[0]))
        self.weights = np.array(rows_w)
        self.pos = {n: np.array(v, dtype=np.int64).reshape(len(rows_w), n) for n, v in rows_pos.items()}
        iv = np.array(rows_iv, dtype=np.int64).reshape(len(rows_w), 2)
        # level-1 signature ν ranges over [lo, hi]; its position is ν − 1
        self.l1_lo, self.l1_hi = iv[:, 0] - 1, iv[:, 1] - 1

    @staticmethod
    def _chains(top: Signature):
        if top.N == 1:
            yield (top,)
            return
        stack = [(top,)]
        while stack:
            chain = stack.pop()
            if chain[-1].N == 2:
                yield chain
                continue
            for lo in lower_neighbours(chain[-1]):
                stack.append(chain + (lo,))

    def total_mass(self) -> float:
        return float(np.sum(self.weights * (self.l1_hi - self.l1_lo + 1)))

    def correlation(self, points: Sequence[SpacetimePoint], holes: bool = False) -> float:
        """Probability that all points are particles (or all are holes)."""
        N = self.spec.N
        mask = np.ones(len(self.weights), dtype=bool)
        level1 = []
        for p in points:
            if p.n > N:
                raise UsageError(f"level {p.n} exceeds N = {N}")
            if p.n == 1 and N > 1:
                level1.append(p.x)
                continue
            arr = self.pos[p.n] if p.n >= 2 else self.l1_lo[:, None]
            hit = (arr == p.x).any(axis=1)
            mask &= ~hit if holes else hit
        span = self.l1_hi - self.l1_lo + 1
        if not level1:
            count = span
        elif holes:
            inside = sum(((self.l1_lo <= x) & (x <= self.l1_hi)).astype(np.int64) for x in set(level1))
            count = span - inside
        elif len(set(level1)) > 1:
            return 0.0
        else:
            x = level1[0]
            count = ((self.l1_lo <= x) & (x <= self.l1_hi)).astype(np.int64)
        return float(np.sum(self.weights[mask] * count[mask]))


@lru_cache(maxsize=16)
def path_table(spec: EnumerationSpec) -> PathTable:
    return PathTable(spec)


def exact_corr(points: Sequence[SpacetimePoint], spec: EnumerationSpec, holes: bool = False) -> float:
    """Σ of weights of configurations containing (or avoiding, if holes) every point."""
    points = [p if isinstance(p, SpacetimePoint) else SpacetimePoint(*p) for p in points]
    for p in points:
        if p.n > spec.N:
            raise UsageError(f"level {p.n} exceeds N = {spec.N}")
    if all(p.n == spec.N for p in points) or spec.N > 3:
        if any(p.n != spec.N for p in points):
            raise UsageError("multi-level correlations need N <= 3")
        sigs, wts = _signature_table(spec)
        xs = {p.x for p in points}
        sel = [(not (xs & set(positions(s)))) if holes else xs <= set(positions(s)) for s in sigs]
        return float(wts[np.array(sel, dtype=bool)].sum())
    return path_table(spec).correlation(points, holes)


def random_tuples(rng: np.random.Generator, N: int, window: Window, count: int, kmax: int = 3,
                  single_level: bool = False) -> list[list[SpacetimePoint]]:
    out = []
    xs = np.arange(window.lo, window.hi + 1)
    while len(out) < count:
        k = int(rng.integers(1, kmax + 1))
        if single_level:
            levels = [N] * k
        else:
            levels = rng.integers(1, N + 1, size=k).tolist()
        pts = [SpacetimePoint(int(n), int(rng.choice(xs))) for n in levels]
        if len(set(pts)) == k:
            out.append(pts)
    return out


class KernelCache:
    """Memoized kernel entries for repeated determinant evaluation."""

    def __init__(self, prm: PlancherelParams, st: KernelSettings):
        self.prm, self.st = prm, st
        self._cache: dict = {}

    def K(self, p1: SpacetimePoint, p2: SpacetimePoint) -> float:
        key = (p1, p2)
        if key not in self._cache:
            self._cache[key] = kernel_entry(p1, p2, self.prm, self.st)
        return self._cache[key]

    def det(self, points: Sequence[SpacetimePoint], which: str = "K") -> float:
        M = np.array([[self.K(a, b) for b in points] for a in points])
        if which == "K_delta":
            M = np.array([[float(a == b) for b in points] for a in points]) - M
        return float(np.linalg.det(M))


def compare(spec: EnumerationSpec, which: str = "K", tuple_budget: int = 200, seed: int = 0,
            st: KernelSettings = KernelSettings(), exhaustive_k: int = 2,
            single_level_random: bool = False) -> OracleReport:
    """Max |det[𝒦] − exact correlation| over exhaustive top-level tuples (k <= exhaustive_k)
    plus `tuple_budget` seeded random multi-level tuples.

    `spec.window` is the probe window; enumeration runs on a window widened
    until the boundary test passes.
    """
    enum = widened(spec)
    holes = which == "K_delta"
    kc = KernelCache(spec.params, st)
    tuples: list[list[SpacetimePoint]] = []
    top = [SpacetimePoint(spec.N, x) for x in spec.window.positions()]
    for k in range(1, exhaustive_k + 1):
        tuples += [list(c) for c in itertools.combinations(top, k)]
    rng = np.random.default_rng(seed)
    tuples += random_tuples(rng, spec.N, spec.window, tuple_budget,
                            single_level=single_level_random or spec.N > 3)
    worst, worst_t = 0.0, []
    for t in tuples:
        err = abs(kc.det(t, which) - exact_corr(t, enum, holes))
        if err > worst:
            worst, worst_t = err, t
    sigs, wts = _signature_table(enum)
    return OracleReport(worst, [(p.n, p.x) for p in worst_t], len(tuples), float(wts.sum()),
                        (enum.window.lo, enum.window.hi))
