"""Signatures, Gelfand-Tsetlin paths and the point configurations they define."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence


class UsageError(ValueError):
    """Bad arguments from the caller (maps to CLI exit code 1)."""


@dataclass(frozen=True)
class Signature:
    """Nonincreasing integer vector of length N >= 1."""

    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        object.__setattr__(self, "parts", parts)
        if len(parts) == 0:
            raise UsageError("a signature needs at least one part")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise UsageError(f"parts must be nonincreasing: {parts}")

    @property
    def N(self) -> int:
        return len(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __getitem__(self, i: int) -> int:
        return self.parts[i]

    @classmethod
    def parse(cls, text: str) -> "Signature":
        try:
            return cls(tuple(int(t) for t in text.replace(" ", "").split(",") if t != ""))
        except ValueError as exc:
            raise UsageError(f"cannot parse signature {text!r}: {exc}") from exc

    @classmethod
    def zero(cls, N: int) -> "Signature":
        return cls((0,) * N)

    @classmethod
    def from_positions(cls, xs: Iterable[int]) -> "Signature":
        """Inverse of `config_of_signature`: positions x_1 > ... > x_N."""
        xs = sorted(xs, reverse=True)
        return cls(tuple(x + i + 1 for i, x in enumerate(xs)))

    def reflected(self) -> "Signature":
        """(-λ_N, ..., -λ_1): exchanges the two Young diagrams."""
        return Signature(tuple(-p for p in reversed(self.parts)))

    def __str__(self) -> str:
        return ",".join(str(p) for p in self.parts)


@dataclass(frozen=True)
class YoungDiagramPair:
    plus: tuple[int, ...]
    minus: tuple[int, ...]


@dataclass(frozen=True)
class GTPath:
    """Interlacing chain of signatures; level k has k parts."""

    levels: tuple[Signature, ...]

    def __post_init__(self):
        levels = tuple(s if isinstance(s, Signature) else Signature(tuple(s)) for s in self.levels)
        object.__setattr__(self, "levels", levels)
        for k, sig in enumerate(levels, start=1):
            if sig.N != k:
                raise UsageError(f"level {k} has {sig.N} parts")
        for lo, hi in zip(levels, levels[1:]):
            if not interlaces(lo, hi):
                raise UsageError(f"{lo} and {hi} do not interlace")

    @property
    def depth(self) -> int:
        return len(self.levels)

    @property
    def top(self) -> Signature:
        return self.levels[-1]


@dataclass(frozen=True)
class Window:
    lo: int
    hi: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise UsageError(f"empty window [{self.lo}, {self.hi}]")

    def __contains__(self, x: int) -> bool:
        return self.lo <= x <= self.hi

    def positions(self) -> range:
        return range(self.lo, self.hi + 1)

    @classmethod
    def parse(cls, text: str) -> "Window":
        try:
            lo, hi = (int(t) for t in text.split(","))
        except ValueError as exc:
            raise UsageError(f"window must look like 'lo,hi', got {text!r}") from exc
        return cls(lo, hi)


# A point configuration is a set of (level, position) pairs.
PointConfig = frozenset


def _as_sig(s) -> Signature:
    return s if isinstance(s, Signature) else Signature(tuple(s))


def interlaces(lower, upper) -> bool:
    """upper[0] >= lower[0] >= upper[1] >= ... >= lower[N-1] >= upper[N]."""
    lower, upper = _as_sig(lower), _as_sig(upper)
    if upper.N != lower.N + 1:
        raise UsageError("upper must have exactly one more part than lower")
    return all(upper[i] >= lower[i] >= upper[i + 1] for i in range(lower.N))


def weyl_dim(sig) -> int:
    """Dimension of the irreducible U(N) module with highest weight `sig`."""
    lam = _as_sig(sig).parts
    N = len(lam)
    d = Fraction(1)
    for i in range(N):
        for j in range(i + 1, N):
            d *= Fraction(lam[i] - lam[j] + j - i, j - i)
    assert d.denominator == 1 and d >= 1
    return int(d)


def split(sig) -> YoungDiagramPair:
    lam = _as_sig(sig).parts
    plus = tuple(p for p in lam if p > 0)
    minus = tuple(-p for p in reversed(lam) if p < 0)
    return YoungDiagramPair(plus, minus)


def merge(pair: YoungDiagramPair, N: int) -> Signature:
    zeros = N - len(pair.plus) - len(pair.minus)
    if zeros < 0:
        raise UsageError("diagrams have too many rows for length N")
    return Signature(tuple(pair.plus) + (0,) * zeros + tuple(-m for m in reversed(pair.minus)))


def conjugate(partition: Sequence[int]) -> tuple[int, ...]:
    partition = [p for p in partition if p > 0]
    if not partition:
        return ()
    return tuple(sum(1 for p in partition if p > i) for i in range(partition[0]))


def frobenius(partition: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    lam = tuple(p for p in partition if p > 0)
    if any(lam[i] < lam[i + 1] for i in range(len(lam) - 1)):
        raise UsageError(f"not a partition: {partition}")
    lamc = conjugate(lam)
    d = sum(1 for i, p in enumerate(lam) if p > i)
    p = tuple(lam[i] - i - 1 for i in range(d))
    q = tuple(lamc[i] - i - 1 for i in range(d))
    return p, q


def positions(sig) -> tuple[int, ...]:
    """x_i = λ_i - i (1-based i), strictly decreasing."""
    return tuple(p - i for i, p in enumerate(_as_sig(sig).parts, start=1))


def config_of_signature(sig) -> frozenset:
    sig = _as_sig(sig)
    return frozenset((sig.N, x) for x in positions(sig))


def config_of_path(path: GTPath) -> frozenset:
    pts = set()
    for sig in path.levels:
        pts |= config_of_signature(sig)
    return frozenset(pts)


def complement_in_window(cfg: Iterable[tuple[int, int]], w: Window, levels: Iterable[int] | None = None) -> frozenset:
    """Holes of `cfg` inside the window, level by level.

    `levels` lists the levels to complement; by default, those present in cfg.
    """
    cfg = set(cfg)
    if levels is None:
        levels = {n for n, _ in cfg}
    return frozenset((n, x) for n in levels for x in w.positions() if (n, x) not in cfg)


def signatures_in_window(N: int, w: Window) -> Iterator[Signature]:
    """All length-N signatures whose positions λ_i - i all lie in the window."""
    from itertools import combinations

    for xs in combinations(range(w.hi, w.lo - 1, -1), N):
        yield Signature.from_positions(xs)


def lower_neighbours(sig) -> Iterator[Signature]:
    """Signatures of length N-1 interlacing below `sig`."""
    from itertools import product

    mu = _as_sig(sig).parts
    if len(mu) < 2:
        return
    ranges = [range(mu[i + 1], mu[i] + 1) for i in range(len(mu) - 1)]
    for lam in product(*ranges):
        yield Signature(tuple(lam))


def paths_to(sig) -> Iterator[GTPath]:
    sig = _as_sig(sig)
    if sig.N == 1:
        yield GTPath((sig,))
        return
    for lower in lower_neighbours(sig):
        for p in paths_to(lower):
            yield GTPath(p.levels + (sig,))


def count_paths(sig) -> int:
    sig = _as_sig(sig)
    if sig.N == 1:
        return 1
    return sum(count_paths(lo) for lo in lower_neighbours(sig))
