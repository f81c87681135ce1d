from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gtplancherel.combinatorics import (
    GTPath,
    Signature,
    UsageError,
    Window,
    complement_in_window,
    config_of_path,
    conjugate,
    count_paths,
    frobenius,
    interlaces,
    merge,
    positions,
    signatures_in_window,
    split,
    weyl_dim,
)


def signatures(max_n=4, lo=-6, hi=6):
    return st.lists(st.integers(lo, hi), min_size=1, max_size=max_n).map(
        lambda xs: Signature(tuple(sorted(xs, reverse=True))))


def hook_content_dim(sig):
    """dim via s_μ(1^N) for the partition μ = λ − λ_N, by the hook-content formula."""
    N = len(sig)
    mu = [p - sig[-1] for p in sig]
    mu = [p for p in mu if p > 0]
    mut = conjugate(mu)
    d = Fraction(1)
    for i, row in enumerate(mu):
        for j in range(row):
            hook = row - j + mut[j] - i - 1
            d *= Fraction(N + j - i, hook)
    return d


def test_signature_validation():
    with pytest.raises(UsageError):
        Signature((0, 1))
    with pytest.raises(UsageError):
        Signature(())
    assert Signature.parse("4,2,0,0,-1,-3").parts == (4, 2, 0, 0, -1, -3)
    with pytest.raises(UsageError):
        Signature.parse("1,x")


@pytest.mark.parametrize("lower,upper,expected", [
    ((1,), (2, 0), True),
    ((0, 0), (0, 0, 0), True),
    ((2, 2), (2, 1, 0), False),
])
def test_interlaces(lower, upper, expected):
    assert interlaces(lower, upper) is expected


def test_interlaces_needs_adjacent_lengths():
    with pytest.raises(UsageError):
        interlaces((1,), (1,))


def test_weyl_dim_small():
    assert weyl_dim((0, 0, 0)) == 1
    assert weyl_dim((1, 0)) == 2


def test_weyl_dim_frozen():
    # hook-content oracle, frozen
    assert hook_content_dim((4, 2, 0, 0, -1, -3)) == 137781
    assert weyl_dim((4, 2, 0, 0, -1, -3)) == 137781


@given(signatures(max_n=4, lo=-3, hi=3))
def test_weyl_dim_matches_hook_content_and_pattern_count(sig):
    assert weyl_dim(sig) == hook_content_dim(sig)
    assert count_paths(sig) == weyl_dim(sig)


def test_split_examples():
    pair = split((4, 2, 0, 0, -1, -3))
    assert pair.plus == (4, 2) and pair.minus == (3, 1)
    assert split((0, 0)).plus == () and split((0, 0)).minus == ()
    assert split((-1, -2)).minus == (2, 1)


@given(signatures(max_n=6))
def test_split_merge_roundtrip(sig):
    assert merge(split(sig), sig.N) == sig


def test_frobenius():
    assert frobenius(()) == ((), ())
    assert frobenius((4, 2)) == ((3, 0), (1, 0))
    assert frobenius((1, 1, 1)) == ((0,), (2,))


def test_positions():
    assert set(positions((4, 2, 0, 0, -1, -3))) == {3, 0, -3, -4, -6, -9}
    assert positions(Signature.zero(3)) == (-1, -2, -3)
    assert positions((1,)) == (0,)


@given(signatures(max_n=6))
def test_positions_strictly_decreasing_and_invertible(sig):
    xs = positions(sig)
    assert all(a > b for a, b in zip(xs, xs[1:]))
    assert Signature.from_positions(xs) == sig


def test_config_of_path():
    assert config_of_path(GTPath(((0,), (0, 0)))) == {(1, -1), (2, -1), (2, -2)}
    assert config_of_path(GTPath(((1,), (1, 0)))) == {(1, 0), (2, 0), (2, -2)}
    zero = GTPath(tuple(Signature.zero(n) for n in range(1, 4)))
    assert config_of_path(zero) == {(n, -j) for n in range(1, 4) for j in range(1, n + 1)}


def test_gtpath_rejects_non_interlacing():
    with pytest.raises(UsageError):
        GTPath(((3,), (1, 0)))


def test_complement():
    assert complement_in_window({(2, -1), (2, -2)}, Window(-3, 0)) == {(2, -3), (2, 0)}
    assert complement_in_window(set(), Window(0, 2), levels=[1]) == {(1, 0), (1, 1), (1, 2)}


@given(st.sets(st.integers(-4, 4)), st.integers(1, 3))
def test_complement_is_involution(xs, n):
    w = Window(-4, 4)
    cfg = {(n, x) for x in xs}
    assert complement_in_window(complement_in_window(cfg, w, [n]), w, [n]) == cfg


def test_window_parse():
    assert Window.parse("-10,6") == Window(-10, 6)
    with pytest.raises(UsageError):
        Window.parse("3")
    with pytest.raises(UsageError):
        Window(2, 1)


def test_signatures_in_window_count():
    # choose 2 positions out of 5
    assert len(list(signatures_in_window(2, Window(-2, 2)))) == 10
