import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gtplancherel import series
from gtplancherel.kernel import (
    KernelSettings,
    SpacetimePoint,
    corr_det,
    kernel_K,
    kernel_K_delta,
    kernel_matrix,
    single_term,
    swap_symmetry_residual,
)
from gtplancherel.weights import PlancherelParams, skellam_pmf

P = SpacetimePoint
ZERO = PlancherelParams()
SERIES = KernelSettings(backend="series")


def test_point_validation():
    with pytest.raises(ValueError):
        P(0, 1)
    with pytest.raises(ValueError):
        KernelSettings(u_radius=0.6, w_radius=0.5)
    with pytest.raises(ValueError):
        KernelSettings(backend="fft")


@pytest.mark.parametrize("n", [1, 2, 3])
def test_trivial_measure_density_is_indicator(n):
    for x in range(-n - 2, 3):
        expected = 1.0 if -n <= x <= -1 else 0.0
        assert kernel_K(P(n, x), P(n, x), ZERO) == pytest.approx(expected, abs=1e-12)
        assert kernel_K_delta(P(n, x), P(n, x), ZERO) == pytest.approx(1 - expected, abs=1e-12)


def test_trivial_measure_pair():
    assert corr_det([P(2, -1), P(2, -2)], ZERO) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("gammas", [(1.0, 1.0), (2.0, 0.5)])
def test_level_one_is_skellam(gammas):
    prm = PlancherelParams(*gammas)
    for l in range(-10, 11):
        assert kernel_K(P(1, l - 1), P(1, l - 1), prm) == pytest.approx(skellam_pmf(l, prm), abs=1e-10)


def test_single_term_values():
    assert single_term(P(1, 0), P(2, 0)) == -1.0
    assert single_term(P(1, 0), P(3, 1)) == -2.0
    assert single_term(P(1, 3), P(3, 1)) == 0.0
    with pytest.raises(ValueError):
        single_term(P(2, 0), P(1, 0))


def test_k_delta_off_diagonal_same_level():
    prm = PlancherelParams(0.3, 0.3)
    a, b = P(2, 0), P(2, -3)
    assert kernel_K_delta(a, b, prm) == pytest.approx(-kernel_K(a, b, prm), abs=1e-14)


# frozen from the extended-precision series backend
@pytest.mark.parametrize("p1,p2,gammas,expected", [
    (P(2, -1), P(2, -1), (0.3, 0.3), 0.599327203079896),
    (P(3, 0), P(2, 1), (0.7, 0.2), 0.381217736542713),
    (P(1, 0), P(3, 1), (0.7, 0.2), -0.302052772204515),
])
def test_quadrature_matches_series(p1, p2, gammas, expected):
    prm = PlancherelParams(*gammas)
    assert float(series.kernel_value(p1, p2, prm)) == pytest.approx(expected, abs=1e-14)
    assert kernel_K(p1, p2, prm) == pytest.approx(expected, abs=1e-10)


points = st.builds(P, st.integers(1, 3), st.integers(-5, 3))


@given(points, points, st.sampled_from([(0.3, 0.3), (0.7, 0.2), (1.0, 0.0)]))
def test_backends_agree(p1, p2, g):
    prm = PlancherelParams(*g)
    assert kernel_K(p1, p2, prm) == pytest.approx(kernel_K(p1, p2, prm, SERIES), abs=1e-9)


@given(points)
def test_diagonal_in_unit_interval(p):
    v = kernel_K(p, p, PlancherelParams(0.5, 0.8))
    assert -1e-10 <= v <= 1 + 1e-10


@given(st.lists(points, min_size=1, max_size=3, unique=True))
def test_gauge_invariance(pts):
    prm = PlancherelParams(0.7, 0.2)
    on = corr_det(pts, prm, gauge=True)
    off = corr_det(pts, prm, gauge=False)
    assert on == pytest.approx(off, rel=1e-10, abs=1e-12)


def test_corr_det_rejects_repeats():
    with pytest.raises(ValueError):
        corr_det([P(1, 0), P(1, 0)], ZERO)


@given(points, points)
def test_swap_symmetry_equal_gammas(p1, p2):
    assert swap_symmetry_residual(p1, p2, PlancherelParams(0.4, 0.4)) <= 1e-9


@given(points, points)
def test_swap_symmetry_mixed(p1, p2):
    prm = PlancherelParams(0.7, 0.2)
    scale = 1 + abs(kernel_K(p1, p2, prm.swapped()))
    assert swap_symmetry_residual(p1, p2, prm) <= 1e-9 * scale


def test_swap_symmetry_trivial():
    assert swap_symmetry_residual(P(2, 0), P(1, -1), ZERO) <= 1e-12


def test_auto_radius_policy():
    prm = PlancherelParams(3.0, 0.5)
    auto = KernelSettings(radius_policy="auto")
    assert kernel_K(P(3, 2), P(2, 0), prm, auto) == pytest.approx(kernel_K(P(3, 2), P(2, 0), prm, SERIES), abs=1e-9)


def test_series_matrix_k_delta():
    prm = PlancherelParams(0.3, 0.3)
    pts = [P(2, -1), P(2, 0), P(1, 0)]
    K = np.array(series.kernel_matrix(pts, prm, "K").tolist(), dtype=float)
    D = np.array(series.kernel_matrix(pts, prm, "K_delta").tolist(), dtype=float)
    E = np.array([[float(a == b) for b in pts] for a in pts])
    # on one level K_Δ = δ − K; across levels K_Δ = −K
    same = np.array([[a.n == b.n for b in pts] for a in pts])
    assert np.allclose(np.where(same, E - K, -K), D, atol=1e-14)
    assert np.allclose(kernel_matrix(pts, prm, which="K_delta"), D, atol=1e-10)


def test_series_settles_on_exact_zero():
    # with γ⁻ = 0, λ₁ ≥ 0, so position −5 at level 1 is never occupied
    assert abs(float(series.kernel_value(P(1, -5), P(1, -5), PlancherelParams(1.0, 0.0)))) <= 1e-300
