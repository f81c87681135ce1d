import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gtplancherel.quadrature import (
    CircleContour,
    NumericalFailure,
    PathContour,
    QuadratureSettings,
    Ray,
    circle_integral,
    double_circle_integral,
    gauss_legendre,
    path_integral,
)

TIGHT = QuadratureSettings(16, 8192, 1e-13)
UNIT = CircleContour(0.0, 1.0)


def test_residue_one_over_z():
    assert circle_integral(lambda z: 1 / z, UNIT, TIGHT).value == pytest.approx(1.0, abs=1e-12)


@given(st.integers(-12, 12).filter(lambda k: k != -1))
def test_monomials_have_no_residue(k):
    assert abs(circle_integral(lambda z: z**k, UNIT, TIGHT).value) <= 1e-12


def test_exp_over_cube():
    assert circle_integral(lambda z: np.exp(z) / z**3, UNIT, TIGHT).value == pytest.approx(0.5, abs=1e-12)


@given(st.floats(-0.9, 0.9), st.floats(-0.9, 0.9))
def test_rational_residue(a, b):
    # 1/((z − a)(z − 3)) has one pole inside the unit circle
    val = circle_integral(lambda z: 1 / ((z - a) * (z - 3)), UNIT, TIGHT).value
    assert val == pytest.approx(1 / (a - 3), abs=1e-12)
    # cycle: annulus boundary between radii 0.95 and 2 sees only the pole at 3? neither
    shifted = lambda z: 1 / ((z - complex(a, b) / 2) * (z - 3))  # noqa: E731
    assert circle_integral(shifted, CircleContour(0.0, 4.0), TIGHT).value == pytest.approx(0.0, abs=1e-12)


def test_clockwise_orientation():
    cw = CircleContour(0.0, 0.5, -1)
    assert circle_integral(lambda z: 1 / z, cw, TIGHT).value == pytest.approx(-1.0, abs=1e-12)


def test_double_integrals():
    cu, cw = CircleContour(0.0, 0.3), CircleContour(1.0, 0.3)
    # iterated residues: the u-integral picks z = 0; the w-circle misses 0
    assert abs(double_circle_integral(lambda u, w: 1 / (u * w), cu, cw, TIGHT).value) <= 1e-12
    assert abs(double_circle_integral(lambda u, w: 1 / (u * (u - w)), cu, cw, TIGHT).value) <= 1e-12
    # no u-pole inside |u| = 0.3 at all
    assert abs(double_circle_integral(lambda u, w: 1 / ((u - w) * w), cu, cw, TIGHT).value) <= 1e-12
    assert double_circle_integral(lambda u, w: 1 / (u * (w - 1)), cu, cw, TIGHT).value == pytest.approx(1.0, abs=1e-12)
    val = double_circle_integral(lambda u, w: np.exp(u) / u**2 * w**3 / (w - 1) ** 2, cu, cw, TIGHT).value
    assert val == pytest.approx(3.0, abs=1e-12)


def test_double_rejects_crossing():
    with pytest.raises(ValueError):
        double_circle_integral(lambda u, w: u * w, CircleContour(0, 0.6), CircleContour(1, 0.6))


def test_non_convergence_raises():
    # e^{800} overflows on purpose: the refinement must report failure, not a number
    with np.errstate(over="ignore", invalid="ignore"):
        res = circle_integral(lambda z: np.exp(40 / z), CircleContour(0.0, 0.05), QuadratureSettings(4, 16, 1e-14))
    assert not res.converged
    with pytest.raises(NumericalFailure):
        res.require()


def test_settings_validation():
    with pytest.raises(ValueError):
        QuadratureSettings(1, 8, 1e-9)
    with pytest.raises(ValueError):
        QuadratureSettings(8, 4, 1e-9)
    with pytest.raises(ValueError):
        CircleContour(0, 0)


def test_segment_and_arc():
    seg = PathContour((0, 1))
    assert path_integral(lambda z: np.ones_like(z), seg).value == pytest.approx(1 / (2j * math.pi), abs=1e-14)
    # 1/z along the upper unit semicircle from −1 to 1 (a 64-gon): −iπ/(2πi) = −1/2
    verts = tuple(cmath.exp(1j * math.pi * (1 - k / 64)) for k in range(65))
    val = path_integral(lambda z: 1 / z, PathContour(verts)).value
    assert val == pytest.approx(-0.5, abs=1e-12)


def test_airy_contour_gives_ai0():
    c = PathContour((0,), head=Ray(cmath.exp(5j * math.pi / 6)), tail=Ray(cmath.exp(1j * math.pi / 6)))
    res = path_integral(lambda s: np.exp(1j * s**3 / 3), c, QuadratureSettings(32, 1 << 16, 1e-13))
    # (1/2π)∫ = i·(1/2πi)∫; Ai(0) = 3^{−2/3}/Γ(2/3)
    assert (1j * res.value).real == pytest.approx(3 ** (-2 / 3) / math.gamma(2 / 3), abs=1e-12)


@given(st.integers(0, 30))
def test_gauss_legendre_exact(k):
    x, w = gauss_legendre(16)
    assert np.dot(w, x**k) == pytest.approx(1 / (k + 1), rel=1e-13)
