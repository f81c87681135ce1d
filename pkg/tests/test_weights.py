import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import special, stats

from gtplancherel.combinatorics import Signature, Window, paths_to, signatures_in_window, weyl_dim
from gtplancherel.weights import (
    E_eval,
    PlancherelParams,
    fourier_coeff,
    path_weight,
    plancherel_weight,
    skellam_pmf,
)

gammas = st.floats(0.0, 2.0)


def test_params_validation():
    with pytest.raises(ValueError):
        PlancherelParams(-1.0, 0.0)
    assert PlancherelParams(0.3, 0.7).swapped() == PlancherelParams(0.7, 0.3)


def test_E_examples():
    assert E_eval(1.0, PlancherelParams(0.4, 0.9)) == pytest.approx(1.0)
    assert E_eval(3 + 1j, PlancherelParams()) == pytest.approx(1.0)
    assert E_eval(2.0, PlancherelParams(1.0, 0.0)).real == pytest.approx(math.e, rel=1e-12)


def test_fourier_coeff_trivial_and_poisson():
    p0 = PlancherelParams()
    assert fourier_coeff(0, p0) == 1.0
    assert fourier_coeff(3, p0) == 0.0
    p = PlancherelParams(1.0, 0.0)
    for l in range(6):
        assert fourier_coeff(l, p) == pytest.approx(math.exp(-1) / math.factorial(l), rel=1e-14)
    assert fourier_coeff(-1, p) == 0.0


def test_fourier_coeff_bessel():
    # e^{-2} I_0(2) = 0.3085083...
    assert fourier_coeff(0, PlancherelParams(1, 1)) == pytest.approx(math.exp(-2) * special.iv(0, 2), rel=1e-13)
    assert skellam_pmf(0, PlancherelParams(1, 1)) == pytest.approx(0.3085083, abs=1e-7)


@given(gammas, gammas, st.integers(-8, 8))
def test_skellam_matches_scipy(gp, gm, l):
    prm = PlancherelParams(gp, gm)
    if gp == 0 or gm == 0:
        return
    assert skellam_pmf(l, prm) == pytest.approx(stats.skellam.pmf(l, gp, gm), rel=1e-9, abs=1e-15)


def test_skellam_normalized():
    prm = PlancherelParams(1, 1)
    assert sum(skellam_pmf(l, prm) for l in range(-40, 41)) == pytest.approx(1.0, abs=1e-12)


def test_weight_trivial_measure():
    p0 = PlancherelParams()
    assert plancherel_weight(Signature((0, 0)), p0) == 1.0
    assert plancherel_weight(Signature((1, 0)), p0) == 0.0


def test_weight_level_one_is_skellam():
    prm = PlancherelParams(1.0, 1.0)
    for l in range(-5, 6):
        assert plancherel_weight(Signature((l,)), prm) == pytest.approx(skellam_pmf(l, prm), rel=1e-12)


def test_weight_normalized_n2():
    prm = PlancherelParams(0.3, 0.3)
    total = sum(plancherel_weight(s, prm) for s in signatures_in_window(2, Window(-16, 14)))
    assert total == pytest.approx(1.0, abs=1e-10)


@given(st.integers(2, 3), st.sampled_from([(0.3, 0.3), (0.7, 0.2)]),
       st.lists(st.integers(-2, 2), min_size=3, max_size=3))
def test_path_weight_times_dim_is_weight(N, g, xs):
    prm = PlancherelParams(*g)
    top = Signature(tuple(sorted(xs[:N], reverse=True)))
    for path in paths_to(top):
        assert path_weight(path, prm) * weyl_dim(top) == pytest.approx(plancherel_weight(top, prm), rel=1e-10)


def test_path_weight_depth_one():
    from gtplancherel.combinatorics import GTPath

    prm = PlancherelParams(1.0, 1.0)
    assert path_weight(GTPath(((2,),)), prm) == pytest.approx(fourier_coeff(2, prm))
    assert path_weight(GTPath(((0,), (0, 0))), PlancherelParams()) == 1.0
