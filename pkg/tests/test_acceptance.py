"""The sixteen acceptance criteria, each at its stated tolerance.

Every test prints one `criterion k: PASS|FAIL ...` line to the terminal
(capture is bypassed) before asserting, so the summary survives `pytest -v`.
"""

import itertools
import math
import time

import numpy as np
import pytest

from gtplancherel import experiments as ex
from gtplancherel import limitkernels as lk
from gtplancherel.combinatorics import Window, signatures_in_window
from gtplancherel.experiments import ConvergenceSpec
from gtplancherel.kernel import SpacetimePoint, kernel_K, swap_symmetry_residual
from gtplancherel.limitkernels import AiryArg
from gtplancherel.oracle import EnumerationSpec, compare, widened
from gtplancherel.quadrature import CircleContour, QuadratureSettings, circle_integral
from gtplancherel.sampler import (
    SamplerConfig,
    batch_means_stderr,
    exact_sample_small,
    mcmc_sample,
    stationarity_residual,
)
from gtplancherel.shape import (
    ProportionalParams,
    classify_region,
    density_fixed_gamma,
    discriminant_identity_residual,
    double_root_family,
    q_real_roots,
    q_value,
    r_coefficients,
    r_roots,
    r_value,
)
from gtplancherel.weights import PlancherelParams, plancherel_weight, skellam_pmf

GAMMAS = list(itertools.product((0.3, 0.7), repeat=2))
WINDOW = Window(-10, 6)


@pytest.fixture
def report(capsys):
    def emit(k: int, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\ncriterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")
    return emit


def _table(default_tables, regime, name):
    return default_tables[(regime, name)][1]


def test_c01_oracle_single_level(report):
    t0 = time.time()
    worst = max(
        compare(EnumerationSpec(N, WINDOW, PlancherelParams(gp, gm)), tuple_budget=200, seed=N,
                single_level_random=True).max_abs_error
        for N in (1, 2, 3) for gp, gm in GAMMAS)
    ok = worst <= 1e-8
    report(1, ok, f"max |det K - rho| = {worst:.3e} (<= 1e-8), {time.time() - t0:.0f} s")
    assert ok


def test_c02_oracle_multi_level(report):
    errs = {}
    for which in ("K", "K_delta"):
        errs[which] = max(
            compare(EnumerationSpec(3, WINDOW, PlancherelParams(gp, gm)), which=which, tuple_budget=200,
                    seed=7, exhaustive_k=0).max_abs_error
            for gp, gm in GAMMAS)
    ok = max(errs.values()) <= 1e-8
    report(2, ok, f"K {errs['K']:.3e}, K_delta {errs['K_delta']:.3e} (<= 1e-8)")
    assert ok


def test_c03_normalization(report):
    worst = 0.0
    for N in (1, 2, 3):
        for gp, gm in GAMMAS:
            spec = widened(EnumerationSpec(N, WINDOW, PlancherelParams(gp, gm)))
            mass = math.fsum(plancherel_weight(s, spec.params) for s in signatures_in_window(N, spec.window))
            worst = max(worst, abs(mass - 1))
    ok = worst <= 1e-8
    report(3, ok, f"max |sum - 1| = {worst:.3e} (<= 1e-8)")
    assert ok


def test_c04_skellam_marginal(report):
    worst = 0.0
    for prm in (PlancherelParams(1, 1), PlancherelParams(2, 0.5)):
        for l in range(-10, 11):
            p = SpacetimePoint(1, l - 1)
            worst = max(worst, abs(kernel_K(p, p, prm) - skellam_pmf(l, prm)))
    ok = worst <= 1e-10
    report(4, ok, f"max |K(1,l-1;1,l-1) - skellam(l)| = {worst:.3e} (<= 1e-10)")
    assert ok


def test_c05_swap_symmetry(report):
    rng = np.random.default_rng(5)
    worst = 0.0
    for _ in range(50):
        prm = PlancherelParams(*rng.uniform(0.1, 1.5, size=2))
        n1, n2 = (int(v) for v in rng.integers(1, 5, size=2))
        p1 = SpacetimePoint(n1, int(rng.integers(-8, 6)))
        p2 = SpacetimePoint(n2, int(rng.integers(-8, 6)))
        scale = 1 + abs(kernel_K(p1, p2, prm.swapped()))
        worst = max(worst, swap_symmetry_residual(p1, p2, prm) / scale)
    ok = worst <= 1e-9
    report(5, ok, f"max residual/scale = {worst:.3e} (<= 1e-9)")
    assert ok


def test_c06_discriminant_identity(report):
    rng = np.random.default_rng(6)
    worst = max(discriminant_identity_residual(ProportionalParams(a, b), c)
                for a, b, c in zip(rng.uniform(0.01, 1, 100), rng.uniform(0.01, 1, 100), rng.uniform(-3, 3, 100)))
    ok = worst <= 1e-9
    report(6, ok, f"max relative residual = {worst:.3e} (<= 1e-9)")
    assert ok


def test_c07_double_root_family(report):
    d = double_root_family(-1.0)
    pp = ProportionalParams(d.a, d.b)
    exact = (d.a, d.b, d.c0) == (1 / 8, 1 / 8, -1 / 2) and d.zeta == -2
    q0, q1 = abs(q_value(pp, -0.5)), abs(q_value(pp, -0.5, 1))
    triple = max(abs(r_value(pp, -0.5, -1.0)), abs(np.polyval(np.polyder(r_coefficients(pp, -0.5)), -1.0)),
                 abs(np.polyval(np.polyder(r_coefficients(pp, -0.5), 2), -1.0)))
    ok = exact and max(q0, q1, triple) <= 1e-9 and np.allclose(r_roots(pp, -0.5), -1, atol=1e-4)
    report(7, ok, f"(a,b,c0,zeta) = ({d.a}, {d.b}, {d.c0}, {d.zeta}); |Q|,|Q'| = {q0:.1e},{q1:.1e}; "
                  f"R,R',R'' at -1 <= {triple:.1e}")
    assert ok


def test_c08_quadrature_exactness(report):
    st = QuadratureSettings(16, 8192, 1e-13)
    unit = CircleContour(0.0, 1.0)
    cases = [(lambda z, k=k: z**k, 1.0 if k == -1 else 0.0) for k in range(-12, 13)]
    cases += [(lambda z: np.exp(z) / z**3, 0.5), (lambda z: 1 / ((z - 0.4) * (z - 3)), 1 / (0.4 - 3)),
              (lambda z: 1 / (z**2 + 0.25), 0.0), (lambda z: z / ((z - 0.5j) * (z + 0.5j)), 1.0)]
    worst = max(abs(circle_integral(f, unit, st).value - v) for f, v in cases)
    ai = abs(lk.airy_Ai(0.0) - 0.3550280539)
    ai_series = abs(lk.airy_Ai(0.0) - lk.airy_Ai_series(0.0))
    ok = worst <= 1e-12 and ai <= 1e-8 and ai_series <= 1e-8
    report(8, ok, f"residue suite {worst:.1e} (<= 1e-12); Ai(0) off by {ai:.1e}, vs series {ai_series:.1e}")
    assert ok


def test_c09_extended_airy_representations(report):
    worst = 0.0
    for t1, t2 in itertools.product((-1, 0, 1), repeat=2):
        for s1, s2 in itertools.product((-3, -1, 0, 1), repeat=2):
            a1, a2 = AiryArg(t1, s1), AiryArg(t2, s2)
            worst = max(worst, abs(lk.airy_ext_integral(a1, a2) - lk.airy_ext_double(a1, a2)))
    ok = worst <= 1e-6
    report(9, ok, f"max |integral - double| = {worst:.3e} (<= 1e-6) on 144 pairs")
    assert ok


def test_c10_bulk_fixed(report, default_tables):
    table = _table(default_tables, "BulkFixed", "c=0,k<=2")
    deg = {}
    for c, target in ((3.0, 0.0), (-3.0, 1.0)):
        spec = ConvergenceSpec("BulkFixed", (100, 400), (((0, 0),), ((0, 0), (0, 1)), ((0.5, 0), (0, 0))),
                               c=c, gamma_plus=1.0, gamma_minus=1.0)
        deg[c] = ex.converge(spec).rows[-1].max_abs_error
    ok = table.strictly_decreasing() and table.errors[-1] <= 0.02 and max(deg.values()) <= 0.02
    report(10, ok, f"errors {table.errors} (decreasing, last <= 0.02); c=+3 {deg[3.0]:.2e}, c=-3 {deg[-3.0]:.2e}")
    assert ok


def test_c11_poisson(report, default_tables):
    k1 = _table(default_tables, "PoissonJ", "a=1,k=1")
    k2 = _table(default_tables, "PoissonJ", "a=1,k=2")
    indep = max(ex.independence_residual(400, 1.0, 1.0, x, y) for x in (-1, 0, 1) for y in (-1, 0, 1))
    ok = k1.strictly_decreasing() and k2.strictly_decreasing() and k1.errors[-1] <= 0.02 and indep <= 0.02
    report(11, ok, f"k=1 {k1.errors}, k=2 {k2.errors}; independence residual {indep:.2e} (<= 0.02)")
    assert ok


CAPTION = {(1 / 25, 1 / 15): 4, (1 / 8, 1 / 8): 3, (1 / 4, 1 / 3): 2}


def test_c12_bulk_proportional(report, default_tables):
    counts = {ab: q_real_roots(ProportionalParams(*ab)).m for ab in CAPTION}
    bulk = {name: t for (regime, name), (_, t) in default_tables.items() if regime == "BulkProportional"}
    deg = {}
    for ab in CAPTION:
        pp = ProportionalParams(*ab)
        r = q_real_roots(pp).roots
        cases = [(r[-1] + 0.5, "Void", 0.0)]
        if ab == (1 / 25, 1 / 15):
            cases.append(((r[1] + r[2]) / 2, "Saturated", 1.0))
        if ab == (1 / 4, 1 / 3):
            cases.append((r[0] - 0.5, "Void", 0.0))
        for c, kind, _ in cases:
            assert classify_region(pp, c).kind == kind
            spec = ConvergenceSpec("BulkProportional", (100, 400), (((0, 0),), ((0, 0), (0, 1))), a=pp.a, b=pp.b, c=c)
            deg[(ab, round(c, 3))] = ex.converge(spec).rows[-1].max_abs_error
    ok = (counts == CAPTION and all(t.errors[-1] <= 0.05 for t in bulk.values())
          and max(deg.values()) <= 0.05)
    detail = "; ".join(f"{n}: {t.errors}" for n, t in bulk.items())
    report(12, ok, f"m = {list(counts.values())}; {detail}; degenerate max {max(deg.values()):.2e} (<= 0.05)")
    assert ok


def test_c13_pearcey(report, default_tables):
    table = _table(default_tables, "Pearcey", "z0=-1,k=1")
    ok = table.strictly_decreasing()
    report(13, ok, f"k=1 K_delta errors {table.errors} (strictly decreasing)")
    assert ok


def test_c14_airy(report, default_tables):
    airy = {name: t for (regime, name), (_, t) in default_tables.items() if regime == "Airy"}
    outer = [t for name, t in airy.items() if name.startswith("1/8,1/8")]
    inner = [t for name, t in airy.items() if name.startswith("1/25,1/15")]
    ok = (len(outer) == 2 and len(inner) == 1
          and all(t.strictly_decreasing() and t.errors[-1] <= 0.05 for t in outer)
          and inner[0].strictly_decreasing())
    report(14, ok, "; ".join(f"{n}: {t.errors}" for n, t in airy.items()))
    assert ok


def test_c15_density_corollary(report):
    prm = PlancherelParams(1.0, 1.0)
    errs = {b: abs(ex.density_fixed_gamma_finite(400, b, prm) - density_fixed_gamma(b, 1.0))
            for b in (-1.5, -0.5, 0.0, 0.5, 1.5)}
    worst = max(errs.values())
    ok = worst <= 0.02
    report(15, ok, f"max |rho_1 - arccos law| = {worst:.3e} (<= 0.02) at N=400")
    assert ok


def test_c16_sampler(report):
    prm1 = PlancherelParams(1.0, 1.0)
    n = 100_000
    cfg = SamplerConfig(1, prm1, steps=n + 1000, burn_in=1000, seed=1)
    exact = np.array([s.parts[0] for s in exact_sample_small(cfg, n, widen=True)])
    chain = np.array([s.parts[0] for s in mcmc_sample(cfg, n)])
    z_exact = z_mcmc = 0.0
    for l in range(-6, 7):
        p = skellam_pmf(l, prm1)
        z_exact = max(z_exact, abs(np.mean(exact == l) - p) / math.sqrt(p * (1 - p) / n))
        ind = (chain == l).astype(float)
        z_mcmc = max(z_mcmc, abs(ind.mean() - p) / batch_means_stderr(ind))

    prm3 = PlancherelParams(0.5, 0.5)
    cfg3 = SamplerConfig(3, prm3, steps=40_000, burn_in=2000, seed=1)
    samples = mcmc_sample(cfg3, 38_000)
    pos = np.array([[s.parts[i] - (i + 1) for i in range(3)] for s in samples])
    z_rho = 0.0
    for x in range(-7, 4):
        ind = (pos == x).any(axis=1).astype(float)
        rho = kernel_K(SpacetimePoint(3, x), SpacetimePoint(3, x), prm3)
        se = batch_means_stderr(ind)
        if se > 0:
            z_rho = max(z_rho, abs(ind.mean() - rho) / se)

    stat = stationarity_residual(2, PlancherelParams(0.3, 0.7), Window(-8, 5))
    ok = z_exact <= 3 and z_mcmc <= 3 and z_rho <= 3 and stat <= 1e-10
    report(16, ok, f"N=1 exact {z_exact:.2f} sigma, MCMC {z_mcmc:.2f} sigma; N=3 rho_1 {z_rho:.2f} sigma (<= 3); "
                   f"N=2 stationarity {stat:.1e} (<= 1e-10)")
    assert ok
