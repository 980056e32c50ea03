"""Acceptance suite: the numeric exit criteria, one test per criterion.

Each test prints a single PASS line with the measured quantity and its
runtime (run with ``pytest tests/test_acceptance.py -v -s`` to see them).
Tolerances are the stated ones, pinned here, not calibrated afterwards.
"""

import math
import time

import numpy as np
import pytest

from nonlocal_heat import (
    Ball,
    Box,
    CovarianceFn,
    FiniteAtomic,
    HeatContentRequest,
    Interval,
    IsotropicStable,
    IsotropicStableParams,
    LogSymbol,
    OneDimStable,
    Polygon2D,
    SkewedStableParams,
    check_wusc,
    compound_poisson_apply,
    concentration_h,
    covariance,
    covariance_mc_oracle,
    density_fourier,
    density_series_1d,
    density_series_isotropic,
    generator_power_at,
    heat_content_mc,
    holder_from_covariance,
    nonlocal_perimeter,
    perimeter,
    stable_norm_const,
    tail_mass,
    truncated_moment,
    verify_limit,
)
from nonlocal_heat.stable import coeff_b

UNIT_INTERVAL = Interval(0.0, 1.0)


class Timer:
    def __init__(self, budget):
        self.budget = budget

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0
        return False

    def report(self, label, detail):
        print(f"\n[acceptance] {label}: PASS ({detail}; {self.elapsed:.1f}s "
              f"of {self.budget:.0f}s budget)")
        assert self.elapsed < self.budget


def test_criterion_1_first_order_law():
    """H(t)/t extrapolates to the nonlocal perimeter within 1%."""
    with Timer(30.0) as tm:
        target = 8.0 * stable_norm_const(1, 0.5)
        rep = verify_limit("first-order", UNIT_INTERVAL,
                           SkewedStableParams(0.5, 0.0),
                           [1e-2 * 2.0 ** -k for k in range(11)], tol=0.01)
        assert rep.verdict == "PASS"
        assert rep.target == pytest.approx(target, rel=1e-12)
        rel = rep.achieved_relative_error
        assert rel < 0.01
    tm.report("criterion 1 (first-order law)",
              f"H(t)/t -> {rep.extrapolated:.8g}, target {target:.8g}, rel {rel:.1e}")


def test_criterion_2_second_order_coefficient():
    """(H - t Per) / t^2 extrapolates to -Per^(2a)/2 within 2% at t <= 1e-3."""
    with Timer(60.0) as tm:
        target = -stable_norm_const(1, 0.8) / (0.8 * 0.2)
        rep = verify_limit("cor34", UNIT_INTERVAL, SkewedStableParams(0.4, 0.0),
                           [1e-3 * 2.0 ** -k for k in range(9)], order=2, tol=0.02)
        assert rep.verdict == "PASS"
        assert rep.target == pytest.approx(target, rel=1e-12)
        rel = rep.achieved_relative_error
        assert rel < 0.02
    tm.report("criterion 2 (second-order coefficient)",
              f"extrapolated {rep.extrapolated:.8g}, target {target:.8g}, rel {rel:.1e}")


def test_criterion_3_log_order_fit():
    """Two-parameter fit of the residual gives the -2/pi log coefficient within 10%."""
    with Timer(60.0) as tm:
        rep = verify_limit("thm4", UNIT_INTERVAL, SkewedStableParams(0.5, 0.0),
                           [2.0 ** -k for k in range(6, 17)], tol=0.10)
        assert rep.verdict == "PASS"
        assert rep.target == pytest.approx(-2.0 / math.pi, rel=1e-12)
        rel = rep.achieved_relative_error
        assert rel < 0.10
    tm.report("criterion 3 (log-order coefficient)",
              f"A = {rep.extrapolated:.6g}, target {-2.0 / math.pi:.6g}, rel {rel:.1e}")


def test_criterion_4_fractional_order_constant():
    """Normalised residual t^{-2.5}(...) extrapolates to the independent constant, 5%."""
    with Timer(120.0) as tm:
        rep = verify_limit("thm3", UNIT_INTERVAL, SkewedStableParams(0.4, 0.0),
                           [1e-3 * 2.0 ** -k for k in range(9)], tol=0.05)
        assert rep.verdict == "PASS"
        rel = rep.achieved_relative_error
        assert rel < 0.05
    tm.report("criterion 4 (fractional-order constant)",
              f"extrapolated {rep.extrapolated:.8g}, target {rep.target:.8g}, rel {rel:.1e}")


def test_criterion_5_skewed_high_alpha_expansion():
    """alpha=1.5, beta=0.3: n=1 term within 3% at t=1e-4; remainder slope 2 +- 0.1."""
    with Timer(120.0) as tm:
        params = SkewedStableParams(1.5, 0.3)
        t_grid = list(np.geomspace(1e-4, 1e-3, 8))
        rep = verify_limit("prop-ii", UNIT_INTERVAL, params, t_grid, tol=0.03)
        assert rep.verdict == "PASS"
        raw_rel = abs(rep.normalized_residuals[0] - rep.target) / abs(rep.target)
        assert raw_rel < 0.03
        slope = rep.details["remainder_loglog_slope"]
        assert abs(slope - 2.0) < 0.1
    tm.report("criterion 5 (skewed expansion, alpha > 1)",
              f"n=1 term rel {raw_rel:.1e}, remainder slope {slope:.3f}")


def test_criterion_6_compound_poisson_series():
    """Partial sums reach the exact exponential series to 1e-8 by k=25; MC 4 sigma."""
    with Timer(60.0) as tm:
        nu = FiniteAtomic(((0.7, 0.6), (-0.4, 0.9)), 1)
        g = holder_from_covariance(CovarianceFn(UNIT_INTERVAL))
        per = nonlocal_perimeter(UNIT_INTERVAL, nu)
        worst = 0.0
        for t in (0.05, 0.1):
            exact = 1.0 - compound_poisson_apply(nu, g, t, np.zeros(1))
            partial = per * t
            for k in range(2, 26):
                partial -= t ** k / math.factorial(k) \
                    * generator_power_at(g, nu, k, 0.0)
            rel = abs(partial - exact) / abs(exact)
            worst = max(worst, rel)
            assert rel < 1e-8
        req = HeatContentRequest(body=UNIT_INTERVAL, driver=nu, t_grid=(0.1,),
                                 n_samples=10 ** 6, seed=42)
        mc = heat_content_mc(req)
        exact = 1.0 - compound_poisson_apply(nu, g, 0.1, np.zeros(1))
        z = abs(mc.values[0] - exact) / mc.stderr[0]
        assert z < 4.0
    tm.report("criterion 6 (compound-Poisson series)",
              f"series rel {worst:.1e} by k=25, MC z = {z:.2f}")


def test_criterion_7_density_engine():
    """Series vs inversion < 1e-6 on [1, 20]; skewed within the remainder envelope."""
    with Timer(120.0) as tm:
        worst = 0.0
        xs = np.geomspace(1.0, 20.0, 13)
        for alpha in (0.3, 0.5, 0.7):
            for d in (1, 2):
                p = IsotropicStableParams(alpha, d)
                for x in xs:
                    s = density_series_isotropic(p, x).value
                    f = density_fourier(p, x)
                    rel = abs(s - f) / abs(f)
                    worst = max(worst, rel)
                    assert rel < 1e-6, (alpha, d, x, rel)
        # skewed asymptotic branch: |series - inversion| within the
        # first-omitted-term envelope (empirical O-constant, safety 2)
        p = SkewedStableParams(1.5, 0.5)
        n_terms = 3
        worst_ratio = 0.0
        for x in np.geomspace(5.0, 50.0, 9):
            res = density_series_1d(p, x, n_terms=n_terms)
            f = density_fourier(p, x)
            envelope = 2.0 * abs(coeff_b(n_terms + 1, p)) \
                * x ** (-(n_terms + 1) * 1.5 - 1.0) + 1e-12
            assert abs(res.value - f) <= envelope, (x, res.value - f, envelope)
            worst_ratio = max(worst_ratio, abs(res.value - f) / envelope)
    tm.report("criterion 7 (density engine)",
              f"isotropic worst rel {worst:.1e}, skewed envelope ratio {worst_ratio:.2f}")


def test_criterion_8_geometry_suite(rng):
    """Symmetry, support, Lipschitz, perimeters, and MC agreement."""
    with Timer(60.0) as tm:
        bodies = [
            UNIT_INTERVAL,
            Box(((0.0, 1.0), (0.0, 1.0))),
            Ball((0.0, 0.0), 1.0),
            Polygon2D(((0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2))),
        ]
        for body in bodies:
            per = perimeter(body)
            lip = per / 2.0
            d = body.dimension
            for _ in range(60):
                y = rng.uniform(-1.1 * body.diameter, 1.1 * body.diameter, d)
                g1 = covariance(body, y)
                assert g1 == pytest.approx(covariance(body, -y), rel=1e-11, abs=1e-12)
                y2 = y + rng.uniform(-0.4, 0.4, d)
                assert abs(g1 - covariance(body, y2)) <= \
                    lip * np.linalg.norm(y - y2) + 1e-12
            for _ in range(20):
                u = rng.standard_normal(d)
                u /= np.linalg.norm(u)
                assert covariance(body, body.diameter * 1.01 * u) == 0.0
        disc_err = abs(perimeter(Ball((0.0, 0.0), 1.0)) - 2.0 * math.pi)
        assert disc_err < 1e-3
        assert perimeter(UNIT_INTERVAL) == 2.0
        assert perimeter(Box(((0.0, 1.0), (0.0, 1.0)))) == pytest.approx(4.0, rel=1e-5)
        worst_z = 0.0
        for k, body in enumerate(bodies):
            for j in range(5):
                y = rng.uniform(-0.6 * body.diameter, 0.6 * body.diameter,
                                body.dimension)
                est, se = covariance_mc_oracle(body, y, 10 ** 6, seed=97 + 13 * k + j)
                z = abs(est - covariance(body, y)) / max(se, 1e-9)
                worst_z = max(worst_z, z)
                assert z < 4.0
    tm.report("criterion 8 (geometry invariants)",
              f"disc perimeter err {disc_err:.1e}, worst MC z = {worst_z:.2f}")


def test_criterion_9_scaling_suite():
    """Layer cake to 1e-8, tail <= h on a 61-point grid, exact homogeneity, WUSC."""
    with Timer(10.0) as tm:
        # layer-cake self check at 1e-8 runs inside truncated_moment
        for alpha in (0.3, 0.6):
            truncated_moment(IsotropicStable(alpha, 1), 1.0, 2.0, self_check_tol=1e-8)
        grid = np.geomspace(1e-3, 1e3, 61)
        for nu in (IsotropicStable(0.5, 1), OneDimStable(0.7, 0.4),
                   FiniteAtomic(((1.0, 0.5), (-1.0, 0.5)), 1)):
            for r in grid:
                assert tail_mass(nu, r) <= concentration_h(nu, r) * (1 + 1e-12)
        nu = IsotropicStable(0.5, 1)
        for lam in (0.25, 4.0):
            for r in (0.1, 1.0, 10.0):
                assert concentration_h(nu, lam * r) == pytest.approx(
                    lam ** -0.5 * concentration_h(nu, r), rel=1e-13)
        worst = 0.0
        for alpha in (0.25, 0.5, 0.75):
            rep = check_wusc(LogSymbol(), alpha, 1.0,
                             np.geomspace(1, 1e5, 21), np.geomspace(1.0001, 1e3, 21))
            worst = max(worst, rep.c_emp * alpha / 4.0)
            assert rep.c_emp <= 4.0 / alpha
    tm.report("criterion 9 (scaling suite)",
              f"WUSC constant at most {100 * worst:.0f}% of the 4/alpha bound")
