"""Generator application, compound-Poisson series, Taylor residuals."""

import math

import numpy as np
import pytest

from nonlocal_heat import (
    CovarianceFn,
    FiniteAtomic,
    HolderFunction,
    IntegrabilityError,
    Interval,
    IsotropicStable,
    SkewedStableParams,
    compound_poisson_apply,
    covariance,
    generator_apply,
    generator_power_at,
    holder_from_covariance,
    semigroup_apply_mc,
    stable_norm_const,
    taylor_remainder,
)
from nonlocal_heat.heat import heat_content_exact_1d
from nonlocal_heat.levy import OneDimStable
from nonlocal_heat.semigroup import convolution_power

UNIT_INTERVAL = Interval(0.0, 1.0)
TWO_ATOMS = FiniteAtomic(((1.0, 0.5), (-1.0, 0.5)), 1)


def interval_g():
    return holder_from_covariance(CovarianceFn(UNIT_INTERVAL))


def constant_fn(c, d=1):
    return HolderFunction(fn=lambda x: c, beta=1.0, dimension=d, sup_norm=abs(c))


class TestGeneratorApply:
    def test_constant_is_killed(self):
        f = constant_fn(3.7)
        assert generator_apply(f, TWO_ATOMS, 0.0) == pytest.approx(0.0, abs=1e-14)
        assert generator_apply(f, IsotropicStable(0.5, 1), 0.0) == \
            pytest.approx(0.0, abs=1e-10)

    def test_covariance_at_origin_gives_minus_perimeter(self):
        # L g(0) = -Per_nu(Omega) = -2 A / (alpha (1 - alpha)) for the unit interval
        for alpha in (0.3, 0.5, 0.7):
            g = interval_g()
            target = -2.0 * stable_norm_const(1, alpha) / (alpha * (1.0 - alpha))
            val = generator_apply(g, IsotropicStable(alpha, 1), 0.0)
            assert val == pytest.approx(target, rel=1e-9)

    def test_two_atom_exact_sum(self):
        g = interval_g()
        val = generator_apply(g, TWO_ATOMS, 0.0)
        expected = 0.5 * (covariance(UNIT_INTERVAL, 1.0) - 1.0) \
            + 0.5 * (covariance(UNIT_INTERVAL, -1.0) - 1.0)
        assert val == pytest.approx(expected, abs=1e-15)

    def test_integrability_guard(self):
        g = interval_g()   # beta = 1
        with pytest.raises(IntegrabilityError):
            generator_apply(g, IsotropicStable(1.2, 1), 0.0)

    def test_skewed_measure(self):
        # one-sided measure: L g(0) = -c_+ * int_0^1 r * r^{-1-a} dr ... closed form
        nu = OneDimStable(0.5, 1.0)   # c_- = 0
        g = interval_g()
        val = generator_apply(g, nu, 0.0)
        expected = -nu.c_plus * 1.0 / (0.5 * 0.5)   # (b-a)^{1-a}/(a(1-a)) one side
        assert val == pytest.approx(expected, rel=1e-9)


class TestGeneratorPowers:
    def test_atomic_recursion_matches_binomial(self):
        g = interval_g()
        direct = generator_power_at(g, TWO_ATOMS, 2, 0.0)

        def lg(x):
            x = float(np.atleast_1d(x)[0])
            fx = covariance(UNIT_INTERVAL, x)
            return 0.5 * (covariance(UNIT_INTERVAL, x + 1.0) - fx) \
                + 0.5 * (covariance(UNIT_INTERVAL, x - 1.0) - fx)

        manual = 0.5 * (lg(1.0) - lg(0.0)) + 0.5 * (lg(-1.0) - lg(0.0))
        assert direct == pytest.approx(manual, abs=1e-14)

    def test_constant_killed_at_any_order(self):
        f = constant_fn(2.0)
        for k in (1, 2, 3):
            assert generator_power_at(f, TWO_ATOMS, k, 0.5) == \
                pytest.approx(0.0, abs=1e-12)

    def test_stable_square_matches_higher_order_perimeter(self):
        # L^2 g(0) for the alpha-stable generator equals the nonlocal
        # perimeter at exponent 2 alpha (composition of fractional powers)
        g = interval_g()
        alpha = 0.2
        val = generator_power_at(g, IsotropicStable(alpha, 1), 2, 0.0, tol=1e-7)
        target = 2.0 * stable_norm_const(1, 0.4) / (0.4 * 0.6)
        assert val == pytest.approx(target, rel=1e-4)

    def test_integrability_guard(self):
        g = interval_g()
        with pytest.raises(IntegrabilityError):
            generator_power_at(g, IsotropicStable(0.6, 1), 2, 0.0)

    def test_convolution_power_two_atoms(self):
        conv = convolution_power(TWO_ATOMS, 3)
        locs = sorted(loc[0] for loc, _ in conv)
        assert locs == [-3.0, -1.0, 1.0, 3.0]
        assert sum(m for _, m in conv) == pytest.approx(1.0, abs=1e-14)


class TestSemigroupMc:
    def test_constant_exact(self):
        f = constant_fn(2.5)
        est, se = semigroup_apply_mc(f, TWO_ATOMS, 0.3, 0.0, 10_000, 1)
        assert est == 2.5
        assert se == 0.0

    def test_time_zero_identity(self):
        g = interval_g()
        est, se = semigroup_apply_mc(g, TWO_ATOMS, 0.0, 0.2, 10_000, 1)
        assert est == covariance(UNIT_INTERVAL, 0.2)
        assert se == 0.0

    def test_against_heat_content(self):
        # P_t g(0) = |Omega| - H(t) for the stable driver
        g = interval_g()
        params = SkewedStableParams(0.5, 0.0)
        t = 1e-3
        expected = 1.0 - heat_content_exact_1d(UNIT_INTERVAL, params, t)
        est, se = semigroup_apply_mc(g, params, t, 0.0, 500_000, 7)
        assert abs(est - expected) < 3.0 * se

    def test_contraction(self):
        g = interval_g()
        for seed in range(3):
            est, se = semigroup_apply_mc(g, TWO_ATOMS, 0.7, 0.0, 50_000, seed)
            assert abs(est) <= g.sup_norm + 3.0 * se


class TestCompoundPoisson:
    def test_time_zero(self):
        g = interval_g()
        assert compound_poisson_apply(TWO_ATOMS, g, 0.0, 0.3) == \
            covariance(UNIT_INTERVAL, 0.3)

    def test_single_atom_poisson_mixture(self):
        # nu = delta_1: P_t f(0) = e^{-t} sum t^n/n! f(n), a pure Poisson mix
        nu = FiniteAtomic(((1.0, 1.0),), 1)
        g = interval_g()
        t = 0.1
        expected = sum(
            math.exp(-t) * t ** n / math.factorial(n)
            * covariance(UNIT_INTERVAL, float(n))
            for n in range(0, 30)
        )
        assert compound_poisson_apply(nu, g, t, 0.0) == \
            pytest.approx(expected, abs=1e-14)

    def test_against_mc(self):
        g = interval_g()
        exact = compound_poisson_apply(TWO_ATOMS, g, 0.05, 0.0)
        est, se = semigroup_apply_mc(g, TWO_ATOMS, 0.05, 0.0, 10 ** 6, 5)
        assert abs(est - exact) < 3.0 * se

    def test_semigroup_law(self):
        g = interval_g()
        for t, s in [(0.05, 0.05), (0.05, 0.1), (0.1, 0.1)]:
            inner = HolderFunction(
                fn=lambda y, s=s: compound_poisson_apply(TWO_ATOMS, g, s, y),
                beta=1.0, dimension=1,
            )
            lhs = compound_poisson_apply(TWO_ATOMS, inner, t, 0.2)
            rhs = compound_poisson_apply(TWO_ATOMS, g, t + s, 0.2)
            assert lhs == pytest.approx(rhs, rel=1e-10)

    def test_commutation_with_generator(self):
        g = interval_g()
        t = 0.1
        lg = HolderFunction(fn=lambda y: generator_apply(g, TWO_ATOMS, y),
                            beta=1.0, dimension=1)
        p_t_lg = compound_poisson_apply(TWO_ATOMS, lg, t, 0.0)
        ptg = HolderFunction(
            fn=lambda y: compound_poisson_apply(TWO_ATOMS, g, t, y),
            beta=1.0, dimension=1,
        )
        l_p_tg = generator_apply(ptg, TWO_ATOMS, 0.0)
        assert p_t_lg == pytest.approx(l_p_tg, rel=1e-10)

    def test_exponential_series_partial_sums(self):
        # sum_k (t^k/k!) L^k f converges geometrically to P_t f for t < 0.2
        g = interval_g()
        t = 0.15
        exact = compound_poisson_apply(TWO_ATOMS, g, t, 0.0)
        partial = covariance(UNIT_INTERVAL, 0.0)
        errs = []
        for k in range(1, 16):
            partial += t ** k / math.factorial(k) \
                * generator_power_at(g, TWO_ATOMS, k, 0.0)
            errs.append(abs(partial - exact))
        assert errs[-1] < 1e-12
        # geometric-ish decay: each extra term buys at least a factor 2
        for a, b in zip(errs[2:10], errs[3:11]):
            assert b <= 0.5 * a + 1e-15


class TestTaylorResidual:
    def test_first_order_limit_is_minus_perimeter(self):
        g = interval_g()
        nu = IsotropicStable(0.5, 1)
        params = SkewedStableParams(0.5, 0.0)
        engine = lambda t: 1.0 - heat_content_exact_1d(UNIT_INTERVAL, params, t)
        rep = taylor_remainder(g, nu, [1e-2 * 2 ** -k for k in range(8)],
                               1, 0.0, engine=engine)
        assert rep.extrapolated == pytest.approx(rep.target, rel=1e-6)
        assert rep.target == pytest.approx(
            -2.0 * stable_norm_const(1, 0.5) / 0.25, rel=1e-9)

    def test_atomic_any_order_no_engine(self):
        g = interval_g()
        rep = taylor_remainder(g, TWO_ATOMS,
                               [0.04 * 2 ** -k for k in range(6)], 2, 0.0)
        # exact series engine: raw residual at the smallest t within 1%,
        # extrapolation essentially exact
        assert rep.residuals[-1] == pytest.approx(rep.target, rel=1e-2)
        assert rep.extrapolated == pytest.approx(rep.target, rel=1e-7)

    def test_constant_residual_vanishes(self):
        f = constant_fn(1.0)
        rep = taylor_remainder(f, TWO_ATOMS, [0.1, 0.05], 1, 0.0)
        assert np.all(np.abs(rep.residuals) < 1e-12)


class TestHolderChecks:
    def test_covariance_is_lipschitz(self, rng):
        g = interval_g()
        ok, worst = g.check_holder(rng)
        assert ok
        assert worst <= g.seminorm + 1e-12

    def test_lemma_bound_on_generator_sup(self):
        # grid estimate of ||L f||_inf against (3c/(1-a/b)) h(1) ||f||_b
        # with c = 16(1+2d) for the exactly-scaling stable symbol
        g = interval_g()
        alpha, beta = 0.5, 1.0
        nu = IsotropicStable(alpha, 1)
        from nonlocal_heat import concentration_h
        grid = np.linspace(-2.0, 2.0, 41)
        sup_lf = max(abs(generator_apply(g, nu, x, tol=1e-8)) for x in grid)
        c_d = 16.0 * (1 + 2 * 1)
        bound = 3.0 * c_d / (1.0 - alpha / beta) * concentration_h(nu, 1.0) \
            * (g.sup_norm + g.seminorm)
        assert sup_lf <= bound