"""Levy measure operations: tails, concentration, moments, scaling checks."""

import math

import numpy as np
import pytest
from scipy import integrate

from nonlocal_heat import (
    FiniteAtomic,
    FromMeasureSymbol,
    IntegrabilityError,
    IsotropicStable,
    LogSymbol,
    OneDimStable,
    RadialDensity,
    StablePowerSymbol,
    check_wusc,
    concentration_h,
    psi_star,
    scaling_equivalence_check,
    stable_norm_const,
    tail_mass,
    truncated_moment,
)
from nonlocal_heat.errors import DomainError, NumericError


TWO_ATOMS = FiniteAtomic(((1.0, 0.5), (-1.0, 0.5)), 1)


class TestTailMass:
    def test_atomic_all_in_tail(self):
        assert tail_mass(TWO_ATOMS, 0.5) == 1.0

    def test_atomic_empty_tail(self):
        assert tail_mass(TWO_ATOMS, 2.0) == 0.0

    def test_isotropic_closed_form(self):
        nu = IsotropicStable(0.5, 1)
        a_const = stable_norm_const(1, 0.5)
        assert tail_mass(nu, 1.0) == pytest.approx(2.0 * a_const / 0.5, rel=1e-14)

    def test_isotropic_vs_quadrature_oracle(self):
        # oracle: direct quadrature of the density A |x|^{-1.5} over |x| >= 1
        a_const = stable_norm_const(1, 0.5)
        oracle = 2.0 * integrate.quad(lambda x: a_const * x ** -1.5, 1.0, np.inf)[0]
        assert tail_mass(IsotropicStable(0.5, 1), 1.0) == pytest.approx(oracle, rel=1e-10)

    def test_rejects_nonpositive_radius(self):
        with pytest.raises(DomainError):
            tail_mass(TWO_ATOMS, 0.0)


class TestConcentration:
    def test_isotropic_exact_scaling(self):
        for alpha, d in [(0.5, 1), (0.9, 2), (1.5, 1)]:
            nu = IsotropicStable(alpha, d)
            for r in (0.1, 1.0, 7.3):
                assert concentration_h(nu, 2 * r) / concentration_h(nu, r) == \
                    pytest.approx(2.0 ** -alpha, rel=1e-13)

    def test_isotropic_vs_quadrature_oracle(self):
        nu = IsotropicStable(0.7, 1)
        a_const = nu.norm_const
        r = 1.3
        inner = integrate.quad(
            lambda x: (x * x / r ** 2) * a_const * x ** (-1.7), 0, r)[0]
        outer = integrate.quad(lambda x: a_const * x ** (-1.7), r, np.inf)[0]
        assert concentration_h(nu, r) == pytest.approx(2 * (inner + outer), rel=1e-9)

    def test_atomic_inside(self):
        nu = FiniteAtomic(((1.0, 1.0),), 1)
        assert concentration_h(nu, 2.0) == pytest.approx(0.25, abs=1e-15)

    def test_atomic_in_tail(self):
        nu = FiniteAtomic(((1.0, 1.0),), 1)
        assert concentration_h(nu, 0.5) == 1.0


class TestTruncatedMoment:
    def test_isotropic_closed_form(self):
        # int_{|z|<1} |z|^{-0.5} dz = 4 against the layer-cake self check
        a_const = stable_norm_const(1, 0.5)
        val = truncated_moment(IsotropicStable(0.5, 1), 1.0, 1.0)
        assert val == pytest.approx(4.0 * a_const, rel=1e-12)

    def test_atomic(self):
        nu = FiniteAtomic(((0.5, 2.0),), 1)
        assert truncated_moment(nu, 2.0, 1.0) == pytest.approx(0.5, abs=1e-15)

    def test_small_radius_limit(self):
        val = truncated_moment(IsotropicStable(0.5, 1), 1.0, 1e-10)
        assert 0.0 <= val < 1e-5

    def test_divergent_moment_rejected(self):
        with pytest.raises(IntegrabilityError):
            truncated_moment(IsotropicStable(0.5, 1), 0.4, 1.0)

    def test_layer_cake_radial_density(self):
        nu = RadialDensity(1, lambda r: math.exp(-r * r))
        # the layer-cake self check runs internally at 1e-6
        val = truncated_moment(nu, 1.5, 2.0)
        oracle = 2.0 * integrate.quad(
            lambda r: r ** 1.5 * math.exp(-r * r), 0.0, 2.0)[0]
        assert val == pytest.approx(oracle, rel=1e-8)


class TestPsiStar:
    def test_stable_power(self):
        assert psi_star(StablePowerSymbol(0.5), 4.0) == pytest.approx(2.0, rel=1e-15)

    def test_log_symbol(self):
        assert psi_star(LogSymbol(), 1.0) == pytest.approx(math.log(2.0), rel=1e-15)

    def test_atomic_grid_sup(self):
        sym = FromMeasureSymbol(FiniteAtomic(((1.0, 1.0), (-1.0, 1.0)), 1))
        # sup over |xi| <= pi of 2(1 - cos xi) is attained at pi
        assert psi_star(sym, math.pi) == pytest.approx(4.0, rel=1e-12)
        # running max: beyond the peak the sup stays at 4
        assert psi_star(sym, 1.5 * math.pi) == pytest.approx(4.0, rel=1e-12)

    def test_rejects_nonpositive(self):
        with pytest.raises(DomainError):
            psi_star(LogSymbol(), 0.0)


class TestWusc:
    def test_exact_homogeneity(self):
        rep = check_wusc(StablePowerSymbol(0.7), 0.7, 0.0,
                         np.geomspace(1, 1e3, 13), np.geomspace(0.01, 10, 13))
        assert rep.c_emp == pytest.approx(1.0, abs=1e-12)
        assert not rep.unbounded_trend

    @pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75])
    def test_log_symbol_bound(self, alpha):
        rep = check_wusc(LogSymbol(), alpha, 1.0,
                         np.geomspace(1, 1e5, 26), np.geomspace(1.0001, 1e3, 26))
        assert rep.c_emp <= 4.0 / alpha
        assert rep.bounded

    def test_mismatched_exponent_flagged(self):
        rep = check_wusc(StablePowerSymbol(0.8), 0.5, 1.0,
                         np.geomspace(1, 1e6, 25), np.geomspace(1.001, 10, 10))
        assert rep.unbounded_trend
        assert rep.trend_slope == pytest.approx(0.3, abs=0.02)

    def test_empty_grid(self):
        with pytest.raises(DomainError):
            check_wusc(LogSymbol(), 0.5, 1.0, [], [2.0])


class TestScalingEquivalence:
    def test_isotropic_comparability(self):
        nu = IsotropicStable(0.5, 1)
        rep = scaling_equivalence_check(
            nu, FromMeasureSymbol(nu), 0.5, np.geomspace(1e-2, 1e2, 21))
        # psi*(r)/h(1/r) within [1/24, 2] for d = 1
        assert rep.comparability_ok
        assert rep.comparability_min >= 1.0
        assert rep.comparability_max <= 1.0

    def test_atomic_ratios_finite(self):
        rep = scaling_equivalence_check(
            TWO_ATOMS, FromMeasureSymbol(TWO_ATOMS), 0.5,
            np.geomspace(0.05, 20, 13))
        assert math.isfinite(rep.comparability_min)
        assert math.isfinite(rep.comparability_max)
        assert math.isfinite(rep.h_scaling_worst)

    def test_transfer_constant_d2(self):
        nu = IsotropicStable(0.9, 2)
        rep = scaling_equivalence_check(
            nu, FromMeasureSymbol(nu), 0.9, np.geomspace(1e-2, 1e2, 17))
        assert rep.transfer_ok
        assert rep.h_scaling_worst <= 16.0 * (1 + 2 * 2) * rep.c_bar_emp


class TestInvariants:
    @pytest.mark.parametrize("nu", [
        IsotropicStable(0.5, 1),
        IsotropicStable(1.2, 2),
        OneDimStable(0.7, 0.4),
        TWO_ATOMS,
        RadialDensity(1, lambda r: math.exp(-r)),
    ], ids=["iso05", "iso12d2", "skew", "atoms", "radial"])
    def test_monotonicity(self, nu, rng):
        for _ in range(20):
            r1, r2 = sorted(rng.uniform(0.05, 20.0, 2))
            if r1 == r2:
                continue
            assert tail_mass(nu, r2) <= tail_mass(nu, r1) + 1e-12
            assert concentration_h(nu, r2) <= concentration_h(nu, r1) + 1e-12

    @pytest.mark.parametrize("nu", [
        IsotropicStable(0.5, 1),
        OneDimStable(1.5, -0.3),
        TWO_ATOMS,
    ], ids=["iso", "skew15", "atoms"])
    def test_tail_bounded_by_h(self, nu):
        for r in np.geomspace(1e-3, 1e3, 61):
            assert tail_mass(nu, r) <= concentration_h(nu, r) * (1 + 1e-12)

    def test_layer_cake_isotropic_tolerance(self):
        # agreement to 1e-8 relative is asserted inside truncated_moment
        for alpha in (0.3, 0.8):
            truncated_moment(IsotropicStable(alpha, 1), 1.0, 2.0,
                             self_check_tol=1e-8)

    def test_exact_homogeneity_of_h(self):
        nu = IsotropicStable(0.6, 1)
        for lam in (0.5, 2.0, 11.0):
            for r in (0.3, 1.0, 4.0):
                assert concentration_h(nu, lam * r) == pytest.approx(
                    lam ** -0.6 * concentration_h(nu, r), rel=1e-13)

    def test_symmetric_intensities_match_isotropic(self):
        # beta = 0 gives c_+ = c_- = A_{1,-alpha} via Gamma evaluations
        for alpha in (0.3, 0.5, 0.9, 1.5):
            nu = OneDimStable(alpha, 0.0)
            a_const = stable_norm_const(1, alpha)
            assert nu.c_plus == pytest.approx(a_const, rel=1e-12)
            assert nu.c_minus == pytest.approx(a_const, rel=1e-12)

    def test_atom_at_origin_rejected(self):
        with pytest.raises(DomainError):
            FiniteAtomic(((0.0, 1.0),), 1)

    def test_radial_density_bv_violation_rejected(self):
        with pytest.raises((DomainError, NumericError)):
            RadialDensity(1, lambda r: r ** -2.5, cutoff=1.0)
