"""Bodies, covariance functions, directional derivatives, perimeters."""

import math

import numpy as np
import pytest

from nonlocal_heat import (
    Ball,
    Box,
    DisjointBoxUnion,
    DomainError,
    Interval,
    Polygon2D,
    covariance,
    covariance_mc_oracle,
    directional_deriv_at_zero,
    perimeter,
)
from nonlocal_heat.geometry import covariance_batch, directional_deriv_richardson

UNIT_INTERVAL = Interval(0.0, 1.0)
UNIT_SQUARE = Box(((0.0, 1.0), (0.0, 1.0)))
DISC = Ball((0.0, 0.0), 1.0)
SQUARE_POLY = Polygon2D(((0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)))
L_SHAPE = Polygon2D(((0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)))
TWO_BOXES = DisjointBoxUnion((Box(((0.0, 1.0),)), Box(((2.0, 3.5),))))

ALL_BODIES = [UNIT_INTERVAL, UNIT_SQUARE, DISC, SQUARE_POLY, L_SHAPE, TWO_BOXES]
BODY_IDS = ["interval", "square", "disc", "square-poly", "l-shape", "two-boxes"]


def random_shift(body, rng, scale=None):
    d = body.dimension
    scale = scale or body.diameter
    return rng.uniform(-1.2 * scale, 1.2 * scale, d)


class TestCovariance:
    def test_interval_halfway(self):
        assert covariance(UNIT_INTERVAL, 0.5) == pytest.approx(0.5, abs=1e-15)

    @pytest.mark.parametrize("body", ALL_BODIES, ids=BODY_IDS)
    def test_zero_shift_gives_volume(self, body):
        y = np.zeros(body.dimension)
        assert covariance(body, y) == pytest.approx(body.volume, rel=1e-12)

    def test_disc_lens_closed_form(self):
        # two unit discs at distance 1: lens area 2 pi / 3 - sqrt(3) / 2
        expected = 2.0 * math.pi / 3.0 - math.sqrt(3.0) / 2.0
        assert covariance(DISC, (1.0, 0.0)) == pytest.approx(expected, rel=1e-13)

    def test_disc_lens_vs_mc(self):
        expected = 2.0 * math.pi / 3.0 - math.sqrt(3.0) / 2.0
        est, se = covariance_mc_oracle(DISC, (1.0, 0.0), 10 ** 7, seed=11)
        assert abs(est - expected) < 3.0 * se

    def test_lshape_vs_mc(self):
        est, se = covariance_mc_oracle(L_SHAPE, (0.3, -0.2), 10 ** 6, seed=3)
        exact = covariance(L_SHAPE, (0.3, -0.2))
        assert abs(est - exact) < 4.0 * se

    def test_batch_matches_scalar(self, rng):
        for body in ALL_BODIES:
            ys = np.array([random_shift(body, rng) for _ in range(32)])
            batch = covariance_batch(body, ys)
            scalar = np.array([covariance(body, y) for y in ys])
            np.testing.assert_allclose(batch, scalar, rtol=1e-12, atol=1e-14)


class TestDirectionalDerivative:
    def test_interval(self):
        assert directional_deriv_at_zero(UNIT_INTERVAL, [1.0]) == 1.0
        assert directional_deriv_at_zero(UNIT_INTERVAL, [-1.0]) == 1.0

    def test_unit_square_axis(self):
        assert directional_deriv_at_zero(UNIT_SQUARE, (1.0, 0.0)) == \
            pytest.approx(1.0, abs=1e-14)

    def test_disc_any_direction(self):
        # lim (pi R^2 - lens(r)) / r = 2R for a disc of radius R
        for theta in (0.0, 0.7, 2.1):
            u = (math.cos(theta), math.sin(theta))
            assert directional_deriv_at_zero(DISC, u) == pytest.approx(2.0, rel=1e-14)

    def test_disc_richardson_agreement(self):
        closed = directional_deriv_at_zero(DISC, (1.0, 0.0))
        numeric = directional_deriv_richardson(DISC, (1.0, 0.0))
        assert numeric == pytest.approx(closed, rel=1e-6)

    def test_polygon_projection_formula(self):
        # unit square as a polygon behaves like the box
        assert directional_deriv_at_zero(SQUARE_POLY, (1.0, 0.0)) == \
            pytest.approx(1.0, abs=1e-14)
        u = (math.sqrt(0.5), math.sqrt(0.5))
        assert directional_deriv_at_zero(SQUARE_POLY, u) == \
            pytest.approx(directional_deriv_at_zero(UNIT_SQUARE, u), rel=1e-12)

    def test_richardson_on_polygon(self):
        u = (0.6, 0.8)
        closed = directional_deriv_at_zero(L_SHAPE, u)
        numeric = directional_deriv_richardson(L_SHAPE, u)
        assert numeric == pytest.approx(closed, rel=1e-6)

    def test_non_unit_vector_rejected(self):
        with pytest.raises(DomainError):
            directional_deriv_at_zero(UNIT_SQUARE, (1.0, 1.0))


class TestPerimeter:
    def test_interval(self):
        assert perimeter(UNIT_INTERVAL) == pytest.approx(2.0, abs=1e-15)

    def test_unit_square(self):
        assert perimeter(UNIT_SQUARE) == pytest.approx(4.0, rel=1e-5)

    def test_disc(self):
        assert abs(perimeter(DISC) - 2.0 * math.pi) < 1e-3

    def test_ball_3d(self):
        ball = Ball((0.0, 0.0, 0.0), 1.0)
        assert perimeter(ball) == pytest.approx(4.0 * math.pi, rel=1e-6)

    def test_polygon_square(self):
        assert perimeter(SQUARE_POLY) == pytest.approx(4.0, rel=1e-5)

    def test_l_shape(self):
        assert perimeter(L_SHAPE) == pytest.approx(8.0, rel=1e-5)

    def test_disjoint_union(self):
        assert perimeter(TWO_BOXES) == pytest.approx(4.0, abs=1e-12)

    def test_union_with_shared_face(self):
        merged = DisjointBoxUnion((
            Box(((0.0, 1.0), (0.0, 1.0))),
            Box(((1.0, 2.0), (0.0, 1.0))),
        ))
        # shared interior face does not count: the union is a 2x1 box
        assert perimeter(merged) == pytest.approx(6.0, rel=1e-5)


class TestMcOracle:
    def test_interval(self):
        est, se = covariance_mc_oracle(UNIT_INTERVAL, [0.25], 10 ** 6, seed=0)
        assert abs(est - 0.75) < 3.0 * se

    def test_square_polygon(self):
        est, se = covariance_mc_oracle(SQUARE_POLY, (0.5, 0.5), 10 ** 6, seed=1)
        assert abs(est - 0.25) < 3.0 * se

    def test_ball_3d_lens(self):
        ball = Ball((0.0, 0.0, 0.0), 1.0)
        closed = covariance(ball, (0.7, 0.0, 0.0))
        est, se = covariance_mc_oracle(ball, (0.7, 0.0, 0.0), 10 ** 6, seed=2)
        assert abs(est - closed) < 3.0 * se

    def test_small_sample_rejected(self):
        with pytest.raises(DomainError):
            covariance_mc_oracle(UNIT_INTERVAL, [0.1], 10)


class TestInvariantSuite:
    @pytest.mark.parametrize("body", ALL_BODIES, ids=BODY_IDS)
    def test_symmetry(self, body, rng):
        for _ in range(100):
            y = random_shift(body, rng)
            assert covariance(body, y) == pytest.approx(
                covariance(body, -y), rel=1e-11, abs=1e-12)

    @pytest.mark.parametrize("body", ALL_BODIES, ids=BODY_IDS)
    def test_support(self, body, rng):
        d = body.dimension
        for _ in range(25):
            u = rng.standard_normal(d)
            u /= np.linalg.norm(u)
            r = body.diameter * rng.uniform(1.0, 3.0)
            assert covariance(body, r * u) == 0.0

    @pytest.mark.parametrize("body", ALL_BODIES, ids=BODY_IDS)
    def test_range_and_bound(self, body, rng):
        g0 = body.volume
        per = perimeter(body)
        c = max(per / 2.0, g0)
        for _ in range(50):
            y = random_shift(body, rng)
            g = covariance(body, y)
            assert 0.0 <= g <= g0 + 1e-12
            gap = g0 - g
            assert gap <= c * min(1.0, np.linalg.norm(y)) + 1e-10

    @pytest.mark.parametrize("body", ALL_BODIES, ids=BODY_IDS)
    def test_lipschitz(self, body, rng):
        lip = perimeter(body) / 2.0
        for _ in range(100):
            y1 = random_shift(body, rng)
            y2 = y1 + rng.uniform(-0.5, 0.5, body.dimension)
            lhs = abs(covariance(body, y1) - covariance(body, y2))
            assert lhs <= lip * np.linalg.norm(y1 - y2) + 1e-12

    @pytest.mark.parametrize("body", [UNIT_INTERVAL, UNIT_SQUARE, DISC, SQUARE_POLY],
                             ids=["interval", "square", "disc", "square-poly"])
    def test_mc_agreement(self, body, rng):
        for k in range(20):
            y = random_shift(body, rng, scale=0.6 * body.diameter)
            exact = covariance(body, y)
            est, se = covariance_mc_oracle(body, y, 10 ** 6, seed=1000 + k)
            assert abs(est - exact) <= 4.0 * max(se, 1e-7)


class TestValidation:
    def test_interval_order(self):
        with pytest.raises(DomainError):
            Interval(1.0, 0.0)

    def test_self_intersecting_polygon(self):
        with pytest.raises(DomainError):
            Polygon2D(((0, 0), (1, 1), (1, 0), (0, 1)))

    def test_overlapping_union(self):
        with pytest.raises(DomainError):
            DisjointBoxUnion((Box(((0.0, 2.0),)), Box(((1.0, 3.0),))))

    def test_ball_radius(self):
        with pytest.raises(DomainError):
            Ball((0.0,), -1.0)
