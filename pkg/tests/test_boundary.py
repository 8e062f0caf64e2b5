import math

import numpy as np
import pytest

from hnls.boundary import (
    BoundaryProfile,
    MovingDomain,
    computational_to_physical,
    constant_profile,
    eval_boundary,
    linear_profile,
    physical_to_computational,
    piecewise_absolute_profile,
    sinusoidal_profile,
    validate_domain,
)
from hnls.errors import DomainError


def case1_domain(horizon=9.0):
    return MovingDomain(
        alpha=linear_profile(3.0, -40.0),
        beta=sinusoidal_profile(40.0, 1.0, 4.0 * math.pi),
        alpha0=50.0,
        beta0=81.0,
        horizon=horizon,
    )


def unit_domain(horizon=1.0):
    return MovingDomain(
        alpha=constant_profile(0.0),
        beta=constant_profile(1.0),
        alpha0=0.5,
        beta0=2.0,
        horizon=horizon,
    )


class TestEvalBoundary:
    def test_case1_at_zero(self):
        a, b, da, db = eval_boundary(case1_domain(), 0.0)
        assert a == -40.0
        assert b == 40.0
        assert da == 3.0
        assert db == pytest.approx(4.0 * math.pi, rel=1e-15)

    def test_constant_profiles(self):
        for t in (0.0, 0.3, 1.0):
            a, b, da, db = eval_boundary(unit_domain(), t)
            assert (a, b) == (0.0, 1.0)
            assert da == 0.0 and db == 0.0

    def test_kink_uses_right_derivative(self):
        x0 = -40.0
        c = (x0 + 20.0) / 1.7
        dom = MovingDomain(
            alpha=piecewise_absolute_profile(c, 1.7, -20.0),
            beta=sinusoidal_profile(10.0, 1.0, 4.0 * math.pi),
            alpha0=1.0,
            beta0=200.0,
            horizon=3.4,
        )
        a, _, da, _ = eval_boundary(dom, 1.7)
        assert a == pytest.approx(-20.0, abs=1e-12)
        assert da == c  # right-sided value, not -c
        # one-sided values away from the kink
        assert eval_boundary(dom, 1.0)[2] == -c
        assert eval_boundary(dom, 2.0)[2] == c

    def test_out_of_horizon_raises(self):
        dom = unit_domain()
        with pytest.raises(DomainError):
            eval_boundary(dom, 1.5)
        with pytest.raises(DomainError):
            eval_boundary(dom, -0.5)


class TestProfileValidation:
    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            BoundaryProfile("spline", (1.0,))

    def test_wrong_arity(self):
        with pytest.raises(ValueError):
            BoundaryProfile("linear", (1.0,))


class TestValidateDomain:
    def test_constant_ok(self):
        assert validate_domain(unit_domain()) is None

    def test_case1_width_bounds(self):
        # brute-force check of the minimum width over a very fine sample,
        # then the production check at its default sampling
        dom = case1_domain()
        ts = np.linspace(0.0, 9.0, 200_001)
        widths = dom.beta.value(ts) - dom.alpha.value(ts)
        assert widths.min() >= 52.0  # 80 - 27 + sin term stays above 52
        assert widths.max() <= 81.0
        assert validate_domain(dom) is None

    def test_collapsing_width_violation(self):
        dom = MovingDomain(
            alpha=linear_profile(1.0, 0.0),
            beta=constant_profile(1.0),
            alpha0=0.1,
            beta0=2.0,
            horizon=2.0,
        )
        v = validate_domain(dom, samples=20_001)
        assert v is not None
        # width 1 - t crosses 0.1 at t = 0.9
        assert v.t == pytest.approx(0.9, abs=1e-3)
        assert v.width <= 0.1

    def test_needs_two_samples(self):
        with pytest.raises(ValueError):
            validate_domain(unit_domain(), samples=1)


class TestCoordinateMaps:
    def test_endpoints_map_to_corners(self):
        dom = case1_domain()
        for t in (0.0, 2.5, 9.0):
            a, b, _, _ = eval_boundary(dom, t)
            assert physical_to_computational(dom, a, t) == pytest.approx(0.0, abs=1e-14)
            assert physical_to_computational(dom, b, t) == pytest.approx(1.0, abs=1e-14)

    def test_midpoint(self):
        dom = MovingDomain(
            alpha=constant_profile(-40.0),
            beta=constant_profile(40.0),
            alpha0=1.0,
            beta0=100.0,
            horizon=1.0,
        )
        assert physical_to_computational(dom, 0.0, 0.5) == pytest.approx(0.5, rel=1e-15)
        assert computational_to_physical(dom, 0.5, 0.5) == pytest.approx(0.0, abs=1e-13)

    def test_round_trip_random(self):
        dom = case1_domain()
        rng = np.random.default_rng(7)
        for t in (0.0, 4.0, 9.0):
            a, b, _, _ = eval_boundary(dom, t)
            xi = rng.uniform(a, b, size=100)
            back = computational_to_physical(dom, physical_to_computational(dom, xi, t), t)
            assert np.max(np.abs(back - xi) / np.abs(xi).clip(min=1.0)) < 1e-13

    def test_identity_on_unit_interval(self):
        dom = case1_domain()
        x = np.linspace(0.0, 1.0, 57)
        back = physical_to_computational(dom, computational_to_physical(dom, x, 3.0), 3.0)
        assert np.max(np.abs(back - x)) < 1e-13

    def test_outside_interval_raises(self):
        dom = unit_domain()
        with pytest.raises(DomainError):
            physical_to_computational(dom, 1.5, 0.0)
