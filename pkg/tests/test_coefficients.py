import math

import numpy as np
import pytest

from hnls.boundary import (
    MovingDomain,
    constant_profile,
    linear_profile,
    physical_to_computational,
    sinusoidal_profile,
)
from hnls.coefficients import evaluate_coefficients
from hnls.errors import SingularDomainError
from hnls.grid import GridSpec


def make_domain(alpha, beta, horizon=10.0):
    return MovingDomain(alpha=alpha, beta=beta, alpha0=1e-6, beta0=1e6, horizon=horizon)


GRID = GridSpec(16)


def test_fixed_unit_domain_kills_motion_terms():
    dom = make_domain(constant_profile(0.0), constant_profile(1.0))
    c = evaluate_coefficients(dom, 0.3, GRID)
    assert c.p == 1.0
    assert c.B == 1.0
    assert c.C == 1.0
    assert np.all(c.L == 0.0)


def test_case1_values_at_zero():
    dom = make_domain(linear_profile(3.0, -40.0), sinusoidal_profile(40.0, 1.0, 4 * math.pi))
    c = evaluate_coefficients(dom, 0.0, GRID)
    assert c.p == pytest.approx(0.0125, rel=1e-15)
    assert c.B == pytest.approx(1.953125e-6, rel=1e-12)
    assert c.C == pytest.approx(1.5625e-4, rel=1e-12)


def test_translating_unit_window():
    dom = make_domain(linear_profile(1.0, 0.0), linear_profile(1.0, 1.0))
    c = evaluate_coefficients(dom, 0.7, GRID)
    assert c.p == pytest.approx(1.0, rel=1e-15)
    assert np.allclose(c.L, -1.0, atol=1e-14)


def test_advection_affine_in_x():
    dom = make_domain(linear_profile(3.0, -40.0), sinusoidal_profile(40.0, 1.0, 4 * math.pi))
    grid = GridSpec(64)
    c = evaluate_coefficients(dom, 2.3, grid)
    x = grid.nodes
    affine = c.L[0] + x * (c.L[-1] - c.L[0])
    assert np.max(np.abs(affine - c.L)) < 1e-15 * max(1.0, np.max(np.abs(c.L)))


def test_pure_translation_is_x_independent():
    dom = make_domain(linear_profile(2.0, -5.0), linear_profile(2.0, 5.0))
    c = evaluate_coefficients(dom, 1.0, GRID)
    assert np.ptp(c.L) == 0.0


@pytest.mark.parametrize("t,xi", [(0.5, -10.0), (2.0, 5.0)])
def test_chart_rate_matches_advection_field(t, xi):
    # d/dt of x(xi, t) at fixed xi equals L(x, t); first-order rate in h
    dom = make_domain(linear_profile(3.0, -40.0), sinusoidal_profile(40.0, 1.0, 4 * math.pi))
    grid = GridSpec(8)
    x = physical_to_computational(dom, xi, t)
    c = evaluate_coefficients(dom, t, grid)
    l_here = c.L[0] + x * (c.L[-1] - c.L[0])
    errs = []
    for h in (1e-3, 5e-4, 2.5e-4):
        rate = (physical_to_computational(dom, xi, t + h) - x) / h
        errs.append(abs(rate - l_here))
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 2e-3 * max(1.0, abs(l_here))
    # halving h roughly halves the error
    assert errs[0] / errs[1] == pytest.approx(2.0, rel=0.35)


def test_zero_width_is_singular():
    dom = make_domain(constant_profile(0.0), constant_profile(0.0))
    with pytest.raises(SingularDomainError):
        evaluate_coefficients(dom, 0.0, GRID)


def test_b_and_c_are_recomputed_from_p():
    dom = make_domain(constant_profile(0.0), constant_profile(2.0))
    c = evaluate_coefficients(dom, 0.0, GRID)
    assert c.B == c.p**3
    assert c.C == c.p**2
