import numpy as np
import pytest

from hnls.grid import (
    BandedMatrix,
    GridSpec,
    StateVector,
    apply_backward_difference,
    apply_central_difference,
    apply_forward_difference,
    build_first_derivative,
    build_second_derivative,
    build_third_derivative,
)


class TestGridSpec:
    def test_dx_times_m_is_one(self):
        for m in (8, 50, 200):
            g = GridSpec(m)
            assert g.dx * m == 1.0
            assert g.nodes.size == m + 1
            assert g.nodes[-1] == pytest.approx(1.0, rel=1e-15)

    def test_m_floor(self):
        with pytest.raises(ValueError):
            GridSpec(7)


class TestStateVector:
    def test_projection_on_construction(self):
        u = StateVector(np.ones(11, dtype=complex))
        assert u.values[0] == 0.0
        assert u.values[9] == 0.0
        assert u.values[10] == 0.0
        assert np.all(u.values[1:9] == 1.0)

    def test_zeros(self):
        u = StateVector.zeros(10)
        assert np.all(u.values == 0.0)
        assert u.M == 10


class TestElementaryDifferences:
    def test_forward_constant_vanishes_on_interior(self):
        u = 3.0 * np.ones(9)
        d = apply_forward_difference(u, 0.125)
        assert np.all(d[:-1] == 0.0)
        assert d[-1] == -3.0 / 0.125  # zero extension

    def test_forward_exact_on_ramp(self):
        x = np.arange(5) * 0.25
        d = apply_forward_difference(x, 0.25)
        assert np.allclose(d[:-1], 1.0)

    def test_forward_hand_case(self):
        d = apply_forward_difference(np.array([0.0, 1.0, 0.0]), 1.0)
        assert list(d) == [1.0, -1.0, 0.0]

    def test_backward_hand_case(self):
        d = apply_backward_difference(np.array([0.0, 1.0, 0.0]), 1.0)
        assert list(d) == [0.0, 1.0, -1.0]

    def test_central_is_average(self):
        rng = np.random.default_rng(3)
        u = rng.standard_normal(17) + 1j * rng.standard_normal(17)
        avg = 0.5 * (apply_forward_difference(u, 0.1) + apply_backward_difference(u, 0.1))
        assert np.allclose(apply_central_difference(u, 0.1), avg, atol=1e-14)


def dense_via_apply(op, n):
    """Column-by-column dense reconstruction (brute-force oracle)."""
    cols = []
    for j in range(n):
        e = np.zeros(n)
        e[j] = 1.0
        cols.append(op(e))
    return np.stack(cols, axis=1)


class TestMatrices:
    def test_third_derivative_first_rows_order5(self):
        dx = 0.5
        m = build_third_derivative(4, dx)
        dense = m.to_dense() * dx**3
        assert np.allclose(dense[0], [0.0, -1.0, 0.5, 0.0, 0.0])
        assert np.allclose(dense[1], [1.0, 0.0, -1.0, 0.5, 0.0])
        assert np.allclose(dense[-1], [0.0, 0.0, -0.5, 1.0, 0.0])

    def test_third_derivative_exact_on_cubics(self):
        for m in (8, 10, 16):
            dx = 1.0 / m
            x = np.arange(m + 1) * dx
            d3 = build_third_derivative(m, dx).apply(x**3)
            interior = d3[2 : m - 1]
            assert np.max(np.abs(interior - 6.0)) / 6.0 < 1e-12

    def test_third_equals_composition(self):
        # D3 == central o D+ o D- entrywise, away from nothing: the
        # composition with zero extension is exactly the displayed matrix
        m, dx = 10, 0.1
        comp = dense_via_apply(
            lambda v: apply_central_difference(
                apply_forward_difference(apply_backward_difference(v, dx), dx), dx
            ),
            m + 1,
        )
        d3 = build_third_derivative(m, dx).to_dense()
        inner = slice(1, m)  # first/last rows differ: the composition's
        # boundary closure applies the factors in sequence, the display
        # truncates the product stencil
        assert np.allclose(comp[inner, :], d3[inner, :], atol=1e-9)

    def test_second_derivative_rows(self):
        m, dx = 8, 0.125
        dense = build_second_derivative(m, dx).to_dense() * dx**2
        assert np.allclose(np.diag(dense), -2.0)
        assert np.allclose(np.diag(dense, 1), 1.0)
        assert np.allclose(np.diag(dense, -1), 1.0)

    @pytest.mark.parametrize("m", [8, 50, 200])
    def test_symmetry_structure(self, m):
        dx = 1.0 / m
        d1 = build_first_derivative(m, dx).to_dense()
        d2 = build_second_derivative(m, dx).to_dense()
        d3 = build_third_derivative(m, dx).to_dense()
        assert np.array_equal(d1, -d1.T)
        assert np.array_equal(d3, -d3.T)
        assert np.array_equal(d2, d2.T)

    def test_quadratic_forms(self):
        m, dx = 32, 1.0 / 32
        rng = np.random.default_rng(11)
        v = rng.standard_normal(m + 1) + 1j * rng.standard_normal(m + 1)
        d2v = build_second_derivative(m, dx).apply(v)
        d3v = build_third_derivative(m, dx).apply(v)
        q2 = np.sum(d2v * np.conj(v))
        q3 = np.sum(d3v * np.conj(v))
        assert abs(q2.imag) < 1e-9 * abs(q2.real)
        assert q2.real <= 0.0  # negative semidefinite
        assert abs(q3.real) < 1e-9 * max(1.0, abs(q3.imag))

    def test_consistency_order_two(self):
        # sin(pi x) refinement, interior nodes only
        errs = {1: [], 2: [], 3: []}
        for m in (50, 100):
            dx = 1.0 / m
            x = np.arange(m + 1) * dx
            u = np.sin(np.pi * x)
            sl = slice(2, m - 1)
            errs[1].append(np.max(np.abs(build_first_derivative(m, dx).apply(u)[sl] - np.pi * np.cos(np.pi * x)[sl])))
            errs[2].append(np.max(np.abs(build_second_derivative(m, dx).apply(u)[sl] + np.pi**2 * u[sl])))
            errs[3].append(np.max(np.abs(build_third_derivative(m, dx).apply(u)[sl] + np.pi**3 * np.cos(np.pi * x)[sl])))
        for k in (1, 2, 3):
            order = np.log2(errs[k][0] / errs[k][1])
            assert order == pytest.approx(2.0, abs=0.2)

    def test_size_floor(self):
        with pytest.raises(ValueError):
            build_third_derivative(3, 0.25)


class TestBandedMatrix:
    def test_apply_matches_dense(self):
        rng = np.random.default_rng(5)
        n = 12
        bands = rng.standard_normal((5, n)) + 1j * rng.standard_normal((5, n))
        # zero out the truncated corners like a real banded matrix
        bands[0, :2] = 0
        bands[1, :1] = 0
        bands[3, -1:] = 0
        bands[4, -2:] = 0
        m = BandedMatrix(order=n, lower=2, upper=2, bands=bands)
        v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        assert np.allclose(m.apply(v), m.to_dense() @ v, atol=1e-13)

    def test_shape_check(self):
        with pytest.raises(ValueError):
            BandedMatrix(order=5, lower=1, upper=1, bands=np.zeros((4, 5)))
