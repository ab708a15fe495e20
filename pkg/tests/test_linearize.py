import numpy as np
import pytest

from allen_cahn_mp import (InvalidArgumentError, Potential, VectorField, assemble_Q,
                           assemble_Q_segment, build_box_domain, make_double_well_1d,
                           make_quadratic, make_triple_well_2d, residual_fundamental,
                           residual_segment)
from conftest import random_radial_field


def trapezoid_oracle(f, n=1_000_000):
    t = np.linspace(0.0, 1.0, n + 1)
    y = f(t)
    return (np.sum(y) - 0.5 * (y[0] + y[-1])) / n


def gaussian_well(m=2):
    """W = 1 - exp(-|u|^2): smooth, non-polynomial."""
    def value(u):
        return 1.0 - np.exp(-np.sum(u * u, axis=-1))

    def grad(u):
        return 2.0 * u * np.exp(-np.sum(u * u, axis=-1))[..., None]

    def hess(u):
        e = np.exp(-np.sum(u * u, axis=-1))[..., None, None]
        return e * (2.0 * np.eye(m) - 4.0 * u[..., :, None] * u[..., None, :])

    return Potential("gaussian", m, np.zeros(m), 0.5, value, grad, hess)


@pytest.mark.parametrize("k", [1, 2, 8])
def test_quadratic_Q_is_twice_identity(k, rng, square9):
    W = make_quadratic(m=2, a=[0.3, 0.1])
    u = random_radial_field(square9, W.a, 2.0, rng)
    Q = assemble_Q(u, W.a, W, k)
    # Gauss weights sum to 1 up to rounding
    np.testing.assert_allclose(Q.flat[square9.inset], np.tile(2 * np.eye(2), (81, 1, 1)), atol=1e-14)
    assert residual_fundamental(u, W.a, W, Q) <= 1e-12


def test_degenerate_segment_double_well():
    d = build_box_domain(1, [1.0], 0.5)
    W = make_double_well_1d()
    Q = assemble_Q(VectorField.constant(d, [1.0]), W.a, W, 1)
    np.testing.assert_allclose(Q.values[:, 0, 0], 8.0, rtol=1e-15)


def test_double_well_against_trapezoid_oracle():
    d = build_box_domain(1, [1.0], 0.5)
    W = make_double_well_1d()
    Q = assemble_Q(VectorField.constant(d, [0.6]), W.a, W, 8)
    oracle = trapezoid_oracle(lambda t: 12 * (1 - 0.4 * t) ** 2 - 4)
    assert abs(Q.values[1, 0, 0] - oracle) <= 1e-10


def test_double_well_fundamental_residual(rng, line17):
    W = make_double_well_1d()
    u = random_radial_field(line17, W.a, 1.5, rng)
    Q = assemble_Q(u, W.a, W, 16)
    assert residual_fundamental(u, W.a, W, Q) <= 1e-10


def test_residual_nonincreasing_in_quadrature_order(rng, square9):
    W = gaussian_well()
    u = random_radial_field(square9, W.a, 1.5, rng)
    res = [residual_fundamental(u, W.a, W, assemble_Q(u, W.a, W, k)) for k in (1, 2, 4, 8, 16)]
    assert all(b <= a + 1e-13 for a, b in zip(res, res[1:]))
    assert res[-1] <= 1e-12


def test_segment_zero_length_gives_hessian(rng, square9):
    W = make_triple_well_2d()
    u = random_radial_field(square9, W.a, 0.3, rng)
    Qb = assemble_Q_segment(u, u, W, 4)
    np.testing.assert_allclose(Qb.flat[square9.inset], W.hess(u.flat[square9.inset]), atol=1e-14)


def test_segment_quadratic_exact(rng, square9):
    W = make_quadratic(m=2)
    u = random_radial_field(square9, W.a, 1.0, rng)
    v = random_radial_field(square9, W.a, 1.0, rng)
    assert residual_segment(u, v, W, assemble_Q_segment(u, v, W, 2)) <= 1e-12


def test_segment_double_well_against_oracle(rng, line17):
    W = make_double_well_1d()
    u = random_radial_field(line17, W.a, 1.0, rng)
    v = random_radial_field(line17, W.a, 1.0, rng)
    Qb = assemble_Q_segment(u, v, W, 8)
    assert residual_segment(u, v, W, Qb) <= 1e-10
    p = line17.inset[5]
    uu, vv = u.flat[p, 0], v.flat[p, 0]
    oracle = trapezoid_oracle(lambda t: 12 * (vv + t * (uu - vv)) ** 2 - 4)
    assert abs(Qb.flat[p, 0, 0] - oracle) <= 1e-10


def test_segment_rejects_mismatch(square9, line17):
    W = make_quadratic(m=1)
    with pytest.raises(InvalidArgumentError):
        assemble_Q_segment(VectorField.constant(square9, [0.0]), VectorField.constant(line17, [0.0]), W)


def test_symmetry_and_bounds(rng, square9):
    W = make_triple_well_2d()
    u = random_radial_field(square9, W.a, 0.3, rng)
    Q = assemble_Q(u, W.a, W, 8)
    M = Q.flat[square9.inset]
    assert np.max(np.abs(M - np.swapaxes(M, 1, 2))) <= 1e-12
    assert np.isfinite(Q.max_operator_norm)
    assert Q.max_operator_norm <= Q.hessian_bound * (1 + 1e-12)


def test_rejects_zero_quad_nodes(square9):
    W = make_quadratic(m=2)
    with pytest.raises(InvalidArgumentError):
        assemble_Q(VectorField.constant(square9, [0.0, 0.0]), W.a, W, 0)
