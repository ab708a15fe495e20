import numpy as np
import pytest

from allen_cahn_mp import (DivergenceError, InvalidArgumentError, Potential, SolveOptions,
                           StalledError, VectorField, build_box_domain, build_masked_domain,
                           el_residual, energy, make_double_well_1d, make_quadratic,
                           make_triple_well_2d, minimize)
from allen_cahn_mp.harness import ring_data
from allen_cahn_mp.minimize import harmonic_extension, initial_field
from conftest import random_radial_field


CENTER_EXACT = 0.1 / np.cosh(np.sqrt(2) / 2)


@pytest.mark.parametrize("k,tol", [(64, 2e-3), (128, 5e-4)])
def test_closed_form_center_value(k, tol):
    d = build_box_domain(1, [1.0], 1 / k)
    u, stats = minimize(d, [0.1], make_quadratic(m=1))
    assert stats.converged
    assert abs(u.values[k // 2, 0] - CENTER_EXACT) <= tol
    assert np.max(np.abs(u.values)) <= 0.1


def test_well_data_returns_well():
    d = build_box_domain(2, [1.0, 1.0], 1 / 8)
    W = make_triple_well_2d()
    u, stats = minimize(d, W.a, W, init="constant")
    assert stats.iterations <= 1 and stats.converged
    assert energy(u, W).total == 0.0
    np.testing.assert_array_equal(u.flat[d.inset], np.tile(W.a, (len(d.inset), 1)))


def test_single_iteration_not_converged(rng):
    d = build_box_domain(1, [1.0], 1 / 32)
    W = make_double_well_1d()
    init = random_radial_field(d, W.a, 0.4, rng)
    init.flat[d.boundary] = [1.2]
    u, stats = minimize(d, [1.2], W, init=init, opts=SolveOptions(max_iters=1))
    assert not stats.converged and stats.status == "max_iters"
    assert energy(u, W).total <= energy(init, W).total


@pytest.mark.parametrize("method,precondition", [("cg", True), ("gd", True), ("cg", False)])
def test_energy_history_nonincreasing(method, precondition, rng):
    d = build_box_domain(2, [1.0, 1.0], 1 / 8)
    W = make_triple_well_2d()
    g = ring_data(d, W.a, 0.08)
    init = random_radial_field(d, W.a, 0.08, rng)
    opts = SolveOptions(method=method, precondition=precondition, max_iters=400)
    u, stats = minimize(d, g, W, init=init, opts=opts)
    hist = np.array(stats.energy_history)
    assert np.all(np.diff(hist) <= 0)
    assert hist[-1] == pytest.approx(energy(u, W).total, rel=1e-15)


def test_boundary_preserved_bitwise():
    d = build_masked_domain(np.pad(np.ones((7, 9), dtype=bool), 1), 0.1)
    W = make_triple_well_2d()
    g = ring_data(d, W.a, 0.07, winding=2)
    u, stats = minimize(d, g, W)
    ref = VectorField.constant(d, [0.0, 0.0])
    from allen_cahn_mp import set_boundary
    ref = set_boundary(ref, g)
    assert np.array_equal(u.flat[d.boundary], ref.flat[d.boundary])
    assert stats.converged


def test_converged_solution_is_locally_minimal(rng):
    d = build_box_domain(2, [1.0, 1.0], 1 / 16)
    W = make_triple_well_2d()
    u, stats = minimize(d, ring_data(d, W.a, 0.09), W)
    assert stats.converged
    J = energy(u, W).total
    eps = 1e-4 * np.max(np.abs(u.values))
    for _ in range(100):
        w = rng.standard_normal(u.values.shape)
        w[d.kind != 2] = 0.0
        w /= np.max(np.abs(w))
        assert energy(VectorField(d, u.values + eps * w), W).total >= J - 1e-12


def test_residual_consistent_with_grad_tol():
    d = build_box_domain(1, [1.0], 1 / 64)
    W = make_quadratic(m=1)
    opts = SolveOptions(grad_tol=1e-10)
    u, stats = minimize(d, [0.1], W, opts=opts)
    # interior gradient = h * (EL residual)
    assert el_residual(u, W) <= opts.grad_tol / d.h * (1 + 1e-9)


def test_harmonic_extension_linear_in_1d():
    d = build_box_domain(1, [1.0], 0.125)
    from allen_cahn_mp import set_boundary
    g = set_boundary(VectorField.constant(d, [0.0]), lambda x: 3.0 * x)
    u = harmonic_extension(d, g)
    np.testing.assert_allclose(u.values[:, 0], 3.0 * d.coords[:, 0], atol=1e-14)


def test_random_init_requires_rng(line17):
    W = make_double_well_1d()
    with pytest.raises(InvalidArgumentError):
        initial_field(line17, VectorField.constant(line17, W.a), W, "random")
    with pytest.raises(InvalidArgumentError):
        initial_field(line17, VectorField.constant(line17, W.a), W, "spiral")


def test_wrong_gradient_stalls(line17):
    # W = 0 but a claimed gradient of 100: the harmonic start already minimizes,
    # so no step along the claimed descent direction can decrease the energy
    bad = Potential("bad", 1, np.zeros(1), 0.5, lambda u: np.zeros(np.shape(u)[:-1]),
                    lambda u: np.full(np.shape(u), 100.0), lambda u: np.zeros(np.shape(u) + (1,)))
    with pytest.raises(StalledError) as info:
        minimize(line17, [1.2], bad)
    assert info.value.field is not None
    assert not info.value.stats.converged
    assert info.value.stats.status == "stalled"


def test_non_finite_energy_diverges(line17):
    inf_pot = Potential("inf", 1, np.zeros(1), 1.0,
                        lambda u: np.full(np.shape(u)[:-1], np.inf), lambda u: np.zeros(np.shape(u)),
                        lambda u: np.zeros(np.shape(u) + (1,)))
    with pytest.raises(DivergenceError):
        minimize(line17, [0.0], inf_pot)


@pytest.mark.parametrize("kw", [dict(max_iters=0), dict(grad_tol=0.0), dict(backtrack=1.0),
                                dict(armijo=0.0), dict(method="newton"), dict(initial_step=0)])
def test_options_validation(kw):
    with pytest.raises(InvalidArgumentError):
        SolveOptions(**kw)
