import numpy as np
import pytest

from allen_cahn_mp import VectorField, build_box_domain

ACCEPTANCE_LINES = []


def random_radial_field(domain, a, rho_max, rng):
    """Field a + rho*nu with rho uniform on [0, rho_max] and nu uniform on the sphere."""
    a = np.atleast_1d(np.asarray(a, dtype=float))
    m = len(a)
    k = domain.kind.size
    nu = rng.standard_normal((k, m))
    nu /= np.linalg.norm(nu, axis=1, keepdims=True)
    rho = rng.uniform(0.0, rho_max, k)
    vals = a + rho[:, None] * nu
    vals[domain.kind.ravel() == 0] = 0.0
    return VectorField(domain, vals.reshape(domain.shape + (m,)))


def random_gaussian_field(domain, m, rng, scale=1.0, center=None):
    center = np.zeros(m) if center is None else np.asarray(center, dtype=float)
    vals = center + scale * rng.standard_normal(domain.shape + (m,))
    vals[domain.kind == 0] = 0.0
    return VectorField(domain, vals)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def line17():
    return build_box_domain(1, [1.0], 1 / 16)


@pytest.fixture
def square9():
    return build_box_domain(2, [1.0, 1.0], 1 / 8)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
