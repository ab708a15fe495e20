"""Dirichlet-constrained minimization of the discrete energy.

Descent runs on the interior node values only, with Armijo backtracking so
the recorded energy history is nonincreasing. Two directions are available:
steepest descent (``"gd"``) and Polak-Ribiere nonlinear conjugate gradients
(``"cg"``). Both may be preconditioned with the factorized shifted grid
Laplacian, which removes the 1/h^2 stiffness of the Dirichlet term.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from .energy import energy, energy_gradient
from .errors import DivergenceError, InvalidArgumentError, StalledError
from .grid import INTERIOR, VectorField, set_boundary

MAX_HALVINGS = 60


@dataclass
class SolveOptions:
    max_iters: int = 5000
    grad_tol: float = 1e-8
    initial_step: float = 1.0
    backtrack: float = 0.5
    armijo: float = 1e-4
    method: str = "cg"
    precondition: bool = True

    def __post_init__(self):
        if self.max_iters < 1:
            raise InvalidArgumentError("max_iters must be >= 1")
        if self.grad_tol <= 0:
            raise InvalidArgumentError("grad_tol must be positive")
        if not 0 < self.backtrack < 1 or not 0 < self.armijo < 1:
            raise InvalidArgumentError("backtrack and armijo must lie in (0, 1)")
        if self.initial_step <= 0:
            raise InvalidArgumentError("initial_step must be positive")
        if self.method not in ("gd", "cg"):
            raise InvalidArgumentError(f"unknown method {self.method!r}")


@dataclass
class SolveStats:
    iterations: int = 0
    grad_norm: float = float("inf")
    energy: float = float("inf")
    energy_history: list = field(default_factory=list)
    converged: bool = False
    status: str = "running"

    def to_dict(self):
        return {"iterations": self.iterations, "grad_norm": self.grad_norm,
                "energy": self.energy, "converged": self.converged, "status": self.status,
                "energy_history": list(self.energy_history)}


def interior_laplacian(domain):
    """Sparse graph Laplacian on interior nodes (boundary neighbors eliminated)."""
    inner = domain.interior
    pos = np.full(domain.kind.size, -1)
    pos[inner] = np.arange(len(inner))
    i, j = domain.links
    deg = np.zeros(len(inner))
    np.add.at(deg, pos[i[pos[i] >= 0]], 1.0)
    np.add.at(deg, pos[j[pos[j] >= 0]], 1.0)
    both = (pos[i] >= 0) & (pos[j] >= 0)
    rows = np.concatenate([pos[i[both]], pos[j[both]], np.arange(len(inner))])
    cols = np.concatenate([pos[j[both]], pos[i[both]], np.arange(len(inner))])
    data = np.concatenate([-np.ones(2 * both.sum()), deg])
    return sp.csc_matrix((data, (rows, cols)), shape=(len(inner),) * 2)


def harmonic_extension(domain, g_field):
    """Solve the W = 0 problem: discrete Laplace equation with boundary data."""
    out = g_field.copy()
    inner = domain.interior
    L = interior_laplacian(domain)
    # boundary contributions on the right-hand side
    rhs = np.zeros((len(inner), g_field.m))
    pos = np.full(domain.kind.size, -1)
    pos[inner] = np.arange(len(inner))
    i, j = domain.links
    for p, q in ((i, j), (j, i)):
        sel = (pos[p] >= 0) & (domain.kind.ravel()[q] != INTERIOR)
        np.add.at(rhs, pos[p[sel]], g_field.flat[q[sel]])
    out.flat[inner] = splu(L).solve(rhs)
    return out


def boundary_field(domain, g, m):
    if isinstance(g, VectorField):
        return g.copy()
    base = VectorField.constant(domain, np.zeros(m))
    return set_boundary(base, g)


def initial_field(domain, g_field, W, policy, rng=None, radius=None):
    """Starting iterate for a named policy: harmonic, constant, or random."""
    if policy == "harmonic":
        return harmonic_extension(domain, g_field)
    out = g_field.copy()
    inner = domain.interior
    if policy == "constant":
        out.flat[inner] = W.a
        return out
    if policy == "random":
        if rng is None:
            raise InvalidArgumentError("random initialization needs an rng")
        radius = W.r0 if radius is None else radius
        z = rng.standard_normal((len(inner), W.m))
        z /= np.maximum(np.linalg.norm(z, axis=1, keepdims=True), 1e-300)
        s = radius * rng.uniform(0.0, 1.0, len(inner)) ** (1.0 / W.m)
        out.flat[inner] = W.a + s[:, None] * z
        return out
    raise InvalidArgumentError(f"unknown initialization policy {policy!r}")


def _preconditioner(domain, W, m):
    L = interior_laplacian(domain)
    hess_a = np.atleast_2d(W.hess(W.a))
    shift = max(float(np.linalg.norm(hess_a, 2)), 1.0)
    M = (L / domain.h ** 2 + shift * sp.identity(L.shape[0], format="csc")) * domain.cell_volume
    lu = splu(M.tocsc())
    return lu.solve


def minimize(domain, g, W, init="harmonic", opts=None, rng=None):
    """Minimize the discrete energy subject to Dirichlet data ``g``.

    ``g`` is a field whose boundary values are used, a constant point, or a
    callable of boundary coordinates. ``init`` is a field or one of the
    policies ``"harmonic"``, ``"constant"``, ``"random"``. Returns the final
    field (boundary bit-equal to ``g``) and its ``SolveStats``.
    """
    opts = SolveOptions() if opts is None else opts
    m = W.m
    g_field = boundary_field(domain, g, m)
    if isinstance(init, VectorField):
        u = init.copy()
        u.flat[domain.boundary] = g_field.flat[domain.boundary]
    else:
        u = initial_field(domain, g_field, W, init, rng)
    inner = domain.interior
    precond = _preconditioner(domain, W, m) if opts.precondition else (lambda r: r)

    stats = SolveStats()

    def J(x):
        u.flat[inner] = x
        with np.errstate(over="ignore", invalid="ignore"):
            return energy(u, W).total

    def G(x):
        u.flat[inner] = x
        return energy_gradient(u, W).flat[inner]

    x = u.flat[inner].copy()
    f = J(x)
    if not np.isfinite(f):
        raise DivergenceError("initial energy is not finite")
    g_ = G(x)
    z = precond(g_)
    d = -z
    stats.energy_history.append(f)
    alpha_prev = opts.initial_step

    k = 0
    while True:
        gnorm = float(np.max(np.abs(g_))) if g_.size else 0.0
        stats.grad_norm, stats.energy, stats.iterations = gnorm, f, k
        if gnorm <= opts.grad_tol:
            stats.converged, stats.status = True, "converged"
            break
        if k >= opts.max_iters:
            stats.status = "max_iters"
            break

        slope = float(np.sum(g_ * d))
        if opts.method == "gd" or slope >= 0:
            d, slope = -z, -float(np.sum(g_ * z))
        steepest = opts.method == "gd" or np.array_equal(d, -z)

        accepted = False
        while not accepted:
            alpha = min(opts.initial_step, 2.0 * alpha_prev)
            for _ in range(MAX_HALVINGS):
                f_new = J(x + alpha * d)
                if np.isfinite(f_new) and f_new <= f + opts.armijo * alpha * slope:
                    accepted = True
                    break
                alpha *= opts.backtrack
            if accepted or steepest:
                break
            # conjugate direction failed; retry once along the preconditioned gradient
            d, slope, steepest = -z, -float(np.sum(g_ * z)), True

        if not accepted:
            u.flat[inner] = x
            stats.status = "stalled"
            raise StalledError(f"line search failed after {MAX_HALVINGS} halvings at iteration {k}",
                               field=u.copy(), stats=stats)

        alpha_prev = alpha
        x = x + alpha * d
        f = f_new
        g_new = G(x)
        z_new = precond(g_new)
        if opts.method == "cg":
            beta = max(0.0, float(np.sum(g_new * (z_new - z))) / float(np.sum(g_ * z)))
            d = -z_new + beta * d
        else:
            d = -z_new
        g_, z = g_new, z_new
        stats.energy_history.append(f)
        k += 1

    u.flat[inner] = x
    return u, stats
