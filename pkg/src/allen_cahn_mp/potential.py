"""Multi-well energy densities W: R^m -> R and numerical hypothesis checks.

All callables are vectorized over leading axes: ``value`` maps ``(..., m)`` to
``(...)``, ``grad`` maps ``(..., m)`` to ``(..., m)`` and ``hess`` maps
``(..., m)`` to ``(..., m, m)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import optimize

from .errors import InvalidArgumentError

TOL_MONO = 1e-10
HESS_FD_STEP = 1e-5
# zeros located by local polishing are numerical, not exact
TOL_ZERO_POLISHED = 1e-14


@dataclass(frozen=True, eq=False)
class Potential:
    name: str
    m: int
    a: np.ndarray
    r0: float
    value: Callable[[np.ndarray], np.ndarray]
    grad: Callable[[np.ndarray], np.ndarray]
    hess_analytic: Optional[Callable[[np.ndarray], np.ndarray]] = None
    # known zeros of W besides ``a``; used as extra candidates by the positivity check
    wells: np.ndarray = field(default_factory=lambda: np.zeros((0, 1)))
    params: dict = field(default_factory=dict)

    def hess(self, u):
        if self.hess_analytic is not None:
            return self.hess_analytic(np.asarray(u, dtype=float))
        return hess_fd_fallback(self, u, HESS_FD_STEP)

    def with_r0(self, r0):
        """Copy of this potential with a different monotonicity radius."""
        if r0 <= 0:
            raise InvalidArgumentError("r0 must be positive")
        params = dict(self.params, r0=float(r0))
        return Potential(self.name, self.m, self.a, float(r0), self.value, self.grad,
                         self.hess_analytic, self.wells, params)


@dataclass
class HypothesisReport:
    radial_monotone: Optional[bool] = None
    radial_worst_violation: Optional[float] = None
    radial_witness: Optional[dict] = None
    positive_on_punctured_ball: Optional[bool] = None
    positivity_worst_violation: Optional[float] = None
    positivity_witness: Optional[list] = None
    n_dirs: int = 0
    n_radii: int = 0
    n_samples: int = 0

    @property
    def passed(self):
        return bool(self.radial_monotone) and bool(self.positive_on_punctured_ball)

    def merge(self, other):
        out = HypothesisReport(**self.__dict__)
        for key, val in other.__dict__.items():
            if key.startswith("n_"):
                setattr(out, key, max(val, getattr(out, key)))
            elif val is not None:
                setattr(out, key, val)
        return out

    def to_dict(self):
        return {
            "radial_monotone": self.radial_monotone,
            "radial_worst_violation": self.radial_worst_violation,
            "radial_witness": self.radial_witness,
            "positive_on_punctured_ball": self.positive_on_punctured_ball,
            "positivity_worst_violation": self.positivity_worst_violation,
            "positivity_witness": self.positivity_witness,
            "samples_used": {"n_dirs": self.n_dirs, "n_radii": self.n_radii,
                             "n_samples": self.n_samples},
        }


def _as_point(x, m):
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.shape != (m,):
        raise InvalidArgumentError(f"expected a point in R^{m}, got shape {x.shape}")
    return x


# ---------------------------------------------------------------------------
# built-in potentials

def make_double_well_1d(a=1.0, r0=0.5):
    """W(u) = (1 - u^2)^2 on the real line, with wells at +1 and -1."""
    a = _as_point(a, 1)
    if r0 <= 0:
        raise InvalidArgumentError("r0 must be positive")

    def value(u):
        u = np.asarray(u, dtype=float)[..., 0]
        return (1.0 - u * u) ** 2

    def grad(u):
        u = np.asarray(u, dtype=float)
        return -4.0 * u * (1.0 - u * u)

    def hess(u):
        u = np.asarray(u, dtype=float)
        return (12.0 * u * u - 4.0)[..., None]

    wells = np.array([[1.0], [-1.0]])
    return Potential("double_well_1d", 1, a, float(r0), value, grad, hess, wells,
                     {"a": a.tolist(), "r0": float(r0)})


def make_quadratic(m=2, a=None, r0=1.0):
    """W(u) = |u - a|^2."""
    m = int(m)
    if m < 1:
        raise InvalidArgumentError("m must be positive")
    a = np.zeros(m) if a is None else _as_point(a, m)
    if r0 <= 0:
        raise InvalidArgumentError("r0 must be positive")

    def value(u):
        d = np.asarray(u, dtype=float) - a
        return np.sum(d * d, axis=-1)

    def grad(u):
        return 2.0 * (np.asarray(u, dtype=float) - a)

    def hess(u):
        u = np.asarray(u, dtype=float)
        return np.broadcast_to(2.0 * np.eye(m), u.shape + (m,)).copy()

    return Potential("quadratic", m, a, float(r0), value, grad, hess, np.zeros((0, m)),
                     {"m": m, "a": a.tolist(), "r0": float(r0)})


TRIPLE_WELLS = np.array([
    [1.0, 0.0],
    [-0.5, np.sqrt(3.0) / 2.0],
    [-0.5, -np.sqrt(3.0) / 2.0],
])


def make_multi_well(wells, a_index=0, r0=0.2, name="multi_well"):
    """W(u) = prod_i |u - a_i|^2 for a finite set of wells a_i in R^m."""
    wells = np.atleast_2d(np.asarray(wells, dtype=float))
    k, m = wells.shape
    if k < 1:
        raise InvalidArgumentError("need at least one well")
    if not 0 <= a_index < k:
        raise InvalidArgumentError("a_index out of range")
    if r0 <= 0:
        raise InvalidArgumentError("r0 must be positive")

    def _parts(u):
        u = np.asarray(u, dtype=float)
        diff = u[..., None, :] - wells          # (..., k, m)
        d = np.sum(diff * diff, axis=-1)        # (..., k)
        return diff, d

    def _prod_except(d, skip):
        out = np.ones(d.shape[:-1])
        for j in range(k):
            if j not in skip:
                out = out * d[..., j]
        return out

    def value(u):
        _, d = _parts(u)
        return _prod_except(d, ())

    def grad(u):
        diff, d = _parts(u)
        g = np.zeros(diff.shape[:-2] + (m,))
        for i in range(k):
            g = g + 2.0 * diff[..., i, :] * _prod_except(d, (i,))[..., None]
        return g

    def hess(u):
        diff, d = _parts(u)
        lead = diff.shape[:-2]
        H = np.zeros(lead + (m, m))
        eye = np.eye(m)
        for i in range(k):
            H = H + 2.0 * _prod_except(d, (i,))[..., None, None] * eye
            for j in range(k):
                if j == i:
                    continue
                c = 4.0 * _prod_except(d, (i, j))
                H = H + c[..., None, None] * (diff[..., i, :, None] * diff[..., j, None, :])
        return 0.5 * (H + np.swapaxes(H, -1, -2))

    a = wells[a_index].copy()
    others = np.delete(wells, a_index, axis=0)
    return Potential(name, m, a, float(r0), value, grad, hess, others,
                     {"wells": wells.tolist(), "a_index": int(a_index), "r0": float(r0)})


def make_triple_well_2d(r0=0.2, wells=None, a_index=0, validate=True):
    """Three-well potential on the plane, wells at the cube roots of unity by default.

    With ``validate`` the radial-monotonicity and punctured-ball positivity
    checks are run on construction and a failing ``r0`` is rejected.
    """
    wells = TRIPLE_WELLS if wells is None else np.asarray(wells, dtype=float)
    W = make_multi_well(wells, a_index=a_index, r0=r0, name="triple_well_2d")
    if W.m != 2:
        raise InvalidArgumentError("triple_well_2d needs wells in R^2")
    if validate:
        report = check_radial_monotonicity(W, 64, 50).merge(check_positivity_punctured(W, 4000))
        if not report.passed:
            raise InvalidArgumentError(f"r0={r0} fails the potential hypotheses: {report.to_dict()}")
    return W


POTENTIALS = {
    "double_well_1d": make_double_well_1d,
    "triple_well_2d": make_triple_well_2d,
    "quadratic": make_quadratic,
}


def get_potential(name, **params):
    """Build a named potential; ``params`` are passed to its factory."""
    try:
        factory = POTENTIALS[name]
    except KeyError:
        raise InvalidArgumentError(f"unknown potential {name!r}; known: {sorted(POTENTIALS)}") from None
    return factory(**params)


# ---------------------------------------------------------------------------
# derivatives and checks

def hess_fd_fallback(W, u, h):
    """Symmetrized central-difference Hessian of W built from its gradient."""
    if h <= 0:
        raise InvalidArgumentError("h must be positive")
    u = np.asarray(u, dtype=float)
    m = W.m
    H = np.empty(u.shape + (m,))
    for j in range(m):
        e = np.zeros(m)
        e[j] = h
        H[..., :, j] = (W.grad(u + e) - W.grad(u - e)) / (2.0 * h)
    return 0.5 * (H + np.swapaxes(H, -1, -2))


def sphere_directions(m, n_dirs, seed=0):
    """Deterministic quasi-uniform directions on the unit sphere S^{m-1}."""
    if m == 1:
        return np.array([[1.0], [-1.0]])
    if m == 2:
        t = 2.0 * np.pi * np.arange(n_dirs) / n_dirs
        return np.stack([np.cos(t), np.sin(t)], axis=-1)
    x = np.random.default_rng(seed).standard_normal((n_dirs, m))
    return x / np.linalg.norm(x, axis=1, keepdims=True)


def check_radial_monotonicity(W, n_dirs, n_radii, tol_mono=TOL_MONO):
    """Sample d/dr W(a + r nu) = grad W(a + r nu) . nu for r in (0, r0]."""
    if n_dirs < 1 or n_radii < 2:
        raise InvalidArgumentError("need n_dirs >= 1 and n_radii >= 2")
    dirs = sphere_directions(W.m, n_dirs)
    radii = W.r0 * np.arange(1, n_radii + 1) / n_radii
    pts = W.a + radii[None, :, None] * dirs[:, None, :]
    deriv = np.sum(W.grad(pts) * dirs[:, None, :], axis=-1)
    i, j = np.unravel_index(np.argmin(deriv), deriv.shape)
    worst = float(-deriv[i, j])
    return HypothesisReport(
        radial_monotone=bool(np.all(deriv >= -tol_mono)),
        radial_worst_violation=worst,
        radial_witness={"nu": dirs[i].tolist(), "r": float(radii[j]),
                        "derivative": float(deriv[i, j])},
        n_dirs=len(dirs),
        n_radii=n_radii,
    )


def check_positivity_punctured(W, n_samples, seed=0):
    """Check W > 0 on the punctured ball 0 < |u - a| < 2 r0.

    Candidates are random samples, the known wells of W that fall inside the
    ball, and local minima of W polished from the lowest samples.
    """
    if n_samples < 1:
        raise InvalidArgumentError("n_samples must be >= 1")
    m, a, R = W.m, W.a, 2.0 * W.r0
    rng = np.random.default_rng(seed)
    dirs = rng.standard_normal((n_samples, m))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    # uniform in the ball; radius strictly inside (0, R)
    s = R * rng.uniform(1e-6, 1.0 - 1e-12, n_samples) ** (1.0 / m)
    samples = a + s[:, None] * dirs
    vals = W.value(samples)

    cands = [samples]
    cand_vals = [vals]
    cand_tol = [np.zeros(n_samples)]

    if len(W.wells):
        dist = np.linalg.norm(W.wells - a, axis=1)
        inside = W.wells[(dist > 0) & (dist < R)]
        if len(inside):
            cands.append(inside)
            cand_vals.append(W.value(inside))
            cand_tol.append(np.zeros(len(inside)))

    far = np.flatnonzero(s >= 0.25 * W.r0)
    if len(far):
        start_idx = far[np.argsort(vals[far])[:3]]
        polished = []
        for x0 in samples[start_idx]:
            res = optimize.minimize(lambda x: float(W.value(x)), x0,
                                    jac=lambda x: W.grad(x), method="L-BFGS-B")
            d = np.linalg.norm(res.x - a)
            if 1e-3 * W.r0 < d < R:
                polished.append(res.x)
        if polished:
            polished = np.array(polished)
            cands.append(polished)
            cand_vals.append(W.value(polished))
            cand_tol.append(np.full(len(polished), TOL_ZERO_POLISHED))

    pts = np.concatenate(cands)
    vals = np.concatenate(cand_vals)
    tol = np.concatenate(cand_tol)
    bad = vals <= tol
    # witness: the smallest value among violations, else the smallest sample
    k = int(np.flatnonzero(bad)[np.argmin(vals[bad])]) if bad.any() else int(np.argmin(vals))
    return HypothesisReport(
        positive_on_punctured_ball=not bad.any(),
        positivity_worst_violation=float(-vals[k]),
        positivity_witness=pts[k].tolist(),
        n_samples=len(pts),
    )


def check_hypotheses(W, n_dirs=64, n_radii=50, n_samples=4000):
    """Run both hypothesis checks and merge their reports."""
    return check_radial_monotonicity(W, n_dirs, n_radii).merge(
        check_positivity_punctured(W, n_samples))
