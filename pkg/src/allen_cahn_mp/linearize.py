"""Averaged Hessians along segments, the matrices that turn grad W into a linear term.

With grad W(a) = 0,

    grad W(u) = Q (u - a),       Q = int_0^1 D^2 W(a + t (u - a)) dt,
    grad W(u) - grad W(v) = Qbar (u - v),   Qbar = int_0^1 D^2 W(v + t (u - v)) dt.

Both integrals use Gauss-Legendre quadrature on [0, 1].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError
from .grid import Domain


@dataclass
class MatrixField:
    domain: Domain
    values: np.ndarray          # shape + (m, m)
    max_operator_norm: float
    hessian_bound: float        # max Hessian norm over all quadrature points

    @property
    def flat(self):
        m = self.values.shape[-1]
        return self.values.reshape(-1, m, m)


def gauss_legendre_01(k):
    x, w = np.polynomial.legendre.leggauss(k)
    return 0.5 * (x + 1.0), 0.5 * w


def _segment_average(start, stop, W, quad_nodes, domain):
    if quad_nodes < 1:
        raise InvalidArgumentError("quad_nodes must be >= 1")
    t, w = gauss_legendre_01(quad_nodes)
    inset = domain.inset
    m = W.m
    p0, p1 = start[inset], stop[inset]
    Q_in = np.zeros((len(inset), m, m))
    hess_bound = 0.0
    for tk, wk in zip(t, w):
        H = np.asarray(W.hess(p0 + tk * (p1 - p0))).reshape(len(inset), m, m)
        Q_in += wk * H
        hess_bound = max(hess_bound, float(np.max(np.linalg.norm(H, 2, axis=(1, 2)))))
    Q_in = 0.5 * (Q_in + np.swapaxes(Q_in, 1, 2))
    Q = np.zeros((domain.kind.size, m, m))
    Q[inset] = Q_in
    norm = float(np.max(np.linalg.norm(Q_in, 2, axis=(1, 2))))
    return MatrixField(domain, Q.reshape(domain.shape + (m, m)), norm, hess_bound)


def assemble_Q(u, a, W, quad_nodes=8):
    """Per-node average of D^2 W along the segment from a to u(x)."""
    a = np.broadcast_to(np.asarray(a, dtype=float), u.flat.shape)
    return _segment_average(a, u.flat, W, quad_nodes, u.domain)


def assemble_Q_segment(u, v, W, quad_nodes=8):
    """Per-node average of D^2 W along the segment from v(x) to u(x)."""
    if u.domain.shape != v.domain.shape or not np.array_equal(u.domain.kind, v.domain.kind):
        raise InvalidArgumentError("fields live on different domains")
    if u.m != v.m:
        raise InvalidArgumentError("fields have different target dimensions")
    return _segment_average(v.flat, u.flat, W, quad_nodes, u.domain)


def residual_fundamental(u, a, W, Q):
    """max over in-set nodes of |grad W(u) - Q (u - a)|."""
    inset = u.domain.inset
    d = u.flat[inset] - np.asarray(a, dtype=float)
    r = W.grad(u.flat[inset]) - np.einsum("kij,kj->ki", Q.flat[inset], d)
    return float(np.max(np.sqrt(np.sum(r * r, axis=1))))


def residual_segment(u, v, W, Qbar):
    """max over in-set nodes of |grad W(u) - grad W(v) - Qbar (u - v)|."""
    inset = u.domain.inset
    d = u.flat[inset] - v.flat[inset]
    r = (W.grad(u.flat[inset]) - W.grad(v.flat[inset])
         - np.einsum("kij,kj->ki", Qbar.flat[inset], d))
    return float(np.max(np.sqrt(np.sum(r * r, axis=1))))
