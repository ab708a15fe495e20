"""Masked uniform grids in 1-d and 2-d and the fields that live on them.

Every node is classified as outside, boundary or interior. Dirichlet data
lives on boundary nodes; the unknowns of a minimization are the interior
values. Fields store a full array over the bounding box and ignore outside
nodes (kept at zero).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import ndimage

from .errors import DomainNotConnectedError, InvalidArgumentError

OUTSIDE, BOUNDARY, INTERIOR = 0, 1, 2


@dataclass(frozen=True, eq=False)
class Domain:
    n: int
    h: float
    kind: np.ndarray
    origin: tuple

    @property
    def shape(self):
        return self.kind.shape

    @property
    def cell_volume(self):
        return self.h ** self.n

    @cached_property
    def inset(self):
        """Flat indices of interior and boundary nodes, in C order."""
        return np.flatnonzero(self.kind.ravel() != OUTSIDE)

    @cached_property
    def interior(self):
        return np.flatnonzero(self.kind.ravel() == INTERIOR)

    @cached_property
    def boundary(self):
        return np.flatnonzero(self.kind.ravel() == BOUNDARY)

    @cached_property
    def links(self):
        """Pairs (i, j) of flat indices of axis-adjacent in-set nodes.

        Ordered by axis, then by the C-order position of ``i``; ``j`` is the
        neighbor at +1 along that axis.
        """
        inset = self.kind != OUTSIDE
        flat = np.arange(self.kind.size).reshape(self.shape)
        first, second = [], []
        for ax in range(self.n):
            lo = [slice(None)] * self.n
            hi = [slice(None)] * self.n
            lo[ax] = slice(0, -1)
            hi[ax] = slice(1, None)
            both = inset[tuple(lo)] & inset[tuple(hi)]
            first.append(flat[tuple(lo)][both])
            second.append(flat[tuple(hi)][both])
        return np.concatenate(first), np.concatenate(second)

    @cached_property
    def node_weights(self):
        """Quadrature weight per flat node: 1 interior, 1/2 boundary, 0 outside."""
        w = np.zeros(self.kind.size)
        w[self.interior] = 1.0
        w[self.boundary] = 0.5
        return w

    @cached_property
    def coords(self):
        """Node coordinates, shape ``shape + (n,)``."""
        axes = [self.origin[k] + self.h * np.arange(self.shape[k]) for k in range(self.n)]
        return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)

    def index_of(self, flat_index):
        return tuple(int(i) for i in np.unravel_index(flat_index, self.shape))


@dataclass
class VectorField:
    domain: Domain
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape[:-1] != self.domain.shape:
            raise InvalidArgumentError(
                f"values shape {self.values.shape} does not match domain {self.domain.shape}")

    @property
    def m(self):
        return self.values.shape[-1]

    @property
    def flat(self):
        """(num_nodes, m) view of the values."""
        return self.values.reshape(-1, self.m)

    def copy(self):
        return VectorField(self.domain, self.values.copy())

    @classmethod
    def constant(cls, domain, c):
        c = np.atleast_1d(np.asarray(c, dtype=float))
        vals = np.zeros(domain.shape + c.shape)
        vals[domain.kind != OUTSIDE] = c
        return cls(domain, vals)

    @classmethod
    def from_function(cls, domain, f):
        """Evaluate ``f`` on in-set node coordinates, shape ``(k, n) -> (k, m)``."""
        pts = domain.coords.reshape(-1, domain.n)[domain.inset]
        vals = np.atleast_2d(np.asarray(f(pts), dtype=float))
        if vals.shape[0] != len(pts):
            vals = vals.T
        out = np.zeros((domain.kind.size, vals.shape[1]))
        out[domain.inset] = vals
        return cls(domain, out.reshape(domain.shape + (vals.shape[1],)))


@dataclass
class ScalarField:
    domain: Domain
    values: np.ndarray

    @property
    def flat(self):
        return self.values.reshape(-1)


def build_box_domain(n, extents, h, origin=None):
    """Interval (n=1) or rectangle (n=2) with its outermost nodes as boundary."""
    if n not in (1, 2):
        raise InvalidArgumentError("only n = 1 or 2 is supported")
    extents = np.atleast_1d(np.asarray(extents, dtype=float))
    if extents.shape != (n,) or np.any(extents <= 0):
        raise InvalidArgumentError("extents must be n positive numbers")
    if h <= 0:
        raise InvalidArgumentError("h must be positive")
    counts = tuple(int(np.floor(e / h + 1e-9)) + 1 for e in extents)
    if min(counts) < 3:
        raise InvalidArgumentError(f"need at least 3 nodes per axis, got {counts}")
    kind = np.full(counts, BOUNDARY, dtype=np.int8)
    kind[(slice(1, -1),) * n] = INTERIOR
    origin = (0.0,) * n if origin is None else tuple(float(o) for o in origin)
    return Domain(n, float(h), kind, origin)


def build_masked_domain(mask, h, origin=None):
    """Domain from a boolean in-set mask.

    In-set nodes with an out-of-set axis neighbor (or lying on the array
    edge) become boundary; the rest are interior and must form a single
    axis-connected component.
    """
    mask = np.asarray(mask, dtype=bool)
    if mask.ndim not in (1, 2):
        raise InvalidArgumentError("mask must be 1-d or 2-d")
    if h <= 0:
        raise InvalidArgumentError("h must be positive")
    if not mask.any():
        raise InvalidArgumentError("mask is empty")
    padded = np.pad(mask, 1, constant_values=False)
    core = (slice(1, -1),) * mask.ndim
    all_neighbors_in = np.ones_like(mask)
    for ax in range(mask.ndim):
        all_neighbors_in &= np.roll(padded, 1, axis=ax)[core] & np.roll(padded, -1, axis=ax)[core]
    interior = mask & all_neighbors_in
    if not interior.any():
        raise InvalidArgumentError("mask has no interior nodes")
    _, ncomp = ndimage.label(interior)
    if ncomp != 1:
        raise DomainNotConnectedError(f"interior has {ncomp} connected components")
    kind = np.where(interior, INTERIOR, np.where(mask, BOUNDARY, OUTSIDE)).astype(np.int8)
    origin = (0.0,) * mask.ndim if origin is None else tuple(float(o) for o in origin)
    return Domain(mask.ndim, float(h), kind, origin)


def set_boundary(field, g):
    """Copy of ``field`` with boundary values replaced by ``g``.

    ``g`` is either a constant point in R^m or a callable taking boundary
    coordinates ``(k, n)`` and returning ``(k, m)``.
    """
    dom = field.domain
    out = field.copy()
    if callable(g):
        pts = dom.coords.reshape(-1, dom.n)[dom.boundary]
        vals = np.asarray(g(pts), dtype=float).reshape(len(pts), -1)
    else:
        vals = np.atleast_1d(np.asarray(g, dtype=float))
    if vals.shape[-1] != field.m:
        raise InvalidArgumentError("boundary data has the wrong target dimension")
    out.flat[dom.boundary] = vals
    return out


def boundary_radius(field, a):
    """max over boundary nodes of |u - a|."""
    d = field.flat[field.domain.boundary] - np.asarray(a, dtype=float)
    return float(np.max(np.sqrt(np.sum(d * d, axis=1))))


def interior_radius(field, a):
    d = field.flat[field.domain.interior] - np.asarray(a, dtype=float)
    return float(np.max(np.sqrt(np.sum(d * d, axis=1))))


# ---------------------------------------------------------------------------
# plain-text mask files and CSV field dumps

def load_mask_file(path):
    """Rows of 0/1 characters; a single row gives a 1-d mask."""
    with open(path) as fh:
        rows = [line.strip() for line in fh if line.strip()]
    if not rows or len({len(r) for r in rows}) != 1:
        raise InvalidArgumentError(f"{path}: mask rows must be nonempty and of equal length")
    if any(set(r) - {"0", "1"} for r in rows):
        raise InvalidArgumentError(f"{path}: mask may contain only 0 and 1")
    mask = np.array([[c == "1" for c in r] for r in rows])
    return mask[0] if len(rows) == 1 else mask


def save_mask_file(mask, path):
    mask = np.atleast_2d(np.asarray(mask, dtype=bool))
    with open(path, "w") as fh:
        for row in mask:
            fh.write("".join("1" if v else "0" for v in row) + "\n")


def field_rows(field):
    dom = field.domain
    header = ([f"i{k}" for k in range(dom.n)] + [f"x{k}" for k in range(dom.n)]
              + [f"u{k}" for k in range(field.m)])
    coords = dom.coords.reshape(-1, dom.n)
    rows = []
    for p in dom.inset:
        idx = np.unravel_index(p, dom.shape)
        rows.append([int(i) for i in idx] + [repr(float(c)) for c in coords[p]]
                    + [repr(float(v)) for v in field.flat[p]])
    return header, rows


def write_field_csv(field, path):
    """One row per in-set node: axis indices, coordinates, value components."""
    header, rows = field_rows(field)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


def _read_table(path):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        data = [row for row in reader if row]
    n = sum(1 for c in header if c.startswith("i"))
    m = sum(1 for c in header if c.startswith("u"))
    if n not in (1, 2) or m < 1 or len(header) != 2 * n + m:
        raise InvalidArgumentError(f"{path}: unexpected columns {header}")
    idx = np.array([[int(v) for v in r[:n]] for r in data], dtype=int)
    xs = np.array([[float(v) for v in r[n:2 * n]] for r in data])
    us = np.array([[float(v) for v in r[2 * n:]] for r in data])
    return n, m, idx, xs, us


def read_field_csv(path, h=None):
    """Rebuild a field and its domain from a CSV written by ``write_field_csv``.

    The domain is the masked domain whose in-set nodes are the listed rows.
    """
    n, m, idx, xs, us = _read_table(path)
    shape = tuple(idx.max(axis=0) + 1)
    if h is None:
        spans = idx.max(axis=0) - idx.min(axis=0)
        ax = int(np.argmax(spans))
        if spans[ax] == 0:
            raise InvalidArgumentError(f"{path}: cannot infer h from a single node")
        h = (xs[:, ax].max() - xs[:, ax].min()) / spans[ax]
    origin = tuple(float(v) for v in (xs[0] - idx[0] * h))
    mask = np.zeros(shape, dtype=bool)
    mask[tuple(idx.T)] = True
    dom = build_masked_domain(mask, h, origin)
    vals = np.zeros(shape + (m,))
    vals[tuple(idx.T)] = us
    return VectorField(dom, vals)


def boundary_from_csv(domain, path):
    """Tabulated Dirichlet data: rows keyed by node index must cover every boundary node."""
    n, m, idx, _, us = _read_table(path)
    if n != domain.n:
        raise InvalidArgumentError(f"{path}: dimension {n} does not match domain")
    table = {tuple(i): u for i, u in zip(idx.tolist(), us)}
    vals = np.empty((len(domain.boundary), m))
    for k, p in enumerate(domain.boundary):
        key = domain.index_of(p)
        if key not in table:
            raise InvalidArgumentError(f"{path}: no value for boundary node {key}")
        vals[k] = table[key]

    def g(_pts):
        return vals

    return g
