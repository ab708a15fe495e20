"""Competitor fields built from a field u and a radius r around the well a.

The cutoff competitor applies the radial map

    T(p) = a + psi(|p - a|) (p - a)/|p - a|,   T(a) = a,
    psi(t) = min(t, r) alpha(t),

nodewise. psi is the identity on [0, r], the reflection 2r - t on [r, 2r]
and zero beyond, so T is 1-Lipschitz and never moves a point further from a.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .decompose import PolarDecomposition, SplitEnergy, polar, split_energy_from_polar, split_terms
from .energy import EnergyBreakdown, energy, node_potential_terms
from .errors import InvalidArgumentError, PreconditionError
from .grid import ScalarField, VectorField, boundary_radius

CASE_SLACK = 1e-12


def _check_r(r):
    if not r > 0:
        raise InvalidArgumentError("r must be positive")


def alpha(tau, r):
    """Cutoff: 1 up to r, (2r - tau)/r on [r, 2r], 0 beyond."""
    _check_r(r)
    tau = np.asarray(tau, dtype=float)
    out = np.where(tau <= r, 1.0, np.where(tau >= 2 * r, 0.0, (2 * r - tau) / r))
    return out if out.ndim else float(out)


def truncation_profile(tau, r):
    """psi(tau) = min(tau, r) * alpha(tau, r), evaluated branchwise.

    On [r, 2r] the value 2r - tau is computed without rounding, which keeps
    link-difference comparisons exact in floating point.
    """
    _check_r(r)
    tau = np.asarray(tau, dtype=float)
    out = np.where(tau <= r, tau, np.where(tau >= 2 * r, 0.0, 2 * r - tau))
    return out if out.ndim else float(out)


def competitor_map(p, a, r):
    """Apply T pointwise to an array of points of shape (..., m)."""
    _check_r(r)
    p = np.asarray(p, dtype=float)
    a = np.asarray(a, dtype=float)
    d = p - a
    rho = np.sqrt(np.sum(d * d, axis=-1))
    out = p.copy()
    band = (rho > r) & (rho < 2 * r)
    out[band] = a + (2 * r - rho[band])[:, None] * (d[band] / rho[band, None])
    out[rho >= 2 * r] = a
    return out


def build_u_tilde(u, a, r):
    """Cutoff competitor: nodes with |u - a| <= r are left untouched."""
    out = u.copy()
    inset = u.domain.inset
    out.flat[inset] = competitor_map(u.flat[inset], a, r)
    return out


def tilde_polar(pd, r):
    """Decomposition of the cutoff competitor: rho -> psi(rho), same nu."""
    rho_t = truncation_profile(pd.rho.flat, r)
    plus = pd.a_plus_mask & (rho_t > 0)
    nu = pd.nu.flat.copy()
    nu[~plus] = 0.0
    dom = pd.rho.domain
    return PolarDecomposition(ScalarField(dom, rho_t.reshape(dom.shape)),
                              VectorField(dom, nu.reshape(pd.nu.values.shape)), plus, pd.a)


def build_u_hat(u, a, r):
    """Radial projection a + r nu; needs |u - a| >= r at every in-set node."""
    _check_r(r)
    a = np.asarray(a, dtype=float)
    inset = u.domain.inset
    d = u.flat[inset] - a
    rho = np.sqrt(np.sum(d * d, axis=1))
    low = rho < r * (1.0 - CASE_SLACK)
    if np.any(low):
        k = inset[np.argmax(low)]
        raise PreconditionError(
            f"node {u.domain.index_of(k)} has |u - a| = {rho[np.argmax(low)]!r} < r = {r!r}")
    out = u.copy()
    move = np.abs(rho - r) > CASE_SLACK * r
    out.flat[inset[move]] = a + r * d[move] / rho[move, None]
    return out


@dataclass
class CompetitorReport:
    boundary_equal: bool
    sup_bound: float
    energy_u: EnergyBreakdown
    energy_tilde: EnergyBreakdown
    split_u: SplitEnergy
    split_tilde: SplitEnergy
    termwise: dict
    energy_decreased: bool
    boundary_radius: float
    r: float

    @property
    def termwise_all(self):
        return all(self.termwise.values())

    def to_dict(self):
        return {
            "boundary_equal": self.boundary_equal,
            "sup_bound": self.sup_bound,
            "r": self.r,
            "boundary_radius": self.boundary_radius,
            "energy_u": self.energy_u.to_dict(),
            "energy_tilde": self.energy_tilde.to_dict(),
            "split_u": self.split_u.to_dict(),
            "split_tilde": self.split_tilde.to_dict(),
            "termwise": dict(self.termwise),
            "energy_decreased": self.energy_decreased,
        }


def verify_competitor(u, a, r, W):
    """Build the cutoff competitor and compare it with u term by term.

    Both energies use the same links, weights and summation order, so the
    comparisons are made without tolerance. The competitor's split energy is
    assembled from its exact decomposition (psi(rho), nu).
    """
    _check_r(r)
    a = np.asarray(a, dtype=float)
    dom = u.domain
    ut = build_u_tilde(u, a, r)
    pd = polar(u, a)
    pdt = tilde_polar(pd, r)

    rho_u, ang_u = split_terms(pd)
    rho_t, ang_t = split_terms(pdt)
    pot_u = node_potential_terms(u, W)
    pot_t = node_potential_terms(ut, W)
    split_u = split_energy_from_polar(pd, u, W)
    split_t = split_energy_from_polar(pdt, ut, W)
    termwise = {
        "rho_dirichlet": bool(np.all(rho_t <= rho_u)) and split_t.rho_dirichlet <= split_u.rho_dirichlet,
        "angular": bool(np.all(ang_t <= ang_u)) and split_t.angular <= split_u.angular,
        "potential": bool(np.all(pot_t <= pot_u)) and split_t.potential <= split_u.potential,
    }

    e_u = energy(u, W)
    e_t = energy(ut, W)
    bd = dom.boundary
    dt = ut.flat[dom.inset] - a
    return CompetitorReport(
        boundary_equal=bool(np.array_equal(ut.flat[bd], u.flat[bd])),
        sup_bound=float(np.max(np.sqrt(np.sum(dt * dt, axis=1)))),
        energy_u=e_u,
        energy_tilde=e_t,
        split_u=split_u,
        split_tilde=split_t,
        termwise=termwise,
        energy_decreased=e_t.total <= e_u.total,
        boundary_radius=boundary_radius(u, a),
        r=float(r),
    )


def coincidence_measure(u, v, tol):
    """Fraction of in-set nodes where |u - v| <= tol."""
    if u.domain is not v.domain and not (
            u.domain.shape == v.domain.shape and np.array_equal(u.domain.kind, v.domain.kind)):
        raise InvalidArgumentError("fields live on different domains")
    if u.m != v.m:
        raise InvalidArgumentError("fields have different target dimensions")
    inset = u.domain.inset
    d = u.flat[inset] - v.flat[inset]
    return float(np.mean(np.sqrt(np.sum(d * d, axis=1)) <= tol))


class ProofCase(str, Enum):
    ALL_WITHIN_R = "ALL_WITHIN_R"
    BAND_R_2R = "BAND_R_2R"
    EXCEEDS_2R = "EXCEEDS_2R"
    MIXED = "MIXED"


@dataclass
class CaseTrace:
    label: ProofCase
    min_rho: float
    max_rho: float
    argmin: tuple
    argmax: tuple

    def to_dict(self):
        return {"label": self.label.value, "min_rho": self.min_rho, "max_rho": self.max_rho,
                "argmin": list(self.argmin), "argmax": list(self.argmax)}


def trace_proof_cases(u, a, r):
    """Classify u by where rho = |u - a| sits relative to r and 2r.

    Thresholds carry a relative slack of 1e-12; ties go to the earlier case.
    """
    _check_r(r)
    dom = u.domain
    d = u.flat[dom.inset] - np.asarray(a, dtype=float)
    rho = np.sqrt(np.sum(d * d, axis=1))
    lo, hi = int(np.argmin(rho)), int(np.argmax(rho))
    rmin, rmax = float(rho[lo]), float(rho[hi])
    up = 1.0 + CASE_SLACK
    if rmax <= r * up:
        label = ProofCase.ALL_WITHIN_R
    elif rmin >= r * (1.0 - CASE_SLACK):
        label = ProofCase.BAND_R_2R if rmax <= 2 * r * up else ProofCase.EXCEEDS_2R
    else:
        label = ProofCase.MIXED
    return CaseTrace(label, rmin, rmax, dom.index_of(dom.inset[lo]), dom.index_of(dom.inset[hi]))
