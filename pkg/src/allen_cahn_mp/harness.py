"""End-to-end maximum-principle experiments driven by a JSON config.

An experiment checks the potential hypotheses, minimizes the discrete energy
from several starts, keeps the lowest-energy result, and records every
diagnostic (bounds, competitor comparison, energy split, linearization,
proof-case label) in a JSON-serializable report.

The kept field is the best of a few local minimizations. No finite run
certifies global minimality, so reports carry every start's energy.
"""

from __future__ import annotations

import copy
import csv
import json
import os
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import __version__
from .competitor import build_u_tilde, coincidence_measure, trace_proof_cases, verify_competitor
from .decompose import split_energy
from .energy import el_residual, energy
from .errors import ConfigError, DivergenceError, StalledError
from .grid import (VectorField, boundary_from_csv, boundary_radius, build_box_domain,
                   build_masked_domain, load_mask_file, write_field_csv)
from .linearize import assemble_Q, assemble_Q_segment, residual_fundamental, residual_segment
from .minimize import SolveOptions, boundary_field, initial_field, minimize
from .potential import check_hypotheses, get_potential

BOUNDARY_SLACK = 1e-12
MULTISTART_NOTE = ("minimizer is the lowest-energy result of a multi-start local descent, "
                   "stationary to grad_tol; global minimality is not certified")


@dataclass
class ExperimentConfig:
    potential: dict
    domain: dict
    boundary: dict
    r: float
    solver: dict = field(default_factory=dict)
    starts: int = 3
    seed: int = 0
    out_of_regime: bool = False
    hypothesis_samples: dict = field(default_factory=lambda: {"n_dirs": 64, "n_radii": 50,
                                                               "n_samples": 4000})
    quad_nodes: int = 8
    output: dict = field(default_factory=dict)
    base_dir: str = "."

    KEYS = ("potential", "domain", "boundary", "r", "solver", "starts", "seed", "out_of_regime",
            "hypothesis_samples", "quad_nodes", "output")

    @classmethod
    def from_dict(cls, d, base_dir="."):
        if not isinstance(d, dict):
            raise ConfigError("config must be a JSON object")
        unknown = set(d) - set(cls.KEYS)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        for key in ("potential", "domain", "boundary", "r"):
            if key not in d:
                raise ConfigError(f"config is missing {key!r}")
        cfg = cls(**copy.deepcopy(d), base_dir=base_dir)
        cfg.validate()
        return cfg

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            try:
                d = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"{path}: {exc}") from None
        return cls.from_dict(d, base_dir=os.path.dirname(os.path.abspath(path)))

    def to_dict(self):
        return {k: copy.deepcopy(getattr(self, k)) for k in self.KEYS}

    def path(self, p):
        return p if os.path.isabs(p) else os.path.join(self.base_dir, p)

    def validate(self):
        if not isinstance(self.r, (int, float)) or not self.r > 0:
            raise ConfigError("r must be a positive number")
        if int(self.starts) < 1:
            raise ConfigError("starts must be >= 1")
        if "name" not in self.potential:
            raise ConfigError("potential needs a name")
        W = self.build_potential()
        if not self.r < W.r0 / 2 and not self.out_of_regime:
            raise ConfigError(f"r = {self.r} is not below r0/2 = {W.r0 / 2}; "
                              "set out_of_regime to run anyway")
        try:
            SolveOptions(**self.solver)
        except TypeError as exc:
            raise ConfigError(f"bad solver options: {exc}") from None

    def build_potential(self):
        params = dict(self.potential.get("params", {}))
        if self.potential["name"] == "triple_well_2d":
            params.setdefault("validate", False)
        try:
            return get_potential(self.potential["name"], **params)
        except TypeError as exc:
            raise ConfigError(f"bad potential parameters: {exc}") from None

    def build_domain(self):
        d = self.domain
        if "h" not in d:
            raise ConfigError("domain needs h")
        if "mask_file" in d:
            return build_masked_domain(load_mask_file(self.path(d["mask_file"])), d["h"],
                                       d.get("origin"))
        if "extents" not in d:
            raise ConfigError("domain needs extents or mask_file")
        n = d.get("n", len(d["extents"]))
        return build_box_domain(n, d["extents"], d["h"], d.get("origin"))

    def boundary_data(self, domain, W):
        b = self.boundary
        kind = b.get("kind")
        if kind == "constant":
            return np.atleast_1d(np.asarray(b.get("value", W.a), dtype=float))
        if kind == "ring":
            return ring_data(domain, W.a, b.get("radius", self.r), b.get("winding", 1),
                             b.get("phase", 0.0))
        if kind == "tabulated":
            return boundary_from_csv(domain, self.path(b["file"]))
        raise ConfigError(f"unknown boundary kind {kind!r}")


def ring_data(domain, a, radius, winding=1, phase=0.0):
    """Boundary data at distance ``radius`` from ``a``, direction rotating with position.

    The angle is ``winding`` times the polar angle about the domain's bounding
    box centre in 2-d, or runs linearly from 0 to ``winding * pi`` across an
    interval in 1-d. For m = 1 the direction is the sign of its cosine.
    """
    a = np.atleast_1d(np.asarray(a, dtype=float))
    m = len(a)
    lo = np.array(domain.origin)
    span = domain.h * (np.array(domain.shape) - 1)
    centre = lo + 0.5 * span

    def g(pts):
        if domain.n == 2:
            theta = winding * np.arctan2(pts[:, 1] - centre[1], pts[:, 0] - centre[0]) + phase
        else:
            theta = winding * np.pi * (pts[:, 0] - lo[0]) / span[0] + phase
        if m == 1:
            d = np.where(np.cos(theta) >= 0, 1.0, -1.0)[:, None]
        else:
            d = np.zeros((len(pts), m))
            d[:, 0], d[:, 1] = np.cos(theta), np.sin(theta)
        vals = a + radius * d
        # pull rounded points back so |g - a| never exceeds radius
        for k in range(64):
            over = np.sqrt(np.sum((vals - a) ** 2, axis=1)) > radius
            if not over.any():
                break
            vals[over] = a + radius * d[over] * (1.0 - 2.0 ** (k - 52))
        return vals

    return g


@dataclass
class MaxPrincipleResult:
    holds: bool
    worst_node: tuple
    worst_value: float
    tol_mp: float
    vacuous: bool

    def to_dict(self):
        return {"holds": self.holds, "worst_node": list(self.worst_node),
                "worst_value": self.worst_value, "tol_mp": self.tol_mp, "vacuous": self.vacuous}


def verify_max_principle(u, a, r, tol_mp):
    """Interior bound |u - a| <= r + tol_mp; vacuous (never a pass) if the boundary exceeds r."""
    dom = u.domain
    d = u.flat[dom.interior] - np.asarray(a, dtype=float)
    rho = np.sqrt(np.sum(d * d, axis=1))
    k = int(np.argmax(rho))
    worst = float(rho[k])
    vacuous = boundary_radius(u, a) > r + BOUNDARY_SLACK
    holds = (not vacuous) and worst <= r + tol_mp
    return MaxPrincipleResult(bool(holds), dom.index_of(dom.interior[k]), worst, float(tol_mp),
                              bool(vacuous))


def max_principle_tolerance(u, W):
    """tol_mp = 2 h (1 + max |grad W| over the field's in-set values)."""
    g = W.grad(u.flat[u.domain.inset])
    return 2.0 * u.domain.h * (1.0 + float(np.max(np.sqrt(np.sum(g * g, axis=1)))))


@dataclass
class ExperimentReport:
    data: dict
    minimizer: Optional[VectorField] = None
    histories: list = field(default_factory=list)

    @property
    def max_principle_holds(self):
        return self.data["max_principle"]["holds"]

    @property
    def interior_radius(self):
        return self.data["interior_radius"]

    @property
    def overshoot(self):
        return max(0.0, self.data["interior_radius"] - self.data["r"])

    def to_json(self):
        return json.dumps(_jsonable(self.data), indent=2, sort_keys=True)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if np.isfinite(x) else repr(x)
    return x


def _multistart(domain, g, W, cfg, opts):
    # start 0 is the harmonic extension; the rest are seeded random fields in the r-ball
    seeds = np.random.SeedSequence(int(cfg.seed)).spawn(max(int(cfg.starts) - 1, 0))
    results = []
    for k in range(int(cfg.starts)):
        entry = {"start": k, "init": "harmonic" if k == 0 else "random"}
        try:
            if k == 0:
                u, stats = minimize(domain, g, W, "harmonic", opts)
            else:
                rng = np.random.default_rng(seeds[k - 1])
                init = initial_field(domain, boundary_field(domain, g, W.m), W, "random", rng,
                                     radius=cfg.r)
                u, stats = minimize(domain, g, W, init, opts)
        except StalledError as exc:
            u, stats = exc.field, exc.stats
        except DivergenceError as exc:
            entry.update(failed=True, error=str(exc))
            results.append((entry, None, None))
            continue
        entry.update(failed=False, **stats.to_dict())
        results.append((entry, u, stats))
    return results


def run_experiment(cfg):
    """Run one experiment; deterministic given the config (and its seed)."""
    W = cfg.build_potential()
    dom = cfg.build_domain()
    g = cfg.boundary_data(dom, W)
    opts = SolveOptions(**cfg.solver)
    a, r = W.a, float(cfg.r)

    hs = cfg.hypothesis_samples
    hyp = check_hypotheses(W, hs.get("n_dirs", 64), hs.get("n_radii", 50), hs.get("n_samples", 4000))
    in_regime = r < W.r0 / 2

    results = _multistart(dom, g, W, cfg, opts)
    ok = [(e, u, s) for e, u, s in results if u is not None]
    if not ok:
        raise DivergenceError("every start diverged")
    best_entry, u, stats = min(ok, key=lambda t: t[2].energy)

    br = boundary_radius(u, a)
    tol_mp = max_principle_tolerance(u, W)
    mp = verify_max_principle(u, a, r, tol_mp)
    comp = verify_competitor(u, a, r, W)
    ut = build_u_tilde(u, a, r)
    split = split_energy(u, a, W)
    e = energy(u, W)
    Q = assemble_Q(u, a, W, cfg.quad_nodes)
    Qbar = assemble_Q_segment(u, ut, W, cfg.quad_nodes)
    a_field = VectorField.constant(dom, a)
    case = trace_proof_cases(u, a, r)

    data = {
        "r": r,
        "r0": W.r0,
        "regime": "theorem" if in_regime and not cfg.out_of_regime else "out_of_regime",
        "hypothesis_failed": not hyp.passed,
        "hypotheses": hyp.to_dict(),
        "starts": [entry for entry, _, _ in results],
        "minimizer": {"start": best_entry["start"], "energy": e.to_dict(),
                      "converged": stats.converged, "el_residual": el_residual(u, W),
                      "note": MULTISTART_NOTE},
        "boundary_radius": br,
        "interior_radius": mp.worst_value,
        "max_principle": mp.to_dict(),
        "competitor": comp.to_dict(),
        "split": dict(split.to_dict(), split_gap=abs(split.total - e.total)),
        "linearization": {
            "quad_nodes": cfg.quad_nodes,
            "max_operator_norm": Q.max_operator_norm,
            "hessian_bound": Q.hessian_bound,
            "residual_fundamental": residual_fundamental(u, a, W, Q),
            "segment_max_operator_norm": Qbar.max_operator_norm,
            "residual_segment": residual_segment(u, ut, W, Qbar),
        },
        "coincidence": {
            "u_equals_tilde": coincidence_measure(u, ut, 0.0),
            "tilde_zero_set": coincidence_measure(ut, a_field, 0.0),
        },
        "proof_case": case.to_dict(),
        "provenance": {"config": cfg.to_dict(), "seed": int(cfg.seed), "grid_shape": list(dom.shape),
                       "h": dom.h, "n": dom.n, "m": W.m, "version": __version__},
    }
    report = ExperimentReport(data, u, [s.energy_history for _, _, s in ok])
    _write_outputs(cfg, report)
    return report


def run_sweep(cfg, h_list):
    """Repeat an experiment over grid spacings; one report per h."""
    reports = []
    for h in h_list:
        c = copy.deepcopy(cfg)
        c.domain = dict(c.domain, h=float(h))
        c.output = {}
        reports.append(run_experiment(c))
    return reports


def _write_outputs(cfg, report):
    out = cfg.output or {}
    if out.get("report"):
        with open(cfg.path(out["report"]), "w") as fh:
            fh.write(report.to_json() + "\n")
    if out.get("field_csv"):
        write_field_csv(report.minimizer, cfg.path(out["field_csv"]))
    if out.get("history_csv"):
        write_history_csv(report, cfg.path(out["history_csv"]))


def write_history_csv(report, path):
    """Columns: start, iteration, energy."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["start", "iteration", "energy"])
        for entry in report.data["starts"]:
            for it, val in enumerate(entry.get("energy_history", [])):
                w.writerow([entry["start"], it, repr(float(val))])


def sweep_summary(reports):
    return {
        "h": [rep.data["provenance"]["h"] for rep in reports],
        "interior_radius": [rep.interior_radius for rep in reports],
        "overshoot": [rep.overshoot for rep in reports],
        "max_principle_holds": [rep.max_principle_holds for rep in reports],
    }


def check_potential_config(cfg):
    W = cfg.build_potential()
    hs = cfg.hypothesis_samples
    rep = check_hypotheses(W, hs.get("n_dirs", 64), hs.get("n_radii", 50), hs.get("n_samples", 4000))
    return {"potential": W.name, "params": W.params, "r": cfg.r, "r0": W.r0,
            "in_regime": cfg.r < W.r0 / 2, "passed": rep.passed, "report": rep.to_dict()}


__all__ = ["ExperimentConfig", "ExperimentReport", "MaxPrincipleResult", "run_experiment",
           "run_sweep", "verify_max_principle", "max_principle_tolerance", "ring_data",
           "sweep_summary", "check_potential_config"]
