"""Discrete vector Allen-Cahn energies and a numerical check of the variational maximum principle."""

__version__ = "0.1.0"

from .competitor import (ProofCase, alpha, build_u_hat, build_u_tilde, coincidence_measure,
                         competitor_map, trace_proof_cases, truncation_profile, verify_competitor)
from .decompose import polar, split_consistency, split_energy
from .energy import EnergyBreakdown, el_residual, energy, energy_gradient
from .errors import (ConfigError, DivergenceError, DomainNotConnectedError, InvalidArgumentError,
                     InvalidFieldError, PreconditionError, StalledError)
from .grid import (Domain, ScalarField, VectorField, boundary_radius, build_box_domain,
                   build_masked_domain, interior_radius, set_boundary)
from .harness import (ExperimentConfig, ExperimentReport, run_experiment, run_sweep,
                      verify_max_principle)
from .linearize import (MatrixField, assemble_Q, assemble_Q_segment, residual_fundamental,
                        residual_segment)
from .minimize import SolveOptions, SolveStats, minimize
from .potential import (HypothesisReport, Potential, check_hypotheses, check_positivity_punctured,
                        check_radial_monotonicity, get_potential, hess_fd_fallback,
                        make_double_well_1d, make_quadratic, make_triple_well_2d)
