"""Numerical warped convolutions on finite-dimensional discretizations.

The package builds deformed quantum-mechanical and second-quantized
operators two independent ways -- an exact fiberwise spectral evaluator and
a cutoff-regularized oscillatory integral -- and ships the diagnostics
(relative-bound fits, symbol-order fits, Hermiticity and spectrum checks)
that probe self-adjointness of the deformed operators at desk scale.
"""

__version__ = "0.1.0"

from .errors import (BoundaryContaminationError, ConfigError,
                     DegenerateSamplesError, ExtrapolationError,
                     GridDomainError, InfeasibleBoundError,
                     QuadratureRangeError, SpaceMismatchError, WarpconvError)
from .grid import (GridOperator, GridSpace, GridState, IdentityOperator,
                   MomentumMultiplier, PositionMultiplier, QGenerator,
                   SkewMatrix, anticommutator, apply_h0, apply_momentum,
                   apply_position, commutator, domain_vector,
                   gaussian_moment_norm, h0_operator, make_grid,
                   momentum_operator, position_operator, q_generator,
                   unitary_V)
from .warp import (WarpConfig, WarpResult, adjoint_consistency,
                   rieffel_product, warp_oscillatory, warp_spectral)
from .qm import (BoundFit, DeformedHamiltonian, DeformedMomentum,
                 deformed_hamiltonian, deformed_momentum, envelope_fit,
                 fit_relative_bound, potential_V, sample_states,
                 theorem_d1_check)
from .fock import (FockOperator, FockSpace, FockState, LazyFockOperator,
                   annihilator, coordinate_operator, creator,
                   deformation_part, deformed_coordinate, fock_x_bound_fit,
                   gaussian_packet, make_fock, momentum_operator as
                   fock_momentum_operator, moyal_weyl_commutator_check,
                   number_operator, one_particle_state, second_quantized,
                   two_particle_packet, velocity_operator)
from .verify import (PhaseCheck, SymbolFit, dossier, eigenvalue_reality,
                     fit_symbol_order, gamma_indices, hermiticity_residual,
                     phase_check, restricted_eigenvalues, sample_decay,
                     wust_inequality_check)
from .snapshot import load_state, save_state, state_from_dict, state_to_dict
