"""Facilitated Rydberg chains coupled to trap phonons.

Numerical models of a driven spin chain under the anti-blockade condition:
the full position-space chain, its single-domain reduction, the CM-momentum
block decomposition with closed-form spin-phonon scattering amplitudes, and
the Schrieffer-Wolff effective model, together with quench observables
(density, variance growth exponent, expansion asymmetry).
"""

__version__ = "0.1.0"

from .params import MicroscopicParams, ModelParams, kappa_from_microscopic, validate_params
from .domain import DomainState, domain_to_spins, enumerate_domain_states, facilitated_neighbors, spins_to_domain
from .bases import DomainPhononBasis, PhononRegister, RelativeBasis, SpinPhononBasis
from .sparse_op import SparseHermitianOperator
from .position_space import (
    FullModelOperator,
    build_constrained_hamiltonian,
    build_full_hamiltonian,
    project_to_single_domain,
)
from .momentum_space import (
    assemble_blocks,
    build_hq_diagonalform,
    build_hq_position,
    change_of_basis,
    coupling_tensor,
    f_coeff_closed,
    f_coeff_oracle,
)
from .schrieffer_wolff import SwDecomposition, sw_decomposition, sw_denominators, sw_effective, sw_generator, sw_residual
from .states import StateVector, VibrationalSpec, prepare_initial
from .observables import SiteCoordinates, asymmetry, centered_site_labels, fit_beta, rydberg_density, variance
from .propagate import TrajectoryRecord, propagate
from .config import ExperimentConfig, load_preset, parse_config
