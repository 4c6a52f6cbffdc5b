"""Two-level atom in a vacuum optomechanical cavity: analytic three-level model
and density-matrix master-equation simulator."""

from .analytic import (
    DerivedParams,
    amplitudes,
    build_h_eff_3d,
    delta_p_general,
    delta_p_resonant,
    derived_params,
    dressed_basis_vectors,
)
from .config import RunConfig, format_config, parse_config, preset
from .engine import (
    EvolutionSpec,
    TimeSeries,
    convergence_check,
    dissipator,
    integrate,
    liouvillian_apply,
    oracle_evolve,
)
from .hilbert import (
    Frame,
    SystemParams,
    annihilation,
    build_hamiltonian,
    embed,
    excitation_number,
    initial_state,
    thermal_state,
)
from .linalg import dagger, hermitian_eigenvalues, kron, matrix_exp
from .observables import diagnostics, phonon_number, population_inversion

__version__ = "0.1.0"
