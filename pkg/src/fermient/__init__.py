"""Local entanglement of fermionic lattice models by exact diagonalization."""

from .entanglement import (
    EntropyKind,
    LocalDensityMatrix,
    entropy,
    lattice_entanglement,
    local_rho_number_eigenstate,
    local_rho_spinful_symmetric,
    partial_trace_site,
    shannon_filling,
    site_entropies,
)
from .errors import DegeneracyError, DomainError, FermientError, ResourceError
from .fock import (
    Basis,
    EksTriple,
    Mode,
    OperatorExpr,
    Spin,
    SpinResolved,
    StateVector,
    TotalN,
    annihilate,
    apply_operator,
    build_basis,
    create,
    number,
    number_operator,
    realize_matrix,
    sector_split,
    site_projectors,
)
from .models import (
    ModelKind,
    ModelSpec,
    build_hamiltonian,
    eks_apply,
    hubbard_dimer_ground_state,
    momentum_eigenstate,
)
from .spectral import (
    SpectralDecomposition,
    ThermalParams,
    diagonalize,
    partition_function,
    thermal_local_entanglement,
)
from .transform import (
    FockUnitary,
    ModeMap,
    fourier_map,
    induce_fock_unitary,
    is_product_unitary,
    transform_state,
)
from .dimer import dimer_curve

__version__ = "0.1.0"

__all__ = [
    "annihilate",
    "apply_operator",
    "Basis",
    "build_basis",
    "build_hamiltonian",
    "create",
    "DegeneracyError",
    "diagonalize",
    "dimer_curve",
    "DomainError",
    "eks_apply",
    "EksTriple",
    "entropy",
    "EntropyKind",
    "FermientError",
    "FockUnitary",
    "fourier_map",
    "hubbard_dimer_ground_state",
    "induce_fock_unitary",
    "is_product_unitary",
    "lattice_entanglement",
    "local_rho_number_eigenstate",
    "local_rho_spinful_symmetric",
    "LocalDensityMatrix",
    "Mode",
    "ModelKind",
    "ModelSpec",
    "ModeMap",
    "momentum_eigenstate",
    "number",
    "number_operator",
    "OperatorExpr",
    "partial_trace_site",
    "partition_function",
    "realize_matrix",
    "ResourceError",
    "sector_split",
    "shannon_filling",
    "site_entropies",
    "site_projectors",
    "SpectralDecomposition",
    "Spin",
    "SpinResolved",
    "StateVector",
    "thermal_local_entanglement",
    "ThermalParams",
    "TotalN",
    "transform_state",
]
