"""
Sector-resolved exact diagonalization and thermal sums over eigenstates.

Thermal weights are grand-canonical, ``exp(-beta (E_m - mu N_m))``, applied
to a spectrum computed at zero chemical potential.  A model already built
with ``mu != 0`` must therefore be summed with ``ThermalParams.mu == 0``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .entanglement import EntropyKind, lattice_entanglement, shannon_filling
from .errors import DegeneracyError, DomainError
from .fock import SectorLabel, StateVector, TotalN, build_basis, sector_bases
from .models import (
    ModelKind,
    ModelSpec,
    build_hamiltonian,
    momentum_energy,
    momentum_eigenstate,
    momentum_indices,
    momentum_tuples,
)

log = logging.getLogger(__name__)

DEGENERACY_TOL = 1e-9
RECONSTRUCTION_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class SpectralEntry:
    sector: SectorLabel
    energy: float
    vector: StateVector
    n_particles: int
    label: tuple | None = None


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """
    Eigenpairs of a model, grouped by sector with ascending energies.

    ``degenerate`` holds the ``(sector, label)`` groups whose spectrum still
    has repeated eigenvalues after the split; ``label`` carries extra
    quantum numbers (occupied momenta for the periodic free chain).
    """

    spec: ModelSpec
    entries: tuple[SpectralEntry, ...]
    degenerate: frozenset = frozenset()

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @property
    def energies(self) -> np.ndarray:
        return np.array([e.energy for e in self.entries])

    @property
    def particle_numbers(self) -> np.ndarray:
        return np.array([e.n_particles for e in self.entries])

    def is_flagged(self, entry: SpectralEntry) -> bool:
        return (entry.sector, entry.label) in self.degenerate


@dataclass(frozen=True)
class ThermalParams:
    """Inverse temperature (``inf`` selects the ground state) and chemical potential."""

    beta: float
    mu: float = 0.0

    def __post_init__(self):
        if np.isnan(self.beta) or self.beta < 0:
            raise DomainError(f"beta must be non-negative, got {self.beta}")
        if not np.isfinite(self.mu):
            raise DomainError(f"mu must be finite, got {self.mu}")


def _degenerate(energies: np.ndarray, tol: float) -> bool:
    return len(energies) > 1 and bool(np.min(np.diff(np.sort(energies))) < tol)


def _momentum_decomposition(spec: ModelSpec) -> SpectralDecomposition:
    ham = build_hamiltonian(spec)
    entries = []
    for n in range(spec.n_sites + 1):
        basis = build_basis(spec.n_modes, TotalN(n))
        h = ham.matrix(basis)
        block = []
        for ks in (k for k in momentum_tuples(spec.n_sites) if len(k) == n):
            v = momentum_eigenstate(spec.n_sites, ks)
            energy = momentum_energy(ks, spec.t, spec.mu)
            residual = np.abs(h @ v.amplitudes - energy * v.amplitudes).max()
            if residual > RECONSTRUCTION_TOL * max(1.0, np.abs(h).max()):
                raise RuntimeError(f"plane wave {ks} is not an eigenvector (residual {residual:.3e})")
            label = tuple(momentum_indices(spec.n_sites, ks))
            block.append(SpectralEntry(TotalN(n), energy, v, n, label))
        entries.extend(sorted(block, key=lambda e: e.energy))
    return SpectralDecomposition(spec, tuple(entries))


def diagonalize(spec: ModelSpec, tol: float = DEGENERACY_TOL) -> SpectralDecomposition:
    """
    Diagonalize every sector of the model's natural label family.

    The periodic free chain uses its plane-wave eigenbasis, which resolves
    the ``k <-> -k`` degeneracies by momentum.
    """
    if spec.kind is ModelKind.FREE_CHAIN and spec.boundary == "periodic":
        return _momentum_decomposition(spec)

    ham = build_hamiltonian(spec)
    entries = []
    degenerate = set()
    for basis in sector_bases(spec.n_modes, spec.sector_family):
        if len(basis) == 0:
            continue
        h = ham.matrix(basis)
        w, vecs = np.linalg.eigh(h)
        scale = max(1.0, np.abs(h).max())
        err = np.abs(h - (vecs * w) @ vecs.conj().T).max()
        if err > RECONSTRUCTION_TOL * scale:
            raise RuntimeError(f"eigendecomposition of {basis.sector} failed (error {err:.3e})")
        if _degenerate(w, tol * scale):
            degenerate.add((basis.sector, None))
            log.debug("residual degeneracy in sector %s", basis.sector)
        n = int(np.bitwise_count(basis.states[0]))
        for energy, vec in zip(w, vecs.T):
            entries.append(SpectralEntry(basis.sector, float(energy), StateVector(basis, vec), n))
    return SpectralDecomposition(spec, tuple(entries), frozenset(degenerate))


def _effective_energies(decomp: SpectralDecomposition, params: ThermalParams) -> np.ndarray:
    if params.mu != 0 and decomp.spec.mu != 0:
        raise DomainError(
            "chemical potential already included in the Hamiltonian; pass mu=0 in ThermalParams"
        )
    return decomp.energies - params.mu * decomp.particle_numbers


def log_partition_function(decomp: SpectralDecomposition, params: ThermalParams) -> float:
    if np.isinf(params.beta):
        raise DomainError("the partition function diverges or vanishes at beta = inf")
    x = -params.beta * _effective_energies(decomp, params)
    top = x.max()
    return float(top + np.log(np.exp(x - top).sum()))


def partition_function(decomp: SpectralDecomposition, params: ThermalParams) -> float:
    """``Z = sum_m exp(-beta (E_m - mu N_m))``."""
    return float(np.exp(log_partition_function(decomp, params)))


def boltzmann_weights(decomp: SpectralDecomposition, params: ThermalParams, tol: float = DEGENERACY_TOL) -> np.ndarray:
    """
    Normalized thermal probabilities of the entries.  At ``beta = inf`` all
    entries within ``tol`` of the lowest effective energy share equal weight.
    """
    e = _effective_energies(decomp, params)
    e0 = e.min()
    if np.isinf(params.beta):
        w = (e <= e0 + tol * max(1.0, abs(e0))).astype(float)
    else:
        w = np.exp(-params.beta * (e - e0))
    return w / w.sum()


def restrict(decomp: SpectralDecomposition, sector: SectorLabel) -> SpectralDecomposition:
    """The entries of one sector."""
    entries = tuple(e for e in decomp.entries if e.sector == sector)
    if not entries:
        raise DomainError(f"no eigenstates in sector {sector}")
    return SpectralDecomposition(decomp.spec, entries, frozenset(k for k in decomp.degenerate if k[0] == sector))


def ground_entries(decomp: SpectralDecomposition, mu: float = 0.0, sector: SectorLabel | None = None) -> list[SpectralEntry]:
    """Lowest entries of ``E - mu N``, optionally within one sector."""
    if sector is not None:
        decomp = restrict(decomp, sector)
    w = boltzmann_weights(decomp, ThermalParams(np.inf, mu))
    return [entry for entry, p in zip(decomp.entries, w) if p > 0]


def entry_entanglement(decomp: SpectralDecomposition, kind=EntropyKind.VON_NEUMANN, decomposition=None) -> np.ndarray:
    """Lattice-averaged site entropy of every eigenvector."""
    n_sites = decomp.spec.n_sites
    return np.array([lattice_entanglement(e.vector, n_sites, kind, decomposition) for e in decomp.entries])


def thermal_local_entanglement(
    decomp: SpectralDecomposition,
    params: ThermalParams,
    kind=EntropyKind.VON_NEUMANN,
    decomposition=None,
) -> float:
    """
    Thermal average of the lattice-averaged site entropy over eigenstates.

    ``decomposition`` is an optional ``FockUnitary``; each eigenvector is
    re-expressed in its occupation basis before tracing.  Raises
    ``DegeneracyError`` if a contributing eigenvector comes from a sector
    whose spectrum is still degenerate.
    """
    w = boltzmann_weights(decomp, params)
    active = [e for e, p in zip(decomp.entries, w) if p > 0]
    flagged = sorted({str(e.sector) for e in active if decomp.is_flagged(e)})
    if flagged:
        raise DegeneracyError(
            f"degenerate eigenspace in sector(s) {', '.join(flagged)}; per-state entanglement is basis dependent"
        )
    n_sites = decomp.spec.n_sites
    total = 0.0
    for entry, p in zip(decomp.entries, w):
        if p > 0:
            total += p * lattice_entanglement(entry.vector, n_sites, kind, decomposition)
    return float(total)


def mean_filling(decomp: SpectralDecomposition, params: ThermalParams) -> float:
    """Thermal average of ``N / L``."""
    w = boltzmann_weights(decomp, params)
    return float(w @ decomp.particle_numbers / decomp.spec.n_sites)


def canonical_partition_functions(spec: ModelSpec, beta: float) -> tuple[np.ndarray, float]:
    """
    Fixed-``N`` partition sums as ``(Z_N * exp(-beta * shift), shift)``.

    Computed from sector eigenvalues alone, independent of eigenvectors.
    """
    if spec.kind is not ModelKind.FREE_CHAIN:
        raise DomainError("canonical sums by particle number are defined for the free chain")
    ham = build_hamiltonian(spec)
    spectra = [np.linalg.eigvalsh(ham.matrix(build_basis(spec.n_modes, TotalN(n)))) for n in range(spec.n_sites + 1)]
    shift = min(s.min() for s in spectra)
    return np.array([np.exp(-beta * (s - shift)).sum() for s in spectra]), float(shift)


def grand_canonical_shannon(spec: ModelSpec, params: ThermalParams) -> float:
    """
    Free-chain thermal site entropy from particle-number statistics alone:
    ``(1/Z) sum_N S(N/L) exp(beta mu N) Z_N``.
    """
    if spec.mu != 0 and params.mu != 0:
        raise DomainError("chemical potential already included in the Hamiltonian")
    z_n, _ = canonical_partition_functions(spec, params.beta)
    n = np.arange(spec.n_sites + 1)
    with np.errstate(divide="ignore"):
        x = np.log(z_n) + params.beta * params.mu * n
    p = np.exp(x - x.max())
    p /= p.sum()
    return float(sum(pn * shannon_filling(k / spec.n_sites) for k, pn in zip(n, p)))
