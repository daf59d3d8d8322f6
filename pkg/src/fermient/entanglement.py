"""
Single-site reduced density matrices and their entropies.

The tensor structure is the one fixed by the occupation-number map: a
spinless site is one bit of the basis index, a spinful site is the two-bit
block ``(up, down)``.  Local spinful states are ordered
``|0>, |up>, |down>, |up down>`` with ``|up down> = c†_down c†_up |0>``,
which is minus the canonical bit-set state; the reduced matrix is
conjugated by ``diag(1, 1, 1, -1)`` accordingly.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError
from .fock import StateVector, popcount, spin_masks
from .transform import express_in, translation_map, induce_fock_unitary

RHO_TOL = 1e-10
NORM_TOL = 1e-8

_DOUBLE_PHASE = np.diag([1.0, 1.0, 1.0, -1.0])


class EntropyKind(Enum):
    VON_NEUMANN = "vn"
    LINEAR = "linear"


@dataclass(frozen=True, eq=False)
class LocalDensityMatrix:
    """A validated single-site density matrix (2x2 spinless, 4x4 spinful)."""

    rho: np.ndarray
    site: int = 0
    decomposition: str = "real"

    def __post_init__(self):
        rho = np.asarray(self.rho, dtype=complex)
        if rho.shape not in ((2, 2), (4, 4)):
            raise DomainError(f"local density matrix must be 2x2 or 4x4, got {rho.shape}")
        if np.abs(rho - rho.conj().T).max() > RHO_TOL:
            raise DomainError("density matrix is not Hermitian")
        if abs(np.trace(rho) - 1) > RHO_TOL:
            raise DomainError(f"density matrix trace {np.trace(rho).real:.12g} != 1")
        if np.linalg.eigvalsh(rho).min() < -RHO_TOL:
            raise DomainError("density matrix has a negative eigenvalue")
        object.__setattr__(self, "rho", rho)

    @property
    def dim(self) -> int:
        return len(self.rho)


def _check_normalized(v: StateVector) -> None:
    norm = v.norm()
    if abs(norm - 1) > NORM_TOL:
        raise DomainError(f"state is not normalized (norm {norm:.12g})")


def _site_bits(v: StateVector, site: int, local_dim: int) -> int:
    if local_dim not in (2, 4):
        raise DomainError(f"local dimension must be 2 or 4, got {local_dim}")
    bits = local_dim.bit_length() - 1
    if v.n_modes % bits:
        raise DomainError(f"{v.n_modes} modes cannot be split into {local_dim}-level sites")
    if not 0 <= site < v.n_modes // bits:
        raise DomainError(f"site {site} out of range for {v.n_modes // bits} sites")
    return bits


def partial_trace_site(v: StateVector, site: int, local_dim: int = 2, decomposition: str = "real") -> LocalDensityMatrix:
    """
    Reduced density matrix of one site, traced by brute force.

    Amplitudes are grouped by (local state, environment configuration) and
    ``rho[a, b] = sum_env psi[a, env] conj(psi[b, env])``.
    """
    _check_normalized(v)
    bits = _site_bits(v, site, local_dim)
    shift = site * bits
    mask = (local_dim - 1) << shift
    states = v.basis.states
    local = (states & mask) >> shift
    envs, inv = np.unique(states & ~mask, return_inverse=True)
    psi = np.zeros((len(envs), local_dim), dtype=complex)
    psi[inv, local] = v.amplitudes
    rho = psi.T @ psi.conj()
    if local_dim == 4:
        rho = _DOUBLE_PHASE @ rho @ _DOUBLE_PHASE
    return LocalDensityMatrix(rho, site, decomposition)


def _number_variance(v: StateVector, counts: np.ndarray) -> float:
    p = np.abs(v.amplitudes) ** 2
    mean = p @ counts
    return float(p @ counts**2 - mean**2)


def local_rho_number_eigenstate(v: StateVector, mode: int) -> LocalDensityMatrix:
    """
    Diagonal reduced matrix ``diag(1 - <n>, <n>)`` of one mode.

    Valid only for particle-number eigenstates, where the off-diagonal
    element ``<c†>`` vanishes.
    """
    _check_normalized(v)
    if not 0 <= mode < v.n_modes:
        raise DomainError(f"mode {mode} out of range for {v.n_modes} modes")
    if _number_variance(v, popcount(v.basis.states)) > 1e-10:
        raise DomainError("state is not a particle-number eigenstate")
    p = np.abs(v.amplitudes) ** 2
    n = float(p[(v.basis.states >> mode & 1) == 1].sum())
    return LocalDensityMatrix(np.diag([1 - n, n]), mode)


def site_occupations(v: StateVector) -> tuple[float, float, float]:
    """Numbers of singly-up, singly-down and doubly occupied sites, ``(N_up, N_down, N_double)``."""
    up_mask, _ = spin_masks(v.n_modes)
    s = v.basis.states
    up = s & up_mask
    down = (s >> 1) & up_mask
    p = np.abs(v.amplitudes) ** 2
    return (
        float(p @ popcount(up & ~down)),
        float(p @ popcount(down & ~up)),
        float(p @ popcount(up & down)),
    )


def local_rho_spinful_symmetric(v: StateVector, site: int = 0, tol: float = NORM_TOL) -> LocalDensityMatrix:
    """
    Site density matrix of a translation-invariant ``S^z`` eigenstate,

        diag(L - N_up - N_down - N_double, N_up, N_down, N_double) / L,

    which is the same on every site.
    """
    _check_normalized(v)
    if v.n_modes % 2:
        raise DomainError("spinful state needs an even mode count")
    n_sites = v.n_modes // 2
    _site_bits(v, site, 4)
    up_mask, down_mask = spin_masks(v.n_modes)
    sz = popcount(v.basis.states & up_mask) - popcount(v.basis.states & down_mask)
    if _number_variance(v, sz) > 1e-10:
        raise DomainError("state is not an S^z eigenstate")
    full = v.full()
    shifted = induce_fock_unitary(translation_map(n_sites, spinful=True)).matrix @ full
    phase = np.vdot(full, shifted)
    if np.linalg.norm(shifted - phase * full) > tol:
        raise DomainError("state is not translation invariant")
    n_up, n_down, n_double = site_occupations(v)
    diag = np.array([n_sites - n_up - n_down - n_double, n_up, n_down, n_double]) / n_sites
    return LocalDensityMatrix(np.diag(diag), site)


def _as_rho(rho) -> np.ndarray:
    if isinstance(rho, LocalDensityMatrix):
        return rho.rho
    return LocalDensityMatrix(rho).rho


def entropy(rho, kind: EntropyKind = EntropyKind.VON_NEUMANN) -> float:
    """Von Neumann entropy (natural log) or linear entropy ``1 - Tr rho^2``."""
    rho = _as_rho(rho)
    kind = EntropyKind(kind)
    if kind is EntropyKind.LINEAR:
        return float(max(0.0, 1 - np.sum(np.abs(rho) ** 2)))
    lam = np.clip(np.linalg.eigvalsh(rho), 0.0, None)
    lam = lam[lam > 0]
    return float(max(0.0, -np.sum(lam * np.log(lam))))


def shannon_filling(n: float) -> float:
    """Binary entropy ``-n ln n - (1-n) ln(1-n)`` of a filling fraction."""
    if not 0 <= n <= 1:
        raise DomainError(f"filling must lie in [0, 1], got {n}")
    return float(sum(-p * np.log(p) for p in (n, 1 - n) if p > 0))


def site_entropies(v: StateVector, n_sites: int, kind=EntropyKind.VON_NEUMANN, unitary=None) -> np.ndarray:
    """
    Entropy of every site, optionally in the occupation basis of ``unitary``
    (a ``FockUnitary`` from a mode map) instead of the real lattice.
    """
    if v.n_modes % n_sites:
        raise DomainError(f"{v.n_modes} modes do not split into {n_sites} sites")
    local_dim = 1 << (v.n_modes // n_sites)
    tag = "real"
    if unitary is not None:
        v = express_in(unitary, v)
        tag = getattr(getattr(unitary, "mode_map", None), "name", None) or "custom"
    return np.array([entropy(partial_trace_site(v, j, local_dim, tag), kind) for j in range(n_sites)])


def lattice_entanglement(v: StateVector, n_sites: int, kind=EntropyKind.VON_NEUMANN, unitary=None) -> float:
    """Site entropy averaged over the lattice."""
    return float(site_entropies(v, n_sites, kind, unitary).mean())
