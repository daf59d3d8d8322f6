"""
Lattice Hamiltonians: free spinless chain, Hubbard model and the
two-site supersymmetric EKS model, plus their closed-form eigenstates.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum, IntEnum

import numpy as np

from .errors import DomainError, ResourceError
from .fock import (
    Basis,
    Mode,
    OperatorExpr,
    SpinResolved,
    Spin,
    StateVector,
    TotalN,
    annihilate,
    build_basis,
    create,
    number,
    number_operator,
    realize_matrix,
)
from .transform import FockUnitary, induce_fock_unitary, translation_map

SPINLESS_MAX_SITES = 16
SPINFUL_MAX_SITES = 8


class ModelKind(Enum):
    FREE_CHAIN = "free"
    HUBBARD = "hubbard"
    EKS_DIMER = "eks"


BOUNDARIES = ("open", "periodic")


@dataclass(frozen=True)
class ModelSpec:
    """
    Parameters of a lattice model.

    ``mu`` enters the Hamiltonian as ``-mu * N``.  The EKS dimer is fixed at
    two sites, half filling and zero chemical potential, and ignores ``t``,
    ``U`` and ``mu``.
    """

    kind: ModelKind
    n_sites: int = 2
    t: float = 1.0
    U: float = 0.0
    mu: float = 0.0
    boundary: str = "periodic"

    def __post_init__(self):
        object.__setattr__(self, "kind", ModelKind(self.kind))
        if self.boundary not in BOUNDARIES:
            raise DomainError(f"boundary must be one of {BOUNDARIES}, got {self.boundary!r}")
        for name in ("t", "U", "mu"):
            if not np.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")
        if self.kind is ModelKind.EKS_DIMER and self.n_sites != 2:
            raise DomainError(f"the EKS model is only supported on two sites, got {self.n_sites}")
        cap = SPINLESS_MAX_SITES if self.kind is ModelKind.FREE_CHAIN else SPINFUL_MAX_SITES
        if self.n_sites < 1:
            raise DomainError(f"need at least one site, got {self.n_sites}")
        if self.n_sites > cap:
            raise ResourceError(f"{self.n_sites} sites exceeds the cap of {cap} for {self.kind.value}")

    @property
    def spinful(self) -> bool:
        return self.kind is not ModelKind.FREE_CHAIN

    @property
    def n_modes(self) -> int:
        return 2 * self.n_sites if self.spinful else self.n_sites

    @property
    def local_dim(self) -> int:
        return 4 if self.spinful else 2

    @property
    def sector_family(self) -> str:
        return {ModelKind.FREE_CHAIN: "total", ModelKind.HUBBARD: "spin", ModelKind.EKS_DIMER: "eks"}[self.kind]


def bonds(n_sites: int, boundary: str) -> list[tuple[int, int]]:
    """
    Nearest-neighbour bonds ``(j, j+1)``.

    A periodic ring of two sites lists the single bond twice, and a ring
    of one site carries a self-bond, so that the plane-wave energies
    ``-2 t cos k`` hold for every ``L``.
    """
    if boundary == "open":
        return [(j, j + 1) for j in range(n_sites - 1)]
    return [(j, (j + 1) % n_sites) for j in range(n_sites)]


def _hopping(spec: ModelSpec, spins) -> OperatorExpr:
    out = OperatorExpr()
    for j, k in bonds(spec.n_sites, spec.boundary):
        for s in spins:
            hop = create(Mode(k, s)) * annihilate(Mode(j, s))
            out = out + hop + hop.dagger()
    return -spec.t * out


class LocalState(IntEnum):
    """Local states of a spinful site, valued as the site's two-bit block."""

    EMPTY = 0
    UP = 1
    DOWN = 2
    DOUBLE = 3

    @property
    def parity(self) -> int:
        return bin(self.value).count("1") & 1


def eks_apply(a, b):
    """Graded swap of two local states: ``|a>|b> -> (-1)**(|a||b|) |b>|a>``."""
    a, b = LocalState(a), LocalState(b)
    phase = -1 if a.parity and b.parity else 1
    return phase, (b, a)


@dataclass(frozen=True)
class Hamiltonian:
    spec: ModelSpec
    expr: OperatorExpr | None

    def matrix(self, basis: Basis | None = None) -> np.ndarray:
        if basis is None:
            basis = build_basis(self.spec.n_modes)
        if basis.n_modes != self.spec.n_modes:
            raise DomainError(f"basis has {basis.n_modes} modes, model needs {self.spec.n_modes}")
        if self.expr is not None:
            return realize_matrix(self.expr, basis)
        return _eks_matrix(basis)


def _eks_matrix(basis: Basis) -> np.ndarray:
    mat = np.zeros((len(basis), len(basis)), dtype=complex)
    for col, s in enumerate(basis):
        phase, (b, a) = eks_apply(s & 3, s >> 2 & 3)
        idx, found = basis.locate([int(b) | int(a) << 2])
        if found[0]:
            mat[idx[0], col] = phase
    return mat


def build_hamiltonian(spec: ModelSpec) -> Hamiltonian:
    if spec.kind is ModelKind.EKS_DIMER:
        return Hamiltonian(spec, None)
    n_all = number_operator(range(spec.n_modes))
    if spec.kind is ModelKind.FREE_CHAIN:
        return Hamiltonian(spec, _hopping(spec, [Spin.NONE]) - spec.mu * n_all)
    expr = _hopping(spec, [Spin.UP, Spin.DOWN]) - spec.mu * n_all
    for j in range(spec.n_sites):
        expr = expr + spec.U * (number(Mode(j, Spin.UP)) * number(Mode(j, Spin.DOWN)))
    return Hamiltonian(spec, expr)


def particle_hole_permutation(n_sites: int) -> np.ndarray:
    """Basis permutation exchanging up<->down and empty<->double on every site."""
    n_modes = 2 * n_sites
    states = np.arange(1 << n_modes)
    image = states ^ ((1 << n_modes) - 1)
    perm = np.zeros((len(states), len(states)))
    perm[image, states] = 1.0
    return perm


def translation_unitary(n_sites: int, spinful: bool = False) -> FockUnitary:
    """Fock representation of ``j -> j+1 mod L`` with fermionic signs."""
    return induce_fock_unitary(translation_map(n_sites, spinful))


# --------------------------------------------------------------------------
# free chain plane waves

def momentum_indices(n_sites: int, ks) -> list[int]:
    """Grid indices ``l`` of wave-vectors ``k = 2 pi l / L``, sorted."""
    out = []
    for k in ks:
        x = float(k) * n_sites / (2 * np.pi)
        l = int(round(x))
        if abs(x - l) > 1e-9:
            raise DomainError(f"k = {k} is not on the {n_sites}-site momentum grid")
        out.append(l % n_sites)
    if len(set(out)) != len(out):
        raise DomainError(f"momenta {list(ks)} repeat a mode; Pauli exclusion forbids it")
    return sorted(out)


def momentum_grid(n_sites: int) -> np.ndarray:
    return 2 * np.pi * np.arange(n_sites) / n_sites


def momentum_energy(ks, t: float = 1.0, mu: float = 0.0) -> float:
    ks = np.asarray(list(ks), dtype=float)
    return float(-2 * t * np.cos(ks).sum() - mu * len(ks))


def momentum_eigenstate(n_sites: int, ks) -> StateVector:
    """
    ``c†_{k_1} ... c†_{k_N} |0>`` with ``k_1 < ... < k_N`` on the ``TotalN(N)`` basis.

    Plane-wave creators are ``c†_k = L**-1/2 sum_j exp(-i k j) c†_j``.
    """
    idx = momentum_indices(n_sites, ks)
    n = len(idx)
    basis = build_basis(n_sites, TotalN(n))
    if n == 0:
        return StateVector(basis, np.ones(1))
    k = momentum_grid(n_sites)[idx]
    v = np.exp(-1j * np.outer(k, np.arange(n_sites))) / np.sqrt(n_sites)
    occ = np.array([[m for m in range(n_sites) if s >> m & 1] for s in basis.states])
    amps = np.linalg.det(np.transpose(v[:, occ], (1, 0, 2)))
    return StateVector(basis, amps)


def momentum_tuples(n_sites: int):
    """All occupied-momentum tuples, grouped by particle number."""
    grid = momentum_grid(n_sites)
    for n in range(n_sites + 1):
        for combo in itertools.combinations(range(n_sites), n):
            yield tuple(grid[list(combo)])


# --------------------------------------------------------------------------
# Hubbard dimer

def alpha_plus(x):
    return x + np.sqrt(1 + np.square(x))


def alpha_minus(x):
    # alpha_plus * alpha_minus = -1; this form avoids cancellation at large x
    return -1 / alpha_plus(x)


def hubbard_dimer_spec(t: float = 1.0, U: float = 0.0) -> ModelSpec:
    """The two-site Hubbard model with its single bond counted once."""
    return ModelSpec(ModelKind.HUBBARD, n_sites=2, t=t, U=U, boundary="open")


def dimer_ground_creator(alpha: float) -> OperatorExpr:
    """Pair creator whose action on the vacuum gives the dimer ground state."""
    def c(site, spin):
        return create(Mode(site, spin))

    up, down = Spin.UP, Spin.DOWN
    return (
        c(0, up) * c(0, down)
        + c(1, up) * c(1, down)
        + alpha * (c(0, up) * c(1, down) - c(0, down) * c(1, up))
    )


def hubbard_dimer_ground_state(t: float = 1.0, U: float = 0.0) -> tuple[float, StateVector]:
    """Closed-form ground energy ``2 t alpha_-(U/4t)`` and normalized ground state."""
    if t <= 0 or U < 0:
        raise DomainError(f"closed form needs t > 0 and U >= 0, got t={t}, U={U}")
    x = U / (4 * t)
    sector = build_basis(4, SpinResolved(1, 1))
    vacuum = Basis(4, np.zeros(1, dtype=np.int64))
    amps = -realize_matrix(dimer_ground_creator(alpha_plus(x)), vacuum, out_basis=sector)[:, 0]
    return float(2 * t * alpha_minus(x)), StateVector(sector, amps).normalized()
