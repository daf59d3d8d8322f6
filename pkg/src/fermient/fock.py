"""
Fermionic Fock spaces in the occupation-number (bit-set) representation.

A basis state of ``M`` modes is an integer whose bit ``b`` is set iff mode
``b`` is occupied.  The canonical state for an occupied set
``a_1 < a_2 < ... < a_N`` is

    c†_{a_1} c†_{a_2} ... c†_{a_N} |0>

i.e. the highest mode is created first.  With this ordering a creation or
annihilation operator on mode ``b`` picks up the Jordan-Wigner sign
``(-1)**(number of occupied modes below b)``.

Spinful lattices use a site-major layout, flat index ``2*site + spin`` with
spin 0 = up and 1 = down, so each site is a contiguous two-bit block whose
value (0, 1, 2, 3) enumerates the local states (empty, up, down, double).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from math import comb
from typing import Iterable, Iterator, Sequence, Union

import numpy as np

from .errors import DomainError, ResourceError

MAX_MODES = 24
MAX_FULL_MODES = 16
MAX_DENSE_DIM = 4096


class Spin(Enum):
    NONE = "none"
    UP = "up"
    DOWN = "down"


@dataclass(frozen=True)
class Mode:
    """A single-particle mode: a lattice site with an optional spin label."""

    site: int
    spin: Spin = Spin.NONE

    def __post_init__(self):
        if self.site < 0:
            raise DomainError(f"site must be non-negative, got {self.site}")

    @property
    def flat(self) -> int:
        if self.spin is Spin.NONE:
            return self.site
        return 2 * self.site + (0 if self.spin is Spin.UP else 1)

    @classmethod
    def from_flat(cls, flat: int, spinful: bool = False) -> "Mode":
        if flat < 0:
            raise DomainError(f"flat index must be non-negative, got {flat}")
        if not spinful:
            return cls(flat)
        return cls(flat // 2, Spin.UP if flat % 2 == 0 else Spin.DOWN)


ModeLike = Union[int, Mode]


def flat_index(mode: ModeLike) -> int:
    if isinstance(mode, Mode):
        return mode.flat
    mode = int(mode)
    if mode < 0:
        raise DomainError(f"mode index must be non-negative, got {mode}")
    return mode


def popcount(states) -> np.ndarray:
    return np.bitwise_count(np.asarray(states, dtype=np.int64)).astype(np.int64)


# --------------------------------------------------------------------------
# sector labels

@dataclass(frozen=True, order=True)
class TotalN:
    n: int

    def __str__(self):
        return f"N={self.n}"


@dataclass(frozen=True, order=True)
class SpinResolved:
    n_up: int
    n_down: int

    def __str__(self):
        return f"Nup={self.n_up};Ndown={self.n_down}"


@dataclass(frozen=True, order=True)
class EksTriple:
    """Numbers of singly-up, singly-down and doubly occupied sites."""

    single_up: int
    single_down: int
    double: int

    def __str__(self):
        return f"up={self.single_up};down={self.single_down};double={self.double}"


SectorLabel = Union[TotalN, SpinResolved, EksTriple]

FAMILIES = {"total": TotalN, "spin": SpinResolved, "eks": EksTriple}


def spin_masks(n_modes: int) -> tuple[int, int]:
    up = sum(1 << (2 * j) for j in range(n_modes // 2))
    return up, up << 1


def _family_of(family) -> str:
    if isinstance(family, str):
        if family not in FAMILIES:
            raise DomainError(f"unknown sector family {family!r}; expected one of {sorted(FAMILIES)}")
        return family
    for name, cls in FAMILIES.items():
        if family is cls or isinstance(family, cls):
            return name
    raise DomainError(f"unknown sector family {family!r}")


def _sector_keys(states: np.ndarray, family: str, n_modes: int) -> np.ndarray:
    """Integer columns identifying the sector of each state, shape (n, k)."""
    states = np.asarray(states, dtype=np.int64)
    if family == "total":
        return popcount(states)[:, None]
    if n_modes % 2:
        raise DomainError(f"spin-resolved sectors need an even mode count, got {n_modes}")
    up_mask, down_mask = spin_masks(n_modes)
    n_up = popcount(states & up_mask)
    n_down = popcount(states & down_mask)
    if family == "spin":
        return np.stack([n_up, n_down], axis=1)
    double = popcount(states & (states >> 1) & up_mask)
    return np.stack([n_up - double, n_down - double, double], axis=1)


def sector_of(state: int, family, n_modes: int) -> SectorLabel:
    """Sector label of a single basis state within the given label family."""
    name = _family_of(family)
    key = _sector_keys(np.array([state]), name, n_modes)[0]
    return FAMILIES[name](*(int(k) for k in key))


def check_sector(sector: SectorLabel, n_modes: int) -> None:
    if isinstance(sector, TotalN):
        if not 0 <= sector.n <= n_modes:
            raise DomainError(f"TotalN({sector.n}) inconsistent with {n_modes} modes")
        return
    if not isinstance(sector, (SpinResolved, EksTriple)):
        raise DomainError(f"not a sector label: {sector!r}")
    if n_modes % 2:
        raise DomainError(f"{type(sector).__name__} needs an even mode count, got {n_modes}")
    n_sites = n_modes // 2
    if isinstance(sector, SpinResolved):
        if not (0 <= sector.n_up <= n_sites and 0 <= sector.n_down <= n_sites):
            raise DomainError(f"{sector} inconsistent with {n_sites} sites")
        return
    counts = (sector.single_up, sector.single_down, sector.double)
    if min(counts) < 0 or sum(counts) > n_sites:
        raise DomainError(f"{sector} inconsistent with {n_sites} sites")


def sector_dimension(sector: SectorLabel, n_modes: int) -> int:
    check_sector(sector, n_modes)
    if isinstance(sector, TotalN):
        return comb(n_modes, sector.n)
    n_sites = n_modes // 2
    if isinstance(sector, SpinResolved):
        return comb(n_sites, sector.n_up) * comb(n_sites, sector.n_down)
    su, sd, d = sector.single_up, sector.single_down, sector.double
    return comb(n_sites, su) * comb(n_sites - su, sd) * comb(n_sites - su - sd, d)


# --------------------------------------------------------------------------
# bases and states

@dataclass(frozen=True, eq=False)
class Basis:
    """Sorted bit-set basis states of an ``n_modes`` Fock space or one of its sectors."""

    n_modes: int
    states: np.ndarray
    sector: SectorLabel | None = None

    def __len__(self) -> int:
        return len(self.states)

    def __iter__(self) -> Iterator[int]:
        return (int(s) for s in self.states)

    def __getitem__(self, i) -> int:
        return int(self.states[i])

    @property
    def is_full(self) -> bool:
        return len(self.states) == 1 << self.n_modes

    def locate(self, states) -> tuple[np.ndarray, np.ndarray]:
        """Positions of ``states`` in the basis and a mask of which were found."""
        states = np.asarray(states, dtype=np.int64)
        idx = np.searchsorted(self.states, states)
        idx = np.minimum(idx, len(self.states) - 1)
        found = self.states[idx] == states
        return idx, found

    def index(self, state: int) -> int:
        idx, found = self.locate([state])
        if not found[0]:
            raise DomainError(f"state {state:#b} not in basis")
        return int(idx[0])


def _combination_states(modes: Sequence[int], n: int) -> np.ndarray:
    out = [sum(1 << m for m in c) for c in itertools.combinations(modes, n)]
    return np.array(out, dtype=np.int64)


def build_basis(n_modes: int, sector: SectorLabel | None = None) -> Basis:
    """
    Enumerate Fock basis states in ascending bit-set order.

    The unrestricted space has ``2**n_modes`` states and is limited to
    ``MAX_FULL_MODES`` modes; a sector restriction allows up to ``MAX_MODES``.
    """
    if n_modes <= 0:
        raise DomainError(f"mode count must be positive, got {n_modes}")
    if n_modes > MAX_MODES:
        raise ResourceError(f"{n_modes} modes exceeds the cap of {MAX_MODES}")
    if sector is None:
        if n_modes > MAX_FULL_MODES:
            raise ResourceError(
                f"full Fock space of {n_modes} modes exceeds {MAX_FULL_MODES}; restrict to a sector"
            )
        return Basis(n_modes, np.arange(1 << n_modes, dtype=np.int64))

    check_sector(sector, n_modes)
    if isinstance(sector, TotalN):
        states = _combination_states(range(n_modes), sector.n)
    elif isinstance(sector, SpinResolved):
        ups = _combination_states(range(0, n_modes, 2), sector.n_up)
        downs = _combination_states(range(1, n_modes, 2), sector.n_down)
        states = (ups[:, None] | downs[None, :]).ravel()
    else:
        states = np.arange(1 << n_modes, dtype=np.int64)
        keys = _sector_keys(states, "eks", n_modes)
        target = (sector.single_up, sector.single_down, sector.double)
        states = states[np.all(keys == target, axis=1)]
    return Basis(n_modes, np.sort(states), sector)


def sector_bases(n_modes: int, family) -> list[Basis]:
    """All non-empty sector bases of a label family, in label order."""
    name = _family_of(family)
    if name == "total":
        labels = [TotalN(n) for n in range(n_modes + 1)]
    else:
        n_sites = n_modes // 2
        if n_modes % 2:
            raise DomainError(f"{name} sectors need an even mode count, got {n_modes}")
        r = range(n_sites + 1)
        if name == "spin":
            labels = [SpinResolved(u, d) for u in r for d in r]
        else:
            labels = [EksTriple(u, d, x) for u in r for d in r for x in r if u + d + x <= n_sites]
    return [build_basis(n_modes, label) for label in labels]


@dataclass(frozen=True, eq=False)
class StateVector:
    """Complex amplitudes over a (possibly sector-restricted) basis."""

    basis: Basis
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (len(self.basis),):
            raise DomainError(f"amplitude shape {amps.shape} does not match basis size {len(self.basis)}")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_full(cls, vector, n_modes: int) -> "StateVector":
        return cls(build_basis(n_modes), np.asarray(vector, dtype=complex))

    @classmethod
    def basis_state(cls, state: int, n_modes: int) -> "StateVector":
        return cls(Basis(n_modes, np.array([state], dtype=np.int64)), np.ones(1))

    @property
    def n_modes(self) -> int:
        return self.basis.n_modes

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "StateVector":
        norm = self.norm()
        if norm == 0:
            raise DomainError("cannot normalize the zero vector")
        return StateVector(self.basis, self.amplitudes / norm)

    def full(self) -> np.ndarray:
        if self.basis.is_full:
            return self.amplitudes.copy()
        if self.n_modes > MAX_FULL_MODES:
            raise ResourceError(f"cannot embed a {self.n_modes}-mode state into the full space")
        out = np.zeros(1 << self.n_modes, dtype=complex)
        out[self.basis.states] = self.amplitudes
        return out

    def restrict(self, basis: Basis) -> "StateVector":
        """Project onto ``basis``; components outside it are dropped."""
        idx, found = basis.locate(self.basis.states)
        out = np.zeros(len(basis), dtype=complex)
        out[idx[found]] = self.amplitudes[found]
        return StateVector(basis, out)

    def expectation(self, expr: "OperatorExpr") -> complex:
        mat = realize_matrix(expr, self.basis)
        return complex(np.vdot(self.amplitudes, mat @ self.amplitudes))


# --------------------------------------------------------------------------
# operators

def _apply(flat: int, dagger: bool, states: np.ndarray):
    occupied = (states >> flat) & 1
    ok = occupied == 0 if dagger else occupied == 1
    below = popcount(states & ((1 << flat) - 1))
    signs = 1 - 2 * (below & 1)
    return states ^ (1 << flat), signs, ok


def apply_operator(mode: ModeLike, dagger: bool, state: int, n_modes: int | None = None):
    """
    Apply ``c†_mode`` (``dagger=True``) or ``c_mode`` to a basis state.

    Returns ``(sign, new_state)``, or ``(0, None)`` when the result vanishes.
    """
    flat = flat_index(mode)
    if n_modes is not None and flat >= n_modes:
        raise DomainError(f"mode {flat} out of range for {n_modes} modes")
    new, sign, ok = _apply(flat, dagger, np.array([state], dtype=np.int64))
    if not ok[0]:
        return 0, None
    return int(sign[0]), int(new[0])


Factor = tuple[int, bool]


@dataclass(frozen=True)
class OperatorExpr:
    """
    A linear combination of products of creation/annihilation operators.

    Each term is ``(coefficient, factors)`` with factors written left to
    right as in the formula, so the rightmost factor acts first.
    """

    terms: tuple[tuple[complex, tuple[Factor, ...]], ...] = ()

    def __add__(self, other):
        other = _as_expr(other)
        return OperatorExpr(self.terms + other.terms)

    __radd__ = __add__

    def __neg__(self):
        return OperatorExpr(tuple((-c, f) for c, f in self.terms))

    def __sub__(self, other):
        return self + (-_as_expr(other))

    def __rsub__(self, other):
        return _as_expr(other) - self

    def __mul__(self, other):
        if isinstance(other, OperatorExpr):
            return OperatorExpr(
                tuple((c1 * c2, f1 + f2) for c1, f1 in self.terms for c2, f2 in other.terms)
            )
        return OperatorExpr(tuple((c * other, f) for c, f in self.terms))

    def __rmul__(self, scalar):
        return OperatorExpr(tuple((scalar * c, f) for c, f in self.terms))

    def dagger(self) -> "OperatorExpr":
        return OperatorExpr(
            tuple((np.conj(c), tuple((m, not d) for m, d in reversed(f))) for c, f in self.terms)
        )

    @property
    def max_mode(self) -> int:
        return max((m for _, f in self.terms for m, _ in f), default=-1)


def _as_expr(x) -> OperatorExpr:
    if isinstance(x, OperatorExpr):
        return x
    return x * identity()


def identity() -> OperatorExpr:
    return OperatorExpr(((1.0, ()),))


def create(mode: ModeLike) -> OperatorExpr:
    return OperatorExpr(((1.0, ((flat_index(mode), True),)),))


def annihilate(mode: ModeLike) -> OperatorExpr:
    return OperatorExpr(((1.0, ((flat_index(mode), False),)),))


def number(mode: ModeLike) -> OperatorExpr:
    return create(mode) * annihilate(mode)


def number_operator(modes: Iterable[ModeLike]) -> OperatorExpr:
    """Sum of ``n_b`` over the given modes."""
    out = OperatorExpr()
    for m in modes:
        out = out + number(m)
    return out


def site_projectors(site: int) -> dict[str, OperatorExpr]:
    """Projectors onto the four local states of a spinful site."""
    n_up = number(Mode(site, Spin.UP))
    n_down = number(Mode(site, Spin.DOWN))
    one = identity()
    return {
        "empty": (one - n_up) * (one - n_down),
        "up": n_up * (one - n_down),
        "down": n_down * (one - n_up),
        "double": n_up * n_down,
    }


def _check_dense(rows: int, cols: int) -> None:
    if max(rows, cols) > MAX_DENSE_DIM:
        raise ResourceError(f"dense {rows}x{cols} matrix exceeds the cap of {MAX_DENSE_DIM}")


def realize_matrix(expr: OperatorExpr, basis: Basis, out_basis: Basis | None = None) -> np.ndarray:
    """
    Dense matrix of ``expr`` with columns on ``basis`` and rows on ``out_basis``.

    ``out_basis`` defaults to ``basis``; amplitude leaving it is projected out.
    """
    rows = basis if out_basis is None else out_basis
    if rows.n_modes != basis.n_modes:
        raise DomainError("row and column bases have different mode counts")
    if expr.max_mode >= basis.n_modes:
        raise DomainError(f"mode {expr.max_mode} out of range for {basis.n_modes} modes")
    _check_dense(len(rows), len(basis))

    mat = np.zeros((len(rows), len(basis)), dtype=complex)
    cols = np.arange(len(basis))
    for coef, factors in expr.terms:
        states = basis.states.copy()
        signs = np.ones(len(basis), dtype=np.int64)
        alive = np.ones(len(basis), dtype=bool)
        for flat, dagger in reversed(factors):
            states, s, ok = _apply(flat, dagger, states)
            signs *= s
            alive &= ok
        idx, found = rows.locate(states)
        keep = alive & found
        np.add.at(mat, (idx[keep], cols[keep]), coef * signs[keep])
    return mat


def sector_split(vector: StateVector, family="total", atol: float = 1e-12) -> list[tuple[SectorLabel, StateVector]]:
    """
    Group the components of ``vector`` by sector label.

    Components whose norm does not exceed ``atol`` are dropped.
    """
    name = _family_of(family)
    keys = _sector_keys(vector.basis.states, name, vector.n_modes)
    out = []
    for key in np.unique(keys, axis=0):
        mask = np.all(keys == key, axis=1)
        amps = vector.amplitudes[mask]
        if np.linalg.norm(amps) <= atol:
            continue
        label = FAMILIES[name](*(int(k) for k in key))
        sub = Basis(vector.n_modes, vector.basis.states[mask], label)
        out.append((label, StateVector(sub, amps)))
    return sorted(out, key=lambda item: item[0])
