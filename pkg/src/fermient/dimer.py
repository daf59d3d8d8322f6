"""
Ground-state entanglement of the two-site Hubbard model.

Curves are computed from the dense ground eigenvector; the closed forms
below serve as cross-checks.  ``x`` is the ratio ``U / 4t``.
"""

from __future__ import annotations

import numpy as np

from .entanglement import EntropyKind, lattice_entanglement
from .errors import DomainError
from .fock import SpinResolved
from .models import alpha_plus, hubbard_dimer_spec
from .spectral import diagonalize, ground_entries
from .transform import FockUnitary, fourier_map, induce_fock_unitary

DEFAULT_GRID = np.linspace(0.0, 10.0, 201)

DECOMPOSITIONS = ("real", "reciprocal")

HALF_FILLED = SpinResolved(1, 1)


def real_lattice_entropy(x):
    """Linear entropy of one site, ``1 - (a^4 + 1) / (2 (a^2 + 1)^2)`` with ``a = alpha_+(x)``."""
    a = alpha_plus(x)
    return 1 - (a**4 + 1) / (2 * (a**2 + 1) ** 2)


def reciprocal_lattice_entropy(x):
    """Linear entropy of one momentum mode pair; amplitudes ``1 + a`` and ``1 - a``."""
    a = alpha_plus(x)
    p, m = 1 + a, 1 - a
    return 1 - (p**4 + m**4) / (p**2 + m**2) ** 2


def reciprocal_unitary() -> FockUnitary:
    """Fock unitary of the two-site plane-wave modes, both spin species."""
    return induce_fock_unitary(fourier_map(2).spinful())


def dimer_ground(t: float, U: float):
    """
    Energy and vector of the dense ground state of the half-filled,
    ``S^z = 0`` Hubbard dimer (one up and one down fermion).
    """
    entries = ground_entries(diagonalize(hubbard_dimer_spec(t, U)), sector=HALF_FILLED)
    if len(entries) != 1:
        raise DomainError(f"dimer ground state is {len(entries)}-fold degenerate at t={t}, U={U}")
    return entries[0].energy, entries[0].vector


def dimer_curve(t: float = 1.0, grid=None, decomposition: str = "real", kind=EntropyKind.LINEAR):
    """
    Ground-state site entanglement of the Hubbard dimer along ``U/4t``.

    Returns a list of ``(U/4t, S)`` pairs; ``decomposition`` selects the
    real-lattice sites or the plane-wave modes.
    """
    if t <= 0:
        raise DomainError(f"hopping must be positive, got {t}")
    if decomposition not in DECOMPOSITIONS:
        raise DomainError(f"decomposition must be one of {DECOMPOSITIONS}, got {decomposition!r}")
    grid = DEFAULT_GRID if grid is None else np.asarray(grid, dtype=float)
    unitary = reciprocal_unitary() if decomposition == "reciprocal" else None
    out = []
    for x in grid:
        _, v = dimer_ground(t, 4 * t * x)
        out.append((float(x), lattice_entanglement(v, 2, kind, unitary)))
    return out
