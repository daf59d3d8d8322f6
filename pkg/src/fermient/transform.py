"""
Mode transformations and the Fock-space unitaries they induce.

A ``ModeMap`` holding a unitary ``U`` rotates the annihilators as
``c~_i = sum_j U[i, j] c_j``; creators therefore rotate with ``conj(U)``.
The induced ``W`` satisfies ``W c_i W† = c~_i`` and fixes the vacuum with
phase +1, so the re-partitioned occupation basis is ``W |n>``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, ResourceError
from .fock import MAX_DENSE_DIM, StateVector, TotalN, build_basis

UNITARY_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class ModeMap:
    matrix: np.ndarray
    name: str = "custom"

    def __post_init__(self):
        u = np.asarray(self.matrix, dtype=complex)
        if u.ndim != 2 or u.shape[0] != u.shape[1]:
            raise DomainError(f"mode map must be square, got shape {u.shape}")
        dev = np.abs(u.conj().T @ u - np.eye(len(u))).max()
        if dev > UNITARY_TOL:
            raise DomainError(f"mode map is not unitary (max deviation {dev:.3e})")
        object.__setattr__(self, "matrix", u)

    @property
    def n_modes(self) -> int:
        return len(self.matrix)

    def spinful(self) -> "ModeMap":
        """The same map acting identically on both spin species (site-major layout)."""
        return ModeMap(np.kron(self.matrix, np.eye(2)), self.name)

    def inverse(self) -> "ModeMap":
        return ModeMap(self.matrix.conj().T, f"{self.name}^-1")

    def __matmul__(self, other: "ModeMap") -> "ModeMap":
        return ModeMap(self.matrix @ other.matrix, f"{self.name}*{other.name}")


def fourier_map(n_sites: int) -> ModeMap:
    """
    Plane-wave modes ``c_k = L**-1/2 sum_j exp(i k j) c_j`` with
    ``k = 2 pi l / L``, ``l = 0..L-1``.

    Sites are counted from ``j = 0``.  Counting from 1 instead multiplies
    row ``k`` by ``exp(i k)``, a relabeling phase per momentum mode that
    leaves every entanglement quantity unchanged.
    """
    if n_sites < 1:
        raise DomainError(f"need at least one site, got {n_sites}")
    k = 2 * np.pi * np.arange(n_sites) / n_sites
    j = np.arange(n_sites)
    return ModeMap(np.exp(1j * np.outer(k, j)) / np.sqrt(n_sites), "fourier")


def permutation_map(perm: Sequence[int]) -> ModeMap:
    """Map with ``c~_i = c_{perm[i]}``."""
    perm = list(perm)
    if sorted(perm) != list(range(len(perm))):
        raise DomainError(f"not a permutation: {perm}")
    u = np.zeros((len(perm), len(perm)))
    u[np.arange(len(perm)), perm] = 1.0
    return ModeMap(u, "permutation")


def translation_map(n_sites: int, spinful: bool = False) -> ModeMap:
    """Cyclic shift ``c_j -> c_{j+1 mod L}``."""
    m = permutation_map([(j + 1) % n_sites for j in range(n_sites)])
    m = ModeMap(m.matrix, "translation")
    return m.spinful() if spinful else m


@dataclass(frozen=True, eq=False)
class FockUnitary:
    matrix: np.ndarray
    mode_map: ModeMap | None = None

    def __post_init__(self):
        w = np.asarray(self.matrix, dtype=complex)
        dim = len(w)
        if w.shape != (dim, dim) or dim & (dim - 1):
            raise DomainError(f"Fock unitary must be square of size 2**M, got {w.shape}")
        object.__setattr__(self, "matrix", w)

    @property
    def n_modes(self) -> int:
        return len(self.matrix).bit_length() - 1

    def dagger(self) -> "FockUnitary":
        inv = None if self.mode_map is None else self.mode_map.inverse()
        return FockUnitary(self.matrix.conj().T, inv)

    def __matmul__(self, other: "FockUnitary") -> "FockUnitary":
        return FockUnitary(self.matrix @ other.matrix)


def induce_fock_unitary(mode_map: ModeMap) -> FockUnitary:
    """
    Fock-space unitary of a mode map.

    Column ``A`` holds ``c~†_{a_1} ... c~†_{a_N} |0>`` expanded in the
    canonical basis; its component on ``B`` is ``det(conj(U)[A, B])``.
    """
    if not isinstance(mode_map, ModeMap):
        mode_map = ModeMap(mode_map)
    n_modes = mode_map.n_modes
    dim = 1 << n_modes
    if dim > MAX_DENSE_DIM:
        raise ResourceError(f"induced unitary of {n_modes} modes exceeds the dense cap")
    v = mode_map.matrix.conj()
    w = np.zeros((dim, dim), dtype=complex)
    w[0, 0] = 1.0
    for n in range(1, n_modes + 1):
        states = build_basis(n_modes, TotalN(n)).states
        occ = np.array([[m for m in range(n_modes) if s >> m & 1] for s in states])
        for a, row_modes in zip(states, occ):
            sub = v[row_modes][:, occ]              # (n, k, n)
            w[states, a] = np.linalg.det(np.transpose(sub, (1, 0, 2)))
    return FockUnitary(w, mode_map)


def _matrix(w) -> np.ndarray:
    return w.matrix if isinstance(w, FockUnitary) else np.asarray(w, dtype=complex)


def transform_state(w, v):
    """Return ``W v`` for a full-space state (``StateVector`` or array)."""
    mat = _matrix(w)
    if isinstance(v, StateVector):
        if len(mat) != 1 << v.n_modes:
            raise DomainError(f"unitary of size {len(mat)} cannot act on {v.n_modes} modes")
        return StateVector.from_full(mat @ v.full(), v.n_modes)
    v = np.asarray(v, dtype=complex)
    if v.shape != (len(mat),):
        raise DomainError(f"vector shape {v.shape} does not match unitary size {len(mat)}")
    return mat @ v


def express_in(w, v):
    """Coordinates of ``v`` in the occupation basis ``{W |n>}``, i.e. ``W† v``."""
    return transform_state(_matrix(w).conj().T, v)


def is_product_unitary(w, local_dims: Sequence[int], tol: float = 1e-8) -> bool:
    """
    Whether ``W`` factorizes into unitaries on the given local factors.

    Factor 0 is the least significant digit of the basis index (site 0 of a
    bit-set basis).  Every cut between consecutive factors is tested for
    operator-Schmidt rank one.
    """
    mat = _matrix(w)
    dims = [int(d) for d in local_dims]
    if int(np.prod(dims)) != len(mat) or mat.shape != (len(mat), len(mat)):
        raise DomainError(f"local dims {dims} do not match unitary of shape {mat.shape}")
    dev = np.abs(mat.conj().T @ mat - np.eye(len(mat))).max()
    if dev > tol:
        return False
    for cut in range(1, len(dims)):
        lo = int(np.prod(dims[:cut]))
        hi = len(mat) // lo
        t = mat.reshape(hi, lo, hi, lo).transpose(0, 2, 1, 3).reshape(hi * hi, lo * lo)
        s = np.linalg.svd(t, compute_uv=False)
        if s[1] > tol * s[0]:
            return False
    return True
