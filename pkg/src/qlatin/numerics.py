"""Complex linear algebra substrate: unit vectors, unitaries, tolerance checks.

All quantities are double-precision; every verification in the package reduces
to inner products being 0 or 1 within an explicit tolerance.  Values such as
1/sqrt(2) or exp(2*pi*i/3) are stored as floating approximations, which leaves
several orders of magnitude of headroom at the dimensions handled here.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

from .errors import (
    BasisNotOrthonormal,
    DimensionMismatch,
    NotUnit,
    NotUnitary,
)


@dataclass(frozen=True)
class ToleranceConfig:
    """Thresholds for inner-product and phase-equality decisions."""

    eps_orth: float = 1e-9
    eps_phase: float = 1e-6

    def __post_init__(self):
        if not (self.eps_orth > 0 and self.eps_phase > 0):
            raise ValueError("tolerances must be positive")
        if self.eps_phase < self.eps_orth:
            raise ValueError("eps_phase must be >= eps_orth")


DEFAULT_TOL = ToleranceConfig()


def _as_complex_array(components, ndim: int) -> np.ndarray:
    arr = np.asarray(components, dtype=np.complex128)
    if arr.ndim != ndim:
        raise DimensionMismatch(f"expected {ndim}-d array, got shape {arr.shape}")
    arr = arr.copy()
    arr.setflags(write=False)
    return arr


class UnitVector:
    """A unit-norm vector in C^v.

    Immutable; the underlying array is read-only.
    """

    __slots__ = ("data",)

    def __init__(self, components, tol: ToleranceConfig = DEFAULT_TOL):
        data = _as_complex_array(components, 1)
        norm = float(np.linalg.norm(data))
        if abs(norm - 1.0) > max(tol.eps_orth, 1e-12):
            raise NotUnit(f"norm {norm} not within tolerance of 1")
        object.__setattr__(self, "data", data)

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    @staticmethod
    def basis_state(dim: int, index: int) -> "UnitVector":
        """The computational basis vector |index> of C^dim."""
        if not 0 <= index < dim:
            raise DimensionMismatch(f"basis index {index} outside [0, {dim})")
        v = np.zeros(dim, dtype=np.complex128)
        v[index] = 1.0
        return UnitVector(v)

    @staticmethod
    def normalized(components) -> "UnitVector":
        arr = np.asarray(components, dtype=np.complex128)
        n = np.linalg.norm(arr)
        if n == 0:
            raise NotUnit("cannot normalize the zero vector")
        return UnitVector(arr / n)

    def __setattr__(self, *a):
        raise AttributeError("UnitVector is immutable")

    def __repr__(self):
        return f"UnitVector({np.array2string(self.data, precision=4)})"

    def __eq__(self, other):
        return isinstance(other, UnitVector) and np.array_equal(self.data, other.data)

    def __hash__(self):
        return hash(self.data.tobytes())


class UnitaryMatrix:
    """A square complex matrix U with ||U^dagger U - I||_max within tolerance."""

    __slots__ = ("data",)

    def __init__(self, entries, tol: ToleranceConfig = DEFAULT_TOL):
        data = _as_complex_array(entries, 2)
        n, m = data.shape
        if n != m:
            raise DimensionMismatch(f"matrix is {n}x{m}, not square")
        defect = np.abs(data.conj().T @ data - np.eye(n)).max()
        if defect > max(tol.eps_orth, 1e-12):
            raise NotUnitary(f"unitarity defect {defect}")
        object.__setattr__(self, "data", data)

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    @staticmethod
    def identity(dim: int) -> "UnitaryMatrix":
        return UnitaryMatrix(np.eye(dim, dtype=np.complex128))

    def column(self, j: int) -> UnitVector:
        return UnitVector(self.data[:, j])

    def __setattr__(self, *a):
        raise AttributeError("UnitaryMatrix is immutable")

    def __repr__(self):
        return f"UnitaryMatrix({np.array2string(self.data, precision=4)})"


def _check_same_dim(a: UnitVector, b: UnitVector):
    if a.dim != b.dim:
        raise DimensionMismatch(f"dims {a.dim} and {b.dim} differ")


def inner_product(a: UnitVector, b: UnitVector) -> complex:
    """<a|b> = sum conj(a_k) b_k."""
    _check_same_dim(a, b)
    return complex(np.vdot(a.data, b.data))


def tensor_product(a: UnitVector, b: UnitVector) -> UnitVector:
    """Kronecker product; component (i*b.dim + j) equals a_i * b_j."""
    return UnitVector(np.kron(a.data, b.data))


def is_orthonormal_set(
    vs: Sequence[UnitVector], tol: ToleranceConfig = DEFAULT_TOL
) -> Tuple[bool, Optional[Tuple[int, int]]]:
    """Check pairwise orthonormality; returns (ok, first offending index pair).

    The witness pair (i, j) with i <= j names the first Gram entry whose
    distance from delta_ij exceeds eps_orth.
    """
    if not vs:
        return True, None
    dim = vs[0].dim
    for v in vs:
        if v.dim != dim:
            raise DimensionMismatch("mixed dimensions in vector set")
    mat = np.array([v.data for v in vs])
    gram = mat.conj() @ mat.T
    defect = np.abs(gram - np.eye(len(vs)))
    if defect.max() <= tol.eps_orth:
        return True, None
    bad = np.argwhere(defect > tol.eps_orth)
    i, j = min((int(i), int(j)) for i, j in bad)
    return False, (i, j)


def fourier_matrix(m: int) -> UnitaryMatrix:
    """The m x m discrete Fourier unitary with entries omega^(jk)/sqrt(m)."""
    if m < 1:
        raise DimensionMismatch("fourier_matrix needs m >= 1")
    j, k = np.meshgrid(np.arange(m), np.arange(m), indexing="ij")
    omega = np.exp(2j * np.pi / m)
    return UnitaryMatrix(omega ** (j * k) / np.sqrt(m))


def real_rotation_matrix(m: int) -> UnitaryMatrix:
    """A real orthogonal m x m matrix with no computational-basis column.

    Used where conjugation symmetry matters (self-orthogonality fills):
    a real rotation commutes with entrywise conjugation.  The DCT-II matrix
    is orthogonal, has a constant first row, and every column keeps at least
    two components of non-negligible modulus for m >= 2.
    """
    if m < 1:
        raise DimensionMismatch("real_rotation_matrix needs m >= 1")
    if m == 1:
        return UnitaryMatrix.identity(1)
    k = np.arange(m)[:, None]
    n = np.arange(m)[None, :]
    mat = np.sqrt(2.0 / m) * np.cos(np.pi * (2 * n + 1) * k / (2 * m))
    mat[0, :] = 1.0 / np.sqrt(m)
    return UnitaryMatrix(mat)


def direct_sum_identity(u: UnitaryMatrix, k: int) -> UnitaryMatrix:
    """Block-diagonal I_k (+) u."""
    if k < 0:
        raise DimensionMismatch("identity block size must be non-negative")
    n = k + u.dim
    out = np.eye(n, dtype=np.complex128)
    out[k:, k:] = u.data
    return UnitaryMatrix(out)


def equal_up_to_phase(
    a: UnitVector, b: UnitVector, tol: ToleranceConfig = DEFAULT_TOL
) -> bool:
    """True iff |<a|b>| >= 1 - eps_phase."""
    _check_same_dim(a, b)
    return abs(np.vdot(a.data, b.data)) >= 1.0 - tol.eps_phase


def apply_unitary(u: UnitaryMatrix, a: UnitVector) -> UnitVector:
    if u.dim != a.dim:
        raise DimensionMismatch(f"dims {u.dim} and {a.dim} differ")
    return UnitVector(u.data @ a.data)


def conjugate(a: UnitVector) -> UnitVector:
    """Entrywise complex conjugate."""
    return UnitVector(a.data.conj())


def conjugate_transpose(u: UnitaryMatrix) -> UnitaryMatrix:
    return UnitaryMatrix(u.data.conj().T)


def phase_canonical(a: UnitVector, tol: ToleranceConfig = DEFAULT_TOL) -> UnitVector:
    """Scale so the first component of modulus > eps_phase is real positive.

    Gives a deterministic representative of the global-phase class, used for
    hashing and serialization stability.
    """
    for x in a.data:
        if abs(x) > tol.eps_phase:
            return UnitVector(a.data * (x.conjugate() / abs(x)))
    raise NotUnit("vector has no component above the phase threshold")


def orthonormal_basis_check(vs: Iterable[UnitVector], tol: ToleranceConfig = DEFAULT_TOL):
    """Raise BasisNotOrthonormal unless vs is an orthonormal set."""
    vs = list(vs)
    ok, witness = is_orthonormal_set(vs, tol)
    if not ok:
        raise BasisNotOrthonormal(f"offending pair {witness}")
    return vs
