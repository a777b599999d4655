"""Quantum Latin squares and every verification predicate on them.

A QLS(v) is a v x v grid of unit vectors in C^v whose rows and columns are
orthonormal bases.  Orthogonality of two squares means the cellwise tensor
products form an orthonormal basis of C^v (x) C^v, checked here through the
factorized criterion: the elementwise product of the two v^2 x v^2 Gram
matrices must be the identity.  Holey squares leave hole-aligned cells
empty and their filled cells must cover the complement of the hole
subspaces.  Non-classicality is decided by the cardinality criterion: a
square whose grid vectors fall into more than v phase-equality classes
cannot be relabeled onto a single orthonormal basis, while exactly v
classes force one basis (each row already contains v mutually orthogonal
entries), which is the classical case.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .classical import HoleyLatinSquare, LatinSquare
from .errors import (
    BasisNotOrthonormal,
    DimensionMismatch,
    NotAQls,
    ShapeError,
    SpecMismatch,
    ToleranceAmbiguity,
)
from .numerics import (
    DEFAULT_TOL,
    ToleranceConfig,
    UnitVector,
    is_orthonormal_set,
)

Check = Tuple[str, bool, Optional[str]]


@dataclass(frozen=True)
class VerificationReport:
    """Named check outcomes plus the tolerance they were decided at."""

    checks: Tuple[Check, ...]
    tol: ToleranceConfig

    def __post_init__(self):
        if not self.checks:
            raise ShapeError("empty verification report")

    @property
    def passed(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    def witness(self) -> Optional[str]:
        for name, ok, w in self.checks:
            if not ok:
                return f"{name}: {w}"
        return None


def _report(checks: Sequence[Check], tol: ToleranceConfig) -> VerificationReport:
    return VerificationReport(tuple(checks), tol)


class QuantumLatinSquare:
    """Grid stored as a (v, v, v) complex array; entry [i, j] is the cell
    vector.  Immutable after construction."""

    __slots__ = ("array",)

    def __init__(self, grid):
        if isinstance(grid, np.ndarray):
            arr = np.asarray(grid, dtype=np.complex128)
        else:
            rows = list(grid)
            arr = np.array(
                [[cell.data if isinstance(cell, UnitVector) else cell for cell in row] for row in rows],
                dtype=np.complex128,
            )
        if arr.ndim != 3 or arr.shape[0] != arr.shape[1] or arr.shape[1] != arr.shape[2]:
            raise ShapeError(f"expected (v, v, v) grid, got {arr.shape}")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "array", arr)

    @property
    def dim(self) -> int:
        return self.array.shape[0]

    def cell(self, i: int, j: int) -> UnitVector:
        return UnitVector(self.array[i, j])

    def __setattr__(self, *a):
        raise AttributeError("QuantumLatinSquare is immutable")


class HoleyQuantumLatinSquare:
    """Holey quantum square with coordinate-aligned hole subspaces.

    Hole s spans the computational coordinates ``holes[s]``; a cell is empty
    exactly when its row and column index lie in the same hole.  Rows and
    columns are labeled by the computational basis.
    """

    __slots__ = ("array", "holes", "filled")

    def __init__(self, grid, holes: Sequence[Sequence[int]]):
        if isinstance(grid, np.ndarray):
            raise ShapeError("pass a nested list so empty cells can be None")
        rows = list(grid)
        v = len(rows)
        arr = np.zeros((v, v, v), dtype=np.complex128)
        filled = np.zeros((v, v), dtype=bool)
        for i, row in enumerate(rows):
            if len(row) != v:
                raise ShapeError("grid is not square")
            for j, cell in enumerate(row):
                if cell is None:
                    continue
                data = cell.data if isinstance(cell, UnitVector) else np.asarray(cell)
                if data.shape != (v,):
                    raise DimensionMismatch(f"cell ({i},{j}) has dim {data.shape}")
                arr[i, j] = data
                filled[i, j] = True
        hs = tuple(tuple(sorted(int(x) for x in h)) for h in holes)
        seen = set()
        for h in hs:
            if not h:
                raise SpecMismatch("empty hole")
            for x in h:
                if x in seen or not 0 <= x < v:
                    raise SpecMismatch(f"hole coordinate {x} repeated or out of range")
                seen.add(x)
        arr.setflags(write=False)
        filled.setflags(write=False)
        object.__setattr__(self, "array", arr)
        object.__setattr__(self, "holes", hs)
        object.__setattr__(self, "filled", filled)

    @property
    def dim(self) -> int:
        return self.array.shape[0]

    def hole_of(self, coord: int) -> int:
        for k, h in enumerate(self.holes):
            if coord in h:
                return k
        return -1

    def __setattr__(self, *a):
        raise AttributeError("HoleyQuantumLatinSquare is immutable")


# ---------------------------------------------------------------------------
# verifiers


def verify_qls(Q: QuantumLatinSquare, tol: ToleranceConfig = DEFAULT_TOL) -> VerificationReport:
    """Every row and every column must be an orthonormal basis of C^v."""
    v = Q.dim
    checks: List[Check] = []
    a = Q.array
    eye = np.eye(v)
    for i in range(v):
        gram = a[i].conj() @ a[i].T
        defect = np.abs(gram - eye)
        ok = bool(defect.max() <= tol.eps_orth)
        checks.append(
            ("row-orthonormal", ok, None if ok else f"row {i}, defect {defect.max():.3e}")
        )
        if not ok:
            break
    else:
        for j in range(v):
            col = a[:, j, :]
            gram = col.conj() @ col.T
            defect = np.abs(gram - eye)
            ok = bool(defect.max() <= tol.eps_orth)
            checks.append(
                ("column-orthonormal", ok, None if ok else f"column {j}, defect {defect.max():.3e}")
            )
            if not ok:
                break
    return _report(checks, tol)


def _flat_gram(a: np.ndarray) -> np.ndarray:
    v = a.shape[0]
    flat = a.reshape(v * v, v)
    return flat.conj() @ flat.T


def verify_orthogonal_pair(
    Q1: QuantumLatinSquare, Q2: QuantumLatinSquare, tol: ToleranceConfig = DEFAULT_TOL
) -> VerificationReport:
    """Factorized orthogonality: with G1, G2 the v^2 x v^2 Gram matrices of
    the two grids, the elementwise product G1 * G2 must equal the identity,
    which is exactly orthonormality of the cellwise tensor products."""
    if Q1.dim != Q2.dim:
        raise ShapeError(f"dims {Q1.dim} and {Q2.dim} differ")
    prod = _flat_gram(Q1.array) * _flat_gram(Q2.array)
    defect = np.abs(prod - np.eye(prod.shape[0]))
    ok = bool(defect.max() <= tol.eps_orth)
    witness = None
    if not ok:
        v = Q1.dim
        i, j = np.unravel_index(int(defect.argmax()), defect.shape)
        witness = f"cells ({i // v},{i % v}) vs ({j // v},{j % v}), defect {defect.max():.3e}"
    return _report([("pair-orthogonal", ok, witness)], tol)


def verify_moqls(
    squares: Sequence[QuantumLatinSquare], tol: ToleranceConfig = DEFAULT_TOL
) -> VerificationReport:
    checks: List[Check] = []
    for idx, Q in enumerate(squares):
        rep = verify_qls(Q, tol)
        checks.append((f"square-{idx}-qls", rep.passed, rep.witness()))
    for a in range(len(squares)):
        for b in range(a + 1, len(squares)):
            rep = verify_orthogonal_pair(squares[a], squares[b], tol)
            checks.append((f"pair-{a}-{b}", rep.passed, rep.witness()))
    if not checks:
        checks.append(("empty-set", True, None))
    return _report(checks, tol)


def verify_idempotent_qls(
    Q: QuantumLatinSquare, tol: ToleranceConfig = DEFAULT_TOL
) -> VerificationReport:
    diag = [UnitVector(Q.array[i, i]) for i in range(Q.dim)]
    ok, witness = is_orthonormal_set(diag, tol)
    return _report(
        [("diagonal-orthonormal", ok, None if ok else f"cells {witness}")], tol
    )


def conjugate_transpose_qls(Q: QuantumLatinSquare) -> QuantumLatinSquare:
    """Entrywise conjugate of the transposed grid; an involution."""
    return QuantumLatinSquare(np.conj(np.swapaxes(Q.array, 0, 1)))


def verify_soqls(Q: QuantumLatinSquare, tol: ToleranceConfig = DEFAULT_TOL) -> VerificationReport:
    """Self-orthogonality: orthogonal to the conjugate transpose."""
    base = verify_qls(Q, tol)
    if not base.passed:
        return base
    rep = verify_orthogonal_pair(Q, conjugate_transpose_qls(Q), tol)
    return _report(base.checks + rep.checks, tol)


def verify_holey_qls(
    H: HoleyQuantumLatinSquare, tol: ToleranceConfig = DEFAULT_TOL
) -> VerificationReport:
    """Holey axioms: hole-aligned cells empty, all other cells filled, and
    each row/column an orthonormal basis of the right subspace (the full
    space, or its hole-complement for rows labeled inside a hole)."""
    v = H.dim
    checks: List[Check] = []
    hole_idx = [H.hole_of(x) for x in range(v)]
    for i in range(v):
        for j in range(v):
            in_hole = hole_idx[i] >= 0 and hole_idx[i] == hole_idx[j]
            if in_hole and H.filled[i, j]:
                checks.append(("hole-cell-empty", False, f"cell ({i},{j}) filled"))
                return _report(checks, tol)
            if not in_hole and not H.filled[i, j]:
                checks.append(("cell-filled", False, f"cell ({i},{j}) empty"))
                return _report(checks, tol)
    checks.append(("hole-pattern", True, None))
    for i in range(v):
        k = hole_idx[i]
        expect = v - (len(H.holes[k]) if k >= 0 else 0)
        vecs = H.array[i][H.filled[i]]
        ok = len(vecs) == expect
        if ok:
            gram = vecs.conj() @ vecs.T
            ok = bool(np.abs(gram - np.eye(len(vecs))).max() <= tol.eps_orth)
        if ok and k >= 0:
            # the row must avoid the hole subspace entirely
            ok = bool(np.abs(vecs[:, list(H.holes[k])]).max() <= tol.eps_orth)
        checks.append(("row-basis", ok, None if ok else f"row {i}"))
        if not ok:
            return _report(checks, tol)
        cvecs = H.array[:, i, :][H.filled[:, i]]
        ok = len(cvecs) == expect
        if ok:
            gram = cvecs.conj() @ cvecs.T
            ok = bool(np.abs(gram - np.eye(len(cvecs))).max() <= tol.eps_orth)
        if ok and k >= 0:
            ok = bool(np.abs(cvecs[:, list(H.holes[k])]).max() <= tol.eps_orth)
        checks.append(("column-basis", ok, None if ok else f"column {i}"))
        if not ok:
            return _report(checks, tol)
    return _report(checks, tol)


def verify_holey_orthogonal(
    H1: HoleyQuantumLatinSquare,
    H2: HoleyQuantumLatinSquare,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> VerificationReport:
    """The filled cellwise tensor products must be orthonormal, count
    v^2 - sum(hole dims squared), and be orthogonal to every hole-product
    basis vector."""
    if H1.dim != H2.dim or H1.holes != H2.holes:
        raise SpecMismatch("hole structures differ")
    if not np.array_equal(H1.filled, H2.filled):
        raise SpecMismatch("filled-cell patterns differ")
    v = H1.dim
    tensors = []
    for i in range(v):
        for j in range(v):
            if H1.filled[i, j]:
                tensors.append(np.kron(H1.array[i, j], H2.array[i, j]))
    mat = np.array(tensors)
    expect = v * v - sum(len(h) ** 2 for h in H1.holes)
    checks: List[Check] = [
        ("tensor-count", len(tensors) == expect, None if len(tensors) == expect else f"{len(tensors)} != {expect}")
    ]
    gram = mat.conj() @ mat.T
    defect = np.abs(gram - np.eye(len(tensors))).max()
    ok = bool(defect <= tol.eps_orth)
    checks.append(("tensor-orthonormal", ok, None if ok else f"defect {defect:.3e}"))
    # orthogonality against each hole product V_s (x) V_s
    worst = 0.0
    for h in H1.holes:
        for x in h:
            for y in h:
                col = np.abs(mat[:, x * v + y])
                worst = max(worst, float(col.max()) if len(col) else 0.0)
    ok = worst <= tol.eps_orth
    checks.append(("hole-product-orthogonal", ok, None if ok else f"overlap {worst:.3e}"))
    return _report(checks, tol)


# ---------------------------------------------------------------------------
# lifting and classification


def lift_classical(
    L: Union[LatinSquare, HoleyLatinSquare],
    basis: Optional[Sequence[UnitVector]] = None,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> Union[QuantumLatinSquare, HoleyQuantumLatinSquare]:
    """Replace symbol s by basis[s] (computational basis by default)."""
    v = L.order
    if basis is None:
        basis = [UnitVector.basis_state(v, s) for s in range(v)]
    basis = list(basis)
    if len(basis) != v:
        raise BasisNotOrthonormal(f"need {v} vectors, got {len(basis)}")
    ok, witness = is_orthonormal_set(basis, tol)
    if not ok:
        raise BasisNotOrthonormal(f"offending pair {witness}")
    if isinstance(L, LatinSquare):
        return QuantumLatinSquare(
            [[basis[L.grid[i][j]] for j in range(v)] for i in range(v)]
        )
    grid = [
        [None if L.grid[i][j] is None else basis[L.grid[i][j]] for j in range(v)]
        for i in range(v)
    ]
    return HoleyQuantumLatinSquare(grid, L.spec.holes)


def cardinality(Q: QuantumLatinSquare, tol: ToleranceConfig = DEFAULT_TOL) -> int:
    """Number of grid vectors distinct up to a global phase.

    Vectors are grouped by union-find over the phase-equality relation; a
    group containing two members whose overlap modulus sits strictly between
    the equal and orthogonal-ish regimes raises ToleranceAmbiguity instead
    of guessing.
    """
    v = Q.dim
    flat = Q.array.reshape(v * v, v)
    overlap = np.abs(flat.conj() @ flat.T)
    n = v * v
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    hi = 1.0 - tol.eps_phase
    lo = 1.0 - 10.0 * tol.eps_phase
    for i in range(n):
        for j in range(i + 1, n):
            if overlap[i, j] >= hi:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj
    # transitivity guard: members of one class must all be pairwise close
    classes = {}
    for i in range(n):
        classes.setdefault(find(i), []).append(i)
    for members in classes.values():
        for a in range(len(members)):
            for b in range(a + 1, len(members)):
                if overlap[members[a], members[b]] < lo:
                    raise ToleranceAmbiguity(
                        f"phase classes not separated at {tol.eps_phase}"
                    )
    return len(classes)


def is_nonclassical(Q: QuantumLatinSquare, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """Cardinality above v means no relabeling onto one orthonormal basis
    exists, hence the square is not equivalent to a classical lift."""
    if not verify_qls(Q, tol).passed:
        raise NotAQls("input fails the quantum Latin square axioms")
    return cardinality(Q, tol) > Q.dim


def apply_global_unitary(Q: QuantumLatinSquare, U) -> QuantumLatinSquare:
    """Apply one unitary to every cell; verdict-level invariant for all
    verifiers and for cardinality."""
    mat = U.data if hasattr(U, "data") else np.asarray(U, dtype=np.complex128)
    return QuantumLatinSquare(np.einsum("ab,ijb->ija", mat, Q.array))
