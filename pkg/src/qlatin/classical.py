"""Classical Latin-square machinery: construction and verification.

Squares are grids of integer symbols in [v].  Holey squares carry a spec
naming the pairwise-disjoint hole symbol sets; a cell is empty exactly when
its row and column indices fall in the same hole.  The hole convention
throughout: a row inside hole S_i contains the symbols S \\ S_i, every other
row contains all of S.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from .errors import (
    ArityMismatch,
    DiagonalNotTransversal,
    NoSuitableLambda,
    NotPrimePower,
    ShapeError,
    SpecMismatch,
    TooMany,
)
from .gf import field, prime_power_decomposition

Witness = Optional[Tuple[str, int, int]]


@dataclass(frozen=True)
class LatinSquare:
    """A v x v grid of symbols in [v]; validity is checked by the verifier."""

    grid: Tuple[Tuple[int, ...], ...]

    def __init__(self, grid: Iterable[Iterable[int]]):
        rows = tuple(tuple(int(x) for x in row) for row in grid)
        v = len(rows)
        if v == 0 or any(len(r) != v for r in rows):
            raise ShapeError("grid is not square")
        object.__setattr__(self, "grid", rows)

    @property
    def order(self) -> int:
        return len(self.grid)

    def __getitem__(self, ij: Tuple[int, int]) -> int:
        i, j = ij
        return self.grid[i][j]

    def transpose(self) -> "LatinSquare":
        return LatinSquare(zip(*self.grid))

    def relabel(self, sigma: Sequence[int]) -> "LatinSquare":
        """Apply the symbol permutation s -> sigma[s]."""
        return LatinSquare([[sigma[x] for x in row] for row in self.grid])


@dataclass(frozen=True)
class HoleySpec:
    """Symbol set [v] with pairwise-disjoint hole subsets."""

    order: int
    holes: Tuple[Tuple[int, ...], ...]

    def __init__(self, order: int, holes: Iterable[Iterable[int]]):
        hs = tuple(tuple(sorted(int(x) for x in h)) for h in holes)
        seen = set()
        for h in hs:
            if not h:
                raise SpecMismatch("empty hole")
            for x in h:
                if x in seen or not 0 <= x < order:
                    raise SpecMismatch(f"hole symbol {x} repeated or out of range")
                seen.add(x)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "holes", hs)

    def hole_of(self, s: int) -> int:
        """Index of the hole containing symbol s, or -1."""
        for k, h in enumerate(self.holes):
            if s in h:
                return k
        return -1


@dataclass(frozen=True)
class HoleyLatinSquare:
    """A holey Latin square; None marks an empty cell."""

    spec: HoleySpec
    grid: Tuple[Tuple[Optional[int], ...], ...]

    def __init__(self, spec: HoleySpec, grid: Iterable[Iterable[Optional[int]]]):
        rows = tuple(
            tuple(None if x is None else int(x) for x in row) for row in grid
        )
        v = spec.order
        if len(rows) != v or any(len(r) != v for r in rows):
            raise ShapeError("grid does not match spec order")
        object.__setattr__(self, "spec", spec)
        object.__setattr__(self, "grid", rows)

    @property
    def order(self) -> int:
        return self.spec.order

    def __getitem__(self, ij):
        i, j = ij
        return self.grid[i][j]

    def transpose(self) -> "HoleyLatinSquare":
        return HoleyLatinSquare(self.spec, zip(*self.grid))


ConjugatePermutation = Tuple[int, int, int]


# ---------------------------------------------------------------------------
# verification


def verify_latin_square(L: LatinSquare) -> Tuple[bool, Witness]:
    v = L.order
    want = set(range(v))
    for i, row in enumerate(L.grid):
        if set(row) != want:
            return False, ("row", i, 0)
    for j in range(v):
        if {L.grid[i][j] for i in range(v)} != want:
            return False, ("column", j, 0)
    return True, None


def verify_idempotent(L: LatinSquare) -> bool:
    return all(L.grid[i][i] == i for i in range(L.order))


def verify_orthogonal_pair(L1: LatinSquare, L2: LatinSquare) -> bool:
    if L1.order != L2.order:
        raise ShapeError("orders differ")
    v = L1.order
    pairs = {
        (L1.grid[i][j], L2.grid[i][j]) for i in range(v) for j in range(v)
    }
    return len(pairs) == v * v


def verify_mols_set(squares: Sequence[LatinSquare]) -> bool:
    for L in squares:
        ok, _ = verify_latin_square(L)
        if not ok:
            return False
    for a in range(len(squares)):
        for b in range(a + 1, len(squares)):
            if not verify_orthogonal_pair(squares[a], squares[b]):
                return False
    return True


def verify_holey_latin_square(H: HoleyLatinSquare) -> Tuple[bool, Witness]:
    spec, v = H.spec, H.order
    hole_idx = [spec.hole_of(s) for s in range(v)]
    all_syms = set(range(v))
    for i in range(v):
        for j in range(v):
            in_hole = hole_idx[i] >= 0 and hole_idx[i] == hole_idx[j]
            cell = H.grid[i][j]
            if in_hole and cell is not None:
                return False, ("filled-hole-cell", i, j)
            if not in_hole and cell is None:
                return False, ("empty-cell", i, j)
    for i in range(v):
        want = all_syms - (
            set(spec.holes[hole_idx[i]]) if hole_idx[i] >= 0 else set()
        )
        row = [x for x in H.grid[i] if x is not None]
        if len(row) != len(want) or set(row) != want:
            return False, ("row", i, 0)
        col = [H.grid[k][i] for k in range(v) if H.grid[k][i] is not None]
        if len(col) != len(want) or set(col) != want:
            return False, ("column", i, 0)
    return True, None


def _required_pairs(spec: HoleySpec) -> set:
    v = spec.order
    excluded = set()
    for h in spec.holes:
        for a in h:
            for b in h:
                excluded.add((a, b))
    return {
        (a, b) for a in range(v) for b in range(v) if (a, b) not in excluded
    }


def verify_holey_orthogonal_pair(H1: HoleyLatinSquare, H2: HoleyLatinSquare) -> bool:
    """Superimposition covers (S x S) minus hole products, exactly once."""
    if H1.spec != H2.spec:
        raise SpecMismatch("hole structures differ")
    v = H1.order
    got: List[Tuple[int, int]] = []
    for i in range(v):
        for j in range(v):
            a, b = H1.grid[i][j], H2.grid[i][j]
            if (a is None) != (b is None):
                raise SpecMismatch(f"cell ({i},{j}) filled in one square only")
            if a is not None:
                got.append((a, b))
    want = _required_pairs(H1.spec)
    return len(got) == len(want) and set(got) == want


def verify_hmols(squares: Sequence[HoleyLatinSquare]) -> bool:
    for H in squares:
        ok, _ = verify_holey_latin_square(H)
        if not ok:
            return False
    for a in range(len(squares)):
        for b in range(a + 1, len(squares)):
            if not verify_holey_orthogonal_pair(squares[a], squares[b]):
                return False
    return True


# ---------------------------------------------------------------------------
# algebraic constructions


def field_mols(q: int, t: int) -> List[LatinSquare]:
    """t MOLS of order q from L_lambda(x, y) = lambda*x + y over GF(q)."""
    if prime_power_decomposition(q) is None:
        raise NotPrimePower(f"{q} is not a prime power")
    if not 1 <= t <= q - 1:
        raise TooMany(f"need 1 <= t <= {q - 1}, got {t}")
    F = field(q)
    lams = [lam for lam in range(1, q)][:t]
    return [
        LatinSquare(
            [[F.add(F.mul(lam, x), y) for y in range(q)] for x in range(q)]
        )
        for lam in lams
    ]


def idempotentize(L: LatinSquare) -> LatinSquare:
    """Relabel symbols so the diagonal becomes i at (i, i).

    Requires the diagonal to be a transversal of the symbol set.  Orthogonality
    with a partner relabeled the same way is preserved (symbol permutations
    act independently per square).
    """
    v = L.order
    diag = [L.grid[i][i] for i in range(v)]
    if len(set(diag)) != v:
        raise DiagonalNotTransversal("diagonal repeats a symbol")
    sigma = [0] * v
    for i, s in enumerate(diag):
        sigma[s] = i
    return L.relabel(sigma)


def field_idempotent_mols(q: int, t: int) -> List[LatinSquare]:
    """t idempotent MOLS(q): field squares with lambda != -1, relabeled."""
    if prime_power_decomposition(q) is None:
        raise NotPrimePower(f"{q} is not a prime power")
    F = field(q)
    minus_one = F.neg(1)
    lams = [lam for lam in range(1, q) if lam != minus_one]
    if t > len(lams):
        raise TooMany(f"only {len(lams)} idempotent field squares at order {q}")
    out = []
    for lam in lams[:t]:
        L = LatinSquare(
            [[F.add(F.mul(lam, x), y) for y in range(q)] for x in range(q)]
        )
        out.append(idempotentize(L))
    return out


def macneish_product(
    As: Sequence[LatinSquare], Bs: Sequence[LatinSquare]
) -> List[LatinSquare]:
    """Componentwise product t-MOLS(m) x t-MOLS(n) -> t-MOLS(m*n).

    Each B factor is first relabeled so B(0, 0) = 0; the flattening
    (x, y) -> x*n + y then puts an aligned sub-t-MOLS(m) on the index set
    {x*n : x in [m]} with the same symbol set, ready for subsquare emptying.
    """
    if len(As) != len(Bs):
        raise ArityMismatch(f"{len(As)} vs {len(Bs)} squares")
    out = []
    for A, B in zip(As, Bs):
        m, n = A.order, B.order
        b00 = B.grid[0][0]
        sigma = list(range(n))
        sigma[b00], sigma[0] = 0, b00
        B = B.relabel(sigma)
        grid = [
            [
                A.grid[x1][x2] * n + B.grid[y1][y2]
                for x2 in range(m)
                for y2 in range(n)
            ]
            for x1 in range(m)
            for y1 in range(n)
        ]
        out.append(LatinSquare(grid))
    return out


def subsquare_indices(m: int, n: int) -> List[int]:
    """Row/column/symbol indices of the aligned order-m MacNeish subsquare."""
    return [x * n for x in range(m)]


def relocate_hole(
    L: Union[LatinSquare, HoleyLatinSquare], indices: Sequence[int]
) -> Union[LatinSquare, HoleyLatinSquare]:
    """Conjugate rows, columns and symbols by one permutation moving
    ``indices`` to the tail v-k..v-1 (others keep relative order)."""
    v = L.order
    idx = sorted(indices)
    others = [x for x in range(v) if x not in set(idx)]
    pi = [0] * v
    for new, old in enumerate(others + idx):
        pi[old] = new
    if isinstance(L, LatinSquare):
        grid = [[0] * v for _ in range(v)]
        for i in range(v):
            for j in range(v):
                grid[pi[i]][pi[j]] = pi[L.grid[i][j]]
        return LatinSquare(grid)
    grid = [[None] * v for _ in range(v)]
    for i in range(v):
        for j in range(v):
            x = L.grid[i][j]
            grid[pi[i]][pi[j]] = None if x is None else pi[x]
    holes = [tuple(sorted(pi[x] for x in h)) for h in L.spec.holes]
    return HoleyLatinSquare(HoleySpec(v, holes), grid)


def empty_subsquare(L: LatinSquare, indices: Sequence[int]) -> HoleyLatinSquare:
    """Empty the aligned subsquare on ``indices`` (rows, columns and symbols
    coincide there), producing an incomplete Latin square with one hole."""
    v = L.order
    moved = relocate_hole(L, indices)
    k = len(indices)
    hole = tuple(range(v - k, v))
    grid = [
        [
            None if (i in hole and j in hole) else moved.grid[i][j]
            for j in range(v)
        ]
        for i in range(v)
    ]
    return HoleyLatinSquare(HoleySpec(v, [hole]), grid)


def sols_from_field(q: int) -> LatinSquare:
    """Self-orthogonal LS(q): L(x,y) = lambda*x + (1-lambda)*y over GF(q)."""
    if prime_power_decomposition(q) is None:
        raise NotPrimePower(f"{q} is not a prime power")
    F = field(q)
    for lam in range(2, q):
        if lam in (0, 1):
            continue
        if F.add(lam, lam) == 1:
            continue
        one_minus = F.sub(1, lam)
        L = LatinSquare(
            [
                [F.add(F.mul(lam, x), F.mul(one_minus, y)) for y in range(q)]
                for x in range(q)
            ]
        )
        if verify_orthogonal_pair(L, L.transpose()):
            return L
    raise NoSuitableLambda(f"no self-orthogonality witness in GF({q})")


def conjugate_square(L: LatinSquare, p: ConjugatePermutation) -> LatinSquare:
    """The (i,j,k)-conjugate via the triple-set permutation.

    Each triple (row, col, sym) of L is permuted so coordinate p[0] becomes
    the row, p[1] the column and p[2] the symbol of the result.
    """
    if sorted(p) != [1, 2, 3]:
        raise ShapeError(f"{p} is not a permutation of (1,2,3)")
    v = L.order
    grid = [[None] * v for _ in range(v)]
    for r in range(v):
        for c in range(v):
            t = (r, c, L.grid[r][c])
            nr, nc, ns = t[p[0] - 1], t[p[1] - 1], t[p[2] - 1]
            grid[nr][nc] = ns
    if any(x is None for row in grid for x in row):
        raise ShapeError("input was not a Latin square")
    return LatinSquare(grid)


def conjugate_holey(
    H: HoleyLatinSquare, p: ConjugatePermutation
) -> HoleyLatinSquare:
    """Conjugate of a holey square via its filled triples."""
    if sorted(p) != [1, 2, 3]:
        raise ShapeError(f"{p} is not a permutation of (1,2,3)")
    v = H.order
    grid: List[List[Optional[int]]] = [[None] * v for _ in range(v)]
    for r in range(v):
        for c in range(v):
            s = H.grid[r][c]
            if s is None:
                continue
            t = (r, c, s)
            nr, nc, ns = t[p[0] - 1], t[p[1] - 1], t[p[2] - 1]
            if grid[nr][nc] is not None:
                raise ShapeError(f"conjugate collides at ({nr},{nc})")
            grid[nr][nc] = ns
    return HoleyLatinSquare(H.spec, grid)


def verify_coils(H: HoleyLatinSquare, p: ConjugatePermutation) -> bool:
    """Idempotent incomplete square orthogonal to its (i,j,k)-conjugate.

    Requires a single hole; idempotency is checked outside the hole; the
    conjugate must reproduce the same hole pattern for the superimposition
    to be well defined.
    """
    if len(H.spec.holes) != 1:
        raise ShapeError("COILS check needs exactly one hole")
    ok, _ = verify_holey_latin_square(H)
    if not ok:
        return False
    hole = set(H.spec.holes[0])
    for i in range(H.order):
        if i not in hole and H.grid[i][i] != i:
            return False
    try:
        M = conjugate_holey(H, p)
    except ShapeError:
        return False
    for i in range(H.order):
        for j in range(H.order):
            if (H.grid[i][j] is None) != (M.grid[i][j] is None):
                raise ShapeError("conjugate hole pattern misaligned")
    return verify_holey_orthogonal_pair(H, M)
