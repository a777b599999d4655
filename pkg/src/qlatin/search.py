"""Deterministic backtracking searches for classical designs.

Two engines:

* a generic cell-wise backtracker over (holey) Latin squares with optional
  idempotency and orthogonality side constraints (fixed partner squares,
  the transpose, or the (3,2,1)-conjugate), using minimum-remaining-values
  ordering with lexicographic tie-breaks so results are reproducible;

* a cyclic starter search for incomplete self-orthogonal squares and
  (3,2,1)-conjugate orthogonal squares: the square is m-cyclic on the finite
  symbols Z_m with n extra symbols on prescribed diagonals and cyclic
  borders, so the search runs over small starter vectors instead of full
  grids.  Row, column and pair-coverage conditions reduce to difference
  conditions modulo m.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from itertools import permutations
from typing import List, Optional, Sequence, Tuple, Union

from .classical import (
    HoleyLatinSquare,
    HoleySpec,
    LatinSquare,
    verify_coils,
    verify_holey_latin_square,
    verify_holey_orthogonal_pair,
)
from .errors import InvalidTemplate, NotFound


@dataclass(frozen=True)
class SearchTemplate:
    """Constraints for the generic backtracker.

    ``orthogonal_to`` entries are fixed LatinSquare partners;
    ``self_orthogonal`` adds the dynamic transpose constraint and
    ``conjugate_orthogonal_321`` the dynamic (3,2,1)-conjugate constraint.
    """

    order: int
    holes: Tuple[Tuple[int, ...], ...] = ()
    idempotent: bool = False
    self_orthogonal: bool = False
    conjugate_orthogonal_321: bool = False
    orthogonal_to: Tuple[LatinSquare, ...] = ()
    budget: float = 10.0

    def __post_init__(self):
        if self.order < 1:
            raise InvalidTemplate("order must be positive")
        for L in self.orthogonal_to:
            if L.order != self.order:
                raise InvalidTemplate("partner order mismatch")


class _Budget:
    def __init__(self, seconds: float):
        self.deadline = time.monotonic() + seconds

    def check(self):
        if time.monotonic() > self.deadline:
            raise NotFound("budget-exhausted")


def search_design(template: SearchTemplate) -> Union[LatinSquare, HoleyLatinSquare]:
    """Find the first (in deterministic order) square matching the template.

    Raises NotFound("proven-infeasible") when the space is exhausted and
    NotFound("budget-exhausted") when the time budget runs out first.
    """
    v = template.order
    spec = HoleySpec(v, template.holes) if template.holes else None
    hole_idx = [spec.hole_of(s) if spec else -1 for s in range(v)]
    budget = _Budget(template.budget)

    grid: List[List[Optional[int]]] = [[None] * v for _ in range(v)]
    row_used = [0] * v
    col_used = [0] * v
    # symbol s may sit in row (or column) i only when i and s are not in the
    # same hole
    allowed = [
        [hole_idx[i] < 0 or hole_idx[i] != hole_idx[s] for s in range(v)]
        for i in range(v)
    ]
    pair_used_fixed = [0] * len(template.orthogonal_to)
    pair_used_t = 0  # transpose superimposition pairs, bitmask over v*v
    pair_used_c = 0  # (3,2,1)-conjugate superimposition pairs
    colpos: List[List[Optional[int]]] = [[None] * v for _ in range(v)]

    cells = [
        (i, j)
        for i in range(v)
        for j in range(v)
        if not (hole_idx[i] >= 0 and hole_idx[i] == hole_idx[j])
    ]

    def assign(i, j, s):
        grid[i][j] = s
        row_used[i] |= 1 << s
        col_used[j] |= 1 << s
        colpos[j][s] = i

    def unassign(i, j, s):
        grid[i][j] = None
        row_used[i] &= ~(1 << s)
        col_used[j] &= ~(1 << s)
        colpos[j][s] = None

    def side_constraints_pop(undos):
        nonlocal pair_used_t, pair_used_c
        for kind, t, bit in reversed(undos):
            if kind == "f":
                pair_used_fixed[t] &= ~bit
            elif kind == "t":
                pair_used_t &= ~bit
            else:
                pair_used_c &= ~bit

    def side_constraints_push(i, j, s):
        """Record the superimposition pairs created by grid[i][j] = s.

        Returns the undo list, or None when a pair would repeat.
        """
        nonlocal pair_used_t, pair_used_c
        undos = []
        for t, G in enumerate(template.orthogonal_to):
            bit = 1 << (s * v + G.grid[i][j])
            if pair_used_fixed[t] & bit:
                side_constraints_pop(undos)
                return None
            pair_used_fixed[t] |= bit
            undos.append(("f", t, bit))
        if template.self_orthogonal:
            partner = grid[j][i]
            if partner is not None:
                bits = 1 << (s * v + partner)
                if i != j:
                    b2 = 1 << (partner * v + s)
                    if bits & b2:
                        side_constraints_pop(undos)
                        return None
                    bits |= b2
                if pair_used_t & bits:
                    side_constraints_pop(undos)
                    return None
                pair_used_t |= bits
                undos.append(("t", 0, bits))
        if template.conjugate_orthogonal_321:
            # conjugate cell (a, c) holds b exactly when grid[b][c] == a, so
            # the pair at (i, j) is (s, r) with grid[r][j] == i, and the new
            # triple settles the pair (grid[s][j], i) at conjugate cell (s, j)
            bits = 0
            r = colpos[j][i]
            if r is not None:
                bits = 1 << (s * v + r)
            if s != i:
                u = grid[s][j]
                if u is not None:
                    b2 = 1 << (u * v + i)
                    if bits & b2:
                        side_constraints_pop(undos)
                        return None
                    bits |= b2
            if bits:
                if pair_used_c & bits:
                    side_constraints_pop(undos)
                    return None
                pair_used_c |= bits
                undos.append(("c", 0, bits))
        return undos

    if template.idempotent:
        for i in range(v):
            if hole_idx[i] < 0:
                assign(i, i, i)
                if side_constraints_push(i, i, i) is None:
                    raise NotFound("proven-infeasible", "diagonal pair clash")
        cells = [(i, j) for (i, j) in cells if i != j]

    def candidates(i, j):
        out = []
        for s in range(v):
            m = 1 << s
            if row_used[i] & m or col_used[j] & m:
                continue
            if not (allowed[i][s] and allowed[j][s]):
                continue
            out.append(s)
        return out

    def pick_cell(remaining):
        best, best_c = None, None
        for (i, j) in remaining:
            c = candidates(i, j)
            if best_c is None or len(c) < len(best_c):
                best, best_c = (i, j), c
                if not c:
                    break
        return best, best_c

    solution: List[Optional[List[List[Optional[int]]]]] = [None]

    def dfs(remaining):
        budget.check()
        if not remaining:
            solution[0] = [row[:] for row in grid]
            return True
        cell, cands = pick_cell(remaining)
        rest = [c for c in remaining if c != cell]
        i, j = cell
        for s in cands:
            assign(i, j, s)
            undos = side_constraints_push(i, j, s)
            if undos is not None:
                if dfs(rest):
                    return True
                side_constraints_pop(undos)
            unassign(i, j, s)
        return False

    if not dfs(cells):
        raise NotFound("proven-infeasible")
    sol = solution[0]
    if spec is None:
        return LatinSquare(sol)
    return HoleyLatinSquare(spec, sol)


# ---------------------------------------------------------------------------
# exhaustive orthogonal-pair search (settles small feasibility questions)


def search_mols_pair(v: int, budget: float = 300.0) -> Tuple[LatinSquare, LatinSquare]:
    """Find a pair of orthogonal Latin squares of order v, or prove none
    exists by exhausting reduced first squares.

    Any orthogonal pair maps, under simultaneous row and column permutations
    plus per-square symbol permutations, to a pair whose first square is
    reduced (natural first row and first column) and whose second square has
    natural first row; exhausting that class is therefore a proof of
    nonexistence.
    """
    bud = _Budget(budget)
    grid1: List[List[Optional[int]]] = [[None] * v for _ in range(v)]
    row1 = [0] * v
    col1 = [0] * v
    for j in range(v):
        grid1[0][j] = j
        row1[0] |= 1 << j
        col1[j] |= 1 << j
    for i in range(1, v):
        grid1[i][0] = i
        row1[i] |= 1 << i
        col1[0] |= 1 << i
    cells1 = [(i, j) for i in range(1, v) for j in range(1, v)]

    result: List[Optional[Tuple[LatinSquare, LatinSquare]]] = [None]

    def complete_second() -> bool:
        grid2: List[List[Optional[int]]] = [[None] * v for _ in range(v)]
        row2 = [0] * v
        col2 = [0] * v
        pair = [0]
        for j in range(v):
            grid2[0][j] = j
            row2[0] |= 1 << j
            col2[j] |= 1 << j
            pair[0] |= 1 << (grid1[0][j] * v + j)
        cells2 = [(i, j) for i in range(1, v) for j in range(v)]

        def dfs2(idx):
            bud.check()
            if idx == len(cells2):
                result[0] = (
                    LatinSquare([r[:] for r in grid1]),
                    LatinSquare([r[:] for r in grid2]),
                )
                return True
            i, j = cells2[idx]
            a = grid1[i][j]
            for s in range(v):
                m = 1 << s
                if row2[i] & m or col2[j] & m:
                    continue
                pb = 1 << (a * v + s)
                if pair[0] & pb:
                    continue
                grid2[i][j] = s
                row2[i] |= m
                col2[j] |= m
                pair[0] |= pb
                if dfs2(idx + 1):
                    return True
                grid2[i][j] = None
                row2[i] &= ~m
                col2[j] &= ~m
                pair[0] &= ~pb
            return False

        return dfs2(0)

    def dfs1(idx):
        bud.check()
        if idx == len(cells1):
            return complete_second()
        i, j = cells1[idx]
        for s in range(v):
            m = 1 << s
            if row1[i] & m or col1[j] & m:
                continue
            grid1[i][j] = s
            row1[i] |= m
            col1[j] |= m
            if dfs1(idx + 1):
                return True
            grid1[i][j] = None
            row1[i] &= ~m
            col1[j] &= ~m
        return False

    if dfs1(0):
        return result[0]  # type: ignore[return-value]
    raise NotFound("proven-infeasible", f"no orthogonal pair of order {v}")


# ---------------------------------------------------------------------------
# cyclic starter search


def _instantiate_cyclic(
    m: int,
    n: int,
    r: Sequence[Optional[int]],
    inf_at: Sequence[int],
    c: Sequence[int],
    b: Sequence[int],
) -> HoleyLatinSquare:
    """Build the full square from starters.

    r[d] is the finite starter on diagonal d (None where an extra symbol
    sits); inf_at[s] is the diagonal carrying symbol m+s; c[s] and b[s]
    start the cyclic border column and row for extra index s.
    """
    v = m + n
    grid: List[List[Optional[int]]] = [[None] * v for _ in range(v)]
    inf_of = {d: s for s, d in enumerate(inf_at)}
    for i in range(m):
        for d in range(m):
            j = (i + d) % m
            if d in inf_of:
                grid[i][j] = m + inf_of[d]
            else:
                grid[i][j] = (r[d] + i) % m
        for s in range(n):
            grid[i][m + s] = (c[s] + i) % m
    for s in range(n):
        for j in range(m):
            grid[m + s][j] = (b[s] + j) % m
    spec = HoleySpec(v, [tuple(range(m, v))])
    return HoleyLatinSquare(spec, grid)


def _extra_symbol_placements(m: int, n: int) -> List[Tuple[int, ...]]:
    """Sets of n nonzero diagonals, no two opposite, none self-opposite.

    Placing an extra symbol on diagonal d of the cyclic part forces the
    paired coverage cell on diagonal -d to stay finite, hence the
    opposition constraints.
    """
    pairs = []
    for d in range(1, m // 2 + 1):
        if (m - d) % m == d:
            continue
        pairs.append((d, m - d))
    out: List[Tuple[int, ...]] = []

    def rec(k, chosen):
        if len(chosen) == n:
            out.append(tuple(sorted(chosen)))
            return
        if k == len(pairs) or len(chosen) + (len(pairs) - k) < n:
            return
        for d in pairs[k]:
            chosen.append(d)
            rec(k + 1, chosen)
            chosen.pop()
        rec(k + 1, chosen)

    rec(0, [])
    return sorted(set(out))


def search_cyclic_isols(v: int, n: int, budget: float = 60.0) -> HoleyLatinSquare:
    """Incomplete self-orthogonal LS(v) with an order-n hole at the lower
    right, built from an m-cyclic starter with m = v - n.

    Pair coverage against the transpose reduces to a difference condition:
    the values r[d] - r[-d] - d over both-finite diagonals, together with
    +-(c_s - b_s) over the border, must cover Z_m without repetition.
    """
    m = v - n
    if m <= 0 or 2 * n + (0 if m % 2 else 1) >= m + 1:
        raise NotFound("proven-infeasible", "hole too large for cyclic form")
    bud = _Budget(budget)

    for inf_at in _extra_symbol_placements(m, n):
        iset = set(inf_at)
        finite = [d for d in range(m) if d not in iset]
        # keep opposite diagonals adjacent for early difference pruning
        finite.sort(key=lambda d: (min(d, (m - d) % m), d))
        r: List[Optional[int]] = [None] * m
        used_row = [False] * m
        used_col = [False] * m
        used_diff = [False] * m

        def diffs_of(d) -> Optional[List[int]]:
            """Coverage differences settled by r[d], or None if illegal."""
            opp = (m - d) % m
            if opp == d:
                # a self-opposite diagonal covers its own difference class
                return [d]
            if opp in iset or r[opp] is None:
                return []
            delta = (r[d] - r[opp] - d) % m
            ndelta = (-delta) % m
            if delta == ndelta:
                return None
            return [delta, ndelta]

        def finish() -> Optional[HoleyLatinSquare]:
            cset = sorted(x for x in range(m) if not used_row[x])
            bset = sorted(x for x in range(m) if not used_col[x])
            missing = {x for x in range(m) if not used_diff[x]}
            for perm in permutations(bset):
                seen = set()
                ok = True
                for cs, bs in zip(cset, perm):
                    d1 = (cs - bs) % m
                    d2 = (bs - cs) % m
                    if d1 == d2 or d1 not in missing or d1 in seen or d2 in seen:
                        ok = False
                        break
                    seen.update((d1, d2))
                if not ok:
                    continue
                H = _instantiate_cyclic(m, n, r, sorted(iset), cset, list(perm))
                good, _ = verify_holey_latin_square(H)
                if good and verify_holey_orthogonal_pair(H, H.transpose()):
                    return H
            return None

        def dfs(k) -> Optional[HoleyLatinSquare]:
            bud.check()
            if k == len(finite):
                return finish()
            d = finite[k]
            for val in range(m):
                if used_row[val]:
                    continue
                cv = (val - d) % m
                if used_col[cv]:
                    continue
                r[d] = val
                dd = diffs_of(d)
                if dd is not None and all(not used_diff[x] for x in dd):
                    used_row[val] = True
                    used_col[cv] = True
                    for x in dd:
                        used_diff[x] = True
                    res = dfs(k + 1)
                    if res is not None:
                        return res
                    for x in dd:
                        used_diff[x] = False
                    used_col[cv] = False
                    used_row[val] = False
                r[d] = None
            return None

        res = dfs(0)
        if res is not None:
            return res
    raise NotFound("proven-infeasible", f"no cyclic starter for ISOLS({v};{n})")


def search_cyclic_coils(v: int, n: int, budget: float = 120.0) -> HoleyLatinSquare:
    """Idempotent incomplete LS(v) with an order-n lower-right hole,
    orthogonal to its (3,2,1)-conjugate, from an m-cyclic starter."""
    m = v - n
    if m <= 0 or 2 * n + (0 if m % 2 else 1) >= m + 1:
        raise NotFound("proven-infeasible", "hole too large for cyclic form")
    bud = _Budget(budget)

    for inf_at in _extra_symbol_placements(m, n):
        iset = set(inf_at)
        slots = sorted(d for d in range(1, m) if d not in iset)
        finite = [0] + slots
        r: List[Optional[int]] = [None] * m
        r[0] = 0  # idempotent cyclic part
        used_row = [False] * m
        used_row[0] = True
        used_col = [False] * m
        used_col[0] = True

        def finish() -> Optional[HoleyLatinSquare]:
            cset = sorted(x for x in range(m) if not used_row[x])
            bset = sorted(x for x in range(m) if not used_col[x])
            # every border row starter must point back at a finite diagonal
            if any((-bv) % m in iset for bv in bset):
                return None
            colsrc = {(r[d] - d) % m: d for d in finite}
            bneg = {(-bv) % m for bv in bset}
            base = []
            for e in finite:
                if e in bneg:
                    continue
                d_e = colsrc.get((-e) % m)
                if d_e is None:
                    return None
                base.append((r[e] - e + d_e) % m)
            base += [(2 * cs) % m for cs in cset]
            if len(set(base)) != len(base) or len(base) + n != m:
                return None
            rest = set(range(m)) - set(base)
            for perm in permutations(sorted(iset)):
                got = {(bv + dv) % m for bv, dv in zip(bset, perm)}
                if len(got) == n and got == rest:
                    H = _instantiate_cyclic(m, n, r, list(perm), cset, bset)
                    if verify_coils(H, (3, 2, 1)):
                        return H
            return None

        def dfs(k) -> Optional[HoleyLatinSquare]:
            bud.check()
            if k == len(slots):
                return finish()
            d = slots[k]
            for val in range(m):
                if used_row[val]:
                    continue
                cv = (val - d) % m
                if used_col[cv]:
                    continue
                r[d] = val
                used_row[val] = True
                used_col[cv] = True
                res = dfs(k + 1)
                if res is not None:
                    return res
                used_col[cv] = False
                used_row[val] = False
                r[d] = None
            return None

        res = dfs(0)
        if res is not None:
            return res
    raise NotFound("proven-infeasible", f"no cyclic starter for COILS({v};{n})")
