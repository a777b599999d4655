"""Pairwise balanced designs: verification, triple systems, exact cover.

A PBD(v, K) is a block collection on points [v], block sizes drawn from K,
such that every unordered pair of distinct points lies in exactly one block.
Triple systems (K = {3}) come from the Bose and Skolem direct constructions;
everything else falls back to a dancing-links exact-cover search whose
universe is the pair set and whose rows are candidate blocks.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

from .errors import BadResidue, KnownNonexistent, NotFound, Unavailable

Pair = Tuple[int, int]


@dataclass(frozen=True)
class PairwiseBalancedDesign:
    """Points [v], block sizes K, blocks in canonical order.

    Canonical form: each block sorted ascending, block list sorted
    lexicographically, so equal designs serialize and hash identically.
    """

    v: int
    block_sizes: FrozenSet[int]
    blocks: Tuple[Tuple[int, ...], ...]

    def __init__(self, v: int, block_sizes: Iterable[int], blocks: Iterable[Iterable[int]]):
        object.__setattr__(self, "v", int(v))
        object.__setattr__(self, "block_sizes", frozenset(int(k) for k in block_sizes))
        canon = sorted(tuple(sorted(int(x) for x in b)) for b in blocks)
        object.__setattr__(self, "blocks", tuple(canon))


def verify_pbd(d: PairwiseBalancedDesign) -> Tuple[bool, Optional[Pair]]:
    """Exact pair coverage; witness is the first uncovered or repeated pair."""
    v = d.v
    # counting identity as a cheap necessary condition
    if sum(len(b) * (len(b) - 1) // 2 for b in d.blocks) != v * (v - 1) // 2:
        pass  # fall through: the scan below names a concrete witness
    count: Dict[Pair, int] = {}
    for b in d.blocks:
        if len(b) not in d.block_sizes:
            return False, (b[0], b[-1])
        if len(set(b)) != len(b) or b[0] < 0 or b[-1] >= v:
            return False, (b[0], b[-1])
        for p in combinations(b, 2):
            count[p] = count.get(p, 0) + 1
    for a in range(v):
        for bpt in range(a + 1, v):
            if count.get((a, bpt), 0) != 1:
                return False, (a, bpt)
    return True, None


def _half_idempotent_product(x: int, y: int, two_k: int) -> int:
    """Commutative quasigroup on Z_2k with x*x = x for x < k."""
    s = (x + y) % two_k
    return s // 2 if s % 2 == 0 else two_k // 2 + (s - 1) // 2


def sts_direct(v: int) -> PairwiseBalancedDesign:
    """Steiner triple system on [v] for v congruent to 1 or 3 mod 6.

    v = 3 mod 6 uses the Bose construction over the idempotent commutative
    quasigroup on Z_n, n = v/3; v = 1 mod 6 uses the Skolem construction
    over the half-idempotent commutative quasigroup on Z_2k, v = 6k+1.
    """
    if v < 3 or v % 6 not in (1, 3):
        raise BadResidue(f"{v} is not 1 or 3 mod 6 (or is below 3)")
    blocks: List[Tuple[int, ...]] = []
    if v % 6 == 3:
        n = v // 3
        half = (n + 1) // 2  # multiplicative inverse of 2 mod n (n odd)

        def pt(x, i):
            return x + n * i

        for x in range(n):
            blocks.append((pt(x, 0), pt(x, 1), pt(x, 2)))
        for x in range(n):
            for y in range(x + 1, n):
                m = ((x + y) * half) % n
                for i in range(3):
                    blocks.append((pt(x, i), pt(y, i), pt(m, (i + 1) % 3)))
    else:
        k = (v - 1) // 6
        if k == 0:
            return PairwiseBalancedDesign(7, {3}, _fano())
        two_k = 2 * k
        inf = v - 1

        def pt(x, i):
            return x + two_k * i

        for x in range(k):
            blocks.append((pt(x, 0), pt(x, 1), pt(x, 2)))
        for x in range(k, two_k):
            for i in range(3):
                blocks.append((inf, pt(x, i), pt(x - k, (i + 1) % 3)))
        for x in range(two_k):
            for y in range(x + 1, two_k):
                m = _half_idempotent_product(x, y, two_k)
                for i in range(3):
                    blocks.append((pt(x, i), pt(y, i), pt(m, (i + 1) % 3)))
    d = PairwiseBalancedDesign(v, {3}, blocks)
    ok, witness = verify_pbd(d)
    if not ok:
        raise Unavailable(f"triple system construction failed at pair {witness}")
    return d


def _fano() -> List[Tuple[int, ...]]:
    return [
        (0, 1, 3), (1, 2, 4), (2, 3, 5), (3, 4, 6),
        (4, 5, 0), (5, 6, 1), (6, 0, 2),
    ]


# ---------------------------------------------------------------------------
# exact cover via dancing links


class _DLX:
    """Knuth's dancing-links solver specialized to first-solution search."""

    def __init__(self, n_cols: int):
        n = n_cols + 1  # 0 is the root
        self.left = list(range(-1, n_cols))
        self.right = list(range(1, n + 1))
        self.left[0] = n_cols
        self.right[n_cols] = 0
        self.up = list(range(n))
        self.down = list(range(n))
        self.col_size = [0] * n
        self.col_of = list(range(n))
        self.row_of = [-1] * n
        self.lnode = list(range(n))
        self.rnode = list(range(n))

    def add_row(self, row_id: int, cols: List[int]):
        first = None
        for c in cols:
            node = len(self.up)
            head = c + 1
            self.up.append(self.up[head])
            self.down.append(head)
            self.down[self.up[head]] = node
            self.up[head] = node
            self.col_of.append(head)
            self.row_of.append(row_id)
            self.col_size[head] += 1
            if first is None:
                first = node
                self.lnode.append(node)
                self.rnode.append(node)
            else:
                self.lnode.append(self.lnode[first])
                self.rnode.append(first)
                self.rnode[self.lnode[first]] = node
                self.lnode[first] = node

    def _cover(self, head):
        self.right[self.left[head]] = self.right[head]
        self.left[self.right[head]] = self.left[head]
        i = self.down[head]
        while i != head:
            j = self.rnode[i]
            while j != i:
                self.down[self.up[j]] = self.down[j]
                self.up[self.down[j]] = self.up[j]
                self.col_size[self.col_of[j]] -= 1
                j = self.rnode[j]
            i = self.down[i]

    def _uncover(self, head):
        i = self.up[head]
        while i != head:
            j = self.lnode[i]
            while j != i:
                self.col_size[self.col_of[j]] += 1
                self.down[self.up[j]] = j
                self.up[self.down[j]] = j
                j = self.lnode[j]
            i = self.up[i]
        self.right[self.left[head]] = head
        self.left[self.right[head]] = head

    def solve(self, deadline: float) -> Optional[List[int]]:
        """First exact cover as a list of row ids, or None if none exists.

        Raises NotFound("budget-exhausted") past the deadline.
        """
        solution: List[int] = []

        def rec() -> bool:
            if time.monotonic() > deadline:
                raise NotFound("budget-exhausted")
            head = self.right[0]
            if head == 0:
                return True
            best = head
            c = head
            while c != 0:
                if self.col_size[c] < self.col_size[best]:
                    best = c
                c = self.right[c]
            if self.col_size[best] == 0:
                return False
            self._cover(best)
            i = self.down[best]
            while i != best:
                solution.append(self.row_of[i])
                j = self.rnode[i]
                while j != i:
                    self._cover(self.col_of[j])
                    j = self.rnode[j]
                if rec():
                    return True
                j = self.lnode[i]
                while j != i:
                    self._uncover(self.col_of[j])
                    j = self.lnode[j]
                solution.pop()
                i = self.down[i]
            self._uncover(best)
            return False

        return solution if rec() else None


def pbd_exact_cover(
    v: int, K: Iterable[int], budget: float = 10.0, seed: int = 0
) -> PairwiseBalancedDesign:
    """Search for a PBD(v, K) by exact cover over the pair universe.

    Deterministic under seed (the seed orders candidate blocks).  Raises
    NotFound("proven-infeasible") when the cover space is exhausted and
    NotFound("budget-exhausted") when time runs out first.
    """
    K = sorted(set(int(k) for k in K))
    if not K or v < min(K):
        raise NotFound("proven-infeasible", "no block size fits")
    pairs = list(combinations(range(v), 2))
    pair_col = {p: c for c, p in enumerate(pairs)}
    candidates: List[Tuple[int, ...]] = []
    for k in K:
        if k <= v:
            candidates.extend(combinations(range(v), k))
    rng = random.Random(seed)
    if seed:
        rng.shuffle(candidates)
    dlx = _DLX(len(pairs))
    for rid, block in enumerate(candidates):
        dlx.add_row(rid, [pair_col[p] for p in combinations(block, 2)])
    rows = dlx.solve(time.monotonic() + budget)
    if rows is None:
        raise NotFound("proven-infeasible", f"no PBD({v},{set(K)})")
    d = PairwiseBalancedDesign(v, K, [candidates[r] for r in rows])
    ok, witness = verify_pbd(d)
    if not ok:
        raise Unavailable(f"exact cover produced a bad design at {witness}")
    return d


_KNOWN_EXCEPTIONS = {
    frozenset({3, 4, 5}): frozenset({6, 8}),
    frozenset({4, 5, 7, 9, 10, 11}): frozenset(
        {6, 8, 12, 14, 15, 18, 19, 23, 26, 27, 30}
    ),
}

_provider_cache: Dict[Tuple[int, FrozenSet[int]], PairwiseBalancedDesign] = {}


def pbd_provider(v: int, K: Iterable[int], budget: float = 10.0) -> PairwiseBalancedDesign:
    """Dispatch: single block if v in K, then triple systems, then exact cover.

    Published exception sets short-circuit to KnownNonexistent so no budget
    is spent on them; successes are cached per (v, K).
    """
    Kf = frozenset(int(k) for k in K)
    key = (v, Kf)
    if key in _provider_cache:
        return _provider_cache[key]
    exceptions = _KNOWN_EXCEPTIONS.get(Kf)
    if exceptions and v in exceptions:
        raise KnownNonexistent(f"no PBD({v},{sorted(Kf)})")
    if v in Kf:
        d = PairwiseBalancedDesign(v, Kf, [tuple(range(v))])
    elif 3 in Kf and v >= 3 and v % 6 in (1, 3):
        d = PairwiseBalancedDesign(v, Kf, sts_direct(v).blocks)
    else:
        # the cover search is seed-sensitive; restarts beat one long run
        slices = max(1, min(8, int(budget // 2)))
        d = None
        for seed in range(slices):
            try:
                d = pbd_exact_cover(v, Kf, budget=budget / slices, seed=seed)
                break
            except NotFound as exc:
                if exc.reason == "proven-infeasible":
                    raise KnownNonexistent(f"no PBD({v},{sorted(Kf)})") from exc
        if d is None:
            raise Unavailable(f"PBD({v},{sorted(Kf)}): budget-exhausted")
    ok, witness = verify_pbd(d)
    if not ok:
        raise Unavailable(f"provider produced a bad design at {witness}")
    _provider_cache[key] = d
    return d


def blocks_through(d: PairwiseBalancedDesign, point: int) -> List[Tuple[int, ...]]:
    """Blocks containing the given point; for any valid PBD their residues
    partition the remaining points."""
    return [b for b in d.blocks if point in b]
