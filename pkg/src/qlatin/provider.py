"""Strategy cascade that supplies classical ingredient designs.

Order of attack for every kind: algebraic construction, then product or
starter constructions, then backtracking search, and an honest Unavailable
when everything fails.  Known nonexistence facts are encoded as feasibility
gates so no budget is burned on impossible requests; actual squares always
come out of a construction or search and are re-verified before return.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence, Tuple

from .classical import (
    HoleyLatinSquare,
    LatinSquare,
    empty_subsquare,
    field_idempotent_mols,
    field_mols,
    macneish_product,
    sols_from_field,
    subsquare_indices,
    verify_coils,
    verify_hmols,
    verify_holey_latin_square,
    verify_holey_orthogonal_pair,
    verify_idempotent,
    verify_latin_square,
    verify_mols_set,
    verify_orthogonal_pair,
)
from .errors import (
    KnownNonexistent,
    NoSuitableLambda,
    NotFound,
    NotPrimePower,
    TooMany,
    Unavailable,
)
from .gf import prime_power_decomposition
from .search import (
    SearchTemplate,
    search_cyclic_coils,
    search_cyclic_isols,
    search_design,
)


def _prime_power_factors(v: int) -> List[int]:
    """Prime-power factorization q1 * q2 * ... of v (distinct primes)."""
    out = []
    n = v
    p = 2
    while p * p <= n:
        if n % p == 0:
            q = 1
            while n % p == 0:
                q *= p
                n //= p
            out.append(q)
        p += 1
    if n > 1:
        out.append(n)
    return out


def mols_capacity(v: int) -> int:
    """Lower bound on the number of MOLS(v) this module can build directly:
    q - 1 for prime powers, the MacNeish bound otherwise."""
    if v == 1:
        return 0
    if prime_power_decomposition(v):
        return v - 1
    return min(q - 1 for q in _prime_power_factors(v))


def provide_mols(v: int, t: int, budget: float = 10.0) -> List[LatinSquare]:
    """t mutually orthogonal Latin squares of order v."""
    if t >= 2 and v in (2, 6):
        raise KnownNonexistent(f"no 2 MOLS({v})")
    if prime_power_decomposition(v):
        if t > v - 1:
            raise Unavailable(f"at most {v - 1} MOLS({v})")
        out = field_mols(v, t)
    elif t <= mols_capacity(v):
        factors = _prime_power_factors(v)
        out = field_mols(factors[0], t)
        for q in factors[1:]:
            out = macneish_product(out, field_mols(q, t))
    elif t == 1:
        out = [LatinSquare([[(i + j) % v for j in range(v)] for i in range(v)])]
    else:
        try:
            first = search_design(SearchTemplate(order=v, budget=budget))
            rest = search_design(
                SearchTemplate(order=v, orthogonal_to=(first,), budget=budget)
            )
            out = [first, rest]  # only t=2 is reachable by search here
            if t != 2:
                raise Unavailable(f"no route to {t} MOLS({v})")
        except NotFound as exc:
            raise Unavailable(f"{t} MOLS({v}): {exc.reason}") from exc
    if not verify_mols_set(out):
        raise Unavailable(f"MOLS({v}) candidate failed verification")
    return out


def provide_idempotent_mols(v: int, t: int, budget: float = 10.0) -> List[LatinSquare]:
    """t idempotent MOLS(v), diagonal cell (i, i) = i in every square."""
    if v == 2 or (t >= 2 and v in (3, 6)):
        raise KnownNonexistent(f"no {t} idempotent MOLS({v})")
    out: Optional[List[LatinSquare]] = None
    if prime_power_decomposition(v):
        try:
            out = field_idempotent_mols(v, t)
        except TooMany:
            out = None
    if out is None and t <= mols_capacity(v) - 1:
        factors = _prime_power_factors(v)
        out = field_idempotent_mols(factors[0], t)
        for q in factors[1:]:
            out = macneish_product(out, field_idempotent_mols(q, t))
    if out is None:
        try:
            acc: List[LatinSquare] = []
            for _ in range(t):
                acc.append(
                    search_design(
                        SearchTemplate(
                            order=v,
                            idempotent=True,
                            orthogonal_to=tuple(acc),
                            budget=budget,
                        )
                    )
                )
            out = acc
        except NotFound as exc:
            raise Unavailable(f"{t} idempotent MOLS({v}): {exc.reason}") from exc
    if not (verify_mols_set(out) and all(verify_idempotent(L) for L in out)):
        raise Unavailable(f"idempotent MOLS({v}) candidate failed verification")
    return out


def provide_sols(v: int, budget: float = 10.0) -> LatinSquare:
    """A self-orthogonal Latin square of order v (none exist for 2, 3, 6)."""
    if v in (2, 3, 6):
        raise KnownNonexistent(f"no SOLS({v})")
    if prime_power_decomposition(v):
        return sols_from_field(v)
    factors = _prime_power_factors(v)
    if all(q not in (2, 3) for q in factors):
        out = sols_from_field(factors[0])
        for q in factors[1:]:
            out = macneish_product([out], [sols_from_field(q)])[0]
        if verify_orthogonal_pair(out, out.transpose()):
            return out
    try:
        L = search_design(
            SearchTemplate(order=v, self_orthogonal=True, budget=budget)
        )
    except NotFound as exc:
        raise Unavailable(f"SOLS({v}): {exc.reason}") from exc
    if not verify_orthogonal_pair(L, L.transpose()):
        raise Unavailable(f"SOLS({v}) candidate failed verification")
    return L


def provide_ils(v: int, k: int, budget: float = 10.0) -> HoleyLatinSquare:
    """Incomplete LS(v) with one order-k hole at the lower right."""
    if v < 2 * k:
        raise KnownNonexistent(f"no ILS({v};{k}): needs v >= 2k")
    hole = tuple(range(v - k, v))
    try:
        H = search_design(SearchTemplate(order=v, holes=(hole,), budget=budget))
    except NotFound as exc:
        raise Unavailable(f"ILS({v};{k}): {exc.reason}") from exc
    ok, _ = verify_holey_latin_square(H)
    if not ok:
        raise Unavailable(f"ILS({v};{k}) candidate failed verification")
    return H


def provide_imols(
    v: int, k: int, t: int = 2, budget: float = 30.0
) -> List[HoleyLatinSquare]:
    """t incomplete MOLS(v) sharing one order-k lower-right hole.

    Routes: MacNeish product with the aligned subsquare emptied when
    v = k*m; an incomplete self-orthogonal square plus its transpose for
    t = 2; generic backtracking search otherwise.
    """
    if v == 6 and k == 1 and t >= 2:
        raise KnownNonexistent("no 2 IMOLS(6;1): equivalent to 2 MOLS(6)")
    if v < (t + 1) * k:
        raise KnownNonexistent(f"no {t} IMOLS({v};{k}): needs v >= {(t + 1) * k}")
    if k >= 1 and v % k == 0 and v // k > 1:
        m = v // k
        if mols_capacity(k) >= t and mols_capacity(m) >= t:
            prod = macneish_product(provide_mols(k, t), provide_mols(m, t))
            idx = subsquare_indices(k, m)
            out = [empty_subsquare(L, idx) for L in prod]
            if verify_hmols(out):
                return out
    if t == 2:
        try:
            H = search_cyclic_isols(v, k, budget=budget / 2)
            out = [H, H.transpose()]
            if verify_hmols(out):
                return out
        except NotFound:
            pass
    if t == 1:
        return [provide_ils(v, k, budget=budget)]
    raise Unavailable(f"no route to {t} IMOLS({v};{k})")


def provide_isols(v: int, k: int, budget: float = 30.0) -> HoleyLatinSquare:
    """Incomplete self-orthogonal LS(v) with an order-k lower-right hole."""
    if v < 3 * k + 1:
        raise KnownNonexistent(f"no ISOLS({v};{k}): needs v >= 3k+1")
    try:
        H = search_cyclic_isols(v, k, budget=budget / 2)
    except NotFound:
        hole = tuple(range(v - k, v))
        try:
            H = search_design(
                SearchTemplate(
                    order=v, holes=(hole,), self_orthogonal=True, budget=budget
                )
            )
        except NotFound as exc:
            raise Unavailable(f"ISOLS({v};{k}): {exc.reason}") from exc
    ok, _ = verify_holey_latin_square(H)
    if not (ok and verify_holey_orthogonal_pair(H, H.transpose())):
        raise Unavailable(f"ISOLS({v};{k}) candidate failed verification")
    return H


def provide_coils(v: int, n: int, budget: float = 60.0) -> HoleyLatinSquare:
    """Idempotent incomplete LS(v;n) orthogonal to its (3,2,1)-conjugate."""
    if v < 3 * n + 1:
        raise KnownNonexistent(f"no idempotent COILS({v};{n}): needs v >= 3n+1")
    try:
        H = search_cyclic_coils(v, n, budget=budget / 2)
    except NotFound:
        hole = tuple(range(v - n, v))
        try:
            H = search_design(
                SearchTemplate(
                    order=v,
                    holes=(hole,),
                    idempotent=True,
                    conjugate_orthogonal_321=True,
                    budget=budget,
                )
            )
        except NotFound as exc:
            raise Unavailable(f"COILS({v};{n}): {exc.reason}") from exc
    if not verify_coils(H, (3, 2, 1)):
        raise Unavailable(f"COILS({v};{n}) candidate failed verification")
    return H


def provider(kind: str, **params):
    """Uniform entry point; kinds mirror the ingredient classes used by the
    quantum constructions."""
    dispatch = {
        "mols": provide_mols,
        "idempotent-mols": provide_idempotent_mols,
        "sols": provide_sols,
        "ils": provide_ils,
        "imols": provide_imols,
        "isols": provide_isols,
        "coils": provide_coils,
    }
    if kind not in dispatch:
        raise Unavailable(f"unknown ingredient kind {kind!r}")
    return dispatch[kind](**params)
