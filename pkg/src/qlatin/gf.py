"""Small finite fields GF(p^r) with table-based arithmetic.

Elements are integers 0..q-1 encoding polynomial coefficient vectors base p
(element sum a_i x^i maps to sum a_i p^i).  The reducing polynomial is the
lexicographically least monic irreducible of degree r over GF(p), found by
deterministic search; orders here stay at desk scale so the tables are tiny.
"""

from __future__ import annotations

from functools import lru_cache
from typing import List, Optional, Tuple

from .errors import NotPrimePower


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def prime_power_decomposition(q: int) -> Optional[Tuple[int, int]]:
    """Return (p, r) with q == p**r, or None if q is not a prime power."""
    if q < 2:
        return None
    for p in range(2, q + 1):
        if not _is_prime(p):
            continue
        if q % p:
            continue
        r, m = 0, q
        while m % p == 0:
            m //= p
            r += 1
        return (p, r) if m == 1 else None
    return None


def _poly_mulmod(a: List[int], b: List[int], mod: List[int], p: int) -> List[int]:
    # mod is monic of degree r; result reduced to degree < r
    r = len(mod) - 1
    res = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                res[i + j] = (res[i + j] + ai * bj) % p
    for deg in range(len(res) - 1, r - 1, -1):
        c = res[deg]
        if c:
            res[deg] = 0
            for k in range(r + 1):
                res[deg - r + k] = (res[deg - r + k] - c * mod[k]) % p
    return [c % p for c in res[:r]] + [0] * max(0, r - len(res))


def _int_to_poly(x: int, p: int, r: int) -> List[int]:
    out = []
    for _ in range(r):
        out.append(x % p)
        x //= p
    return out


def _poly_to_int(coeffs: List[int], p: int) -> int:
    out = 0
    for c in reversed(coeffs):
        out = out * p + c
    return out


def _find_irreducible(p: int, r: int) -> List[int]:
    # monic degree-r polynomial with no roots of the multiplicative structure:
    # irreducibility tested by trial division against all monic factors of
    # degree <= r//2 (orders here are tiny).
    def poly_divides(d: List[int], f: List[int]) -> bool:
        f = f[:]
        degd = len(d) - 1
        for deg in range(len(f) - 1, degd - 1, -1):
            c = f[deg]
            if c:
                for k in range(degd + 1):
                    f[deg - degd + k] = (f[deg - degd + k] - c * d[k]) % p
        return all(c == 0 for c in f[:degd])

    def monic_polys(deg):
        for x in range(p**deg):
            yield _int_to_poly(x, p, deg) + [1]

    for tail in range(p**r):
        f = _int_to_poly(tail, p, r) + [1]
        if f[0] == 0:
            continue
        reducible = False
        for deg in range(1, r // 2 + 1):
            for d in monic_polys(deg):
                if poly_divides(d, f):
                    reducible = True
                    break
            if reducible:
                break
        if not reducible:
            return f
    raise NotPrimePower(f"no irreducible polynomial for p={p}, r={r}")


class GaloisField:
    """GF(q) with add/sub/mul/inv on integer-encoded elements."""

    def __init__(self, q: int):
        decomp = prime_power_decomposition(q)
        if decomp is None:
            raise NotPrimePower(f"{q} is not a prime power")
        self.q = q
        self.p, self.r = decomp
        if self.r == 1:
            self._add = [[(a + b) % q for b in range(q)] for a in range(q)]
            self._mul = [[(a * b) % q for b in range(q)] for a in range(q)]
        else:
            mod = _find_irreducible(self.p, self.r)
            polys = [_int_to_poly(x, self.p, self.r) for x in range(q)]
            self._add = [
                [
                    _poly_to_int([(x + y) % self.p for x, y in zip(polys[a], polys[b])], self.p)
                    for b in range(q)
                ]
                for a in range(q)
            ]
            self._mul = [
                [
                    _poly_to_int(_poly_mulmod(polys[a], polys[b], mod, self.p), self.p)
                    for b in range(q)
                ]
                for a in range(q)
            ]
        self._neg = [0] * q
        self._inv = [0] * q
        for a in range(q):
            for b in range(q):
                if self._add[a][b] == 0:
                    self._neg[a] = b
                if a and self._mul[a][b] == 1:
                    self._inv[a] = b

    def add(self, a: int, b: int) -> int:
        return self._add[a][b]

    def sub(self, a: int, b: int) -> int:
        return self._add[a][self._neg[b]]

    def mul(self, a: int, b: int) -> int:
        return self._mul[a][b]

    def neg(self, a: int) -> int:
        return self._neg[a]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("no inverse of 0")
        return self._inv[a]

    @property
    def one(self) -> int:
        return 1


@lru_cache(maxsize=None)
def field(q: int) -> GaloisField:
    return GaloisField(q)
