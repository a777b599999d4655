import pytest

from qlatin.errors import NotPrimePower
from qlatin.gf import GaloisField, field, prime_power_decomposition


def test_prime_power_decomposition():
    assert prime_power_decomposition(7) == (7, 1)
    assert prime_power_decomposition(8) == (2, 3)
    assert prime_power_decomposition(9) == (3, 2)
    assert prime_power_decomposition(12) is None
    assert prime_power_decomposition(1) is None


def test_non_prime_power_rejected():
    with pytest.raises(NotPrimePower):
        GaloisField(6)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9, 16, 25, 27])
def test_field_axioms(q):
    F = field(q)
    elems = range(q)
    for a in elems:
        assert F.add(a, 0) == a
        assert F.mul(a, F.one) == a
        assert F.add(a, F.neg(a)) == 0
        if a != 0:
            assert F.mul(a, F.inv(a)) == F.one
    # commutativity plus a distributivity spot check
    for a in (1, q - 1):
        for b in (2 % q, q // 2):
            assert F.add(a, b) == F.add(b, a)
            assert F.mul(a, b) == F.mul(b, a)
            for c in (1, q - 1):
                assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))


def test_multiplicative_group_order():
    F = field(8)
    # every nonzero element's order divides 7, and some generator has order 7
    orders = set()
    for a in range(1, 8):
        x, n = a, 1
        while x != F.one:
            x = F.mul(x, a)
            n += 1
        orders.add(n)
    assert max(orders) == 7


def test_prime_field_is_mod_arithmetic():
    F = field(5)
    for a in range(5):
        for b in range(5):
            assert F.add(a, b) == (a + b) % 5
            assert F.mul(a, b) == (a * b) % 5


def test_field_cache():
    assert field(9) is field(9)
