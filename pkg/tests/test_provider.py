import pytest

from qlatin.classical import (
    verify_hmols,
    verify_idempotent,
    verify_mols_set,
    verify_orthogonal_pair,
)
from qlatin.errors import KnownNonexistent, Unavailable
from qlatin.provider import (
    mols_capacity,
    provide_idempotent_mols,
    provide_imols,
    provide_mols,
    provide_sols,
    provider,
)


def test_capacity_bounds():
    assert mols_capacity(7) == 6
    assert mols_capacity(8) == 7
    assert mols_capacity(12) == 2  # MacNeish bound from the factor 4
    assert mols_capacity(6) == 1


def test_mols_gates():
    with pytest.raises(KnownNonexistent):
        provide_mols(6, 2)
    with pytest.raises(KnownNonexistent):
        provide_mols(2, 2)


def test_mols_via_macneish():
    squares = provide_mols(12, 2)
    assert squares[0].order == 12
    assert verify_mols_set(squares)


def test_idempotent_mols_gates():
    with pytest.raises(KnownNonexistent):
        provide_idempotent_mols(3, 2)
    single = provide_idempotent_mols(3, 1)
    assert verify_idempotent(single[0])


def test_sols_gate_and_product():
    with pytest.raises(KnownNonexistent):
        provide_sols(6)
    L = provide_sols(35)  # 5 * 7, both factors clean
    assert verify_orthogonal_pair(L, L.transpose())


def test_imols_gate():
    with pytest.raises(KnownNonexistent):
        provide_imols(6, 1, t=2)
    with pytest.raises(KnownNonexistent):
        provide_imols(8, 3, t=2)  # needs v >= 3k


def test_imols_macneish_route():
    out = provide_imols(12, 4, t=2)
    assert verify_hmols(out)
    assert out[0].spec.holes == ((8, 9, 10, 11),)


def test_dispatcher():
    squares = provider("mols", v=5, t=2)
    assert verify_mols_set(squares)
    with pytest.raises(Unavailable):
        provider("socks", v=5)
