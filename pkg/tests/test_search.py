import pytest

from qlatin.classical import (
    verify_coils,
    verify_holey_latin_square,
    verify_holey_orthogonal_pair,
    verify_idempotent,
    verify_latin_square,
    verify_mols_set,
    verify_orthogonal_pair,
)
from qlatin.errors import NotFound
from qlatin.search import (
    SearchTemplate,
    search_cyclic_coils,
    search_cyclic_isols,
    search_design,
    search_mols_pair,
)


def test_plain_square_search():
    L = search_design(SearchTemplate(order=6))
    ok, _ = verify_latin_square(L)
    assert ok


def test_idempotent_search():
    L = search_design(SearchTemplate(order=7, idempotent=True))
    assert verify_idempotent(L)


def test_orthogonal_mate_search():
    first = search_design(SearchTemplate(order=5))
    mate = search_design(SearchTemplate(order=5, orthogonal_to=(first,)))
    assert verify_orthogonal_pair(first, mate)


def test_self_orthogonal_search():
    L = search_design(SearchTemplate(order=5, self_orthogonal=True))
    assert verify_orthogonal_pair(L, L.transpose())


def test_conjugate_orthogonal_search():
    L = search_design(
        SearchTemplate(order=7, idempotent=True, conjugate_orthogonal_321=True)
    )
    # the square must be orthogonal to its (3,2,1)-conjugate
    from qlatin.classical import conjugate_square

    assert verify_orthogonal_pair(L, conjugate_square(L, (3, 2, 1)))


def test_holey_search():
    hole = (4, 5)
    H = search_design(SearchTemplate(order=6, holes=(hole,)))
    ok, _ = verify_holey_latin_square(H)
    assert ok


def test_infeasible_order_two_mate():
    first = search_design(SearchTemplate(order=2))
    with pytest.raises(NotFound):
        search_design(SearchTemplate(order=2, orthogonal_to=(first,), budget=2))


@pytest.mark.parametrize("v,n", [(10, 3), (11, 3), (13, 4), (16, 4)])
def test_cyclic_isols(v, n):
    H = search_cyclic_isols(v, n)
    ok, _ = verify_holey_latin_square(H)
    assert ok
    assert verify_holey_orthogonal_pair(H, H.transpose())


@pytest.mark.parametrize("v,n", [(13, 4), (16, 4)])
def test_cyclic_coils(v, n):
    H = search_cyclic_coils(v, n)
    assert verify_coils(H, (3, 2, 1))


def test_mols_pair_search_small():
    pair = search_mols_pair(4)
    assert verify_mols_set(list(pair))


@pytest.mark.slow
def test_no_mols_pair_of_order_six():
    with pytest.raises(NotFound) as exc:
        search_mols_pair(6, budget=300)
    assert exc.value.reason == "proven-infeasible"
