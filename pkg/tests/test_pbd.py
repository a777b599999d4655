import pytest

from qlatin.errors import KnownNonexistent, NotFound
from qlatin.pbd import (
    PairwiseBalancedDesign,
    blocks_through,
    pbd_exact_cover,
    pbd_provider,
    sts_direct,
    verify_pbd,
)


@pytest.mark.parametrize("v", [7, 9, 13, 15, 19, 21, 25, 27, 31, 33])
def test_triple_systems(v):
    d = sts_direct(v)
    ok, witness = verify_pbd(d)
    assert ok, witness
    assert all(len(b) == 3 for b in d.blocks)
    assert len(d.blocks) == v * (v - 1) // 6


def test_fano_plane():
    d = sts_direct(7)
    assert len(d.blocks) == 7
    assert all(len(blocks_through(d, p)) == 3 for p in range(7))


def test_verify_pbd_catches_missing_pair():
    d = PairwiseBalancedDesign(5, (3,), [(0, 1, 2)])
    ok, witness = verify_pbd(d)
    assert not ok
    assert witness is not None


def test_verify_pbd_catches_double_cover():
    d = PairwiseBalancedDesign(4, (3,), [(0, 1, 2), (0, 1, 3), (2, 3, 0), (1, 2, 3)])
    ok, _ = verify_pbd(d)
    assert not ok


def test_exact_cover_small():
    d = pbd_exact_cover(4, (4,))
    assert verify_pbd(d)[0]
    d = pbd_exact_cover(13, (4,))
    assert verify_pbd(d)[0]
    assert len(d.blocks) == 13  # projective plane of order 3


def test_exact_cover_infeasible():
    with pytest.raises(NotFound) as exc:
        pbd_exact_cover(5, (4,), budget=5)
    assert exc.value.reason == "proven-infeasible"


@pytest.mark.parametrize("v", [7, 9, 10, 11, 12, 13, 14, 15, 19, 21, 25])
def test_provider_small_k(v):
    d = pbd_provider(v, (3, 4, 5))
    ok, witness = verify_pbd(d)
    assert ok, witness
    assert set(len(b) for b in d.blocks) <= {3, 4, 5}


def test_provider_known_exceptions():
    for v in (6, 8):
        with pytest.raises(KnownNonexistent):
            pbd_provider(v, (3, 4, 5))
    with pytest.raises(KnownNonexistent):
        pbd_provider(6, (4, 5, 7, 9, 10, 11))


def test_provider_big_k():
    d = pbd_provider(13, (4, 5, 7, 9, 10, 11))
    assert verify_pbd(d)[0]


def test_single_block_design():
    d = pbd_provider(5, (3, 4, 5))
    assert verify_pbd(d)[0]


def test_blocks_through_partition():
    d = sts_direct(9)
    through = blocks_through(d, 0)
    rest = sorted(x for b in through for x in b if x != 0)
    assert rest == list(range(1, 9))
