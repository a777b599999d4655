import json

import numpy as np
import pytest

from qlatin.catalog import (
    CATALOG_IDS,
    KINDS,
    build,
    existence,
    list_records,
    load,
    paper_square,
    store,
)
from qlatin.classical import (
    HoleyLatinSquare,
    verify_holey_latin_square,
    verify_holey_orthogonal_pair,
)
from qlatin.errors import (
    CorruptRecord,
    KnownNonexistent,
    Unavailable,
    UnknownId,
    UnknownKind,
)
from qlatin.numerics import UnitaryMatrix
from qlatin.quantum import (
    QuantumLatinSquare,
    cardinality,
    verify_idempotent_qls,
    verify_orthogonal_pair,
    verify_qls,
)
from qlatin.serialize import content_hash, from_json, to_json


def test_catalog_ids_complete():
    expected = {
        "qls6", "qls8", "moqls8_a", "moqls8_b", "isols10_3", "isols11_3",
        "moqls10_a", "moqls10_b", "moqls11_a", "moqls11_b", "u0", "u1", "v3",
    }
    assert set(CATALOG_IDS) == expected


def test_unknown_id():
    with pytest.raises(UnknownId):
        paper_square("qls7")


def test_reference_idempotent_squares():
    for vid, v, card in (("qls6", 6, 8), ("qls8", 8, 16)):
        Q = paper_square(vid)
        assert verify_qls(Q).passed
        assert verify_idempotent_qls(Q).passed
        assert cardinality(Q) == card


def test_qls6_cell_contents():
    Q = paper_square("qls6")
    minus = np.zeros(6)
    minus[0], minus[3] = 1 / np.sqrt(2), -1 / np.sqrt(2)
    assert np.allclose(Q.array[2, 1], minus)
    assert Q.array[0, 0, 0] == 1.0


def test_reference_orthogonal_pairs():
    for v in (8, 10, 11):
        A = paper_square(f"moqls{v}_a")
        B = paper_square(f"moqls{v}_b")
        assert verify_qls(A).passed and verify_qls(B).passed
        assert verify_orthogonal_pair(A, B).passed
        assert cardinality(A) > v and cardinality(B) > v


def test_reference_holey_squares():
    for vid in ("isols10_3", "isols11_3"):
        H = paper_square(vid)
        assert isinstance(H, HoleyLatinSquare)
        ok, witness = verify_holey_latin_square(H)
        assert ok, witness
        assert verify_holey_orthogonal_pair(H, H.transpose())
    assert paper_square("isols10_3")[0, 0] == 0
    assert paper_square("isols10_3")[7, 7] is None


def test_reference_unitaries():
    u0 = paper_square("u0")
    u1 = paper_square("u1")
    v3 = paper_square("v3")
    assert (u0.dim, u1.dim, v3.dim) == (10, 11, 3)
    assert np.allclose(u0.data[:7, :7], np.eye(7))
    assert np.allclose(u0.data[7:, 7:], v3.data)
    assert np.allclose(u1.data[8:, 8:], v3.data)
    assert abs(v3.data[0, 0] - 1 / np.sqrt(3)) < 1e-12


def test_existence_verdict_totality():
    for kind in KINDS:
        for v in range(2, 201):
            verdict = existence(kind, v)
            assert verdict.verdict in ("No", "Yes", "OpenException")
            if verdict.is_yes:
                assert verdict.route


def test_existence_unknown_kind():
    with pytest.raises(UnknownKind):
        existence("4-moqls", 10)


def test_build_refuses_no_and_open():
    with pytest.raises(KnownNonexistent):
        build("idempotent-qls", 5)
    with pytest.raises(Unavailable):
        build("2-moqls", 6)


def test_build_qls4_cardinality_six():
    Q, cert = build("qls", 4)
    assert verify_qls(Q).passed
    assert cert.cardinalities == (6,)


def test_build_idempotent_pbd_route():
    Q, cert = build("idempotent-qls", 7)
    assert verify_qls(Q).passed
    assert verify_idempotent_qls(Q).passed
    assert cert.nonclassical == (True,)


def test_build_catalog_routes():
    Q, cert = build("idempotent-qls", 6)
    assert cert.route == "catalog"
    pair, cert = build("2-moqls", 10)
    assert cert.route == "catalog"
    assert verify_orthogonal_pair(*pair).passed


def test_store_roundtrip(tmp_path):
    Q, _ = build("qls", 5)
    digest = store(Q, "qls-5-test", root=tmp_path)
    loaded = load("qls-5-test", root=tmp_path)
    assert content_hash(loaded) == digest
    assert isinstance(loaded, QuantumLatinSquare)
    listing = list_records(root=tmp_path)
    assert [r["id"] for r in listing] == ["qls-5-test"]
    assert list_records(kind="hls", root=tmp_path) == []


def test_load_rejects_tampered_payload(tmp_path):
    Q, _ = build("qls", 5)
    store(Q, "tamper-me", root=tmp_path)
    path = tmp_path / "qls" / "tamper-me.json"
    record = json.loads(path.read_text())
    record["payload"]["grid"][0][0][0][0] = 0.123
    path.write_text(json.dumps(record))
    with pytest.raises(CorruptRecord):
        load("tamper-me", root=tmp_path)


def test_load_rejects_forged_hash(tmp_path):
    Q, _ = build("qls", 5)
    store(Q, "forge-me", root=tmp_path)
    path = tmp_path / "qls" / "forge-me.json"
    record = json.loads(path.read_text())
    # re-hash a payload that fails the quantum verifier: fail-closed on load
    record["payload"]["grid"][0][0] = record["payload"]["grid"][0][1]
    record["hash"] = content_hash(record["payload"])
    index = json.loads((tmp_path / "index.json").read_text())
    index["forge-me"]["hash"] = record["hash"]
    (tmp_path / "index.json").write_text(json.dumps(index))
    path.write_text(json.dumps(record))
    with pytest.raises(CorruptRecord):
        load("forge-me", root=tmp_path)


def test_load_missing_record(tmp_path):
    with pytest.raises(UnknownId):
        load("nothing-here", root=tmp_path)


def test_serialize_roundtrip_all_reference_designs():
    for vid in CATALOG_IDS:
        design = paper_square(vid)
        obj = to_json(design)
        back = from_json(json.loads(json.dumps(obj)))
        assert content_hash(back) == content_hash(design)
        assert type(back) is type(design)
