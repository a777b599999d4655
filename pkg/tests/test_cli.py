import json

import numpy as np
import pytest

from qlatin.cli import main, render_vector
from qlatin.numerics import UnitVector


@pytest.fixture(autouse=True)
def isolated_catalog(tmp_path, monkeypatch):
    monkeypatch.setenv("QLS_CATALOG_DIR", str(tmp_path / "catalog"))
    monkeypatch.chdir(tmp_path)
    return tmp_path


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_build_qls4(capsys):
    code, out = run(capsys, "build", "--kind", "qls", "--v", "4")
    report = json.loads(out)
    assert code == 0
    assert report["verdict"] == "Yes"
    assert report["cardinalities"] == [6]
    assert report["nonclassical"] == [True]


def test_build_open_exception(capsys):
    code, out = run(capsys, "build", "--kind", "2-moqls", "--v", "6")
    assert code == 2
    assert json.loads(out)["verdict"] == "OpenException"


def test_build_known_nonexistent(capsys):
    code, out = run(capsys, "build", "--kind", "idempotent-qls", "--v", "5")
    assert code == 2
    assert json.loads(out)["verdict"] == "No"


def test_build_bad_kind_usage_error(capsys):
    assert main(["build", "--kind", "wrong", "--v", "4"]) == 3


def test_build_then_verify_roundtrip(tmp_path, capsys):
    out_path = tmp_path / "q.json"
    code, _ = run(
        capsys, "build", "--kind", "soqls", "--v", "13", "--out", str(out_path)
    )
    assert code == 0
    code, out = run(
        capsys, "verify", str(out_path), "--check", "qls,soqls,nonclassical"
    )
    assert code == 0
    report = json.loads(out)
    assert report["passed"]
    assert {r["check"] for r in report["results"]} == {"qls", "soqls", "nonclassical"}


def test_verify_pairwise_orthogonality(tmp_path, capsys):
    for vid in ("moqls8_a", "moqls8_b"):
        assert main(["catalog", "export", vid, str(tmp_path / f"{vid}.json")]) == 0
        capsys.readouterr()
    code, out = run(
        capsys,
        "verify",
        str(tmp_path / "moqls8_a.json"),
        str(tmp_path / "moqls8_b.json"),
        "--check",
        "orthogonal",
    )
    assert code == 0
    assert json.loads(out)["passed"]


def test_verify_detects_failure(tmp_path, capsys):
    path = tmp_path / "bad.json"
    assert main(["catalog", "export", "qls6", str(path)]) == 0
    capsys.readouterr()
    obj = json.loads(path.read_text())
    obj["grid"][0][1] = obj["grid"][0][0]
    path.write_text(json.dumps(obj))
    code, out = run(capsys, "verify", str(path), "--check", "qls")
    assert code == 1
    assert not json.loads(out)["passed"]


def test_verify_parse_error(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{nope")
    assert main(["verify", str(path), "--check", "qls"]) == 3


def test_catalog_list_and_show(capsys):
    code, out = run(capsys, "catalog", "list")
    assert code == 0
    ids = json.loads(out)["ids"]
    assert "qls6" in ids and "u0" in ids
    code, out = run(capsys, "catalog", "show", "u0")
    assert code == 0
    assert json.loads(out)["design"]["dim"] == 10


def test_catalog_show_unknown_id(capsys):
    assert main(["catalog", "show", "nope"]) == 3


def test_existence_command(capsys):
    code, out = run(capsys, "existence", "--kind", "soqls", "--v", "13")
    assert code == 0
    report = json.loads(out)
    assert report["verdict"] == "Yes"
    assert "isols" in report["route"]


def test_pretty_rendering(capsys):
    code, out = run(capsys, "--pretty", "catalog", "show", "qls6")
    assert code == 0
    assert "(|0⟩-|3⟩)/√2" in out
    assert "|5⟩" in out


def test_render_vector_shorthand():
    r = 1 / np.sqrt(2)
    v = np.zeros(6)
    v[0], v[3] = r, r
    assert render_vector(v) == "(|0⟩+|3⟩)/√2"
    v[3] = -r
    assert render_vector(v) == "(|0⟩-|3⟩)/√2"
    assert render_vector(UnitVector.basis_state(4, 2).data) == "|2⟩"
    mixed = np.zeros(8, dtype=complex)
    mixed[3], mixed[1] = 2 / np.sqrt(5), 1j / np.sqrt(5)
    text = render_vector(mixed)
    assert "|1⟩" in text and "|3⟩" in text
