import json

import pytest

from conftest import FIXTURES
from wtits import cli
from wtits.documents import load_document, parse_document


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize(
    "fixture,word,expected",
    [
        ("s3_system.json", "rsrs", "sr, 2"),
        ("dinf_system.json", "rsr", "rsr, 3"),
        ("dinf_system.json", "rr", "ε, 0"),
    ],
)
def test_reduce(capsys, fixture, word, expected):
    code, out, _ = run(capsys, "reduce", FIXTURES / fixture, word)
    assert code == 0
    assert out.strip() == expected


def test_reduce_bad_letter(capsys):
    code, _, err = run(capsys, "reduce", FIXTURES / "s3_system.json", "rq")
    assert code == 2
    assert "input error" in err


@pytest.mark.parametrize(
    "fixture,code",
    [
        ("fano.json", 0),
        ("dinf_thin.json", 0),
        ("product.json", 0),
        ("singleton_panel.json", 1),
        ("overlapping_blocks.json", 2),
    ],
)
def test_verify_building(capsys, fixture, code):
    got, out, _ = run(capsys, "verify-building", FIXTURES / fixture)
    assert got == code
    if code < 2:
        assert json.loads(out)["passed"] == (code == 0)


def test_missing_file(capsys, tmp_path):
    code, _, _ = run(capsys, "verify-building", tmp_path / "nope.json")
    assert code == 2


def test_quotient(capsys, tmp_path):
    out_file = tmp_path / "q.json"
    code, out, _ = run(capsys, "quotient", FIXTURES / "c2_dinf_thin.json", "-o", out_file)
    assert code == 0
    summary = json.loads(out)["summary"]
    assert summary["classes"] == 13 and summary["M"] == 1
    code, _, _ = run(capsys, "verify-building", out_file)
    assert code == 0


def test_quotient_bad_s1(capsys):
    code, _, err = run(capsys, "quotient", FIXTURES / "bad_s1_a2.json", "--s1", "r")
    assert code == 2
    assert "not a union" in err


def test_quotient_needs_a_finite_factor(capsys):
    code, _, _ = run(capsys, "quotient", FIXTURES / "dinf_thin.json")
    assert code == 2


def test_freesub_exit_codes(capsys, tmp_path):
    assert run(capsys, "freesub", FIXTURES / "dinf_thin.json")[0] == 3
    assert run(capsys, "freesub", FIXTURES / "product.json")[0] == 4
    witness = tmp_path / "w.json"
    dot_file = tmp_path / "w.dot"
    code, _, _ = run(capsys, "freesub", FIXTURES / "t33.json", "-L", 3, "-o", witness, "--dot", dot_file)
    assert code == 0
    doc = json.loads(witness.read_text())
    assert doc["g"] == "x y"
    assert doc["certificate"]["passed"]
    assert dot_file.read_text().startswith("graph")
    code, out, _ = run(capsys, "verify-witness", witness)
    assert code == 0
    assert json.loads(out)["reproduced"]


def test_verify_witness_detects_tampering(capsys, tmp_path):
    witness = tmp_path / "w.json"
    run(capsys, "freesub", FIXTURES / "t33.json", "-L", 2, "-o", witness)
    doc = json.loads(witness.read_text())
    doc["certificate"]["words_checked"] += 1
    witness.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "verify-witness", witness)
    assert code == 1
    assert not json.loads(out)["reproduced"]


def test_rho(capsys):
    code, out, _ = run(capsys, "rho", FIXTURES / "s3_thin.json")
    assert code == 0
    table = json.loads(out)["table"]
    assert table["r"] == "r" and table["s"] == "s"
    assert run(capsys, "rho", FIXTURES / "t33.json", "--radius", 6)[0] == 3


def test_dot(capsys):
    code, out, _ = run(capsys, "dot", FIXTURES / "fano.json")
    assert code == 0
    assert out.startswith("graph") and out.count("shape=point") == 14


@pytest.mark.parametrize("fixture", ["fano.json", "t33.json", "product.json", "dinf_thin.json"])
def test_document_round_trip_is_byte_identical(fixture):
    text = (FIXTURES / fixture).read_text(encoding="utf-8")
    assert parse_document(text).dumps() == text
    assert load_document(FIXTURES / fixture).dumps() == text


def test_quotient_output_round_trips(capsys, tmp_path):
    out_file = tmp_path / "q.json"
    run(capsys, "quotient", FIXTURES / "product.json", "-o", out_file)
    text = out_file.read_text(encoding="utf-8")
    assert parse_document(text).dumps() == text
