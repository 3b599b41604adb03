"""CLI surface tests: descriptor parsing, report determinism, exit codes."""

import json

import pytest

from charform.cli import main
from charform.errors import ParseError
from charform.fields import GF2, gf2k, ratfunc
from charform.forms import form
from charform.serialize import (
    descriptor_from_json,
    descriptor_to_json,
    fe_from_json,
    fe_to_json,
    form_from_json,
    form_to_json,
)

F4 = gf2k(2)
R2 = ratfunc(GF2)


def write_descriptor(tmp_path, obj, name="desc.json"):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


SPLIT = {"kind": "split_symp", "field": "gf2"}
ORTH = {"kind": "orthogonal", "field": "gf2", "gram": ["0x1", "0x1", "0x1", "0x1"]}
UNIT = {"kind": "unitary_exchange", "field": "gf2"}
INDEX2_RF = {
    "kind": "index2_symp",
    "field": "ratfunc:gf2:t",
    "quaternion": {
        "a": {"num": ["0x0", "0x1"], "den": ["0x1"]},
        "b": {"num": ["0x0", "0x1"], "den": ["0x1"]},
    },
    "h": [
        {"num": ["0x1"], "den": ["0x1"]},
        {"num": ["0x0", "0x1"], "den": ["0x1"]},
        {"num": ["0x1", "0x1"], "den": ["0x1"]},
    ],
}


def test_element_json_round_trip():
    for x in F4.elements():
        assert fe_from_json(F4, fe_to_json(x)) == x
    t = R2.t
    for x in (R2.zero, R2.one, t, (t + R2.one) / (t * t)):
        assert fe_from_json(R2, fe_to_json(x)) == x


def test_form_json_round_trip():
    q = form(R2, [(R2.one, R2.t)], [R2.t])
    assert form_from_json(form_to_json(q)) == q


def test_descriptor_json_round_trip():
    desc = descriptor_from_json(INDEX2_RF)
    again = descriptor_from_json(descriptor_to_json(desc))
    assert again.kind == "index2_symp"
    assert again.us == desc.us
    assert again.quat.a == desc.quat.a and again.quat.b == desc.quat.b


def test_descriptor_json_rejects_malformed():
    with pytest.raises(ParseError):
        descriptor_from_json({"kind": "nope", "field": "gf2"})
    with pytest.raises(ParseError):
        descriptor_from_json({"kind": "index2_symp", "field": "gf2"})
    with pytest.raises(ParseError):
        descriptor_from_json({"kind": "orthogonal", "field": "gf2", "gram": ["0x1"]})


def test_describe_output(tmp_path, capsys):
    path = write_descriptor(tmp_path, SPLIT)
    assert main(["describe", "--input", path]) == 0
    out = capsys.readouterr().out
    assert "Symd dim 28" in out and "4/8/8/8" in out
    path = write_descriptor(tmp_path, ORTH, "orth.json")
    assert main(["describe", "--input", path]) == 0
    assert "Sym dim 10" in capsys.readouterr().out


def test_describe_malformed_json_is_exit_2(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{nope")
    assert main(["describe", "--input", str(path)]) == 2
    assert "malformed JSON" in capsys.readouterr().err


def test_extract_deterministic_reports(tmp_path, capsys):
    path = write_descriptor(tmp_path, UNIT)
    assert main(["extract", "--input", path, "--seed", "5", "--json"]) == 0
    first = capsys.readouterr().out
    assert main(["extract", "--input", path, "--seed", "5", "--json"]) == 0
    second = capsys.readouterr().out
    assert first == second  # byte-identical
    report = json.loads(first)
    assert report["seed"] == 5
    assert report["dims"] == [4, 4, 4, 4]
    assert all(c["result"] == "true" for c in report["checks"])


def test_extract_symplectic_report_shape(tmp_path, capsys):
    path = write_descriptor(tmp_path, SPLIT)
    assert main(["extract", "--input", path, "--case", "symplectic", "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["case"] == "symplectic"
    assert len(report["pi3"]["blocks"]) == 4
    assert len(report["pi5"]["blocks"]) == 16


def test_extract_case_mismatch_is_exit_2(tmp_path, capsys):
    path = write_descriptor(tmp_path, SPLIT)
    assert main(["extract", "--input", path, "--case", "orthogonal"]) == 2


def test_extract_env_seed(tmp_path, capsys, monkeypatch):
    path = write_descriptor(tmp_path, UNIT)
    monkeypatch.setenv("CHARFORM_SEED", "11")
    assert main(["extract", "--input", path, "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["seed"] == 11


def test_verify_exit_codes(capsys):
    assert main(["verify", "--suite", "fields", "--field", "gf2k:2", "--trials", "50"]) == 0
    out = capsys.readouterr().out
    assert "PASS fields.axioms" in out


def test_verify_zero_trials_vacuous(capsys):
    assert main(["verify", "--suite", "fields", "--trials", "0"]) == 0
    err = capsys.readouterr().err
    assert "vacuous" in err


def test_verify_json_deterministic(capsys):
    args = ["verify", "--suite", "quaternions", "--field", "gf2k:3", "--seed", "3",
            "--trials", "40", "--json"]
    assert main(args) == 0
    first = capsys.readouterr().out
    assert main(args) == 0
    assert first == capsys.readouterr().out


def test_orthogonal_extract_report(tmp_path, capsys):
    path = write_descriptor(tmp_path, ORTH)
    rc = main(["extract", "--input", path, "--json"])
    report = json.loads(capsys.readouterr().out)
    assert rc == 0  # unknowns warn, they do not fail
    assert report["phi"]["diag"] and len(report["phi"]["diag"]) == 6
    assert len(report["pi3"]["diag"]) == 8


def test_index2_ratfunc_extract_wire_level(tmp_path, capsys):
    # the closed-form hermitian example through the JSON surface
    path = write_descriptor(tmp_path, INDEX2_RF)
    rc = main(["extract", "--input", path, "--json"])
    report = json.loads(capsys.readouterr().out)
    assert rc == 0
    assert report["case"] == "symplectic" and report["dims"] == [4, 8, 8, 8]
    names = {c["name"]: c["result"] for c in report["checks"]}
    assert names["pi3_matches_closed_form"] == "true"
    assert report["a1"] == {"num": ["0x1"], "den": ["0x1"]}


def test_budget_guard():
    assert main(["verify", "--suite", "fields", "--budget", "0"]) == 2
