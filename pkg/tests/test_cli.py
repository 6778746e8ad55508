from __future__ import annotations

import io
import json
import subprocess
import sys

import pytest
import yaml

from mapsphere.cli import run

from conftest import CORPUS, DATA


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_validate_ok():
    code, out, _ = call("validate", "-i", str(CORPUS / "cp3.json"), "-f", "json")
    doc = json.loads(out)
    assert code == 0 and doc["valid"] and doc["d_X"] == 4 and doc["primitive"] is False
    assert [b["label"] for b in doc["basis"]] == ["1", "t", "PD(t)", "w"]


@pytest.mark.parametrize("argv,want", [
    (["validate", "-i", str(DATA / "singular_pairing.json")], 1),
    (["selfclose", "-i", str(DATA / "singular_pairing.json")], 1),
    (["validate", "-i", str(DATA / "bad_coefficient.json")], 3),
    (["validate", "-i", str(DATA / "truncated.json")], 3),
    (["validate", "-i", str(DATA / "missing.json")], 3),
    (["selfclose", "-i", str(CORPUS / "cp2.json"), "-k", "2"], 1),
    (["model", "-i", str(CORPUS / "cp2.json"), "--minimal"], 1),
    (["frobnicate", "-i", str(CORPUS / "cp2.json")], 3),
    (["validate"], 3),
])
def test_exit_codes(argv, want):
    code, _, err = call(*argv)
    assert code == want
    assert err


def test_singular_pairing_names_degree():
    _, _, err = call("validate", "-i", str(DATA / "singular_pairing.json"))
    assert "H^2" in err


def test_text_and_json_agree():
    for cmd in (["selfclose", "-k", "1"], ["ranks", "-k", "0"], ["model", "-k", "0", "--minimal"]):
        args = [cmd[0], "-i", str(CORPUS / "cp2.json"), *cmd[1:]]
        _, text, _ = call(*args)
        _, js, _ = call(*args, "-f", "json")
        assert yaml.safe_load(text) == json.loads(js)


def test_ranks_and_selfclose_values():
    _, out, _ = call("ranks", "-i", str(CORPUS / "cp3.json"), "-k", "1", "-f", "json")
    assert json.loads(out)["ranks"] == {"2": 1, "4": 1, "7": 1, "9": 1, "11": 1}
    _, out, _ = call("selfclose", "-i", str(CORPUS / "s3xs3.json"), "-k", "0", "-f", "json")
    doc = json.loads(out)
    assert doc["NE"] == 6 and doc["primitive"] is True and doc["verified"] is True


def test_verify_reports_vacuous_layers():
    code, out, _ = call("verify", "-i", str(CORPUS / "cp2.json"), "-f", "json")
    doc = json.loads(out)
    assert code == 0 and doc["passed"]
    by_name = {c["name"]: c for c in doc["checks"]}
    assert by_name["xi-equals-dmu"]["vacuous"] is True
    code, out, _ = call("verify", "-i", str(CORPUS / "cp3.json"), "-f", "json")
    assert json.loads(out)["checks"] and code == 0


def test_full_model_output():
    code, out, _ = call("model", "-i", str(CORPUS / "cp2.json"), "-f", "json")
    doc = json.loads(out)
    assert code == 0 and doc["minimal"] is None
    assert any(g["degree"] == 0 for g in doc["generators"])


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "mapsphere", "selfclose", "-i", str(CORPUS / "cp2.json"),
                           "-k", "1", "-f", "json"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["NE"] == 7
