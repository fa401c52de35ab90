import csv
import io
import json
import pathlib
import subprocess
import sys

import jsonschema
import pytest

from hardy_ckn.anchors import ANCHORS
from hardy_ckn.cli import run
from hardy_ckn.core import mu_sobolev

ROOT = pathlib.Path(__file__).resolve().parents[1]
SCHEMAS = ROOT / "src" / "hardy_ckn" / "schemas"


def call(*argv):
    buf = io.StringIO()
    code = run(list(argv), stdout=buf)
    return code, buf.getvalue()


def call_json(*argv):
    code, out = call(*argv, "--json")
    return code, json.loads(out)


def schema(name):
    return json.loads((SCHEMAS / f"{name}.schema.json").read_text())


def test_constant_matches_core():
    code, rec = call_json("constant", "--n", "3", "--gamma", "0", "--s", "0")
    assert code == 0
    assert rec["result"]["value"] == mu_sobolev(3)
    assert rec["provenance"] == "ClosedForm"
    jsonschema.validate(rec, schema("result_record"))


def test_hi_check_bessel():
    code, rec = call_json("hi-check", "--potential", "const:1", "--R", "3")
    assert code == 0
    assert rec["result"]["is_HI"] is False
    assert rec["result"]["first_zero"] == pytest.approx(2.404825557695773, abs=1e-9)
    assert "tolerance" in rec["metadata"]


def test_table_csv_has_four_rows():
    code, out = call("table", "--which", "1", "--csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert len(rows) == 5
    assert rows[0] == ["row", "rule", "hardy_term", "dimension", "singularity", "condition", "extremal"]
    assert out.endswith("\r\n")


@pytest.mark.parametrize(
    "argv",
    [
        ("constant", "--n", "5", "--gamma", "1", "--s", "0.5"),
        ("exponents", "--n", "5", "--gamma", "2", "--location", "Boundary"),
        ("ckn-map", "--n", "5", "--a", "0.3", "--b", "0.6"),
        ("mass", "--n", "5", "--gamma", "2", "--lambda", "3"),
        ("eigen", "--n", "5", "--gamma", "2", "--which", "lambda-star"),
        ("verdict", "--case", "boundary", "--n", "4", "--gamma", "1", "--s", "0", "--mean-curvature-sign", "Negative"),
    ],
)
def test_csv_and_json_agree(argv):
    _, rec = call_json(*argv)
    _, text = call(*argv, "--csv")
    header, values = list(csv.reader(io.StringIO(text)))
    parsed = dict(zip(header, values))
    from hardy_ckn.cli import _cell, _flatten

    flat = _flatten(rec["result"])
    assert sorted(flat) == sorted(header)
    for k, v in flat.items():
        if isinstance(v, float):
            assert float(parsed[k]) == v  # exact double round trip
        else:
            assert parsed[k] == _cell(v)


def test_extremal_rows_and_metadata():
    code, rec = call_json("extremal", "--n", "5", "--gamma", "1", "--s", "0.5", "--count", "256",
                          "--r-min", "1e-6", "--r-max", "1e6")
    assert code == 0
    assert len(rec["rows"]) == 256
    assert rec["metadata"]["grid"]["count"] == 256
    assert rec["result"]["el_residual"] < 1e-3


def test_minimize_record():
    code, rec = call_json("minimize", "--n", "5", "--gamma", "1", "--s", "0.5", "--lambda", "0",
                          "--eps-sequence", "0.4,0.2,0.1", "--count", "1024")
    assert code == 0
    assert [r["eps"] for r in rec["rows"]] == [0.4, 0.2, 0.1]
    jsonschema.validate(rec, schema("result_record"))


def test_domain_error_exit_1():
    code, out = call("constant", "--n", "3", "--gamma", "5", "--s", "0")
    assert code == 1
    err = json.loads(out)["error"]
    assert err["code"] == "out_of_range" and "gamma" in err["message"]
    code, out = call("hi-check", "--potential", "bogus:1", "--R", "1")
    assert code == 1 and json.loads(out)["error"]["code"] == "out_of_range"


@pytest.mark.parametrize(
    "argv",
    [
        ("constant", "--n", "3"),
        ("constant", "--n", "3", "--gamma", "nan", "--s", "0"),
        ("constant", "--n", "3", "--gamma", "abc", "--s", "0"),
        ("nosuch",),
        ("ckn-map", "--n", "3"),
    ],
)
def test_usage_error_exit_2(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        run(list(argv))
    assert exc.value.code == 2


def test_output_is_byte_identical_across_processes():
    argv = [sys.executable, "-m", "hardy_ckn", "mass", "--n", "5", "--gamma", "2", "--lambda", "1.5"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == b and a


def test_output_dir_env(tmp_path, monkeypatch):
    monkeypatch.setenv("HARDY_CKN_OUT", str(tmp_path))
    code, out = call("table", "--which", "2", "--csv")
    files = list(tmp_path.iterdir())
    assert code == 0 and len(files) == 1
    assert files[0].name.startswith("table-") and files[0].suffix == ".csv"
    assert files[0].read_bytes().decode() == out


def test_config_hash_depends_on_request():
    _, a = call_json("constant", "--n", "3", "--gamma", "0", "--s", "0")
    _, b = call_json("constant", "--n", "4", "--gamma", "0", "--s", "0")
    _, c = call_json("constant", "--n", "3", "--gamma", "0", "--s", "0")
    assert a["config_hash"] != b["config_hash"] and a["config_hash"] == c["config_hash"]


def test_citations_resolve_to_anchor_index():
    readme = (ROOT / "README.md").read_text()
    argvs = [
        ("constant", "--n", "3", "--gamma", "0", "--s", "0"),
        ("constant", "--n", "4", "--gamma", "0", "--s", "1"),
        ("constant", "--n", "4", "--gamma", "0", "--s", "2"),
        ("constant", "--n", "4", "--gamma", "0.5", "--s", "1"),
        ("exponents", "--n", "5", "--gamma", "1"),
        ("exponents", "--n", "5", "--gamma", "1", "--location", "Boundary"),
        ("ckn-map", "--n", "5", "--gamma", "1", "--s", "0.5"),
        ("hi-check", "--potential", "logsq:1", "--R", "0.3"),
        ("mass", "--n", "5", "--gamma", "2"),
        ("eigen", "--n", "5", "--gamma", "2"),
        ("verdict", "--case", "cone", "--n", "3", "--gamma", "1", "--s", "0", "--domain", "HalfSpace"),
        ("verdict", "--case", "hardy-constant", "--n", "3", "--domain", "BoundedSmooth", "--location", "Boundary"),
        ("table", "--which", "3"),
    ]
    for argv in argvs:
        code, rec = call_json(*argv)
        assert code == 0, argv
        for cite in rec["citations"]:
            assert cite in ANCHORS
            assert f"`{cite}`" in readme, cite


def test_verify_fast_report_matches_schema():
    code, rec = call_json("verify", "--level", "fast")
    assert code == 0
    jsonschema.validate(rec, schema("verify_report"))
    jsonschema.validate(rec, schema("result_record"))
    assert [c["criterion"] for c in rec["result"]["criteria"]] == [1, 2, 3, 4, 6, 8, 9, 10]
    assert all(c["passed"] for c in rec["result"]["criteria"])
    assert not any("seconds" in c for c in rec["result"]["criteria"])


def test_pretty_output():
    code, out = call("exponents", "--n", "5", "--gamma", "2", "--pretty")
    assert code == 0 and "result.minus: 1.0" in out
