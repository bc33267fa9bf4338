import io
import json
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import jsonschema
import pytest

from hirzebruch.catalog import build
from hirzebruch.cli import main
from hirzebruch.io import (
    InputError,
    arrangement_from_json,
    arrangement_to_json,
    load_arrangement,
    parse_rational,
    save_arrangement,
)

SCHEMAS = Path(__file__).resolve().parent.parent / "docs" / "schemas"


def schema(name):
    return json.loads((SCHEMAS / name).read_text())


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def test_parse_rational():
    assert parse_rational("-3/4") == Fraction(-3, 4)
    assert parse_rational("7") == 7
    for bad in ["1/0", "x", "1.5", 3, "1/-2"]:
        with pytest.raises(InputError):
            parse_rational(bad)


@pytest.mark.parametrize("name", ["coxeter3", "coxeter5", "hesse", "ceva4", "extended_ceva3"])
def test_round_trip(tmp_path, name):
    arr = build(name)
    doc = arrangement_to_json(arr)
    jsonschema.validate(doc, schema("arrangement.schema.json"))
    p = tmp_path / "a.json"
    save_arrangement(arr, p)
    back = load_arrangement(p)
    assert back.field.min_poly == arr.field.min_poly
    assert [l.key() for l in back.lines] == [l.key() for l in arr.lines]
    assert arrangement_to_json(back) == doc


@pytest.mark.parametrize(
    "mutate",
    [
        lambda d: d.pop("lines"),
        lambda d: d["lines"][0].pop(),
        lambda d: d["lines"][0].__setitem__(0, ["1", "2", "3", "4", "5"]),
        lambda d: d.__setitem__("schema", "other/9"),
        lambda d: d["field"].__setitem__("min_poly", ["1", "0", "1"]),  # x^2 + 1 has no real root near 1.6
        lambda d: d["lines"].append(d["lines"][0]),  # repeated line
    ],
)
def test_malformed_input(mutate):
    doc = arrangement_to_json(build("coxeter5"))
    mutate(doc)
    with pytest.raises(InputError):
        arrangement_from_json(doc)


def _emit(tmp_path, name):
    p = tmp_path / f"{name}.json"
    assert main(["catalog", "emit", name, "-o", str(p)]) == 0
    return p


def test_check_exit_codes(tmp_path, capsys):
    good = _emit(tmp_path, "coxeter4")
    capsys.readouterr()
    code, out = run(["check", str(good), "--json", "--no-timings"], capsys)
    assert code == 0
    rep = json.loads(out)
    jsonschema.validate(rep, schema("report.schema.json"))
    assert rep["pass"] and rep["results"]["hirzebruch"]["n"] == 3

    # dropping a line breaks the Hirzebruch property: exit 1
    doc = json.loads(good.read_text())
    doc["lines"].pop()
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    code, out = run(["check", str(bad), "--json"], capsys)
    assert code == 1 and not json.loads(out)["pass"]

    # malformed: exit 2
    junk = tmp_path / "junk.json"
    junk.write_text("{not json")
    code, out = run(["check", str(junk), "--json"], capsys)
    assert code == 2
    code, _ = run(["check", str(tmp_path / "missing.json")], capsys)
    assert code == 2


def test_check_complex_entry(tmp_path, capsys):
    p = _emit(tmp_path, "hesse")
    capsys.readouterr()
    code, out = run(["check", str(p), "--json"], capsys)
    assert code == 0
    assert json.loads(out)["results"]["structural"].startswith("not applicable")


def test_json_without_timings_is_byte_identical(tmp_path, capsys):
    p = _emit(tmp_path, "coxeter5")
    capsys.readouterr()
    outs = [run(["check", str(p), "--json", "--no-timings"], capsys)[1] for _ in range(2)]
    assert outs[0] == outs[1]
    outs = [run(["consistency", "--json", "--no-timings"], capsys)[1] for _ in range(2)]
    assert outs[0] == outs[1]


def test_catalog_list_and_unknown(capsys):
    code, out = run(["catalog", "list", "--json"], capsys)
    assert code == 0
    names = [e["name"] for e in json.loads(out)["results"]["entries"]]
    assert "coxeter5" in names and "extended_hesse" not in names
    code, out = run(["catalog", "list", "--all", "--json"], capsys)
    assert "extended_hesse" in [e["name"] for e in json.loads(out)["results"]["entries"]]
    code, _ = run(["catalog", "emit", "nosuch"], capsys)
    assert code == 2


def test_catalog_emit_stdout_is_arrangement(capsys):
    code, out = run(["catalog", "emit", "ceva3"], capsys)
    assert code == 0
    jsonschema.validate(json.loads(out), schema("arrangement.schema.json"))


def test_metric_command(tmp_path, capsys):
    p = _emit(tmp_path, "coxeter4")
    capsys.readouterr()
    code, out = run(["metric", str(p), "--json", "--no-timings"], capsys)
    assert code == 0
    res = json.loads(out)["results"]
    assert [a["deg"] for a in res["face_angle_classes"][0]] == pytest.approx([90.0, 54.735610, 35.264390], abs=1e-6)
    code, _ = run(["metric", str(p), "--n", "4"], capsys)
    assert code == 1
    code, _ = run(["metric", str(_emit(tmp_path, "hesse"))], capsys)
    assert code == 2
    code, _ = run(["metric", str(_emit(tmp_path, "coxeter3")), "--n", "1"], capsys)
    assert code == 2


def test_search_command(tmp_path, capsys):
    cert = tmp_path / "cert.json"
    code, out = run(["search", "--n", "2", "--mode", "paper_pruned", "--certificate", str(cert), "--json"], capsys)
    assert code == 0
    assert json.loads(out)["results"]["matches"] == ["coxeter3"]
    jsonschema.validate(json.loads(cert.read_text()), schema("search-certificate.schema.json"))
    code, out = run(["search", "--n", "3", "--budget", "200", "--json"], capsys)
    assert code == 3
    rep = json.loads(out)
    assert rep["results"]["exhausted_budget"] and not rep["pass"]
    code, _ = run(["search", "--n", "0"], capsys)
    assert code == 2


def test_consistency_command(capsys):
    code, out = run(["consistency", "--json"], capsys)
    assert code == 0
    assert json.loads(out)["results"]["solutions"] == [[3, 2], [4, 3], [5, 5]]
    code, _ = run(["consistency", "--dmax", "2"], capsys)
    assert code == 2


def test_polygon_selftest_small(capsys):
    code, out = run(["polygon", "selftest", "--samples", "20", "--seed", "3", "--json", "--no-timings"], capsys)
    assert code == 0
    rep = json.loads(out)
    jsonschema.validate(rep, schema("report.schema.json"))
    assert rep["results"]["pass"]
    code, _ = run(["polygon", "selftest", "--samples", "0"], capsys)
    assert code == 2


def test_arr_tol_env(tmp_path, capsys, monkeypatch):
    p = _emit(tmp_path, "coxeter5")
    capsys.readouterr()
    monkeypatch.setenv("ARR_TOL", "banana")
    code, _ = run(["metric", str(p)], capsys)
    assert code == 2
    monkeypatch.setenv("ARR_TOL", "1e-6")
    code, _ = run(["metric", str(p)], capsys)
    assert code == 0


def test_console_script_pipeline(tmp_path):
    emit = subprocess.run([sys.executable, "-m", "hirzebruch.cli", "catalog", "emit", "coxeter5"],
                          capture_output=True, text=True, check=True)
    chk = subprocess.run([sys.executable, "-m", "hirzebruch.cli", "check", "-"],
                         input=emit.stdout, capture_output=True, text=True)
    assert chk.returncode == 0 and "check: PASS" in chk.stdout
