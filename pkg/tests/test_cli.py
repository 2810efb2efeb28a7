"""CLI: command dispatch, exit codes, fixture emission, determinism."""

import json
import subprocess
import sys

import pytest

from koszulity.cli import RunConfig, emit_fixtures, format_report, main, run


@pytest.fixture(scope="module")
def fixture_dir(tmp_path_factory):
    target = tmp_path_factory.mktemp("fixtures")
    emit_fixtures(target)
    return target


def invoke(argv):
    import io
    from contextlib import redirect_stdout

    buf = io.StringIO()
    with redirect_stdout(buf):
        status = main(argv)
    return status, buf.getvalue()


def test_emit_fixtures_count_and_manifest(fixture_dir):
    files = sorted(p.name for p in fixture_dir.iterdir())
    assert len(files) >= 10
    manifest = json.loads((fixture_dir / "manifest.json").read_text())
    assert len(manifest) >= 10
    for entry in manifest:
        assert (fixture_dir / entry["file"]).exists()


def test_manifest_verdicts_reproduce(fixture_dir):
    manifest = json.loads((fixture_dir / "manifest.json").read_text())
    for entry in manifest:
        args = entry.get("args", {})
        argv = [entry["command"], str(fixture_dir / entry["file"])]
        for key, value in args.items():
            argv += [f"--{key}", str(value)]
        status, out = invoke(argv)
        assert status == 0, (entry, out)
        report = json.loads(out)
        for key, expected in entry["expected"].items():
            assert report[key] == expected, (entry["file"], key, report.get(key))


def test_fixtures_reparse_losslessly(fixture_dir):
    from koszulity.category import category_to_json, load_category
    from koszulity.cli import _read_document
    from koszulity.posets import poset_from_json, poset_to_json
    from koszulity.toric import load_toric_spec, toric_spec_to_json

    for name in ("beilinson-p1.json", "beilinson-p2.json", "hexagon-quiver.json", "kx-trunc6.json"):
        doc = _read_document(str(fixture_dir / name))
        cat = load_category(doc)
        again = load_category(category_to_json(cat))
        assert category_to_json(again) == category_to_json(cat)
    for name in ("diamond-poset.json", "hexagon-poset.json"):
        doc = _read_document(str(fixture_dir / name))
        assert poset_to_json(poset_from_json(doc)) == doc
    for name in ("f2.json", "f3.json", "p2-collection.json", "p1xp1.json", "weighted-p112.json"):
        doc = _read_document(str(fixture_dir / name))
        assert toric_spec_to_json(load_toric_spec(doc)) == doc
    toml_spec = load_toric_spec(_read_document(str(fixture_dir / "f1.toml")))
    assert toml_spec.group.free_rank == 2


def test_exit_code_zero_on_negative_verdicts(fixture_dir):
    status, out = invoke(["koszul", str(fixture_dir / "hexagon-quiver.json")])
    assert status == 0
    assert json.loads(out)["koszul"] is False


def test_exit_code_two_on_parse_error(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    status, out = invoke(["koszul", str(bad)])
    assert status == 2
    report = json.loads(out)
    assert report["error_kind"] == "ParseError"
    assert "line" in report["error"]


def test_exit_code_two_on_schema_error(tmp_path):
    doc = tmp_path / "doc.json"
    doc.write_text(json.dumps({"objects": ["a"]}))
    status, out = invoke(["koszul", str(doc)])
    assert status == 2
    assert json.loads(out)["error_kind"] == "SchemaError"
    status, out = invoke(["koszul", str(tmp_path / "missing.json")])
    assert status == 2


def test_ext_command_degree_two(fixture_dir):
    status, out = invoke(
        ["ext", str(fixture_dir / "beilinson-p2.json"), "--from", "v3", "--to", "v1", "--degree", "2"]
    )
    assert status == 0
    assert json.loads(out)["ext"] == {"2": 3}


def test_ext_command_all_degrees(fixture_dir):
    status, out = invoke(["ext", str(fixture_dir / "beilinson-p2.json"), "--from", "v3", "--to", "v1"])
    assert status == 0
    table = json.loads(out)["ext"]
    assert table["2"] == {"2": 3}
    assert table["0"] == {} and table["1"] == {}


def test_toric_command_f1(fixture_dir):
    status, out = invoke(["toric", str(fixture_dir / "f1.toml")])
    assert status == 0
    report = json.loads(out)
    assert report["koszul"] is False
    assert report["witness"]["length"] == 3


def test_rs_quotient_command(fixture_dir):
    status, out = invoke(["rs-quotient", str(fixture_dir / "hexagon-rs.json")])
    assert status == 0
    report = json.loads(out)
    assert report["axioms_ok"] is True
    assert report["objects"] == 5
    assert report["morphisms"] == 15
    from koszulity.category import load_category

    assert load_category(report["category"]).num_morphisms == 15


def test_fibration_command(fixture_dir):
    status, out = invoke(["fibration", str(fixture_dir / "diamond-to-3chain.json")])
    assert status == 0
    report = json.loads(out)
    assert report["almost_discrete_fibration"] is False
    lifts = {tuple(l) for l in report["almost_witness"]["lifts"]}
    assert lifts == {("[b,d]", "[a,b]"), ("[c,d]", "[a,c]")}


def test_quadratic_command(fixture_dir):
    status, out = invoke(["quadratic", str(fixture_dir / "hexagon-quiver.json")])
    assert status == 0
    report = json.loads(out)
    assert report["verdict"] == "not_quadratic"
    assert report["sufficient_check"] is False


def test_cm_command_char_flag(fixture_dir):
    status, out = invoke(["cm", str(fixture_dir / "diamond-poset.json"), "--char", "2"])
    assert status == 0
    assert json.loads(out)["locally_cohen_macaulay"] is True


def test_validate_command(fixture_dir):
    status, out = invoke(["validate", str(fixture_dir / "square-category.json")])
    assert status == 0
    report = json.loads(out)
    assert report["valid"] is True and report["violations"] == []


def test_deterministic_reports(fixture_dir):
    argv = ["koszul", str(fixture_dir / "hexagon-quiver.json")]
    out1 = invoke(argv)[1]
    out2 = invoke(argv)[1]
    assert out1 == out2
    argv = ["toric", str(fixture_dir / "p1xp1.json")]
    assert invoke(argv)[1] == invoke(argv)[1]


def test_table_output(fixture_dir):
    status, out = invoke(["koszul", str(fixture_dir / "beilinson-p1.json"), "--output", "table"])
    assert status == 0
    assert "koszul: True" in out


def test_max_length_override(fixture_dir):
    status, out = invoke(["koszul", str(fixture_dir / "kx-trunc6.json"), "--max-length", "4"])
    assert status == 0
    assert json.loads(out)["checked_up_to"] == 4


def test_non_skeletal_input_is_collapsed_before_analysis(tmp_path):
    # two isomorphic objects collapse to one before the Koszulity check
    doc = {
        "objects": ["a", "a2", "b"],
        "morphisms": [
            {"label": "u", "src": "a", "tgt": "a2", "len": 0},
            {"label": "u_inv", "src": "a2", "tgt": "a", "len": 0},
            {"label": "f", "src": "a", "tgt": "b", "len": 1},
            {"label": "f2", "src": "a2", "tgt": "b", "len": 1},
        ],
        "compose": [],
    }
    # ids are synthesized as morphisms 4, 5, 6 for a, a2, b
    doc["compose"] = [[0, 1, 4], [1, 0, 5], [0, 3, 2], [1, 2, 3]]
    path = tmp_path / "iso.json"
    path.write_text(json.dumps(doc))
    status, out = invoke(["koszul", str(path)])
    assert status == 0
    assert json.loads(out)["koszul"] is True


def test_invalid_category_input_rejected(tmp_path):
    doc = {
        "objects": ["a", "b", "c"],
        "morphisms": [
            {"label": "f", "src": "a", "tgt": "b", "len": 1},
            {"label": "g", "src": "b", "tgt": "c", "len": 1},
        ],
        "compose": [],
    }
    path = tmp_path / "nocomp.json"
    path.write_text(json.dumps(doc))
    status, out = invoke(["koszul", str(path)])
    assert status == 2
    assert "missing-composite" in json.loads(out)["error"]
    # but validate reports instead of rejecting
    status, out = invoke(["validate", str(path)])
    assert status == 0
    assert json.loads(out)["valid"] is False


def test_exit_code_two_on_failed_preconditions(tmp_path):
    # rs-quotient on a relation that fails the axioms is an input error
    doc = {
        "poset": {"elements": ["0", "1", "2"], "relations": [["0", "1"], ["1", "2"]]},
        "classes": [[["0", "1"], ["1", "2"]]],
    }
    path = tmp_path / "rel.json"
    path.write_text(json.dumps(doc))
    status, out = invoke(["rs-quotient", str(path)])
    assert status == 2
    assert json.loads(out)["error_kind"] == "AxiomsNotVerified"
    # non-pointed toric data likewise
    toric = tmp_path / "bad.json"
    toric.write_text(
        json.dumps(
            {
                "free_rank": 1,
                "variables": [{"name": "x", "degree": [1]}, {"name": "y", "degree": [-1]}],
                "collection": [[0], [1]],
            }
        )
    )
    status, out = invoke(["toric", str(toric)])
    assert status == 2
    assert json.loads(out)["error_kind"] == "NotPointed"


def test_exit_code_three_on_internal_failure(tmp_path, monkeypatch):
    import koszulity.cli as cli_mod

    doc = tmp_path / "p.json"
    doc.write_text(json.dumps({"elements": ["a"], "relations": []}))
    monkeypatch.setattr(cli_mod, "is_locally_CM", lambda *a, **k: 1 / 0)
    status, report = cli_mod.run(cli_mod.RunConfig(command="cm", input_path=str(doc)))
    assert status == 3
    assert report["error_kind"] == "ZeroDivisionError"


def test_console_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "koszulity.cli", "--version"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "koszulity" in proc.stdout


def test_run_config_api(tmp_path):
    target = tmp_path / "fx"
    status, report = run(RunConfig(command="emit-fixtures", fixtures_dir=str(target)))
    assert status == 0
    assert len(report["files"]) >= 10
    text = format_report(report, "table")
    assert "command: emit-fixtures" in text
