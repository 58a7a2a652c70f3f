import io
import json
import sys
from pathlib import Path

import pytest

from cartancover.cli import main
from cartancover.instances import load_instance, parse_instance_text

INSTANCES = Path(__file__).resolve().parent.parent / "instances"


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


# --- classify ---------------------------------------------------------------


def test_classify_diagonal_prints_eigenlines(capsys):
    code, out = run_cli(capsys, "classify", str(INSTANCES / "cartan_diagonal_q.json"))
    assert code == 0
    assert "CartanSplit" in out
    assert "line 1" in out and "mu" in out


def test_classify_nilpotent_reports_witness(capsys):
    code, out = run_cli(capsys, "classify", str(INSTANCES / "cartan_nilpotent_q.json"))
    assert code == 1
    assert "NotDiagonalizable" in out and "x^2" in out


def test_classify_nonsplit_exit_zero(capsys):
    code, out = run_cli(capsys, "classify", str(INSTANCES / "cartan_nonsplit_q.json"))
    assert code == 0
    assert "CartanNonSplit" in out and "x^2 - 2" in out


def test_malformed_rational_is_input_error(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(
        json.dumps(
            {
                "field": {"kind": "Q"},
                "kind": "cartan",
                "payload": {"d": 1, "basis": [[["1/0"]]]},
            }
        )
    )
    code, out = run_cli(capsys, "--format", "machine", "classify", str(bad))
    assert code == 2
    doc = json.loads(out)
    assert doc["ok"] is False and doc["error"]["type"] == "ParseError"


def test_invalid_json_is_input_error(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _ = run_cli(capsys, "classify", str(bad))
    assert code == 2


def test_stdin_instance(capsys, monkeypatch):
    text = (INSTANCES / "cartan_diagonal_q.json").read_text()
    monkeypatch.setattr(sys, "stdin", io.StringIO(text))
    code, out = run_cli(capsys, "classify", "-")
    assert code == 0 and "CartanSplit" in out


# --- cover-build ----------------------------------------------------------------


def test_cover_build_swap_loop(capsys):
    code, out = run_cli(
        capsys, "--format", "machine", "cover-build", str(INSTANCES / "bundle_loop_swap2_q.json")
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["ok"] is True
    assert doc["component_count"] == 1 == doc["flat_section_dim"]
    assert doc["cover"]["payload"]["sigma"] == [[2, 1]]
    assert all(doc["checks"].values())


def test_cover_build_trivial_rank3(capsys):
    code, out = run_cli(
        capsys, "--format", "machine", "cover-build", str(INSTANCES / "bundle_rank3_trivial_q.json")
    )
    doc = json.loads(out)
    assert code == 0 and doc["component_count"] == 3 and doc["split"] is True


def test_cover_build_nonsplit_reports_witness(capsys):
    code, out = run_cli(
        capsys, "--format", "machine", "cover-build", str(INSTANCES / "bundle_nonsplit_f_q.json")
    )
    assert code == 1
    doc = json.loads(out)
    assert doc["error"]["type"] == "NonSplitAtVertex"
    assert "x^2" in doc["error"]["witness"]


def test_cover_build_emitted_instance_reparses(capsys):
    _, out = run_cli(
        capsys, "--format", "machine", "cover-build", str(INSTANCES / "bundle_loop_swap2_q.json")
    )
    doc = json.loads(out)
    emitted = json.dumps(doc["cover"])
    instance = parse_instance_text(emitted)
    assert instance.cover.sigma == ((1, 0),)
    assert instance.line_bundle is not None


# --- pushforward -----------------------------------------------------------------


def test_pushforward_cover_emits_reparseable_bundle(capsys):
    code, out = run_cli(
        capsys, "--format", "machine", "pushforward", str(INSTANCES / "cover_swap_loop_q.json")
    )
    assert code == 0
    doc = json.loads(out)
    bundle_doc = json.dumps(doc["bundle"])
    instance = parse_instance_text(bundle_doc)
    assert instance.bundle.transitions[0].rows[0][1] == 2
    assert instance.algebra is not None


def test_pushforward_parabolic_worked_example(capsys):
    code, out = run_cli(
        capsys,
        "--format",
        "machine",
        "pushforward",
        str(INSTANCES / "parabolic_p1_double_q.json"),
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["degree"] == -1
    assert doc["pardeg_upstairs"] == "0" == doc["pardeg_downstairs"]
    assert doc["conservation_ok"] is True
    assert doc["points"][0]["filtration"] == [
        {"weight": "1/2", "jump": 1},
        {"weight": "0", "jump": 1},
    ]


def test_pushforward_parity_violation_is_input_error(tmp_path, capsys):
    doc = {
        "field": {"kind": "Q"},
        "kind": "parabolic",
        "payload": {
            "gX": 0,
            "degree": 2,
            "components": [2],
            "branch_points": [{"profiles": [2], "weights": ["0"], "component_of_sheet": [0]}],
            "unramified_weights": [],
            "degL": 0,
        },
    }
    bad = tmp_path / "parity.json"
    bad.write_text(json.dumps(doc))
    code, out = run_cli(capsys, "--format", "machine", "pushforward", str(bad))
    assert code == 2
    assert json.loads(out)["error"]["type"] == "NonIntegralGenus"


# --- factor -------------------------------------------------------------------------


def test_factor_4_cycle(capsys):
    code, out = run_cli(
        capsys, "--format", "machine", "factor", str(INSTANCES / "cover_c4_loop_q.json")
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["proper_count"] == 1
    entry = doc["proper_block_systems"][0]
    assert entry["blocks"] == [[1, 3], [2, 4]]
    assert entry["summand_ok"] is True
    assert entry["intermediate"]["payload"]["degree"] == 2
    assert doc["trivial_block_systems"] == [[[1], [2], [3], [4]], [[1, 2, 3, 4]]]


def test_factor_identity_monodromy_has_no_proper_systems(tmp_path, capsys):
    doc = {
        "field": {"kind": "Q"},
        "kind": "cover",
        "payload": {
            "graph": {"vertices": 1, "edges": [[0, 0]]},
            "degree": 2,
            "sigma": [[1, 2]],
        },
    }
    path = tmp_path / "id.json"
    path.write_text(json.dumps(doc))
    code, out = run_cli(capsys, "--format", "machine", "factor", str(path))
    assert code == 0
    assert json.loads(out)["proper_count"] == 0


def test_factor_respects_max_degree(capsys):
    code, out = run_cli(
        capsys,
        "--format",
        "machine",
        "factor",
        str(INSTANCES / "cover_c4_loop_q.json"),
        "--max-degree",
        "3",
    )
    assert code == 2
    assert json.loads(out)["error"]["type"] == "DegreeTooLarge"


def test_factor_primitive_action(tmp_path, capsys):
    doc = {
        "field": {"kind": "Q"},
        "kind": "cover",
        "payload": {
            "graph": {"vertices": 1, "edges": [[0, 0], [0, 0]]},
            "degree": 3,
            "sigma": [[2, 1, 3], [2, 3, 1]],
        },
    }
    path = tmp_path / "prim.json"
    path.write_text(json.dumps(doc))
    code, out = run_cli(capsys, "--format", "machine", "factor", str(path))
    assert code == 0
    assert json.loads(out)["proper_count"] == 0


# --- selftest ------------------------------------------------------------------------


def test_selftest_passes_and_reports(capsys):
    code, out = run_cli(capsys, "--format", "machine", "selftest", "--seed", "1", "--count", "6")
    assert code == 0
    doc = json.loads(out)
    assert doc["failures"] == 0
    assert len(doc["results"]) == 6
    assert {r["field"] for r in doc["results"]} == {"Q", "F5", "F7"}


def test_selftest_count_zero(capsys):
    code, out = run_cli(capsys, "--format", "machine", "selftest", "--count", "0")
    assert code == 0
    assert json.loads(out)["results"] == []


def test_selftest_field_restriction(capsys):
    code, out = run_cli(
        capsys, "--format", "machine", "selftest", "--count", "4", "--field", "F5"
    )
    assert code == 0
    doc = json.loads(out)
    assert {r["field"] for r in doc["results"]} == {"F5"}


# --- determinism ------------------------------------------------------------------------


@pytest.mark.parametrize(
    "argv",
    [
        ("--format", "machine", "classify", str(INSTANCES / "cartan_diagonal_q.json")),
        ("--format", "machine", "classify", str(INSTANCES / "cartan_nonsplit_q.json")),
        ("--format", "machine", "cover-build", str(INSTANCES / "bundle_loop_swap2_q.json")),
        ("--format", "machine", "pushforward", str(INSTANCES / "cover_swap_loop_q.json")),
        ("--format", "machine", "pushforward", str(INSTANCES / "parabolic_p1_double_q.json")),
        ("--format", "machine", "factor", str(INSTANCES / "cover_c4_loop_q.json")),
        ("--format", "machine", "selftest", "--seed", "7", "--count", "5"),
    ],
)
def test_machine_reports_are_byte_identical(capsys, argv):
    code1, out1 = run_cli(capsys, *argv)
    code2, out2 = run_cli(capsys, *argv)
    assert code1 == code2
    assert out1.encode() == out2.encode()


def test_machine_report_json_roundtrip(capsys):
    _, out = run_cli(
        capsys, "--format", "machine", "cover-build", str(INSTANCES / "bundle_loop_swap2_q.json")
    )
    doc = json.loads(out)
    assert json.loads(json.dumps(doc)) == doc


def test_missing_file_is_input_error(capsys):
    code, _ = run_cli(capsys, "classify", "/nonexistent/file.json")
    assert code == 2


def test_elliptic_analogue_instance(capsys):
    code, out = run_cli(
        capsys,
        "--format",
        "machine",
        "cover-build",
        str(INSTANCES / "bundle_elliptic_analogue_f7.json"),
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["component_count"] == 1 == doc["flat_section_dim"]


def test_instance_files_load(capsys):
    for path in sorted(INSTANCES.glob("*.json")):
        load_instance(str(path))
