import json

import pytest

from dive import cli, ingest
from dive.ingest import FIXTURE_TARGET
from dive.service import schemas


@pytest.fixture()
def fixture_file(tmp_path, fixture_doc):
    path = tmp_path / "ladyada.dive.json"
    path.write_bytes(ingest.serialize_document(fixture_doc))
    return str(path)


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_fixture_then_validate_pipesafe(tmp_path, capsys):
    out_file = tmp_path / "out.dive.json"
    code, _, _ = run(capsys, "fixture", "lady-ada", "-o", str(out_file))
    assert code == 0
    code, out, _ = run(capsys, "validate", str(out_file))
    assert code == 0
    assert out.startswith("ok:")


def test_validate_json_matches_api_schema(fixture_file, capsys):
    code, out, _ = run(capsys, "validate", fixture_file, "--json")
    assert code == 0
    schemas.DocumentCreated.model_validate_json(out)


def test_validate_invalid_file(tmp_path, capsys):
    bad = tmp_path / "bad.dive.json"
    bad.write_text(
        json.dumps(
            {
                "nodes": [{"id": "e1", "kind": "Entity", "label": "x"}],
                "edges": [{"relation": "used", "from": "e1", "to": "ghost"}],
                "meta": {"formatVersion": "dive/1"},
            }
        )
    )
    code, _, err = run(capsys, "validate", str(bad))
    assert code == 1
    assert "UnknownEndpoint" in err

    code, out, _ = run(capsys, "validate", str(bad), "--json")
    assert code == 1
    body = schemas.ErrorBody.model_validate_json(out)
    assert body.code == "ValidationFailed"


def test_unknown_fixture_name(capsys):
    code, _, err = run(capsys, "fixture", "nope")
    assert code == 2


def test_usage_error_exit_2(capsys):
    with pytest.raises(SystemExit) as err:
        cli.main(["provenance"])  # missing file and --target
    assert err.value.code == 2


def test_provenance_human_output(fixture_file, capsys):
    code, out, _ = run(capsys, "provenance", fixture_file, "--target", FIXTURE_TARGET)
    assert code == 0
    assert "environments:" in out
    assert "geo-infer-1" in out


def test_provenance_json_matches_schema(fixture_file, capsys):
    code, out, _ = run(
        capsys, "provenance", fixture_file, "--target", FIXTURE_TARGET, "--json"
    )
    assert code == 0
    parsed = schemas.AnalysisModel.model_validate_json(out)
    target_label = next(l for l in parsed.labels if l.node == FIXTURE_TARGET)
    assert len(target_label.environments) == 3


def test_refute_self_report_partial(fixture_file, capsys):
    code, out, _ = run(
        capsys,
        "refute",
        fixture_file,
        "--target",
        FIXTURE_TARGET,
        "--disable",
        "sourceClass:SELF-REPORT",
    )
    assert code == 0
    lines = dict(
        (line.split()[1], line.split()[0]) for line in out.strip().splitlines()
    )
    assert lines[FIXTURE_TARGET] == "PartiallyAffected"
    assert lines["geo-infer-1"] == "Refuted"


def test_refute_json_matches_schema(fixture_file, capsys):
    code, out, _ = run(
        capsys,
        "refute",
        fixture_file,
        "--target",
        FIXTURE_TARGET,
        "--disable",
        "sourceClass:SELF-REPORT",
        "--disable",
        "operationClass:Named Entity Recognition",
        "--json",
    )
    assert code == 0
    state = schemas.WhatIfModel.model_validate_json(out)
    assert state.statuses[FIXTURE_TARGET] == "Refuted"


def test_confidence_matches_closed_form(fixture_file, fixture_analysis, capsys):
    code, out, _ = run(
        capsys,
        "confidence",
        fixture_file,
        "--target",
        FIXTURE_TARGET,
        "--and",
        "min",
        "--or",
        "max",
        "--json",
    )
    assert code == 0
    body = schemas.ConfidenceModel.model_validate_json(out)
    from dive.propagate import closed_form_check

    expected = closed_form_check(fixture_analysis.labels, body.seeds)
    assert body.values == dict(expected.values)
    assert body.values[FIXTURE_TARGET] == 1.0


def test_confidence_unknown_disable_exits_1(fixture_file, capsys):
    code, _, err = run(
        capsys,
        "confidence",
        fixture_file,
        "--target",
        FIXTURE_TARGET,
        "--disable",
        "ghost",
    )
    assert code == 1
    assert "UnknownElement" in err


def test_export_dot(fixture_file, tmp_path, capsys):
    out_file = tmp_path / "graph.dot"
    code, _, _ = run(
        capsys,
        "export-dot",
        fixture_file,
        "--target",
        FIXTURE_TARGET,
        "--disable",
        "sourceClass:SELF-REPORT",
        "-o",
        str(out_file),
    )
    assert code == 0
    text = out_file.read_text()
    assert text.startswith("digraph")
    assert "rankdir=LR" in text
    assert '"geo-infer-1"' in text
    assert "gray85" in text  # refuted styling present


def test_stdin_input(fixture_doc, capsys, monkeypatch):
    import io

    data = ingest.serialize_document(fixture_doc)
    monkeypatch.setattr(
        "sys.stdin", type("S", (), {"buffer": io.BytesIO(data)})()
    )
    code, out, _ = run(capsys, "validate", "-")
    assert code == 0
    assert out.startswith("ok:")


def test_missing_file_exits_1(capsys):
    code, _, err = run(capsys, "validate", "/nonexistent/never.dive.json")
    assert code == 1
    assert "FileNotFound" in err
