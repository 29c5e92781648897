import json
import subprocess
import sys

import pytest

from ontotwin.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, main
from ontotwin.ontology import template_data

GOLDEN_AERO_42_30 = "22748d0764428ec9e507125b0f7fe0d872b33bcca0606ada350e0596cef314fd"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_validate_template(capsys):
    code, out, _ = run(capsys, "validate", "aerospace")
    assert code == EXIT_OK
    assert "complexity matches reference" in out


def test_validate_missing_export(capsys, tmp_path):
    data = template_data("aerospace")
    del data["STATIONS"]
    path = tmp_path / "broken.json"
    path.write_text(json.dumps(data))
    code, out, _ = run(capsys, "validate", str(path))
    assert code == EXIT_FAIL
    assert "missing export: STATIONS" in out


def test_validate_json_output(capsys):
    code, out, _ = run(capsys, "validate", "pharma", "--json")
    payload = json.loads(out)
    assert code == EXIT_OK and payload["ok"] and payload["counts"]["failure_codes"] == 27


def test_diff(capsys):
    code, out, _ = run(capsys, "diff", "aerospace", "pharma")
    assert code == EXIT_OK
    assert "C STATIONS.S4.name" in out
    code, out, _ = run(capsys, "diff", "aerospace", "aerospace")
    assert "0 change(s)" in out


def test_simulate_log_hash(capsys):
    code, out, _ = run(capsys, "simulate", "aerospace", "--seed", "42", "--days", "30", "--log-hash")
    assert code == EXIT_OK and out.strip() == GOLDEN_AERO_42_30


def test_simulate_writes_log_and_manifest(capsys, tmp_path):
    log, manifest = tmp_path / "e.ndjson", tmp_path / "m.json"
    code, out, _ = run(capsys, "simulate", "aerospace", "--days", "2", "--out", str(log), "--manifest",
                       str(manifest))
    assert code == EXIT_OK
    m = json.loads(manifest.read_text())
    assert m["command"] == "simulate" and m["seed"] == 42 and m["days"] == 2
    assert str(log) in m["outputs"] and m["inputs"]["ontology"]
    assert m["finished_at"] is not None


@pytest.mark.parametrize("argv", [[], ["bogus"], ["simulate", "aerospace", "--days", "0"],
                                  ["simulate", "aerospace", "--profile", "weird"]])
def test_usage_errors(capsys, argv):
    assert main(argv) == EXIT_USAGE


def test_unknown_template_is_a_failure(capsys):
    assert main(["simulate", "no_such_template", "--days", "1"]) == EXIT_FAIL


def test_warehouse_build_then_ingest(capsys, tmp_path):
    db, ddl, events = tmp_path / "w.db", tmp_path / "s.sql", tmp_path / "e.ndjson"
    code, out, _ = run(capsys, "warehouse", "build", "aerospace", "--db", str(db), "--ddl", str(ddl))
    assert code == EXIT_OK and ddl.exists()
    assert main(["simulate", "aerospace", "--days", "2", "--out", str(events)]) == EXIT_OK
    capsys.readouterr()
    code, out, _ = run(capsys, "warehouse", "ingest", "aerospace", "--db", f"sqlite:///{db}", "--events",
                       str(events), "--json")
    assert code == EXIT_OK
    assert json.loads(out)["star"]["table_rows"]["dim_station"] == 6


def test_non_sqlite_store_is_a_usage_error(capsys, monkeypatch):
    monkeypatch.setenv("ONTOTWIN_STORE", "postgresql://db/x")
    code, _, err = run(capsys, "warehouse", "build", "aerospace")
    assert code == EXIT_USAGE and "no storage backend" in err


def test_experiment_single_mode(capsys, tmp_path):
    out_path = tmp_path / "exp.json"
    code, out, _ = run(capsys, "experiment", "--mode", "constrained", "--days", "5", "--out", str(out_path))
    assert code == EXIT_OK
    report = json.loads(out_path.read_text())["reports"][0]
    assert report["outcomes"]["FabricatedId"] == 0


def test_calibrate_short(capsys):
    code, out, _ = run(capsys, "calibrate", "--seeds", "1", "--days", "3", "--configs", "aerospace")
    assert code in (EXIT_OK, EXIT_FAIL)
    assert "insufficient n" in out


def test_serve_stdio_subprocess():
    req = "\n".join(json.dumps(x) for x in [
        {"jsonrpc": "2.0", "id": 1, "method": "initialize"},
        {"jsonrpc": "2.0", "id": 2, "method": "tools/call",
         "params": {"name": "cycle_time", "arguments": {"station_id": "BOND-1"}}},
    ]) + "\n"
    proc = subprocess.run([sys.executable, "-m", "ontotwin.cli", "serve", "aerospace", "--days", "2"],
                          input=req, capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0
    lines = [json.loads(x) for x in proc.stdout.splitlines()]
    assert lines[0]["result"]["session"]["template_id"] == "aerospace"
    assert lines[1]["error"]["code"] == -32602
    assert "gate_reject" in proc.stderr
