"""Acceptance suite: one test per criterion, each reported as a PASS/FAIL line in the terminal summary."""

import json
import subprocess
import sys
import time

import pytest

from ontotwin.benchmark import compare_resolve_latency, widened_snapshot
from ontotwin.contract import EntityKind, ResolutionError, resolve
from ontotwin.harness import (
    CALIBRATION_CONFIGS, CALIBRATION_SEEDS, MockFabricator, OutcomeClass, fabrication_flags, load_queries,
    run_calibration, run_experiment,
)
from ontotwin.ontology import (
    COMPLEXITY_TABLE, REQUIRED_EXPORTS, TEMPLATE_IDS, MissingExports, measure, parse_document, template_data,
    template_snapshot,
)
from ontotwin.orchestrator import (
    RecursiveDecompositionAgent, Rejection, RejectionReason, ToolCall, execute_round, open_session,
)
from ontotwin.simulator import run_simulation
from ontotwin.toolserver import INVALID_PARAMS, Connection, ToolServer
from ontotwin.warehouse import SqliteStore, TableKind, build_schema

# tolerances
MUTATION_BUDGET_S = 10.0
FABRICATION_P = 0.43
MOCK_SEED = 42
FABRICATION_BAND = (0.35, 0.50)
THROUGHPUT_REL_TOL = 0.05
NCR_ABS_TOL = 0.010
VOLUME_MIN_TABLES = 40
VOLUME_ROWS = (10_000, 25_000)
ANALYTICS_SHAPE = {"Dimension": 14, "Fact": 8, "Bridge": 1}
MAX_ROUNDS = 3
UNCAPPED_MIN_CALLS = 10
SCALING_STATIONS = 10_000
SCALING_CALLS = 100_000
SCALING_MAX_RATIO = 2.0

# Oracle values, computed independently of the code under test.
# floor(72 * 0.43 + u) with u = random.Random(42).random() = 0.6394...; see test_harness for the derivation.
ORACLE_FABRICATIONS = 31
# sha256 of the NDJSON event log for aerospace, seed 42, 30 days, stable profile.
GOLDEN_LOG_HASH = "22748d0764428ec9e507125b0f7fe0d872b33bcca0606ada350e0596cef314fd"
AEROSPACE_STATIONS = ["S1", "S2", "S3", "S4", "S5", "S6"]


@pytest.fixture(scope="module")
def queries():
    return load_queries()


@pytest.mark.criterion(1, "export contract: 270 single-key deletions each name the key")
def test_export_contract(record_property):
    started = time.perf_counter()
    checks = 0
    for template_id in TEMPLATE_IDS:
        base = template_data(template_id)
        for key in REQUIRED_EXPORTS:
            data = dict(base)
            del data[key]
            with pytest.raises(MissingExports) as err:
                parse_document(data, f"{template_id}-{key}")
            assert err.value.missing == [key]
            checks += 1
    elapsed = time.perf_counter() - started
    record_property("detail", f"{checks} checks in {elapsed:.2f}s")
    assert checks == 270
    assert elapsed < MUTATION_BUDGET_S


@pytest.mark.criterion(2, "complexity counts equal the reference table")
def test_complexity_conformance(record_property):
    for template_id in TEMPLATE_IDS:
        assert measure(template_snapshot(template_id).document) == COMPLEXITY_TABLE[template_id], template_id
    record_property("detail", f"{len(TEMPLATE_IDS)} templates")


@pytest.mark.criterion(3, "constrained mode: 72/72 Correct, no storage access on rejection")
def test_gate_soundness(record_property, queries, all_warehouses):
    report = run_experiment(queries, MockFabricator(FABRICATION_P, MOCK_SEED), "constrained", all_warehouses)
    correct = report.count(OutcomeClass.CORRECT)
    record_property("detail", f"{correct}/72 Correct, {report.count(OutcomeClass.FABRICATED_ID)} fabricated")
    assert len(report.records) == 72
    assert correct == 72
    assert report.count(OutcomeClass.FABRICATED_ID) == 0
    assert report.storage_queries_on_rejected == 0

    # invariant: a rejected call never reaches storage, whatever the mode
    unconstrained = run_experiment(queries, MockFabricator(1.0, MOCK_SEED), "unconstrained", all_warehouses,
                                   probe_ungated=False)
    assert unconstrained.count(OutcomeClass.FABRICATED_ID) == 72
    assert unconstrained.storage_queries_on_rejected == 0


@pytest.mark.criterion(4, "unconstrained mode: fabrication count matches oracle, rate in band for any seed")
def test_unconstrained_calibration(record_property, queries, all_warehouses):
    assert sum(fabrication_flags(72, FABRICATION_P, MOCK_SEED)) == ORACLE_FABRICATIONS
    report = run_experiment(queries, MockFabricator(FABRICATION_P, MOCK_SEED), "unconstrained", all_warehouses)
    fabricated = report.count(OutcomeClass.FABRICATED_ID)
    assert fabricated == ORACLE_FABRICATIONS
    assert report.storage_queries_on_rejected == 0

    lo, hi = FABRICATION_BAND
    rates = [sum(fabrication_flags(72, FABRICATION_P, seed)) / 72 for seed in range(2000)]
    record_property("detail", f"seed {MOCK_SEED}: {fabricated}/72 = {fabricated / 72:.1%}; "
                              f"2000 seeds span {min(rates):.1%}-{max(rates):.1%}")
    assert all(lo <= r <= hi for r in rates)


@pytest.mark.criterion(5, "rejection payload for BOND-1, direct and over JSON-RPC")
def test_rejection_payload(record_property, aero, short_wh):
    err = resolve("BOND-1", EntityKind.STATION, aero)
    assert isinstance(err, ResolutionError)
    assert list(err.valid_set) == AEROSPACE_STATIONS

    server = ToolServer(aero, short_wh.store)
    line = json.dumps({"jsonrpc": "2.0", "id": 1, "method": "tools/call",
                       "params": {"name": "cycle_time", "arguments": {"station_id": "BOND-1"}}})
    resp = json.loads(server.handle_line(line, Connection()))
    assert resp["error"]["code"] == INVALID_PARAMS
    data = resp["error"]["data"]
    assert data["valid"] == AEROSPACE_STATIONS and data["rejected"] == "BOND-1"
    assert {k: data[k] for k in ("error", "kind", "rejected", "valid")} == err.to_wire()
    record_property("detail", f"valid={data['valid']}")


@pytest.mark.criterion(6, "KPI calibration: 10 seeds x 30 days within band for 4 configs")
def test_calibration_bands(record_property):
    started = time.perf_counter()
    report = run_calibration(CALIBRATION_CONFIGS, CALIBRATION_SEEDS, days=30)
    elapsed = time.perf_counter() - started
    print("\n" + report.to_text())
    outside = [f"{r.config}/{r.kpi}={r.mean:.4f}" for r in report.rows if not r.within]
    record_property("detail", f"{len(report.rows) - len(outside)}/{len(report.rows)} within band, {elapsed:.0f}s")
    for r in report.rows:
        if r.kpi == "throughput":
            assert r.band == pytest.approx((r.target * (1 - THROUGHPUT_REL_TOL), r.target * (1 + THROUGHPUT_REL_TOL)))
        if r.kpi == "ncr_rate":
            assert r.band == pytest.approx((r.target - NCR_ABS_TOL, r.target + NCR_ABS_TOL))
    assert not outside, outside
    assert elapsed < 300


@pytest.mark.criterion(7, "determinism: identical event-log hash across runs and processes")
def test_determinism(record_property, aero, aero_log):
    again = run_simulation(aero, 42, 30)
    assert aero_log.content_hash() == again.content_hash()
    proc = subprocess.run([sys.executable, "-m", "ontotwin.cli", "simulate", "aerospace", "--seed", "42",
                           "--days", "30", "--log-hash"], capture_output=True, text=True, timeout=300)
    assert proc.returncode == 0, proc.stderr
    record_property("detail", proc.stdout.strip()[:16])
    assert proc.stdout.strip() == aero_log.content_hash() == GOLDEN_LOG_HASH


@pytest.mark.criterion(8, "volume: 30-day aerospace run fills >= 40 tables with 10k-25k rows")
def test_volume(record_property, aero_wh):
    rows = aero_wh.ingest_report.table_rows
    populated = sum(1 for n in rows.values() if n > 0)
    total = aero_wh.ingest_report.total_rows
    record_property("detail", f"{populated} tables, {total} rows")
    assert populated >= VOLUME_MIN_TABLES
    assert VOLUME_ROWS[0] <= total <= VOLUME_ROWS[1]


@pytest.mark.criterion(9, "star schema: 14 dimensions, 8 facts, 1 bridge for every template")
def test_star_shape(record_property):
    for template_id in TEMPLATE_IDS:
        m = build_schema(template_snapshot(template_id), SqliteStore())
        assert m.analytics_counts == ANALYTICS_SHAPE, template_id
        assert sum(m.count(k) for k in (TableKind.DIMENSION, TableKind.FACT, TableKind.BRIDGE)) == 23
    record_property("detail", f"{len(TEMPLATE_IDS)} templates x 23 tables")


@pytest.mark.criterion(10, "circuit breaker: <= 3 rounds capped, > 10 calls uncapped")
def test_circuit_breaker(record_property, aero, short_wh):
    agent = RecursiveDecompositionAgent()
    capped = agent.run(open_session(aero, short_wh.store, max_rounds=MAX_ROUNDS), "q")
    uncapped = agent.run(open_session(aero, short_wh.store, max_rounds=None), "q")
    record_property("detail", f"capped {capped['rounds']} rounds/{capped['calls']} calls, "
                              f"uncapped {uncapped['rounds']} rounds/{uncapped['calls']} calls")
    assert capped["rounds"] <= MAX_ROUNDS
    assert uncapped["calls"] > UNCAPPED_MIN_CALLS


@pytest.mark.criterion(11, "version pinning and identical tool lists across agents")
def test_version_consistency(record_property, aero, short_wh):
    session = open_session(aero, short_wh.store)
    other = template_snapshot("pharma").version_id
    (out,) = execute_round(session, [ToolCall("cycle_time", {"station_id": "S4"}, snapshot_version=other)], "q")
    assert isinstance(out, Rejection) and out.reason is RejectionReason.VERSION_MISMATCH

    server = ToolServer(aero, short_wh.store)
    conn = Connection()
    lists = [server.handle_line(json.dumps({"jsonrpc": "2.0", "id": 1, "method": "tools/list",
                                            "params": {"agent_id": agent}}), conn)
             for agent in ("planner", "analyst")]
    assert json.loads(lists[0])["result"] == json.loads(lists[1])["result"]
    assert conn.session.agents == ["planner", "analyst"]
    record_property("detail", "VersionMismatch raised; tools/list identical")


@pytest.mark.criterion(12, "resolve latency at 10,000 stations within 2x of 6 stations")
def test_resolution_scaling(record_property, aero):
    wide = widened_snapshot("aerospace", SCALING_STATIONS)
    assert len(wide.document["STATIONS"]) == SCALING_STATIONS
    small_ns, wide_ns = compare_resolve_latency(aero, wide, SCALING_CALLS)
    ratio = wide_ns / small_ns
    record_property("detail", f"{small_ns:.0f} ns vs {wide_ns:.0f} ns, ratio {ratio:.2f}")
    assert ratio <= SCALING_MAX_RATIO
