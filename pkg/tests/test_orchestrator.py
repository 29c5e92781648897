import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ontotwin.contract import AnnotatedResult
from ontotwin.ontology import template_snapshot
from ontotwin.orchestrator import (
    AuditLog, Pass, RecursiveDecompositionAgent, Rejection, RejectionReason, ToolCall, execute_round, gate,
    open_session,
)
from ontotwin.tools import ToolError


@pytest.fixture
def session(aero, short_wh):
    return open_session(aero, short_wh.store, "constrained")


def test_valid_call_passes(session):
    assert isinstance(gate(ToolCall("cycle_time", {"station_id": "S4"}), session), Pass)


def test_fabricated_id_rejected_with_payload(session):
    out = gate(ToolCall("cycle_time", {"station_id": "BOND-1"}, call_id="c1"), session)
    assert isinstance(out, Rejection) and out.reason is RejectionReason.INVALID_PARAMETER
    wire = out.to_wire()
    assert wire["rejected"] == "BOND-1" and wire["valid"] == ["S1", "S2", "S3", "S4", "S5", "S6"]
    assert wire["call_id"] == "c1"


def test_version_checked_before_circuit_and_resolution(session):
    session.round_counts["q"] = 99
    call = ToolCall("cycle_time", {"station_id": "BOND-1"}, question_id="q", snapshot_version="f" * 64)
    assert gate(call, session).reason is RejectionReason.VERSION_MISMATCH
    call = ToolCall("cycle_time", {"station_id": "BOND-1"}, question_id="q")
    assert gate(call, session).reason is RejectionReason.CIRCUIT_OPEN


def test_mixed_round(session):
    before = session.store.query_count
    outs = execute_round(session, [
        ToolCall("cycle_time", {"station_id": "S4"}),
        ToolCall("cycle_time", {"station_id": "BOND-1"}),
        ToolCall("cycle_time", {"station_id": "S4"}, snapshot_version=template_snapshot("pharma").version_id),
    ], "q1")
    assert isinstance(outs[0], AnnotatedResult)
    assert [o.reason for o in outs[1:]] == [RejectionReason.INVALID_PARAMETER, RejectionReason.VERSION_MISMATCH]
    assert session.store.query_count - before == 1
    assert session.rounds("q1") == 1


def test_unknown_tool_passes_gate_but_fails_invoke(session):
    outs = execute_round(session, [ToolCall("nope", {})], "q")
    assert isinstance(outs[0], ToolError) and outs[0].code == "unknown_tool"


def test_breaker_trips_after_max_rounds(session):
    for _ in range(3):
        assert isinstance(execute_round(session, [ToolCall("cycle_time", {"station_id": "S1"})], "q")[0],
                          AnnotatedResult)
    out = execute_round(session, [ToolCall("cycle_time", {"station_id": "S1"})], "q")[0]
    assert out.reason is RejectionReason.CIRCUIT_OPEN
    assert session.rounds("q") == 3
    # other questions are unaffected
    assert isinstance(execute_round(session, [ToolCall("cycle_time", {"station_id": "S1"})], "q2")[0],
                      AnnotatedResult)


def test_zero_rounds_rejects_everything(aero, short_wh):
    s = open_session(aero, short_wh.store, max_rounds=0)
    before = s.store.query_count
    out = execute_round(s, [ToolCall("cycle_time", {"station_id": "S1"})], "q")[0]
    assert out.reason is RejectionReason.CIRCUIT_OPEN
    assert s.store.query_count == before


@settings(max_examples=20, deadline=None)
@given(cap=st.integers(0, 6), batches=st.integers(0, 10))
def test_rounds_never_exceed_cap(cap, batches):
    snap = template_snapshot("aerospace")
    from ontotwin.warehouse import SqliteStore, build_schema

    store = SqliteStore()
    build_schema(snap, store)
    s = open_session(snap, store, max_rounds=cap)
    for _ in range(batches):
        execute_round(s, [ToolCall("production_status", {})], "q")
    assert s.rounds("q") == min(cap, batches)


def test_recursive_agent_is_capped(aero, short_wh):
    agent = RecursiveDecompositionAgent()
    assert agent.plan() == [1, 1, 2, 3, 5]
    capped = agent.run(open_session(aero, short_wh.store), "q")
    assert capped == {"rounds": 3, "calls": 4, "executed": 4}
    uncapped = agent.run(open_session(aero, short_wh.store, max_rounds=None), "q")
    assert uncapped["rounds"] == 5 and uncapped["calls"] == 12


def test_agents_share_one_tool_list(session):
    a = session.join("planner")
    b = session.join("analyst")
    assert a is b
    assert session.agents == ["planner", "analyst"]


def test_unconstrained_session_has_no_enums(aero, short_wh):
    s = open_session(aero, short_wh.store, "unconstrained")
    assert '"enum"' not in s.tools_json()
    # the gate still rejects
    assert gate(ToolCall("cycle_time", {"station_id": "BOND-1"}), s).reason is RejectionReason.INVALID_PARAMETER


def test_audit_trail(tmp_path, aero, short_wh):
    path = tmp_path / "audit.jsonl"
    seen = []
    for sink in (path, seen.append):
        s = open_session(aero, short_wh.store, audit=AuditLog(sink), session_id="sess-1")
        s.join("a1")
        execute_round(s, [ToolCall("cycle_time", {"station_id": "S4"}),
                          ToolCall("cycle_time", {"station_id": "X"})], "q")
        events = [e["event"] for e in s.audit.events()]
        assert events == ["session_open", "agent_join", "gate_pass", "gate_reject", "round_advance"]
        reject = s.audit.events()[3]
        assert reject["reason"] == "InvalidParameter" and reject["detail"]["rejected"] == "X"
    assert len(path.read_text().splitlines()) == 5
    assert [json.loads(x)["event"] for x in seen] == events
