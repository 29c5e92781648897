import json
import math
import random
import threading
from http.server import BaseHTTPRequestHandler, HTTPServer

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ontotwin.contract import EntityKind, annotate, valid_ids
from ontotwin.ontology import TEMPLATE_IDS, template_snapshot
from ontotwin.orchestrator import Rejection, RejectionReason
from ontotwin.harness import (
    FABRICATION_LEXICON, ClientError, KpiStats, LiveChatClient, MockFabricator, OutcomeClass, ProposedCall,
    classify, fabrication_flags, kpi_targets, load_queries, run_calibration, run_experiment, t_interval,
)
from ontotwin.tools import EmptyResult, ToolError, project_schemas
from ontotwin.tools.results import ToolResult

# Oracle: phase u = Random(42).random(); systematic count over n draws is floor(n*p + u) - floor(u).
MOCK_FABRICATIONS_SEED_42 = 31
# Oracle: 0.975 quantile of Student t with 9 df, from the regularized incomplete beta (mpmath, 30 digits).
T_975_DF9 = 2.2621571627982055


def test_queries_cover_every_config_and_tool():
    qs = load_queries()
    assert len(qs) == 72
    assert {q.template_id for q in qs} == set(TEMPLATE_IDS)
    assert len({(q.template_id, q.tool_name) for q in qs}) == 72


def test_query_text_never_contains_the_id():
    for q in load_queries():
        assert q.expected_entity not in q.text


def test_expected_entities_exist():
    for q in load_queries():
        snap = template_snapshot(q.template_id)
        spec = next(t for t in project_schemas(snap, "constrained") if t.name == q.tool_name)
        assert q.expected_entity in spec.param(q.param).enum


def test_lexicon_never_collides_with_real_ids():
    for template_id, kinds in FABRICATION_LEXICON.items():
        snap = template_snapshot(template_id)
        for kind, ids in kinds.items():
            assert not set(ids) & set(valid_ids(EntityKind(kind), snap)), (template_id, kind)


def test_systematic_count_matches_oracle():
    u = random.Random(42).random()
    assert math.floor(72 * 0.43 + u) - math.floor(u) == MOCK_FABRICATIONS_SEED_42
    assert sum(fabrication_flags(72, 0.43, 42)) == MOCK_FABRICATIONS_SEED_42


@settings(max_examples=200, deadline=None)
@given(seed=st.integers(0, 10**9), n=st.integers(1, 500), p=st.floats(0, 1))
def test_systematic_count_is_floor_or_ceil(seed, n, p):
    k = sum(fabrication_flags(n, p, seed))
    assert math.floor(n * p) <= k <= math.ceil(n * p)


def test_bernoulli_sampling_is_seeded():
    assert fabrication_flags(72, 0.43, 3, "bernoulli") == fabrication_flags(72, 0.43, 3, "bernoulli")


def test_mock_rejects_bad_config():
    with pytest.raises(ValueError):
        MockFabricator(p=1.5)
    with pytest.raises(ValueError):
        MockFabricator(sampling="lottery")


def test_mock_follows_enum_and_fabricates_without_one():
    q = next(q for q in load_queries() if q.template_id == "aerospace" and q.tool_name == "cycle_time")
    snap = template_snapshot("aerospace")
    constrained = [t.to_wire() for t in project_schemas(snap, "constrained")]
    free = [t.to_wire() for t in project_schemas(snap, "unconstrained")]
    always = MockFabricator(p=1.0)
    assert always.propose(q, constrained).args == {"station_id": q.expected_entity}
    assert always.propose(q, free).args["station_id"] in FABRICATION_LEXICON["aerospace"]["Station"]
    assert MockFabricator(p=0.0).propose(q, free).args == {"station_id": q.expected_entity}


def test_mock_reset_replays(aero):
    q = load_queries()[0]
    free = [t.to_wire() for t in project_schemas(template_snapshot(q.template_id), "unconstrained")]
    m = MockFabricator(p=0.5, seed=9)
    first = [m.propose(q, free) for _ in range(20)]
    m.reset()
    assert [m.propose(q, free) for _ in range(20)] == first


def _aero_query(tool="cycle_time"):
    return next(q for q in load_queries() if q.template_id == "aerospace" and q.tool_name == tool)


def test_classify_each_outcome(aero):
    q = _aero_query()
    ok = ToolResult("cycle_time", {"station": q.expected_entity}, "cycle_time", 1.0, "min", "all", rows=3)
    empty = EmptyResult("cycle_time", {"station": q.expected_entity}, "cycle_time", None, "min", "2026-w01")
    right = ProposedCall(q.tool_name, {q.param: q.expected_entity})
    other = next(s for s in valid_ids(EntityKind.STATION, aero) if s != q.expected_entity)
    reject = Rejection("c", RejectionReason.INVALID_PARAMETER)
    assert classify(q, None, None, aero) is OutcomeClass.QUERY_ERROR
    assert classify(q, ProposedCall(q.tool_name, {q.param: "BOND-1"}), reject, aero) is OutcomeClass.FABRICATED_ID
    assert classify(q, right, ToolError("storage_error", "x"), aero) is OutcomeClass.QUERY_ERROR
    assert classify(q, right, annotate(empty, None, aero), aero) is OutcomeClass.VALID_EMPTY_RESULT
    assert classify(q, right, annotate(ok, None, aero), aero) is OutcomeClass.CORRECT
    wrong = ProposedCall(q.tool_name, {q.param: other})
    assert classify(q, wrong, annotate(ok, None, aero), aero) is OutcomeClass.QUERY_ERROR


def test_experiment_on_one_config():
    from ontotwin.harness import build_warehouses

    qs = [q for q in load_queries() if q.template_id == "aerospace"]
    whs = build_warehouses(["aerospace"], days=10)
    report = run_experiment(qs, MockFabricator(p=1.0), "unconstrained", whs)
    assert report.count(OutcomeClass.FABRICATED_ID) == 12
    assert report.storage_queries_on_rejected == 0
    table = report.outcome_table()
    assert sum(table["fabricated_if_ungated"].values()) == 12
    assert "storage queries executed for rejected calls: 0" in report.to_text()
    assert json.loads(report.to_json())["outcomes"]["total"] == 12


def test_experiment_refuses_mismatched_warehouse(short_wh):
    qs = [q for q in load_queries() if q.template_id == "pharma"][:1]
    with pytest.raises(ValueError):
        run_experiment(qs, MockFabricator(), "constrained", {"pharma": short_wh})


def test_client_errors_become_query_errors(short_wh):
    class Broken(MockFabricator):
        def propose(self, query, tools):
            raise ClientError("nothing")

    qs = [q for q in load_queries() if q.template_id == "aerospace"][:2]
    report = run_experiment(qs, Broken(), "constrained", {"aerospace": short_wh})
    assert report.count(OutcomeClass.QUERY_ERROR) == 2


def _mp_t_quantile(q, df):
    mpmath.mp.dps = 30
    cdf = lambda t: 1 - mpmath.betainc(df / 2.0, 0.5, 0, df / (df + t * t), regularized=True) / 2
    return float(mpmath.findroot(lambda t: cdf(t) - mpmath.mpf(q), 2.0))


def test_t_quantile_oracle():
    assert _mp_t_quantile(0.975, 9) == pytest.approx(T_975_DF9, rel=1e-12)
    values = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0]
    mean, sd, hw = t_interval(values)
    assert mean == 5.5
    assert hw == pytest.approx(T_975_DF9 * sd / math.sqrt(10), rel=1e-9)


@pytest.mark.parametrize("df", [1, 4, 29])
def test_t_interval_agrees_with_mpmath(df):
    values = [float(i % 3) for i in range(df + 1)]
    _, sd, hw = t_interval(values)
    assert hw == pytest.approx(_mp_t_quantile(0.975, df) * sd / math.sqrt(df + 1), rel=1e-9)


def test_single_sample_has_no_interval():
    mean, sd, hw = t_interval([0.9])
    assert mean == 0.9 and hw is None and math.isnan(sd)
    with pytest.raises(ValueError):
        t_interval([])


def test_calibration_flags_insufficient_n():
    report = run_calibration(["aerospace"], [42], days=5)
    assert all(r.insufficient and r.ci is None for r in report.rows)
    assert "insufficient n" in report.to_text()
    assert json.loads(report.to_json())["rows"][0]["sd"] is None


def test_kpi_targets_are_consistent():
    for config in ("aerospace", "pharma"):
        t = kpi_targets(config)
        assert t["ncr_rate"][0] == pytest.approx(1 - t["fpy"][0])
        lo, hi = t["throughput"][1]
        assert lo < t["throughput"][0] < hi


def test_kpi_band_check():
    row = KpiStats("x", "fpy", 0.9, (0.85, 0.95), (0.9, 0.91), 0.905, 0.007, 0.06)
    assert row.within and row.n == 2
    assert not KpiStats("x", "fpy", 0.9, (0.85, 0.95), (0.99,), 0.99, float("nan"), None).within


class _Stub(BaseHTTPRequestHandler):
    seen: list = []
    reply: dict = {}

    def do_POST(self):
        body = json.loads(self.rfile.read(int(self.headers["Content-Length"])))
        type(self).seen.append((self.path, self.headers.get("Authorization"), body))
        out = json.dumps(type(self).reply).encode()
        self.send_response(200)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(out)))
        self.end_headers()
        self.wfile.write(out)

    def log_message(self, *args):
        pass


def test_live_client_against_stub():
    _Stub.seen = []
    _Stub.reply = {"choices": [{"message": {"tool_calls": [{"function": {
        "name": "cycle_time", "arguments": json.dumps({"station_id": "S4"})}}]}}]}
    httpd = HTTPServer(("127.0.0.1", 0), _Stub)
    threading.Thread(target=httpd.serve_forever, daemon=True).start()
    try:
        client = LiveChatClient(f"http://127.0.0.1:{httpd.server_port}/v1", "m", api_key="k")
        q = _aero_query()
        tools = [t.to_wire() for t in project_schemas(template_snapshot("aerospace"), "constrained")]
        assert client.propose(q, tools) == ProposedCall("cycle_time", {"station_id": "S4"})
    finally:
        httpd.shutdown()
    path, auth, body = _Stub.seen[0]
    assert path == "/v1/chat/completions" and auth == "Bearer k"
    assert body["messages"][-1]["content"] == q.text
    assert len(body["tools"]) == 12
    assert body["tools"][0]["function"]["parameters"] == tools[0]["inputSchema"]


@pytest.mark.parametrize("body", [{}, {"choices": []}, {"choices": [{"message": {"content": "hi"}}]},
                                  {"choices": [{"message": {"tool_calls": [{"function": {
                                      "name": "x", "arguments": "[1]"}}]}}]}])
def test_live_client_rejects_unparsable_replies(body):
    with pytest.raises(ClientError):
        LiveChatClient.parse_response(body)


def test_live_client_needs_env(monkeypatch):
    monkeypatch.delenv("ONTOTWIN_LLM_URL", raising=False)
    with pytest.raises(ClientError):
        LiveChatClient.from_env()
