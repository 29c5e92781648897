import io
import json
import socket

import pytest

from ontotwin.ontology import template_snapshot
from ontotwin.tools import project_schemas
from ontotwin.toolserver import (
    CIRCUIT_OPEN, INVALID_PARAMS, INVALID_REQUEST, METHOD_NOT_FOUND, PARSE_ERROR, PROTOCOL_VERSION,
    VERSION_MISMATCH, Connection, TcpToolServer, ToolServer, serve_stdio,
)


def rpc(rid, method, **params):
    return {"jsonrpc": "2.0", "id": rid, "method": method, "params": params}


@pytest.fixture
def server(aero, short_wh):
    return ToolServer(aero, short_wh.store)


class TcpClient:
    def __init__(self, port):
        self.sock = socket.create_connection(("127.0.0.1", port), timeout=10)
        self.rfile = self.sock.makefile("r", encoding="utf-8")
        self.ids = 0

    def call(self, method, **params):
        self.ids += 1
        self.sock.sendall((json.dumps(rpc(self.ids, method, **params)) + "\n").encode())
        return json.loads(self.rfile.readline())

    def close(self):
        self.rfile.close()
        self.sock.close()


@pytest.fixture
def tcp(server):
    srv = TcpToolServer(server, port=0)
    srv.start_background()
    clients = []

    def connect():
        c = TcpClient(srv.port)
        clients.append(c)
        return c

    yield connect
    for c in clients:
        c.close()
    srv.shutdown()
    srv.server_close()


def test_initialize(server):
    resp = server.handle(rpc(1, "initialize"), conn := Connection())
    assert resp["result"]["protocolVersion"] == PROTOCOL_VERSION
    assert resp["result"]["session"]["pinned_version"] == server.snapshot.version_id
    assert conn.initialized


def test_tools_list_matches_projection_exactly(server, aero):
    resp = server.handle(rpc(1, "tools/list"), Connection())
    expected = [t.to_wire() for t in project_schemas(aero, "constrained")]
    assert json.dumps(resp["result"]["tools"], sort_keys=True) == json.dumps(expected, sort_keys=True)


def test_successful_call(server):
    resp = server.handle(rpc(1, "tools/call", name="first_pass_yield", arguments={"station_id": "S4"}), Connection())
    res = resp["result"]
    assert res["isError"] is False
    assert res["structuredContent"]["result"]["station"] == "S4"
    assert json.loads(res["content"][0]["text"]) == res["structuredContent"]


def test_fabricated_id_maps_to_invalid_params(server):
    resp = server.handle(rpc(7, "tools/call", name="cycle_time", arguments={"station_id": "BOND-1"}), Connection())
    err = resp["error"]
    assert resp["id"] == 7 and err["code"] == INVALID_PARAMS
    assert err["data"]["error"] == "invalid_parameter"
    assert err["data"]["rejected"] == "BOND-1"
    assert err["data"]["valid"] == ["S1", "S2", "S3", "S4", "S5", "S6"]


def test_version_mismatch_code(server):
    other = template_snapshot("pharma").version_id
    resp = server.handle(rpc(1, "tools/call", name="cycle_time", arguments={"station_id": "S4"},
                             snapshot_version=other), Connection())
    assert resp["error"]["code"] == VERSION_MISMATCH


def test_circuit_open_code(server):
    conn = Connection()
    codes = []
    for i in range(4):
        resp = server.handle(rpc(i, "tools/call", name="production_status", arguments={}, question_id="q"), conn)
        codes.append(resp.get("error", {}).get("code"))
    assert codes == [None, None, None, CIRCUIT_OPEN]


def test_calls_without_question_id_are_independent(server):
    conn = Connection()
    for i in range(5):
        assert "result" in server.handle(rpc(i, "tools/call", name="production_status", arguments={}), conn)


@pytest.mark.parametrize("request_,code", [
    ({"jsonrpc": "2.0", "id": 1, "method": "nope"}, METHOD_NOT_FOUND),
    ({"jsonrpc": "1.0", "id": 1, "method": "tools/list"}, INVALID_REQUEST),
    ([1, 2], INVALID_REQUEST),
    ({"jsonrpc": "2.0", "id": 1, "method": "tools/call", "params": {"name": 3}}, INVALID_PARAMS),
    ({"jsonrpc": "2.0", "id": 1, "method": "tools/call", "params": {"name": "cycle_time", "arguments": {}}},
     INVALID_PARAMS),
])
def test_protocol_errors(server, request_, code):
    assert server.handle(request_, Connection())["error"]["code"] == code


def test_parse_error_line(server):
    resp = json.loads(server.handle_line("{oops", Connection()))
    assert resp["error"]["code"] == PARSE_ERROR and resp["id"] is None


def test_notifications_get_no_reply(server):
    assert server.handle_line(json.dumps({"jsonrpc": "2.0", "method": "notifications/initialized"}),
                              Connection()) is None


def test_session_open_switches_mode(server):
    conn = Connection()
    info = server.handle(rpc(1, "session/open", mode="unconstrained"), conn)["result"]
    assert info["mode"] == "unconstrained"
    tools = server.handle(rpc(2, "tools/list"), conn)["result"]["tools"]
    assert all("enum" not in p for t in tools for p in t["inputSchema"]["properties"].values())


def test_session_diff(server):
    res = server.handle(rpc(1, "session/diff", against="pharma"), Connection())["result"]
    assert any(e["path"] == ["S4", "name"] for e in res["changed"])
    assert server.handle(rpc(2, "session/diff", against="/no/such.json"), Connection())["error"]["code"] \
        == INVALID_PARAMS


def test_stdio_transport(server):
    lines = [json.dumps(rpc(1, "initialize")), "", json.dumps(rpc(2, "tools/list")),
             json.dumps(rpc(3, "tools/call", name="cycle_time", arguments={"station_id": "BOND-1"}))]
    out = io.StringIO()
    serve_stdio(server, io.StringIO("\n".join(lines) + "\n"), out)
    responses = [json.loads(x) for x in out.getvalue().splitlines()]
    assert [r["id"] for r in responses] == [1, 2, 3]
    assert len(responses[1]["result"]["tools"]) == 12
    assert responses[2]["error"]["code"] == INVALID_PARAMS


def test_tcp_transport_end_to_end(tcp):
    c = tcp()
    assert c.call("initialize")["result"]["protocolVersion"] == PROTOCOL_VERSION
    bad = c.call("tools/call", name="cycle_time", arguments={"station_id": "BOND-1"})
    assert bad["error"]["data"]["valid"] == ["S1", "S2", "S3", "S4", "S5", "S6"]
    ok = c.call("tools/call", name="cycle_time", arguments={"station_id": "S4"})
    assert ok["result"]["structuredContent"]["context"]["name"] == "Bonding"


def test_tcp_clients_get_identical_tools(tcp):
    a, b = tcp(), tcp()
    ta = a.call("tools/list", agent_id="agent-a")["result"]["tools"]
    tb = b.call("tools/list", agent_id="agent-b")["result"]["tools"]
    assert json.dumps(ta, sort_keys=True) == json.dumps(tb, sort_keys=True)
