"""Newline-delimited JSON-RPC 2.0 tool server over stdio or TCP.

Methods: initialize, tools/list, tools/call, session/open, session/diff.
Every tools/call goes through ``orchestrator.execute_round`` and therefore the gate.
"""

from __future__ import annotations

import json
import socketserver
import sys
import threading
from dataclasses import dataclass, field
from typing import Any, Callable, Optional, TextIO

from .contract import AnnotatedResult
from .ontology import OntologySnapshot, diff, parse_document, resolve_document_arg, snapshot
from .ontology.document import LoadError
from .orchestrator import (
    DEFAULT_MAX_ROUNDS, AuditLog, Rejection, RejectionReason, Session, ToolCall, execute_round, open_session,
)
from .tools import ConstraintMode, ToolError
from .warehouse.store import StoragePort

PROTOCOL_VERSION = "2024-11-05"
SERVER_NAME = "ontotwin-tools"
SERVER_VERSION = "0.1.0"

PARSE_ERROR = -32700
INVALID_REQUEST = -32600
METHOD_NOT_FOUND = -32601
INVALID_PARAMS = -32602
INTERNAL_ERROR = -32603
CIRCUIT_OPEN = -32001
VERSION_MISMATCH = -32002
TOOL_FAILURE = -32003

_REJECTION_CODES = {
    RejectionReason.INVALID_PARAMETER: INVALID_PARAMS,
    RejectionReason.CIRCUIT_OPEN: CIRCUIT_OPEN,
    RejectionReason.VERSION_MISMATCH: VERSION_MISMATCH,
}


class RpcError(Exception):
    def __init__(self, code: int, message: str, data: Any = None):
        super().__init__(message)
        self.code, self.message, self.data = code, message, data

    def to_dict(self) -> dict[str, Any]:
        err: dict[str, Any] = {"code": self.code, "message": self.message}
        if self.data is not None:
            err["data"] = self.data
        return err


@dataclass
class Connection:
    """Per-client state: one session, opened lazily."""
    session: Optional[Session] = None
    initialized: bool = False


@dataclass
class ToolServer:
    snapshot: OntologySnapshot
    store: StoragePort
    mode: ConstraintMode = ConstraintMode.CONSTRAINED
    max_rounds: Optional[int] = DEFAULT_MAX_ROUNDS
    audit: AuditLog = field(default_factory=AuditLog)

    def __post_init__(self):
        self.mode = ConstraintMode(self.mode)
        self._methods: dict[str, Callable[[Connection, dict], Any]] = {
            "initialize": self._initialize,
            "tools/list": self._tools_list,
            "tools/call": self._tools_call,
            "session/open": self._session_open,
            "session/diff": self._session_diff,
        }

    # dispatch

    def handle_line(self, line: str, conn: Connection) -> Optional[str]:
        """Handle one wire line. Returns the response line, or None for notifications."""
        try:
            request = json.loads(line)
        except json.JSONDecodeError as exc:
            return json.dumps(_error_envelope(None, RpcError(PARSE_ERROR, f"parse error: {exc.msg}")))
        response = self.handle(request, conn)
        return None if response is None else json.dumps(response, default=str)

    def handle(self, request: Any, conn: Connection) -> Optional[dict[str, Any]]:
        if not isinstance(request, dict) or request.get("jsonrpc") != "2.0" or "method" not in request:
            rid = request.get("id") if isinstance(request, dict) else None
            return _error_envelope(rid, RpcError(INVALID_REQUEST, "invalid request"))
        rid = request.get("id")
        notification = "id" not in request
        method = request["method"]
        params = request.get("params") or {}
        try:
            if not isinstance(params, dict):
                raise RpcError(INVALID_PARAMS, "params must be an object")
            handler = self._methods.get(method)
            if handler is None:
                if method.startswith("notifications/"):
                    return None
                raise RpcError(METHOD_NOT_FOUND, f"method not found: {method}")
            result = handler(conn, params)
        except RpcError as exc:
            return None if notification else _error_envelope(rid, exc)
        except Exception as exc:  # surfaced to the client rather than killing the connection
            self.audit.write("server_error", method=method, error=repr(exc))
            return None if notification else _error_envelope(rid, RpcError(INTERNAL_ERROR, str(exc)))
        return None if notification else {"jsonrpc": "2.0", "id": rid, "result": result}

    # methods

    def _session(self, conn: Connection) -> Session:
        if conn.session is None:
            conn.session = open_session(self.snapshot, self.store, self.mode, self.max_rounds, self.audit)
        return conn.session

    def _initialize(self, conn: Connection, params: dict) -> dict[str, Any]:
        conn.initialized = True
        session = self._session(conn)
        return {
            "protocolVersion": PROTOCOL_VERSION,
            "serverInfo": {"name": SERVER_NAME, "version": SERVER_VERSION},
            "capabilities": {"tools": {"listChanged": False}},
            "session": _session_info(session),
        }

    def _session_open(self, conn: Connection, params: dict) -> dict[str, Any]:
        mode = ConstraintMode(params.get("mode", self.mode.value)) if params.get("mode") else self.mode
        max_rounds = params.get("max_rounds", self.max_rounds)
        conn.session = open_session(self.snapshot, self.store, mode, max_rounds, self.audit)
        return _session_info(conn.session)

    def _tools_list(self, conn: Connection, params: dict) -> dict[str, Any]:
        session = self._session(conn)
        if params.get("agent_id"):
            session.join(str(params["agent_id"]))
        return {"tools": [t.to_wire() for t in session.tools]}

    def _tools_call(self, conn: Connection, params: dict) -> dict[str, Any]:
        session = self._session(conn)
        name = params.get("name")
        args = params.get("arguments") or {}
        if not isinstance(name, str) or not isinstance(args, dict):
            raise RpcError(INVALID_PARAMS, "tools/call needs a string 'name' and an object 'arguments'")
        call_id = str(params.get("call_id") or session.next_call_id())
        # without a question id, each call is its own one-round question
        call = ToolCall(name, args, call_id=call_id,
                        question_id=str(params.get("question_id") or f"call-{call_id}"),
                        agent_id=str(params.get("agent_id") or "client"),
                        snapshot_version=params.get("snapshot_version"))
        (outcome,) = execute_round(session, [call], call.question_id)
        if isinstance(outcome, Rejection):
            raise RpcError(_REJECTION_CODES[outcome.reason], outcome.message or outcome.reason.value, outcome.to_wire())
        if isinstance(outcome, ToolError):
            code = INVALID_PARAMS if outcome.code in ("invalid_arguments", "unknown_tool") else TOOL_FAILURE
            raise RpcError(code, outcome.message, outcome.to_wire())
        assert isinstance(outcome, AnnotatedResult)
        payload = outcome.to_dict()
        return {"content": [{"type": "text", "text": json.dumps(payload, default=str)}],
                "structuredContent": payload, "isError": False}

    def _session_diff(self, conn: Connection, params: dict) -> dict[str, Any]:
        session = self._session(conn)
        try:
            if "document" in params:
                other = snapshot(parse_document(params["document"]))
            elif "against" in params:
                other = snapshot(resolve_document_arg(str(params["against"])))
            else:
                raise RpcError(INVALID_PARAMS, "session/diff needs 'against' or 'document'")
        except LoadError as exc:
            raise RpcError(INVALID_PARAMS, f"ontology did not load: {exc}") from exc
        d = diff(session.snapshot, other)
        return {"pinned_version": session.pinned_version, "other_version": other.version_id, **d.to_dict()}


def _session_info(session: Session) -> dict[str, Any]:
    return {"session_id": session.session_id, "pinned_version": session.pinned_version,
            "template_id": session.snapshot.template_id, "mode": session.mode.value,
            "max_rounds": session.max_rounds}


def _error_envelope(rid: Any, err: RpcError) -> dict[str, Any]:
    return {"jsonrpc": "2.0", "id": rid, "error": err.to_dict()}


# transports

def serve_stdio(server: ToolServer, stdin: TextIO = sys.stdin, stdout: TextIO = sys.stdout) -> None:
    conn = Connection()
    for line in stdin:
        if not line.strip():
            continue
        out = server.handle_line(line, conn)
        if out is not None:
            stdout.write(out + "\n")
            stdout.flush()


class _LineHandler(socketserver.StreamRequestHandler):
    def handle(self):
        tool_server: ToolServer = self.server.tool_server  # type: ignore[attr-defined]
        conn = Connection()
        for raw in self.rfile:
            line = raw.decode("utf-8", errors="replace")
            if not line.strip():
                continue
            out = tool_server.handle_line(line, conn)
            if out is not None:
                self.wfile.write((out + "\n").encode("utf-8"))
                self.wfile.flush()


class TcpToolServer(socketserver.ThreadingTCPServer):
    daemon_threads = True
    allow_reuse_address = True

    def __init__(self, tool_server: ToolServer, host: str = "127.0.0.1", port: int = 0):
        self.tool_server = tool_server
        super().__init__((host, port), _LineHandler)

    @property
    def port(self) -> int:
        return self.server_address[1]

    def start_background(self) -> threading.Thread:
        t = threading.Thread(target=self.serve_forever, daemon=True)
        t.start()
        return t


def serve(snap: OntologySnapshot, store: StoragePort, transport: str = "stdio", port: int = 0,
          mode: ConstraintMode | str = ConstraintMode.CONSTRAINED, max_rounds: Optional[int] = DEFAULT_MAX_ROUNDS,
          audit: Optional[AuditLog] = None, host: str = "127.0.0.1") -> ToolServer | TcpToolServer:
    """Run (stdio, blocking) or return a bound TCP server the caller drives."""
    server = ToolServer(snap, store, ConstraintMode(mode), max_rounds, audit or AuditLog())
    if transport == "stdio":
        serve_stdio(server)
        return server
    if transport == "tcp":
        return TcpToolServer(server, host, port)
    raise ValueError(f"unknown transport {transport!r}")
