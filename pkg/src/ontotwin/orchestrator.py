"""Sessions with a pinned ontology version, a parameter gate and a round-based circuit breaker."""

from __future__ import annotations

import itertools
import json
import threading
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Any, Callable, Optional, Sequence

from .contract import AnnotatedResult, ResolutionError
from .ontology import OntologySnapshot
from .tools import (
    TOOLS_BY_NAME, ConstraintMode, ToolError, ToolSpec, invoke, project_schemas, resolve_arguments, schemas_json,
)
from .warehouse.store import StoragePort

DEFAULT_MAX_ROUNDS = 3


class RejectionReason(str, Enum):
    INVALID_PARAMETER = "InvalidParameter"
    VERSION_MISMATCH = "VersionMismatch"
    CIRCUIT_OPEN = "CircuitOpen"


@dataclass(frozen=True)
class ToolCall:
    name: str
    args: dict[str, Any]
    call_id: str = ""
    question_id: str = "q0"
    agent_id: str = "agent-0"
    snapshot_version: Optional[str] = None  # None means "the session's pinned version"


@dataclass(frozen=True)
class Pass:
    call_id: str


@dataclass(frozen=True)
class Rejection:
    call_id: str
    reason: RejectionReason
    error: Optional[ResolutionError] = None
    message: str = ""

    def to_wire(self) -> dict[str, Any]:
        if self.reason is RejectionReason.INVALID_PARAMETER and self.error is not None:
            payload = self.error.to_wire()
        else:
            payload = {"error": self.reason.value}
        payload["reason"] = self.reason.value
        payload["call_id"] = self.call_id
        if self.message:
            payload["message"] = self.message
        return payload


Outcome = AnnotatedResult | Rejection | ToolError


class AuditLog:
    """Structured JSON lines; kept in memory and optionally appended to a file or callback."""

    def __init__(self, sink: Optional[str | Path | Callable[[str], None]] = None):
        self.lines: list[str] = []
        self._lock = threading.Lock()
        self._sink = sink

    def write(self, event: str, **fields: Any) -> None:
        record = {"ts": datetime.now(timezone.utc).isoformat(timespec="milliseconds"), "event": event, **fields}
        line = json.dumps(record, sort_keys=True, default=str)
        with self._lock:
            self.lines.append(line)
            if callable(self._sink):
                self._sink(line)
            elif self._sink is not None:
                with open(self._sink, "a", encoding="utf-8") as fh:
                    fh.write(line + "\n")

    def events(self) -> list[dict[str, Any]]:
        return [json.loads(x) for x in self.lines]


@dataclass
class Session:
    session_id: str
    snapshot: OntologySnapshot
    store: StoragePort
    mode: ConstraintMode
    max_rounds: Optional[int]  # None disables the breaker
    tools: tuple[ToolSpec, ...]
    agents: list[str] = field(default_factory=list)
    round_counts: dict[str, int] = field(default_factory=dict)
    calls_per_question: dict[str, int] = field(default_factory=dict)
    audit: AuditLog = field(default_factory=AuditLog)
    _ids: Any = field(default_factory=lambda: itertools.count(1), repr=False)

    @property
    def pinned_version(self) -> str:
        return self.snapshot.version_id

    def join(self, agent_id: str) -> tuple[ToolSpec, ...]:
        """Register an agent; every agent receives the one session-level tool federation."""
        if agent_id not in self.agents:
            self.agents.append(agent_id)
            self.audit.write("agent_join", session_id=self.session_id, agent_id=agent_id)
        return self.tools

    def tools_json(self) -> str:
        return schemas_json(list(self.tools))

    def next_call_id(self) -> str:
        return f"{self.session_id[:8]}-{next(self._ids)}"

    def rounds(self, question_id: str) -> int:
        return self.round_counts.get(question_id, 0)

    def circuit_open(self, question_id: str) -> bool:
        return self.max_rounds is not None and self.rounds(question_id) >= self.max_rounds


def open_session(snap: OntologySnapshot, store: StoragePort, mode: ConstraintMode | str = ConstraintMode.CONSTRAINED,
                 max_rounds: Optional[int] = DEFAULT_MAX_ROUNDS, audit: Optional[AuditLog] = None,
                 session_id: Optional[str] = None) -> Session:
    mode = ConstraintMode(mode)
    session = Session(
        session_id=session_id or uuid.uuid4().hex,
        snapshot=snap, store=store, mode=mode, max_rounds=max_rounds,
        tools=tuple(project_schemas(snap, mode)),
        audit=audit or AuditLog(),
    )
    session.audit.write("session_open", session_id=session.session_id, pinned_version=snap.version_id,
                        template_id=snap.template_id, mode=mode.value, max_rounds=max_rounds)
    return session


def gate(call: ToolCall, session: Session) -> Pass | Rejection:
    """Pass iff the version matches, the breaker is closed and every entity argument resolves."""
    call_id = call.call_id or session.next_call_id()
    version = call.snapshot_version or session.pinned_version
    if version != session.pinned_version:
        out: Pass | Rejection = Rejection(
            call_id, RejectionReason.VERSION_MISMATCH,
            message=f"call stamped {version[:12]} but session is pinned to {session.pinned_version[:12]}")
    elif session.circuit_open(call.question_id):
        out = Rejection(call_id, RejectionReason.CIRCUIT_OPEN,
                        message=f"question {call.question_id!r} reached {session.max_rounds} rounds")
    else:
        spec = TOOLS_BY_NAME.get(call.name)
        failure = None
        if spec is not None and isinstance(call.args, dict):
            _, failure = resolve_arguments(spec, call.args, session.snapshot)
        out = Rejection(call_id, RejectionReason.INVALID_PARAMETER, failure, failure.message()) if failure \
            else Pass(call_id)
    if isinstance(out, Pass):
        session.audit.write("gate_pass", session_id=session.session_id, call_id=call_id, tool=call.name,
                            question_id=call.question_id, agent_id=call.agent_id)
    else:
        session.audit.write("gate_reject", session_id=session.session_id, call_id=call_id, tool=call.name,
                            question_id=call.question_id, agent_id=call.agent_id, reason=out.reason.value,
                            detail=out.to_wire())
    return out


def execute_round(session: Session, calls: Sequence[ToolCall], question_id: Optional[str] = None) -> list[Outcome]:
    """Gate and run one batch. The round counter advances once, and only if the breaker admitted the round."""
    qid = question_id or (calls[0].question_id if calls else "q0")
    admitted = not session.circuit_open(qid)
    outcomes: list[Outcome] = []
    for call in calls:
        if call.question_id != qid:
            call = ToolCall(call.name, call.args, call.call_id, qid, call.agent_id, call.snapshot_version)
        verdict = gate(call, session)
        if isinstance(verdict, Rejection):
            outcomes.append(verdict)
            continue
        outcomes.append(invoke(call.name, call.args, session.snapshot, session.store))
    if admitted:
        session.round_counts[qid] = session.rounds(qid) + 1
        session.calls_per_question[qid] = session.calls_per_question.get(qid, 0) + len(calls)
        session.audit.write("round_advance", session_id=session.session_id, question_id=qid,
                            round=session.round_counts[qid], calls=len(calls))
    return outcomes


class RecursiveDecompositionAgent:
    """Scripted agent that keeps splitting a question into more sub-queries.

    Round k issues fib(k) calls (1, 1, 2, 3, 5, ...) and stops on its own only
    after ``depth`` rounds. It ignores rejections, so the breaker is the only
    thing that can cut it short.
    """

    TOOLS = ("cycle_time", "first_pass_yield", "oee_decomposition", "spc_violation")

    def __init__(self, agent_id: str = "recursive-agent", depth: int = 5):
        self.agent_id = agent_id
        self.depth = depth

    def plan(self) -> list[int]:
        sizes, a, b = [], 1, 1
        for _ in range(self.depth):
            sizes.append(a)
            a, b = b, a + b
        return sizes

    def run(self, session: Session, question_id: str) -> dict[str, int]:
        tools = session.join(self.agent_id)
        stations = next(p.enum for t in tools if t.name == "cycle_time" for p in t.params
                        if p.name == "station_id") or session.snapshot.document.line_order
        issued = executed = rounds = 0
        for size in self.plan():
            if session.circuit_open(question_id):
                break
            calls = [ToolCall(self.TOOLS[(issued + i) % len(self.TOOLS)],
                              {"station_id": stations[(issued + i) % len(stations)]},
                              question_id=question_id, agent_id=self.agent_id) for i in range(size)]
            outcomes = execute_round(session, calls, question_id)
            issued += size
            executed += sum(1 for o in outcomes if isinstance(o, AnnotatedResult))
            rounds += 1
        return {"rounds": rounds, "calls": issued, "executed": executed}
