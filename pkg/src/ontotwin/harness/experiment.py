"""Constrained vs unconstrained parameter experiment over the query set."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Any, Iterable, Mapping, Optional, Sequence

from ..contract import AnnotatedResult
from ..ontology import TEMPLATE_IDS, OntologySnapshot, template_snapshot
from ..orchestrator import AuditLog, Rejection, ToolCall, execute_round, open_session
from ..simulator import run_simulation
from ..tools import TOOL_FUNCTIONS, TOOLS_BY_NAME, ConstraintMode, EmptyResult, ToolError, parse_period, resolve_arguments
from ..warehouse import Warehouse, populate
from ..warehouse.store import StorageError
from .clients import ClientError, ModelClientPort, ProposedCall
from .queries import QueryCase

EXPERIMENT_SEED = 42
EXPERIMENT_DAYS = 30
EXPERIMENT_PROFILE = "stable"


class OutcomeClass(str, Enum):
    FABRICATED_ID = "FabricatedId"
    VALID_EMPTY_RESULT = "ValidEmptyResult"
    QUERY_ERROR = "QueryError"
    CORRECT = "Correct"


def classify(query: QueryCase, call: Optional[ProposedCall], outcome: Any, snap: OntologySnapshot) -> OutcomeClass:
    """Exactly one class per run. Checked in order: fabricated id, error, empty, correct."""
    if call is None:
        return OutcomeClass.QUERY_ERROR
    spec = TOOLS_BY_NAME.get(call.name)
    if spec is not None and isinstance(call.args, Mapping):
        _, failure = resolve_arguments(spec, call.args, snap)
        if failure is not None:
            return OutcomeClass.FABRICATED_ID
    if not isinstance(outcome, AnnotatedResult):
        return OutcomeClass.QUERY_ERROR
    if isinstance(outcome.result, EmptyResult):
        return OutcomeClass.VALID_EMPTY_RESULT
    queried = call.args.get(query.param) if call.name == query.tool_name else None
    if queried == query.expected_entity and outcome.result.rows > 0:
        return OutcomeClass.CORRECT
    # a real entity with rows, but not the one asked about
    return OutcomeClass.QUERY_ERROR


@dataclass(frozen=True)
class QueryRecord:
    query_id: str
    template_id: str
    tool_name: str
    domain_group: str
    expected_entity: str
    emitted: Optional[str]
    outcome: OutcomeClass
    detail: str = ""
    ungated: Optional[str] = None  # what a fabricated call would have returned without the gate

    def to_dict(self) -> dict[str, Any]:
        out = asdict(self)
        out["outcome"] = self.outcome.value
        return out


def _pct(k: int, n: int) -> str:
    return f"{k} ({100.0 * k / n:.0f}%)" if n else "0"


@dataclass
class ExperimentReport:
    mode: ConstraintMode
    client: str
    records: list[QueryRecord] = field(default_factory=list)
    storage_queries_on_rejected: int = 0

    @property
    def counts(self) -> Counter:
        return Counter(r.outcome for r in self.records)

    def count(self, outcome: OutcomeClass) -> int:
        return self.counts.get(outcome, 0)

    @property
    def fabrication_rate(self) -> float:
        return self.count(OutcomeClass.FABRICATED_ID) / len(self.records) if self.records else 0.0

    def outcome_table(self) -> dict[str, Any]:
        n = len(self.records)
        row = {c.value: self.count(c) for c in OutcomeClass}
        ungated = Counter(r.ungated for r in self.records if r.outcome is OutcomeClass.FABRICATED_ID)
        return {"mode": self.mode.value, "total": n, **row,
                "fabricated_if_ungated": {"empty": ungated.get("empty", 0), "error": ungated.get("error", 0),
                                          "rows": ungated.get("rows", 0)}}

    def by_config(self) -> list[dict[str, Any]]:
        rows = []
        for template_id in dict.fromkeys(r.template_id for r in self.records):
            recs = [r for r in self.records if r.template_id == template_id]
            fab = [r for r in recs if r.outcome is OutcomeClass.FABRICATED_ID]
            rows.append({"config": template_id, "queries": len(recs), "fabricated": len(fab),
                         "rate": len(fab) / len(recs), "examples": sorted({r.emitted for r in fab if r.emitted})[:3]})
        return rows

    def by_domain(self) -> list[dict[str, Any]]:
        rows = []
        for group in dict.fromkeys(r.domain_group for r in self.records):
            recs = [r for r in self.records if r.domain_group == group]
            fab = sum(r.outcome is OutcomeClass.FABRICATED_ID for r in recs)
            rows.append({"domain": group, "tools": len({r.tool_name for r in recs}), "queries": len(recs),
                         "fabricated": fab, "rate": fab / len(recs)})
        return rows

    def to_dict(self) -> dict[str, Any]:
        return {"mode": self.mode.value, "client": self.client, "outcomes": self.outcome_table(),
                "by_config": self.by_config(), "by_domain": self.by_domain(),
                "storage_queries_on_rejected": self.storage_queries_on_rejected,
                "records": [r.to_dict() for r in self.records]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_text(self) -> str:
        n = len(self.records)
        o = self.outcome_table()
        lines = [f"Outcomes ({self.client} client, {self.mode.value} parameters, {n} queries)",
                 f"{'Condition':<15}{'Fabricated ids':>16}{'Valid empty':>14}{'Query error':>14}{'Correct':>12}",
                 f"{self.mode.value:<15}{_pct(o['FabricatedId'], n):>16}{_pct(o['ValidEmptyResult'], n):>14}"
                 f"{_pct(o['QueryError'], n):>14}{_pct(o['Correct'], n):>12}"]
        fab = o["FabricatedId"]
        if fab:
            u = o["fabricated_if_ungated"]
            lines.append(f"  of {fab} fabricated ids, without the gate: {u['empty']} empty result, "
                         f"{u['error']} query error, {u['rows']} returned rows")
        lines += ["", "By configuration", f"{'Config':<15}{'Queries':>8}{'Fabricated':>12}{'Rate':>7}  Examples"]
        for r in self.by_config():
            lines.append(f"{r['config']:<15}{r['queries']:>8}{r['fabricated']:>12}{r['rate']:>7.0%}  "
                         f"{', '.join(r['examples'])}")
        lines += ["", "By tool domain", f"{'Domain':<19}{'Tools':>6}{'Queries':>8}{'Fabricated':>12}{'Rate':>7}"]
        for r in self.by_domain():
            lines.append(f"{r['domain']:<19}{r['tools']:>6}{r['queries']:>8}{r['fabricated']:>12}{r['rate']:>7.0%}")
        lines.append(f"\nstorage queries executed for rejected calls: {self.storage_queries_on_rejected}")
        return "\n".join(lines)


def build_warehouses(template_ids: Iterable[str] = TEMPLATE_IDS, seed: int = EXPERIMENT_SEED,
                     days: int = EXPERIMENT_DAYS, profile: str = EXPERIMENT_PROFILE) -> dict[str, Warehouse]:
    out = {}
    for template_id in template_ids:
        snap = template_snapshot(template_id)
        out[template_id] = populate(snap, run_simulation(snap, seed, days, profile))
    return out


def _ungated_probe(call: ProposedCall, snap: OntologySnapshot, warehouse: Warehouse) -> str:
    """Run the analytics query directly, as an unguarded pipeline would. Diagnostic only."""
    fn = TOOL_FUNCTIONS.get(call.name)
    if fn is None:
        return "error"
    args = {k: v for k, v in call.args.items() if k != "period" and v is not None}
    try:
        result = fn(warehouse.store, snap, parse_period(call.args.get("period")), **args)
    except (StorageError, LookupError, TypeError, ValueError):
        return "error"
    return "empty" if isinstance(result, EmptyResult) else "rows"


def run_experiment(queries: Sequence[QueryCase], client: ModelClientPort, mode: ConstraintMode | str,
                   warehouses: Mapping[str, Warehouse], probe_ungated: bool = True,
                   audit: Optional[AuditLog] = None) -> ExperimentReport:
    """One session per configuration; queries run in order, each as its own question."""
    mode = ConstraintMode(mode)
    report = ExperimentReport(mode, getattr(client, "name", type(client).__name__))
    audit = audit or AuditLog()
    sessions = {}
    for q in queries:
        wh = warehouses[q.template_id]
        snap = template_snapshot(q.template_id)
        if wh.manifest.snapshot_version != snap.version_id:
            raise ValueError(f"warehouse for {q.template_id} was built from a different ontology version")
        if q.template_id not in sessions:
            sessions[q.template_id] = open_session(snap, wh.store, mode, audit=audit)
        session = sessions[q.template_id]
        tools = [t.to_wire() for t in session.join(report.client)]
        group = TOOLS_BY_NAME[q.tool_name].domain_group.value
        try:
            call: Optional[ProposedCall] = client.propose(q, tools)
        except ClientError as exc:
            report.records.append(QueryRecord(q.query_id, q.template_id, q.tool_name, group, q.expected_entity,
                                              None, OutcomeClass.QUERY_ERROR, f"client: {exc}"))
            continue
        before = wh.store.query_count
        (outcome,) = execute_round(session, [ToolCall(call.name, dict(call.args), question_id=q.query_id,
                                                      agent_id=report.client)], q.query_id)
        if isinstance(outcome, Rejection):
            report.storage_queries_on_rejected += wh.store.query_count - before
        cls = classify(q, call, outcome, session.snapshot)
        emitted = call.args.get(q.param)
        detail = ""
        if isinstance(outcome, Rejection):
            detail = outcome.message
        elif isinstance(outcome, ToolError):
            detail = outcome.message
        ungated = _ungated_probe(call, session.snapshot, wh) if probe_ungated and cls is OutcomeClass.FABRICATED_ID \
            else None
        report.records.append(QueryRecord(q.query_id, q.template_id, q.tool_name, group, q.expected_entity,
                                          None if emitted is None else str(emitted), cls, detail, ungated))
    return report

