"""resolve / contextualize / annotate against a pinned ontology snapshot."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from typing import Any, Optional

from .ontology import OntologySnapshot
from .warehouse.schema import JOIN_HINTS


class EntityKind(str, Enum):
    STATION = "Station"
    WORK_CENTER = "WorkCenter"
    EQUIPMENT = "Equipment"
    PRODUCT = "Product"
    RAW_MATERIAL = "RawMaterial"
    FINISHED_MATERIAL = "FinishedMaterial"
    SUPPLIER = "Supplier"
    FAILURE_CODE = "FailureCode"
    CERTIFICATION = "Certification"
    SKILL = "Skill"
    TOOL_DEFINITION = "ToolDefinition"
    INSPECTION_PLAN = "InspectionPlan"
    NCR_DISPOSITION = "NcrDisposition"

    @property
    def export(self) -> str:
        return KIND_EXPORTS[self]


KIND_EXPORTS: dict[EntityKind, str] = {
    EntityKind.STATION: "STATIONS",
    EntityKind.WORK_CENTER: "WORK_CENTER_UNITS",
    EntityKind.EQUIPMENT: "EQUIPMENT",
    EntityKind.PRODUCT: "PRODUCTS",
    EntityKind.RAW_MATERIAL: "RAW_MATERIALS",
    EntityKind.FINISHED_MATERIAL: "FINISHED_MATERIALS",
    EntityKind.SUPPLIER: "SUPPLIERS",
    EntityKind.FAILURE_CODE: "FAILURE_CODES",
    EntityKind.CERTIFICATION: "CERTIFICATIONS",
    EntityKind.SKILL: "SKILLS",
    EntityKind.TOOL_DEFINITION: "TOOL_DEFINITIONS",
    EntityKind.INSPECTION_PLAN: "INSPECTION_PLANS",
    EntityKind.NCR_DISPOSITION: "NCR_DISPOSITIONS",
}


class VersionMismatch(Exception):
    def __init__(self, expected: str, actual: str):
        super().__init__(f"snapshot version mismatch: expected {expected[:12]}, got {actual[:12]}")
        self.expected = expected
        self.actual = actual


@dataclass(frozen=True)
class NodeRef:
    kind: EntityKind
    id: str
    snapshot_version: str

    def to_dict(self) -> dict[str, str]:
        return {"kind": self.kind.value, "id": self.id, "snapshot_version": self.snapshot_version}


@dataclass(frozen=True)
class ResolutionError:
    """The designed rejection: the value is not an id of ``kind``."""

    kind: EntityKind
    rejected_value: str
    valid_set: tuple[str, ...]

    def to_wire(self) -> dict[str, Any]:
        return {
            "error": "invalid_parameter",
            "kind": self.kind.value,
            "rejected": self.rejected_value,
            "valid": list(self.valid_set),
        }

    def message(self) -> str:
        return (f"{self.kind.value} {self.rejected_value!r} does not exist. "
                f"Valid options: {', '.join(self.valid_set)}")


def natural_key(s: str):
    """Sort key that orders S2 before S10."""
    return [(0, int(p), "") if p.isdigit() else (1, 0, p) for p in re.split(r"(\d+)", s) if p]


@dataclass(frozen=True)
class _KindIndex:
    members: frozenset
    ordered: tuple[str, ...]


def _index(snap: OntologySnapshot, key) -> _KindIndex:
    # Per-snapshot cache; snapshots are immutable so entries never go stale.
    idx = snap._index.get(key)
    if idx is None:
        if isinstance(key, EntityKind):
            ids = snap.document[key.export].keys()
        else:  # ("station-failure-codes", station_id)
            ids = snap.document["STATION_FAILURE_CODES"].get(key[1], ())
        idx = _KindIndex(frozenset(ids), tuple(sorted(ids, key=natural_key)))
        snap._index[key] = idx
    return idx


def valid_ids(kind: EntityKind, snap: OntologySnapshot) -> tuple[str, ...]:
    return _index(snap, kind).ordered


def resolve(param_value: Any, kind: EntityKind, snap: OntologySnapshot, *,
            station: Optional[str] = None) -> NodeRef | ResolutionError:
    """Exact-match lookup. Failure codes are scoped to ``station`` when one is given."""
    if kind is EntityKind.FAILURE_CODE and station is not None and station in snap.document["STATIONS"]:
        idx = _index(snap, ("station-failure-codes", station))
    else:
        idx = _index(snap, kind)
    if isinstance(param_value, str) and param_value in idx.members:
        return NodeRef(kind, param_value, snap.version_id)
    return ResolutionError(kind, param_value if isinstance(param_value, str) else repr(param_value), idx.ordered)


@dataclass(frozen=True)
class DomainContext:
    node: NodeRef
    name: str
    applicable_failure_codes: tuple[str, ...] = ()
    regulatory_standards: tuple[str, ...] = ()
    process_parameters: Optional[dict] = None
    upstream: Optional[NodeRef] = None
    downstream: Optional[NodeRef] = None
    join_hints: tuple[str, ...] = ()
    required_certifications: tuple[str, ...] = ()

    def to_dict(self) -> dict[str, Any]:
        return {
            "node": self.node.to_dict(),
            "name": self.name,
            "applicable_failure_codes": list(self.applicable_failure_codes),
            "regulatory_standards": list(self.regulatory_standards),
            "process_parameters": dict(self.process_parameters) if self.process_parameters else None,
            "upstream": self.upstream.to_dict() if self.upstream else None,
            "downstream": self.downstream.to_dict() if self.downstream else None,
            "join_hints": list(self.join_hints),
            "required_certifications": list(self.required_certifications),
        }


def _unique(items) -> tuple:
    return tuple(dict.fromkeys(items))


def _station_standards(doc, sid: str) -> list[str]:
    out = list(doc["STATIONS"][sid].get("regulatory_standards", ()))
    for cert in doc["STATION_CERTIFICATIONS"].get(sid, ()):
        out.append(doc["CERTIFICATIONS"][cert]["standard"])
    return out


def _stations_for(doc, kind: EntityKind, ident: str) -> list[str]:
    """Stations an entity is attached to, in line order."""
    order = doc.line_order
    if kind is EntityKind.STATION:
        return [ident]
    if kind is EntityKind.WORK_CENTER:
        return [s for s in order if doc["STATION_TO_WC"][s] == ident]
    if kind is EntityKind.EQUIPMENT:
        wc = doc["EQUIPMENT"][ident]["work_center"]
        return [s for s in order if doc["STATION_TO_WC"][s] == wc]
    if kind is EntityKind.FAILURE_CODE:
        return [s for s in order if ident in doc["STATION_FAILURE_CODES"].get(s, ())]
    if kind is EntityKind.CERTIFICATION:
        return [s for s in order if ident in doc["STATION_CERTIFICATIONS"].get(s, ())]
    if kind is EntityKind.SKILL:
        return [s for s in order if ident in doc["STATION_SKILLS"].get(s, ())]
    if kind is EntityKind.TOOL_DEFINITION:
        return [s for s in order if ident in doc["STATION_TOOLS"].get(s, ())]
    if kind is EntityKind.INSPECTION_PLAN:
        return [s for s in order if ident in doc["STATION_INSPECTION_PLANS"].get(s, ())]
    if kind is EntityKind.RAW_MATERIAL:
        return [s for s in order if ident in doc["OPERATION_MATERIAL_CONSUMPTION"].get(s, {})]
    if kind is EntityKind.SUPPLIER:
        mats = {m for m, rec in doc["RAW_MATERIALS"].items() if rec["supplier"] == ident}
        return [s for s in order if mats & set(doc["OPERATION_MATERIAL_CONSUMPTION"].get(s, {}))]
    if kind is EntityKind.PRODUCT:
        plan = doc["PROCESS_PLANS"][doc["PRODUCTS"][ident]["process_plan"]]
        return list(plan["stations"])
    return []


def _display_name(doc, kind: EntityKind, ident: str) -> str:
    rec = doc[kind.export][ident]
    if isinstance(rec, (int, float)):  # work centers map to unit counts
        return ident
    return rec.get("name") or rec.get("description") or ident


def contextualize(node: NodeRef, snap: OntologySnapshot) -> DomainContext:
    """Assemble the relational context of a resolved node purely from the snapshot."""
    if node.snapshot_version != snap.version_id:
        raise VersionMismatch(snap.version_id, node.snapshot_version)
    doc = snap.document
    kind, ident = node.kind, node.id
    authority = list(doc["REGULATORY_AUTHORITY"])
    stations = _stations_for(doc, kind, ident)

    if kind is EntityKind.FAILURE_CODE:
        failure_codes: tuple[str, ...] = (ident,)
    else:
        failure_codes = _unique(c for s in stations for c in doc["STATION_FAILURE_CODES"].get(s, ()))
    certs = _unique(c for s in stations for c in doc["STATION_CERTIFICATIONS"].get(s, ()))
    if kind is EntityKind.CERTIFICATION:
        certs = (ident,)
    standards = _unique(authority + [x for s in stations for x in _station_standards(doc, s)])

    hints = list(JOIN_HINTS[kind.value])
    params = upstream = downstream = None
    if kind is EntityKind.STATION:
        st = doc.stations[ident]
        params = {
            "work_center": st.work_center,
            "cycle_time_range_min": list(st.cycle_time_range_min),
            "setup_time_min": list(st.setup_time_min),
            "first_pass_yield": st.first_pass_yield,
            "is_quality_gate": st.is_quality_gate,
        }
        order = doc.line_order
        pos = doc.station_order_index[ident]
        if pos > 0:
            upstream = NodeRef(EntityKind.STATION, order[pos - 1], snap.version_id)
        if pos + 1 < len(order):
            downstream = NodeRef(EntityKind.STATION, order[pos + 1], snap.version_id)
        if certs:
            hints.append("bridge_operator_certification")
        if doc["OPERATION_MATERIAL_CONSUMPTION"].get(ident):
            hints.append("fact_material_consumption")

    return DomainContext(
        node=node,
        name=_display_name(doc, kind, ident),
        applicable_failure_codes=failure_codes,
        regulatory_standards=standards,
        process_parameters=params,
        upstream=upstream,
        downstream=downstream,
        join_hints=_unique(hints),
        required_certifications=certs,
    )


@dataclass(frozen=True)
class AnnotatedResult:
    """A tool result stamped with the context and ontology version that produced it.

    ``context`` is None for line-level results that name no entity.
    """

    result: Any
    context: Optional[DomainContext]
    snapshot_version: str
    produced_at: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds"))

    def to_dict(self) -> dict[str, Any]:
        result = self.result.to_dict() if hasattr(self.result, "to_dict") else self.result
        return {
            "result": result,
            "context": self.context.to_dict() if self.context else None,
            "snapshot_version": self.snapshot_version,
            "produced_at": self.produced_at,
        }


def annotate(result: Any, ctx: Optional[DomainContext], snap: OntologySnapshot) -> AnnotatedResult:
    if ctx is not None and ctx.node.snapshot_version != snap.version_id:
        raise VersionMismatch(snap.version_id, ctx.node.snapshot_version)
    return AnnotatedResult(result, ctx, snap.version_id)
