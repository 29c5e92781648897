"""Analytics tools: specs, projection and invocation."""

from __future__ import annotations

from typing import Any, Mapping, Optional

from ..contract import AnnotatedResult, EntityKind, ResolutionError, annotate, contextualize, resolve
from ..ontology import OntologySnapshot
from ..warehouse.store import StorageError, StoragePort
from .analytics import TOOL_FUNCTIONS, TOOL_SOURCES, result_entity_ids
from .period import Period, PeriodError, parse_period
from .results import EmptyResult, ToolError, ToolResult
from .specs import (
    PERIOD_HELP, TOOL_SPECS, TOOLS_BY_NAME, ConstraintMode, DomainGroup, ParamSpec, ToolSpec, project_schemas,
    schemas_json,
)

InvokeOutcome = AnnotatedResult | ResolutionError | ToolError


def check_arguments(spec: ToolSpec, args: Mapping[str, Any]) -> Optional[ToolError]:
    names = {p.name for p in spec.params}
    unknown = sorted(set(args) - names)
    if unknown:
        return ToolError("invalid_arguments", f"unknown argument(s) {unknown} for {spec.name}", spec.name)
    missing = [p.name for p in spec.params if p.required and args.get(p.name) in (None, "")]
    if missing:
        return ToolError("invalid_arguments", f"missing required argument(s) {missing} for {spec.name}", spec.name)
    for k, v in args.items():
        if v is not None and not isinstance(v, str):
            return ToolError("invalid_arguments", f"argument {k!r} must be a string", spec.name)
    return None


def resolve_arguments(spec: ToolSpec, args: Mapping[str, Any], snap: OntologySnapshot):
    """Resolve every entity argument; returns (nodes, first error or None)."""
    nodes = {}
    station = args.get("station_id")
    for p in spec.entity_params:
        value = args.get(p.name)
        if value is None:
            continue
        scope = station if p.entity_kind is EntityKind.FAILURE_CODE else None
        res = resolve(value, p.entity_kind, snap, station=scope)
        if isinstance(res, ResolutionError):
            return nodes, res
        nodes[p.name] = res
    return nodes, None


def invoke(tool: ToolSpec | str, args: Mapping[str, Any], snap: OntologySnapshot,
           store: StoragePort) -> InvokeOutcome:
    """Resolve, contextualize, query, annotate. Storage is never touched before resolution succeeds."""
    name = tool if isinstance(tool, str) else tool.name
    spec = TOOLS_BY_NAME.get(name)
    if spec is None:
        return ToolError("unknown_tool", f"no tool named {name!r}", name)
    args = dict(args)
    err = check_arguments(spec, args)
    if err:
        return err
    nodes, failure = resolve_arguments(spec, args, snap)
    if failure is not None:
        return failure
    try:
        period = parse_period(args.get("period"))
    except PeriodError as exc:
        return ToolError("invalid_arguments", f"period: {exc}", name)
    ctx = contextualize(next(iter(nodes.values())), snap) if nodes else None
    kwargs = {k: v for k, v in args.items() if k != "period" and v is not None}
    try:
        result = TOOL_FUNCTIONS[name](store, snap, period, **kwargs)
    except StorageError as exc:
        return ToolError("storage_error", str(exc), name)
    return annotate(result, ctx, snap)


__all__ = [
    "ConstraintMode", "DomainGroup", "EmptyResult", "InvokeOutcome", "PERIOD_HELP", "ParamSpec", "Period",
    "PeriodError", "TOOLS_BY_NAME", "TOOL_FUNCTIONS", "TOOL_SOURCES", "TOOL_SPECS", "ToolError", "ToolResult",
    "ToolSpec", "check_arguments", "invoke", "parse_period", "project_schemas", "resolve_arguments",
    "result_entity_ids", "schemas_json",
]
