"""Tool specifications and ontology-projected parameter schemas."""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from enum import Enum
from typing import Any, Optional

from ..contract import EntityKind, valid_ids
from ..ontology import OntologySnapshot


class ConstraintMode(str, Enum):
    CONSTRAINED = "constrained"
    UNCONSTRAINED = "unconstrained"


class DomainGroup(str, Enum):
    PRODUCTION = "Production"
    QUALITY = "Quality"
    MATERIALS = "Materials"
    ENGINEERING_CHANGE = "EngineeringChange"
    OPERATIONS = "Operations"


PERIOD_HELP = "ISO week like 2025-w18, a day range YYYY-MM-DD..YYYY-MM-DD, or one date; omit for the full horizon"


@dataclass(frozen=True)
class ParamSpec:
    name: str
    entity_kind: Optional[EntityKind] = None
    required: bool = False
    description: str = ""
    constraint_mode: ConstraintMode = ConstraintMode.UNCONSTRAINED
    enum: Optional[tuple[str, ...]] = None

    def json_schema(self) -> dict[str, Any]:
        out: dict[str, Any] = {"type": "string", "description": self.description}
        if self.enum is not None:
            out["enum"] = list(self.enum)
        return out


@dataclass(frozen=True)
class ToolSpec:
    name: str
    domain_group: DomainGroup
    description: str
    params: tuple[ParamSpec, ...]

    def param(self, name: str) -> ParamSpec:
        for p in self.params:
            if p.name == name:
                return p
        raise KeyError(name)

    @property
    def entity_params(self) -> tuple[ParamSpec, ...]:
        return tuple(p for p in self.params if p.entity_kind is not None)

    def input_schema(self) -> dict[str, Any]:
        return {
            "type": "object",
            "properties": {p.name: p.json_schema() for p in self.params},
            "required": [p.name for p in self.params if p.required],
            "additionalProperties": False,
        }

    def to_wire(self) -> dict[str, Any]:
        return {"name": self.name, "description": self.description,
                "domain_group": self.domain_group.value, "inputSchema": self.input_schema()}


def _station(required: bool = True) -> ParamSpec:
    return ParamSpec("station_id", EntityKind.STATION, required, "Production line station identifier")


_PERIOD = ParamSpec("period", None, False, PERIOD_HELP)

TOOL_SPECS: tuple[ToolSpec, ...] = (
    ToolSpec("cycle_time", DomainGroup.PRODUCTION,
             "Cycle and setup time statistics for one station.", (_station(), _PERIOD)),
    ToolSpec("first_pass_yield", DomainGroup.PRODUCTION,
             "Share of operations passing inspection on the first attempt at one station.", (_station(), _PERIOD)),
    ToolSpec("oee_decomposition", DomainGroup.PRODUCTION,
             "OEE = availability x performance x quality for one station.", (_station(), _PERIOD)),
    ToolSpec("ncr_pareto", DomainGroup.QUALITY,
             "Non-conformance counts by failure code, most frequent first.",
             (_station(False), ParamSpec("failure_code", EntityKind.FAILURE_CODE, False, "Failure code filter"),
              _PERIOD)),
    ToolSpec("spc_violation", DomainGroup.QUALITY,
             "Out-of-spec and out-of-control measurements per characteristic at one station.",
             (_station(), _PERIOD)),
    ToolSpec("quality_action", DomainGroup.QUALITY,
             "NCR dispositions with CAPA and open-item counts.",
             (ParamSpec("disposition", EntityKind.NCR_DISPOSITION, False, "NCR disposition code"), _PERIOD)),
    ToolSpec("material_genealogy", DomainGroup.MATERIALS,
             "Lots of a raw material traced to the orders, stations and products that consumed them.",
             (ParamSpec("material_id", EntityKind.RAW_MATERIAL, False, "Raw material identifier"),
              ParamSpec("order_id", None, False, "Work order identifier"))),
    ToolSpec("supplier_performance", DomainGroup.MATERIALS,
             "On-time delivery performance of one supplier by material.",
             (ParamSpec("supplier_id", EntityKind.SUPPLIER, True, "Supplier identifier"), _PERIOD)),
    ToolSpec("change_impact", DomainGroup.ENGINEERING_CHANGE,
             "Engineering change packages touching a station, by change type.", (_station(False), _PERIOD)),
    ToolSpec("change_velocity", DomainGroup.ENGINEERING_CHANGE,
             "Approval and implementation lead times of engineering changes.",
             (ParamSpec("product_id", EntityKind.PRODUCT, False, "Product identifier"), _PERIOD)),
    ToolSpec("equipment_downtime", DomainGroup.OPERATIONS,
             "Downtime events and minutes per equipment unit.", (_station(False), _PERIOD)),
    ToolSpec("production_status", DomainGroup.OPERATIONS,
             "Line or station production summary: operations completed, yield, cycle time.",
             (_station(False), _PERIOD)),
)

TOOLS_BY_NAME: dict[str, ToolSpec] = {t.name: t for t in TOOL_SPECS}


def project_schemas(snap: OntologySnapshot, mode: ConstraintMode | str) -> list[ToolSpec]:
    """Project the 12 specs for ``snap``: entity params become enums in constrained mode."""
    mode = ConstraintMode(mode)
    out = []
    for spec in TOOL_SPECS:
        params = []
        for p in spec.params:
            if p.entity_kind is not None and mode is ConstraintMode.CONSTRAINED:
                p = replace(p, constraint_mode=mode, enum=valid_ids(p.entity_kind, snap))
            else:
                p = replace(p, constraint_mode=mode, enum=None)
            params.append(p)
        out.append(replace(spec, params=tuple(params)))
    return out


def schemas_json(specs: list[ToolSpec]) -> str:
    """Canonical text of a tool list; equal text means byte-identical schemas."""
    return json.dumps([s.to_wire() for s in specs], sort_keys=True, separators=(",", ":"))
