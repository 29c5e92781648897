"""Typed tool results and errors."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional


@dataclass(frozen=True)
class ToolResult:
    tool: str
    entity: dict[str, str]
    metric: str
    value: Any
    unit: str
    period: str
    breakdown: tuple[dict[str, Any], ...] = ()
    rows: int = 0
    extra: dict[str, Any] = field(default_factory=dict)
    sources: tuple[str, ...] = ()

    @property
    def empty(self) -> bool:
        return False

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = dict(self.entity)
        out.update({"metric": self.metric, "value": self.value, "unit": self.unit, "period": self.period})
        out.update(self.extra)
        out["breakdown"] = [dict(b) for b in self.breakdown]
        out["rows"] = self.rows
        return out


@dataclass(frozen=True)
class EmptyResult(ToolResult):
    """The query was valid and matched zero rows. It says nothing about whether issues exist."""

    @property
    def empty(self) -> bool:
        return True

    def to_dict(self) -> dict[str, Any]:
        out = super().to_dict()
        out["empty"] = True
        out["message"] = "zero rows matched"
        return out


@dataclass(frozen=True)
class ToolError:
    code: str  # invalid_arguments | storage_error | unknown_tool
    message: str
    tool: Optional[str] = None

    def to_wire(self) -> dict[str, Any]:
        return {"error": self.code, "message": self.message, "tool": self.tool}
