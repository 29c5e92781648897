"""Natural-language query cases for the fabrication experiment."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from importlib import resources
from pathlib import Path
from typing import Optional


@dataclass(frozen=True)
class QueryCase:
    query_id: str
    template_id: str
    tool_name: str
    param: str  # argument that carries the target entity
    expected_entity: str
    text: str  # names the entity by domain phrase only

    def to_dict(self) -> dict:
        return asdict(self)


def load_queries(path: Optional[str | Path] = None) -> list[QueryCase]:
    if path is None:
        raw = resources.files("ontotwin.harness").joinpath("queries.json").read_text(encoding="utf-8")
    else:
        raw = Path(path).read_text(encoding="utf-8")
    return [QueryCase(**item) for item in json.loads(raw)]
