from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .complexity import COMPLEXITY_TABLE, ComplexityRow, ValidationReport, measure, validate_counts
from .document import (
    OPTIONAL_EXPORTS,
    REQUIRED_EXPORTS,
    LoadError,
    MissingExports,
    OntologyDocument,
    ParseError,
    ReferentialViolation,
    StationDef,
    Violation,
    load_document,
    parse_document,
)
from .snapshot import (
    DiffEntry,
    OntologyDiff,
    OntologySnapshot,
    apply_diff,
    canonical_bytes,
    canonical_form,
    diff,
    diff_documents,
    snapshot,
    version_id,
)

TEMPLATE_IDS = ("aerospace", "pharma", "automotive", "electronics", "food_beverage", "warehousing")


def template_path(template_id: str) -> Path:
    if template_id not in TEMPLATE_IDS:
        raise KeyError(f"unknown template {template_id!r}; choose from {', '.join(TEMPLATE_IDS)}")
    return Path(str(resources.files(__package__) / "templates" / f"{template_id}.json"))


def template_data(template_id: str) -> dict:
    """Raw decoded JSON of a built-in template (a fresh copy each call)."""
    return json.loads(template_path(template_id).read_text(encoding="utf-8"))


def load_template(template_id: str) -> OntologyDocument:
    return load_document(template_path(template_id))


@lru_cache(maxsize=None)
def template_snapshot(template_id: str) -> OntologySnapshot:
    return snapshot(load_template(template_id), template_id)


def resolve_document_arg(arg: str) -> OntologyDocument:
    """Accept either a built-in template name or a path to a JSON document."""
    if arg in TEMPLATE_IDS:
        return load_template(arg)
    return load_document(arg)


__all__ = [
    "COMPLEXITY_TABLE", "ComplexityRow", "DiffEntry", "LoadError", "MissingExports", "OPTIONAL_EXPORTS",
    "OntologyDiff", "OntologyDocument", "OntologySnapshot", "ParseError", "REQUIRED_EXPORTS",
    "ReferentialViolation", "StationDef", "TEMPLATE_IDS", "ValidationReport", "Violation", "apply_diff",
    "canonical_bytes", "canonical_form", "diff", "diff_documents", "load_document", "load_template",
    "measure", "parse_document", "resolve_document_arg", "snapshot", "template_data", "template_path",
    "template_snapshot", "validate_counts", "version_id",
]
