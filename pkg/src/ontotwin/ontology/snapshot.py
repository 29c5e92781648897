"""Content-addressed ontology snapshots and structural diffs."""

from __future__ import annotations

import copy
import hashlib
import json
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any, Mapping

from .document import OntologyDocument, parse_document

_MISSING = object()


def _normalize(value: Any) -> Any:
    # Integral floats collapse to ints so 1 and 1.0 hash identically.
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite number {value!r} cannot be canonicalized")
        return int(value) if value.is_integer() else value
    if isinstance(value, Mapping):
        return {str(k): _normalize(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_normalize(v) for v in value]
    return value


def canonical_form(doc: OntologyDocument | Mapping[str, Any]) -> dict[str, Any]:
    data = doc.to_dict() if isinstance(doc, OntologyDocument) else doc
    return _normalize(data)


def canonical_bytes(doc: OntologyDocument | Mapping[str, Any]) -> bytes:
    """Sorted keys, no whitespace, shortest round-trip decimal floats."""
    return json.dumps(
        canonical_form(doc), sort_keys=True, separators=(",", ":"), ensure_ascii=False, allow_nan=False
    ).encode("utf-8")


def version_id(doc: OntologyDocument | Mapping[str, Any]) -> str:
    return hashlib.sha256(canonical_bytes(doc)).hexdigest()


@dataclass(frozen=True, eq=False)
class OntologySnapshot:
    document: OntologyDocument
    version_id: str
    created_at: str
    template_id: str
    _index: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def short_version(self) -> str:
        return self.version_id[:12]

    def __eq__(self, other):
        return isinstance(other, OntologySnapshot) and self.version_id == other.version_id

    def __hash__(self):
        return hash(self.version_id)


def snapshot(doc: OntologyDocument, template_id: str | None = None) -> OntologySnapshot:
    return OntologySnapshot(
        document=doc,
        version_id=version_id(doc),
        created_at=datetime.now(timezone.utc).isoformat(timespec="seconds"),
        template_id=template_id or doc.source,
    )


# ---------------------------------------------------------------------------
# diffs


@dataclass(frozen=True)
class DiffEntry:
    export: str
    path: tuple[str, ...]
    before: Any
    after: Any


@dataclass(frozen=True)
class OntologyDiff:
    added: tuple[DiffEntry, ...] = ()
    removed: tuple[DiffEntry, ...] = ()
    changed: tuple[DiffEntry, ...] = ()
    from_version: str = ""
    to_version: str = ""

    def is_empty(self) -> bool:
        return not (self.added or self.removed or self.changed)

    def __len__(self) -> int:
        return len(self.added) + len(self.removed) + len(self.changed)

    def to_dict(self) -> dict[str, Any]:
        def rows(entries):
            return [
                {"export": e.export, "path": list(e.path), "before": e.before, "after": e.after}
                for e in entries
            ]

        return {
            "from_version": self.from_version,
            "to_version": self.to_version,
            "added": rows(self.added),
            "removed": rows(self.removed),
            "changed": rows(self.changed),
        }


def _walk(a: Any, b: Any, path: tuple[str, ...], out: dict[str, list]):
    # Lists are compared as leaves; order inside a list is meaningful.
    if isinstance(a, dict) and isinstance(b, dict):
        for key in sorted(set(a) | set(b)):
            va, vb = a.get(key, _MISSING), b.get(key, _MISSING)
            sub = path + (key,)
            if va is _MISSING:
                out["added"].append(DiffEntry(sub[0], sub[1:], None, copy.deepcopy(vb)))
            elif vb is _MISSING:
                out["removed"].append(DiffEntry(sub[0], sub[1:], copy.deepcopy(va), None))
            else:
                _walk(va, vb, sub, out)
    elif a != b or type(a) is not type(b):
        out["changed"].append(DiffEntry(path[0], path[1:], copy.deepcopy(a), copy.deepcopy(b)))


def diff_documents(a: Mapping[str, Any], b: Mapping[str, Any]) -> OntologyDiff:
    out: dict[str, list] = {"added": [], "removed": [], "changed": []}
    _walk(canonical_form(a), canonical_form(b), (), out)
    return OntologyDiff(tuple(out["added"]), tuple(out["removed"]), tuple(out["changed"]))


def diff(a: OntologySnapshot, b: OntologySnapshot) -> OntologyDiff:
    d = diff_documents(a.document.to_dict(), b.document.to_dict())
    return OntologyDiff(d.added, d.removed, d.changed, a.version_id, b.version_id)


def apply_diff(canonical: Mapping[str, Any], d: OntologyDiff) -> dict[str, Any]:
    """Apply ``d`` to a canonical form, returning a new canonical form."""
    out = copy.deepcopy(dict(canonical))

    def parent(entry: DiffEntry):
        node = out
        keys = (entry.export,) + tuple(entry.path)
        for key in keys[:-1]:
            node = node.setdefault(key, {})
        return node, keys[-1]

    for entry in d.removed:
        node, key = parent(entry)
        del node[key]
    for entry in d.changed + d.added:
        node, key = parent(entry)
        node[key] = copy.deepcopy(entry.after)
    return out


def snapshot_from_canonical(data: Mapping[str, Any], template_id: str) -> OntologySnapshot:
    return snapshot(parse_document(data, template_id), template_id)
