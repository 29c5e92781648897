"""Ontology documents: the 45-export configuration contract.

A document is a JSON object with 45 required top-level keys. Loading checks
every key, then every cross-reference between collections, and reports all
problems in one error instead of stopping at the first.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from types import MappingProxyType
from typing import Any, Iterable, Mapping

REQUIRED_EXPORTS: tuple[str, ...] = (
    "PLANT_CODE", "PLANT_NAME", "SHIFTS", "OPERATING_DAYS",
    "BREAK_DURATION_MIN", "WEEKLY_PM_HOURS",
    "TARGET_OEE_RANGE", "FIRST_PASS_YIELD_RANGE", "AVG_WIP_RANGE",
    "OPERATORS_PER_SHIFT",
    "EQUIPMENT", "WORK_CENTER_UNITS", "PRODUCTS", "WORKING_DAYS_PER_YEAR",
    "STATIONS", "STATION_TO_WC",
    "RAW_MATERIALS", "FINISHED_MATERIALS", "PRODUCT_RAW_MATERIAL",
    "OPERATION_MATERIAL_CONSUMPTION",
    "SUPPLIERS", "FAILURE_CODES", "STATION_FAILURE_CODES",
    "PROCESS_PLANS", "INSPECTION_PLANS", "STATION_INSPECTION_PLANS",
    "NCR_DISPOSITIONS", "NCR_STATUS_DURATIONS", "CAPA_TRIGGER_RATE",
    "EQUIPMENT_DOWNTIME_PROB", "EQUIPMENT_DOWNTIME_DURATION_MIN",
    "ORDER_EXPEDITE_RATE", "BOP_REVISION_INTERVAL_DAYS",
    "CYCLE_TIME_VARIANCE", "DEFAULT_RANDOM_SEED",
    "CERTIFICATIONS", "STATION_CERTIFICATIONS",
    "SKILLS", "STATION_SKILLS",
    "TOOL_DEFINITIONS", "STATION_TOOLS",
    "STEP_TEMPLATES", "CHANGE_PACKAGE_RATE", "CHANGE_PACKAGE_PARAMS",
    "BOM_STATION_MATERIALS",
)

# Extension keys: accepted when present, never required.
OPTIONAL_EXPORTS: Mapping[str, Any] = MappingProxyType({
    "REGULATORY_AUTHORITY": (),
    "ENTITY_ALIASES": MappingProxyType({}),
})

WEEKDAYS = ("Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun")


@dataclass(frozen=True)
class Violation:
    export: str
    path: str
    message: str

    def __str__(self) -> str:
        where = f"{self.export}.{self.path}" if self.path else self.export
        return f"{where}: {self.message}"


class LoadError(Exception):
    """Base class for document load failures.

    Carries every missing export and every violation found, so a single
    load attempt reports the whole picture.
    """

    def __init__(self, source: str, missing: Iterable[str] = (), violations: Iterable[Violation] = ()):
        self.source = source
        self.missing = list(missing)
        self.violations = list(violations)
        parts = []
        if self.missing:
            parts.append(f"missing: {self.missing}")
        if self.violations:
            parts.append("violations: " + "; ".join(str(v) for v in self.violations))
        super().__init__(f"Template {source!r} " + " | ".join(parts))


class MissingExports(LoadError):
    pass


class ReferentialViolation(LoadError):
    """Cross-reference or value-constraint failures (ranges, probabilities)."""


class ParseError(LoadError):
    def __init__(self, source: str, location: str, message: str):
        self.location = location
        super().__init__(source, violations=[Violation("<document>", location, message)])


@dataclass(frozen=True)
class StationDef:
    station_id: str
    name: str
    work_center: str
    cycle_time_range_min: tuple[float, float]
    setup_time_min: tuple[float, float]
    first_pass_yield: float
    is_quality_gate: bool
    regulatory_standards: tuple[str, ...] = ()


def freeze(value: Any) -> Any:
    if isinstance(value, Mapping):
        return MappingProxyType({k: freeze(v) for k, v in value.items()})
    if isinstance(value, (list, tuple)):
        return tuple(freeze(v) for v in value)
    return value


def thaw(value: Any) -> Any:
    if isinstance(value, Mapping):
        return {k: thaw(v) for k, v in value.items()}
    if isinstance(value, tuple):
        return [thaw(v) for v in value]
    return value


class OntologyDocument:
    """A validated, read-only ontology document.

    Exports are reachable by item (``doc["STATIONS"]``) or attribute
    (``doc.STATIONS``). Nested dicts are read-only mappings and lists are
    tuples.
    """

    def __init__(self, exports: Mapping[str, Any], source: str = "<memory>"):
        data = {name: exports[name] for name in REQUIRED_EXPORTS}
        for name, default in OPTIONAL_EXPORTS.items():
            data[name] = exports.get(name, default)
        object.__setattr__(self, "_exports", freeze(data))
        object.__setattr__(self, "source", source)

    def __getitem__(self, name: str) -> Any:
        return self._exports[name]

    def __getattr__(self, name: str) -> Any:
        if name.isupper():
            try:
                return self._exports[name]
            except KeyError:
                pass
        raise AttributeError(name)

    def __setattr__(self, name, value):
        raise AttributeError("OntologyDocument is read-only")

    def __contains__(self, name: str) -> bool:
        return name in self._exports

    def __eq__(self, other: object) -> bool:
        return isinstance(other, OntologyDocument) and self.to_dict() == other.to_dict()

    def __hash__(self):
        return hash(json.dumps(self.to_dict(), sort_keys=True))

    def keys(self):
        return self._exports.keys()

    def to_dict(self) -> dict[str, Any]:
        return thaw(self._exports)

    @cached_property
    def line_order(self) -> tuple[str, ...]:
        """Station sequence of the line, taken from the process plans.

        Plans are merged in plan-id order; stations that appear in no plan
        are appended in document order.
        """
        order: list[str] = []
        for plan_id in sorted(self["PROCESS_PLANS"]):
            for sid in self["PROCESS_PLANS"][plan_id]["stations"]:
                if sid not in order:
                    order.append(sid)
        order.extend(s for s in self["STATIONS"] if s not in order)
        return tuple(order)

    @cached_property
    def station_order_index(self) -> dict[str, int]:
        return {sid: i for i, sid in enumerate(self.line_order)}

    @cached_property
    def stations(self) -> dict[str, StationDef]:
        out = {}
        for sid in self.line_order:
            rec = self["STATIONS"][sid]
            out[sid] = StationDef(
                station_id=sid,
                name=rec["name"],
                work_center=rec["work_center"],
                cycle_time_range_min=tuple(rec["cycle_time_range_min"]),
                setup_time_min=tuple(rec["setup_time_min"]),
                first_pass_yield=float(rec["first_pass_yield"]),
                is_quality_gate=bool(rec["is_quality_gate"]),
                regulatory_standards=tuple(rec.get("regulatory_standards", ())),
            )
        return out

    def daily_throughput_target(self) -> float:
        volume = sum(p["annual_volume"] for p in self["PRODUCTS"].values())
        return volume / self["WORKING_DAYS_PER_YEAR"]

    def __repr__(self) -> str:
        return f"OntologyDocument({self.source!r}, plant={self['PLANT_CODE']!r})"


# ---------------------------------------------------------------------------
# validation


def _is_num(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool)


class _Checker:
    def __init__(self, doc: Mapping[str, Any]):
        self.doc = doc
        self.violations: list[Violation] = []

    def add(self, export, path, message):
        self.violations.append(Violation(export, path, message))

    def has(self, *names) -> bool:
        return all(n in self.doc for n in names)

    def mapping(self, name) -> bool:
        if not isinstance(self.doc[name], Mapping):
            self.add(name, "", "expected an object keyed by identifier")
            return False
        return True

    def range_(self, export, path, value, *, probability=False, positive=False):
        if not (isinstance(value, (list, tuple)) and len(value) == 2 and all(_is_num(v) for v in value)):
            self.add(export, path, f"expected [low, high], got {value!r}")
            return
        lo, hi = value
        if lo > hi:
            self.add(export, path, f"range low {lo} > high {hi}")
        if probability and not (0 <= lo <= 1 and 0 <= hi <= 1):
            self.add(export, path, f"probability range {value!r} outside [0, 1]")
        if positive and lo <= 0:
            self.add(export, path, f"range must be positive, got {value!r}")

    def probability(self, export, path, value):
        if not _is_num(value) or not 0 <= value <= 1:
            self.add(export, path, f"probability {value!r} outside [0, 1]")

    def refs(self, export, path, ids: Iterable, target: str):
        pool = self.doc[target]
        for ref in ids:
            if ref not in pool:
                self.add(export, path, f"{ref!r} not in {target}")


def _station_maps(c: _Checker):
    """Per-station maps: keys must be stations, values must reference their pool."""
    keyed = {
        "STATION_FAILURE_CODES": "FAILURE_CODES",
        "STATION_CERTIFICATIONS": "CERTIFICATIONS",
        "STATION_SKILLS": "SKILLS",
        "STATION_TOOLS": "TOOL_DEFINITIONS",
        "STATION_INSPECTION_PLANS": "INSPECTION_PLANS",
    }
    for export, pool in keyed.items():
        if not c.has(export, "STATIONS", pool) or not c.mapping(export):
            continue
        for sid, refs in c.doc[export].items():
            if sid not in c.doc["STATIONS"]:
                c.add(export, sid, f"station {sid!r} not in STATIONS")
            if not isinstance(refs, (list, tuple)):
                c.add(export, sid, "expected a list of identifiers")
                continue
            c.refs(export, sid, refs, pool)
    if c.has("STATION_TO_WC", "STATIONS", "WORK_CENTER_UNITS") and c.mapping("STATION_TO_WC"):
        for sid, wc in c.doc["STATION_TO_WC"].items():
            if sid not in c.doc["STATIONS"]:
                c.add("STATION_TO_WC", sid, f"station {sid!r} not in STATIONS")
            if wc not in c.doc["WORK_CENTER_UNITS"]:
                c.add("STATION_TO_WC", sid, f"work center {wc!r} not in WORK_CENTER_UNITS")
            rec = c.doc["STATIONS"].get(sid)
            if isinstance(rec, Mapping) and rec.get("work_center") != wc:
                c.add("STATION_TO_WC", sid, f"disagrees with STATIONS[{sid!r}].work_center")
        for sid in c.doc["STATIONS"]:
            if sid not in c.doc["STATION_TO_WC"]:
                c.add("STATION_TO_WC", sid, "station has no work-center mapping")
    if c.has("STEP_TEMPLATES", "STATIONS") and c.mapping("STEP_TEMPLATES"):
        for sid, steps in c.doc["STEP_TEMPLATES"].items():
            if sid not in c.doc["STATIONS"]:
                c.add("STEP_TEMPLATES", sid, f"station {sid!r} not in STATIONS")
            total = sum(s.get("fraction", 0) for s in steps) if isinstance(steps, (list, tuple)) else None
            if total is None or abs(total - 1.0) > 1e-6:
                c.add("STEP_TEMPLATES", sid, f"step fractions must sum to 1, got {total!r}")


def _check(doc: Mapping[str, Any]) -> list[Violation]:
    c = _Checker(doc)

    collections = [
        "SHIFTS", "EQUIPMENT", "WORK_CENTER_UNITS", "PRODUCTS", "STATIONS", "RAW_MATERIALS",
        "FINISHED_MATERIALS", "SUPPLIERS", "FAILURE_CODES", "PROCESS_PLANS", "INSPECTION_PLANS",
        "NCR_DISPOSITIONS", "CERTIFICATIONS", "SKILLS", "TOOL_DEFINITIONS",
    ]
    ok = {name for name in collections if name in doc and c.mapping(name)}

    for name in ("TARGET_OEE_RANGE", "FIRST_PASS_YIELD_RANGE"):
        if name in doc:
            c.range_(name, "", doc[name], probability=True)
    if "AVG_WIP_RANGE" in doc:
        c.range_("AVG_WIP_RANGE", "", doc["AVG_WIP_RANGE"])
    if "EQUIPMENT_DOWNTIME_DURATION_MIN" in doc:
        c.range_("EQUIPMENT_DOWNTIME_DURATION_MIN", "", doc["EQUIPMENT_DOWNTIME_DURATION_MIN"], positive=True)
    for name in ("CAPA_TRIGGER_RATE", "EQUIPMENT_DOWNTIME_PROB", "ORDER_EXPEDITE_RATE"):
        if name in doc:
            c.probability(name, "", doc[name])
    if "CYCLE_TIME_VARIANCE" in doc:
        v = doc["CYCLE_TIME_VARIANCE"]
        if not _is_num(v) or not 0 <= v < 1:
            c.add("CYCLE_TIME_VARIANCE", "", f"expected 0 <= variance < 1, got {v!r}")
    for name in ("OPERATORS_PER_SHIFT", "WORKING_DAYS_PER_YEAR", "BOP_REVISION_INTERVAL_DAYS"):
        if name in doc and not (isinstance(doc[name], int) and not isinstance(doc[name], bool) and doc[name] > 0):
            c.add(name, "", f"expected a positive integer, got {doc[name]!r}")
    for name in ("BREAK_DURATION_MIN", "WEEKLY_PM_HOURS", "CHANGE_PACKAGE_RATE"):
        if name in doc and not (_is_num(doc[name]) and doc[name] >= 0):
            c.add(name, "", f"expected a non-negative number, got {doc[name]!r}")
    if "DEFAULT_RANDOM_SEED" in doc and not isinstance(doc["DEFAULT_RANDOM_SEED"], int):
        c.add("DEFAULT_RANDOM_SEED", "", "expected an integer")
    for name in ("PLANT_CODE", "PLANT_NAME"):
        if name in doc and not (isinstance(doc[name], str) and doc[name]):
            c.add(name, "", "expected a non-empty string")
    if "OPERATING_DAYS" in doc:
        days = doc["OPERATING_DAYS"]
        if not isinstance(days, (list, tuple)) or not days:
            c.add("OPERATING_DAYS", "", "expected a non-empty list of weekdays")
        else:
            for d in days:
                if d not in WEEKDAYS:
                    c.add("OPERATING_DAYS", "", f"unknown weekday {d!r}")

    if "SHIFTS" in ok:
        for sid, rec in doc["SHIFTS"].items():
            for field in ("start", "end"):
                t = rec.get(field) if isinstance(rec, Mapping) else None
                if not _valid_hhmm(t):
                    c.add("SHIFTS", f"{sid}.{field}", f"expected HH:MM, got {t!r}")

    if "STATIONS" in ok:
        for sid, rec in doc["STATIONS"].items():
            if not isinstance(rec, Mapping):
                c.add("STATIONS", sid, "expected an object")
                continue
            for field in ("name", "work_center", "cycle_time_range_min", "setup_time_min",
                          "first_pass_yield", "is_quality_gate"):
                if field not in rec:
                    c.add("STATIONS", f"{sid}.{field}", "missing field")
            if "cycle_time_range_min" in rec:
                c.range_("STATIONS", f"{sid}.cycle_time_range_min", rec["cycle_time_range_min"], positive=True)
            if "setup_time_min" in rec:
                c.range_("STATIONS", f"{sid}.setup_time_min", rec["setup_time_min"], positive=True)
            fpy = rec.get("first_pass_yield")
            if "first_pass_yield" in rec and not (_is_num(fpy) and 0 < fpy <= 1):
                c.add("STATIONS", f"{sid}.first_pass_yield", f"expected 0 < fpy <= 1, got {fpy!r}")
            if "WORK_CENTER_UNITS" in ok and "work_center" in rec and rec["work_center"] not in doc["WORK_CENTER_UNITS"]:
                c.add("STATIONS", f"{sid}.work_center", f"{rec['work_center']!r} not in WORK_CENTER_UNITS")

    if {"EQUIPMENT", "WORK_CENTER_UNITS"} <= ok:
        per_wc: dict[str, int] = {}
        for eid, rec in doc["EQUIPMENT"].items():
            wc = rec.get("work_center") if isinstance(rec, Mapping) else None
            if wc not in doc["WORK_CENTER_UNITS"]:
                c.add("EQUIPMENT", eid, f"work center {wc!r} not in WORK_CENTER_UNITS")
            per_wc[wc] = per_wc.get(wc, 0) + 1
        for wc, n in doc["WORK_CENTER_UNITS"].items():
            if per_wc.get(wc, 0) != n:
                c.add("WORK_CENTER_UNITS", wc, f"declares {n} units but EQUIPMENT lists {per_wc.get(wc, 0)}")

    _station_maps(c)

    if {"PRODUCTS", "PROCESS_PLANS", "FINISHED_MATERIALS"} <= ok:
        for pid, rec in doc["PRODUCTS"].items():
            if rec.get("process_plan") not in doc["PROCESS_PLANS"]:
                c.add("PRODUCTS", f"{pid}.process_plan", f"{rec.get('process_plan')!r} not in PROCESS_PLANS")
            if rec.get("finished_material") not in doc["FINISHED_MATERIALS"]:
                c.add("PRODUCTS", f"{pid}.finished_material", f"{rec.get('finished_material')!r} not in FINISHED_MATERIALS")
            if not (_is_num(rec.get("annual_volume")) and rec["annual_volume"] >= 0):
                c.add("PRODUCTS", f"{pid}.annual_volume", "expected a non-negative number")
    if {"FINISHED_MATERIALS", "PRODUCTS"} <= ok:
        for fm, rec in doc["FINISHED_MATERIALS"].items():
            if rec.get("product") not in doc["PRODUCTS"]:
                c.add("FINISHED_MATERIALS", fm, f"product {rec.get('product')!r} not in PRODUCTS")
    if {"PROCESS_PLANS", "PRODUCTS", "STATIONS"} <= ok:
        for plan, rec in doc["PROCESS_PLANS"].items():
            if rec.get("product") not in doc["PRODUCTS"]:
                c.add("PROCESS_PLANS", f"{plan}.product", f"{rec.get('product')!r} not in PRODUCTS")
            stations = rec.get("stations", ())
            if not stations:
                c.add("PROCESS_PLANS", f"{plan}.stations", "routing is empty")
            c.refs("PROCESS_PLANS", f"{plan}.stations", stations, "STATIONS")
    if {"RAW_MATERIALS", "SUPPLIERS"} <= ok:
        for mid, rec in doc["RAW_MATERIALS"].items():
            if rec.get("supplier") not in doc["SUPPLIERS"]:
                c.add("RAW_MATERIALS", f"{mid}.supplier", f"{rec.get('supplier')!r} not in SUPPLIERS")
    if "SUPPLIERS" in ok:
        for sup, rec in doc["SUPPLIERS"].items():
            c.probability("SUPPLIERS", f"{sup}.on_time_rate", rec.get("on_time_rate"))
            if "late_delay_min" in rec:
                c.range_("SUPPLIERS", f"{sup}.late_delay_min", rec["late_delay_min"], positive=True)
    if c.has("PRODUCT_RAW_MATERIAL") and {"PRODUCTS", "RAW_MATERIALS"} <= ok and c.mapping("PRODUCT_RAW_MATERIAL"):
        for pid, mats in doc["PRODUCT_RAW_MATERIAL"].items():
            if pid not in doc["PRODUCTS"]:
                c.add("PRODUCT_RAW_MATERIAL", pid, f"product {pid!r} not in PRODUCTS")
            c.refs("PRODUCT_RAW_MATERIAL", pid, mats, "RAW_MATERIALS")
    if c.has("OPERATION_MATERIAL_CONSUMPTION") and {"STATIONS", "RAW_MATERIALS"} <= ok and c.mapping("OPERATION_MATERIAL_CONSUMPTION"):
        for sid, mats in doc["OPERATION_MATERIAL_CONSUMPTION"].items():
            if sid not in doc["STATIONS"]:
                c.add("OPERATION_MATERIAL_CONSUMPTION", sid, f"station {sid!r} not in STATIONS")
            c.refs("OPERATION_MATERIAL_CONSUMPTION", sid, mats, "RAW_MATERIALS")
            for mid, qty in mats.items():
                if not (_is_num(qty) and qty > 0):
                    c.add("OPERATION_MATERIAL_CONSUMPTION", f"{sid}.{mid}", "quantity must be positive")
    if c.has("BOM_STATION_MATERIALS", "PRODUCT_RAW_MATERIAL", "OPERATION_MATERIAL_CONSUMPTION") \
            and {"PRODUCTS", "STATIONS", "RAW_MATERIALS"} <= ok and c.mapping("BOM_STATION_MATERIALS"):
        prm = doc["PRODUCT_RAW_MATERIAL"]
        omc = doc["OPERATION_MATERIAL_CONSUMPTION"]
        for pid, per_station in doc["BOM_STATION_MATERIALS"].items():
            if pid not in doc["PRODUCTS"]:
                c.add("BOM_STATION_MATERIALS", pid, f"product {pid!r} not in PRODUCTS")
                continue
            for sid, mats in per_station.items():
                if sid not in doc["STATIONS"]:
                    c.add("BOM_STATION_MATERIALS", f"{pid}.{sid}", f"station {sid!r} not in STATIONS")
                c.refs("BOM_STATION_MATERIALS", f"{pid}.{sid}", mats, "RAW_MATERIALS")
                for mid in mats:
                    if mid not in prm.get(pid, ()):
                        c.add("BOM_STATION_MATERIALS", f"{pid}.{sid}", f"{mid!r} not in PRODUCT_RAW_MATERIAL[{pid!r}]")
                    if mid not in omc.get(sid, {}):
                        c.add("BOM_STATION_MATERIALS", f"{pid}.{sid}", f"{mid!r} has no OPERATION_MATERIAL_CONSUMPTION entry")
    if "NCR_DISPOSITIONS" in ok:
        for did, rec in doc["NCR_DISPOSITIONS"].items():
            if not (_is_num(rec.get("weight")) and rec["weight"] >= 0):
                c.add("NCR_DISPOSITIONS", did, "expected non-negative weight")
    if "NCR_STATUS_DURATIONS" in doc:
        seq = doc["NCR_STATUS_DURATIONS"]
        if not isinstance(seq, (list, tuple)) or not seq:
            c.add("NCR_STATUS_DURATIONS", "", "expected a non-empty ordered list of {status, hours}")
        else:
            for i, rec in enumerate(seq):
                if not isinstance(rec, Mapping) or "status" not in rec:
                    c.add("NCR_STATUS_DURATIONS", str(i), "expected {status, hours}")
                    continue
                c.range_("NCR_STATUS_DURATIONS", f"{i}.hours", rec.get("hours"), positive=True)
    if "CHANGE_PACKAGE_PARAMS" in doc:
        params = doc["CHANGE_PACKAGE_PARAMS"]
        if not isinstance(params, Mapping) or not params.get("types"):
            c.add("CHANGE_PACKAGE_PARAMS", "types", "expected a non-empty list of change types")
        else:
            for field in ("approval_hours", "implementation_hours"):
                c.range_("CHANGE_PACKAGE_PARAMS", field, params.get(field), positive=True)
    if "INSPECTION_PLANS" in ok:
        for ip, rec in doc["INSPECTION_PLANS"].items():
            for i, ch in enumerate(rec.get("characteristics", ())):
                if not (_is_num(ch.get("lsl")) and _is_num(ch.get("usl")) and ch["lsl"] <= ch["usl"]):
                    c.add("INSPECTION_PLANS", f"{ip}.characteristics.{i}", "expected lsl <= usl")

    aliases = doc.get("ENTITY_ALIASES", {})
    if aliases:
        pools = [doc[n] for n in ok]
        for alias, target in aliases.items():
            if not any(target in pool for pool in pools):
                c.add("ENTITY_ALIASES", alias, f"target {target!r} is not a known entity")
    return c.violations


def _valid_hhmm(t) -> bool:
    if not isinstance(t, str) or len(t) != 5 or t[2] != ":":
        return False
    try:
        h, m = int(t[:2]), int(t[3:])
    except ValueError:
        return False
    return 0 <= h < 24 and 0 <= m < 60


def parse_document(data: Any, source: str = "<memory>") -> OntologyDocument:
    """Validate a decoded JSON object and wrap it as an OntologyDocument."""
    if not isinstance(data, Mapping):
        raise ParseError(source, "<root>", "document must be a JSON object")
    missing = [name for name in REQUIRED_EXPORTS if name not in data]
    violations = _check(data)
    if missing:
        raise MissingExports(source, missing, violations)
    if violations:
        raise ReferentialViolation(source, violations=violations)
    return OntologyDocument(data, source)


def load_document(path: str | Path) -> OntologyDocument:
    path = Path(path)
    source = path.stem
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(source, str(path), f"cannot read: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(source, f"line {exc.lineno} column {exc.colno}", exc.msg) from exc
    return parse_document(data, source)
