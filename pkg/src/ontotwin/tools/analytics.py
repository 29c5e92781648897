"""The 12 analytics tools. Every query is parameterized; identifiers are fixed text."""

from __future__ import annotations

import statistics
from typing import Any, Callable, Optional

from ..ontology import OntologySnapshot
from ..warehouse.store import StoragePort
from .period import Period
from .results import EmptyResult, ToolResult

ToolFn = Callable[..., ToolResult]

# Star tables each tool reads; recorded in the result for provenance.
TOOL_SOURCES: dict[str, tuple[str, ...]] = {
    "cycle_time": ("fact_operation_execution",),
    "first_pass_yield": ("fact_inspection_result",),
    "oee_decomposition": ("fact_operation_execution", "fact_equipment_downtime"),
    "ncr_pareto": ("fact_ncr",),
    "spc_violation": ("fact_spc_sample",),
    "quality_action": ("fact_ncr",),
    "material_genealogy": ("fact_material_consumption", "fact_work_order"),
    "supplier_performance": ("fact_material_consumption",),
    "change_impact": ("fact_change_package",),
    "change_velocity": ("fact_change_package",),
    "equipment_downtime": ("fact_equipment_downtime",),
    "production_status": ("fact_operation_execution",),
}


def _r(x: Optional[float], nd: int = 4) -> Optional[float]:
    return None if x is None else round(float(x), nd)


def _result(name: str, entity: dict, metric: str, value, unit: str, period: Period, breakdown, rows: int,
            **extra) -> ToolResult:
    cls = EmptyResult if rows == 0 else ToolResult
    if rows == 0:
        value = None
    return cls(name, {k: v for k, v in entity.items() if v is not None}, metric, value, unit, period.label,
               tuple(breakdown), rows, extra, TOOL_SOURCES[name])


def cycle_time(store: StoragePort, snap: OntologySnapshot, period: Period, station_id: str) -> ToolResult:
    rows = store.query(
        "SELECT product_id, cycle_time_min, setup_time_min FROM fact_operation_execution "
        "WHERE station_id = ? AND date_key BETWEEN ? AND ? ORDER BY operation_id",
        (station_id, *period.bounds))
    cycles = [r["cycle_time_min"] for r in rows]
    by_product: dict[str, list[int]] = {}
    for r in rows:
        by_product.setdefault(r["product_id"], []).append(r["cycle_time_min"])
    breakdown = [{"product_id": p, "operations": len(v), "mean_min": _r(statistics.fmean(v), 2),
                  "min_min": min(v), "max_min": max(v)} for p, v in sorted(by_product.items())]
    extra = {}
    if cycles:
        extra = {"operations": len(cycles), "min": min(cycles), "max": max(cycles),
                 "median": statistics.median(cycles),
                 "mean_setup_min": _r(statistics.fmean(r["setup_time_min"] for r in rows), 2)}
    return _result("cycle_time", {"station": station_id}, "cycle_time",
                   _r(statistics.fmean(cycles), 2) if cycles else None, "min", period, breakdown, len(rows), **extra)


def first_pass_yield(store: StoragePort, snap: OntologySnapshot, period: Period, station_id: str) -> ToolResult:
    rows = store.query(
        "SELECT d.iso_week AS week, COUNT(*) AS inspected, SUM(f.passed) AS passed "
        "FROM fact_inspection_result f LEFT JOIN dim_date d ON d.date_key = f.date_key "
        "WHERE f.station_id = ? AND f.date_key BETWEEN ? AND ? GROUP BY d.iso_week ORDER BY d.iso_week",
        (station_id, *period.bounds))
    total = sum(r["inspected"] for r in rows)
    passed = sum(r["passed"] for r in rows)
    breakdown = [{"week": r["week"], "inspected": r["inspected"], "passed": r["passed"],
                  "fpy": _r(r["passed"] / r["inspected"])} for r in rows]
    return _result("first_pass_yield", {"station": station_id}, "first_pass_yield",
                   _r(passed / total) if total else None, "ratio", period, breakdown, total,
                   inspected=total, passed=passed,
                   target=snap.document["STATIONS"][station_id]["first_pass_yield"])


def oee_decomposition(store: StoragePort, snap: OntologySnapshot, period: Period, station_id: str) -> ToolResult:
    ops = store.query(
        "SELECT COUNT(*) AS n, SUM(cycle_time_min) AS run, SUM(setup_time_min) AS setup, "
        "SUM(ideal_cycle_min) AS ideal, COUNT(passed) AS inspected, SUM(passed) AS passed "
        "FROM fact_operation_execution WHERE station_id = ? AND date_key BETWEEN ? AND ?",
        (station_id, *period.bounds))[0]
    down = store.query(
        "SELECT COALESCE(SUM(duration_min), 0) AS minutes FROM fact_equipment_downtime "
        "WHERE station_id = ? AND date_key BETWEEN ? AND ?", (station_id, *period.bounds))[0]["minutes"]
    n = ops["n"] or 0
    breakdown, value = [], None
    if n:
        run, setup, ideal = ops["run"], ops["setup"], ops["ideal"]
        availability = run / (run + setup + down)
        performance = min(1.0, ideal / run)
        quality = (ops["passed"] / ops["inspected"]) if ops["inspected"] else 1.0
        value = _r(availability * performance * quality)
        breakdown = [
            {"factor": "availability", "value": _r(availability), "basis": "run / (run + setup + downtime)"},
            {"factor": "performance", "value": _r(performance), "basis": "ideal cycle / actual cycle, capped at 1"},
            {"factor": "quality", "value": _r(quality), "basis": "passed / inspected"},
        ]
    return _result("oee_decomposition", {"station": station_id}, "oee", value, "ratio", period, breakdown, n,
                   formula="availability * performance * quality", downtime_min=down)


def ncr_pareto(store: StoragePort, snap: OntologySnapshot, period: Period, station_id: Optional[str] = None,
               failure_code: Optional[str] = None) -> ToolResult:
    rows = store.query(
        "SELECT f.failure_code, d.description, COUNT(*) AS count FROM fact_ncr f "
        "JOIN dim_failure_code d ON d.failure_code = f.failure_code "
        "WHERE (? IS NULL OR f.station_id = ?) AND (? IS NULL OR f.failure_code = ?) "
        "AND f.date_key BETWEEN ? AND ? GROUP BY f.failure_code, d.description "
        "ORDER BY count DESC, f.failure_code ASC",
        (station_id, station_id, failure_code, failure_code, *period.bounds))
    total = sum(r["count"] for r in rows)
    cum, breakdown = 0, []
    for r in rows:
        cum += r["count"]
        breakdown.append({"failure_code": r["failure_code"], "description": r["description"], "count": r["count"],
                          "cumulative_share": _r(cum / total)})
    return _result("ncr_pareto", {"station": station_id, "failure_code": failure_code}, "ncr_count", total,
                   "ncrs", period, breakdown, total)


def spc_violation(store: StoragePort, snap: OntologySnapshot, period: Period, station_id: str) -> ToolResult:
    rows = store.query(
        "SELECT characteristic, value, lsl, usl FROM fact_spc_sample "
        "WHERE station_id = ? AND date_key BETWEEN ? AND ? ORDER BY ts, measurement_id",
        (station_id, *period.bounds))
    by_char: dict[str, list[dict]] = {}
    for r in rows:
        by_char.setdefault(r["characteristic"], []).append(r)
    breakdown, total_oos = [], 0
    for name, samples in sorted(by_char.items()):
        values = [s["value"] for s in samples]
        mean = statistics.fmean(values)
        sd = statistics.stdev(values) if len(values) > 1 else 0.0
        lsl, usl = samples[0]["lsl"], samples[0]["usl"]
        oos = sum(1 for v in values if v < lsl or v > usl)
        ooc = sum(1 for v in values if sd and abs(v - mean) > 3 * sd)
        total_oos += oos
        breakdown.append({"characteristic": name, "samples": len(values), "mean": _r(mean, 6), "stdev": _r(sd, 6),
                          "lcl": _r(mean - 3 * sd, 6), "ucl": _r(mean + 3 * sd, 6), "lsl": lsl, "usl": usl,
                          "out_of_spec": oos, "out_of_control": ooc})
    return _result("spc_violation", {"station": station_id}, "out_of_spec_samples", total_oos, "samples", period,
                   breakdown, len(rows))


def quality_action(store: StoragePort, snap: OntologySnapshot, period: Period,
                   disposition: Optional[str] = None) -> ToolResult:
    rows = store.query(
        "SELECT disposition, COUNT(*) AS ncrs, SUM(capa_flag) AS capas, "
        "SUM(CASE WHEN closed_at IS NULL THEN 1 ELSE 0 END) AS open_ncrs FROM fact_ncr "
        "WHERE (? IS NULL OR disposition = ?) AND date_key BETWEEN ? AND ? "
        "GROUP BY disposition ORDER BY ncrs DESC, disposition ASC",
        (disposition, disposition, *period.bounds))
    names = snap.document["NCR_DISPOSITIONS"]
    breakdown = [{"disposition": r["disposition"], "name": names[r["disposition"]]["name"], "ncrs": r["ncrs"],
                  "capas": r["capas"], "open": r["open_ncrs"]} for r in rows]
    total = sum(r["ncrs"] for r in rows)
    return _result("quality_action", {"disposition": disposition}, "ncr_count", total, "ncrs", period,
                   breakdown, total, capas=sum(r["capas"] for r in rows))


def material_genealogy(store: StoragePort, snap: OntologySnapshot, period: Period,
                       material_id: Optional[str] = None, order_id: Optional[str] = None) -> ToolResult:
    rows = store.query(
        "SELECT c.lot_id, c.raw_material_id AS material_id, c.supplier_id, c.order_id, c.station_id, c.qty, "
        "c.receipt_late, w.product_id FROM fact_material_consumption c "
        "LEFT JOIN fact_work_order w ON w.order_id = c.order_id "
        "WHERE (? IS NULL OR c.raw_material_id = ?) AND (? IS NULL OR c.order_id = ?) "
        "AND c.date_key BETWEEN ? AND ? ORDER BY c.order_id, c.station_id, c.raw_material_id",
        (material_id, material_id, order_id, order_id, *period.bounds))
    breakdown = [{"lot_id": r["lot_id"], "material_id": r["material_id"], "supplier_id": r["supplier_id"],
                  "order_id": r["order_id"], "product_id": r["product_id"], "station_id": r["station_id"],
                  "qty": r["qty"], "receipt_late": bool(r["receipt_late"])} for r in rows]
    lots = len({r["lot_id"] for r in rows})
    return _result("material_genealogy", {"material": material_id, "order": order_id}, "lots_traced", lots,
                   "lots", period, breakdown, len(rows), orders=len({r["order_id"] for r in rows}))


def supplier_performance(store: StoragePort, snap: OntologySnapshot, period: Period, supplier_id: str) -> ToolResult:
    rows = store.query(
        "SELECT raw_material_id AS material_id, COUNT(DISTINCT lot_id) AS lots, "
        "COUNT(DISTINCT CASE WHEN receipt_late = 1 THEN lot_id END) AS late_lots "
        "FROM fact_material_consumption WHERE supplier_id = ? AND date_key BETWEEN ? AND ? "
        "GROUP BY raw_material_id ORDER BY raw_material_id",
        (supplier_id, *period.bounds))
    lots = sum(r["lots"] for r in rows)
    late = sum(r["late_lots"] for r in rows)
    breakdown = [{"material_id": r["material_id"], "lots": r["lots"], "late_lots": r["late_lots"],
                  "on_time_rate": _r(1 - r["late_lots"] / r["lots"])} for r in rows]
    return _result("supplier_performance", {"supplier": supplier_id}, "on_time_rate",
                   _r(1 - late / lots) if lots else None, "ratio", period, breakdown, lots,
                   lots=lots, late_lots=late,
                   contracted_on_time_rate=snap.document["SUPPLIERS"][supplier_id]["on_time_rate"])


def change_impact(store: StoragePort, snap: OntologySnapshot, period: Period,
                  station_id: Optional[str] = None) -> ToolResult:
    rows = store.query(
        "SELECT change_type, COUNT(*) AS packages, COUNT(approved_at) AS approved, "
        "COUNT(implemented_at) AS implemented, AVG(approval_hours) AS mean_approval_hours "
        "FROM fact_change_package WHERE (? IS NULL OR station_id = ?) AND date_key BETWEEN ? AND ? "
        "GROUP BY change_type ORDER BY packages DESC, change_type ASC",
        (station_id, station_id, *period.bounds))
    breakdown = [{"change_type": r["change_type"], "packages": r["packages"], "approved": r["approved"],
                  "implemented": r["implemented"], "mean_approval_hours": _r(r["mean_approval_hours"], 2)}
                 for r in rows]
    total = sum(r["packages"] for r in rows)
    return _result("change_impact", {"station": station_id}, "change_packages", total, "packages", period,
                   breakdown, total)


def change_velocity(store: StoragePort, snap: OntologySnapshot, period: Period,
                    product_id: Optional[str] = None) -> ToolResult:
    rows = store.query(
        "SELECT d.iso_week AS week, COUNT(*) AS opened, COUNT(f.implemented_at) AS implemented, "
        "AVG(f.approval_hours) AS approval_h, "
        "AVG(CASE WHEN f.implemented_at IS NOT NULL "
        "THEN (julianday(f.implemented_at) - julianday(f.opened_at)) * 24 END) AS lead_h "
        "FROM fact_change_package f LEFT JOIN dim_date d ON d.date_key = f.date_key "
        "WHERE (? IS NULL OR f.product_id = ?) AND f.date_key BETWEEN ? AND ? "
        "GROUP BY d.iso_week ORDER BY d.iso_week",
        (product_id, product_id, *period.bounds))
    total = sum(r["opened"] for r in rows)
    implemented = sum(r["implemented"] for r in rows)
    lead = [(r["lead_h"], r["implemented"]) for r in rows if r["lead_h"] is not None]
    mean_lead = sum(h * n for h, n in lead) / sum(n for _, n in lead) if lead else None
    breakdown = [{"week": r["week"], "opened": r["opened"], "implemented": r["implemented"],
                  "mean_approval_hours": _r(r["approval_h"], 2), "mean_lead_hours": _r(r["lead_h"], 2)}
                 for r in rows]
    return _result("change_velocity", {"product": product_id}, "mean_implementation_lead_time", _r(mean_lead, 2),
                   "hours", period, breakdown, total, opened=total, implemented=implemented)


def equipment_downtime(store: StoragePort, snap: OntologySnapshot, period: Period,
                       station_id: Optional[str] = None) -> ToolResult:
    rows = store.query(
        "SELECT equipment_id, station_id, COUNT(*) AS events, SUM(duration_min) AS minutes "
        "FROM fact_equipment_downtime WHERE (? IS NULL OR station_id = ?) AND date_key BETWEEN ? AND ? "
        "GROUP BY equipment_id, station_id ORDER BY minutes DESC, equipment_id ASC",
        (station_id, station_id, *period.bounds))
    breakdown = [{"equipment_id": r["equipment_id"], "station_id": r["station_id"], "events": r["events"],
                  "minutes": r["minutes"]} for r in rows]
    events = sum(r["events"] for r in rows)
    return _result("equipment_downtime", {"station": station_id}, "downtime", sum(r["minutes"] for r in rows),
                   "min", period, breakdown, events, events=events)


def production_status(store: StoragePort, snap: OntologySnapshot, period: Period,
                      station_id: Optional[str] = None) -> ToolResult:
    rows = store.query(
        "SELECT station_id, COUNT(*) AS completed, SUM(passed) AS passed, COUNT(passed) AS inspected, "
        "AVG(cycle_time_min) AS mean_cycle FROM fact_operation_execution "
        "WHERE (? IS NULL OR station_id = ?) AND date_key BETWEEN ? AND ? GROUP BY station_id",
        (station_id, station_id, *period.bounds))
    found = {r["station_id"]: r for r in rows}
    stations = [station_id] if station_id else list(snap.document.line_order)
    breakdown = []
    for s in stations:
        r = found.get(s)
        breakdown.append({
            "station_id": s, "operations_completed": r["completed"] if r else 0,
            "fpy": _r(r["passed"] / r["inspected"]) if r and r["inspected"] else None,
            "mean_cycle_min": _r(r["mean_cycle"], 2) if r else None,
        })
    total = sum(r["completed"] for r in rows)
    return _result("production_status", {"station": station_id}, "operations_completed", total, "operations",
                   period, breakdown, total, stations=len(stations))


TOOL_FUNCTIONS: dict[str, ToolFn] = {
    "cycle_time": cycle_time,
    "first_pass_yield": first_pass_yield,
    "oee_decomposition": oee_decomposition,
    "ncr_pareto": ncr_pareto,
    "spc_violation": spc_violation,
    "quality_action": quality_action,
    "material_genealogy": material_genealogy,
    "supplier_performance": supplier_performance,
    "change_impact": change_impact,
    "change_velocity": change_velocity,
    "equipment_downtime": equipment_downtime,
    "production_status": production_status,
}


def result_entity_ids(result: ToolResult) -> dict[str, set[str]]:
    """Ontology ids mentioned anywhere in a result, grouped by field name."""
    fields = ("station", "station_id", "failure_code", "disposition", "material", "material_id", "supplier",
              "supplier_id", "product", "product_id", "equipment_id")
    out: dict[str, set[str]] = {}
    payload: list[dict[str, Any]] = [result.entity, *result.breakdown]
    for row in payload:
        for f in fields:
            if row.get(f) is not None:
                out.setdefault(f, set()).add(row[f])
    return out
