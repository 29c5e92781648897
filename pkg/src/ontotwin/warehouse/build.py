"""Schema creation, CDC ingest and star-schema materialization."""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field
from datetime import timedelta
from pathlib import Path
from typing import Any, Iterable

from ..ontology import OntologySnapshot
from ..ontology.document import WEEKDAYS
from ..simulator.calendar import SIM_START
from ..simulator.events import CdcRecord
from .schema import (
    ALL_TABLES, BRIDGES, DIMENSIONS, FACTS, OPERATIONAL_TABLES, TABLES_BY_NAME, TableKind, ddl_script,
)
from .store import StoragePort

DATE_HORIZON_DAYS = 366


class SchemaMismatch(Exception):
    pass


class OrderViolation(Exception):
    pass


@dataclass
class SchemaManifest:
    template_id: str
    snapshot_version: str
    tables: dict[str, str]  # name -> kind
    dimension_rows: dict[str, int]

    def count(self, kind: TableKind) -> int:
        return sum(1 for k in self.tables.values() if k == kind.value)

    @property
    def analytics_counts(self) -> dict[str, int]:
        return {k.value: self.count(k) for k in (TableKind.DIMENSION, TableKind.FACT, TableKind.BRIDGE)}

    def to_dict(self) -> dict[str, Any]:
        return {**asdict(self), "analytics_counts": self.analytics_counts,
                "operational_tables": self.count(TableKind.OPERATIONAL)}


@dataclass
class IngestReport:
    table_rows: dict[str, int]
    total_rows: int
    records_applied: int
    inserts: int
    updates: int
    elapsed_s: float

    @property
    def populated_tables(self) -> int:
        return sum(1 for n in self.table_rows.values() if n)

    def to_dict(self) -> dict[str, Any]:
        return {**asdict(self), "populated_tables": self.populated_tables}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


@dataclass
class StarReport:
    table_rows: dict[str, int] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {"table_rows": self.table_rows}


def write_ddl(path: str | Path) -> Path:
    path = Path(path)
    path.write_text(ddl_script(), encoding="utf-8")
    return path


def _insert_sql(table: str, columns: Iterable[str]) -> str:
    cols = list(columns)
    return f"INSERT INTO {table} ({', '.join(cols)}) VALUES ({', '.join('?' for _ in cols)})"


def _dimension_rows(snap: OntologySnapshot) -> dict[str, list[tuple]]:
    doc = snap.document
    operating = {WEEKDAYS.index(d) for d in doc["OPERATING_DAYS"]}
    dates = []
    for i in range(DATE_HORIZON_DAYS):
        d = (SIM_START + timedelta(days=i)).date()
        iso = d.isocalendar()
        dates.append((int(d.strftime("%Y%m%d")), d.isoformat(), f"{iso[0]}-w{iso[1]:02d}",
                      WEEKDAYS[d.weekday()], int(d.weekday() in operating)))
    station_of_code = {}
    for s in doc.line_order:
        for c in doc["STATION_FAILURE_CODES"].get(s, ()):
            station_of_code.setdefault(c, s)
    return {
        "dim_date": dates,
        "dim_shift": [(k, v["name"], v["start"], v["end"]) for k, v in doc["SHIFTS"].items()],
        "dim_station": [(s, st.name, st.work_center, i + 1, sum(st.cycle_time_range_min) / 2,
                         st.first_pass_yield, int(st.is_quality_gate))
                        for i, (s, st) in enumerate(doc.stations.items())],
        "dim_work_center": [(k, v) for k, v in doc["WORK_CENTER_UNITS"].items()],
        "dim_equipment": [(k, v["name"], v["work_center"], v["type"]) for k, v in doc["EQUIPMENT"].items()],
        "dim_product": [(k, v["name"], v["family"]) for k, v in doc["PRODUCTS"].items()],
        "dim_raw_material": [(k, v["name"], v["uom"], v["supplier"]) for k, v in doc["RAW_MATERIALS"].items()],
        "dim_finished_material": [(k, v["name"], v["product"]) for k, v in doc["FINISHED_MATERIALS"].items()],
        "dim_supplier": [(k, v["name"], v["on_time_rate"]) for k, v in doc["SUPPLIERS"].items()],
        "dim_failure_code": [(k, v["description"], v["category"], v["severity"], station_of_code.get(k))
                             for k, v in doc["FAILURE_CODES"].items()],
        "dim_inspection_plan": [(k, v["name"], v["sampling"]) for k, v in doc["INSPECTION_PLANS"].items()],
        "dim_certification": [(k, v["name"], v["standard"]) for k, v in doc["CERTIFICATIONS"].items()],
        "dim_tool": [(k, v["name"], v["type"]) for k, v in doc["TOOL_DEFINITIONS"].items()],
    }


def build_schema(snap: OntologySnapshot, store: StoragePort) -> SchemaManifest:
    """Create every table and pre-populate the snapshot-derived dimensions."""
    store.execute_script(ddl_script(ALL_TABLES))
    counts = {}
    for table, rows in _dimension_rows(snap).items():
        store.executemany(_insert_sql(table, TABLES_BY_NAME[table].column_names), rows)
        counts[table] = len(rows)
    counts["dim_operator"] = 0  # filled from the operator table at refresh
    store.commit()
    return SchemaManifest(snap.template_id, snap.version_id, {t.name: t.kind.value for t in ALL_TABLES}, counts)


def ingest(events: Iterable[CdcRecord], store: StoragePort) -> IngestReport:
    """Apply CDC records in order. Inserts are batched per table; an update flushes its table first."""
    started = time.perf_counter()
    buffers: dict[str, list[tuple]] = {}
    buffer_cols: dict[str, tuple[str, ...]] = {}
    checked: set[tuple[str, tuple[str, ...]]] = set()
    inserts = updates = applied = 0

    def flush(table: str) -> None:
        rows = buffers.pop(table, None)
        if rows:
            store.executemany(_insert_sql(table, buffer_cols[table]), rows)

    for rec in events:
        applied += 1
        cols = tuple(rec.payload)
        sig = (rec.table, cols)
        if sig not in checked:
            schema = TABLES_BY_NAME.get(rec.table)
            if schema is None or schema.kind is not TableKind.OPERATIONAL:
                raise SchemaMismatch(f"event references unknown operational table {rec.table!r}")
            unknown = set(cols) - set(schema.column_names)
            if unknown:
                raise SchemaMismatch(f"{rec.table}: unknown columns {sorted(unknown)}")
            if rec.op == "update" and not set(schema.key) <= set(cols):
                raise SchemaMismatch(f"{rec.table}: update lacks key columns {schema.key}")
            if rec.op not in ("insert", "update"):
                raise SchemaMismatch(f"unknown op {rec.op!r}")
            checked.add(sig)
        if rec.op == "insert":
            if buffer_cols.get(rec.table) != cols:
                flush(rec.table)
                buffer_cols[rec.table] = cols
            buffers.setdefault(rec.table, []).append(tuple(rec.payload.values()))
            inserts += 1
        else:
            flush(rec.table)
            key = TABLES_BY_NAME[rec.table].key
            sets = [c for c in cols if c not in key]
            if not sets:
                continue
            sql = (f"UPDATE {rec.table} SET {', '.join(f'{c} = ?' for c in sets)} "
                   f"WHERE {' AND '.join(f'{k} = ?' for k in key)}")
            n = store.execute(sql, [rec.payload[c] for c in sets] + [rec.payload[k] for k in key])
            if n == 0:
                raise OrderViolation(f"{rec.table}: update at {rec.ts} for missing row "
                                     f"{ {k: rec.payload[k] for k in key} }")
            updates += 1
    for table in list(buffers):
        flush(table)
    store.commit()
    rows = table_rows(store, OPERATIONAL_TABLES)
    return IngestReport(rows, sum(rows.values()), applied, inserts, updates,
                        round(time.perf_counter() - started, 4))


def table_rows(store: StoragePort, tables) -> dict[str, int]:
    return {t.name: store.query(f"SELECT COUNT(*) AS n FROM {t.name}")[0]["n"] for t in tables}


def _day_key(col: str) -> str:
    return f"CAST(REPLACE(substr({col}, 1, 10), '-', '') AS INTEGER)"


_REFRESH: dict[str, str] = {
    "dim_operator": """
        INSERT INTO dim_operator SELECT operator_id, name, shift_id, home_station_id FROM operator""",
    "bridge_operator_certification": """
        INSERT INTO bridge_operator_certification SELECT operator_id, cert_id FROM operator_certification""",
    "fact_operation_execution": f"""
        INSERT INTO fact_operation_execution
        SELECT o.operation_id, o.order_id, {_day_key('o.start_at')}, a.shift_id, o.station_id, s.wc_id,
               o.equipment_id, o.operator_id, w.product_id, o.start_at, o.end_at, o.setup_time_actual,
               o.cycle_time_actual, (s.cycle_min_low + s.cycle_min_high) / 2.0,
               CASE o.status WHEN 'Passed' THEN 1 WHEN 'Failed' THEN 0 END
        FROM operation o
        JOIN station s ON s.station_id = o.station_id
        JOIN work_order w ON w.order_id = o.order_id
        LEFT JOIN operator_assignment a ON a.operation_id = o.operation_id
        WHERE o.end_at IS NOT NULL""",
    "fact_work_order": f"""
        INSERT INTO fact_work_order
        SELECT order_id, product_id, {_day_key('created_at')}, created_at, completed_at, quantity, expedited,
               status, CASE WHEN completed_at IS NOT NULL
                            THEN CAST(ROUND((julianday(completed_at) - julianday(created_at)) * 1440) AS INTEGER)
                       END
        FROM work_order""",
    "fact_ncr": f"""
        INSERT INTO fact_ncr
        SELECT ncr_id, operation_id, order_id, station_id, failure_code, disposition, {_day_key('opened_at')},
               opened_at, closed_at, capa_flag
        FROM ncr""",
    "fact_inspection_result": f"""
        INSERT INTO fact_inspection_result
        SELECT inspection_id, operation_id, station_id, plan_id, {_day_key('ts')}, ts,
               CASE result WHEN 'Pass' THEN 1 ELSE 0 END
        FROM inspection""",
    "fact_equipment_downtime": f"""
        INSERT INTO fact_equipment_downtime
        SELECT d.downtime_id, d.equipment_id,
               (SELECT MIN(s.station_id) FROM station s WHERE s.wc_id = d.wc_id),
               {_day_key('d.start_at')}, d.start_at, d.end_at, d.duration_min
        FROM downtime_event d""",
    "fact_material_consumption": f"""
        INSERT INTO fact_material_consumption
        SELECT c.consumption_id, c.operation_id, c.order_id, c.station_id, c.material_id, m.supplier_id, c.lot_id,
               c.qty, {_day_key('c.ts')}, c.ts, r.late
        FROM material_consumption c
        JOIN raw_material m ON m.material_id = c.material_id
        LEFT JOIN material_lot l ON l.lot_id = c.lot_id
        LEFT JOIN material_receipt r ON r.receipt_id = l.receipt_id""",
    "fact_change_package": f"""
        INSERT INTO fact_change_package
        SELECT package_id, change_type, station_id, product_id, {_day_key('opened_at')}, opened_at, approved_at,
               implemented_at,
               CASE WHEN approved_at IS NOT NULL THEN (julianday(approved_at) - julianday(opened_at)) * 24 END
        FROM change_package""",
    "fact_spc_sample": f"""
        INSERT INTO fact_spc_sample
        SELECT m.measurement_id, m.operation_id, m.station_id, COALESCE(c.name, m.char_id), {_day_key('m.ts')},
               m.ts, m.value, m.lsl, m.usl
        FROM inspection_measurement m
        JOIN inspection i ON i.inspection_id = m.inspection_id
        LEFT JOIN inspection_characteristic c ON c.plan_id = i.plan_id AND c.char_id = m.char_id""",
}


def refresh_star(store: StoragePort) -> StarReport:
    """Rebuild facts, the bridge and dim_operator from operational tables (idempotent)."""
    for table, sql in _REFRESH.items():
        store.execute(f"DELETE FROM {table}")
        store.execute(sql)
    # Extend the date dimension if facts fall outside the pre-populated horizon.
    for fact in FACTS:
        store.execute(
            f"INSERT OR IGNORE INTO dim_date (date_key, date, iso_week, weekday, is_operating_day) "
            f"SELECT DISTINCT date_key, substr(CAST(date_key AS TEXT), 1, 4) || '-' || "
            f"substr(CAST(date_key AS TEXT), 5, 2) || '-' || substr(CAST(date_key AS TEXT), 7, 2), NULL, NULL, NULL "
            f"FROM {fact.name} WHERE date_key IS NOT NULL AND date_key NOT IN (SELECT date_key FROM dim_date)")
    store.commit()
    return StarReport(table_rows(store, DIMENSIONS + FACTS + BRIDGES))


@dataclass
class Warehouse:
    """A populated store plus the reports from building it."""

    store: StoragePort
    manifest: SchemaManifest
    ingest_report: IngestReport
    star_report: StarReport


def populate(snap: OntologySnapshot, events: Iterable[CdcRecord], store: StoragePort | None = None) -> Warehouse:
    from .store import SqliteStore

    store = store if store is not None else SqliteStore()
    manifest = build_schema(snap, store)
    report = ingest(events, store)
    return Warehouse(store, manifest, report, refresh_star(store))
