"""Table definitions: operational (CDC targets) and the analytics star schema.

Operational tables mirror the records the simulator emits. The star schema
is 14 dimensions, 8 facts and 1 bridge; dimension rows that come straight
from the ontology are generated from the loaded snapshot.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class TableKind(str, Enum):
    OPERATIONAL = "Operational"
    DIMENSION = "Dimension"
    FACT = "Fact"
    BRIDGE = "Bridge"


@dataclass(frozen=True)
class Column:
    name: str
    type: str  # TEXT | INTEGER | REAL
    nullable: bool = True


@dataclass(frozen=True)
class TableSchema:
    name: str
    kind: TableKind
    columns: tuple[Column, ...]
    key: tuple[str, ...] = ()

    @property
    def column_names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.columns)

    def ddl(self) -> str:
        cols = [f"    {c.name} {c.type}{'' if c.nullable else ' NOT NULL'}" for c in self.columns]
        if self.key:
            cols.append(f"    PRIMARY KEY ({', '.join(self.key)})")
        return f"CREATE TABLE {self.name} (\n" + ",\n".join(cols) + "\n);"


def _cols(spec: str) -> tuple[Column, ...]:
    """Parse 'name:TYPE, other:TYPE!' where a trailing ! marks NOT NULL."""
    out = []
    for part in spec.split(","):
        name, _, typ = part.strip().partition(":")
        typ = typ or "TEXT"
        out.append(Column(name, typ.rstrip("!"), nullable=not typ.endswith("!")))
    return tuple(out)


def _t(name, kind, spec, key=()):
    return TableSchema(name, kind, _cols(spec), tuple(key))


_OP = TableKind.OPERATIONAL

# Reference entities produced by the seed generator.
SEED_TABLES: tuple[TableSchema, ...] = (
    _t("plant", _OP, "plant_code:TEXT!, plant_name, working_days_per_year:INTEGER, default_random_seed:INTEGER", ["plant_code"]),
    _t("shift", _OP, "shift_id:TEXT!, name, start_time, end_time, break_min:INTEGER", ["shift_id"]),
    _t("operating_day", _OP, "weekday:INTEGER!, name", ["weekday"]),
    _t("work_center", _OP, "wc_id:TEXT!, units:INTEGER", ["wc_id"]),
    _t("station", _OP, "station_id:TEXT!, name, wc_id, cycle_min_low:REAL, cycle_min_high:REAL, setup_min_low:REAL, "
       "setup_min_high:REAL, first_pass_yield:REAL, is_quality_gate:INTEGER, sequence:INTEGER", ["station_id"]),
    _t("equipment", _OP, "equipment_id:TEXT!, name, wc_id, equipment_type", ["equipment_id"]),
    _t("product", _OP, "product_id:TEXT!, name, family, annual_volume:REAL, lot_size:INTEGER, finished_material_id, plan_id", ["product_id"]),
    _t("raw_material", _OP, "material_id:TEXT!, name, uom, unit_cost:REAL, supplier_id", ["material_id"]),
    _t("finished_material", _OP, "material_id:TEXT!, name, product_id", ["material_id"]),
    _t("bom_header", _OP, "bom_id:TEXT!, product_id, revision", ["bom_id"]),
    _t("bom_item", _OP, "bom_id:TEXT!, material_id:TEXT!, qty_per_unit:REAL", ["bom_id", "material_id"]),
    _t("bom_station_material", _OP, "product_id:TEXT!, station_id:TEXT!, material_id:TEXT!", ["product_id", "station_id", "material_id"]),
    _t("operation_material", _OP, "station_id:TEXT!, material_id:TEXT!, qty_per_lot:REAL", ["station_id", "material_id"]),
    _t("supplier", _OP, "supplier_id:TEXT!, name, on_time_rate:REAL, lead_time_days:INTEGER", ["supplier_id"]),
    _t("supplier_material", _OP, "supplier_id:TEXT!, material_id:TEXT!", ["supplier_id", "material_id"]),
    _t("failure_code", _OP, "code:TEXT!, description, category, severity", ["code"]),
    _t("station_failure_code", _OP, "station_id:TEXT!, code:TEXT!", ["station_id", "code"]),
    _t("process_plan", _OP, "plan_id:TEXT!, product_id, revision", ["plan_id"]),
    _t("process_plan_step", _OP, "plan_id:TEXT!, seq:INTEGER!, station_id", ["plan_id", "seq"]),
    _t("inspection_plan", _OP, "plan_id:TEXT!, name, sampling", ["plan_id"]),
    _t("inspection_characteristic", _OP, "plan_id:TEXT!, char_id:TEXT!, name, nominal:REAL, lsl:REAL, usl:REAL, unit", ["plan_id", "char_id"]),
    _t("station_inspection_plan", _OP, "station_id:TEXT!, plan_id:TEXT!", ["station_id", "plan_id"]),
    _t("ncr_disposition", _OP, "disposition_id:TEXT!, name, weight:REAL", ["disposition_id"]),
    _t("ncr_status", _OP, "status:TEXT!, seq:INTEGER, hours_low:REAL, hours_high:REAL", ["status"]),
    _t("certification", _OP, "cert_id:TEXT!, name, standard, validity_months:INTEGER", ["cert_id"]),
    _t("station_certification", _OP, "station_id:TEXT!, cert_id:TEXT!", ["station_id", "cert_id"]),
    _t("skill", _OP, "skill_id:TEXT!, name", ["skill_id"]),
    _t("station_skill", _OP, "station_id:TEXT!, skill_id:TEXT!", ["station_id", "skill_id"]),
    _t("operator", _OP, "operator_id:TEXT!, name, shift_id, home_station_id, hired_on", ["operator_id"]),
    _t("operator_certification", _OP, "operator_id:TEXT!, cert_id:TEXT!, issued_on, expires_on", ["operator_id", "cert_id"]),
    _t("operator_skill", _OP, "operator_id:TEXT!, skill_id:TEXT!, level:INTEGER", ["operator_id", "skill_id"]),
    _t("tool_definition", _OP, "tool_id:TEXT!, name, tool_type, calibration_interval_days:INTEGER", ["tool_id"]),
    _t("station_tool", _OP, "station_id:TEXT!, tool_id:TEXT!", ["station_id", "tool_id"]),
    _t("tool_instance", _OP, "instance_id:TEXT!, tool_id, serial, station_id", ["instance_id"]),
    _t("step_template", _OP, "station_id:TEXT!, seq:INTEGER!, step_name, fraction:REAL", ["station_id", "seq"]),
    _t("storage_location", _OP, "location_id:TEXT!, name, wc_id", ["location_id"]),
    _t("change_type", _OP, "change_type_id:TEXT!, name", ["change_type_id"]),
    _t("regulatory_mapping", _OP, "station_id:TEXT!, standard:TEXT!, source", ["station_id", "standard"]),
)

# Transactional tables fed by the event stream.
EVENT_TABLES: tuple[TableSchema, ...] = (
    _t("work_order", _OP, "order_id:TEXT!, product_id, plan_id, quantity:INTEGER, created_at, due_at, status, "
       "expedited:INTEGER, completed_at", ["order_id"]),
    _t("work_order_status", _OP, "order_id:TEXT!, status:TEXT!, ts:TEXT!", ["order_id", "status", "ts"]),
    _t("operation", _OP, "operation_id:TEXT!, order_id, station_id, seq:INTEGER, status, ready_at, start_at, end_at, "
       "setup_time_actual:INTEGER, cycle_time_actual:INTEGER, operator_id, equipment_id, inspected_at", ["operation_id"]),
    _t("operation_step", _OP, "operation_id:TEXT!, seq:INTEGER!, step_name, start_at, end_at", ["operation_id", "seq"]),
    _t("gate_block", _OP, "block_id:TEXT!, operation_id, gate, ts", ["block_id"]),
    _t("operator_assignment", _OP, "assignment_id:TEXT!, operation_id, operator_id, shift_id, start_at, end_at", ["assignment_id"]),
    _t("downtime_event", _OP, "downtime_id:TEXT!, equipment_id, wc_id, start_at, end_at, duration_min:INTEGER, reason", ["downtime_id"]),
    _t("equipment_status", _OP, "event_id:TEXT!, equipment_id, status, ts", ["event_id"]),
    _t("pm_window", _OP, "pm_id:TEXT!, start_at, end_at, hours:REAL", ["pm_id"]),
    _t("shift_log", _OP, "shift_log_id:TEXT!, shift_id, date, start_at, end_at", ["shift_log_id"]),
    _t("inspection", _OP, "inspection_id:TEXT!, operation_id, station_id, plan_id, ts, result", ["inspection_id"]),
    _t("inspection_measurement", _OP, "measurement_id:TEXT!, inspection_id, operation_id, station_id, char_id, "
       "value:REAL, lsl:REAL, usl:REAL, ts", ["measurement_id"]),
    _t("ncr", _OP, "ncr_id:TEXT!, operation_id, order_id, station_id, failure_code, disposition, status, opened_at, "
       "closed_at, capa_flag:INTEGER", ["ncr_id"]),
    _t("ncr_status_history", _OP, "ncr_id:TEXT!, status:TEXT!, ts", ["ncr_id", "status"]),
    _t("capa", _OP, "capa_id:TEXT!, ncr_id, station_id, opened_at, status", ["capa_id"]),
    _t("purchase_order", _OP, "po_id:TEXT!, supplier_id, material_id, order_id, qty:REAL, ordered_at, promised_at", ["po_id"]),
    _t("material_receipt", _OP, "receipt_id:TEXT!, po_id, supplier_id, material_id, qty:REAL, received_at, late:INTEGER, "
       "delay_min:INTEGER", ["receipt_id"]),
    _t("supply_delay", _OP, "delay_id:TEXT!, po_id, supplier_id, material_id, start_at, end_at", ["delay_id"]),
    _t("material_lot", _OP, "lot_id:TEXT!, material_id, receipt_id, qty:REAL, created_at", ["lot_id"]),
    _t("material_consumption", _OP, "consumption_id:TEXT!, operation_id, order_id, station_id, material_id, lot_id, "
       "qty:REAL, ts", ["consumption_id"]),
    _t("finished_lot", _OP, "lot_id:TEXT!, order_id, product_id, material_id, qty:INTEGER, ts", ["lot_id"]),
    _t("tool_usage", _OP, "usage_id:TEXT!, operation_id, instance_id, ts", ["usage_id"]),
    _t("bop_revision", _OP, "revision_id:TEXT!, plan_id, product_id, from_rev, to_rev, ts", ["revision_id"]),
    _t("change_package", _OP, "package_id:TEXT!, change_type, station_id, product_id, status, opened_at, approved_at, "
       "implemented_at", ["package_id"]),
    _t("change_package_status", _OP, "package_id:TEXT!, status:TEXT!, ts", ["package_id", "status"]),
    _t("disruption_event", _OP, "event_id:TEXT!, kind, target, start_at, end_at", ["event_id"]),
)

OPERATIONAL_TABLES: tuple[TableSchema, ...] = SEED_TABLES + EVENT_TABLES

_D, _F, _B = TableKind.DIMENSION, TableKind.FACT, TableKind.BRIDGE

DIMENSIONS: tuple[TableSchema, ...] = (
    _t("dim_date", _D, "date_key:INTEGER!, date, iso_week, weekday, is_operating_day:INTEGER", ["date_key"]),
    _t("dim_shift", _D, "shift_id:TEXT!, name, start_time, end_time", ["shift_id"]),
    _t("dim_station", _D, "station_id:TEXT!, name, work_center_id, sequence:INTEGER, ideal_cycle_min:REAL, "
       "target_fpy:REAL, is_quality_gate:INTEGER", ["station_id"]),
    _t("dim_work_center", _D, "work_center_id:TEXT!, units:INTEGER", ["work_center_id"]),
    _t("dim_equipment", _D, "equipment_id:TEXT!, name, work_center_id, equipment_type", ["equipment_id"]),
    _t("dim_operator", _D, "operator_id:TEXT!, name, shift_id, home_station_id", ["operator_id"]),
    _t("dim_product", _D, "product_id:TEXT!, name, family", ["product_id"]),
    _t("dim_raw_material", _D, "raw_material_id:TEXT!, name, uom, supplier_id", ["raw_material_id"]),
    _t("dim_finished_material", _D, "finished_material_id:TEXT!, name, product_id", ["finished_material_id"]),
    _t("dim_supplier", _D, "supplier_id:TEXT!, name, on_time_rate:REAL", ["supplier_id"]),
    _t("dim_failure_code", _D, "failure_code:TEXT!, description, category, severity, station_id", ["failure_code"]),
    _t("dim_inspection_plan", _D, "inspection_plan_id:TEXT!, name, sampling", ["inspection_plan_id"]),
    _t("dim_certification", _D, "certification_id:TEXT!, name, standard", ["certification_id"]),
    _t("dim_tool", _D, "tool_id:TEXT!, name, tool_type", ["tool_id"]),
)

FACTS: tuple[TableSchema, ...] = (
    _t("fact_operation_execution", _F, "operation_id:TEXT!, order_id, date_key:INTEGER, shift_id, station_id, "
       "work_center_id, equipment_id, operator_id, product_id, start_at, end_at, setup_time_min:INTEGER, "
       "cycle_time_min:INTEGER, ideal_cycle_min:REAL, passed:INTEGER", ["operation_id"]),
    _t("fact_work_order", _F, "order_id:TEXT!, product_id, date_key:INTEGER, created_at, completed_at, quantity:INTEGER, "
       "expedited:INTEGER, status, lead_time_min:INTEGER", ["order_id"]),
    _t("fact_ncr", _F, "ncr_id:TEXT!, operation_id, order_id, station_id, failure_code, disposition, date_key:INTEGER, "
       "opened_at, closed_at, capa_flag:INTEGER", ["ncr_id"]),
    _t("fact_inspection_result", _F, "inspection_id:TEXT!, operation_id, station_id, inspection_plan_id, "
       "date_key:INTEGER, ts, passed:INTEGER", ["inspection_id"]),
    _t("fact_equipment_downtime", _F, "downtime_id:TEXT!, equipment_id, station_id, date_key:INTEGER, start_at, end_at, "
       "duration_min:INTEGER", ["downtime_id"]),
    _t("fact_material_consumption", _F, "consumption_id:TEXT!, operation_id, order_id, station_id, raw_material_id, "
       "supplier_id, lot_id, qty:REAL, date_key:INTEGER, ts, receipt_late:INTEGER", ["consumption_id"]),
    _t("fact_change_package", _F, "package_id:TEXT!, change_type, station_id, product_id, date_key:INTEGER, opened_at, "
       "approved_at, implemented_at, approval_hours:REAL", ["package_id"]),
    _t("fact_spc_sample", _F, "measurement_id:TEXT!, operation_id, station_id, characteristic, date_key:INTEGER, ts, "
       "value:REAL, lsl:REAL, usl:REAL", ["measurement_id"]),
)

BRIDGES: tuple[TableSchema, ...] = (
    _t("bridge_operator_certification", _B, "operator_id:TEXT!, certification_id:TEXT!", ["operator_id", "certification_id"]),
)

STAR_TABLES: tuple[TableSchema, ...] = DIMENSIONS + FACTS + BRIDGES
ALL_TABLES: tuple[TableSchema, ...] = OPERATIONAL_TABLES + STAR_TABLES
TABLES_BY_NAME: dict[str, TableSchema] = {t.name: t for t in ALL_TABLES}

# Fact foreign keys: (fact, column) -> (dimension, key column).
FOREIGN_KEYS: dict[tuple[str, str], tuple[str, str]] = {}
for _fact in FACTS:
    for _col in _fact.column_names:
        for _dim in DIMENSIONS:
            if _col == _dim.key[0] and _col not in ("operation_id",):
                FOREIGN_KEYS[(_fact.name, _col)] = (_dim.name, _dim.key[0])

# Fact tables relevant to each entity kind; used to build query context.
JOIN_HINTS: dict[str, tuple[str, ...]] = {
    "Station": ("fact_operation_execution", "fact_inspection_result", "fact_ncr", "fact_spc_sample",
                "fact_equipment_downtime", "fact_change_package"),
    "WorkCenter": ("fact_operation_execution", "fact_equipment_downtime"),
    "Equipment": ("fact_operation_execution", "fact_equipment_downtime"),
    "Product": ("fact_work_order", "fact_operation_execution", "fact_change_package"),
    "RawMaterial": ("fact_material_consumption", "fact_work_order"),
    "FinishedMaterial": ("fact_work_order",),
    "Supplier": ("fact_material_consumption",),
    "FailureCode": ("fact_ncr",),
    "Certification": ("bridge_operator_certification",),
    "Skill": (),
    "ToolDefinition": ("fact_operation_execution",),
    "InspectionPlan": ("fact_inspection_result", "fact_spc_sample"),
    "NcrDisposition": ("fact_ncr",),
}


def ddl_script(tables=ALL_TABLES) -> str:
    return "\n\n".join(t.ddl() for t in tables) + "\n"
