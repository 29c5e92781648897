"""Discrete-event engine with 1-minute ticks.

Each tick runs, in order: disruption handling, daily order creation,
operation advancement, equipment status, quality inspection, planning
revisions. Operation advancement and inspection only act on productive
ticks; timed transitions (NCR and change-package timelines, receipts,
downtime ends) fire on whatever tick they fall due.
"""

from __future__ import annotations

import bisect
import heapq
import math
from dataclasses import dataclass, field
from datetime import timedelta
from typing import Any, Optional

from ..ontology import OntologySnapshot
from .calendar import MINUTES_PER_DAY, SIM_START, FactoryCalendar
from .events import CdcRecord, EventLog, RunStats
from .profiles import DisruptionProfile, get_profile
from .seed import SeedDataset, generate_seed_entities, stream
from ..warehouse.schema import SEED_TABLES

GATES = ("equipment", "supply", "upstream", "operator")

# Order lead-time allowances used only for the informational due date.
DUE_DAYS, EXPEDITED_DUE_DAYS = 5, 2


def poisson(rng, lam: float) -> int:
    """Knuth's method, split into chunks so exp(-lam) never underflows."""
    total = 0
    while lam > 0:
        chunk = min(lam, 30.0)
        lam -= chunk
        limit, k, p = math.exp(-chunk), 0, rng.random()
        while p > limit:
            k += 1
            p *= rng.random()
        total += k
    return total


@dataclass(slots=True)
class OperationRecord:
    operation_id: str
    order_id: str
    station_id: str
    seq: int
    index: int
    status: str = "Pending"
    ready_at: Optional[int] = None
    start_at: Optional[int] = None
    end_at: Optional[int] = None
    setup_time_actual: Optional[int] = None
    cycle_time_actual: Optional[int] = None
    operator_id: Optional[str] = None
    equipment_id: Optional[str] = None
    inspected_at: Optional[int] = None
    awaiting_since: Optional[int] = None
    block_logged: bool = False


@dataclass(slots=True)
class WorkOrder:
    order_id: str
    product_id: str
    quantity: int
    created_at: int
    due_at: int
    status: str
    expedited: bool
    seq: int
    operations: list = field(default_factory=list)
    released_upto: int = 0  # index of the furthest op whose upstream is complete
    arrivals: dict = field(default_factory=dict)  # material -> arrival minute or None
    lots: dict = field(default_factory=dict)  # material -> lot id
    completed_at: Optional[int] = None


@dataclass(frozen=True)
class GateResult:
    equipment: bool
    supply: bool
    upstream: bool
    operator: bool
    equipment_id: Optional[str] = None
    operator_id: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.equipment and self.supply and self.upstream and self.operator

    def failed_gates(self) -> list[str]:
        return [g for g in GATES if not getattr(self, g)]

    def as_dict(self) -> dict[str, bool]:
        return {g: getattr(self, g) for g in GATES}


@dataclass(frozen=True)
class Passed:
    operation_id: str


@dataclass(frozen=True)
class NcrRecord:
    ncr_id: str
    operation_id: str
    station_id: str
    failure_code: str
    disposition: str
    capa_flag: bool
    status: str = "Open"


def inspect(op: OperationRecord, snap: OntologySnapshot, rng) -> Passed | NcrRecord:
    """Pass with probability FPY; otherwise draw failure code, disposition and CAPA flag."""
    doc = snap.document
    if rng.random() < doc["STATIONS"][op.station_id]["first_pass_yield"]:
        return Passed(op.operation_id)
    code = rng.choice(doc["STATION_FAILURE_CODES"][op.station_id])
    disp = doc["NCR_DISPOSITIONS"]
    disposition = rng.choices(list(disp), weights=[d["weight"] for d in disp.values()])[0]
    capa = rng.random() < doc["CAPA_TRIGGER_RATE"]
    return NcrRecord("", op.operation_id, op.station_id, code, disposition, capa)


class Simulation:
    def __init__(self, snap: OntologySnapshot, seed: int, days: int,
                 profile: str | DisruptionProfile = "stable", seed_data: SeedDataset | None = None):
        if days < 0:
            raise ValueError("days must be >= 0")
        self.snap, self.doc = snap, snap.document
        self.seed, self.days = seed, days
        self.profile = get_profile(profile)
        self.calendar = FactoryCalendar(self.doc, days)
        self.seed_data = seed_data if seed_data is not None else generate_seed_entities(snap, seed)
        self.t = 0
        self.records: list[CdcRecord] = []
        self.stats = RunStats(operating_days=len(self.calendar.operating_days()))
        self._ts_cache: dict[int, str] = {}
        self._counter = 0

        r = {name: stream(seed, name) for name in
             ("orders", "durations", "inspection", "spc", "downtime", "supply", "planning", "disruption")}
        self.rng = r

        doc = self.doc
        self.line = doc.line_order
        self.stations = doc.stations
        self.orders: dict[str, WorkOrder] = {}
        self.ops: list[OperationRecord] = []
        self.waiting: dict[str, list[tuple]] = {s: [] for s in self.line}
        self.ready: list[int] = []
        self.running: list[tuple[int, int]] = []  # (end minute, op index)
        self.awaiting: list[int] = []
        # One heap of timed transitions per tick step: (minute, counter, kind, data).
        self.timeline: dict[int, list[tuple]] = {1: [], 4: [], 5: [], 6: []}
        self.op_by_id: dict[str, int] = {}

        # Equipment by work center in stable id order.
        self.equipment_by_wc: dict[str, list[str]] = {}
        for eid, e in sorted(doc["EQUIPMENT"].items()):
            self.equipment_by_wc.setdefault(e["work_center"], []).append(eid)
        self.equipment_ids = sorted(doc["EQUIPMENT"])
        self.eq_busy: dict[str, Optional[int]] = {e: None for e in self.equipment_ids}
        self.eq_down_until: dict[str, int] = {e: -1 for e in self.equipment_ids}

        # Operators and their certifications as expiry minutes.
        self.operator_shift = {o["operator_id"]: o["shift_id"] for o in self.seed_data["operator"]}
        self.operator_busy: dict[str, Optional[int]] = {o: None for o in self.operator_shift}
        certs: dict[str, dict[str, int]] = {o: {} for o in self.operator_shift}
        for g in self.seed_data["operator_certification"]:
            y, m, d = map(int, g["expires_on"].split("-"))
            expiry = (SIM_START.replace(year=y, month=m, day=d) - SIM_START).days * MINUTES_PER_DAY
            certs[g["operator_id"]][g["cert_id"]] = expiry
        self.candidates: dict[str, list[tuple[str, list[int]]]] = {}
        for s in self.line:
            need = doc["STATION_CERTIFICATIONS"].get(s, ())
            self.candidates[s] = [
                (o, [certs[o][c] for c in need])
                for o in sorted(self.operator_shift) if all(c in certs[o] for c in need)
            ]

        self.tool_instances: dict[str, list[str]] = {}
        for ti in self.seed_data["tool_instance"]:
            self.tool_instances.setdefault(ti["station_id"], []).append(ti["instance_id"])

        self.product_ids = list(doc["PRODUCTS"])
        self.product_weights = [doc["PRODUCTS"][p]["annual_volume"] for p in self.product_ids]
        self.plan_revisions = {pid: p["revision"] for pid, p in doc["PROCESS_PLANS"].items()}
        self.supplier_outage_until: dict[str, int] = {}
        self.dirty = True
        self.shift_starts = {s.start: s for s in self.calendar.shifts if s.start >= 0}
        self.pm_starts = {w[0]: w for w in self.calendar.pm_windows if w[0] >= 0}
        self.order_ticks = {m: d for d, m in self.calendar.order_ticks.items()}
        self._schedule_shocks()
        self._emit_seed()

    # ------------------------------------------------------------------ utils

    def ts(self, minute: int) -> str:
        s = self._ts_cache.get(minute)
        if s is None:
            s = (SIM_START + timedelta(minutes=minute)).isoformat(timespec="seconds")
            self._ts_cache[minute] = s
        return s

    def emit(self, table: str, op: str, payload: dict[str, Any]) -> None:
        self.records.append(CdcRecord(table, op, self.ts(self.t), payload))

    def _next_id(self) -> int:
        self._counter += 1
        return self._counter

    def schedule(self, minute: int, step: int, kind: str, data: Any) -> None:
        heapq.heappush(self.timeline[step], (minute, self._next_id(), kind, data))

    def _emit_seed(self) -> None:
        ts = self.ts(-1)
        for table in SEED_TABLES:
            for row in self.seed_data.tables.get(table.name, ()):
                self.records.append(CdcRecord(table.name, "insert", ts, dict(row)))
        self.seed_count = len(self.records)

    def _schedule_shocks(self) -> None:
        rng = self.rng["disruption"]
        for i, shock in enumerate(self.profile.shocks):
            start = shock.day * MINUTES_PER_DAY + shock.hour * 60
            if start >= self.calendar.total:
                continue
            if shock.kind == "equipment_outage":
                target = rng.choice(self.equipment_ids)
            elif shock.kind == "supplier_outage":
                target = rng.choice(sorted(self.doc["SUPPLIERS"]))
            else:
                raise ValueError(f"unknown shock kind {shock.kind!r}")
            end = start + int(shock.duration_hours * 60)
            self.schedule(start, 1, "shock", (f"DIS-{i + 1:03d}", shock.kind, target, start, end))

    # ------------------------------------------------------------------ gates

    def evaluate_gates(self, op: OperationRecord) -> GateResult:
        t = self.t
        order = self.orders[op.order_id]
        wc = self.stations[op.station_id].work_center
        eq = next((e for e in self.equipment_by_wc.get(wc, ())
                   if self.eq_busy[e] is None and self.eq_down_until[e] <= t), None)
        supply = all(order.arrivals.get(m) is not None and order.arrivals[m] <= t
                     for m in self._station_materials(order.product_id, op.station_id))
        upstream = op.seq <= order.released_upto
        shift = self.calendar.shift_id_at(t) if 0 <= t < self.calendar.total else None
        operator = None
        if shift is not None:
            for oid, expiries in self.candidates[op.station_id]:
                if (self.operator_shift[oid] == shift and self.operator_busy[oid] is None
                        and all(x > t for x in expiries)):
                    operator = oid
                    break
        return GateResult(eq is not None, supply, upstream, operator is not None, eq, operator)

    def _station_materials(self, product_id: str, station_id: str):
        return self.doc["BOM_STATION_MATERIALS"].get(product_id, {}).get(station_id, ())

    # ------------------------------------------------------------------ tick

    def tick(self) -> list[CdcRecord]:
        """Advance one minute; returns the records emitted by this tick."""
        mark = len(self.records)
        t = self.t
        cal = self.calendar
        productive = cal.productive[t]
        if t == 0 or productive != cal.productive[t - 1] or cal.shift_at[t] != cal.shift_at[t - 1]:
            self.dirty = True
        self._housekeeping(t)

        self._step_disruptions(t)
        if t in self.order_ticks:
            self._step_orders(t, self.order_ticks[t])
        if productive:
            self._step_operations(t)
        self._step_equipment(t, productive)
        self._step_quality(t, productive)
        self._step_planning(t)

        self.t += 1
        return self.records[mark:]

    def run(self) -> EventLog:
        while self.t < self.calendar.total:
            self.tick()
        return EventLog(self.records, self.seed_count, self.stats)

    def _housekeeping(self, t: int) -> None:
        inst = self.shift_starts.get(t)
        if inst is not None:
            self.emit("shift_log", "insert", {
                "shift_log_id": f"SL-{inst.day:03d}-{inst.shift_id}", "shift_id": inst.shift_id,
                "date": (SIM_START + timedelta(days=inst.day)).date().isoformat(),
                "start_at": self.ts(inst.start), "end_at": self.ts(inst.end)})
        pm = self.pm_starts.get(t)
        if pm is not None:
            self.emit("pm_window", "insert", {"pm_id": f"PM-{t // MINUTES_PER_DAY:03d}", "start_at": self.ts(pm[0]),
                                              "end_at": self.ts(pm[1]), "hours": (pm[1] - pm[0]) / 60})

    def _due(self, t: int, step: int):
        heap = self.timeline[step]
        while heap and heap[0][0] <= t:
            yield heapq.heappop(heap)

    # step 1 -----------------------------------------------------------------

    def _step_disruptions(self, t: int) -> None:
        for _, _, kind, data in self._due(t, 1):
            if kind == "receipt":
                self._receive(*data)
            elif kind == "shock":
                self._apply_shock(*data)

    def _apply_shock(self, event_id, kind, target, start, end) -> None:
        self.emit("disruption_event", "insert", {"event_id": event_id, "kind": kind, "target": target,
                                                 "start_at": self.ts(start), "end_at": self.ts(end)})
        if kind == "equipment_outage":
            self._go_down(target, end - start, "injected outage")
        else:
            self.supplier_outage_until[target] = max(self.supplier_outage_until.get(target, -1), end)

    def _receive(self, order_id: str, material: str, po_id: str, supplier: str, qty: float,
                 promised: int, late: bool) -> None:
        t = self.t
        order = self.orders[order_id]
        order.arrivals[material] = t
        receipt_id = po_id.replace("PO-", "RC-")
        lot_id = po_id.replace("PO-", "LOT-")
        order.lots[material] = lot_id
        self.emit("material_receipt", "insert", {
            "receipt_id": receipt_id, "po_id": po_id, "supplier_id": supplier, "material_id": material, "qty": qty,
            "received_at": self.ts(t), "late": int(late), "delay_min": t - promised})
        if late:
            self.emit("supply_delay", "insert", {"delay_id": po_id.replace("PO-", "SD-"), "po_id": po_id,
                                                 "supplier_id": supplier, "material_id": material,
                                                 "start_at": self.ts(promised), "end_at": self.ts(t)})
        self.emit("material_lot", "insert", {"lot_id": lot_id, "material_id": material, "receipt_id": receipt_id,
                                             "qty": qty, "created_at": self.ts(t)})
        self.dirty = True

    # step 2 -----------------------------------------------------------------

    def _step_orders(self, t: int, day: int) -> None:
        doc = self.doc
        rng = self.rng["orders"]
        n = poisson(rng, doc.daily_throughput_target())
        self.stats.orders_per_day.append(n)
        self.stats.orders_released += n
        expedite_p = min(1.0, doc["ORDER_EXPEDITE_RATE"] * self.profile.expedite_multiplier)
        for _ in range(n):
            pid = rng.choices(self.product_ids, weights=self.product_weights)[0]
            expedited = rng.random() < expedite_p
            self._create_order(t, pid, expedited)

    def _create_order(self, t: int, product_id: str, expedited: bool) -> None:
        doc = self.doc
        seq = len(self.orders) + 1
        oid = f"WO-{seq:05d}"
        product = doc["PRODUCTS"][product_id]
        plan_id = product["process_plan"]
        qty = int(product["lot_size"])
        due = t + (EXPEDITED_DUE_DAYS if expedited else DUE_DAYS) * MINUTES_PER_DAY
        status = "Expedited" if expedited else "Created"
        order = WorkOrder(oid, product_id, qty, t, due, status, expedited, seq)
        self.orders[oid] = order
        self.emit("work_order", "insert", {
            "order_id": oid, "product_id": product_id, "plan_id": plan_id, "quantity": qty,
            "created_at": self.ts(t), "due_at": self.ts(due), "status": status,
            "expedited": int(expedited), "completed_at": None})
        self.emit("work_order_status", "insert", {"order_id": oid, "status": status, "ts": self.ts(t)})
        for i, sid in enumerate(doc["PROCESS_PLANS"][plan_id]["stations"]):
            op = OperationRecord(f"{oid}-{i + 1:02d}", oid, sid, i, len(self.ops))
            self.ops.append(op)
            self.op_by_id[op.operation_id] = op.index
            order.operations.append(op.index)
            self.emit("operation", "insert", {
                "operation_id": op.operation_id, "order_id": oid, "station_id": sid, "seq": i + 1,
                "status": "Pending", "ready_at": None, "start_at": None, "end_at": None,
                "setup_time_actual": None, "cycle_time_actual": None, "operator_id": None,
                "equipment_id": None, "inspected_at": None})
        self._order_materials(order, plan_id)
        self._enqueue(self.ops[order.operations[0]])

    def _order_materials(self, order: WorkOrder, plan_id: str) -> None:
        """Purchase orders are placed one lead time ahead, promised for the order's release."""
        doc = self.doc
        rng = self.rng["supply"]
        t = self.t
        mats = dict.fromkeys(m for s in doc["PROCESS_PLANS"][plan_id]["stations"]
                             for m in self._station_materials(order.product_id, s))
        omc = doc["OPERATION_MATERIAL_CONSUMPTION"]
        for i, mid in enumerate(mats):
            supplier = doc["RAW_MATERIALS"][mid]["supplier"]
            srec = doc["SUPPLIERS"][supplier]
            qty = order.quantity * sum(omc.get(s, {}).get(mid, 0) for s in doc["PROCESS_PLANS"][plan_id]["stations"]
                                       if mid in self._station_materials(order.product_id, s))
            po_id = f"PO-{order.order_id[3:]}-{i + 1:02d}"
            ordered = t - int(srec["lead_time_days"]) * MINUTES_PER_DAY
            self.emit("purchase_order", "insert", {
                "po_id": po_id, "supplier_id": supplier, "material_id": mid, "order_id": order.order_id,
                "qty": qty, "ordered_at": self.ts(ordered), "promised_at": self.ts(t)})
            p_late = min(1.0, (1 - srec["on_time_rate"]) * self.profile.supply_delay_multiplier)
            lo, hi = srec["late_delay_min"]
            late = rng.random() < p_late
            delay = rng.randint(int(lo), int(hi)) if late else 0
            outage_end = self.supplier_outage_until.get(supplier, -1)
            if outage_end > t:
                late, delay = True, outage_end - t + rng.randint(int(lo), int(hi))
            order.arrivals[mid] = None
            if late:
                self.schedule(t + delay, 1, "receipt", (order.order_id, mid, po_id, supplier, qty, t, True))
            else:
                self._receive(order.order_id, mid, po_id, supplier, qty, t, False)

    def _enqueue(self, op: OperationRecord) -> None:
        order = self.orders[op.order_id]
        key = (0 if order.expedited else 1, order.seq, op.index)
        bisect.insort(self.waiting[op.station_id], key)
        self.dirty = True

    # step 3 -----------------------------------------------------------------

    def _step_operations(self, t: int) -> None:
        while self.running and self.running[0][0] <= t:
            _, idx = heapq.heappop(self.running)
            self._complete(self.ops[idx])
        if self.ready:
            ready, self.ready = self.ready, []
            for idx in ready:
                self._start(self.ops[idx])
        if self.dirty:
            self.dirty = False
            for s in self.line:
                self._dispatch(s)

    def _dispatch(self, station: str) -> None:
        queue = self.waiting[station]
        i = 0
        while i < len(queue):
            op = self.ops[queue[i][2]]
            gates = self.evaluate_gates(op)
            if gates.passed:
                queue.pop(i)
                self._reserve(op, gates)
                continue
            if not op.block_logged:
                op.block_logged = True
                self.emit("gate_block", "insert", {"block_id": f"GB-{op.operation_id}", "operation_id": op.operation_id,
                                                   "gate": ",".join(gates.failed_gates()), "ts": self.ts(self.t)})
            if not (gates.equipment and gates.operator):
                break  # station resources exhausted for every later op too
            i += 1

    def _reserve(self, op: OperationRecord, gates: GateResult) -> None:
        op.status, op.ready_at = "Ready", self.t
        op.equipment_id, op.operator_id = gates.equipment_id, gates.operator_id
        self.eq_busy[op.equipment_id] = op.index
        self.operator_busy[op.operator_id] = op.index
        self.ready.append(op.index)
        self.emit("operation", "update", {"operation_id": op.operation_id, "status": "Ready",
                                          "ready_at": self.ts(self.t), "equipment_id": op.equipment_id,
                                          "operator_id": op.operator_id})

    def _start(self, op: OperationRecord) -> None:
        t = self.t
        st = self.stations[op.station_id]
        rng = self.rng["durations"]
        v = float(self.doc["CYCLE_TIME_VARIANCE"])
        setup = max(1, round(rng.uniform(*st.setup_time_min)))
        cycle = max(1, round(rng.uniform(*st.cycle_time_range_min) * rng.uniform(1 - v, 1 + v)))
        op.status, op.start_at = "Running", t
        op.setup_time_actual, op.cycle_time_actual = setup, cycle
        op.end_at = t + setup + cycle
        heapq.heappush(self.running, (op.end_at, op.index))
        order = self.orders[op.order_id]
        self.emit("operation", "update", {"operation_id": op.operation_id, "status": "Running", "start_at": self.ts(t),
                                          "setup_time_actual": setup, "cycle_time_actual": cycle})
        self.emit("operator_assignment", "insert", {
            "assignment_id": f"OA-{op.operation_id}", "operation_id": op.operation_id, "operator_id": op.operator_id,
            "shift_id": self.calendar.shift_id_at(t), "start_at": self.ts(t), "end_at": None})
        if op.seq == 0:
            order.status = "InProgress"
            self.emit("work_order", "update", {"order_id": order.order_id, "status": "InProgress"})
            self.emit("work_order_status", "insert", {"order_id": order.order_id, "status": "InProgress",
                                                      "ts": self.ts(t)})
        omc = self.doc["OPERATION_MATERIAL_CONSUMPTION"].get(op.station_id, {})
        for j, mid in enumerate(self._station_materials(order.product_id, op.station_id)):
            self.emit("material_consumption", "insert", {
                "consumption_id": f"MC-{op.operation_id}-{j + 1}", "operation_id": op.operation_id,
                "order_id": order.order_id, "station_id": op.station_id, "material_id": mid,
                "lot_id": order.lots.get(mid), "qty": omc.get(mid, 0) * order.quantity, "ts": self.ts(t)})
        for tool in self.doc["STATION_TOOLS"].get(op.station_id, ()):
            instances = [i for i in self.tool_instances.get(op.station_id, ()) if i.startswith(tool + "-")]
            if instances:
                unit = self.equipment_by_wc[self.stations[op.station_id].work_center].index(op.equipment_id)
                inst = instances[unit % len(instances)]
                self.emit("tool_usage", "insert", {"usage_id": f"TU-{op.operation_id}-{tool}",
                                                   "operation_id": op.operation_id, "instance_id": inst,
                                                   "ts": self.ts(t)})

    def _complete(self, op: OperationRecord) -> None:
        t = self.t
        op.status, op.awaiting_since = "AwaitingInspection", t
        self.emit("operation", "update", {"operation_id": op.operation_id, "status": "AwaitingInspection",
                                          "end_at": self.ts(op.end_at)})
        total = op.end_at - op.start_at
        cursor = op.start_at
        steps = self.doc["STEP_TEMPLATES"].get(op.station_id, ())
        for j, step in enumerate(steps):
            end = op.end_at if j == len(steps) - 1 else cursor + round(total * step["fraction"])
            self.emit("operation_step", "insert", {"operation_id": op.operation_id, "seq": j + 1,
                                                   "step_name": step["step"], "start_at": self.ts(cursor),
                                                   "end_at": self.ts(end)})
            cursor = end
        self.emit("operator_assignment", "update", {"assignment_id": f"OA-{op.operation_id}",
                                                    "end_at": self.ts(op.end_at)})
        self.eq_busy[op.equipment_id] = None
        self.operator_busy[op.operator_id] = None
        self.awaiting.append(op.index)
        self.stats.operations_completed += 1
        self.dirty = True

    # step 4 -----------------------------------------------------------------

    def _step_equipment(self, t: int, productive: int) -> None:
        for _, _, kind, eid in self._due(t, 4):
            self.emit("equipment_status", "insert", {"event_id": f"ES-{self._next_id():06d}", "equipment_id": eid,
                                                     "status": "Up", "ts": self.ts(t)})
            self.dirty = True
        if not productive:
            return
        p = min(1.0, float(self.doc["EQUIPMENT_DOWNTIME_PROB"]) * self.profile.downtime_multiplier)
        rnd = self.rng["downtime"].random
        busy, down = self.eq_busy, self.eq_down_until
        for eid in self.equipment_ids:
            if busy[eid] is None and down[eid] <= t and rnd() < p:
                lo, hi = self.doc["EQUIPMENT_DOWNTIME_DURATION_MIN"]
                self._go_down(eid, self.rng["downtime"].randint(int(lo), int(hi)), "random failure")

    def _go_down(self, eid: str, minutes: int, reason: str) -> None:
        t = self.t
        until = max(self.eq_down_until[eid], t + minutes)
        self.eq_down_until[eid] = until
        n = self._next_id()
        wc = self.doc["EQUIPMENT"][eid]["work_center"]
        self.emit("downtime_event", "insert", {"downtime_id": f"DT-{n:06d}", "equipment_id": eid, "wc_id": wc,
                                               "start_at": self.ts(t), "end_at": self.ts(t + minutes),
                                               "duration_min": minutes, "reason": reason})
        self.emit("equipment_status", "insert", {"event_id": f"ES-{n:06d}", "equipment_id": eid,
                                                 "status": "Down", "ts": self.ts(t)})
        self.schedule(until, 4, "up", eid)

    # step 5 -----------------------------------------------------------------

    def _step_quality(self, t: int, productive: int) -> None:
        for _, _, kind, data in self._due(t, 5):
            if kind == "ncr_open":
                self._open_ncr(data)
            elif kind == "ncr_status":
                self._ncr_transition(*data)
        if not productive or not self.awaiting:
            return
        pending, self.awaiting = self.awaiting, []
        for idx in pending:
            op = self.ops[idx]
            if op.awaiting_since >= t:
                self.awaiting.append(idx)
                continue
            self._inspect(op)

    def _inspect(self, op: OperationRecord) -> None:
        t = self.t
        outcome = inspect(op, self.snap, self.rng["inspection"])
        passed = isinstance(outcome, Passed)
        sid = op.station_id
        self.stats.inspected[sid] = self.stats.inspected.get(sid, 0) + 1
        if passed:
            self.stats.passed[sid] = self.stats.passed.get(sid, 0) + 1
        op.status, op.inspected_at = ("Passed" if passed else "Failed"), t
        plan = (self.doc["STATION_INSPECTION_PLANS"].get(sid) or [None])[0]
        insp_id = f"IN-{op.operation_id}"
        self.emit("inspection", "insert", {"inspection_id": insp_id, "operation_id": op.operation_id,
                                           "station_id": sid, "plan_id": plan, "ts": self.ts(t),
                                           "result": "Pass" if passed else "Fail"})
        if plan is not None:
            rng = self.rng["spc"]
            for ch in self.doc["INSPECTION_PLANS"][plan]["characteristics"]:
                lsl, usl, nominal = ch["lsl"], ch["usl"], ch["nominal"]
                sd = (usl - lsl) / 8
                value = rng.gauss(nominal, sd)
                if passed:
                    value = min(max(value, lsl), usl)
                elif rng.random() < 0.5:
                    value = usl + abs(value - nominal) if value >= nominal else lsl - abs(value - nominal)
                self.emit("inspection_measurement", "insert", {
                    "measurement_id": f"IM-{op.operation_id}-{ch['id']}", "inspection_id": insp_id,
                    "operation_id": op.operation_id, "station_id": sid, "char_id": ch["id"],
                    "value": round(value, 6), "lsl": lsl, "usl": usl, "ts": self.ts(t)})
        self.emit("operation", "update", {"operation_id": op.operation_id, "status": op.status,
                                          "inspected_at": self.ts(t)})
        if passed:
            self._release_downstream(op)
            return
        self.stats.ncrs += 1
        self.schedule(t + 1, 5, "ncr_open", outcome)
        if not self.stations[sid].is_quality_gate:
            self._release_downstream(op)

    def _open_ncr(self, ncr: NcrRecord) -> None:
        t = self.t
        op = self.ops[self.op_by_id[ncr.operation_id]]
        ncr_id = f"NCR-{op.operation_id[3:]}"
        self.emit("ncr", "insert", {"ncr_id": ncr_id, "operation_id": op.operation_id, "order_id": op.order_id,
                                    "station_id": op.station_id, "failure_code": ncr.failure_code,
                                    "disposition": ncr.disposition, "status": "Open", "opened_at": self.ts(t),
                                    "closed_at": None, "capa_flag": int(ncr.capa_flag)})
        self.emit("ncr_status_history", "insert", {"ncr_id": ncr_id, "status": "Open", "ts": self.ts(t)})
        if ncr.capa_flag:
            self.emit("capa", "insert", {"capa_id": f"CAPA-{op.operation_id[3:]}", "ncr_id": ncr_id,
                                         "station_id": op.station_id, "opened_at": self.ts(t), "status": "Open"})
        # Each status is held for its configured duration, then the next begins; the last one closes.
        rng = self.rng["inspection"]
        statuses = self.doc["NCR_STATUS_DURATIONS"]
        at = t
        for i, rec in enumerate(statuses):
            at += max(1, round(rng.uniform(*rec["hours"]) * 60))
            nxt = statuses[i + 1]["status"] if i + 1 < len(statuses) else "Closed"
            self.schedule(at, 5, "ncr_status", (ncr_id, op.index, nxt))

    def _ncr_transition(self, ncr_id: str, op_index: int, status: str) -> None:
        t = self.t
        payload = {"ncr_id": ncr_id, "status": status}
        if status == "Closed":
            payload["closed_at"] = self.ts(t)
        self.emit("ncr", "update", payload)
        self.emit("ncr_status_history", "insert", {"ncr_id": ncr_id, "status": status, "ts": self.ts(t)})
        op = self.ops[op_index]
        if status == "Dispositioned" and self.stations[op.station_id].is_quality_gate:
            self._release_downstream(op)

    def _release_downstream(self, op: OperationRecord) -> None:
        order = self.orders[op.order_id]
        order.released_upto = op.seq + 1
        if op.seq + 1 < len(order.operations):
            self._enqueue(self.ops[order.operations[op.seq + 1]])
            return
        t = self.t
        order.status, order.completed_at = "Complete", t
        self.stats.orders_completed += 1
        self.emit("work_order", "update", {"order_id": order.order_id, "status": "Complete",
                                           "completed_at": self.ts(t)})
        self.emit("work_order_status", "insert", {"order_id": order.order_id, "status": "Complete", "ts": self.ts(t)})
        fm = self.doc["PRODUCTS"][order.product_id]["finished_material"]
        self.emit("finished_lot", "insert", {"lot_id": f"FL-{order.order_id[3:]}", "order_id": order.order_id,
                                             "product_id": order.product_id, "material_id": fm,
                                             "qty": order.quantity, "ts": self.ts(t)})

    # step 6 -----------------------------------------------------------------

    def _step_planning(self, t: int) -> None:
        for _, _, kind, data in self._due(t, 6):
            self._change_transition(*data)
        day = self.order_ticks.get(t)
        if day is None:
            return
        doc = self.doc
        rng = self.rng["planning"]
        interval = int(doc["BOP_REVISION_INTERVAL_DAYS"])
        if day > 0 and interval > 0 and day % interval == 0:
            plan_id = rng.choice(sorted(doc["PROCESS_PLANS"]))
            old = self.plan_revisions[plan_id]
            new = chr(ord(old[-1]) + 1) if old[-1] < "Z" else old + "A"
            self.plan_revisions[plan_id] = new
            self.emit("bop_revision", "insert", {"revision_id": f"BOP-{day:03d}-{plan_id}", "plan_id": plan_id,
                                                 "product_id": doc["PROCESS_PLANS"][plan_id]["product"],
                                                 "from_rev": old, "to_rev": new, "ts": self.ts(t)})
            self.emit("process_plan", "update", {"plan_id": plan_id, "revision": new})
        params = doc["CHANGE_PACKAGE_PARAMS"]
        for k in range(poisson(rng, float(doc["CHANGE_PACKAGE_RATE"]))):
            pkg = f"ECP-{day:03d}-{k + 1}"
            ctype = rng.choice(params["types"])
            station = rng.choice(self.line)
            product = rng.choice(self.product_ids)
            self.emit("change_package", "insert", {
                "package_id": pkg, "change_type": ctype, "station_id": station, "product_id": product,
                "status": "Open", "opened_at": self.ts(t), "approved_at": None, "implemented_at": None})
            self.emit("change_package_status", "insert", {"package_id": pkg, "status": "Open", "ts": self.ts(t)})
            approved = t + max(1, round(rng.uniform(*params["approval_hours"]) * 60))
            implemented = approved + max(1, round(rng.uniform(*params["implementation_hours"]) * 60))
            self.schedule(approved, 6, "change", (pkg, "Approved"))
            self.schedule(implemented, 6, "change", (pkg, "Implemented"))

    def _change_transition(self, pkg: str, status: str) -> None:
        ts = self.ts(self.t)
        col = "approved_at" if status == "Approved" else "implemented_at"
        self.emit("change_package", "update", {"package_id": pkg, "status": status, col: ts})
        self.emit("change_package_status", "insert", {"package_id": pkg, "status": status, "ts": ts})


def run_simulation(snap: OntologySnapshot, seed: int, days: int, profile: str | DisruptionProfile = "stable",
                   seed_data: SeedDataset | None = None) -> EventLog:
    return Simulation(snap, seed, days, profile, seed_data).run()
