"""Reference-entity generation: every row is derived from the snapshot plus a seeded stream."""

from __future__ import annotations

import copy
import hashlib
import random
from dataclasses import dataclass, field
from datetime import timedelta
from typing import Any

from ..ontology import OntologySnapshot
from ..ontology.document import WEEKDAYS
from .calendar import SIM_START

FIRST_NAMES = ("Ana", "Ben", "Chen", "Dana", "Eli", "Fatima", "Gus", "Hana", "Ivan", "Jo", "Kofi", "Lena",
               "Marco", "Nia", "Omar", "Priya", "Quinn", "Rosa", "Sam", "Tomas", "Uma", "Vik", "Wen", "Yara")
LAST_NAMES = ("Abbott", "Baker", "Castro", "Diaz", "Evans", "Fischer", "Garcia", "Huang", "Ito", "Jensen",
              "Khan", "Lopez", "Meyer", "Novak", "Okafor", "Patel", "Reyes", "Silva", "Tanaka", "Weber")


def stream(seed: int, name: str) -> random.Random:
    """Independent RNG per subsystem so adding one never perturbs another."""
    digest = hashlib.sha256(f"{seed}:{name}".encode()).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


def _date(days_offset: int) -> str:
    return (SIM_START + timedelta(days=days_offset)).date().isoformat()


@dataclass
class SeedDataset:
    tables: dict[str, list[dict[str, Any]]] = field(default_factory=dict)

    def __getitem__(self, table: str) -> list[dict[str, Any]]:
        return self.tables[table]

    def entity_types(self) -> list[str]:
        return [t for t, rows in self.tables.items() if rows]

    def row_count(self) -> int:
        return sum(len(rows) for rows in self.tables.values())

    def without_certification(self, cert_id: str) -> "SeedDataset":
        """Copy with every operator's grant of ``cert_id`` revoked."""
        out = SeedDataset(copy.deepcopy(self.tables))
        out.tables["operator_certification"] = [
            r for r in out.tables["operator_certification"] if r["cert_id"] != cert_id
        ]
        return out

    def __eq__(self, other):
        return isinstance(other, SeedDataset) and self.tables == other.tables


def generate_seed_entities(snap: OntologySnapshot, seed: int) -> SeedDataset:
    doc = snap.document
    rng = stream(seed, "seed")
    t: dict[str, list[dict]] = {}
    order = doc.line_order

    t["plant"] = [{"plant_code": doc["PLANT_CODE"], "plant_name": doc["PLANT_NAME"],
                   "working_days_per_year": doc["WORKING_DAYS_PER_YEAR"], "default_random_seed": doc["DEFAULT_RANDOM_SEED"]}]
    t["shift"] = [{"shift_id": sid, "name": s["name"], "start_time": s["start"], "end_time": s["end"],
                   "break_min": doc["BREAK_DURATION_MIN"]} for sid, s in doc["SHIFTS"].items()]
    t["operating_day"] = [{"weekday": WEEKDAYS.index(d), "name": d} for d in doc["OPERATING_DAYS"]]
    t["work_center"] = [{"wc_id": wc, "units": n} for wc, n in doc["WORK_CENTER_UNITS"].items()]
    t["station"] = [{
        "station_id": sid, "name": st.name, "wc_id": st.work_center,
        "cycle_min_low": st.cycle_time_range_min[0], "cycle_min_high": st.cycle_time_range_min[1],
        "setup_min_low": st.setup_time_min[0], "setup_min_high": st.setup_time_min[1],
        "first_pass_yield": st.first_pass_yield, "is_quality_gate": int(st.is_quality_gate),
        "sequence": i + 1,
    } for i, (sid, st) in enumerate(doc.stations.items())]
    t["equipment"] = [{"equipment_id": eid, "name": e["name"], "wc_id": e["work_center"], "equipment_type": e["type"]}
                      for eid, e in doc["EQUIPMENT"].items()]
    t["product"] = [{"product_id": pid, "name": p["name"], "family": p["family"], "annual_volume": p["annual_volume"],
                     "lot_size": p["lot_size"], "finished_material_id": p["finished_material"],
                     "plan_id": p["process_plan"]} for pid, p in doc["PRODUCTS"].items()]
    t["raw_material"] = [{"material_id": mid, "name": m["name"], "uom": m["uom"], "unit_cost": m["unit_cost"],
                          "supplier_id": m["supplier"]} for mid, m in doc["RAW_MATERIALS"].items()]
    t["finished_material"] = [{"material_id": mid, "name": m["name"], "product_id": m["product"]}
                              for mid, m in doc["FINISHED_MATERIALS"].items()]

    t["bom_header"], t["bom_item"], t["bom_station_material"] = [], [], []
    omc = doc["OPERATION_MATERIAL_CONSUMPTION"]
    for pid in doc["PRODUCTS"]:
        bom_id = f"BOM-{pid}"
        t["bom_header"].append({"bom_id": bom_id, "product_id": pid, "revision": "A"})
        per_station = doc["BOM_STATION_MATERIALS"].get(pid, {})
        for mid in doc["PRODUCT_RAW_MATERIAL"][pid]:
            qty = sum(omc.get(s, {}).get(mid, 0) for s, mats in per_station.items() if mid in mats)
            t["bom_item"].append({"bom_id": bom_id, "material_id": mid, "qty_per_unit": qty})
        for sid, mats in per_station.items():
            for mid in mats:
                t["bom_station_material"].append({"product_id": pid, "station_id": sid, "material_id": mid})
    t["operation_material"] = [{"station_id": sid, "material_id": mid, "qty_per_lot": q}
                               for sid, mats in omc.items() for mid, q in mats.items()]
    t["supplier"] = [{"supplier_id": sid, "name": s["name"], "on_time_rate": s["on_time_rate"],
                      "lead_time_days": s["lead_time_days"]} for sid, s in doc["SUPPLIERS"].items()]
    t["supplier_material"] = [{"supplier_id": m["supplier"], "material_id": mid} for mid, m in doc["RAW_MATERIALS"].items()]
    t["failure_code"] = [{"code": c, "description": f["description"], "category": f["category"], "severity": f["severity"]}
                         for c, f in doc["FAILURE_CODES"].items()]
    t["station_failure_code"] = [{"station_id": s, "code": c} for s, codes in doc["STATION_FAILURE_CODES"].items() for c in codes]
    t["process_plan"] = [{"plan_id": pid, "product_id": p["product"], "revision": p["revision"]}
                         for pid, p in doc["PROCESS_PLANS"].items()]
    t["process_plan_step"] = [{"plan_id": pid, "seq": i + 1, "station_id": s}
                              for pid, p in doc["PROCESS_PLANS"].items() for i, s in enumerate(p["stations"])]
    t["inspection_plan"] = [{"plan_id": pid, "name": p["name"], "sampling": p["sampling"]}
                            for pid, p in doc["INSPECTION_PLANS"].items()]
    t["inspection_characteristic"] = [{"plan_id": pid, "char_id": c["id"], "name": c["name"], "nominal": c["nominal"],
                                       "lsl": c["lsl"], "usl": c["usl"], "unit": c["unit"]}
                                      for pid, p in doc["INSPECTION_PLANS"].items() for c in p["characteristics"]]
    t["station_inspection_plan"] = [{"station_id": s, "plan_id": p}
                                    for s, plans in doc["STATION_INSPECTION_PLANS"].items() for p in plans]
    t["ncr_disposition"] = [{"disposition_id": d, "name": r["name"], "weight": r["weight"]}
                            for d, r in doc["NCR_DISPOSITIONS"].items()]
    t["ncr_status"] = [{"status": r["status"], "seq": i + 1, "hours_low": r["hours"][0], "hours_high": r["hours"][1]}
                       for i, r in enumerate(doc["NCR_STATUS_DURATIONS"])]
    t["certification"] = [{"cert_id": c, "name": r["name"], "standard": r["standard"], "validity_months": r["validity_months"]}
                          for c, r in doc["CERTIFICATIONS"].items()]
    t["station_certification"] = [{"station_id": s, "cert_id": c}
                                  for s, certs in doc["STATION_CERTIFICATIONS"].items() for c in certs]
    t["skill"] = [{"skill_id": k, "name": r["name"]} for k, r in doc["SKILLS"].items()]
    t["station_skill"] = [{"station_id": s, "skill_id": k} for s, ks in doc["STATION_SKILLS"].items() for k in ks]

    _operators(doc, rng, order, t)

    t["tool_definition"] = [{"tool_id": k, "name": r["name"], "tool_type": r["type"],
                             "calibration_interval_days": r["calibration_interval_days"]}
                            for k, r in doc["TOOL_DEFINITIONS"].items()]
    t["station_tool"] = [{"station_id": s, "tool_id": k} for s, ks in doc["STATION_TOOLS"].items() for k in ks]
    t["tool_instance"] = []
    for s, tools in doc["STATION_TOOLS"].items():
        for k in tools:
            units = doc["WORK_CENTER_UNITS"][doc["STATION_TO_WC"][s]]
            for u in range(units):
                t["tool_instance"].append({"instance_id": f"{k}-{s}-{u + 1}", "tool_id": k,
                                           "serial": f"SN{rng.randrange(10**6, 10**7)}", "station_id": s})
    t["step_template"] = [{"station_id": s, "seq": i + 1, "step_name": st["step"], "fraction": st["fraction"]}
                          for s, steps in doc["STEP_TEMPLATES"].items() for i, st in enumerate(steps)]
    t["storage_location"] = (
        [{"location_id": "LOC-RAW", "name": "Raw material store", "wc_id": None},
         {"location_id": "LOC-FG", "name": "Finished goods store", "wc_id": None}]
        + [{"location_id": f"LOC-{wc}", "name": f"{wc} line-side", "wc_id": wc} for wc in doc["WORK_CENTER_UNITS"]]
    )
    t["change_type"] = [{"change_type_id": f"CT-{i + 1}", "name": n}
                        for i, n in enumerate(doc["CHANGE_PACKAGE_PARAMS"]["types"])]
    t["regulatory_mapping"] = []
    for s in order:
        standards = list(doc["REGULATORY_AUTHORITY"]) + list(doc["STATIONS"][s].get("regulatory_standards", ()))
        for std in dict.fromkeys(standards):
            src = "station" if std in doc["STATIONS"][s].get("regulatory_standards", ()) else "configuration"
            t["regulatory_mapping"].append({"station_id": s, "standard": std, "source": src})
    return SeedDataset(t)


def _operators(doc, rng: random.Random, order, t) -> None:
    """OPERATORS_PER_SHIFT per shift; home stations get units+1 operators, leftovers round-robin."""
    per_shift = int(doc["OPERATORS_PER_SHIFT"])
    alloc = []
    for s in order:
        alloc += [s] * (doc["WORK_CENTER_UNITS"][doc["STATION_TO_WC"][s]] + 1)
    while len(alloc) < per_shift:
        alloc += list(order)
    alloc = alloc[:per_shift]

    t["operator"], t["operator_certification"], t["operator_skill"] = [], [], []
    n = 0
    for shift_id in doc["SHIFTS"]:
        for i, home in enumerate(alloc):
            n += 1
            oid = f"OP-{n:03d}"
            t["operator"].append({
                "operator_id": oid, "name": f"{rng.choice(FIRST_NAMES)} {rng.choice(LAST_NAMES)}",
                "shift_id": shift_id, "home_station_id": home, "hired_on": _date(-rng.randint(90, 3650)),
            })
            stations = [home]
            if rng.random() < 0.3:  # cross-trained on the next station
                stations.append(order[(order.index(home) + 1) % len(order)])
            certs = dict.fromkeys(c for s in stations for c in doc["STATION_CERTIFICATIONS"].get(s, ()))
            for cert in certs:
                months = int(doc["CERTIFICATIONS"][cert]["validity_months"])
                issued = -rng.randint(30, max(31, months * 30 - 90))
                t["operator_certification"].append({
                    "operator_id": oid, "cert_id": cert,
                    "issued_on": _date(issued), "expires_on": _date(issued + months * 30),
                })
            for skill in doc["STATION_SKILLS"].get(home, ()):
                t["operator_skill"].append({"operator_id": oid, "skill_id": skill, "level": rng.randint(1, 3)})
