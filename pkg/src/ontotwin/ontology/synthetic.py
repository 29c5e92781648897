"""Build large valid documents by widening a built-in one (scaling benchmarks)."""

from __future__ import annotations

import copy
from typing import Any


def widen_stations(base: dict[str, Any], n_stations: int) -> dict[str, Any]:
    """Return a copy of ``base`` with stations S1..Sn, cloned round-robin."""
    doc = copy.deepcopy(base)
    templates = list(doc["STATIONS"])
    stations, to_wc = {}, {}
    per_station = {
        k: {} for k in ("STATION_FAILURE_CODES", "STATION_CERTIFICATIONS", "STATION_SKILLS",
                        "STATION_TOOLS", "STATION_INSPECTION_PLANS", "STEP_TEMPLATES")
    }
    for i in range(n_stations):
        sid = f"S{i + 1}"
        src = templates[i % len(templates)]
        stations[sid] = copy.deepcopy(base["STATIONS"][src])
        to_wc[sid] = base["STATION_TO_WC"][src]
        for key, out in per_station.items():
            if src in base[key]:
                out[sid] = copy.deepcopy(base[key][src])
    doc["STATIONS"] = stations
    doc["STATION_TO_WC"] = to_wc
    doc.update(per_station)
    omc = {sid: mats for sid, mats in base["OPERATION_MATERIAL_CONSUMPTION"].items() if sid in stations}
    doc["OPERATION_MATERIAL_CONSUMPTION"] = omc
    doc["BOM_STATION_MATERIALS"] = {
        pid: {sid: mats for sid, mats in per.items() if sid in stations}
        for pid, per in base["BOM_STATION_MATERIALS"].items()
    }
    line = [f"S{i + 1}" for i in range(n_stations)]
    for plan in doc["PROCESS_PLANS"].values():
        plan["stations"] = line
    return doc
