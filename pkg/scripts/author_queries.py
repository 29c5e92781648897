"""Write src/ontotwin/harness/queries.json: 12 queries per template, one per tool.

Each query names its target entity only by a domain phrase. The expected id is
checked against the template so a typo here fails loudly.
"""

from __future__ import annotations

import json
from pathlib import Path

from ontotwin.contract import EntityKind, valid_ids
from ontotwin.ontology import TEMPLATE_IDS, template_snapshot
from ontotwin.tools import TOOLS_BY_NAME

OUT = Path(__file__).resolve().parents[1] / "src" / "ontotwin" / "harness" / "queries.json"

# tool -> argument carrying the target entity
TARGET_PARAM = {
    "cycle_time": "station_id", "first_pass_yield": "station_id", "oee_decomposition": "station_id",
    "ncr_pareto": "station_id", "spc_violation": "station_id", "quality_action": "disposition",
    "material_genealogy": "material_id", "supplier_performance": "supplier_id", "change_impact": "station_id",
    "change_velocity": "product_id", "equipment_downtime": "station_id", "production_status": "station_id",
}

# template -> tool -> (expected id, query text)
QUERIES: dict[str, dict[str, tuple[str, str]]] = {
    "aerospace": {
        "cycle_time": ("S4", "What is the average cycle time at the bonding station?"),
        "first_pass_yield": ("S5", "How is first-pass yield trending at non-destructive testing?"),
        "oee_decomposition": ("S1", "Break down OEE for the CNC machining cell."),
        "ncr_pareto": ("S4", "Which defect types drive non-conformances in adhesive bonding?"),
        "spc_violation": ("S3", "Are there any SPC rule violations at riveting?"),
        "quality_action": ("RWK", "Summarize NCRs that were sent back for rework."),
        "material_genealogy": ("RM-AER-03", "Trace which work orders consumed the epoxy film adhesive."),
        "supplier_performance": ("SUP-AER-02", "How reliable are deliveries from our titanium bar supplier?"),
        "change_impact": ("S6", "How many engineering changes have touched final assembly?"),
        "change_velocity": ("P-AER-02", "How quickly are change packages moving for the fuselage frame?"),
        "equipment_downtime": ("S2", "How much unplanned downtime has the drilling station had?"),
        "production_status": ("S6", "What is the current work-in-progress at final assembly?"),
    },
    "pharma": {
        "cycle_time": ("S4", "What is the mean cycle time on the tablet press?"),
        "first_pass_yield": ("S2", "What first-pass yield are we getting out of wet granulation?"),
        "oee_decomposition": ("S5", "Give me the OEE breakdown for film coating."),
        "ncr_pareto": ("S4", "What are the top deviation causes at compression?"),
        "spc_violation": ("S3", "Has blend uniformity gone out of control at the blending step?"),
        "quality_action": ("SCR", "How many rejected batches ended up destroyed as scrap?"),
        "material_genealogy": ("RM-PHM-01", "Show genealogy for lots built with the active ingredient."),
        "supplier_performance": ("SUP-PHM-03", "How is our coating supplier performing on delivery?"),
        "change_impact": ("S6", "Which change controls have affected packaging?"),
        "change_velocity": ("P-PHM-02", "How fast are changes being implemented for the atorvastatin product?"),
        "equipment_downtime": ("S1", "How much downtime has the dispensing booth logged?"),
        "production_status": ("S5", "What is waiting at the coating pan right now?"),
    },
    "automotive": {
        "cycle_time": ("S4", "What is the average cycle time in the weld cell?"),
        "first_pass_yield": ("S1", "What is first-pass yield at die casting?"),
        "oee_decomposition": ("S3", "Decompose OEE for the machining centers."),
        "ncr_pareto": ("S5", "Which paint defects show up most often?"),
        "spc_violation": ("S2", "Any control chart violations in heat treat?"),
        "quality_action": ("UAI", "How many non-conformances were accepted under a use-as-is concession?"),
        "material_genealogy": ("RM-AUT-03", "Which orders consumed welding wire?"),
        "supplier_performance": ("SUP-AUT-01", "What is the on-time rate for our aluminum ingot supplier?"),
        "change_impact": ("S6", "How many engineering changes hit the end-of-line assembly and test?"),
        "change_velocity": ("P-AUT-01", "How quickly are changes to the cylinder head getting implemented?"),
        "equipment_downtime": ("S5", "How much downtime did the paint line have?"),
        "production_status": ("S1", "Show the current status of the casting station."),
    },
    "electronics": {
        "cycle_time": ("S3", "What is the cycle time through the reflow oven?"),
        "first_pass_yield": ("S6", "What is the first-pass yield at functional test?"),
        "oee_decomposition": ("S2", "Give me an OEE breakdown for pick-and-place."),
        "ncr_pareto": ("S4", "What are the most common defects caught by automated optical inspection?"),
        "spc_violation": ("S1", "Has solder paste deposition drifted out of control?"),
        "quality_action": ("RTV", "How many defective parts were returned to the vendor?"),
        "material_genealogy": ("RM-ELX-04", "Which boards used the BGA processors?"),
        "supplier_performance": ("SUP-ELX-01", "How is our bare board fabricator doing on delivery?"),
        "change_impact": ("S5", "How many engineering changes affected wave soldering?"),
        "change_velocity": ("P-ELX-02", "How fast are change packages moving for the gateway board?"),
        "equipment_downtime": ("S3", "How much downtime has the reflow line had?"),
        "production_status": ("S2", "What is queued at SMT placement?"),
    },
    "food_beverage": {
        "cycle_time": ("S8", "What is the average cycle time on the filler?"),
        "first_pass_yield": ("S5", "What first-pass yield does pasteurization achieve?"),
        "oee_decomposition": ("S11", "Break down OEE for the labeler."),
        "ncr_pareto": ("S10", "What defects does fill-level inspection catch most?"),
        "spc_violation": ("S6", "Is CO2 volume at carbonation in statistical control?"),
        "quality_action": ("RWK", "How many non-conforming batches were reworked?"),
        "material_genealogy": ("RM-FNB-01", "Which lots were made with liquid sugar?"),
        "supplier_performance": ("SUP-FNB-03", "How reliable is our bottle preform supplier?"),
        "change_impact": ("S3", "Which recipe changes have touched syrup batching?"),
        "change_velocity": ("P-FNB-04", "How fast are changes for the ginger ale moving?"),
        "equipment_downtime": ("S9", "How much downtime has the capper had?"),
        "production_status": ("S14", "What is the status at end-of-line palletizing?"),
    },
    "warehousing": {
        "cycle_time": ("S3", "What is the average pick time per order?"),
        "first_pass_yield": ("S6", "What share of outbound shipments pass checks first time?"),
        "oee_decomposition": ("S5", "Give me the OEE breakdown for the sorter."),
        "ncr_pareto": ("S1", "What discrepancies do we find most at inbound receiving?"),
        "spc_violation": ("S4", "Are pack-out weights in statistical control at packing?"),
        "quality_action": ("UAI", "How many exceptions were accepted as-is?"),
        "material_genealogy": ("RM-WHS-01", "Which orders consumed shipping cartons?"),
        "supplier_performance": ("SUP-WHS-03", "How reliable are our pallet deliveries?"),
        "change_impact": ("S2", "Which process changes have affected put-away?"),
        "change_velocity": ("P-WHS-04", "How quickly are changes to the returns process being rolled out?"),
        "equipment_downtime": ("S5", "How much downtime has the sortation system had?"),
        "production_status": ("S3", "What is the current backlog in picking?"),
    },
}


def build() -> list[dict]:
    cases = []
    for template_id in TEMPLATE_IDS:
        snap = template_snapshot(template_id)
        table = QUERIES[template_id]
        assert set(table) == set(TOOLS_BY_NAME), template_id
        for tool in TOOLS_BY_NAME:
            expected, text = table[tool]
            param = TARGET_PARAM[tool]
            kind: EntityKind = TOOLS_BY_NAME[tool].param(param).entity_kind
            assert expected in valid_ids(kind, snap), (template_id, tool, expected)
            assert expected not in text, (template_id, tool, "query text leaks the id")
            cases.append({
                "query_id": f"{template_id}:{tool}",
                "template_id": template_id,
                "tool_name": tool,
                "param": param,
                "expected_entity": expected,
                "text": text,
            })
    return cases


if __name__ == "__main__":
    cases = build()
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(cases, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {len(cases)} queries to {OUT}")
