"""Author the six built-in ontology documents as JSON.

The station tables below are the editable source; the JSON files under
src/ontotwin/ontology/templates/ are generated output. Re-run after editing:

    python scripts/author_templates.py

Work-center unit counts and operator headcount are sized from the daily
throughput so no station runs above ~70% of productive capacity.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

OUT = Path(__file__).resolve().parents[1] / "src" / "ontotwin" / "ontology" / "templates"

WEEK = ["Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun"]

SHIFT_SETS = {
    2: {
        "A": {"name": "Day", "start": "06:00", "end": "14:30"},
        "B": {"name": "Swing", "start": "14:30", "end": "23:00"},
    },
    3: {
        "A": {"name": "Day", "start": "06:00", "end": "14:00"},
        "B": {"name": "Swing", "start": "14:00", "end": "22:00"},
        "C": {"name": "Night", "start": "22:00", "end": "06:00"},
    },
}

DISPOSITIONS = {
    "UAI": {"name": "Use As Is", "weight": 0.25},
    "RWK": {"name": "Rework", "weight": 0.45},
    "SCR": {"name": "Scrap", "weight": 0.2},
    "RTV": {"name": "Return To Vendor", "weight": 0.1},
}

NCR_STATUS = [
    {"status": "Open", "hours": [1, 8]},
    {"status": "Under Review", "hours": [4, 24]},
    {"status": "Dispositioned", "hours": [8, 48]},
]

# station row: (name, wc, cycle range, setup range, fpy, quality gate,
#               failure code descriptions, certification keys, inspection characteristic)
# characteristic: (name, nominal, tolerance, unit)

CONFIGS = {
    "aerospace": {
        "plant_code": "AERO-01",
        "plant_name": "Airframe Structures Assembly",
        "prefix": "AER",
        "regulatory": ["FAA", "NADCAP"],
        "shifts": 2,
        "days": 6,
        "working_days_per_year": 300,
        "fpy_range": [0.94, 0.97],
        "oee_range": [0.55, 0.75],
        "wip_range": [20, 45],
        "stations": [
            ("CNC Machining", "WC-CNC", (120, 480), (30, 60), 0.95, True,
             ["Dimensional out of tolerance", "Surface finish defect", "Tool chatter marks", "Burr or sharp edge"],
             ["MACH"], ("Bore diameter", 25.0, 0.05, "mm")),
            ("Drilling", "WC-DRILL", (30, 90), (15, 30), 0.96, True,
             ["Hole oversize", "Hole position error", "Exit delamination", "Countersink depth error"],
             ["DRILL"], ("Hole diameter", 6.35, 0.03, "mm")),
            ("Riveting", "WC-RIVET", (60, 180), (15, 30), 0.95, False,
             ["Rivet head gap", "Improper rivet upset", "Missing fastener", "Skin dent"],
             ["RIVET"], ("Head height", 1.2, 0.1, "mm")),
            ("Bonding", "WC-BOND", (90, 240), (30, 60), 0.94, True,
             ["Bond-line void", "Adhesive cure deviation", "Surface contamination", "Bond-line thickness out of spec"],
             ["BOND"], ("Bond-line thickness", 0.25, 0.05, "mm")),
            ("NDT", "WC-NDT", (45, 120), (15, 30), 0.95, True,
             ["Ultrasonic indication", "Porosity detected", "Inspection record incomplete", "Reference standard expired"],
             ["NDT"], ("Signal attenuation", 12.0, 3.0, "dB")),
            ("Final Assembly", "WC-ASSY", (120, 360), (30, 60), 0.95, True,
             ["Torque out of spec", "FOD detected", "Misaligned assembly", "Sealant coverage gap"],
             ["ASSY"], ("Fastener torque", 45.0, 4.0, "Nm")),
        ],
        "certifications": {
            "MACH": ("Precision Machining Qualification", "AS9100"),
            "DRILL": ("Drilling and Countersinking", "AS9100"),
            "RIVET": ("Structural Riveting", "NAS 1514"),
            "BOND": ("NADCAP Adhesive Bonding", "NADCAP AC7118"),
            "NDT": ("NDT Level II Ultrasonic", "NADCAP AC7114 / NAS 410"),
            "ASSY": ("Final Assembly Inspection", "FAA Part 21"),
        },
        "station_standards": {"S4": ["NADCAP", "NADCAP AC7118"], "S5": ["NADCAP", "NAS 410"]},
        "products": [
            ("Wing Rib", "Wing", 900, 1),
            ("Fuselage Frame", "Fuselage", 700, 1),
            ("Access Panel", "Fuselage", 500, 1),
            ("Spar Fitting", "Wing", 300, 1),
        ],
        "suppliers": [
            ("Northwind Aluminum", 0.95, 7),
            ("Ridge Titanium Works", 0.92, 14),
            ("Cascade Adhesives", 0.97, 5),
            ("Summit Fasteners", 0.96, 3),
            ("Harbor Coatings", 0.94, 6),
        ],
        "raw_materials": [
            ("Aluminum 7075-T6 plate", "kg", 9.5, 0, "S1"),
            ("Titanium Ti-6Al-4V bar", "kg", 48.0, 1, "S1"),
            ("Epoxy film adhesive", "m2", 35.0, 2, "S4"),
            ("Hi-Lok fastener kit", "kit", 22.0, 3, "S3"),
            ("Polysulfide sealant", "kg", 61.0, 4, "S6"),
            ("Epoxy primer", "l", 18.0, 4, "S6"),
        ],
        "skills": ["Blueprint reading", "GD&T", "Composite layup", "Torque application", "Ultrasonic scanning", "Sealant application"],
        "tools": ["5-axis fixture", "Drill jig", "Rivet gun set", "Autoclave tooling", "UT phased-array probe", "Torque wrench set"],
        "operating_notes": "Airframe sub-assembly line",
        "downtime_prob": 0.0003,
        "downtime_minutes": [30, 180],
        "expedite": 0.08,
        "bop_days": 14,
        "cycle_var": 0.1,
        "capa": 0.2,
        "change_rate": 1.0,
        "aliases": {},
    },
    "pharma": {
        "plant_code": "PHRM-01",
        "plant_name": "Solid Dose Manufacturing",
        "prefix": "PHM",
        "regulatory": ["FDA", "21 CFR 11"],
        "shifts": 3,
        "days": 6,
        "working_days_per_year": 300,
        "fpy_range": [0.96, 0.99],
        "oee_range": [0.45, 0.7],
        "wip_range": [15, 35],
        "stations": [
            ("Dispensing", "WC-DISPENSE", (20, 45), (15, 30), 0.99, True,
             ["Weight out of range", "Wrong material dispensed", "Label mismatch", "Balance calibration overdue"],
             ["GMP", "DISP"], ("Dispensed weight", 50.0, 0.25, "kg")),
            ("Granulation", "WC-GRANULATE", (60, 180), (30, 60), 0.96, True,
             ["Granule size out of spec", "Moisture content high", "Binder addition error", "Over-granulation", "Endpoint not reached"],
             ["GMP", "GRAN"], ("Loss on drying", 2.0, 0.5, "%")),
            ("Blending", "WC-BLEND", (30, 90), (20, 40), 0.98, False,
             ["Blend non-uniformity", "Blend time deviation", "Segregation observed", "Lubricant over-blending"],
             ["GMP"], ("Blend uniformity RSD", 2.5, 1.5, "%")),
            ("Compression", "WC-COMPRESS", (60, 150), (30, 60), 0.97, True,
             ["Tablet weight variation", "Capping", "Lamination", "Hardness out of spec", "Friability failure"],
             ["GMP", "COMP"], ("Tablet hardness", 120.0, 20.0, "N")),
            ("Film Coating", "WC-COAT", (60, 120), (30, 45), 0.975, True,
             ["Coating weight gain low", "Picking and sticking", "Color variation", "Orange peel", "Logo bridging"],
             ["GMP", "COAT"], ("Coating weight gain", 3.0, 0.6, "%")),
            ("Packaging", "WC-PACK", (30, 90), (20, 40), 0.975, True,
             ["Blister seal failure", "Missing leaflet", "Lot code misprint", "Serialization error"],
             ["GMP", "PACK"], ("Seal strength", 8.0, 2.0, "N")),
        ],
        "certifications": {
            "GMP": ("cGMP Manufacturing Operator", "21 CFR 211"),
            "DISP": ("Weighing and Dispensing", "21 CFR 211.101"),
            "GRAN": ("Wet Granulation Process", "21 CFR 211.100"),
            "COMP": ("Tablet Compression Operator", "21 CFR 211.110"),
            "COAT": ("Film Coating Process", "21 CFR 211.110"),
            "PACK": ("Packaging Line Clearance", "21 CFR 211.130"),
        },
        "station_standards": {"S4": ["GMP", "21 CFR Part 11", "21 CFR 211.110"]},
        "products": [
            ("Metformin 500 mg tablet", "Oral solid", 1400, 1),
            ("Atorvastatin 20 mg tablet", "Oral solid", 1000, 1),
            ("Lisinopril 10 mg tablet", "Oral solid", 800, 1),
            ("Amlodipine 5 mg tablet", "Oral solid", 400, 1),
        ],
        "suppliers": [
            ("Meridian API Ltd", 0.93, 21),
            ("Alder Excipients", 0.97, 7),
            ("Clearfilm Coatings", 0.96, 10),
            ("Blisterpak Components", 0.95, 5),
        ],
        "raw_materials": [
            ("Active pharmaceutical ingredient", "kg", 420.0, 0, "S1"),
            ("Microcrystalline cellulose", "kg", 6.0, 1, "S1"),
            ("Povidone binder", "kg", 14.0, 1, "S2"),
            ("Magnesium stearate", "kg", 9.0, 1, "S3"),
            ("Opadry film coat", "kg", 55.0, 2, "S5"),
            ("PVC/Alu blister foil", "m2", 1.8, 3, "S6"),
        ],
        "skills": ["Batch record documentation", "Cleanroom gowning", "Press setup", "Coating pan operation", "Line clearance", "Deviation reporting"],
        "tools": ["Calibrated balance", "High-shear granulator bowl", "V-blender", "Tablet tooling set", "Coating pan spray gun", "Blister forming die"],
        "downtime_prob": 0.0002,
        "downtime_minutes": [20, 120],
        "expedite": 0.05,
        "bop_days": 21,
        "cycle_var": 0.08,
        "capa": 0.3,
        "change_rate": 0.8,
        "aliases": {},
    },
    "automotive": {
        "plant_code": "AUTO-01",
        "plant_name": "Powertrain Component Plant",
        "prefix": "AUT",
        "regulatory": ["IATF 16949"],
        "shifts": 3,
        "days": 5,
        "working_days_per_year": 250,
        "fpy_range": [0.95, 0.98],
        "oee_range": [0.6, 0.85],
        "wip_range": [30, 60],
        "stations": [
            ("Die Casting", "WC-CAST", (20, 60), (20, 45), 0.97, True,
             ["Gas porosity", "Cold shut", "Misrun", "Flash excess", "Die soldering"],
             ["CAST"], ("Wall thickness", 4.0, 0.3, "mm")),
            ("Heat Treatment", "WC-HEAT", (60, 150), (15, 30), 0.97, False,
             ["Hardness low", "Distortion", "Quench crack", "Furnace temperature deviation"],
             ["HEAT"], ("Surface hardness", 58.0, 2.0, "HRC")),
            ("CNC Machining", "WC-MACH", (30, 75), (20, 40), 0.96, True,
             ["Bore out of tolerance", "Surface roughness", "Thread defect", "Tool wear offset", "Datum shift"],
             ["MACH"], ("Bore diameter", 82.0, 0.02, "mm")),
            ("Welding", "WC-WELD", (20, 60), (15, 30), 0.96, True,
             ["Weld porosity", "Incomplete fusion", "Spatter", "Weld undercut", "Burn-through"],
             ["WELD"], ("Weld penetration", 2.5, 0.5, "mm")),
            ("Painting", "WC-PAINT", (40, 90), (20, 40), 0.955, False,
             ["Paint run", "Orange peel", "Film build low", "Contamination crater"],
             ["PAINT"], ("Film build", 25.0, 5.0, "um")),
            ("Assembly and Test", "WC-ASSY", (30, 80), (15, 30), 0.975, True,
             ["Leak test failure", "Torque out of spec", "Missing component", "Part mix-up", "End-of-line test fail"],
             ["ASSY"], ("Leak rate", 2.0, 1.0, "ccm")),
        ],
        "certifications": {
            "CAST": ("Die Casting Operator", "IATF 16949"),
            "HEAT": ("Heat Treat CQI-9", "AIAG CQI-9"),
            "MACH": ("CNC Operator Level 2", "IATF 16949"),
            "WELD": ("Robotic Welding CQI-15", "AIAG CQI-15"),
            "PAINT": ("Coating CQI-12", "AIAG CQI-12"),
            "ASSY": ("Assembly and EOL Test", "IATF 16949"),
        },
        "station_standards": {},
        "products": [
            ("Cylinder head", "Engine", 1500, 1),
            ("Transmission housing", "Driveline", 1200, 1),
            ("Steering knuckle", "Chassis", 800, 1),
            ("Control arm", "Chassis", 500, 1),
        ],
        "suppliers": [
            ("Great Lakes Alloys", 0.94, 7),
            ("Tri-State Wire", 0.97, 4),
            ("Chromatic Coatings", 0.95, 6),
            ("Precision Seals Co", 0.96, 5),
        ],
        "raw_materials": [
            ("A380 aluminum ingot", "kg", 2.6, 0, "S1"),
            ("Quench oil", "l", 3.1, 0, "S2"),
            ("Welding wire ER4043", "kg", 11.0, 1, "S4"),
            ("E-coat primer", "l", 7.5, 2, "S5"),
            ("O-ring kit", "kit", 1.4, 3, "S6"),
        ],
        "skills": ["Die setup", "Furnace loading", "CMM measurement", "Weld robot teaching", "Paint booth operation", "Leak tester operation"],
        "tools": ["Die set", "Furnace basket", "Boring bar", "Weld fixture", "Spray gun", "Leak test fixture"],
        "downtime_prob": 0.0004,
        "downtime_minutes": [15, 90],
        "expedite": 0.1,
        "bop_days": 14,
        "cycle_var": 0.1,
        "capa": 0.15,
        "change_rate": 1.2,
        "aliases": {},
    },
    "electronics": {
        "plant_code": "ELEC-01",
        "plant_name": "PCB Assembly Plant",
        "prefix": "ELX",
        "regulatory": ["IPC"],
        "shifts": 2,
        "days": 5,
        "working_days_per_year": 250,
        "fpy_range": [0.96, 0.99],
        "oee_range": [0.55, 0.8],
        "wip_range": [25, 50],
        "stations": [
            ("Solder Paste Printing", "WC-PRINT", (10, 30), (10, 20), 0.98, True,
             ["Insufficient paste", "Paste bridging", "Stencil misalignment", "Paste smear"],
             ["SMT"], ("Paste height", 120.0, 25.0, "um")),
            ("SMT Placement", "WC-SMT", (20, 50), (15, 30), 0.975, False,
             ["Component shift", "Tombstoning", "Wrong polarity", "Missing component", "Wrong component"],
             ["SMT"], ("Placement offset", 0.0, 0.05, "mm")),
            ("Reflow Soldering", "WC-REFLOW", (20, 40), (10, 20), 0.97, True,
             ["Cold solder joint", "Solder voiding", "Profile out of window", "Head-in-pillow", "Board warpage"],
             ["REFLOW"], ("Peak temperature", 245.0, 5.0, "C")),
            ("AOI Inspection", "WC-AOI", (10, 25), (5, 15), 0.98, True,
             ["Solder bridge", "Lifted lead", "Insufficient fillet", "Foreign material"],
             ["AOI"], ("Fillet height", 0.3, 0.1, "mm")),
            ("Through-Hole and Wave", "WC-WAVE", (20, 45), (10, 25), 0.97, False,
             ["Solder skip", "Icicling", "Barrel fill low", "Flux residue"],
             ["WAVE"], ("Barrel fill", 90.0, 10.0, "%")),
            ("Functional Test", "WC-TEST", (15, 40), (10, 20), 0.975, True,
             ["Functional test fail", "ICT short", "ICT open", "Firmware load error", "Parametric out of limit"],
             ["TEST"], ("Supply current", 350.0, 30.0, "mA")),
        ],
        "certifications": {
            "SMT": ("IPC-A-610 Operator", "IPC-A-610"),
            "REFLOW": ("Reflow Profile Certification", "IPC-7530"),
            "AOI": ("AOI Programming", "IPC-A-610"),
            "WAVE": ("J-STD-001 Soldering", "J-STD-001"),
            "TEST": ("Test Technician", "IPC-9252"),
            "ESD": ("ESD Control", "ANSI/ESD S20.20"),
        },
        "cert_extra": {"S1": ["ESD"], "S2": ["ESD"], "S6": ["ESD"]},
        "station_standards": {"S3": ["IPC-9850", "IPC-7530"]},
        "products": [
            ("Motor controller board", "Industrial", 1800, 1),
            ("Gateway mainboard", "IoT", 1500, 1),
            ("Sensor interface card", "Industrial", 1000, 1),
            ("Power supply module", "Power", 700, 1),
        ],
        "suppliers": [
            ("Pacific PCB Fab", 0.93, 10),
            ("Crestline Components", 0.96, 5),
            ("Solderworks Supply", 0.98, 3),
            ("Vantage Connectors", 0.95, 7),
        ],
        "raw_materials": [
            ("Bare PCB", "ea", 14.0, 0, "S1"),
            ("SAC305 solder paste", "kg", 120.0, 2, "S1"),
            ("Passive component reel", "reel", 30.0, 1, "S2"),
            ("BGA processor", "ea", 22.0, 1, "S2"),
            ("Through-hole connector", "ea", 1.9, 3, "S5"),
            ("Wave solder bar", "kg", 45.0, 2, "S5"),
        ],
        "skills": ["Stencil setup", "Feeder loading", "Profile analysis", "AOI review", "Hand soldering", "Test fixture setup"],
        "tools": ["Stencil", "Nozzle set", "Reflow profiler", "AOI program", "Wave pallet", "Bed-of-nails fixture"],
        "downtime_prob": 0.0003,
        "downtime_minutes": [15, 90],
        "expedite": 0.12,
        "bop_days": 10,
        "cycle_var": 0.1,
        "capa": 0.15,
        "change_rate": 1.5,
        "aliases": {"TT-4201": "S3", "%IW64": "S3", "ReflowZone4": "S3"},
    },
    "food_beverage": {
        "plant_code": "FNB-01",
        "plant_name": "Carbonated Beverage Bottling",
        "prefix": "FNB",
        "regulatory": ["FDA", "FSMA"],
        "shifts": 3,
        "days": 7,
        "working_days_per_year": 360,
        "fpy_range": [0.97, 0.995],
        "oee_range": [0.6, 0.85],
        "wip_range": [30, 70],
        "stations": [
            ("Raw Receiving", "WC-RECV", (10, 25), (5, 10), 0.99, True,
             ["Temperature abuse on arrival", "Certificate of analysis missing"], ["FS"], ("Ingredient temperature", 4.0, 2.0, "C")),
            ("Water Treatment", "WC-WATER", (15, 30), (5, 10), 0.99, False,
             ["Chlorine residual high", "Conductivity out of range"], ["FS"], ("Conductivity", 50.0, 20.0, "uS/cm")),
            ("Syrup Batching", "WC-SYRUP", (20, 45), (10, 20), 0.98, True,
             ["Brix out of spec", "Ingredient omission"], ["BATCH"], ("Syrup brix", 55.0, 0.5, "Bx")),
            ("Blending", "WC-BLEND", (15, 30), (10, 15), 0.985, False,
             ["Ratio deviation", "Blend tank contamination"], ["BATCH"], ("Blend ratio", 5.0, 0.1, ":1")),
            ("Pasteurization", "WC-PAST", (20, 40), (10, 20), 0.985, True,
             ["Hold temperature below limit", "Divert valve failure"], ["PAST"], ("Hold temperature", 72.0, 1.0, "C")),
            ("Carbonation", "WC-CARB", (10, 25), (5, 10), 0.98, False,
             ["CO2 volume low", "Foaming excess"], ["FILL"], ("CO2 volumes", 3.7, 0.2, "vol")),
            ("Bottle Rinsing", "WC-RINSE", (10, 20), (5, 10), 0.99, False,
             ["Rinse pressure low", "Foreign object in bottle"], ["FILL"], ("Rinse pressure", 2.0, 0.4, "bar")),
            ("Filling", "WC-FILL", (20, 45), (10, 20), 0.98, True,
             ["Underfill", "Fill valve leak"], ["FILL"], ("Fill volume", 500.0, 5.0, "ml")),
            ("Capping", "WC-CAP", (10, 25), (5, 10), 0.985, False,
             ["Cap torque low", "Cocked cap"], ["FILL"], ("Cap removal torque", 1.6, 0.4, "Nm")),
            ("Fill-Level Inspection", "WC-FLI", (5, 15), (5, 10), 0.99, True,
             ["Low fill detected", "Inspector reject jam"], ["QA"], ("Fill height", 60.0, 2.0, "mm")),
            ("Labeling", "WC-LABEL", (10, 25), (5, 15), 0.985, False,
             ["Label skew", "Allergen label mismatch"], ["PACK"], ("Label position", 0.0, 1.5, "mm")),
            ("Date Coding", "WC-CODE", (5, 15), (5, 10), 0.99, False,
             ["Illegible code", "Wrong best-before date"], ["PACK"], ("Code contrast", 80.0, 15.0, "%")),
            ("Case Packing", "WC-CASE", (10, 25), (5, 15), 0.99, False,
             ["Case count short", "Case seal open"], ["PACK"], ("Case weight", 12.2, 0.3, "kg")),
            ("Palletizing", "WC-PALLET", (10, 25), (5, 10), 0.99, True,
             ["Pallet pattern error", "Stretch wrap failure"], ["PACK"], ("Pallet height", 1.5, 0.05, "m")),
        ],
        "certifications": {
            "FS": ("FSMA Preventive Controls Qualified", "21 CFR 117"),
            "BATCH": ("Batching and Formulation", "FSSC 22000"),
            "PAST": ("Thermal Process Operator", "21 CFR 113"),
            "FILL": ("Filler Operator", "FSSC 22000"),
            "QA": ("Quality Inspection", "SQF"),
            "PACK": ("Packaging Line Operator", "FSSC 22000"),
        },
        "station_standards": {"S5": ["FSMA", "21 CFR 113"]},
        "products": [
            ("Cola 500 ml", "Carbonated soft drink", 3400, 1),
            ("Lemon-lime 500 ml", "Carbonated soft drink", 2500, 1),
            ("Sparkling water 1 l", "Water", 1800, 1),
            ("Ginger ale 355 ml", "Carbonated soft drink", 940, 1),
        ],
        "suppliers": [
            ("Prairie Sweeteners", 0.95, 4),
            ("Citrus Essence Co", 0.96, 6),
            ("ClearPET Containers", 0.94, 5),
            ("Capline Closures", 0.97, 3),
            ("Printwell Labels", 0.96, 4),
            ("Bayside CO2", 0.98, 2),
        ],
        "raw_materials": [
            ("Liquid sugar", "kg", 0.8, 0, "S3"),
            ("Flavor concentrate", "l", 24.0, 1, "S3"),
            ("CO2", "kg", 0.4, 5, "S6"),
            ("PET preform", "ea", 0.07, 2, "S7"),
            ("Closure 28 mm", "ea", 0.02, 3, "S9"),
            ("Wrap-around label", "ea", 0.01, 4, "S11"),
            ("Corrugated case", "ea", 0.35, 4, "S13"),
        ],
        "skills": ["HACCP monitoring", "CIP operation", "Filler changeover", "Lab titration", "Label setup", "Forklift operation"],
        "tools": ["Refractometer", "CIP skid", "Fill valve set", "Capper chuck set", "Label die", "Coder printhead", "Torque tester", "Pallet wrapper film carriage"],
        "downtime_prob": 0.0002,
        "downtime_minutes": [10, 60],
        "expedite": 0.05,
        "bop_days": 30,
        "cycle_var": 0.08,
        "capa": 0.1,
        "change_rate": 2.5,
        "aliases": {},
    },
    "warehousing": {
        "plant_code": "WHS-01",
        "plant_name": "Regional Fulfillment Center",
        "prefix": "WHS",
        "regulatory": ["OSHA", "SEMI"],
        "shifts": 2,
        "days": 6,
        "working_days_per_year": 300,
        "fpy_range": [0.97, 0.995],
        "oee_range": [0.55, 0.8],
        "wip_range": [40, 90],
        "stations": [
            ("Receiving", "WC-RECV", (10, 30), (5, 10), 0.985, True,
             ["Quantity discrepancy", "Damaged inbound carton", "ASN mismatch", "Missing labels", "Temperature excursion"],
             ["FORK"], ("Inbound count variance", 0.0, 1.0, "ea")),
            ("Put-Away", "WC-PUT", (10, 25), (5, 10), 0.99, False,
             ["Wrong bin location", "Overweight rack load", "Unscanned put-away", "Blocked aisle"],
             ["FORK"], ("Rack load", 800.0, 200.0, "kg")),
            ("Picking", "WC-PICK", (15, 40), (5, 10), 0.98, True,
             ["Mis-pick", "Short pick", "Lot not FIFO", "Damaged item picked", "Scan skipped"],
             ["PICK"], ("Pick accuracy", 100.0, 0.5, "%")),
            ("Packing", "WC-PACK", (10, 30), (5, 10), 0.985, False,
             ["Wrong carton size", "Missing packing slip", "Void fill insufficient", "Seal failure"],
             ["PACK"], ("Package weight", 5.0, 0.4, "kg")),
            ("Sortation", "WC-SORT", (5, 15), (5, 10), 0.99, False,
             ["Missort", "No-read on scanner", "Jam at divert", "Label unreadable"],
             ["SORT"], ("Divert accuracy", 100.0, 0.3, "%")),
            ("Shipping", "WC-SHIP", (10, 30), (5, 15), 0.985, True,
             ["Wrong carrier", "Manifest error", "Trailer load unsecured", "Late tender"],
             ["DOCK", "SAFE"], ("Load weight", 900.0, 300.0, "kg")),
        ],
        "certifications": {
            "FORK": ("Powered Industrial Truck", "OSHA 1910.178"),
            "PICK": ("Order Picker Qualification", "OSHA 1910.178"),
            "PACK": ("Packing Station Standard Work", "ISTA 3A"),
            "SORT": ("Sorter Maintenance Awareness", "SEMI S2"),
            "DOCK": ("Dock Safety", "OSHA 1910.26"),
            "SAFE": ("Hazmat Shipping", "49 CFR 172"),
        },
        "station_standards": {},
        "products": [
            ("Standard parcel order", "Parcel", 3600, 1),
            ("Multi-line order", "Parcel", 2700, 1),
            ("Oversize freight order", "Freight", 1800, 1),
            ("Returns processing", "Reverse", 900, 1),
        ],
        "suppliers": [
            ("Boxcraft Packaging", 0.96, 4),
            ("Tapeline Supplies", 0.98, 2),
            ("Palletworks", 0.94, 5),
            ("Labelgen", 0.97, 3),
        ],
        "raw_materials": [
            ("Shipping carton", "ea", 0.6, 0, "S4"),
            ("Void fill", "kg", 1.2, 0, "S4"),
            ("Packing tape", "roll", 2.5, 1, "S4"),
            ("Wood pallet", "ea", 9.0, 2, "S6"),
            ("Shipping label stock", "roll", 6.0, 3, "S5"),
        ],
        "skills": ["RF scanner use", "WMS transactions", "Forklift operation", "Carton selection", "Sorter induction", "Load planning"],
        "tools": ["RF scanner", "Reach truck", "Pick cart", "Pack bench scale", "Sorter induct station", "Dock leveler"],
        "downtime_prob": 0.0002,
        "downtime_minutes": [10, 60],
        "expedite": 0.15,
        "bop_days": 30,
        "cycle_var": 0.12,
        "capa": 0.1,
        "change_rate": 0.8,
        "aliases": {},
    },
}

MAX_UTILIZATION = 0.7


def _productive_minutes_per_day(cfg):
    shifts = SHIFT_SETS[cfg["shifts"]]
    total = 0
    for s in shifts.values():
        h0, m0 = map(int, s["start"].split(":"))
        h1, m1 = map(int, s["end"].split(":"))
        length = (h1 * 60 + m1) - (h0 * 60 + m0)
        if length <= 0:
            length += 24 * 60
        total += length - 30
    return total


def build(template_id, cfg):
    p = cfg["prefix"]
    daily = sum(prod[2] for prod in cfg["products"]) / cfg["working_days_per_year"]
    minutes = _productive_minutes_per_day(cfg)

    stations, station_to_wc, units, equipment = {}, {}, {}, {}
    failure_codes, station_fc = {}, {}
    station_certs, station_skills, station_tools = {}, {}, {}
    inspection_plans, station_ip, step_templates = {}, {}, {}
    op_material = {}
    cert_ids = {key: f"CERT-{p}-{key}" for key in cfg["certifications"]}
    skill_ids = [f"SK-{p}-{i + 1:02d}" for i in range(len(cfg["skills"]))]
    tool_ids = [f"TL-{p}-{i + 1:02d}" for i in range(len(cfg["tools"]))]

    for i, row in enumerate(cfg["stations"]):
        name, wc, cyc, setup, fpy, gate, codes, certs, char = row
        sid = f"S{i + 1}"
        record = {
            "name": name,
            "work_center": wc,
            "cycle_time_range_min": list(cyc),
            "setup_time_min": list(setup),
            "first_pass_yield": fpy,
            "is_quality_gate": gate,
        }
        if sid in cfg["station_standards"]:
            record["regulatory_standards"] = cfg["station_standards"][sid]
        stations[sid] = record
        station_to_wc[sid] = wc
        load = daily * ((cyc[0] + cyc[1]) / 2 + (setup[0] + setup[1]) / 2)
        n_units = max(1, math.ceil(load / (minutes * MAX_UTILIZATION)))
        units[wc] = n_units
        for u in range(n_units):
            equipment[f"EQ-{wc[3:]}-{u + 1:02d}"] = {
                "name": f"{name} unit {u + 1}",
                "work_center": wc,
                "type": name,
            }
        codes_here = []
        for j, text in enumerate(codes):
            code = f"{p}-{sid}-{j + 1:02d}"
            failure_codes[code] = {
                "description": text,
                "category": "Process" if j % 2 == 0 else "Workmanship",
                "severity": "Major" if j == 0 else "Minor",
            }
            codes_here.append(code)
        station_fc[sid] = codes_here
        station_certs[sid] = [cert_ids[c] for c in certs] + [cert_ids[c] for c in cfg.get("cert_extra", {}).get(sid, [])]
        station_skills[sid] = [skill_ids[i % len(skill_ids)]]
        station_tools[sid] = [tool_ids[i % len(tool_ids)]]
        if len(tool_ids) > len(cfg["stations"]) and i < len(tool_ids) - len(cfg["stations"]):
            station_tools[sid].append(tool_ids[len(cfg["stations"]) + i])
        ip = f"IP-{p}-{sid}"
        cname, nominal, tol, unit = char
        inspection_plans[ip] = {
            "name": f"{name} inspection",
            "sampling": "100%" if gate else "AQL 1.0",
            "characteristics": [
                {"id": "C1", "name": cname, "nominal": nominal, "lsl": round(nominal - tol, 6),
                 "usl": round(nominal + tol, 6), "unit": unit},
            ],
        }
        station_ip[sid] = [ip]
        step_templates[sid] = [
            {"step": f"{name} setup check", "fraction": 0.1},
            {"step": f"{name} cycle", "fraction": 0.8},
            {"step": "Operator self-check", "fraction": 0.1},
        ]
        op_material[sid] = {}

    suppliers = {}
    for k, (name, otr, lead) in enumerate(cfg["suppliers"]):
        suppliers[f"SUP-{p}-{k + 1:02d}"] = {
            "name": name,
            "on_time_rate": otr,
            "lead_time_days": lead,
            "late_delay_min": [60, 480],
        }
    sup_ids = list(suppliers)

    raw = {}
    for k, (name, uom, cost, sup, station) in enumerate(cfg["raw_materials"]):
        mid = f"RM-{p}-{k + 1:02d}"
        raw[mid] = {"name": name, "uom": uom, "unit_cost": cost, "supplier": sup_ids[sup]}
        op_material[station][mid] = round(1.0 + 0.5 * (k % 3), 2)

    products, finished, plans, prm, bsm = {}, {}, {}, {}, {}
    station_ids = list(stations)
    for k, (name, family, vol, lot) in enumerate(cfg["products"]):
        pid = f"P-{p}-{k + 1:02d}"
        fm = f"FM-{p}-{k + 1:02d}"
        plan = f"PP-{p}-{k + 1:02d}"
        products[pid] = {
            "name": name, "family": family, "annual_volume": vol, "lot_size": lot,
            "process_plan": plan, "finished_material": fm,
        }
        finished[fm] = {"name": f"{name} (finished)", "product": pid}
        plans[plan] = {"product": pid, "revision": "A", "stations": station_ids}
        prm[pid] = list(raw)
        bsm[pid] = {sid: sorted(op_material[sid]) for sid in station_ids if op_material[sid]}

    operators_per_shift = sum(units.values()) + len(stations)

    doc = {
        "PLANT_CODE": cfg["plant_code"],
        "PLANT_NAME": cfg["plant_name"],
        "SHIFTS": SHIFT_SETS[cfg["shifts"]],
        "OPERATING_DAYS": WEEK[: cfg["days"]],
        "BREAK_DURATION_MIN": 30,
        "WEEKLY_PM_HOURS": 4,
        "TARGET_OEE_RANGE": cfg["oee_range"],
        "FIRST_PASS_YIELD_RANGE": cfg["fpy_range"],
        "AVG_WIP_RANGE": cfg["wip_range"],
        "OPERATORS_PER_SHIFT": operators_per_shift,
        "EQUIPMENT": equipment,
        "WORK_CENTER_UNITS": units,
        "PRODUCTS": products,
        "WORKING_DAYS_PER_YEAR": cfg["working_days_per_year"],
        "STATIONS": stations,
        "STATION_TO_WC": station_to_wc,
        "RAW_MATERIALS": raw,
        "FINISHED_MATERIALS": finished,
        "PRODUCT_RAW_MATERIAL": prm,
        "OPERATION_MATERIAL_CONSUMPTION": {s: m for s, m in op_material.items() if m},
        "SUPPLIERS": suppliers,
        "FAILURE_CODES": failure_codes,
        "STATION_FAILURE_CODES": station_fc,
        "PROCESS_PLANS": plans,
        "INSPECTION_PLANS": inspection_plans,
        "STATION_INSPECTION_PLANS": station_ip,
        "NCR_DISPOSITIONS": DISPOSITIONS,
        "NCR_STATUS_DURATIONS": NCR_STATUS,
        "CAPA_TRIGGER_RATE": cfg["capa"],
        "EQUIPMENT_DOWNTIME_PROB": cfg["downtime_prob"],
        "EQUIPMENT_DOWNTIME_DURATION_MIN": cfg["downtime_minutes"],
        "ORDER_EXPEDITE_RATE": cfg["expedite"],
        "BOP_REVISION_INTERVAL_DAYS": cfg["bop_days"],
        "CYCLE_TIME_VARIANCE": cfg["cycle_var"],
        "DEFAULT_RANDOM_SEED": 42,
        "CERTIFICATIONS": {
            cert_ids[k]: {"name": n, "standard": std, "validity_months": 24}
            for k, (n, std) in cfg["certifications"].items()
        },
        "STATION_CERTIFICATIONS": station_certs,
        "SKILLS": {sid: {"name": n} for sid, n in zip(skill_ids, cfg["skills"])},
        "STATION_SKILLS": station_skills,
        "TOOL_DEFINITIONS": {
            tid: {"name": n, "type": "fixture" if i % 2 else "gauge", "calibration_interval_days": 90}
            for i, (tid, n) in enumerate(zip(tool_ids, cfg["tools"]))
        },
        "STATION_TOOLS": station_tools,
        "STEP_TEMPLATES": step_templates,
        "CHANGE_PACKAGE_RATE": cfg["change_rate"],
        "CHANGE_PACKAGE_PARAMS": {
            "types": ["Drawing revision", "Process parameter", "Tooling change", "Supplier change"],
            "approval_hours": [8, 72],
            "implementation_hours": [4, 48],
        },
        "BOM_STATION_MATERIALS": bsm,
        "REGULATORY_AUTHORITY": cfg["regulatory"],
        "ENTITY_ALIASES": cfg["aliases"],
    }
    return doc, daily, units


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for template_id, cfg in CONFIGS.items():
        doc, daily, units = build(template_id, cfg)
        path = OUT / f"{template_id}.json"
        path.write_text(json.dumps(doc, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
        print(f"{template_id:14s} daily={daily:5.1f} units={units}")


if __name__ == "__main__":
    main()
