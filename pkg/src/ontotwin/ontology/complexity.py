"""Ontology complexity counts per built-in configuration."""

from __future__ import annotations

from dataclasses import dataclass, field

from .document import OntologyDocument


@dataclass(frozen=True)
class ComplexityRow:
    stations: int
    products: int
    failure_codes: int
    certifications: int
    inspection_plans: int
    tool_definitions: int
    regulatory_authority: str = ""

    COUNTED = ("stations", "products", "failure_codes", "certifications", "inspection_plans", "tool_definitions")


# Published per-configuration counts.
COMPLEXITY_TABLE: dict[str, ComplexityRow] = {
    "aerospace": ComplexityRow(6, 4, 24, 6, 6, 6, "FAA / NADCAP"),
    "pharma": ComplexityRow(6, 4, 27, 6, 6, 6, "FDA / 21 CFR 11"),
    "automotive": ComplexityRow(6, 4, 28, 6, 6, 6, "IATF 16949"),
    "electronics": ComplexityRow(6, 4, 27, 6, 6, 6, "IPC"),
    "food_beverage": ComplexityRow(14, 4, 28, 6, 14, 8, "FDA / FSMA"),
    "warehousing": ComplexityRow(6, 4, 26, 6, 6, 6, "OSHA / SEMI"),
}


@dataclass(frozen=True)
class ValidationReport:
    measured: ComplexityRow
    expected: ComplexityRow
    mismatches: dict[str, tuple[int, int]] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def measure(doc: OntologyDocument) -> ComplexityRow:
    return ComplexityRow(
        stations=len(doc["STATIONS"]),
        products=len(doc["PRODUCTS"]),
        failure_codes=len(doc["FAILURE_CODES"]),
        certifications=len(doc["CERTIFICATIONS"]),
        inspection_plans=len(doc["INSPECTION_PLANS"]),
        tool_definitions=len(doc["TOOL_DEFINITIONS"]),
        regulatory_authority=" / ".join(doc["REGULATORY_AUTHORITY"]),
    )


def validate_counts(doc: OntologyDocument, expected: ComplexityRow) -> ValidationReport:
    measured = measure(doc)
    mismatches = {
        name: (getattr(measured, name), getattr(expected, name))
        for name in ComplexityRow.COUNTED
        if getattr(measured, name) != getattr(expected, name)
    }
    return ValidationReport(measured, expected, mismatches)
