"""Disruption profiles: probability multipliers plus injected shocks."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Shock:
    kind: str  # equipment_outage | supplier_outage
    day: int
    hour: int
    duration_hours: float


@dataclass(frozen=True)
class DisruptionProfile:
    name: str
    downtime_multiplier: float = 1.0
    supply_delay_multiplier: float = 1.0
    expedite_multiplier: float = 1.0
    shocks: tuple[Shock, ...] = ()

    @property
    def injects(self) -> bool:
        return bool(self.shocks) or (self.downtime_multiplier, self.supply_delay_multiplier,
                                     self.expedite_multiplier) != (1.0, 1.0, 1.0)


PROFILES: dict[str, DisruptionProfile] = {
    "stable": DisruptionProfile("stable"),
    "moderate": DisruptionProfile(
        "moderate", 2.0, 2.0, 1.5,
        shocks=(Shock("equipment_outage", 7, 8, 8.0), Shock("supplier_outage", 14, 6, 24.0)),
    ),
    "severe": DisruptionProfile(
        "severe", 4.0, 4.0, 2.0,
        shocks=(Shock("equipment_outage", 3, 8, 16.0), Shock("supplier_outage", 10, 6, 48.0),
                Shock("equipment_outage", 17, 10, 24.0)),
    ),
}


def get_profile(name: str | DisruptionProfile) -> DisruptionProfile:
    if isinstance(name, DisruptionProfile):
        return name
    try:
        return PROFILES[name]
    except KeyError:
        raise KeyError(f"unknown profile {name!r}; choose from {', '.join(PROFILES)}") from None
