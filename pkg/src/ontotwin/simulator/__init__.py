from .calendar import SIM_START, FactoryCalendar, SimClock
from .engine import (GATES, GateResult, NcrRecord, OperationRecord, Passed, Simulation, WorkOrder, inspect,
                     poisson, run_simulation)
from .events import CdcRecord, EventLog, RunStats
from .profiles import PROFILES, DisruptionProfile, Shock, get_profile
from .seed import SeedDataset, generate_seed_entities, stream

__all__ = [
    "CdcRecord", "DisruptionProfile", "EventLog", "FactoryCalendar", "GATES", "GateResult", "NcrRecord",
    "OperationRecord", "PROFILES", "Passed", "RunStats", "SIM_START", "SeedDataset", "Shock", "SimClock",
    "Simulation", "WorkOrder", "generate_seed_entities", "get_profile", "inspect", "poisson", "run_simulation",
    "stream",
]
