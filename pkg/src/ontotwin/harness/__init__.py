"""Experiment and calibration harness."""

from .calibration import (
    CALIBRATION_CONFIGS, CALIBRATION_SEEDS, CalibrationReport, KpiStats, kpi_targets, run_calibration, t_interval,
)
from .clients import (
    DEFAULT_FABRICATION_P, DEFAULT_MOCK_SEED, FABRICATION_LEXICON, ClientError, LiveChatClient, MockFabricator,
    ModelClientPort, ProposedCall, fabrication_flags,
)
from .experiment import (
    EXPERIMENT_DAYS, EXPERIMENT_PROFILE, EXPERIMENT_SEED, ExperimentReport, OutcomeClass, QueryRecord,
    build_warehouses, classify, run_experiment,
)
from .queries import QueryCase, load_queries

__all__ = [
    "CALIBRATION_CONFIGS", "CALIBRATION_SEEDS", "CalibrationReport", "ClientError", "DEFAULT_FABRICATION_P",
    "DEFAULT_MOCK_SEED", "EXPERIMENT_DAYS", "EXPERIMENT_PROFILE", "EXPERIMENT_SEED", "ExperimentReport",
    "FABRICATION_LEXICON", "KpiStats", "LiveChatClient", "MockFabricator", "ModelClientPort", "OutcomeClass",
    "ProposedCall", "QueryCase", "QueryRecord", "build_warehouses", "classify", "fabrication_flags",
    "kpi_targets", "load_queries", "run_calibration", "run_experiment", "t_interval",
]
