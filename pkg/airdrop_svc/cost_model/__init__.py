"""
Cost model package
Fee schedule, strategy models, calibration, sweeps and fiat conversion
"""
from .calibration import CalibrationTable, calibrated, default_table
from .enums import ExportFormat, ScenarioRole, Side, StrategyFamily
from .gas_model import DEFAULT_SCHEDULE, load_schedule, parse_schedule
from .labels import format_label, parse_label
from .schemas import CostBreakdown, GasSchedule, StrategyDescriptor, SweepRow
from .strategies import distributor_cost, feasibility, recipient_cost

__all__ = [
    "CalibrationTable",
    "calibrated",
    "default_table",
    "ExportFormat",
    "ScenarioRole",
    "Side",
    "StrategyFamily",
    "DEFAULT_SCHEDULE",
    "load_schedule",
    "parse_schedule",
    "format_label",
    "parse_label",
    "CostBreakdown",
    "GasSchedule",
    "StrategyDescriptor",
    "SweepRow",
    "distributor_cost",
    "feasibility",
    "recipient_cost",
]
