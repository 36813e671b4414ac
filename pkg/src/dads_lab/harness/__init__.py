"""Scenario files, verification checks, exports and the command line."""

from .config import load_config, load_scenario, parse_config_text, scenario_from_config
from .export import export_csv, report_text, trajectory_csv
from .polynomial import polynomial_bundle
from .verify import (
    CheckRecord,
    VerificationReport,
    monitor_dissipation,
    run_scenario,
    verify_theorem1_qualitative,
    verify_theorem3,
)

__all__ = [
    "CheckRecord",
    "VerificationReport",
    "export_csv",
    "load_config",
    "load_scenario",
    "monitor_dissipation",
    "parse_config_text",
    "polynomial_bundle",
    "report_text",
    "run_scenario",
    "scenario_from_config",
    "trajectory_csv",
    "verify_theorem1_qualitative",
    "verify_theorem3",
]
