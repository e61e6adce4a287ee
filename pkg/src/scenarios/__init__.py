from src.scenarios.feedback import (
    closed_form_two_zone,
    expected_shares,
    run_feedback_sim,
    series_to_frame,
    write_series_csv,
)
from src.scenarios.generators import generate, scenario_audit_config, scenario_schema

__all__ = [
    "closed_form_two_zone",
    "expected_shares",
    "generate",
    "run_feedback_sim",
    "scenario_audit_config",
    "scenario_schema",
    "series_to_frame",
    "write_series_csv",
]
