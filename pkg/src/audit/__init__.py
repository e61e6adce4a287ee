from src.audit.render import canonical_json, load_report, render_report
from src.audit.runner import audit_data, audit_model, config_hash
from src.audit.verdict import classify, overall_verdict

__all__ = [
    "audit_data",
    "audit_model",
    "canonical_json",
    "classify",
    "config_hash",
    "load_report",
    "overall_verdict",
    "render_report",
]
