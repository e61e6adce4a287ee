from typing import Iterable, Optional

from src.schemas.audit import Direction, Status, Verdict


def classify(
    value: Optional[float], threshold: Optional[float], direction: Direction, warn_fraction: float
) -> Status:
    """
    Compare a metric value with its threshold.

    max: fail when |value| > T, warn when |value| > T * warn_fraction.
    min: fail when value < T, warn when value < T + T * (1 - warn_fraction).
    """
    if value is None or threshold is None:
        return "skipped"
    if direction == "max":
        magnitude = abs(value)
        if magnitude > threshold:
            return "fail"
        if magnitude > threshold * warn_fraction:
            return "warn"
        return "pass"
    if value < threshold:
        return "fail"
    if value < threshold + threshold * (1.0 - warn_fraction):
        return "warn"
    return "pass"


def overall_verdict(statuses: Iterable[Status]) -> Verdict:
    """fail if any test fails, else warn if any warns, else pass; skipped tests do not count."""
    seen = set(statuses)
    if "fail" in seen:
        return "fail"
    if "warn" in seen:
        return "warn"
    return "pass"
