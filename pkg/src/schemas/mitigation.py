from typing import Any, Dict, Literal, Optional

from pydantic import BaseModel, Field

from src.schemas.metrics import MetricResult

FairnessTarget = Literal["demographic_parity", "equal_opportunity"]


class MitigationRecord(BaseModel):
    """Emitted by every mitigation call; before/after use the same metric."""

    method: str
    parameters: Dict[str, Any] = Field(default_factory=dict)
    before: MetricResult
    after: MetricResult
    changed: int = Field(0, description="rows relabeled, rows resampled or weights changed")
    seed: Optional[int] = None


class ThresholdPair(BaseModel):
    protected_threshold: float = Field(ge=0.0, le=1.0, description="theta_1")
    favored_threshold: float = Field(ge=0.0, le=1.0, description="theta_0")
    target: FairnessTarget
    epsilon: float = Field(ge=0.0)
    achieved_disparity: float
    achieved_accuracy: float
    infeasible: bool = False
