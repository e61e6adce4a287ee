from typing import Dict, Optional

from pydantic import BaseModel, Field


class FlipAuditResult(BaseModel):
    """Outcome of scoring every row twice, once with S forced to 1 and once to 0."""

    causal_mean_difference_decisions: float = Field(ge=-1.0, le=1.0)
    causal_mean_difference_probabilities: float
    per_partition: Optional[Dict[str, float]] = None
    partition_weights: Optional[Dict[str, float]] = None
    rows_affected: int = 0
    n: int = 0
    threshold: float
