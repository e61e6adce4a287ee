"""
Pydantic models for the logistic learner.

These models are used for:
- training hyperparameters (fairness weight, misclassification costs)
- the trained model document, serialized as versioned JSON
- evaluation records
"""

from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

from src.schemas.metrics import MetricResult

MODEL_FORMAT_VERSION = 1


class Hyperparams(BaseModel):
    model_config = ConfigDict(frozen=True)

    l2: float = Field(default=1e-4, ge=0.0, description="L2 penalty lambda")
    fairness: float = Field(default=0.0, ge=0.0, description="Fairness penalty weight eta")
    cost_fp: float = Field(default=1.0, gt=0.0)
    cost_fn: float = Field(default=1.0, gt=0.0)
    include_protected: bool = False
    learning_rate: float = Field(default=0.1, gt=0.0)
    max_iters: int = Field(default=2000, ge=1)
    tolerance: float = Field(default=1e-8, gt=0.0)
    seed: int = 0


class FeatureEncoding(BaseModel):
    """
    Maps raw rows to the encoded design vector.

    Numeric columns are standardized with training statistics, categorical
    columns are one-hot encoded with the first level dropped, and the
    protected indicator is appended last when `include_protected` is set.
    """

    model_config = ConfigDict(frozen=True)

    numeric: Dict[str, Tuple[float, float]] = Field(
        default_factory=dict, description="column -> (mean, std)"
    )
    categorical: Dict[str, List[str]] = Field(
        default_factory=dict, description="column -> sorted levels, first is the reference"
    )
    order: List[str] = Field(default_factory=list, description="raw feature columns in order")
    include_protected: bool = False
    protected_column: str
    protected_value: str

    @property
    def encoded_names(self) -> List[str]:
        names: List[str] = []
        for column in self.order:
            if column in self.numeric:
                names.append(column)
            else:
                names.extend(f"{column}={level}" for level in self.categorical[column][1:])
        if self.include_protected:
            names.append(f"{self.protected_column}={self.protected_value}")
        return names


class LossComponents(BaseModel):
    """Unscaled parts of the final loss: total = nll + l2_weight*l2 + eta*fairness."""

    nll: float
    l2: float
    fairness: float
    total: float


class LogisticModel(BaseModel):
    model_config = ConfigDict(frozen=True)

    version: int = MODEL_FORMAT_VERSION
    encoding: FeatureEncoding
    weights: List[float]
    bias: float
    hyperparams: Hyperparams
    converged: bool = False
    iterations: int = 0
    loss_components: Optional[LossComponents] = None


class GroupRates(BaseModel):
    """Per-group decision rates; a rate is None when its denominator is empty."""

    tpr: Optional[float] = None
    fpr: Optional[float] = None
    acceptance_rate: Optional[float] = None
    size: int = 0


class ConfusionCounts(BaseModel):
    tp: float = 0.0
    fp: float = 0.0
    tn: float = 0.0
    fn: float = 0.0


class EvaluationRecord(BaseModel):
    threshold: float
    accuracy: float
    confusion: ConfusionCounts
    precision: Optional[float] = None
    recall: Optional[float] = None
    expected_cost: float = Field(
        description="Weighted mean of cost_fp*FP + cost_fn*FN under the model's hyperparams"
    )
    protected: GroupRates
    favored: GroupRates
    mean_difference: MetricResult
    normalized_mean_difference: MetricResult
    caveats: List[str] = Field(default_factory=list)
