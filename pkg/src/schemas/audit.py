"""
Audit configuration and report documents.

Thresholds are configuration, never hard-coded: an omitted threshold turns
the corresponding test into `skipped` with a caveat.
"""

from typing import Any, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from src.schemas.dataset import Stratification
from src.schemas.metrics import MetricResult

AUDIT_CONFIG_VERSION = 1
AUDIT_REPORT_VERSION = 1

Status = Literal["pass", "warn", "fail", "skipped"]
Verdict = Literal["pass", "warn", "fail"]
Direction = Literal["max", "min"]


class KnnConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    k: int = Field(ge=1)
    t: float = Field(ge=0.0, le=1.0)
    max_flagged: float = Field(ge=0.0)


class SubTarget(BaseModel):
    """A separately measurable event rolled up into the target variable."""

    model_config = ConfigDict(frozen=True)

    column: str
    positive: str = "1"


class Thresholds(BaseModel):
    model_config = ConfigDict(frozen=True)

    max_abs_data_md: Optional[float] = Field(default=None, ge=0.0)
    max_abs_normalized_md: Optional[float] = Field(default=None, ge=0.0)
    max_abs_unexplained: Optional[float] = Field(default=None, ge=0.0)
    max_feature_correlation: Optional[float] = Field(default=None, ge=0.0)
    min_group_support: Optional[float] = Field(default=None, ge=0.0)
    min_conjunction_support: Optional[float] = Field(default=None, ge=0.0)
    max_abs_causal_md: Optional[float] = Field(default=None, ge=0.0)
    max_abs_decision_md: Optional[float] = Field(default=None, ge=0.0)
    max_group_tpr_gap: Optional[float] = Field(default=None, ge=0.0)
    max_group_fpr_gap: Optional[float] = Field(default=None, ge=0.0)
    knn: Optional[KnnConfig] = None


class AuditConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    version: int = AUDIT_CONFIG_VERSION
    thresholds: Thresholds = Field(default_factory=Thresholds)
    stratification: Optional[Stratification] = None
    sub_target_columns: List[SubTarget] = Field(default_factory=list)
    conjunction_depth: int = Field(default=1, ge=0)
    warn_fraction: float = Field(default=0.8, gt=0.0, le=1.0)

    @field_validator("sub_target_columns", mode="before")
    @classmethod
    def accept_bare_names(cls, value: Any) -> Any:
        if isinstance(value, list):
            return [{"column": item} if isinstance(item, str) else item for item in value]
        return value

    @field_validator("version")
    @classmethod
    def known_version(cls, value: int) -> int:
        if value != AUDIT_CONFIG_VERSION:
            raise ValueError(f"unsupported audit config version {value}")
        return value


class AuditCheck(BaseModel):
    """One audit unit test: a metric compared with its threshold."""

    id: str
    name: str
    metric: MetricResult
    threshold: Optional[float] = None
    direction: Direction = "max"
    signed: bool = False
    status: Status


class ReportMetadata(BaseModel):
    dataset_fingerprint: str
    config_hash: str
    tool_version: str
    timestamp: Optional[str] = None
    seed: int = 0
    stage: Literal["data", "model"]
    model_fingerprint: Optional[str] = None
    threshold: Optional[float] = None


class AuditReport(BaseModel):
    version: int = AUDIT_REPORT_VERSION
    tests: List[AuditCheck]
    verdict: Verdict
    metadata: ReportMetadata
    caveats: List[str] = Field(default_factory=list)
