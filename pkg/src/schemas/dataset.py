"""
Column declarations and stratification specs.

The schema document is JSON with keys protected{column,value},
label{column,positive}, features[{name,kind}] and optional decision{column}.
"""

from typing import Any, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

FeatureKind = Literal["numeric", "categorical"]


def _as_literal(value: Any) -> Any:
    # JSON may carry codes as numbers or booleans; CSV cells are always text
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, float)):
        return str(value)
    return value


class ProtectedSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    column: str
    value: str = Field(..., description="Literal designating the protected group S=1")

    @field_validator("value", mode="before")
    @classmethod
    def coerce_literal(cls, value: Any) -> Any:
        return _as_literal(value)


class LabelSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    column: str
    positive: str = Field(..., description="Literal designating Y=1")

    @field_validator("positive", mode="before")
    @classmethod
    def coerce_literal(cls, value: Any) -> Any:
        return _as_literal(value)


class DecisionSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    column: str
    positive: str = "1"

    @field_validator("positive", mode="before")
    @classmethod
    def coerce_literal(cls, value: Any) -> Any:
        return _as_literal(value)


class FeatureSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str
    kind: FeatureKind


class Schema(BaseModel):
    model_config = ConfigDict(frozen=True)

    protected: ProtectedSpec
    label: LabelSpec
    features: List[FeatureSpec] = Field(default_factory=list)
    decision: Optional[DecisionSpec] = None

    @model_validator(mode="after")
    def check_columns(self) -> "Schema":
        names = [f.name for f in self.features]
        if self.protected.column in names:
            raise ValueError("protected column must not be listed among features")
        if self.label.column in names:
            raise ValueError("label column must not be listed among features")
        declared = [self.protected.column, self.label.column, *names]
        if self.decision is not None:
            declared.append(self.decision.column)
        duplicates = sorted({c for c in declared if declared.count(c) > 1})
        if duplicates:
            raise ValueError(f"duplicate column names: {duplicates}")
        return self

    @property
    def protected_column(self) -> str:
        return self.protected.column

    @property
    def protected_value(self) -> str:
        return self.protected.value

    @property
    def label_column(self) -> str:
        return self.label.column

    @property
    def positive_label(self) -> str:
        return self.label.positive

    @property
    def decision_column(self) -> Optional[str]:
        return self.decision.column if self.decision else None

    @property
    def feature_names(self) -> List[str]:
        return [f.name for f in self.features]

    def kind_of(self, column: str) -> Optional[FeatureKind]:
        for f in self.features:
            if f.name == column:
                return f.kind
        return None

    def numeric_features(self) -> List[str]:
        return [f.name for f in self.features if f.kind == "numeric"]

    def categorical_features(self) -> List[str]:
        return [f.name for f in self.features if f.kind == "categorical"]


class Stratification(BaseModel):
    """Either exact grouping on column values or quantile bins of numeric columns."""

    model_config = ConfigDict(frozen=True)

    strategy: Literal["exact", "quantile"]
    columns: List[str] = Field(..., min_length=1)
    bins: Optional[int] = Field(default=None, ge=2)

    @model_validator(mode="after")
    def check_bins(self) -> "Stratification":
        if self.strategy == "quantile" and self.bins is None:
            raise ValueError("quantile stratification needs a bin count >= 2")
        return self

    @classmethod
    def exact(cls, *columns: str) -> "Stratification":
        return cls(strategy="exact", columns=list(columns))

    @classmethod
    def quantile(cls, *columns: str, bins: int) -> "Stratification":
        return cls(strategy="quantile", columns=list(columns), bins=bins)
