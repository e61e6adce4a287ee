"""
Synthetic scenario and feedback-simulation documents.

Each scenario kind plants one commonly cited cause of classifier
discrimination; the ground-truth sidecar records what was planted.
"""

from typing import Dict, List, Literal, Optional, get_args

from pydantic import BaseModel, ConfigDict, Field, model_validator

ScenarioKind = Literal[
    "clean_independent",
    "direct_discrimination",
    "redlining",
    "over_observation",
    "under_representation",
    "low_support",
    "proxy_target",
    "censored_feedback",
]

SCENARIO_KINDS: List[str] = list(get_args(ScenarioKind))


class ScenarioParams(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    gap: float = Field(default=0.3, ge=0.0, le=1.0)
    proxy_strength: float = Field(default=0.9, ge=0.0, le=1.0)
    protected_share: Optional[float] = Field(
        default=None, gt=0.0, lt=1.0, description="defaults to 0.02 for low_support, else 0.5"
    )
    observation_multiplier: float = Field(default=3.0, ge=1.0)
    mix_ratio: float = Field(default=0.5, ge=0.0, le=1.0)
    hire_threshold: float = Field(default=0.5, gt=0.0, lt=1.0)
    retention: float = Field(default=0.4, gt=0.0, le=1.0)


class ScenarioSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: ScenarioKind
    n: int = Field(default=10000, ge=4)
    seed: int = 0
    params: ScenarioParams = Field(default_factory=ScenarioParams)

    def resolved_protected_share(self) -> float:
        if self.params.protected_share is not None:
            return self.params.protected_share
        return 0.02 if self.kind == "low_support" else 0.5


class ScenarioTruth(BaseModel):
    """Ground-truth sidecar: planted parameters and latent values."""

    kind: ScenarioKind
    n_generated: int
    n_rows: int
    seed: int
    params: ScenarioParams
    planted: Dict[str, float] = Field(default_factory=dict)
    designated_test: str
    latent_merit: List[float] = Field(
        default_factory=list, description="hidden true merit per exported row"
    )
    notes: List[str] = Field(default_factory=list)


class FeedbackSimConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    zones: int = Field(ge=1)
    latent_violent_rates: List[float]
    latent_nuisance_rates: List[float]
    patrol_budget: float = Field(gt=0.0)
    rounds: int = Field(ge=1)
    observation: Literal["only_when_patrolled", "always"] = "only_when_patrolled"
    floor: float = Field(default=0.0, ge=0.0, description="minimum patrols per zone")
    initial_allocation: Optional[List[float]] = Field(
        default=None, description="initial patrol shares summing to 1; uniform when omitted"
    )
    smoothing: float = Field(default=1.0, ge=0.0)
    allocation_exponent: float = Field(default=2.0, ge=1.0)
    predictor_mix: float = Field(default=1.0, ge=0.0, le=1.0)
    seed: int = 0

    @model_validator(mode="after")
    def check_shapes(self) -> "FeedbackSimConfig":
        for name in ("latent_violent_rates", "latent_nuisance_rates"):
            rates = getattr(self, name)
            if len(rates) != self.zones:
                raise ValueError(f"{name} needs {self.zones} entries, got {len(rates)}")
            if any(r < 0 for r in rates):
                raise ValueError(f"{name} must be non-negative")
        if self.floor * self.zones > self.patrol_budget * (1 + 1e-12):
            raise ValueError("floor times zones exceeds the patrol budget")
        if self.initial_allocation is not None:
            shares = self.initial_allocation
            if len(shares) != self.zones:
                raise ValueError(f"initial_allocation needs {self.zones} entries")
            if any(x < 0 for x in shares) or abs(sum(shares) - 1.0) > 1e-9:
                raise ValueError("initial_allocation must be non-negative shares summing to 1")
        return self


class FeedbackRound(BaseModel):
    round: int
    allocation: List[float]
    recorded_violent: List[int]
    recorded_nuisance: List[int]
    occurred_nuisance: List[int]
    prediction: List[float]
    share_disparity: float = Field(description="largest minus smallest allocation share")


class FeedbackSeries(BaseModel):
    config: FeedbackSimConfig
    rounds: List[FeedbackRound]

    def shares(self, zone: int) -> List[float]:
        budget = self.config.patrol_budget
        return [r.allocation[zone] / budget for r in self.rounds]
