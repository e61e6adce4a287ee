"""
Synthetic datasets that each plant one cause of classifier discrimination.

Every kind draws a hidden merit score m ~ N(0, 1) per applicant. Merit is
never exported as a feature; it only appears in the ground-truth sidecar.
Observable features are a noisy skill reading of merit, years of experience
and a region, all independent of the protected group unless the kind says
otherwise. The protected group is `group == "B"`, the favourable outcome is
`outcome == "1"`.
"""

import logging
from typing import Dict, List, Tuple

import numpy as np
import pandas as pd
from scipy.stats import norm

from src.core.errors import EmptyGroupError, InvalidParamError
from src.data.dataset import Dataset
from src.data.io import from_frame
from src.schemas.audit import AuditConfig, KnnConfig, Thresholds
from src.schemas.dataset import FeatureSpec, LabelSpec, ProtectedSpec, Schema, Stratification
from src.schemas.scenarios import ScenarioSpec, ScenarioTruth

logger = logging.getLogger(__name__)

GROUP_COLUMN = "group"
PROTECTED_LEVEL = "B"
FAVORED_LEVEL = "A"
LABEL_COLUMN = "outcome"
REGIONS = ("east", "north", "south", "west")
SUB_TARGETS = ("no_violent", "no_nuisance")

DESIGNATED_TESTS = {
    "clean_independent": "none",
    "direct_discrimination": "D1.label.mean_difference",
    "redlining": "D2.district",
    "over_observation": "D1.label.mean_difference",
    "under_representation": "D1.label.mean_difference",
    "low_support": "D3.group_support",
    "proxy_target": "D1.sub[no_nuisance].mean_difference",
    "censored_feedback": "none",
}

# illustrative limits for demos and tests, not legal standards
DEFAULT_THRESHOLDS = Thresholds(
    max_abs_data_md=0.05,
    max_abs_normalized_md=0.1,
    max_abs_unexplained=0.05,
    max_feature_correlation=0.1,
    min_group_support=0.05,
    min_conjunction_support=0.01,
    max_abs_causal_md=0.02,
    max_abs_decision_md=0.05,
    max_group_tpr_gap=0.1,
    max_group_fpr_gap=0.1,
    knn=KnnConfig(k=10, t=0.3, max_flagged=0.1),
)


def scenario_schema(kind: str) -> Schema:
    features = [
        FeatureSpec(name="skill", kind="numeric"),
        FeatureSpec(name="experience", kind="numeric"),
        FeatureSpec(name="region", kind="categorical"),
    ]
    if kind == "redlining":
        features.append(FeatureSpec(name="district", kind="categorical"))
    return Schema(
        protected=ProtectedSpec(column=GROUP_COLUMN, value=PROTECTED_LEVEL),
        label=LabelSpec(column=LABEL_COLUMN, positive="1"),
        features=features,
    )


def scenario_audit_config(kind: str) -> AuditConfig:
    """Default audit configuration used to check that each planted cause is detected."""
    if kind == "redlining":
        stratification = Stratification.exact("district")
    else:
        stratification = Stratification.quantile("skill", bins=4)
    return AuditConfig(
        thresholds=DEFAULT_THRESHOLDS,
        stratification=stratification,
        sub_target_columns=list(SUB_TARGETS) if kind == "proxy_target" else [],
        conjunction_depth=1,
    )


def _base_rate(merit: np.ndarray) -> np.ndarray:
    return 0.3 + 0.5 * norm.cdf(merit)


def _common(rng: np.random.Generator, n: int, share: float) -> Dict[str, np.ndarray]:
    s = (rng.random(n) < share).astype(np.int8)
    merit = rng.standard_normal(n)
    return {
        "s": s,
        "merit": merit,
        "skill": np.round(merit + 0.5 * rng.standard_normal(n), 4),
        "experience": np.round(np.clip(rng.normal(5.0, 2.0, n), 0.0, None), 1),
        "region": np.asarray(REGIONS)[rng.integers(0, len(REGIONS), n)],
    }


def generate(spec: ScenarioSpec) -> Tuple[Dataset, ScenarioTruth]:
    """Build the scenario dataset and its ground-truth sidecar; pure in spec and seed."""
    rng = np.random.default_rng(spec.seed)
    p = spec.params
    n = spec.n
    share = spec.resolved_protected_share()
    cols = _common(rng, n, share)
    s, merit = cols["s"], cols["merit"]
    base = _base_rate(merit)
    planted: Dict[str, float] = {"protected_share": share}
    notes: List[str] = []
    extra: Dict[str, np.ndarray] = {}
    keep = np.ones(n, dtype=bool)
    kind = spec.kind

    if kind in ("clean_independent", "low_support"):
        y = rng.random(n) < base
    elif kind == "direct_discrimination":
        y = rng.random(n) < np.clip(base - p.gap * s, 0.0, 1.0)
        planted["gap"] = p.gap
    elif kind == "redlining":
        follows = rng.random(n) < p.proxy_strength
        district = np.where(follows, s, rng.integers(0, 2, n))
        extra["district"] = np.where(district == 1, "d1", "d0")
        y = rng.random(n) < np.clip(base - p.gap * district, 0.0, 1.0)
        planted.update({"gap": p.gap, "proxy_strength": p.proxy_strength})
        notes.append("the label depends on district only; group acts through district")
    elif kind == "over_observation":
        incident = rng.random(n) < 1.0 - norm.cdf(merit)
        base_record = 0.3
        record = np.where(s == 1, min(1.0, base_record * p.observation_multiplier), base_record)
        y = ~(incident & (rng.random(n) < record))
        planted.update(
            {
                "record_probability_favored": base_record,
                "record_probability_protected": min(1.0, base_record * p.observation_multiplier),
            }
        )
        notes.append("outcome 1 means no incident was recorded; incidents are equally likely")
    elif kind == "under_representation":
        y = rng.random(n) < base
        keep = ~((s == 1) & y) | (rng.random(n) < p.retention)
        planted["retention"] = p.retention
        notes.append("protected rows with a favourable outcome were dropped at random")
    elif kind == "proxy_target":
        violent = rng.random(n) < 0.2
        nuisance = rng.random(n) < 0.2 + 0.4 * s
        use_nuisance = rng.random(n) < p.mix_ratio
        extra["no_violent"] = np.where(violent, "0", "1")
        extra["no_nuisance"] = np.where(nuisance, "0", "1")
        y = np.where(use_nuisance, ~nuisance, ~violent)
        planted.update({"mix_ratio": p.mix_ratio, "nuisance_gap": 0.4})
    elif kind == "censored_feedback":
        y = rng.random(n) < base
        screen = norm.cdf(cols["skill"] - 2.0 * p.gap * s)
        keep = screen >= p.hire_threshold
        planted.update({"hire_threshold": p.hire_threshold, "screening_gap": 2.0 * p.gap})
        for value, name in ((1, "protected"), (0, "favored")):
            out = (~keep) & (s == value)
            planted[f"screened_out_{name}"] = float(out.sum())
            planted[f"screened_out_true_rate_{name}"] = float(y[out].mean()) if out.any() else 0.0
        notes.append("only hired applicants have an observed outcome; recall is unobservable")
    else:  # pragma: no cover - guarded by the ScenarioKind literal
        raise InvalidParamError(f"unknown scenario kind '{kind}'")

    frame = pd.DataFrame(
        {
            GROUP_COLUMN: np.where(s == 1, PROTECTED_LEVEL, FAVORED_LEVEL),
            LABEL_COLUMN: np.where(y, "1", "0"),
            "skill": cols["skill"],
            "experience": cols["experience"],
            "region": cols["region"],
            **extra,
        }
    )
    frame = frame[keep].reset_index(drop=True)
    try:
        dataset = from_frame(frame, scenario_schema(kind))
    except EmptyGroupError as exc:
        raise InvalidParamError(f"scenario {kind} with n={n} left a group empty: {exc}") from exc

    truth = ScenarioTruth(
        kind=kind,
        n_generated=n,
        n_rows=dataset.n,
        seed=spec.seed,
        params=p,
        planted=planted,
        designated_test=DESIGNATED_TESTS[kind],
        latent_merit=[float(v) for v in merit[keep]],
        notes=notes,
    )
    logger.debug("generated %s: %d of %d rows kept", kind, dataset.n, n)
    return dataset, truth
