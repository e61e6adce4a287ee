"""
Staged audit: data-stage unit tests (D1-D3) and model-stage pre-deployment
tests (M1-M4), each compared with a configured threshold.

A metric that raises a domain error becomes a `skipped` test that records
the error; an audit always produces a report.
"""

import hashlib
import json
import logging
from datetime import datetime, timezone
from typing import Callable, List, Optional

import numpy as np

from src import __version__
from src.audit.verdict import classify, overall_verdict
from src.core.config import settings
from src.core.errors import FairnessError
from src.core.tracing import traced
from src.counterfactual.flip import flip_audit, model_decision_fn
from src.data.dataset import Dataset
from src.metrics.association import feature_protected_correlation, support_report
from src.metrics.difference import (
    conditional_mean_difference,
    mean_difference,
    normalized_mean_difference,
    unexplained_difference,
)
from src.metrics.situation import knn_situation_test
from src.model.evaluate import evaluate_decisions
from src.model.logistic import decide_all, score
from src.model.serialize import model_fingerprint
from src.schemas.audit import (
    AuditCheck,
    AuditConfig,
    AuditReport,
    Direction,
    ReportMetadata,
)
from src.schemas.metrics import MetricResult
from src.schemas.model import LogisticModel

logger = logging.getLogger(__name__)

UNOBSERVABLES_NOTE = (
    "attributes that are not recorded (for example interview impressions or true merit) "
    "cannot be controlled for; differences attributed to them remain untested"
)


def config_hash(cfg: AuditConfig) -> str:
    payload = json.dumps(cfg.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def report_timestamp() -> Optional[str]:
    if settings.source_date_epoch is None:
        return None
    moment = datetime.fromtimestamp(settings.source_date_epoch, tz=timezone.utc)
    return moment.strftime("%Y-%m-%dT%H:%M:%SZ")


def _raising(exc: FairnessError) -> Callable[[], MetricResult]:
    def compute() -> MetricResult:
        raise exc

    return compute


def _skipped_metric(name: str, reason: str) -> MetricResult:
    return MetricResult(name=name, value=None, caveats=[reason])


def run_check(
    test_id: str,
    name: str,
    compute: Callable[[], MetricResult],
    threshold: Optional[float],
    warn_fraction: float,
    direction: Direction = "max",
    signed: bool = False,
) -> AuditCheck:
    """Compute one metric and grade it; domain errors become skipped tests."""
    try:
        metric = compute()
    except FairnessError as exc:
        logger.info("test %s skipped: %s", test_id, exc)
        metric = _skipped_metric(name, f"{type(exc).__name__}: {exc}")
    if threshold is None and metric.value is not None:
        metric = metric.model_copy(
            update={"caveats": [*metric.caveats, "no threshold configured; test disabled"]}
        )
    status = classify(metric.value, threshold, direction, warn_fraction)
    return AuditCheck(
        id=test_id,
        name=name,
        metric=metric,
        threshold=threshold,
        direction=direction,
        signed=signed,
        status=status,
    )


def _difference_checks(
    d: Dataset, outcome: np.ndarray | str, prefix: str, cfg: AuditConfig
) -> List[AuditCheck]:
    t = cfg.thresholds
    wf = cfg.warn_fraction
    spec = cfg.stratification

    def stratified(fn: Callable[..., MetricResult], name: str) -> Callable[[], MetricResult]:
        def compute() -> MetricResult:
            if spec is None:
                return _skipped_metric(name, "no stratification configured")
            return fn(d, outcome, spec)

        return compute

    return [
        run_check(
            f"{prefix}.mean_difference",
            "mean_difference",
            lambda: mean_difference(d, outcome),
            t.max_abs_data_md,
            wf,
            signed=True,
        ),
        run_check(
            f"{prefix}.normalized_mean_difference",
            "normalized_mean_difference",
            lambda: normalized_mean_difference(d, outcome),
            t.max_abs_normalized_md,
            wf,
            signed=True,
        ),
        run_check(
            f"{prefix}.conditional_mean_difference",
            "conditional_mean_difference",
            stratified(conditional_mean_difference, "conditional_mean_difference"),
            t.max_abs_data_md,
            wf,
            signed=True,
        ),
        run_check(
            f"{prefix}.unexplained_difference",
            "unexplained_difference",
            stratified(unexplained_difference, "unexplained_difference"),
            t.max_abs_unexplained,
            wf,
            signed=True,
        ),
    ]


def _conjunction_metric(d: Dataset, depth: int) -> MetricResult:
    support = support_report(d, depth)
    share = support.components.get("min_conjunction_share")
    caveats = list(support.caveats)
    if share is None:
        caveats.append("conjunction depth 0: no conjunction cells")
    return MetricResult(
        name="conjunction_support",
        value=share,
        components=support.components,
        group_sizes=support.group_sizes,
        caveats=caveats,
    )


def _metadata(d: Dataset, cfg: AuditConfig, seed: int, **extra: object) -> ReportMetadata:
    return ReportMetadata(
        dataset_fingerprint=d.fingerprint(),
        config_hash=config_hash(cfg),
        tool_version=__version__,
        timestamp=report_timestamp(),
        seed=seed,
        **extra,  # type: ignore[arg-type]
    )


def _report(tests: List[AuditCheck], metadata: ReportMetadata, caveats: List[str]) -> AuditReport:
    verdict = overall_verdict(t.status for t in tests)
    counts = {s: sum(1 for t in tests if t.status == s) for s in ("pass", "warn", "fail")}
    logger.info("audit %s: verdict=%s %s", metadata.stage, verdict, counts)
    return AuditReport(tests=tests, verdict=verdict, metadata=metadata, caveats=caveats)


@traced("audit_data")
def audit_data(d: Dataset, cfg: AuditConfig, seed: int = 0) -> AuditReport:
    """
    D1: difference metrics on the label and on every sub-target column.
    D2: association of each feature with the protected attribute.
    D3: group and conjunction support.
    """
    t = cfg.thresholds
    wf = cfg.warn_fraction
    tests = _difference_checks(d, "label", "D1.label", cfg)
    for sub in cfg.sub_target_columns:
        prefix = f"D1.sub[{sub.column}]"
        try:
            outcome = d.binary_extra(sub.column, sub.positive)
        except FairnessError as exc:
            tests.append(
                run_check(
                    f"{prefix}.mean_difference",
                    "mean_difference",
                    _raising(exc),
                    t.max_abs_data_md,
                    wf,
                    signed=True,
                )
            )
            continue
        tests.extend(_difference_checks(d, outcome, prefix, cfg))

    correlations = feature_protected_correlation(d)
    for feature, result in correlations.items():
        tests.append(
            run_check(
                f"D2.{feature}",
                "feature_protected_correlation",
                lambda result=result: result,
                t.max_feature_correlation,
                wf,
            )
        )

    # group shares do not depend on conjunctions; only D3.conjunction_support
    # skips when there are fewer categorical features than the depth
    group_depth = min(cfg.conjunction_depth, len(d.schema.categorical_features()))
    tests.append(
        run_check(
            "D3.group_support",
            "support_report",
            lambda: support_report(d, group_depth),
            t.min_group_support,
            wf,
            direction="min",
        )
    )
    tests.append(
        run_check(
            "D3.conjunction_support",
            "conjunction_support",
            lambda: _conjunction_metric(d, cfg.conjunction_depth),
            t.min_conjunction_support,
            wf,
            direction="min",
        )
    )
    return _report(tests, _metadata(d, cfg, seed, stage="data"), [UNOBSERVABLES_NOTE])


def _rate_gap(d: Dataset, a: np.ndarray, threshold: float, rate: str) -> MetricResult:
    record = evaluate_decisions(d, a, threshold)
    protected = getattr(record.protected, rate)
    favored = getattr(record.favored, rate)
    if protected is None or favored is None:
        raise FairnessError(f"{rate} undefined for a group: " + "; ".join(record.caveats))
    return MetricResult(
        name=f"{rate}_gap",
        value=protected - favored,
        components={"protected": protected, "favored": favored},
        group_sizes=d.group_sizes,
    )


def _flip_metric(m: LogisticModel, d: Dataset, threshold: float, cfg: AuditConfig) -> MetricResult:
    result = flip_audit(model_decision_fn(m), d, threshold, cfg.stratification)
    components = {
        "causal_mean_difference_probabilities": result.causal_mean_difference_probabilities,
        "rows_affected": float(result.rows_affected),
        "n": float(result.n),
    }
    for label, value in (result.per_partition or {}).items():
        components[f"partition[{label}]"] = value
    caveats = []
    if not m.encoding.include_protected:
        caveats.append("model does not take the protected attribute as input")
    return MetricResult(
        name="causal_mean_difference",
        value=result.causal_mean_difference_decisions,
        components=components,
        group_sizes=d.group_sizes,
        caveats=caveats,
    )


@traced("audit_model")
def audit_model(
    m: LogisticModel, holdout: Dataset, threshold: float, cfg: AuditConfig, seed: int = 0
) -> AuditReport:
    """
    M1: counterfactual flip. M2: decision-level differences. M3: TPR and FPR
    gaps. M4: situation testing on decisions.
    """
    holdout.require_both_groups()
    t = cfg.thresholds
    wf = cfg.warn_fraction
    a = decide_all(score(m, holdout), threshold)

    def situation() -> MetricResult:
        if t.knn is None:
            return _skipped_metric("knn_situation_test", "no knn configuration")
        return knn_situation_test(holdout, a, t.knn.k, t.knn.t)

    tests = [
        run_check(
            "M1.flip",
            "causal_mean_difference",
            lambda: _flip_metric(m, holdout, threshold, cfg),
            t.max_abs_causal_md,
            wf,
            signed=True,
        ),
        run_check(
            "M2.mean_difference",
            "mean_difference",
            lambda: mean_difference(holdout, a),
            t.max_abs_decision_md,
            wf,
            signed=True,
        ),
        run_check(
            "M2.normalized_mean_difference",
            "normalized_mean_difference",
            lambda: normalized_mean_difference(holdout, a),
            t.max_abs_decision_md,
            wf,
            signed=True,
        ),
        run_check(
            "M3.tpr_gap",
            "tpr_gap",
            lambda: _rate_gap(holdout, a, threshold, "tpr"),
            t.max_group_tpr_gap,
            wf,
            signed=True,
        ),
        run_check(
            "M3.fpr_gap",
            "fpr_gap",
            lambda: _rate_gap(holdout, a, threshold, "fpr"),
            t.max_group_fpr_gap,
            wf,
            signed=True,
        ),
        run_check(
            "M4.situation_testing",
            "knn_situation_test",
            situation,
            t.knn.max_flagged if t.knn else None,
            wf,
        ),
    ]
    metadata = _metadata(
        holdout,
        cfg,
        seed,
        stage="model",
        model_fingerprint=model_fingerprint(m),
        threshold=threshold,
    )
    return _report(tests, metadata, [UNOBSERVABLES_NOTE])
