import logging
from typing import Dict, List, Optional, Sequence, Tuple

from src.core.errors import InvalidParamError
from src.data.dataset import Dataset
from src.model.evaluate import evaluate
from src.model.logistic import fit_logistic
from src.schemas.mitigation import MitigationRecord
from src.schemas.model import EvaluationRecord, Hyperparams

logger = logging.getLogger(__name__)


def tune_fairness_weight(
    d_train: Dataset,
    d_val: Dataset,
    eta_grid: Sequence[float],
    max_accuracy_loss: float,
    base: Optional[Hyperparams] = None,
    md_tolerance: float = 0.0,
    threshold: float = 0.5,
) -> Tuple[Hyperparams, MitigationRecord]:
    """
    Train one model per fairness weight and keep those whose validation
    accuracy is within `max_accuracy_loss` of the best. Among them pick the
    smallest |decision mean difference| at `threshold`; values within
    `md_tolerance` of that minimum tie and the smaller weight wins.
    """
    if not eta_grid:
        raise InvalidParamError("eta_grid must not be empty")
    if any(eta < 0 for eta in eta_grid):
        raise InvalidParamError("fairness weights must be >= 0")
    base = base or Hyperparams()
    grid = sorted(set(float(eta) for eta in eta_grid))

    evaluations: Dict[float, EvaluationRecord] = {}
    for eta in grid:
        model = fit_logistic(d_train, base.model_copy(update={"fairness": eta}))
        evaluations[eta] = evaluate(model, d_val, threshold)
        logger.debug(
            "eta=%g: accuracy=%.4f decision md=%.4f",
            eta,
            evaluations[eta].accuracy,
            evaluations[eta].mean_difference.value,
        )

    def abs_md(eta: float) -> float:
        return abs(evaluations[eta].mean_difference.value or 0.0)

    best_accuracy = max(r.accuracy for r in evaluations.values())
    eligible: List[float] = [
        eta
        for eta in grid
        if evaluations[eta].accuracy >= best_accuracy - max_accuracy_loss - 1e-12
    ]
    lowest = min(abs_md(eta) for eta in eligible)
    chosen = min(eta for eta in eligible if abs_md(eta) <= lowest + md_tolerance)

    record = MitigationRecord(
        method="in:tune",
        parameters={
            "eta_grid": grid,
            "max_accuracy_loss": max_accuracy_loss,
            "md_tolerance": md_tolerance,
            "threshold": threshold,
            "chosen_eta": chosen,
            "accuracy": {str(eta): evaluations[eta].accuracy for eta in grid},
            "abs_decision_md": {str(eta): abs_md(eta) for eta in grid},
        },
        before=evaluations[grid[0]].mean_difference,
        after=evaluations[chosen].mean_difference,
        changed=0,
    )
    logger.info("selected fairness weight eta=%g from %d candidates", chosen, len(grid))
    return base.model_copy(update={"fairness": chosen}), record
