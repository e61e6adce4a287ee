from src.mitigate.postprocess import apply_group_thresholds, group_thresholds
from src.mitigate.preprocess import massage, reweight, resample
from src.mitigate.tuning import tune_fairness_weight

__all__ = [
    "apply_group_thresholds",
    "group_thresholds",
    "massage",
    "resample",
    "reweight",
    "tune_fairness_weight",
]
