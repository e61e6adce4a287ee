from src.metrics.association import feature_protected_correlation, support_report
from src.metrics.difference import (
    conditional_mean_difference,
    mean_difference,
    normalized_mean_difference,
    unexplained_difference,
)
from src.metrics.propensity import propensity_stratified_difference
from src.metrics.regression import regression_test
from src.metrics.situation import knn_situation_test

__all__ = [
    "conditional_mean_difference",
    "feature_protected_correlation",
    "knn_situation_test",
    "mean_difference",
    "normalized_mean_difference",
    "propensity_stratified_difference",
    "regression_test",
    "support_report",
    "unexplained_difference",
]
