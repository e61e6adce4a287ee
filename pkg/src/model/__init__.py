from src.model.evaluate import evaluate, evaluate_decisions
from src.model.logistic import (
    cost_threshold,
    decide,
    decide_all,
    fit_logistic,
    predict_proba,
    score,
    score_frame,
    train,
)
from src.model.serialize import load_model, model_fingerprint, model_from_json, model_to_json

__all__ = [
    "cost_threshold",
    "decide",
    "decide_all",
    "evaluate",
    "evaluate_decisions",
    "fit_logistic",
    "load_model",
    "model_fingerprint",
    "model_from_json",
    "model_to_json",
    "predict_proba",
    "score",
    "score_frame",
    "train",
]
