from src.counterfactual.flip import DecisionFn, flip_audit, model_decision_fn, row_decision_fn

__all__ = ["DecisionFn", "flip_audit", "model_decision_fn", "row_decision_fn"]
