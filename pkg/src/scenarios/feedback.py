"""
Predictive-patrol feedback loop.

Each round the zones receive patrols according to the current prediction;
violent incidents are always reported, nuisance incidents only enter the
record in proportion to the patrol share a zone received (or always, with
unbiased observation). The prediction is the cumulative recorded count, so
over-patrolled zones record more and attract still more patrols.
"""

import logging
from pathlib import Path
from typing import List, Union

import numpy as np
import pandas as pd

from src.core.errors import InvalidParamError
from src.core.files import write_bytes_atomic
from src.core.tracing import traced
from src.schemas.scenarios import FeedbackRound, FeedbackSeries, FeedbackSimConfig

logger = logging.getLogger(__name__)


def allocate(prediction: np.ndarray, cfg: FeedbackSimConfig) -> np.ndarray:
    """floor + (budget - zones * floor) * prediction^gamma / sum(prediction^gamma)."""
    weights = np.power(np.clip(prediction, 0.0, None), cfg.allocation_exponent)
    total = weights.sum()
    if total <= 0.0 or not np.isfinite(total):
        shares = np.full(cfg.zones, 1.0 / cfg.zones)
    else:
        shares = weights / total
    free = max(0.0, cfg.patrol_budget - cfg.zones * cfg.floor)
    return cfg.floor + free * shares


def initial_allocation(cfg: FeedbackSimConfig) -> np.ndarray:
    if cfg.initial_allocation is None:
        shares = np.full(cfg.zones, 1.0 / cfg.zones)
    else:
        shares = np.asarray(cfg.initial_allocation, dtype=float)
    free = max(0.0, cfg.patrol_budget - cfg.zones * cfg.floor)
    return cfg.floor + free * shares


def _disparity(allocation: np.ndarray, budget: float) -> float:
    shares = allocation / budget
    return float(shares.max() - shares.min())


@traced("run_feedback_sim")
def run_feedback_sim(cfg: FeedbackSimConfig) -> FeedbackSeries:
    rng = np.random.default_rng(cfg.seed)
    violent_rates = np.asarray(cfg.latent_violent_rates, dtype=float)
    nuisance_rates = np.asarray(cfg.latent_nuisance_rates, dtype=float)
    cumulative = np.zeros(cfg.zones)
    allocation = initial_allocation(cfg)
    rounds: List[FeedbackRound] = []

    for r in range(1, cfg.rounds + 1):
        share = np.clip(allocation / cfg.patrol_budget, 0.0, 1.0)
        violent = rng.poisson(violent_rates)
        nuisance = rng.poisson(nuisance_rates)
        if cfg.observation == "only_when_patrolled":
            recorded_nuisance = rng.binomial(nuisance, share)
        else:
            recorded_nuisance = nuisance
        cumulative += violent + cfg.predictor_mix * recorded_nuisance
        prediction = cumulative + cfg.smoothing
        rounds.append(
            FeedbackRound(
                round=r,
                allocation=allocation.tolist(),
                recorded_violent=[int(v) for v in violent],
                recorded_nuisance=[int(v) for v in recorded_nuisance],
                occurred_nuisance=[int(v) for v in nuisance],
                prediction=prediction.tolist(),
                share_disparity=_disparity(allocation, cfg.patrol_budget),
            )
        )
        allocation = allocate(prediction, cfg)

    logger.info(
        "feedback simulation: %d rounds, final shares %s",
        cfg.rounds,
        np.round(allocation / cfg.patrol_budget, 4).tolist(),
    )
    return FeedbackSeries(config=cfg, rounds=rounds)


def expected_shares(cfg: FeedbackSimConfig) -> List[List[float]]:
    """
    Deterministic version of the loop with every count replaced by its
    expectation. Returns the allocation shares used in each round.
    """
    violent_rates = np.asarray(cfg.latent_violent_rates, dtype=float)
    nuisance_rates = np.asarray(cfg.latent_nuisance_rates, dtype=float)
    cumulative = np.zeros(cfg.zones)
    allocation = initial_allocation(cfg)
    path: List[List[float]] = []
    for _ in range(cfg.rounds):
        share = np.clip(allocation / cfg.patrol_budget, 0.0, 1.0)
        path.append(share.tolist())
        if cfg.observation == "only_when_patrolled":
            observed = nuisance_rates * share
        else:
            observed = nuisance_rates
        cumulative += violent_rates + cfg.predictor_mix * observed
        allocation = allocate(cumulative + cfg.smoothing, cfg)
    return path


def closed_form_two_zone(cfg: FeedbackSimConfig) -> List[float]:
    """Expected share of zone 0 per round for a two-zone configuration."""
    if cfg.zones != 2:
        raise InvalidParamError(f"closed form covers two zones, got {cfg.zones}")
    return [shares[0] for shares in expected_shares(cfg)]


def series_to_frame(series: FeedbackSeries) -> pd.DataFrame:
    """Long table with one row per round and zone."""
    budget = series.config.patrol_budget
    records = []
    for r in series.rounds:
        for zone in range(series.config.zones):
            records.append(
                {
                    "round": r.round,
                    "zone": zone,
                    "allocation": r.allocation[zone],
                    "share": r.allocation[zone] / budget,
                    "recorded_violent": r.recorded_violent[zone],
                    "recorded_nuisance": r.recorded_nuisance[zone],
                    "occurred_nuisance": r.occurred_nuisance[zone],
                    "prediction": r.prediction[zone],
                    "share_disparity": r.share_disparity,
                }
            )
    return pd.DataFrame.from_records(records)


def series_csv(series: FeedbackSeries) -> bytes:
    return series_to_frame(series).to_csv(index=False, lineterminator="\n").encode("utf-8")


def write_series_csv(series: FeedbackSeries, path: Union[str, Path]) -> Path:
    return write_bytes_atomic(path, series_csv(series))
