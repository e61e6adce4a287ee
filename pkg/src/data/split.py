import logging
from typing import Tuple

import numpy as np

from src.core.errors import DegenerateSplitError, InvalidParamError
from src.data.dataset import Dataset

logger = logging.getLogger(__name__)

CELLS = ((0, 0), (0, 1), (1, 0), (1, 1))


def split(d: Dataset, holdout_fraction: float, seed: int = 0) -> Tuple[Dataset, Dataset]:
    """
    Stratified train/holdout split on the (s, y) cells.

    Each non-empty cell contributes floor(count * fraction + 0.5) rows to the
    holdout; the rest go to train. Cells are shuffled in a fixed order from a
    single seeded generator, so the partition is a pure function of the
    dataset and seed.
    """
    if not 0.0 < holdout_fraction < 1.0:
        raise InvalidParamError(f"holdout_fraction must be in (0, 1), got {holdout_fraction}")
    if d.n < 4:
        raise DegenerateSplitError(f"need at least 4 rows to split, got {d.n}")
    d.require_both_groups()

    rng = np.random.default_rng(seed)
    train_parts, holdout_parts = [], []
    for s_val, y_val in CELLS:
        cell = np.flatnonzero((d.s == s_val) & (d.y == y_val))
        if cell.size == 0:
            continue
        n_hold = int(np.floor(cell.size * holdout_fraction + 0.5))
        if n_hold >= cell.size:
            raise DegenerateSplitError(
                f"cell (s={s_val}, y={y_val}) has {cell.size} row(s); "
                f"a holdout share of {holdout_fraction} leaves none for training"
            )
        shuffled = rng.permutation(cell)
        holdout_parts.append(shuffled[:n_hold])
        train_parts.append(shuffled[n_hold:])

    train_idx = np.sort(np.concatenate(train_parts))
    holdout_idx = np.sort(np.concatenate(holdout_parts))
    logger.debug("split n=%d into train=%d holdout=%d", d.n, train_idx.size, holdout_idx.size)
    return d.take(train_idx), d.take(holdout_idx)
