"""Rank the objects of a grade table by aggregating their grades across parameters."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .core_fuzzy import FuzzySoftError
from .soft_algebra import FuzzySoftSet

LOGGER = logging.getLogger(__name__)

MAX_MIN = "max-min"
WEIGHTED_SUM = "weighted-sum"
STRATEGIES = (MAX_MIN, WEIGHTED_SUM)
TIE_BREAK = "label order"


class WeightCountMismatch(FuzzySoftError):
    """Raised when weighted-sum weights do not match the parameter count."""


@dataclass(frozen=True)
class RankedObject:
    rank: int
    label: str
    score: float


def aggregate(f: FuzzySoftSet, strategy: str = MAX_MIN, weights: Optional[Sequence[float]] = None) -> np.ndarray:
    """One score per object: the column minimum, or the weighted column sum."""

    if strategy == MAX_MIN:
        return f.grades.min(axis=0)
    if strategy != WEIGHTED_SUM:
        raise FuzzySoftError(f"Unknown strategy {strategy!r}; choose from {', '.join(STRATEGIES)}")
    w = np.ones(len(f.params)) if weights is None else np.asarray(weights, dtype=np.float64)
    if w.shape != (len(f.params),):
        raise WeightCountMismatch(f"Got {w.size} weights for {len(f.params)} parameters")
    # rounded so that equal sums tie regardless of summation order
    return np.round(w @ f.grades, 12)


def rank_objects(
    f: FuzzySoftSet, strategy: str = MAX_MIN, weights: Optional[Sequence[float]] = None
) -> List[RankedObject]:
    """Highest score first; equal scores are ordered by object label."""

    scores = aggregate(f, strategy, weights)
    labels = f.universe.objects
    order = sorted(range(len(labels)), key=lambda j: (-scores[j], labels[j]))
    ranking = [RankedObject(rank, labels[j], float(scores[j])) for rank, j in enumerate(order, start=1)]
    LOGGER.info("Ranked %d objects by %s, best %s", len(ranking), strategy, ranking[0].label)
    return ranking


def ranking_table(ranking: Sequence[RankedObject]) -> List[Dict[str, object]]:
    return [{"rank": item.rank, "object": item.label, "score": item.score} for item in ranking]


def winner(ranking: Sequence[RankedObject]) -> Tuple[str, float]:
    return ranking[0].label, ranking[0].score


__all__ = [
    "MAX_MIN",
    "RankedObject",
    "STRATEGIES",
    "TIE_BREAK",
    "WEIGHTED_SUM",
    "WeightCountMismatch",
    "aggregate",
    "rank_objects",
    "ranking_table",
    "winner",
]
