from __future__ import annotations

import numpy as np
import pytest

from fskit.services.core_fuzzy import FuzzySoftError, Universe
from fskit.services.decision import (
    MAX_MIN,
    WEIGHTED_SUM,
    WeightCountMismatch,
    aggregate,
    rank_objects,
    ranking_table,
    winner,
)
from fskit.services.soft_algebra import FuzzySoftSet, ParameterSet

FOREST = FuzzySoftSet(
    ParameterSet(("e1", "e2", "e3", "e4")),
    Universe(("A", "B", "C")),
    [[0.8, 0.3, 0.5], [0.1, 0.5, 0.7], [0.2, 0.3, 0.8], [0.1, 0.3, 0.5]],
)


def test_max_min_scores_of_the_forest_table():
    np.testing.assert_allclose(aggregate(FOREST, MAX_MIN), [0.1, 0.3, 0.5])
    ranking = rank_objects(FOREST, MAX_MIN)
    assert [item.label for item in ranking] == ["C", "B", "A"]
    assert winner(ranking) == ("C", 0.5)


def test_weighted_sum_scores_of_the_forest_table():
    np.testing.assert_allclose(aggregate(FOREST, WEIGHTED_SUM), [1.2, 1.4, 2.5])
    assert winner(rank_objects(FOREST, WEIGHTED_SUM))[0] == "C"


def test_weights_shift_the_winner():
    ranking = rank_objects(FOREST, WEIGHTED_SUM, [10.0, 0.0, 0.0, 0.0])
    assert winner(ranking) == ("A", 8.0)


def test_weights_must_match_the_parameters():
    with pytest.raises(WeightCountMismatch):
        aggregate(FOREST, WEIGHTED_SUM, [1.0, 1.0])
    with pytest.raises(FuzzySoftError):
        aggregate(FOREST, "borda")


def test_ties_are_ordered_by_label():
    tied = FuzzySoftSet(ParameterSet(("e1",)), Universe(("r", "q", "p")), [[0.4, 0.9, 0.4]])
    ranking = rank_objects(tied, WEIGHTED_SUM)
    assert [item.label for item in ranking] == ["q", "p", "r"]
    assert [item.rank for item in ranking] == [1, 2, 3]


def test_a_tie_for_first_goes_to_the_smaller_label():
    tied = FuzzySoftSet(ParameterSet(("e1", "e2")), Universe(("Z", "M", "B")), [[0.6, 0.6, 0.2], [0.7, 0.6, 0.9]])
    assert winner(rank_objects(tied, MAX_MIN)) == ("M", 0.6)


def test_a_single_object_wins_by_default():
    alone = FuzzySoftSet(ParameterSet(("e1", "e2")), Universe(("only",)), [[0.2], [0.6]])
    assert ranking_table(rank_objects(alone)) == [{"rank": 1, "object": "only", "score": 0.2}]
