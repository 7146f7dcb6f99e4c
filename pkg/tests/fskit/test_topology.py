from __future__ import annotations

import numpy as np
import pytest

from fskit.services.core_fuzzy import FuzzySet, Universe
from fskit.services.fuzzy_real import AlphaGrid
from fskit.services.soft_algebra import FuzzySoftPoint, FuzzySoftSet, ParameterSet, fs_absolute, fs_null
from fskit.services.topology import (
    INTERSECTION_VIOLATION,
    MISSING_ABSOLUTE,
    MISSING_NULL,
    UNION_VIOLATION,
    ClosureSettings,
    CrispTopology,
    FSTopology,
    FuzzyTopology,
    TopologyAxiomError,
    crisp_check,
    fsn_is_neighborhood,
    fsn_is_q_neighborhood,
    fst_check,
    fst_closure,
    fst_discrete,
    fst_indiscrete,
    fst_it,
    fst_lift_alpha_cuts,
    fst_lift_crisp,
    fst_membership_support_open,
    fst_membership_wprime,
    fst_separation,
    fst_slice,
    ft_it,
    fuzzy_check,
)

XY = Universe(("x", "y"))
E2 = ParameterSet(("e1", "e2"))


def fss(rows) -> FuzzySoftSet:
    return FuzzySoftSet(E2, XY, rows)


def test_null_and_absolute_form_a_topology():
    verdict = fst_check([fs_null(E2, XY), fs_absolute(E2, XY)])
    assert verdict.ok
    assert verdict.method == "exhaustive"
    assert verdict.members == 2


def test_missing_null_is_reported():
    verdict = fst_check([fs_absolute(E2, XY)])
    assert not verdict.ok
    assert verdict.failure == MISSING_NULL
    assert fst_check([fs_null(E2, XY)]).failure == MISSING_ABSOLUTE


def test_union_violation_carries_its_witness_pair():
    f = fss([[0.5, 0.0], [0.0, 0.0]])
    g = fss([[0.0, 0.5], [0.0, 0.0]])
    verdict = fst_check([fs_null(E2, XY), fs_absolute(E2, XY), f, g])
    # f and g meet in the null set, so only their union is missing
    assert verdict.failure == UNION_VIOLATION
    assert verdict.witness == (2, 3)


def test_intersections_are_checked_before_unions():
    f = fss([[0.5, 0.5], [0.0, 0.0]])
    g = fss([[1.0, 0.0], [0.0, 0.0]])
    verdict = fst_check([fs_null(E2, XY), fs_absolute(E2, XY), f, g])
    assert verdict.failure == INTERSECTION_VIOLATION


def test_declared_topology_raises_with_its_verdict():
    with pytest.raises(TopologyAxiomError) as info:
        FSTopology(E2, XY, (fs_absolute(E2, XY),))
    assert info.value.verdict.failure == MISSING_NULL


def test_large_collections_are_checked_pairwise_and_sampled():
    t = fst_discrete(E2, XY, (0.0, 1.0))
    verdict = fst_check(list(t.opens), settings=ClosureSettings(exhaustive_limit=4, sample_draws=50))
    assert verdict.ok
    assert verdict.method == "pairwise+sampled"
    assert verdict.members == 16


def test_closure_of_generators_is_a_topology():
    t = fst_closure([fss([[0.5, 0.0], [0.0, 1.0]]), fss([[0.0, 0.5], [0.5, 0.5]])], E2, XY)
    assert fst_check(list(t.opens)).ok
    assert t.is_open(fss([[0.5, 0.5], [0.5, 1.0]]))
    assert t.is_open(fss([[0.0, 0.0], [0.0, 0.5]]))


def test_every_slice_is_a_fuzzy_topology():
    t = fst_closure([fss([[0.5, 1.0], [0.0, 0.5]]), fss([[1.0, 0.0], [0.5, 0.5]])], E2, XY)
    for e in E2:
        ft = fst_slice(t, e)
        assert fuzzy_check(XY, list(ft.opens)).ok


def test_induced_crisp_topology_of_a_slice():
    t = fst_closure([fss([[0.5, 0.0], [1.0, 1.0]])], E2, XY)
    crisp = fst_it(t, "e1", (0.0, 0.25, 0.5, 0.75, 1.0))
    assert crisp.as_set() == {frozenset(), frozenset({"x"}), frozenset({"x", "y"})}


def test_induced_crisp_topology_of_a_fuzzy_topology():
    opens = [FuzzySet(XY, g) for g in ([0.0, 0.0], [0.5, 0.25], [1.0, 1.0])]
    ft = FuzzyTopology(XY, tuple(opens))
    assert ft_it(ft, (0.0,)).as_set() == {frozenset(), frozenset({"x", "y"})}
    finer = ft_it(ft, (0.0, 0.25, 1.0))
    assert finer.as_set() == {frozenset(), frozenset({"x"}), frozenset({"x", "y"})}
    # thresholds outside [0, 1) are dropped, and none at all means 0
    assert ft_it(ft, (1.0, 2.0)).as_set() == ft_it(ft, (0.0,)).as_set()


def test_crisp_check_and_lift():
    verdict = crisp_check(XY, [set(), {"x"}, {"x", "y"}])
    assert verdict.ok
    assert not crisp_check(XY, [set(), {"x"}, {"y"}]).ok
    lifted = fst_lift_crisp(CrispTopology(XY, (frozenset(), frozenset({"x"}), frozenset({"x", "y"}))), E2)
    assert len(lifted) == 3
    assert lifted.is_open(fss([[1.0, 0.0], [1.0, 0.0]]))


def test_support_open_and_superlevel_families():
    crisp = CrispTopology(XY, (frozenset(), frozenset({"x"}), frozenset({"x", "y"})))
    assert fst_membership_wprime(fss([[0.7, 0.2], [0.5, 0.0]]), crisp)
    assert not fst_membership_wprime(fss([[0.2, 0.7], [0.0, 0.0]]), crisp)
    assert fst_membership_support_open(fss([[0.7, 0.0], [0.3, 0.0]]), crisp)
    assert not fst_membership_support_open(fss([[0.0, 0.3], [0.0, 0.0]]), crisp)


def test_alpha_cut_lift_is_reported_not_asserted():
    mu = FuzzySet(Universe(("a", "b", "c")), [0.2, 0.6, 1.0])
    collection, verdict = fst_lift_alpha_cuts(mu, AlphaGrid.uniform(4))
    assert len(collection) == 3
    np.testing.assert_array_equal(collection[2].grades[:, 0], [0.0, 0.0, 0.0, 0.0])
    np.testing.assert_array_equal(collection[2].grades[:, 2], [1.0, 1.0, 1.0, 1.0])
    assert verdict.ok


def test_indiscrete_topology_separates_nothing():
    t = fst_indiscrete(E2, XY)
    x = FuzzySoftPoint.crisp(E2, XY, "x")
    y = FuzzySoftPoint.crisp(E2, XY, "y")
    report = fst_separation(t, [(x, y)])
    assert report.as_dict() == {"T0": False, "T1": False, "T2": False}
    assert report.t0.counterexample == 0


def test_discrete_topology_is_hausdorff_on_crisp_points():
    t = fst_discrete(E2, XY, (0.0, 1.0))
    x = FuzzySoftPoint.crisp(E2, XY, "x")
    y = FuzzySoftPoint.crisp(E2, XY, "y")
    report = fst_separation(t, [(x, y), (x, x)])
    assert report.as_dict() == {"T0": True, "T1": True, "T2": True}
    assert report.skipped == (1,)


def test_neighborhoods_of_a_crisp_point():
    t = fst_discrete(E2, XY, (0.0, 1.0))
    x = FuzzySoftPoint.crisp(E2, XY, "x")
    assert fsn_is_neighborhood(fs_absolute(E2, XY), x, t)
    assert fsn_is_neighborhood(fss([[1.0, 0.0], [1.0, 0.0]]), x, t)
    half = fss([[1.0, 0.0], [0.0, 0.0]])
    assert not fsn_is_neighborhood(half, x, t)
    assert fsn_is_q_neighborhood(half, x, t)
    assert not fsn_is_q_neighborhood(fss([[0.0, 1.0], [0.0, 1.0]]), x, t)
