from __future__ import annotations

import numpy as np
import pytest

from fskit.services import laws
from fskit.services.core_fuzzy import FuzzySoftError, Universe
from fskit.services.laws import (
    DEFAULT_CASES,
    FAULT_INJECTABLE,
    LAWS,
    MappingInstance,
    SuiteSettings,
    UnknownLaw,
    mapping_law_checks,
    predicted_index,
    random_mapping_instance,
    random_selection,
    run_law,
    run_laws,
)
from fskit.services.normed import SequenceVerdict
from fskit.services.soft_algebra import FuzzySoftSet, ParameterSet, SoftMapping

E2 = ParameterSet(("e1", "e2"))
K1 = ParameterSet(("k1",))
ABC = Universe(("a", "b", "c"))
PQ = Universe(("p", "q"))
SMALL_GRID = SuiteSettings(grid=21)


@pytest.mark.parametrize("law", ["demorgan", "maplaws", "identities"])
def test_algebraic_suites_hold_at_their_default_size(law):
    report = run_law(law, seed=0)
    assert report.cases == DEFAULT_CASES[law]
    assert report.ok, report.first_witness
    assert report.first_witness is None


@pytest.mark.parametrize("law", ["normaxioms", "slices", "hausdorff", "convergence"])
def test_analytic_suites_hold_on_a_small_sample(law):
    report = run_law(law, seed=0, cases=20, settings=SMALL_GRID)
    assert report.ok, report.first_witness


def test_oracle_suite_counts_addition_and_products():
    report = run_law("oracle", seed=0, cases=3, settings=SMALL_GRID)
    assert report.ok, report.first_witness
    assert "sub_max_deviation" in report.details
    assert report.details["add_max_deviation"] <= 2.0 / 21 + 1e-9
    assert report.details["mul_max_deviation"] <= 2.0 / 21 + 1e-9


@pytest.mark.parametrize("law", sorted(FAULT_INJECTABLE))
def test_injected_faults_are_caught_with_a_witness(law):
    report = run_law(law, seed=0, cases=20, inject_fault=True, settings=SMALL_GRID)
    assert report.violations > 0
    assert report.first_witness is not None
    assert report.as_dict()["ok"] is False


def test_same_seed_gives_the_same_report():
    first = run_law("maplaws", seed=7, cases=50).as_dict()
    second = run_law("maplaws", seed=7, cases=50).as_dict()
    assert first == second


def test_image_complement_is_only_checked_when_applicable():
    report = run_law("maplaws", seed=0, cases=100)
    assert report.details["image_complement_checked"] == report.cases - report.skipped
    assert 0 < report.skipped < report.cases


def test_unknown_law_and_empty_suites_are_rejected():
    with pytest.raises(UnknownLaw):
        run_law("associativity", seed=0)
    with pytest.raises(FuzzySoftError):
        run_law("demorgan", seed=0, cases=0)


def test_every_law_is_registered_with_a_default_size():
    assert set(LAWS) == set(DEFAULT_CASES)
    reports = run_laws(["demorgan", "identities"], seed=1)
    assert [r.law for r in reports] == ["demorgan", "identities"]


def _surjective_instance() -> MappingInstance:
    mapping = SoftMapping(ABC, PQ, E2, K1, {"a": "p", "b": "p", "c": "q"}, {"e1": "k1", "e2": "k1"})
    f = FuzzySoftSet(E2, ABC, [[0.2, 0.6, 0.1], [0.5, 0.3, 0.4]])
    g = FuzzySoftSet(K1, PQ, [[0.7, 0.2]])
    return MappingInstance(mapping, E2, (f,), (g,))


def test_mapping_laws_on_a_surjective_mapping():
    results, applicable = mapping_law_checks(_surjective_instance())
    assert applicable
    assert all(results.values())
    assert "image_complement" in results


def test_complement_inequality_is_skipped_for_partial_domains():
    instance = _surjective_instance()
    e1 = ParameterSet(("e1",))
    partial = MappingInstance(
        instance.mapping, e1, (FuzzySoftSet(e1, ABC, [[0.2, 0.6, 0.1]]),), instance.g_family
    )
    results, applicable = mapping_law_checks(partial)
    assert not applicable
    assert "image_complement" not in results
    assert all(results.values())


def test_random_instances_are_total_mappings():
    rng = np.random.default_rng(3)
    for _ in range(20):
        instance = random_mapping_instance(rng)
        assert set(instance.mapping.u) == set(instance.mapping.source_universe)
        assert set(instance.domain.parameters) <= set(instance.mapping.source_params.parameters)


def test_predicted_index():
    assert predicted_index(1e-3) == 11
    assert predicted_index(0.5) == 3


def test_random_selections_are_increasing_and_keep_the_tail():
    rng = np.random.default_rng(5)
    for size in (1, 7, 200):
        selection = random_selection(rng, 40, size)
        assert np.all(np.diff(selection) > 0)
        assert selection[0] >= 0
        assert selection[-2:].tolist() == [38, 39]
        assert len(selection) == min(size, 38) + 2


def test_convergence_suite_checks_random_subsequences():
    report = run_law("convergence", seed=4, cases=10, settings=SMALL_GRID)
    assert report.ok, report.first_witness
    assert report.details["random_convergent"] == 10


def test_a_sequence_that_fails_to_converge_is_a_violation(monkeypatch):
    monkeypatch.setattr(laws, "seq_converges", lambda *args, **kwargs: SequenceVerdict(False, counterexample=7))
    report = run_law("convergence", seed=0, cases=5, settings=SMALL_GRID)
    assert not report.ok
    assert report.details["random_convergent"] == 0
    # geometric: converges, even and random subsequences; then one per random case
    assert report.violations == 3 + 5
