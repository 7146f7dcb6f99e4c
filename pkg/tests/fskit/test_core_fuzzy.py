from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fskit.services.core_fuzzy import (
    FuzzySet,
    FuzzySoftError,
    Grade,
    InvalidGrade,
    Universe,
    UniverseMismatch,
    fz_absolute,
    fz_alpha_cut,
    fz_complement,
    fz_max,
    fz_min,
    fz_null,
    fz_subset,
    fz_superlevel,
    fz_support,
    grades_on_lattice,
)

XYZ = Universe(("x", "y", "z"))

grades = st.lists(st.integers(min_value=0, max_value=20).map(lambda k: k / 20), min_size=3, max_size=3)


def test_universe_rejects_duplicates_and_empty():
    with pytest.raises(FuzzySoftError):
        Universe(("a", "a"))
    with pytest.raises(FuzzySoftError):
        Universe(())


def test_grade_range_is_enforced():
    assert Grade(0.25) == 0.25
    with pytest.raises(InvalidGrade):
        Grade(1.5)
    with pytest.raises(InvalidGrade):
        FuzzySet(XYZ, [0.1, -0.2, 0.3])


def test_from_mapping_defaults_missing_objects_to_zero():
    a = FuzzySet.from_mapping(XYZ, {"y": 0.4})
    assert a.grade("x") == 0.0
    assert a.grade("y") == 0.4


def test_grades_are_read_only():
    a = FuzzySet(XYZ, [0.1, 0.2, 0.3])
    with pytest.raises(ValueError):
        a.grades[0] = 0.9


@given(grades)
def test_complement_is_an_involution(values):
    a = FuzzySet(XYZ, values)
    assert fz_complement(fz_complement(a)) == a


@given(grades, grades)
def test_de_morgan_on_plain_fuzzy_sets(left, right):
    a, b = FuzzySet(XYZ, left), FuzzySet(XYZ, right)
    assert fz_complement(fz_max(a, b)) == fz_min(fz_complement(a), fz_complement(b))
    assert fz_complement(fz_min(a, b)) == fz_max(fz_complement(a), fz_complement(b))


def test_null_and_absolute_bound_every_set():
    a = FuzzySet(XYZ, [0.3, 0.0, 1.0])
    assert fz_subset(fz_null(XYZ), a)
    assert fz_subset(a, fz_absolute(XYZ))
    assert fz_complement(fz_null(XYZ)) == fz_absolute(XYZ)


def test_cuts_support_and_superlevel():
    a = FuzzySet(XYZ, [0.3, 0.0, 0.7])
    assert fz_alpha_cut(a, 0.3) == {"x", "z"}
    assert fz_alpha_cut(a, 0.5) == {"z"}
    assert fz_support(a) == {"x", "z"}
    assert fz_superlevel(a, 0.3) == {"z"}
    with pytest.raises(InvalidGrade):
        fz_alpha_cut(a, 0.0)


def test_cut_thresholds_are_not_rounded():
    a = FuzzySet(XYZ, [0.3, 0.0, 0.7])
    assert fz_alpha_cut(a, 1e-13) == {"x", "z"}
    assert fz_alpha_cut(a, 0.7 + 1e-13) == frozenset()
    with pytest.raises(InvalidGrade):
        fz_alpha_cut(a, -1e-13)
    with pytest.raises(InvalidGrade):
        fz_alpha_cut(a, 1.0 + 1e-13)
    assert isinstance(a.grade("z"), Grade)


def test_operands_must_share_a_universe():
    other = Universe(("x", "y"))
    with pytest.raises(UniverseMismatch):
        fz_max(FuzzySet(XYZ, [0, 0, 0]), FuzzySet(other, [0, 0]))


def test_lattice_membership():
    assert grades_on_lattice([0.0, 0.5, 1.0], (0.0, 0.5, 1.0))
    assert not grades_on_lattice([0.25], (0.0, 0.5, 1.0))
    np.testing.assert_array_equal(XYZ.indicator({"x", "z"}), [1.0, 0.0, 1.0])
