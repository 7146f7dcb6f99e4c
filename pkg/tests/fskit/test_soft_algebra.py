from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fskit.services.core_fuzzy import FuzzySoftError, Universe
from fskit.services.soft_algebra import (
    EmptyParameterIntersection,
    FuzzySoftPoint,
    FuzzySoftSet,
    FuzzySoftSinglePoint,
    InvalidMapping,
    InvalidPoint,
    ParameterSet,
    SoftMapping,
    fs_absolute,
    fs_complement,
    fs_equal,
    fs_from_crisp,
    fs_image,
    fs_intersection,
    fs_null,
    fs_preimage,
    fs_product,
    fs_quasi_coincident,
    fs_subset,
    fs_union,
    fs_union_all,
    fsp_different,
    fsp_distinct,
    fsp_member,
    fsp_quasi_coincident,
    fssp_member,
    fssp_quasi_coincident,
)

FOREST_PARAMS = ParameterSet(("e1", "e2", "e3", "e4"))
FOREST_OBJECTS = Universe(("A", "B", "C"))
FOREST = FuzzySoftSet(
    FOREST_PARAMS,
    FOREST_OBJECTS,
    [[0.8, 0.3, 0.5], [0.1, 0.5, 0.7], [0.2, 0.3, 0.8], [0.1, 0.3, 0.5]],
)

E3 = ParameterSet(("e1", "e2", "e3"))
X4 = Universe(("x1", "x2", "x3", "x4"))

lattice = st.integers(min_value=0, max_value=20).map(lambda k: k / 20)


@st.composite
def fs_sets(draw, params: ParameterSet = E3, universe: Universe = X4):
    rows = draw(
        st.lists(
            st.lists(lattice, min_size=len(universe), max_size=len(universe)),
            min_size=len(params),
            max_size=len(params),
        )
    )
    return FuzzySoftSet(params, universe, rows)


def test_forest_complement_row():
    complement = fs_complement(FOREST)
    np.testing.assert_array_equal(complement.grades[0], [0.2, 0.7, 0.5])
    assert fs_complement(complement) == FOREST


def test_null_and_absolute_are_complements():
    assert fs_complement(fs_null(E3, X4)) == fs_absolute(E3, X4)
    assert fs_null(E3, X4).is_null()


@settings(max_examples=200, deadline=None)
@given(fs_sets(), fs_sets())
def test_de_morgan_laws(f, g):
    assert fs_complement(fs_union(f, g)) == fs_intersection(fs_complement(f), fs_complement(g))
    assert fs_complement(fs_intersection(f, g)) == fs_union(fs_complement(f), fs_complement(g))


@settings(deadline=None)
@given(fs_sets(), fs_sets())
def test_union_and_intersection_bound_their_operands(f, g):
    assert fs_subset(f, fs_union(f, g))
    assert fs_subset(fs_intersection(f, g), g)


@settings(deadline=None)
@given(fs_sets())
def test_complement_is_an_involution(f):
    assert fs_equal(fs_complement(fs_complement(f)), f)


def test_union_over_different_parameter_sets_keeps_unshared_rows():
    f = FuzzySoftSet(ParameterSet(("e1", "e2")), X4, [[0.1, 0.2, 0.3, 0.4], [0.5, 0.5, 0.5, 0.5]])
    g = FuzzySoftSet(ParameterSet(("e2", "e3")), X4, [[0.6, 0.0, 0.6, 0.0], [0.9, 0.9, 0.9, 0.9]])
    union = fs_union(f, g)
    assert union.params.parameters == ("e1", "e2", "e3")
    np.testing.assert_array_equal(union.grades[1], [0.6, 0.5, 0.6, 0.5])
    np.testing.assert_array_equal(union.grades[2], [0.9, 0.9, 0.9, 0.9])
    meet = fs_intersection(f, g)
    assert meet.params.parameters == ("e2",)
    np.testing.assert_array_equal(meet.grades[0], [0.5, 0.0, 0.5, 0.0])


def test_disjoint_parameter_sets_have_no_intersection():
    f = FuzzySoftSet(ParameterSet(("e1",)), X4, [[0.1, 0.2, 0.3, 0.4]])
    g = FuzzySoftSet(ParameterSet(("e2",)), X4, [[0.1, 0.2, 0.3, 0.4]])
    with pytest.raises(EmptyParameterIntersection):
        fs_intersection(f, g)


def test_equality_ignores_parameter_order():
    reordered = FOREST.reordered(("e4", "e3", "e2", "e1"))
    assert reordered == FOREST
    assert hash(reordered) == hash(FOREST)


def test_union_of_an_empty_family_is_rejected():
    with pytest.raises(FuzzySoftError):
        fs_union_all([])


def test_crisp_soft_set_is_zero_one_valued():
    f = fs_from_crisp(ParameterSet(("e1", "e2")), X4, {"e1": {"x1", "x3"}})
    np.testing.assert_array_equal(f.grades, [[1.0, 0.0, 1.0, 0.0], [0.0, 0.0, 0.0, 0.0]])


def test_product_takes_the_smaller_grade():
    params = ParameterSet(("e1",))
    xy = Universe(("x", "y"))
    f = FuzzySoftSet(params, xy, [[0.4, 0.9]])
    g = FuzzySoftSet(params, xy, [[0.6, 0.2]])
    np.testing.assert_array_equal(fs_product(f, g)[0], [[0.4, 0.2], [0.6, 0.2]])


# Points -------------------------------------------------------------------

XY = Universe(("x", "y"))
E2 = ParameterSet(("e1", "e2"))


def test_point_grades_must_be_positive():
    with pytest.raises(InvalidPoint):
        FuzzySoftPoint(E2, XY, "x", [0.5, 0.0])


def test_tiny_point_grades_are_kept_exactly():
    pt = FuzzySoftPoint(E2, XY, "x", [1e-13, 1.0])
    assert pt.grade("e1") == 1e-13
    single = FuzzySoftSinglePoint(E2, XY, "y", "e2", 1e-13)
    assert single.lam == 1e-13


def test_membership_and_quasi_coincidence():
    f = FuzzySoftSet(E2, XY, [[0.5, 0.0], [0.1, 1.0]])
    pt = FuzzySoftPoint(E2, XY, "x", [0.6, 0.3])
    assert not fsp_member(pt, f)
    assert fsp_quasi_coincident(pt, f)
    assert fsp_member(FuzzySoftPoint(E2, XY, "x", [0.5, 0.1]), f)
    assert fssp_member(pt.restrict("e2"), FuzzySoftSet(E2, XY, [[0.0, 0.0], [0.3, 0.0]]))


def test_quasi_coincidence_between_sets_is_strict():
    f = FuzzySoftSet(E2, XY, [[0.5, 0.2], [0.0, 0.0]])
    g = FuzzySoftSet(E2, XY, [[0.5, 0.8], [0.0, 0.0]])
    assert not fs_quasi_coincident(g, f)
    h = FuzzySoftSet(E2, XY, [[0.6, 0.0], [0.0, 0.0]])
    assert fs_quasi_coincident(h, f)
    assert not fs_quasi_coincident(h, f, at="y")


def test_point_complement_and_distinctness():
    pt = FuzzySoftPoint(E2, XY, "x", [0.25, 1.0])
    np.testing.assert_array_equal(pt.complement().grades, [[0.75, 1.0], [0.0, 1.0]])
    assert fsp_distinct(pt, FuzzySoftPoint.crisp(E2, XY, "y"))
    assert not fsp_distinct(pt, FuzzySoftPoint(E2, XY, "x", [0.5, 0.5]))


# Mappings -----------------------------------------------------------------

ABC = Universe(("a", "b", "c"))
PQ = Universe(("p", "q"))
K1 = ParameterSet(("k1",))


def _collapse() -> SoftMapping:
    return SoftMapping(ABC, PQ, E2, K1, {"a": "p", "b": "p", "c": "q"}, {"e1": "k1", "e2": "k1"})


def test_image_takes_the_supremum_over_preimages():
    f = FuzzySoftSet(E2, ABC, [[0.2, 0.6, 0.1], [0.5, 0.3, 0.4]])
    image = fs_image(_collapse(), f)
    assert image.params.parameters == ("k1",)
    np.testing.assert_array_equal(image.grades, [[0.6, 0.4]])


def test_preimage_pulls_grades_back():
    g = FuzzySoftSet(K1, PQ, [[0.7, 0.2]])
    preimage = fs_preimage(_collapse(), g)
    np.testing.assert_array_equal(preimage.grades, [[0.7, 0.7, 0.2], [0.7, 0.7, 0.2]])


def test_image_of_an_unhit_object_is_zero():
    h = SoftMapping(XY, ABC, E2, E2, {"x": "a", "y": "a"}, {"e1": "e1", "e2": "e2"})
    f = fs_absolute(E2, XY)
    np.testing.assert_array_equal(fs_image(h, f).grades, [[1.0, 0.0, 0.0], [1.0, 0.0, 0.0]])
    assert not h.is_surjective()


def test_mapping_must_be_total():
    with pytest.raises(InvalidMapping):
        SoftMapping(ABC, PQ, E2, K1, {"a": "p"}, {"e1": "k1", "e2": "k1"})


def test_identity_mapping_fixes_every_set():
    h = SoftMapping.identity(X4, E3)
    f = FuzzySoftSet(E3, X4, np.full((3, 4), 0.35))
    assert fs_image(h, f) == f
    assert fs_preimage(h, f) == f


def test_different_points_and_single_point_quasi_coincidence():
    pt = FuzzySoftPoint(E2, XY, "x", [0.6, 0.3])
    assert not fsp_different(pt, FuzzySoftPoint(E2, XY, "x", [0.6, 0.3]))
    assert fsp_different(pt, FuzzySoftPoint(E2, XY, "x", [0.6, 0.4]))
    single = pt.restrict("e2")
    assert not fssp_quasi_coincident(single, FuzzySoftSet(E2, XY, [[0.0, 0.0], [0.1, 0.0]]))
    assert fssp_quasi_coincident(single, FuzzySoftSet(E2, XY, [[0.0, 0.0], [0.8, 0.0]]))
