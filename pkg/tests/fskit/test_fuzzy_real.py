from __future__ import annotations

import logging

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fskit.services.fuzzy_real import (
    AlphaGrid,
    DivisionByIntervalContainingZero,
    FuzzyReal,
    GridMismatch,
    InvalidFuzzyReal,
    NonNegFuzzyReal,
    OffGridAlpha,
    OrderingViolation,
    fr_abs,
    fr_add,
    fr_crisp,
    fr_div,
    fr_equal,
    fr_ext_add,
    fr_ext_div,
    fr_ext_mul,
    fr_ext_sub,
    fr_leq,
    fr_membership,
    fr_mul,
    fr_normalize,
    fr_scale,
    fr_sub,
    fr_trapezoidal,
    fr_triangular,
    oracle_deviation,
)

QUARTERS = AlphaGrid.uniform(4)


def test_uniform_grid_levels():
    np.testing.assert_allclose(QUARTERS.levels, [0.25, 0.5, 0.75, 1.0])
    assert len(AlphaGrid.uniform()) == 101
    with pytest.raises(OffGridAlpha):
        QUARTERS.index_of(0.3)


def test_triangle_cuts():
    a = fr_triangular(1.0, 2.0, 3.0, QUARTERS)
    assert a.cut(0.5) == (1.5, 2.5)
    assert a.core == (2.0, 2.0)
    assert a.support_hull == (1.25, 2.75)


def test_constructors_validate_their_corners():
    with pytest.raises(OrderingViolation):
        fr_triangular(3.0, 2.0, 1.0, QUARTERS)
    with pytest.raises(InvalidFuzzyReal):
        FuzzyReal(QUARTERS, [0.0, 1.0, 0.5, 0.5], [2.0, 2.0, 2.0, 2.0])


def test_addition_is_levelwise():
    total = fr_add(fr_triangular(1, 2, 3, QUARTERS), fr_triangular(2, 3, 5, QUARTERS))
    assert total.cut(0.5) == (4.0, 6.5)
    assert total.core == (5.0, 5.0)


def test_addition_never_needs_normalization(caplog):
    caplog.set_level(logging.WARNING, logger="fskit.services.fuzzy_real")
    fr_add(fr_trapezoidal(-4, -1, 0, 6, QUARTERS), fr_triangular(0.5, 0.7, 9, QUARTERS))
    assert caplog.records == []


def test_crisp_values_add_like_numbers():
    assert fr_equal(fr_add(fr_crisp(2.0, QUARTERS), fr_crisp(3.0, QUARTERS)), fr_crisp(5.0, QUARTERS))
    assert fr_crisp(1.0, QUARTERS).is_crisp


def test_levelwise_difference_of_a_real_with_itself_is_zero():
    a = fr_triangular(1, 2, 3, QUARTERS)
    assert fr_equal(fr_sub(a, a), fr_crisp(0.0, QUARTERS))


def test_multiplication_takes_the_endpoint_hull():
    a = fr_triangular(1, 2, 3, QUARTERS)
    square = fr_mul(a, a)
    assert square.cut(0.5) == (2.25, 6.25)
    assert square.core == (4.0, 4.0)
    mixed = fr_mul(fr_triangular(-1, 0, 1, QUARTERS), a)
    assert mixed.core == (0.0, 0.0)
    assert mixed.cut(0.5) == (-1.25, 1.25)


def test_division_by_a_real_around_zero_is_rejected():
    with pytest.raises(DivisionByIntervalContainingZero):
        fr_div(fr_crisp(1.0, QUARTERS), fr_triangular(-1, 0, 1, QUARTERS))
    half = fr_div(fr_crisp(1.0, QUARTERS), fr_crisp(2.0, QUARTERS))
    assert half.core == (0.5, 0.5)


def test_absolute_value_is_non_negative():
    negative = fr_abs(fr_triangular(-3, -2, -1, QUARTERS))
    assert isinstance(negative, NonNegFuzzyReal)
    assert negative.cut(0.5) == (1.5, 2.5)
    straddling = fr_abs(fr_triangular(-1, 0, 2, QUARTERS))
    assert straddling.cut(0.5) == (0.0, 1.0)
    assert straddling.is_nonnegative


def test_scaling_by_a_negative_number_flips_the_cuts():
    scaled = fr_scale(-2.0, fr_triangular(1, 2, 3, QUARTERS))
    assert scaled.cut(0.5) == (-5.0, -3.0)


def test_ordering_and_grid_mismatch():
    assert fr_leq(fr_triangular(0, 1, 2, QUARTERS), fr_triangular(1, 2, 3, QUARTERS))
    with pytest.raises(GridMismatch):
        fr_add(fr_crisp(0.0, QUARTERS), fr_crisp(0.0, AlphaGrid.uniform(5)))


def test_membership_reads_the_highest_containing_cut():
    a = fr_triangular(0, 1, 2, QUARTERS)
    np.testing.assert_allclose(fr_membership(a, np.array([1.0, 0.5, 3.0])), [1.0, 0.5, 0.0])


def test_inward_envelope_restores_nesting():
    fixed = fr_normalize(np.array([0.0, -1.0, 1.0]), np.array([3.0, 3.0, 2.0]))
    np.testing.assert_array_equal(fixed.lower, [0.0, 0.0, 1.0])
    np.testing.assert_array_equal(fixed.upper, [3.0, 3.0, 2.0])
    assert fixed.delta == 1.0
    assert not fixed.outward


corner = st.integers(min_value=-20, max_value=20).map(lambda k: k / 4)


@settings(max_examples=10, deadline=None)
@given(st.lists(corner, min_size=3, max_size=3), st.lists(corner, min_size=3, max_size=3))
def test_addition_matches_the_sup_min_oracle(left, right):
    grid = AlphaGrid.uniform(21)
    a = fr_triangular(*sorted(left), grid)
    b = fr_triangular(*sorted(right), grid)
    assert oracle_deviation(a, b, "add", support_step=0.01).agrees


def test_equality_across_grids_is_a_mismatch():
    finer = AlphaGrid.uniform(5)
    with pytest.raises(GridMismatch):
        fr_equal(fr_crisp(1.0, QUARTERS), fr_crisp(1.0, finer))
    assert fr_crisp(1.0, QUARTERS) != fr_crisp(1.0, finer)


TWENTIETHS = AlphaGrid.uniform(21)


def test_extension_oracles_peak_at_the_crisp_result():
    a = fr_triangular(1, 2, 3, TWENTIETHS)
    b = fr_triangular(2, 3, 4, TWENTIETHS)
    assert fr_ext_add(a, b, 0.01).grade_at(5.0) >= 20 / 21 - 1e-12
    assert fr_ext_sub(a, b, 0.01).grade_at(-1.0) >= 20 / 21 - 1e-12
    assert fr_ext_mul(a, b, 0.01).grade_at(6.0) == 1.0
    assert fr_ext_div(a, b, 0.01).grade_at(2 / 3) == 1.0


def test_quotient_oracle_recovers_a_finite_cut_at_every_level():
    a = fr_triangular(1, 2, 3, TWENTIETHS)
    b = fr_triangular(2, 3, 4, TWENTIETHS)
    lower, upper = fr_ext_div(a, b, 0.01).recovered_cuts(TWENTIETHS)
    assert np.all(np.isfinite(lower)) and np.all(np.isfinite(upper))
    assert lower[-1] == pytest.approx(2 / 3, abs=0.01)
    report = oracle_deviation(a, b, "div", support_step=0.01)
    assert np.all(np.isfinite(report.deviation))
    assert report.agrees


def test_quotient_oracle_rejects_a_divisor_around_zero():
    with pytest.raises(DivisionByIntervalContainingZero):
        fr_ext_div(fr_crisp(1.0, TWENTIETHS), fr_triangular(-1, 0, 1, TWENTIETHS), 0.01)


@pytest.mark.parametrize(
    ("left", "right"),
    [((1, 2, 3), (2, 3, 4)), ((-1, 0, 1), (2, 3, 4)), ((0, 0, 0), (1, 2, 3)), ((-3, -2, -1), (0.5, 1, 4))],
)
def test_product_oracle_agrees_with_the_endpoint_hull(left, right):
    a = fr_triangular(*left, TWENTIETHS)
    b = fr_triangular(*right, TWENTIETHS)
    report = oracle_deviation(a, b, "mul", support_step=0.01)
    assert report.agrees, report.max_deviation


def test_levelwise_difference_departs_from_the_oracle():
    a = fr_triangular(1, 2, 3, TWENTIETHS)
    report = oracle_deviation(a, a, "sub", support_step=0.01)
    assert not report.agrees
    assert report.deviation[-1] <= report.tolerance


positive_corner = st.integers(min_value=1, max_value=20).map(lambda k: k / 4)


@settings(max_examples=10, deadline=None)
@given(st.lists(positive_corner, min_size=3, max_size=3), st.lists(positive_corner, min_size=3, max_size=3))
def test_multiplication_of_positive_reals_matches_the_sup_min_oracle(left, right):
    a = fr_triangular(*sorted(left), TWENTIETHS)
    b = fr_triangular(*sorted(right), TWENTIETHS)
    assert oracle_deviation(a, b, "mul", support_step=0.02).agrees
