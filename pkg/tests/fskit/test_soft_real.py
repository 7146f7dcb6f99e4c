from __future__ import annotations

import pytest

from fskit.services.core_fuzzy import FuzzySoftError
from fskit.services.fuzzy_real import AlphaGrid, GridMismatch, fr_crisp, fr_triangular
from fskit.services.soft_algebra import ParameterMismatch, ParameterSet
from fskit.services.soft_real import (
    FuzzySoftReal,
    fsr_abs,
    fsr_add,
    fsr_crisp,
    fsr_div,
    fsr_equal,
    fsr_from_values,
    fsr_is_nonnegative,
    fsr_level,
    fsr_leq,
    fsr_mul,
    fsr_scale,
    fsr_sub,
    fsr_triangular,
)

GRID = AlphaGrid.uniform(4)
E2 = ParameterSet(("e1", "e2"))


def test_parameterwise_addition():
    a = fsr_triangular(E2, {"e1": (1, 2, 3), "e2": (0, 0, 1)}, GRID)
    b = fsr_triangular(E2, [(1, 1, 1), (2, 3, 4)], GRID)
    total = fsr_add(a, b)
    assert fsr_level(total, "e1", 1.0) == (3.0, 3.0)
    assert fsr_level(total, "e2", 0.5) == (2.5, 4.0)


def test_crisp_identities():
    a = fsr_triangular(E2, [(1, 2, 3), (-2, -1, 0)], GRID)
    zero = fsr_crisp(0.0, E2, GRID)
    one = fsr_crisp(1.0, E2, GRID)
    assert fsr_equal(fsr_add(a, zero), a)
    assert fsr_equal(fsr_mul(a, one), a)
    assert fsr_equal(fsr_sub(a, a), zero)
    assert fsr_crisp(2.5, E2, GRID).crisp_value() == 2.5


def test_crisp_value_of_a_fuzzy_real_is_rejected():
    with pytest.raises(FuzzySoftError):
        fsr_triangular(E2, [(0, 1, 2), (0, 1, 2)], GRID).crisp_value()


def test_absolute_value_and_ordering():
    a = fsr_triangular(E2, [(-3, -2, -1), (1, 2, 3)], GRID)
    magnitude = fsr_abs(a)
    assert fsr_is_nonnegative(magnitude)
    assert fsr_equal(magnitude, fsr_triangular(E2, [(1, 2, 3), (1, 2, 3)], GRID))
    assert fsr_leq(a, magnitude)
    assert not fsr_is_nonnegative(a)


def test_scaling_is_parameterwise():
    a = fsr_triangular(E2, [(1, 2, 3), (0, 1, 2)], GRID)
    assert fsr_level(fsr_scale(2.0, a), "e2", 0.5) == (1.0, 3.0)


def test_operands_must_share_parameters_and_grid():
    a = fsr_crisp(1.0, E2, GRID)
    with pytest.raises(ParameterMismatch):
        fsr_add(a, fsr_crisp(1.0, ParameterSet(("e1", "e3")), GRID))
    with pytest.raises(GridMismatch):
        fsr_add(a, fsr_crisp(1.0, E2, AlphaGrid.uniform(5)))
    with pytest.raises(GridMismatch):
        FuzzySoftReal(E2, (fr_crisp(0.0, GRID), fr_crisp(0.0, AlphaGrid.uniform(5))))


def test_from_values_needs_every_parameter():
    with pytest.raises(ParameterMismatch):
        fsr_from_values(E2, {"e1": fr_triangular(0, 1, 2, GRID)})
    value = fsr_from_values(E2, {"e2": fr_crisp(1.0, GRID), "e1": fr_crisp(0.0, GRID)})
    assert value.value("e2").core == (1.0, 1.0)


def test_parameterwise_division():
    quotient = fsr_div(fsr_crisp(1.0, E2, GRID), fsr_crisp(4.0, E2, GRID))
    assert quotient.crisp_value() == 0.25


def test_equality_needs_matching_operands():
    a = fsr_crisp(1.0, E2, GRID)
    other_grid = fsr_crisp(1.0, E2, AlphaGrid.uniform(5))
    other_params = fsr_crisp(1.0, ParameterSet(("e1", "e3")), GRID)
    with pytest.raises(GridMismatch):
        fsr_equal(a, other_grid)
    with pytest.raises(ParameterMismatch):
        fsr_equal(a, other_params)
    assert a != other_grid
    assert a != other_params
    assert fsr_equal(a, fsr_crisp(1.0 + 1e-9, E2, GRID), tol=1e-8)
