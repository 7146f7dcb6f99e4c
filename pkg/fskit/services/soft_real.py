"""Fuzzy soft real numbers: one fuzzy real per parameter on a shared grid."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Iterator, Mapping, Sequence, Tuple

import numpy as np

from .core_fuzzy import FuzzySoftError
from .fuzzy_real import (
    AlphaGrid,
    FuzzyReal,
    GridMismatch,
    fr_abs,
    fr_add,
    fr_crisp,
    fr_div,
    fr_equal,
    fr_leq,
    fr_mul,
    fr_scale,
    fr_sub,
    fr_triangular,
)
from .soft_algebra import ParameterMismatch, ParameterSet

LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class FuzzySoftReal:
    params: ParameterSet
    values: Tuple[FuzzyReal, ...]

    def __post_init__(self) -> None:
        values = tuple(self.values)
        object.__setattr__(self, "values", values)
        if len(values) != len(self.params):
            raise ParameterMismatch(f"Expected {len(self.params)} fuzzy reals, got {len(values)}")
        grid = values[0].grid
        if any(value.grid != grid for value in values[1:]):
            raise GridMismatch("Every parameter of a F.S real must use the same alpha grid")

    @property
    def grid(self) -> AlphaGrid:
        return self.values[0].grid

    def value(self, parameter: str) -> FuzzyReal:
        return self.values[self.params.index(parameter)]

    def items(self) -> Iterator[Tuple[str, FuzzyReal]]:
        return zip(self.params, self.values)

    def lower(self) -> np.ndarray:
        """``|E| x m`` matrix of lower endpoints."""

        return np.vstack([value.lower for value in self.values])

    def upper(self) -> np.ndarray:
        return np.vstack([value.upper for value in self.values])

    @property
    def is_crisp(self) -> bool:
        return all(value.is_crisp for value in self.values)

    def crisp_value(self) -> float:
        """The real ``r`` of a crisp F.S real ``r̄_E``."""

        first = float(self.values[0].lower[-1])
        if not self.is_crisp or any(float(v.lower[-1]) != first for v in self.values):
            raise FuzzySoftError("F.S real is not crisp")
        return first

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FuzzySoftReal):
            return NotImplemented
        if not self.params.same_labels(other.params) or self.grid != other.grid:
            return False
        return fsr_equal(self, other)

    def __hash__(self) -> int:
        return hash(frozenset(self.items()))

    def __repr__(self) -> str:
        body = ", ".join(f"{e}: {value!r}" for e, value in self.items())
        return f"FuzzySoftReal({body})"


def fsr_crisp(r: float, params: ParameterSet, grid: AlphaGrid) -> FuzzySoftReal:
    value = fr_crisp(r, grid)
    return FuzzySoftReal(params, tuple(value for _ in params))


def fsr_from_values(params: ParameterSet, values: Mapping[str, FuzzyReal]) -> FuzzySoftReal:
    missing = [label for label in params if label not in values]
    if missing:
        raise ParameterMismatch(f"No fuzzy real for parameters {missing}")
    return FuzzySoftReal(params, tuple(values[label] for label in params))


def fsr_triangular(
    params: ParameterSet, triples: Mapping[str, Sequence[float]] | Sequence[Sequence[float]], grid: AlphaGrid
) -> FuzzySoftReal:
    """Per-parameter triangular numbers sampled onto ``grid``."""

    if isinstance(triples, Mapping):
        ordered = [triples[label] for label in params]
    else:
        ordered = list(triples)
    return FuzzySoftReal(params, tuple(fr_triangular(*triple, grid) for triple in ordered))


def fsr_level(r: FuzzySoftReal, parameter: str, alpha: float) -> Tuple[float, float]:
    return r.value(parameter).cut(alpha)


def _aligned(a: FuzzySoftReal, b: FuzzySoftReal) -> Tuple[FuzzyReal, ...]:
    if not a.params.same_labels(b.params):
        raise ParameterMismatch(f"Parameter sets differ: {a.params.parameters} vs {b.params.parameters}")
    if a.grid != b.grid:
        raise GridMismatch("F.S reals live on different alpha grids")
    return tuple(b.value(label) for label in a.params)


def fsr_leq(a: FuzzySoftReal, b: FuzzySoftReal) -> bool:
    return all(fr_leq(x, y) for x, y in zip(a.values, _aligned(a, b)))


def fsr_equal(a: FuzzySoftReal, b: FuzzySoftReal, tol: float = 0.0) -> bool:
    return all(fr_equal(x, y, tol) for x, y in zip(a.values, _aligned(a, b)))


def _lift(op: Callable[[FuzzyReal, FuzzyReal], FuzzyReal]) -> Callable[[FuzzySoftReal, FuzzySoftReal], FuzzySoftReal]:
    def lifted(a: FuzzySoftReal, b: FuzzySoftReal) -> FuzzySoftReal:
        others = _aligned(a, b)
        return FuzzySoftReal(a.params, tuple(op(x, y) for x, y in zip(a.values, others)))

    lifted.__name__ = op.__name__.replace("fr_", "fsr_")
    lifted.__doc__ = f"Parameterwise ``{op.__name__}``."
    return lifted


fsr_add = _lift(fr_add)
fsr_sub = _lift(fr_sub)
fsr_mul = _lift(fr_mul)
fsr_div = _lift(fr_div)


def fsr_abs(a: FuzzySoftReal) -> FuzzySoftReal:
    return FuzzySoftReal(a.params, tuple(fr_abs(value) for value in a.values))


def fsr_scale(r: float, a: FuzzySoftReal) -> FuzzySoftReal:
    return FuzzySoftReal(a.params, tuple(fr_scale(r, value) for value in a.values))


def fsr_is_nonnegative(a: FuzzySoftReal) -> bool:
    return all(value.is_nonnegative for value in a.values)


__all__ = [
    "FuzzySoftReal",
    "fsr_abs",
    "fsr_add",
    "fsr_crisp",
    "fsr_div",
    "fsr_equal",
    "fsr_from_values",
    "fsr_is_nonnegative",
    "fsr_level",
    "fsr_leq",
    "fsr_mul",
    "fsr_scale",
    "fsr_sub",
    "fsr_triangular",
]
