"""Fuzzy soft sets, fuzzy soft points and fuzzy soft mappings."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import reduce
from typing import Dict, FrozenSet, Iterable, Iterator, Mapping, Optional, Sequence, Tuple

import numpy as np

from .core_fuzzy import (
    FuzzySet,
    FuzzySoftError,
    Universe,
    as_grade_array,
    complement_grades,
    ensure_same_universe,
)

LOGGER = logging.getLogger(__name__)


class ParameterMismatch(FuzzySoftError):
    """Raised when operands must share a parameter set and do not."""


class UnknownParameter(FuzzySoftError):
    """Raised when a parameter label is not part of a parameter set."""


class EmptyParameterIntersection(FuzzySoftError):
    """Raised by the intersection of F.S sets whose parameter sets are disjoint."""


class InvalidPoint(FuzzySoftError):
    """Raised when a F.S point carries a grade outside (0, 1]."""


class InvalidMapping(FuzzySoftError):
    """Raised when a soft mapping table is not total or targets unknown labels."""


@dataclass(frozen=True)
class ParameterSet:
    """Finite ordered parameter labels, optionally re-indexed into (0, 1]."""

    parameters: Tuple[str, ...]
    reindex: Optional[Tuple[float, ...]] = None

    def __post_init__(self) -> None:
        parameters = tuple(str(label) for label in self.parameters)
        object.__setattr__(self, "parameters", parameters)
        if not parameters:
            raise FuzzySoftError("A parameter set needs at least one parameter")
        if len(set(parameters)) != len(parameters):
            raise FuzzySoftError(f"Duplicate parameter labels {parameters}")
        if self.reindex is not None:
            values = tuple(float(v) for v in self.reindex)
            object.__setattr__(self, "reindex", values)
            if len(values) != len(parameters):
                raise FuzzySoftError("Re-index values must match the parameters one to one")
            if len(set(values)) != len(values) or any(not 0.0 < v <= 1.0 for v in values):
                raise FuzzySoftError(f"Re-index values must be distinct and lie in (0, 1]: {values}")

    @classmethod
    def reindexed(cls, parameters: Sequence[str]) -> "ParameterSet":
        """Replace a k-element parameter set with {1/k, ..., (k-1)/k, 1}."""

        k = len(parameters)
        return cls(tuple(parameters), tuple(i / k for i in range(1, k + 1)))

    def __len__(self) -> int:
        return len(self.parameters)

    def __iter__(self) -> Iterator[str]:
        return iter(self.parameters)

    def __contains__(self, label: object) -> bool:
        return label in self.parameters

    def index(self, label: str) -> int:
        try:
            return self.parameters.index(label)
        except ValueError as exc:
            raise UnknownParameter(f"Unknown parameter {label!r}") from exc

    def level_of(self, label: str) -> float:
        if self.reindex is None:
            raise FuzzySoftError("Parameter set carries no (0, 1] re-indexing")
        return self.reindex[self.index(label)]

    def as_set(self) -> FrozenSet[str]:
        return frozenset(self.parameters)

    def issubset(self, other: "ParameterSet") -> bool:
        return self.as_set() <= other.as_set()

    def same_labels(self, other: "ParameterSet") -> bool:
        return self.as_set() == other.as_set()

    def union(self, other: "ParameterSet") -> "ParameterSet":
        extra = tuple(label for label in other.parameters if label not in self)
        return ParameterSet(self.parameters + extra)

    def intersection(self, other: "ParameterSet") -> Tuple[str, ...]:
        return tuple(label for label in self.parameters if label in other)


@dataclass(frozen=True, eq=False)
class FuzzySoftSet:
    """Grade matrix over (parameter, object) pairs: the F.S set f_A."""

    params: ParameterSet
    universe: Universe
    grades: np.ndarray

    def __post_init__(self) -> None:
        shape = (len(self.params), len(self.universe))
        object.__setattr__(self, "grades", as_grade_array(self.grades, shape=shape))

    @classmethod
    def from_rows(cls, params: ParameterSet, universe: Universe, rows: Mapping[str, Sequence[float]]) -> "FuzzySoftSet":
        missing = [label for label in params if label not in rows]
        if missing:
            raise ParameterMismatch(f"No grade row for parameters {missing}")
        return cls(params, universe, np.array([rows[label] for label in params], dtype=np.float64))

    def row(self, parameter: str) -> FuzzySet:
        return FuzzySet(self.universe, self.grades[self.params.index(parameter)])

    def rows(self) -> Dict[str, FuzzySet]:
        return {label: self.row(label) for label in self.params}

    def grade(self, parameter: str, label: str) -> float:
        return float(self.grades[self.params.index(parameter), self.universe.index(label)])

    def column(self, label: str) -> np.ndarray:
        return self.grades[:, self.universe.index(label)]

    def reordered(self, order: Sequence[str]) -> "FuzzySoftSet":
        """Same F.S set with its rows listed in ``order``."""

        params = ParameterSet(tuple(order))
        if not params.same_labels(self.params):
            raise ParameterMismatch(f"Cannot reorder {self.params.parameters} as {tuple(order)}")
        index = [self.params.index(label) for label in params]
        return FuzzySoftSet(params, self.universe, self.grades[index])

    def canonical_key(self) -> Tuple[Tuple[str, ...], Tuple[str, ...], bytes]:
        """Hashable key independent of the parameter order."""

        order = sorted(self.params.parameters)
        index = [self.params.index(label) for label in order]
        return tuple(order), self.universe.objects, np.ascontiguousarray(self.grades[index]).tobytes()

    def is_null(self) -> bool:
        return not bool(self.grades.any())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FuzzySoftSet):
            return NotImplemented
        return fs_equal(self, other)

    def __hash__(self) -> int:
        return hash(self.canonical_key())

    def __repr__(self) -> str:
        rows = "; ".join(
            f"{e}: " + ", ".join(f"{g:g}/{x}" for x, g in zip(self.universe, row))
            for e, row in zip(self.params, self.grades)
        )
        return f"FuzzySoftSet({rows})"


def fs_null(params: ParameterSet, universe: Universe) -> FuzzySoftSet:
    return FuzzySoftSet(params, universe, np.zeros((len(params), len(universe))))


def fs_absolute(params: ParameterSet, universe: Universe) -> FuzzySoftSet:
    return FuzzySoftSet(params, universe, np.ones((len(params), len(universe))))


def fs_from_crisp(params: ParameterSet, universe: Universe, subsets: Mapping[str, Iterable[str]]) -> FuzzySoftSet:
    """A soft set F : A -> 2^X as its {0, 1}-valued F.S set."""

    return FuzzySoftSet(params, universe, np.array([universe.indicator(subsets.get(e, ())) for e in params]))


def _aligned(f: FuzzySoftSet, labels: Sequence[str]) -> np.ndarray:
    return f.grades[[f.params.index(label) for label in labels]]


def fs_subset(f: FuzzySoftSet, g: FuzzySoftSet) -> bool:
    ensure_same_universe(f.universe, g.universe)
    if not f.params.issubset(g.params):
        return False
    return bool(np.all(f.grades <= _aligned(g, f.params.parameters)))


def fs_equal(f: FuzzySoftSet, g: FuzzySoftSet) -> bool:
    ensure_same_universe(f.universe, g.universe)
    if not f.params.same_labels(g.params):
        return False
    return bool(np.array_equal(f.grades, _aligned(g, f.params.parameters)))


def fs_complement(f: FuzzySoftSet) -> FuzzySoftSet:
    return FuzzySoftSet(f.params, f.universe, complement_grades(f.grades))


def fs_union(f: FuzzySoftSet, g: FuzzySoftSet) -> FuzzySoftSet:
    """Union over A ∪ B: rows of A-B from f, of B-A from g, pointwise max on A ∩ B."""

    ensure_same_universe(f.universe, g.universe)
    params = f.params.union(g.params)
    rows = []
    for label in params:
        if label in f.params and label in g.params:
            rows.append(np.maximum(f.grades[f.params.index(label)], g.grades[g.params.index(label)]))
        elif label in f.params:
            rows.append(f.grades[f.params.index(label)])
        else:
            rows.append(g.grades[g.params.index(label)])
    return FuzzySoftSet(params, f.universe, np.array(rows))


def fs_intersection(f: FuzzySoftSet, g: FuzzySoftSet) -> FuzzySoftSet:
    ensure_same_universe(f.universe, g.universe)
    shared = f.params.intersection(g.params)
    if not shared:
        raise EmptyParameterIntersection(
            f"Parameter sets {f.params.parameters} and {g.params.parameters} do not intersect"
        )
    return FuzzySoftSet(ParameterSet(shared), f.universe, np.minimum(_aligned(f, shared), _aligned(g, shared)))


def fs_union_all(family: Sequence[FuzzySoftSet]) -> FuzzySoftSet:
    if not family:
        raise FuzzySoftError("Union of an empty family needs an explicit null set")
    return reduce(fs_union, family)


def fs_intersection_all(family: Sequence[FuzzySoftSet]) -> FuzzySoftSet:
    if not family:
        raise FuzzySoftError("Intersection of an empty family needs an explicit absolute set")
    return reduce(fs_intersection, family)


def fs_product(f: FuzzySoftSet, g: FuzzySoftSet) -> np.ndarray:
    """F.S multiplication into X × X: tensor ``[e, x1, x2] = min{f_e(x1), g_e(x2)}``."""

    ensure_same_universe(f.universe, g.universe)
    if not f.params.same_labels(g.params):
        raise ParameterMismatch("F.S multiplication needs a common parameter set")
    other = _aligned(g, f.params.parameters)
    return np.minimum(f.grades[:, :, None], other[:, None, :])


def fs_quasi_coincident(g: FuzzySoftSet, f: FuzzySoftSet, at: Optional[str] = None) -> bool:
    """g q f: some e (and some x, or the given ``at``) with g_e(x) + f_e(x) > 1."""

    ensure_same_universe(f.universe, g.universe)
    if not g.params.same_labels(f.params):
        raise ParameterMismatch("Quasi-coincidence needs a common parameter set")
    # x + y > 1 compared as x > 1 - y, exact on snapped grades
    excess = g.grades > complement_grades(_aligned(f, g.params.parameters))
    if at is not None:
        excess = excess[:, g.universe.index(at)]
    return bool(np.any(excess))


# F.S points ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FuzzySoftPoint:
    """F.S point x~_E: one object with a grade lambda_e in (0, 1] per parameter."""

    params: ParameterSet
    universe: Universe
    support: str
    lambdas: np.ndarray

    def __post_init__(self) -> None:
        self.universe.index(self.support)
        values = as_grade_array(self.lambdas, shape=(len(self.params),), snap=False)
        if np.any(values <= 0.0):
            raise InvalidPoint(f"F.S point grades must lie in (0, 1], got {values.tolist()}")
        object.__setattr__(self, "lambdas", values)

    @classmethod
    def crisp(cls, params: ParameterSet, universe: Universe, support: str) -> "FuzzySoftPoint":
        return cls(params, universe, support, np.ones(len(params)))

    @property
    def is_crisp(self) -> bool:
        return bool(np.all(self.lambdas == 1.0))

    def grade(self, parameter: str) -> float:
        return float(self.lambdas[self.params.index(parameter)])

    def as_set(self) -> FuzzySoftSet:
        grades = np.zeros((len(self.params), len(self.universe)))
        grades[:, self.universe.index(self.support)] = self.lambdas
        return FuzzySoftSet(self.params, self.universe, grades)

    def complement(self) -> FuzzySoftSet:
        """1 - lambda_e at the support, 1 elsewhere."""

        return fs_complement(self.as_set())

    def restrict(self, parameter: str) -> "FuzzySoftSinglePoint":
        return FuzzySoftSinglePoint(self.params, self.universe, self.support, parameter, self.grade(parameter))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FuzzySoftPoint):
            return NotImplemented
        return not fsp_different(self, other)

    def __hash__(self) -> int:
        return hash(self.as_set())

    def __repr__(self) -> str:
        grades = ", ".join(f"{e}={g:g}" for e, g in zip(self.params, self.lambdas))
        return f"FuzzySoftPoint({self.support}; {grades})"


@dataclass(frozen=True)
class FuzzySoftSinglePoint:
    """F.S single point x~_e: a F.S point restricted to one parameter."""

    params: ParameterSet
    universe: Universe
    support: str
    parameter: str
    lam: float

    def __post_init__(self) -> None:
        self.universe.index(self.support)
        self.params.index(self.parameter)
        if not 0.0 < float(self.lam) <= 1.0:
            raise InvalidPoint(f"F.S single point grade must lie in (0, 1], got {self.lam}")
        object.__setattr__(self, "lam", float(self.lam))

    def as_set(self) -> FuzzySoftSet:
        grades = np.zeros((len(self.params), len(self.universe)))
        grades[self.params.index(self.parameter), self.universe.index(self.support)] = self.lam
        return FuzzySoftSet(self.params, self.universe, grades)


def _check_point_against(pt: FuzzySoftPoint | FuzzySoftSinglePoint, f: FuzzySoftSet) -> None:
    ensure_same_universe(pt.universe, f.universe)
    if not pt.params.same_labels(f.params):
        raise ParameterMismatch("F.S points are compared with F.S sets over the full parameter set")


def fsp_member(pt: FuzzySoftPoint, f: FuzzySoftSet) -> bool:
    _check_point_against(pt, f)
    column = _aligned(f, pt.params.parameters)[:, f.universe.index(pt.support)]
    return bool(np.all(pt.lambdas <= column))


def fssp_member(pt: FuzzySoftSinglePoint, f: FuzzySoftSet) -> bool:
    _check_point_against(pt, f)
    return pt.lam <= f.grade(pt.parameter, pt.support)


def fsp_different(p1: FuzzySoftPoint, p2: FuzzySoftPoint) -> bool:
    ensure_same_universe(p1.universe, p2.universe)
    if not p1.params.same_labels(p2.params):
        raise ParameterMismatch("F.S points over different parameter sets")
    if p1.support != p2.support:
        return True
    other = np.array([p2.grade(label) for label in p1.params])
    return bool(np.any(p1.lambdas != other))


def fsp_distinct(p1: FuzzySoftPoint, p2: FuzzySoftPoint) -> bool:
    ensure_same_universe(p1.universe, p2.universe)
    return fs_intersection(p1.as_set(), p2.as_set()).is_null()


def fsp_quasi_coincident(pt: FuzzySoftPoint, f: FuzzySoftSet) -> bool:
    _check_point_against(pt, f)
    column = _aligned(f, pt.params.parameters)[:, f.universe.index(pt.support)]
    return bool(np.any(pt.lambdas > complement_grades(column)))


def fssp_quasi_coincident(pt: FuzzySoftSinglePoint, f: FuzzySoftSet) -> bool:
    _check_point_against(pt, f)
    return float(pt.lam) > float(complement_grades(np.array(f.grade(pt.parameter, pt.support))))


# F.S mappings -------------------------------------------------------------


@dataclass(frozen=True)
class SoftMapping:
    """h_up: X_E -> Y_E' induced by u: X -> Y and p: E -> E'."""

    source_universe: Universe
    target_universe: Universe
    source_params: ParameterSet
    target_params: ParameterSet
    u: Mapping[str, str]
    p: Mapping[str, str]

    def __post_init__(self) -> None:
        object.__setattr__(self, "u", dict(self.u))
        object.__setattr__(self, "p", dict(self.p))
        for label in self.source_universe:
            if label not in self.u:
                raise InvalidMapping(f"u is undefined at object {label!r}")
            if self.u[label] not in self.target_universe:
                raise InvalidMapping(f"u maps {label!r} outside the target universe")
        for label in self.source_params:
            if label not in self.p:
                raise InvalidMapping(f"p is undefined at parameter {label!r}")
            if self.p[label] not in self.target_params:
                raise InvalidMapping(f"p maps {label!r} outside the target parameters")

    def image_params(self) -> ParameterSet:
        """p(E) in the order of the target parameter set."""

        hit = set(self.p.values())
        return ParameterSet(tuple(label for label in self.target_params if label in hit))

    def is_surjective(self) -> bool:
        return set(self.u.values()) == set(self.target_universe.objects)

    @classmethod
    def identity(cls, universe: Universe, params: ParameterSet) -> "SoftMapping":
        return cls(universe, universe, params, params, {x: x for x in universe}, {e: e for e in params})


def fs_image(h: SoftMapping, f: FuzzySoftSet) -> FuzzySoftSet:
    """[h(f)]_{e'}(y) = sup over u^-1(y) of sup over p^-1(e') ∩ A of f_e(x), 0 if either is empty."""

    ensure_same_universe(h.source_universe, f.universe)
    if not f.params.issubset(h.source_params):
        raise ParameterMismatch("F.S set parameters are not part of the mapping's source parameters")
    params = h.image_params()
    grades = np.zeros((len(params), len(h.target_universe)))
    object_map = np.array([h.target_universe.index(h.u[x]) for x in f.universe])
    for row, label in zip(f.grades, f.params):
        target_row = params.index(h.p[label])
        # sup over the parameter preimage first, then over the object preimage
        np.maximum.at(grades[target_row], object_map, row)
    return FuzzySoftSet(params, h.target_universe, grades)


def fs_preimage(h: SoftMapping, g: FuzzySoftSet) -> FuzzySoftSet:
    """[h^-1(g)]_e(x) = g_{p(e)}(u(x)) when p(e) is in B, else 0."""

    ensure_same_universe(h.target_universe, g.universe)
    object_map = [h.target_universe.index(h.u[x]) for x in h.source_universe]
    rows = []
    for label in h.source_params:
        target = h.p[label]
        if target in g.params:
            rows.append(g.grades[g.params.index(target)][object_map])
        else:
            rows.append(np.zeros(len(h.source_universe)))
    return FuzzySoftSet(h.source_params, h.source_universe, np.array(rows))


__all__ = [
    "EmptyParameterIntersection",
    "FuzzySoftPoint",
    "FuzzySoftSet",
    "FuzzySoftSinglePoint",
    "InvalidMapping",
    "InvalidPoint",
    "ParameterMismatch",
    "ParameterSet",
    "SoftMapping",
    "UnknownParameter",
    "fs_absolute",
    "fs_complement",
    "fs_equal",
    "fs_from_crisp",
    "fs_image",
    "fs_intersection",
    "fs_intersection_all",
    "fs_null",
    "fs_preimage",
    "fs_product",
    "fs_quasi_coincident",
    "fs_subset",
    "fs_union",
    "fs_union_all",
    "fsp_different",
    "fsp_distinct",
    "fsp_member",
    "fsp_quasi_coincident",
    "fssp_member",
    "fssp_quasi_coincident",
]
