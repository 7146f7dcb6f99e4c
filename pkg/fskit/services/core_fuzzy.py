"""Grades, finite universes and plain fuzzy sets."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import FrozenSet, Iterable, Iterator, Mapping, Sequence, Tuple

import numpy as np

LOGGER = logging.getLogger(__name__)

# Only used where arithmetic chains occur; max/min/1-x comparisons stay exact.
DEFAULT_TOLERANCE = 1e-12

# Grades are snapped to this many decimals so that 1 - (1 - x) == x holds bit for bit.
GRADE_DECIMALS = 12


class FuzzySoftError(ValueError):
    """Base class for every domain error raised by fskit."""


class InvalidGrade(FuzzySoftError):
    """Raised when a membership grade falls outside [0, 1]."""


class UniverseMismatch(FuzzySoftError):
    """Raised when two operands are declared over different universes."""


class Grade(float):
    """A membership degree in [0, 1]."""

    def __new__(cls, value: float) -> "Grade":
        number = float(value)
        if not 0.0 <= number <= 1.0:
            raise InvalidGrade(f"Grade {value!r} is outside [0, 1]")
        return super().__new__(cls, round(number, GRADE_DECIMALS))


def snap_grades(values: np.ndarray) -> np.ndarray:
    return np.round(values, GRADE_DECIMALS)


def as_grade_array(
    values: Iterable[float] | np.ndarray, *, shape: Tuple[int, ...] | None = None, snap: bool = True
) -> np.ndarray:
    """Return a read-only float64 copy of ``values`` after range validation, snapped unless ``snap`` is off."""

    array = np.array(values, dtype=np.float64)
    if shape is not None and array.shape != shape:
        raise InvalidGrade(f"Expected grade array of shape {shape}, got {array.shape}")
    if array.size and (np.isnan(array).any() or array.min() < 0.0 or array.max() > 1.0):
        bad = array[(array < 0.0) | (array > 1.0) | np.isnan(array)]
        raise InvalidGrade(f"Grades outside [0, 1]: {bad.tolist()}")
    if snap:
        array = snap_grades(array)
    array.flags.writeable = False
    return array


def complement_grades(values: np.ndarray) -> np.ndarray:
    return snap_grades(1.0 - values)


@dataclass(frozen=True)
class Universe:
    """Finite ordered set of object labels."""

    objects: Tuple[str, ...]

    def __post_init__(self) -> None:
        objects = tuple(str(label) for label in self.objects)
        object.__setattr__(self, "objects", objects)
        if not objects:
            raise FuzzySoftError("A universe needs at least one object")
        if len(set(objects)) != len(objects):
            raise FuzzySoftError(f"Duplicate object labels in universe {objects}")

    def __len__(self) -> int:
        return len(self.objects)

    def __iter__(self) -> Iterator[str]:
        return iter(self.objects)

    def __contains__(self, label: object) -> bool:
        return label in self.objects

    def index(self, label: str) -> int:
        try:
            return self.objects.index(label)
        except ValueError as exc:
            raise FuzzySoftError(f"Unknown object {label!r}") from exc

    def labels_where(self, mask: np.ndarray) -> FrozenSet[str]:
        return frozenset(label for label, keep in zip(self.objects, mask) if keep)

    def indicator(self, subset: Iterable[str]) -> np.ndarray:
        """Characteristic vector of ``subset``."""

        members = set(subset)
        unknown = members - set(self.objects)
        if unknown:
            raise FuzzySoftError(f"Objects {sorted(unknown)} are not in the universe")
        return np.array([1.0 if label in members else 0.0 for label in self.objects])


def ensure_same_universe(left: Universe, right: Universe) -> None:
    if left != right:
        raise UniverseMismatch(f"Universe mismatch: {left.objects} vs {right.objects}")


@dataclass(frozen=True, eq=False)
class FuzzySet:
    """A fuzzy subset of a finite universe, one grade per object."""

    universe: Universe
    grades: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "grades", as_grade_array(self.grades, shape=(len(self.universe),)))

    @classmethod
    def from_mapping(cls, universe: Universe, grades: Mapping[str, float]) -> "FuzzySet":
        """Build from ``{label: grade}``; unlisted objects get grade 0."""

        values = np.zeros(len(universe))
        for label, value in grades.items():
            values[universe.index(label)] = value
        return cls(universe, values)

    def grade(self, label: str) -> Grade:
        return Grade(self.grades[self.universe.index(label)])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FuzzySet):
            return NotImplemented
        return self.universe == other.universe and np.array_equal(self.grades, other.grades)

    def __hash__(self) -> int:
        return hash((self.universe, self.grades.tobytes()))

    def __repr__(self) -> str:
        pairs = ", ".join(f"{g:g}/{x}" for x, g in zip(self.universe, self.grades))
        return f"FuzzySet({{{pairs}}})"


def fz_null(universe: Universe) -> FuzzySet:
    return FuzzySet(universe, np.zeros(len(universe)))


def fz_absolute(universe: Universe) -> FuzzySet:
    return FuzzySet(universe, np.ones(len(universe)))


def fz_complement(a: FuzzySet) -> FuzzySet:
    return FuzzySet(a.universe, complement_grades(a.grades))


def fz_max(a: FuzzySet, b: FuzzySet) -> FuzzySet:
    ensure_same_universe(a.universe, b.universe)
    return FuzzySet(a.universe, np.maximum(a.grades, b.grades))


def fz_min(a: FuzzySet, b: FuzzySet) -> FuzzySet:
    ensure_same_universe(a.universe, b.universe)
    return FuzzySet(a.universe, np.minimum(a.grades, b.grades))


def fz_subset(a: FuzzySet, b: FuzzySet) -> bool:
    ensure_same_universe(a.universe, b.universe)
    return bool(np.all(a.grades <= b.grades))


def fz_alpha_cut(a: FuzzySet, alpha: float) -> FrozenSet[str]:
    """Objects whose grade reaches ``alpha``; ``alpha`` must lie in (0, 1]."""

    level = float(alpha)
    if not 0.0 < level <= 1.0:
        raise InvalidGrade(f"alpha-cuts are only defined for alpha in (0, 1], got {alpha!r}")
    return a.universe.labels_where(a.grades >= level)


def fz_support(a: FuzzySet) -> FrozenSet[str]:
    return a.universe.labels_where(a.grades > 0.0)


def fz_superlevel(a: FuzzySet, threshold: float) -> FrozenSet[str]:
    """Strict superlevel set ``{x : grade(x) > threshold}``."""

    return a.universe.labels_where(a.grades > threshold)


def grades_on_lattice(values: Sequence[float], lattice: Sequence[float]) -> bool:
    allowed = set(float(v) for v in lattice)
    return all(float(v) in allowed for v in values)


__all__ = [
    "DEFAULT_TOLERANCE",
    "GRADE_DECIMALS",
    "FuzzySet",
    "FuzzySoftError",
    "Grade",
    "InvalidGrade",
    "Universe",
    "UniverseMismatch",
    "as_grade_array",
    "complement_grades",
    "ensure_same_universe",
    "fz_absolute",
    "fz_alpha_cut",
    "fz_complement",
    "fz_max",
    "fz_min",
    "fz_null",
    "fz_subset",
    "fz_superlevel",
    "fz_support",
    "grades_on_lattice",
    "snap_grades",
]
