"""Fuzzy real numbers stored as nested alpha-cut intervals.

A :class:`FuzzyReal` keeps the lower and upper endpoint of its cut at every
level of an :class:`AlphaGrid`.  Arithmetic works level by level; the sup-min
extension principle is available as a brute-force oracle
(:func:`fr_ext_add` and friends) used to cross-check the cut arithmetic.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np

from .core_fuzzy import FuzzySoftError

LOGGER = logging.getLogger(__name__)

DEFAULT_LEVELS = 101
DEFAULT_SUPPORT_STEP = 1e-3
# (t, s) pairs evaluated per block by the sup-min oracle.
ORACLE_CELLS = 1 << 20
# Upper bound on the operand samples of the product and quotient oracles.
ORACLE_MAX_SAMPLES = 20_000


class GridMismatch(FuzzySoftError):
    """Raised when operands live on different alpha grids."""


class OffGridAlpha(FuzzySoftError):
    """Raised when a level query does not hit a grid level."""


class OrderingViolation(FuzzySoftError):
    """Raised when constructor corner points are out of order."""


class DivisionByIntervalContainingZero(FuzzySoftError):
    """Raised when a divisor cut contains or touches 0."""


class InvalidFuzzyReal(FuzzySoftError):
    """Raised when endpoint arrays are empty at some level or not nested."""


@dataclass(frozen=True, eq=False)
class AlphaGrid:
    levels: np.ndarray

    def __post_init__(self) -> None:
        levels = np.array(self.levels, dtype=np.float64)
        if levels.ndim != 1 or levels.size < 2:
            raise FuzzySoftError("An alpha grid needs at least two levels")
        if levels[0] <= 0.0 or levels[-1] != 1.0 or np.any(np.diff(levels) <= 0.0):
            raise FuzzySoftError("Alpha levels must increase strictly within (0, 1] and end at 1")
        levels.flags.writeable = False
        object.__setattr__(self, "levels", levels)

    @classmethod
    def uniform(cls, m: int = DEFAULT_LEVELS) -> "AlphaGrid":
        """Levels ``j/m`` for ``j = 1..m``."""

        if m < 2:
            raise FuzzySoftError(f"An alpha grid needs at least two levels, got {m}")
        return cls(np.arange(1, m + 1, dtype=np.float64) / m)

    def __len__(self) -> int:
        return int(self.levels.size)

    def index_of(self, alpha: float) -> int:
        hits = np.flatnonzero(np.isclose(self.levels, float(alpha), rtol=0.0, atol=1e-12))
        if hits.size == 0:
            raise OffGridAlpha(f"alpha={alpha} is not a level of this grid")
        return int(hits[0])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AlphaGrid):
            return NotImplemented
        return bool(np.array_equal(self.levels, other.levels))

    def __hash__(self) -> int:
        return hash(self.levels.tobytes())


def _frozen(values: np.ndarray) -> np.ndarray:
    array = np.array(values, dtype=np.float64)
    array.flags.writeable = False
    return array


@dataclass(frozen=True, eq=False)
class FuzzyReal:
    """Nested family of closed intervals ``[lower[j], upper[j]]``, one per grid level."""

    grid: AlphaGrid
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self) -> None:
        lower = _frozen(self.lower)
        upper = _frozen(self.upper)
        shape = (len(self.grid),)
        if lower.shape != shape or upper.shape != shape:
            raise InvalidFuzzyReal(f"Endpoint arrays must have shape {shape}")
        if not (np.all(np.isfinite(lower)) and np.all(np.isfinite(upper))):
            raise InvalidFuzzyReal("Endpoints must be finite")
        if np.any(lower > upper):
            raise InvalidFuzzyReal("Empty cut: lower endpoint above upper endpoint")
        if np.any(np.diff(lower) < 0.0) or np.any(np.diff(upper) > 0.0):
            raise InvalidFuzzyReal("Cuts are not nested")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    def cut(self, alpha: float) -> Tuple[float, float]:
        j = self.grid.index_of(alpha)
        return float(self.lower[j]), float(self.upper[j])

    @property
    def support_hull(self) -> Tuple[float, float]:
        return float(self.lower[0]), float(self.upper[0])

    @property
    def core(self) -> Tuple[float, float]:
        return float(self.lower[-1]), float(self.upper[-1])

    @property
    def is_crisp(self) -> bool:
        return bool(np.all(self.lower == self.lower[-1]) and np.all(self.upper == self.lower[-1]))

    @property
    def is_nonnegative(self) -> bool:
        return bool(self.lower[0] >= 0.0)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FuzzyReal):
            return NotImplemented
        return self.grid == other.grid and fr_equal(self, other)

    def __hash__(self) -> int:
        return hash((self.grid, self.lower.tobytes(), self.upper.tobytes()))

    def __repr__(self) -> str:
        lo, hi = self.support_hull
        c_lo, c_hi = self.core
        return f"FuzzyReal(support=[{lo:g}, {hi:g}], core=[{c_lo:g}, {c_hi:g}], m={len(self.grid)})"


@dataclass(frozen=True, eq=False)
class NonNegFuzzyReal(FuzzyReal):
    """A fuzzy real whose lowest cut lies in [0, inf)."""

    def __post_init__(self) -> None:
        super().__post_init__()
        if self.lower[0] < 0.0:
            raise InvalidFuzzyReal(f"Non-negative fuzzy real has lower endpoint {self.lower[0]}")


def _same_grid(a: FuzzyReal, b: FuzzyReal) -> None:
    if a.grid != b.grid:
        raise GridMismatch(f"Alpha grids differ ({len(a.grid)} vs {len(b.grid)} levels)")


# Constructors -------------------------------------------------------------


def fr_crisp(r: float, grid: AlphaGrid) -> FuzzyReal:
    values = np.full(len(grid), float(r))
    return FuzzyReal(grid, values, values)


def fr_trapezoidal(a: float, b: float, c: float, d: float, grid: AlphaGrid) -> FuzzyReal:
    if not a <= b <= c <= d:
        raise OrderingViolation(f"Trapezoid corners must satisfy a <= b <= c <= d, got {(a, b, c, d)}")
    alpha = grid.levels
    # clipping keeps L <= b and R >= c despite rounding in the interpolation
    lower = np.minimum(a + alpha * (b - a), b)
    upper = np.maximum(d - alpha * (d - c), c)
    lower[-1], upper[-1] = b, c
    return FuzzyReal(grid, lower, upper)


def fr_triangular(a: float, b: float, c: float, grid: AlphaGrid) -> FuzzyReal:
    if not a <= b <= c:
        raise OrderingViolation(f"Triangle corners must satisfy a <= b <= c, got {(a, b, c)}")
    return fr_trapezoidal(a, b, b, c, grid)


# Normalization ------------------------------------------------------------


@dataclass(frozen=True)
class Normalization:
    lower: np.ndarray
    upper: np.ndarray
    delta: float
    outward: bool


def fr_normalize(lower: np.ndarray, upper: np.ndarray) -> Normalization:
    """Monotone envelope of raw levelwise endpoints.

    The inward envelope (running max of L, running min of R from the lowest
    level up) is used unless it empties a cut; the outward envelope then
    takes over.
    """

    lower = np.asarray(lower, dtype=np.float64)
    upper = np.asarray(upper, dtype=np.float64)
    new_lower = np.maximum.accumulate(lower)
    new_upper = np.minimum.accumulate(upper)
    outward = bool(np.any(new_lower > new_upper))
    if outward:
        new_lower = np.minimum.accumulate(lower[::-1])[::-1]
        new_upper = np.maximum.accumulate(upper[::-1])[::-1]
    delta = float(max(np.max(np.abs(new_lower - lower)), np.max(np.abs(new_upper - upper))))
    return Normalization(new_lower, new_upper, delta, outward)


def _build(grid: AlphaGrid, lower: np.ndarray, upper: np.ndarray, op: str) -> FuzzyReal:
    fixed = fr_normalize(lower, upper)
    if fixed.delta > 0.0:
        LOGGER.warning(
            "Normalization changed the %s result by %.3g (%s envelope)",
            op,
            fixed.delta,
            "outward" if fixed.outward else "inward",
        )
    return FuzzyReal(grid, fixed.lower, fixed.upper)


# Level arithmetic ---------------------------------------------------------


def fr_add(a: FuzzyReal, b: FuzzyReal) -> FuzzyReal:
    _same_grid(a, b)
    return _build(a.grid, a.lower + b.lower, a.upper + b.upper, "add")


def fr_sub(a: FuzzyReal, b: FuzzyReal) -> FuzzyReal:
    """Levelwise ``[min{a1-b1, a2-b2}, max{a1-b1, a2-b2}]``."""

    _same_grid(a, b)
    first = a.lower - b.lower
    second = a.upper - b.upper
    return _build(a.grid, np.minimum(first, second), np.maximum(first, second), "sub")


def _endpoint_hull(candidates: Sequence[np.ndarray]) -> Tuple[np.ndarray, np.ndarray]:
    stack = np.vstack(candidates)
    return stack.min(axis=0), stack.max(axis=0)


def fr_mul(a: FuzzyReal, b: FuzzyReal) -> FuzzyReal:
    _same_grid(a, b)
    lower, upper = _endpoint_hull(
        [a.lower * b.lower, a.lower * b.upper, a.upper * b.lower, a.upper * b.upper]
    )
    return _build(a.grid, lower, upper, "mul")


def _check_divisor(b: FuzzyReal) -> None:
    touching = (b.lower <= 0.0) & (b.upper >= 0.0)
    if np.any(touching):
        j = int(np.flatnonzero(touching)[0])
        raise DivisionByIntervalContainingZero(
            f"Divisor cut [{b.lower[j]:g}, {b.upper[j]:g}] at alpha={b.grid.levels[j]:g} contains 0"
        )


def fr_div(a: FuzzyReal, b: FuzzyReal) -> FuzzyReal:
    _same_grid(a, b)
    _check_divisor(b)
    lower, upper = _endpoint_hull(
        [a.lower / b.lower, a.lower / b.upper, a.upper / b.lower, a.upper / b.upper]
    )
    return _build(a.grid, lower, upper, "div")


def fr_abs(a: FuzzyReal) -> NonNegFuzzyReal:
    lower = np.maximum(np.maximum(0.0, a.lower), -a.upper)
    upper = np.maximum(np.abs(a.lower), np.abs(a.upper))
    fixed = fr_normalize(lower, upper)
    return NonNegFuzzyReal(a.grid, fixed.lower, fixed.upper)


def fr_scale(r: float, a: FuzzyReal) -> FuzzyReal:
    """Product with the crisp scalar ``r``."""

    r = float(r)
    if r >= 0.0:
        return FuzzyReal(a.grid, r * a.lower, r * a.upper)
    return FuzzyReal(a.grid, r * a.upper, r * a.lower)


def fr_leq(a: FuzzyReal, b: FuzzyReal) -> bool:
    _same_grid(a, b)
    return bool(np.all(a.lower <= b.lower) and np.all(a.upper <= b.upper))


def fr_equal(a: FuzzyReal, b: FuzzyReal, tol: float = 0.0) -> bool:
    _same_grid(a, b)
    if tol == 0.0:
        return bool(np.array_equal(a.lower, b.lower) and np.array_equal(a.upper, b.upper))
    return bool(np.all(np.abs(a.lower - b.lower) <= tol) and np.all(np.abs(a.upper - b.upper) <= tol))


def _grade_on(a: FuzzyReal, lo: float | np.ndarray, hi: float | np.ndarray) -> np.ndarray:
    """Highest level whose cut meets ``[lo, hi]``, 0 if none does."""

    reach_lower = np.searchsorted(a.lower, np.asarray(hi, dtype=np.float64), side="right")
    reach_upper = np.searchsorted(-a.upper, -np.asarray(lo, dtype=np.float64), side="right")
    levels = np.concatenate(([0.0], a.grid.levels))
    return levels[np.minimum(reach_lower, reach_upper)]


def fr_membership(a: FuzzyReal, t: float | np.ndarray, slack: float = 0.0) -> np.ndarray:
    """Grade of ``t``: the highest level whose cut contains it, 0 if none does.

    With ``slack > 0`` every cut is widened by ``slack`` on both sides.
    """

    values = np.asarray(t, dtype=np.float64)
    return _grade_on(a, values - slack, values + slack)


# Sup-min oracle -----------------------------------------------------------


@dataclass(frozen=True)
class DiscretizedMembership:
    """Membership function sampled on a regular grid of points."""

    points: np.ndarray
    grades: np.ndarray

    def grade_at(self, t: float) -> float:
        j = int(np.argmin(np.abs(self.points - t)))
        return float(self.grades[j])

    def cut(self, alpha: float) -> Optional[Tuple[float, float]]:
        hit = self.points[self.grades >= alpha]
        if hit.size == 0:
            return None
        return float(hit.min()), float(hit.max())

    def recovered_cuts(self, grid: AlphaGrid) -> Tuple[np.ndarray, np.ndarray]:
        lower = np.full(len(grid), np.nan)
        upper = np.full(len(grid), np.nan)
        for j, alpha in enumerate(grid.levels):
            found = self.cut(float(alpha) - 1e-12)
            if found is not None:
                lower[j], upper[j] = found
        return lower, upper


def _sample(lo: float, hi: float, step: float) -> np.ndarray:
    if step <= 0.0:
        raise FuzzySoftError(f"support_step must be positive, got {step}")
    count = int(math.ceil((hi - lo) / step)) + 1 if hi > lo else 1
    return np.linspace(lo, hi, count)


def _half_width(points: np.ndarray, step: float) -> float:
    return float(points[1] - points[0]) / 2.0 if points.size > 1 else step / 2.0


def _operand_cells(lo: float, hi: float, step: float, scale: float) -> Tuple[np.ndarray, float]:
    """Cell centres over ``[lo, hi]`` with spacing ``step / scale``, capped at ``ORACLE_MAX_SAMPLES``."""

    fine = step / max(1.0, scale)
    if (hi - lo) / fine > ORACLE_MAX_SAMPLES:
        LOGGER.debug("Operand sampling capped at %d points over [%g, %g]", ORACLE_MAX_SAMPLES, lo, hi)
        fine = (hi - lo) / ORACLE_MAX_SAMPLES
    points = _sample(lo, hi, fine)
    return points, _half_width(points, fine)


def _sup_min(t_points: np.ndarray, s_points: np.ndarray, pair: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    rows = max(1, ORACLE_CELLS // max(1, s_points.size))
    grades = np.empty(t_points.size)
    for start in range(0, t_points.size, rows):
        block = t_points[start : start + rows, None]
        grades[start : start + rows] = pair(block).max(axis=1, initial=0.0)
    return grades


def _span(values: Sequence[np.ndarray]) -> Tuple[np.ndarray, np.ndarray]:
    return np.minimum.reduce(values), np.maximum.reduce(values)


# Each oracle grid node stands for a cell of width support_step, so memberships
# are read with half a step of slack.
def fr_ext_add(a: FuzzyReal, b: FuzzyReal, support_step: float = DEFAULT_SUPPORT_STEP) -> DiscretizedMembership:
    """``t -> sup_s min{mu_a(s), mu_b(t - s)}``."""

    s = _sample(*a.support_hull, support_step)
    t = _sample(a.lower[0] + b.lower[0], a.upper[0] + b.upper[0], support_step)
    half = support_step / 2.0
    mu_s = fr_membership(a, s, half)
    grades = _sup_min(t, s, lambda block: np.minimum(mu_s, fr_membership(b, block - s, half)))
    return DiscretizedMembership(t, grades)


def fr_ext_sub(a: FuzzyReal, b: FuzzyReal, support_step: float = DEFAULT_SUPPORT_STEP) -> DiscretizedMembership:
    """``t -> sup_s min{mu_a(s), mu_b(s - t)}``."""

    s = _sample(*a.support_hull, support_step)
    t = _sample(a.lower[0] - b.upper[0], a.upper[0] - b.lower[0], support_step)
    half = support_step / 2.0
    mu_s = fr_membership(a, s, half)
    grades = _sup_min(t, s, lambda block: np.minimum(mu_s, fr_membership(b, s - block, half)))
    return DiscretizedMembership(t, grades)


# Products and quotients scale a cell by the other operand, so the operand is
# sampled finer and each (t, s) cell pair is read as the interval it spans.
def fr_ext_mul(a: FuzzyReal, b: FuzzyReal, support_step: float = DEFAULT_SUPPORT_STEP) -> DiscretizedMembership:
    """``t -> sup_{s r = t} min{mu_a(s), mu_b(r)}``."""

    corners = [x * y for x in a.support_hull for y in b.support_hull]
    t = _sample(min(corners), max(corners), support_step)
    t_half = _half_width(t, support_step)
    reach = max(abs(y) for y in b.support_hull)
    s, s_half = _operand_cells(*a.support_hull, support_step, 2.0 * reach)
    mu_s = _grade_on(a, s - s_half, s + s_half)
    grades = np.zeros(t.size)

    away = np.abs(s) > s_half
    if np.any(away):
        s_lo, s_hi, mu_away = s[away] - s_half, s[away] + s_half, mu_s[away]

        def pair(block: np.ndarray) -> np.ndarray:
            t_lo, t_hi = block - t_half, block + t_half
            r_lo, r_hi = _span([t_lo / s_lo, t_lo / s_hi, t_hi / s_lo, t_hi / s_hi])
            return np.minimum(mu_away, _grade_on(b, r_lo, r_hi))

        grades = _sup_min(t, s_lo, pair)

    # Cells around 0 cannot be divided through; push them forward level by level.
    for centre, mu_cell in zip(s[~away], mu_s[~away]):
        cell = (centre - s_half, centre + s_half)
        for level, lower, upper in zip(b.grid.levels, b.lower, b.upper):
            products = [x * y for x in cell for y in (lower, upper)]
            lo, hi = min(products), max(products)
            hit = (t + t_half >= lo) & (t - t_half <= hi)
            grades[hit] = np.maximum(grades[hit], min(float(mu_cell), float(level)))
    return DiscretizedMembership(t, grades)


def fr_ext_div(a: FuzzyReal, b: FuzzyReal, support_step: float = DEFAULT_SUPPORT_STEP) -> DiscretizedMembership:
    """``t -> sup_s min{mu_a(s t), mu_b(s)}``, s over the divisor support."""

    _check_divisor(b)
    corners = [x / y for x in a.support_hull for y in b.support_hull]
    t = _sample(min(corners), max(corners), support_step)
    t_half = _half_width(t, support_step)
    nearest = min(abs(y) for y in b.support_hull)
    reach = max(abs(x) for x in a.support_hull)
    s, s_half = _operand_cells(*b.support_hull, support_step, 2.0 * reach / nearest**2)
    mu_s = _grade_on(b, s - s_half, s + s_half)
    s_lo, s_hi = s - s_half, s + s_half

    def pair(block: np.ndarray) -> np.ndarray:
        t_lo, t_hi = block - t_half, block + t_half
        p_lo, p_hi = _span([t_lo * s_lo, t_lo * s_hi, t_hi * s_lo, t_hi * s_hi])
        return np.minimum(mu_s, _grade_on(a, p_lo, p_hi))

    return DiscretizedMembership(t, _sup_min(t, s, pair))


LEVEL_OPS: Dict[str, Callable[[FuzzyReal, FuzzyReal], FuzzyReal]] = {
    "add": fr_add,
    "sub": fr_sub,
    "mul": fr_mul,
    "div": fr_div,
}

ORACLE_OPS: Dict[str, Callable[..., DiscretizedMembership]] = {
    "add": fr_ext_add,
    "sub": fr_ext_sub,
    "mul": fr_ext_mul,
    "div": fr_ext_div,
}


@dataclass(frozen=True)
class OracleReport:
    op: str
    deviation: np.ndarray
    tolerance: float

    @property
    def max_deviation(self) -> float:
        return float(np.max(self.deviation))

    @property
    def agrees(self) -> bool:
        return bool(self.max_deviation <= self.tolerance)

    @property
    def worst_level(self) -> int:
        return int(np.argmax(self.deviation))


def oracle_deviation(
    a: FuzzyReal, b: FuzzyReal, op: str, support_step: float = DEFAULT_SUPPORT_STEP
) -> OracleReport:
    """Per-level gap between cut arithmetic and the cuts recovered from the sup-min oracle."""

    if op not in LEVEL_OPS:
        raise FuzzySoftError(f"Unknown fuzzy-real operation {op!r}")
    exact = LEVEL_OPS[op](a, b)
    sampled = ORACLE_OPS[op](a, b, support_step)
    lower, upper = sampled.recovered_cuts(a.grid)
    deviation = np.maximum(np.abs(exact.lower - lower), np.abs(exact.upper - upper))
    deviation = np.where(np.isnan(deviation), np.inf, deviation)
    report = OracleReport(op, deviation, max(support_step, 2.0 / len(a.grid)))
    if not report.agrees:
        LOGGER.warning(
            "Oracle deviation for %s is %.4g at alpha=%.3g (tolerance %.4g)",
            op,
            report.max_deviation,
            a.grid.levels[report.worst_level],
            report.tolerance,
        )
    return report


__all__ = [
    "DEFAULT_LEVELS",
    "DEFAULT_SUPPORT_STEP",
    "AlphaGrid",
    "DiscretizedMembership",
    "DivisionByIntervalContainingZero",
    "FuzzyReal",
    "GridMismatch",
    "InvalidFuzzyReal",
    "LEVEL_OPS",
    "NonNegFuzzyReal",
    "Normalization",
    "ORACLE_OPS",
    "OffGridAlpha",
    "OracleReport",
    "OrderingViolation",
    "fr_abs",
    "fr_add",
    "fr_crisp",
    "fr_div",
    "fr_equal",
    "fr_ext_add",
    "fr_ext_div",
    "fr_ext_mul",
    "fr_ext_sub",
    "fr_leq",
    "fr_membership",
    "fr_mul",
    "fr_normalize",
    "fr_scale",
    "fr_sub",
    "fr_trapezoidal",
    "fr_triangular",
    "oracle_deviation",
]
