"""Fuzzy soft normed spaces over R^d.

Norms are characteristic lifts of a weighted base p-norm: the value of a
F.S point at parameter ``e`` is the crisp fuzzy real ``w_e * ||x||_p`` at
every alpha level.  On top of that this module checks the norm axioms,
separates distinct points by lifted balls, decides convergence and the
Cauchy property on finite prefixes, probes sequential continuity and runs
the contraction fixed-point iteration.
"""
from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
import sympy as sp

from .core_fuzzy import FuzzySoftError, as_grade_array
from .fuzzy_real import AlphaGrid, fr_crisp, fr_equal
from .soft_algebra import InvalidPoint, ParameterMismatch, ParameterSet
from .soft_real import FuzzySoftReal, fsr_abs, fsr_add, fsr_crisp, fsr_equal, fsr_leq, fsr_mul

LOGGER = logging.getLogger(__name__)

SUPPORTED_P = (1.0, 2.0, math.inf)
# Largest validation grid used by hausdorff_separate.
SEPARATION_GRID_LIMIT = 200_000
HOMOGENEITY_RTOL = 1e-12


class DimensionMismatch(FuzzySoftError):
    """Raised when vectors of different dimension meet."""


class NotDistinct(FuzzySoftError):
    """Raised when two F.S points share their support."""


class NonMonotoneIndices(FuzzySoftError):
    """Raised when subsequence indices are not strictly increasing or out of range."""


class InvalidContraction(FuzzySoftError):
    """Raised when a map cannot serve as a contraction with the requested constant."""


class ContractionViolated(FuzzySoftError):
    """Raised when iterates break the declared Lipschitz constant."""

    def __init__(self, step: int, ratio: float, k: float) -> None:
        super().__init__(f"Step {step} contracted by {ratio:.6g}, above k={k:g}")
        self.step = step
        self.ratio = ratio


def parse_p(value: Union[str, float, int]) -> float:
    """``"1"``, ``"2"`` or ``"inf"`` as the float exponent of a p-norm."""

    text = str(value).strip().lower()
    p = math.inf if text in {"inf", "infinity", "max"} else float(text)
    if p not in SUPPORTED_P:
        raise FuzzySoftError(f"Unsupported norm exponent {value!r}; use 1, 2 or inf")
    return p


def _vector(values: Sequence[float] | np.ndarray) -> np.ndarray:
    array = np.array(values, dtype=np.float64).reshape(-1)
    if array.size == 0 or not np.all(np.isfinite(array)):
        raise FuzzySoftError(f"Vectors need finite entries, got {values!r}")
    array.flags.writeable = False
    return array


@dataclass(frozen=True, eq=False)
class VectorPoint:
    coords: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "coords", _vector(self.coords))

    @property
    def dim(self) -> int:
        return int(self.coords.size)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VectorPoint):
            return NotImplemented
        return bool(np.array_equal(self.coords, other.coords))

    def __hash__(self) -> int:
        return hash(self.coords.tobytes())


@dataclass(frozen=True, eq=False)
class FSVectorPoint:
    """F.S point over R^d: a support vector and a grade in (0, 1] per parameter."""

    vector: VectorPoint
    params: ParameterSet
    lambdas: np.ndarray

    def __post_init__(self) -> None:
        values = as_grade_array(self.lambdas, shape=(len(self.params),), snap=False)
        if np.any(values <= 0.0):
            raise InvalidPoint(f"F.S point grades must lie in (0, 1], got {values.tolist()}")
        object.__setattr__(self, "lambdas", values)

    @classmethod
    def of(
        cls, coords: Sequence[float] | np.ndarray, params: ParameterSet, lambdas: Optional[Sequence[float]] = None
    ) -> "FSVectorPoint":
        """Point at ``coords``; crisp (all grades 1) unless ``lambdas`` is given."""

        grades = np.ones(len(params)) if lambdas is None else lambdas
        return cls(VectorPoint(coords), params, grades)

    @property
    def x(self) -> np.ndarray:
        return self.vector.coords

    @property
    def dim(self) -> int:
        return self.vector.dim

    @property
    def is_crisp(self) -> bool:
        return bool(np.all(self.lambdas == 1.0))

    def moved_to(self, coords: Sequence[float] | np.ndarray) -> "FSVectorPoint":
        return FSVectorPoint(VectorPoint(coords), self.params, self.lambdas)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FSVectorPoint):
            return NotImplemented
        return (
            self.vector == other.vector
            and self.params.parameters == other.params.parameters
            and bool(np.array_equal(self.lambdas, other.lambdas))
        )

    def __hash__(self) -> int:
        return hash((self.vector, self.params.parameters, self.lambdas.tobytes()))

    def __repr__(self) -> str:
        grades = ", ".join(f"{e}={g:g}" for e, g in zip(self.params, self.lambdas))
        return f"FSVectorPoint({self.x.tolist()}; {grades})"


def _same_space(a: FSVectorPoint, b: FSVectorPoint) -> None:
    if a.dim != b.dim:
        raise DimensionMismatch(f"Dimension {a.dim} vs {b.dim}")
    if a.params.parameters != b.params.parameters:
        raise ParameterMismatch(f"Parameter sets differ: {a.params.parameters} vs {b.params.parameters}")


# Norms --------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FSNorm:
    """Characteristic lift of ``w_e * ||x||_p``.

    Direct construction does not validate the weights; use :meth:`lifted`.
    """

    params: ParameterSet
    grid: AlphaGrid
    p: float = 2.0
    weights: np.ndarray = field(default=None)  # type: ignore[assignment]
    dim: Optional[int] = None

    def __post_init__(self) -> None:
        weights = np.ones(len(self.params)) if self.weights is None else np.array(self.weights, dtype=np.float64)
        if weights.shape != (len(self.params),):
            raise ParameterMismatch(f"Expected {len(self.params)} weights, got {weights.shape}")
        weights.flags.writeable = False
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "p", parse_p(self.p))

    @classmethod
    def lifted(
        cls,
        params: ParameterSet,
        grid: AlphaGrid,
        p: Union[str, float] = 2.0,
        weights: Optional[Sequence[float]] = None,
        dim: Optional[int] = None,
    ) -> "FSNorm":
        if weights is not None and any(float(w) <= 0.0 for w in weights):
            raise FuzzySoftError(f"Norm weights must be positive, got {list(weights)}")
        return cls(params, grid, parse_p(p), None if weights is None else np.asarray(weights, dtype=np.float64), dim)

    def base(self, x: np.ndarray) -> float:
        return float(np.linalg.norm(np.asarray(x, dtype=np.float64), ord=self.p))

    def slices(self, x: np.ndarray) -> np.ndarray:
        """``w_e * ||x||_p`` for every parameter."""

        return self.weights * self.base(x)

    def distance(self, x: np.ndarray, y: np.ndarray) -> float:
        """Largest slice norm of ``x - y``."""

        return float(np.max(self.slices(np.asarray(x) - np.asarray(y))))

    def check_point(self, pt: FSVectorPoint) -> None:
        if self.dim is not None and pt.dim != self.dim:
            raise DimensionMismatch(f"Norm is defined on R^{self.dim}, point has dimension {pt.dim}")
        if pt.params.parameters != self.params.parameters:
            raise ParameterMismatch("Point and norm use different parameter sets")


def fsnorm_eval(n: FSNorm, pt: FSVectorPoint) -> FuzzySoftReal:
    n.check_point(pt)
    return FuzzySoftReal(n.params, tuple(fr_crisp(value, n.grid) for value in n.slices(pt.x)))


def fsnorm_slice(n: FSNorm, pt: FSVectorPoint, e: str, alpha: float, i: int = 1) -> float:
    """Endpoint ``i`` (1 lower, 2 upper) of the norm's cut at ``(e, alpha)``."""

    lower, upper = fsnorm_eval(n, pt).value(e).cut(alpha)
    return lower if i == 1 else upper


# Point arithmetic ---------------------------------------------------------


def fs_vec_add(a: FSVectorPoint, b: FSVectorPoint) -> FSVectorPoint:
    """Sup-min sum of two points: support ``x + y``, grades ``min``."""

    _same_space(a, b)
    return FSVectorPoint(VectorPoint(a.x + b.x), a.params, np.minimum(a.lambdas, b.lambdas))


def fs_vec_sub(a: FSVectorPoint, b: FSVectorPoint) -> FSVectorPoint:
    _same_space(a, b)
    return FSVectorPoint(VectorPoint(a.x - b.x), a.params, np.minimum(a.lambdas, b.lambdas))


def fs_scalar_mul(r: float, a: FSVectorPoint) -> FSVectorPoint:
    return a.moved_to(float(r) * a.x)


@dataclass(frozen=True, eq=False)
class FSVectorSet:
    """Finitely supported F.S set over R^d: support rows and one grade row per parameter."""

    params: ParameterSet
    points: np.ndarray
    grades: np.ndarray

    def __post_init__(self) -> None:
        points = np.array(self.points, dtype=np.float64)
        if points.ndim != 2 or points.shape[0] == 0:
            raise FuzzySoftError("Support must be a non-empty k x d array")
        if np.unique(points, axis=0).shape[0] != points.shape[0]:
            raise FuzzySoftError("Support rows must be distinct")
        points.flags.writeable = False
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "grades", as_grade_array(self.grades, shape=(len(self.params), points.shape[0])))

    @classmethod
    def from_point(cls, pt: FSVectorPoint) -> "FSVectorSet":
        return cls(pt.params, pt.x[None, :], pt.lambdas[:, None])

    def grade(self, e: str, z: Sequence[float]) -> float:
        hit = np.flatnonzero(np.all(self.points == np.asarray(z, dtype=np.float64), axis=1))
        return float(self.grades[self.params.index(e), hit[0]]) if hit.size else 0.0

    def as_point(self) -> FSVectorPoint:
        if self.points.shape[0] != 1:
            raise FuzzySoftError(f"Support has {self.points.shape[0]} vectors, not one")
        return FSVectorPoint(VectorPoint(self.points[0]), self.params, self.grades[:, 0])


def fs_vec_add_sets(f: FSVectorSet, g: FSVectorSet) -> FSVectorSet:
    """``z -> sup over x + y = z of min{f_e(x), g_e(y)}``."""

    if f.points.shape[1] != g.points.shape[1]:
        raise DimensionMismatch(f"Dimension {f.points.shape[1]} vs {g.points.shape[1]}")
    if f.params.parameters != g.params.parameters:
        raise ParameterMismatch("F.S sets over different parameter sets")
    sums = (f.points[:, None, :] + g.points[None, :, :]).reshape(-1, f.points.shape[1])
    pair_grades = np.minimum(f.grades[:, :, None], g.grades[:, None, :]).reshape(len(f.params), -1)
    support, inverse = np.unique(sums, axis=0, return_inverse=True)
    inverse = np.asarray(inverse).reshape(-1)
    grades = np.zeros((len(f.params), support.shape[0]))
    for row, values in zip(grades, pair_grades):
        np.maximum.at(row, inverse, values)
    return FSVectorSet(f.params, support, grades)


# Norm axioms --------------------------------------------------------------


@dataclass(frozen=True)
class NormViolation:
    sample: int
    axiom: str
    detail: str


@dataclass(frozen=True)
class NormAxiomReport:
    checked: int
    violations: Tuple[NormViolation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def _leq_with_slack(a: FuzzySoftReal, b: FuzzySoftReal, slack: float) -> bool:
    if fsr_leq(a, b):
        return True
    return bool(np.all(a.lower() <= b.lower() + slack) and np.all(a.upper() <= b.upper() + slack))


def fsnorm_axiom_check(n: FSNorm, samples: Sequence[Tuple[FSVectorPoint, FSVectorPoint, float]]) -> NormAxiomReport:
    """Zero iff zero, homogeneity and the triangle inequality on each ``(x, y, r)`` sample."""

    violations: List[NormViolation] = []
    zero = fr_crisp(0.0, n.grid)
    for k, (x, y, r) in enumerate(samples):
        norm_x = fsnorm_eval(n, x)
        is_zero_vector = not np.any(x.x)
        # checked per parameter so that a single degenerate slice is caught
        zero_slices = [e for e, value in norm_x.items() if fr_equal(value, zero)]
        if (is_zero_vector and len(zero_slices) != len(n.params)) or (not is_zero_vector and zero_slices):
            violations.append(NormViolation(k, "zero", f"x={x.x.tolist()} has zero slices {zero_slices}"))

        lhs = fsnorm_eval(n, fs_scalar_mul(r, x))
        rhs = fsr_mul(fsr_abs(fsr_crisp(r, n.params, n.grid)), norm_x)
        scale = max(1.0, float(np.max(np.abs(rhs.upper()))))
        if not fsr_equal(lhs, rhs, HOMOGENEITY_RTOL * scale):
            violations.append(NormViolation(k, "homogeneity", f"r={r:g}, x={x.x.tolist()}"))

        total = fsnorm_eval(n, fs_vec_add(x, y))
        bound = fsr_add(norm_x, fsnorm_eval(n, y))
        slack = HOMOGENEITY_RTOL * max(1.0, float(np.max(bound.upper())))
        if not _leq_with_slack(total, bound, slack):
            violations.append(NormViolation(k, "triangle", f"x={x.x.tolist()}, y={y.x.tolist()}"))
    if violations:
        LOGGER.warning("%d norm axiom violations over %d samples", len(violations), len(samples))
    return NormAxiomReport(len(samples), tuple(violations))


# Balls and separation -----------------------------------------------------


@dataclass(frozen=True, eq=False)
class LiftedBall:
    """Characteristic lift of the open ball ``{z : ||z - center||_p < radius}``."""

    center: np.ndarray
    radius: float
    p: float
    params: ParameterSet

    def __post_init__(self) -> None:
        object.__setattr__(self, "center", _vector(self.center))
        if not self.radius > 0.0:
            raise FuzzySoftError(f"Ball radius must be positive, got {self.radius}")

    def inside(self, z: np.ndarray) -> np.ndarray:
        """Boolean mask over the rows of ``z`` (or a single vector)."""

        z = np.atleast_2d(np.asarray(z, dtype=np.float64))
        return np.linalg.norm(z - self.center, ord=self.p, axis=1) < self.radius

    def grade(self, e: str, z: Sequence[float]) -> float:
        self.params.index(e)
        return 1.0 if bool(self.inside(z)[0]) else 0.0

    def contains(self, pt: FSVectorPoint) -> bool:
        """F.S membership: every grade of ``pt`` is at most the lifted indicator."""

        return bool(self.inside(pt.x)[0])

    def meets(self, other: "LiftedBall", z: np.ndarray) -> np.ndarray:
        return self.inside(z) & other.inside(z)


def ball_contains(n: FSNorm, center: FSVectorPoint, radius: float, pt: FSVectorPoint) -> bool:
    """``pt`` lies in the open ball of the F.S norm ``n`` around ``center``."""

    n.check_point(pt)
    return n.distance(pt.x, center.x) < radius


@dataclass(frozen=True)
class HausdorffWitness:
    u: LiftedBall
    v: LiftedBall
    radius: float
    grid_points: int
    common_points: int

    @property
    def ok(self) -> bool:
        return self.common_points == 0


def _validation_grid(u: LiftedBall, v: LiftedBall) -> np.ndarray:
    lo = np.minimum(u.center, v.center) - u.radius
    hi = np.maximum(u.center, v.center) + u.radius
    dim = lo.size
    per_axis = int(np.ceil(np.max(hi - lo) / (u.radius / 10.0))) + 1
    per_axis = max(3, min(per_axis, int(SEPARATION_GRID_LIMIT ** (1.0 / dim))))
    axes = [np.linspace(a, b, per_axis) for a, b in zip(lo, hi)]
    mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, dim)
    return np.vstack([mesh, u.center, v.center])


def hausdorff_separate(n: FSNorm, x: FSVectorPoint, y: FSVectorPoint) -> HausdorffWitness:
    """Disjoint lifted balls of radius ``||x - y||_p / 3`` around the two supports."""

    _same_space(x, y)
    if np.array_equal(x.x, y.x):
        raise NotDistinct(f"Points share the support {x.x.tolist()}")
    radius = n.base(x.x - y.x) / 3.0
    u = LiftedBall(x.x, radius, n.p, n.params)
    v = LiftedBall(y.x, radius, n.p, n.params)
    if not (u.contains(x) and v.contains(y)):
        raise FuzzySoftError("Ball construction lost its center")
    grid = _validation_grid(u, v)
    common = int(np.count_nonzero(u.meets(v, grid)))
    LOGGER.debug("Separation grid: %d points, %d common", grid.shape[0], common)
    return HausdorffWitness(u, v, radius, int(grid.shape[0]), common)


# Sequences ----------------------------------------------------------------


@dataclass(frozen=True)
class FSSequence:
    points: Tuple[FSVectorPoint, ...]

    def __post_init__(self) -> None:
        points = tuple(self.points)
        object.__setattr__(self, "points", points)
        for pt in points[1:]:
            _same_space(points[0], pt)

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[FSVectorPoint]:
        return iter(self.points)

    def __getitem__(self, index: int) -> FSVectorPoint:
        return self.points[index]

    def supports(self) -> np.ndarray:
        return np.vstack([pt.x for pt in self.points])

    def grades(self) -> np.ndarray:
        return np.vstack([pt.lambdas for pt in self.points])


def subsequence(seq: FSSequence, indices: Sequence[int]) -> FSSequence:
    """Points at the given 0-based, strictly increasing positions."""

    picked = [int(i) for i in indices]
    if not picked or any(b <= a for a, b in zip(picked, picked[1:])):
        raise NonMonotoneIndices(f"Indices must be strictly increasing, got {picked}")
    if picked[0] < 0 or picked[-1] >= len(seq):
        raise NonMonotoneIndices(f"Indices {picked} fall outside a sequence of length {len(seq)}")
    return FSSequence(tuple(seq[i] for i in picked))


@dataclass(frozen=True)
class SequenceVerdict:
    """Finite-prefix decision; positions are 1-based like sequence terms."""

    ok: bool
    n: Optional[int] = None
    counterexample: Optional[int] = None
    pair: Optional[Tuple[int, int]] = None
    tail: int = 0


def seq_converges(
    n: FSNorm,
    seq: FSSequence,
    limit: FSVectorPoint,
    eps: float,
    delta_probe: float,
    min_tail: int = 2,
) -> SequenceVerdict:
    """Smallest N such that every later term is within ``delta_probe`` in support and ``eps`` in grades."""

    length = len(seq)
    if length == 0:
        return SequenceVerdict(False)
    _same_space(seq[0], limit)
    close = np.array(
        [
            n.distance(pt.x, limit.x) < delta_probe and bool(np.all(np.abs(pt.lambdas - limit.lambdas) < eps))
            for pt in seq
        ]
    )
    failing = np.flatnonzero(~close)
    last_failure = int(failing[-1]) + 1 if failing.size else 0
    start = last_failure + 1
    tail = length - last_failure
    if tail < max(1, min_tail):
        return SequenceVerdict(False, counterexample=last_failure or None, tail=tail)
    return SequenceVerdict(True, n=start, tail=tail)


def seq_is_cauchy(n: FSNorm, seq: FSSequence, eps: float, min_tail: int = 2) -> SequenceVerdict:
    """Smallest N whose tail has pairwise support distance and grade gaps at most ``eps``."""

    length = len(seq)
    if length == 0:
        return SequenceVerdict(False)
    supports = seq.supports()
    grades = seq.grades()
    start = 1
    pair: Optional[Tuple[int, int]] = None
    for i in range(length - 2, -1, -1):
        later = np.arange(i + 1, length)
        gaps = np.array([n.distance(supports[i], supports[j]) for j in later])
        grade_gaps = np.max(np.abs(grades[later] - grades[i]), axis=1)
        bad = np.flatnonzero((gaps > eps) | (grade_gaps > eps))
        if bad.size:
            start = i + 2
            pair = (i + 1, int(later[bad[0]]) + 1)
            break
    tail = length - start + 1
    if tail < max(1, min_tail):
        return SequenceVerdict(False, pair=pair, counterexample=pair[0] if pair else None, tail=tail)
    return SequenceVerdict(True, n=start, pair=pair, tail=tail)


def limits_agree(l1: FSVectorPoint, l2: FSVectorPoint, eps: float) -> bool:
    _same_space(l1, l2)
    return bool(np.max(np.abs(l1.x - l2.x)) <= eps and np.max(np.abs(l1.lambdas - l2.lambdas)) <= eps)


# Maps ---------------------------------------------------------------------


@dataclass(frozen=True)
class ContractionSpec:
    """A map ``T`` on R^d declared ``k``-Lipschitz in the base p-norm."""

    fn: Callable[[np.ndarray], np.ndarray]
    k: float
    p: float = 2.0
    dim: Optional[int] = None
    label: str = "T"

    def __post_init__(self) -> None:
        if not 0.0 < float(self.k) < 1.0:
            raise InvalidContraction(f"Contraction constant must lie in (0, 1), got {self.k}")
        object.__setattr__(self, "p", parse_p(self.p))

    def __call__(self, x: np.ndarray) -> np.ndarray:
        image = np.asarray(self.fn(np.asarray(x, dtype=np.float64)), dtype=np.float64).reshape(-1)
        if image.shape != np.shape(x):
            raise DimensionMismatch(f"{self.label} maps R^{np.size(x)} to R^{image.size}")
        return image

    @classmethod
    def affine(
        cls,
        a: Sequence[Sequence[float]] | np.ndarray,
        b: Sequence[float] | np.ndarray,
        k: Optional[float] = None,
        p: Union[str, float] = 2.0,
    ) -> "ContractionSpec":
        """``x -> A x + b``; ``k`` defaults to the operator norm of ``A``."""

        matrix = np.atleast_2d(np.asarray(a, dtype=np.float64))
        offset = np.asarray(b, dtype=np.float64).reshape(-1)
        if matrix.shape != (offset.size, offset.size):
            raise DimensionMismatch(f"A has shape {matrix.shape}, b has {offset.size} entries")
        exponent = parse_p(p)
        op_norm = float(np.linalg.norm(matrix, ord=exponent))
        if k is None:
            if op_norm == 0.0:
                raise InvalidContraction("A is zero; pass an explicit k in (0, 1)")
            k = op_norm
        elif op_norm > float(k) + 1e-12:
            raise InvalidContraction(f"Operator norm {op_norm:.6g} of A exceeds k={k}")
        return cls(lambda x: matrix @ x + offset, float(k), exponent, offset.size, "affine")

    @classmethod
    def from_expression(cls, text: str, k: float, dim: int = 1, p: Union[str, float] = 2.0) -> "ContractionSpec":
        """Parse ``T`` with sympy; the variable is ``x`` for d = 1, ``x0 .. x{d-1}`` otherwise."""

        symbols = [sp.Symbol("x")] if dim == 1 else [sp.Symbol(f"x{i}") for i in range(dim)]
        try:
            parsed = sp.sympify(text)
        except (sp.SympifyError, SyntaxError, TypeError) as exc:
            raise InvalidContraction(f"Cannot parse map {text!r}: {exc}") from exc
        components = list(parsed) if isinstance(parsed, (list, tuple, sp.Tuple, sp.MatrixBase)) else [parsed]
        if len(components) != dim:
            raise DimensionMismatch(f"Map {text!r} has {len(components)} components, expected {dim}")
        free = set().union(*(sp.sympify(c).free_symbols for c in components))
        unknown = free - set(symbols)
        if unknown:
            raise InvalidContraction(f"Map {text!r} uses unknown symbols {sorted(map(str, unknown))}")
        compiled = sp.lambdify(symbols, components, modules=["numpy"])

        def apply(x: np.ndarray) -> np.ndarray:
            return np.array([float(v) for v in compiled(*x)], dtype=np.float64)

        return cls(apply, float(k), parse_p(p), dim, text)


MapLike = Union[ContractionSpec, Callable[[np.ndarray], np.ndarray]]


def op_apply(t: MapLike, pt: FSVectorPoint) -> FSVectorPoint:
    """``T x~ = (T x)~``: move the support, keep the grades."""

    return pt.moved_to(np.asarray(t(pt.x), dtype=np.float64).reshape(-1))


@dataclass(frozen=True)
class ContinuityVerdict:
    ok: bool
    probes: int
    counterexample: Optional[Tuple[int, int]] = None
    verdicts: Tuple[SequenceVerdict, ...] = ()


def continuity_check(
    n: FSNorm,
    n2: FSNorm,
    t: MapLike,
    pt: FSVectorPoint,
    probes: int = 10,
    eps: float = 1e-2,
) -> ContinuityVerdict:
    """Sequential continuity at ``pt`` along every coordinate direction.

    Probes are ``x +/- 2^-j e_i`` (j = 1..probes) carrying the grades of ``pt``;
    their images must converge to ``T x~`` in ``n2``.  The counterexample is
    ``(axis, sign)`` of the first failing direction.
    """

    target = op_apply(t, pt)
    verdicts: List[SequenceVerdict] = []
    radii = 2.0 ** -np.arange(1, probes + 1)
    tail = max(2, probes // 3)
    for axis, sign in itertools.product(range(pt.dim), (1, -1)):
        unit = np.zeros(pt.dim)
        unit[axis] = sign
        approach = FSSequence(tuple(pt.moved_to(pt.x + r * unit) for r in radii))
        sanity = seq_converges(n, approach, pt, eps, eps, min_tail=tail)
        images = FSSequence(tuple(op_apply(t, z) for z in approach))
        verdict = seq_converges(n2, images, target, eps, delta_probe=eps, min_tail=tail)
        verdicts.append(verdict)
        if sanity.ok and not verdict.ok:
            LOGGER.info("Discontinuity at %s along axis %d, sign %+d", pt.x.tolist(), axis, sign)
            return ContinuityVerdict(False, probes, (axis, sign), tuple(verdicts))
    return ContinuityVerdict(True, probes, None, tuple(verdicts))


@dataclass(frozen=True)
class ContractionCheck:
    checked: int
    violations: Tuple[int, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def contraction_norm_check(
    n: FSNorm, spec: ContractionSpec, pairs: Sequence[Tuple[FSVectorPoint, FSVectorPoint]]
) -> ContractionCheck:
    """``||T x~ - T y~|| <= k ||x~ - y~||`` in the F.S real order on each pair."""

    k_bar = fsr_crisp(spec.k, n.params, n.grid)
    violations = []
    for index, (x, y) in enumerate(pairs):
        lhs = fsnorm_eval(n, fs_vec_sub(op_apply(spec, x), op_apply(spec, y)))
        rhs = fsr_mul(k_bar, fsnorm_eval(n, fs_vec_sub(x, y)))
        slack = HOMOGENEITY_RTOL * max(1.0, float(np.max(rhs.upper())))
        if not _leq_with_slack(lhs, rhs, slack):
            violations.append(index)
    return ContractionCheck(len(pairs), tuple(violations))


# Fixed points -------------------------------------------------------------

CONVERGED = "converged"
MAX_ITER_EXCEEDED = "max_iter_exceeded"


@dataclass(frozen=True)
class FixpointResult:
    fixed_point: FSVectorPoint
    iterates: FSSequence
    apriori_bounds: np.ndarray
    aposteriori_bounds: np.ndarray
    status: str

    @property
    def iterations(self) -> int:
        return len(self.iterates)

    @property
    def converged(self) -> bool:
        return self.status == CONVERGED

    def measured_errors(self, n: FSNorm, reference: Optional[FSVectorPoint] = None) -> np.ndarray:
        """``||x_n - x*||`` against ``reference`` (the final iterate by default)."""

        anchor = (reference or self.fixed_point).x
        return np.array([n.distance(pt.x, anchor) for pt in self.iterates])


def fixpoint_solve(
    n: FSNorm,
    spec: ContractionSpec,
    start: FSVectorPoint,
    tol: float = 1e-12,
    max_iter: int = 10_000,
) -> FixpointResult:
    """Iterate ``x_{n+1} = T x_n`` from ``start`` with constant grades.

    Stops once the a-posteriori bound ``k/(1-k) * ||x_n - x_{n-1}||`` reaches
    ``tol``.  The a-priori bound ``k^n ||x_1 - z|| / (1-k)`` is reported per step.
    """

    if spec.p != n.p:
        raise InvalidContraction(f"Map is contractive in the {spec.p}-norm, the space uses p={n.p}")
    if tol <= 0.0:
        raise FuzzySoftError(f"tol must be positive, got {tol}")
    n.check_point(start)
    k = spec.k
    previous = start.x
    first_step = 0.0
    last_step = 0.0
    points: List[FSVectorPoint] = []
    apriori: List[float] = []
    aposteriori: List[float] = []
    status = MAX_ITER_EXCEEDED
    for step in range(1, max_iter + 1):
        current = spec(previous)
        moved = n.distance(current, previous)
        if step == 1:
            first_step = moved
        else:
            noise = 8.0 * np.finfo(np.float64).eps * max(1.0, n.base(current)) * float(np.max(n.weights))
            if moved > k * last_step + noise:
                raise ContractionViolated(step, moved / last_step if last_step else math.inf, k)
        points.append(start.moved_to(current))
        apriori.append(k**step * first_step / (1.0 - k))
        aposteriori.append(k * moved / (1.0 - k))
        LOGGER.debug("iteration %d: step=%.3e bound=%.3e", step, moved, aposteriori[-1])
        previous, last_step = current, moved
        if aposteriori[-1] <= tol:
            status = CONVERGED
            break
    LOGGER.info("Fixed-point iteration %s after %d steps", status, len(points))
    return FixpointResult(
        points[-1],
        FSSequence(tuple(points)),
        np.array(apriori),
        np.array(aposteriori),
        status,
    )


@dataclass(frozen=True)
class UniquenessVerdict:
    ok: bool
    supports: Tuple[Tuple[float, ...], ...]
    grade_profiles: Tuple[Tuple[float, ...], ...]
    spread: float
    allowance: float


def fixpoint_uniqueness_probe(
    n: FSNorm,
    spec: ContractionSpec,
    starts: Sequence[FSVectorPoint],
    tol: float = 1e-12,
    max_iter: int = 10_000,
) -> UniquenessVerdict:
    """Solve from every start; supports must agree, grades must stay with their start.

    Each solve certifies its final a-posteriori bound (at most ``tol``) on the
    distance to the fixed point, so two supports may lie apart by the sum of
    their bounds.  ``allowance`` is the largest such sum over all pairs.
    """

    results = [fixpoint_solve(n, spec, z, tol, max_iter) for z in starts]
    supports = [r.fixed_point.x for r in results]
    bounds = [float(r.aposteriori_bounds[-1]) for r in results]
    spread = 0.0
    allowance = 0.0
    fits = True
    for i, j in itertools.combinations(range(len(results)), 2):
        gap = n.distance(supports[i], supports[j])
        limit = bounds[i] + bounds[j]
        noise = 8.0 * np.finfo(np.float64).eps * max(1.0, n.base(supports[i])) * float(np.max(n.weights))
        fits = fits and gap <= limit + noise
        spread = max(spread, gap)
        allowance = max(allowance, limit)
    grades_kept = all(np.array_equal(r.fixed_point.lambdas, z.lambdas) for r, z in zip(results, starts))
    converged = all(r.converged for r in results)
    return UniquenessVerdict(
        bool(converged and grades_kept and fits),
        tuple(tuple(s.tolist()) for s in supports),
        tuple(tuple(r.fixed_point.lambdas.tolist()) for r in results),
        float(spread),
        float(allowance),
    )


__all__ = [
    "CONVERGED",
    "ContinuityVerdict",
    "ContractionCheck",
    "ContractionSpec",
    "ContractionViolated",
    "DimensionMismatch",
    "FSNorm",
    "FSSequence",
    "FSVectorPoint",
    "FSVectorSet",
    "FixpointResult",
    "HausdorffWitness",
    "InvalidContraction",
    "LiftedBall",
    "MAX_ITER_EXCEEDED",
    "NonMonotoneIndices",
    "NormAxiomReport",
    "NormViolation",
    "NotDistinct",
    "SequenceVerdict",
    "UniquenessVerdict",
    "VectorPoint",
    "ball_contains",
    "continuity_check",
    "contraction_norm_check",
    "fixpoint_solve",
    "fixpoint_uniqueness_probe",
    "fs_scalar_mul",
    "fs_vec_add",
    "fs_vec_add_sets",
    "fs_vec_sub",
    "fsnorm_axiom_check",
    "fsnorm_eval",
    "fsnorm_slice",
    "hausdorff_separate",
    "limits_agree",
    "op_apply",
    "parse_p",
    "seq_converges",
    "seq_is_cauchy",
    "subsequence",
]
