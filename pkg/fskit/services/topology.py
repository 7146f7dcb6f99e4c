"""Finite fuzzy soft topologies and their crisp and fuzzy relatives.

Every collection is checked the same way: its members are turned into grade
arrays (indicator vectors for crisp opens, grade vectors for fuzzy opens,
``|E| x |X|`` matrices for F.S opens) and the axioms are verified with
``np.maximum`` as union and ``np.minimum`` as intersection.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .core_fuzzy import FuzzySet, FuzzySoftError, Universe, ensure_same_universe, fz_superlevel
from .fuzzy_real import AlphaGrid
from .soft_algebra import (
    FuzzySoftPoint,
    FuzzySoftSet,
    ParameterMismatch,
    ParameterSet,
    fs_intersection,
    fs_subset,
    fsp_distinct,
    fsp_member,
    fsp_quasi_coincident,
)

LOGGER = logging.getLogger(__name__)

DEFAULT_LATTICE: Tuple[float, ...] = (0.0, 0.25, 0.5, 0.75, 1.0)
# Largest collection fst_discrete will enumerate.
DISCRETE_LIMIT = 4096

MISSING_NULL = "missing_null"
MISSING_ABSOLUTE = "missing_absolute"
UNION_VIOLATION = "union_violation"
INTERSECTION_VIOLATION = "intersection_violation"


@dataclass(frozen=True)
class ClosureSettings:
    exhaustive_limit: int = 12
    sample_draws: int = 1000
    seed: int = 0


@dataclass(frozen=True)
class TopologyVerdict:
    ok: bool
    failure: Optional[str] = None
    witness: Tuple[int, ...] = ()
    method: str = "exhaustive"
    members: int = 0

    def describe(self) -> str:
        if self.ok:
            return f"ok ({self.members} opens, {self.method})"
        return f"{self.failure} at members {list(self.witness)} ({self.method})"


class TopologyAxiomError(FuzzySoftError):
    """Raised when a collection declared as a topology fails the axioms."""

    def __init__(self, verdict: TopologyVerdict, kind: str = "F.S topology") -> None:
        super().__init__(f"Not a {kind}: {verdict.describe()}")
        self.verdict = verdict


def _dedupe(arrays: Iterable[np.ndarray]) -> List[np.ndarray]:
    seen: Dict[bytes, np.ndarray] = {}
    for array in arrays:
        array = np.ascontiguousarray(array, dtype=np.float64)
        seen.setdefault(array.tobytes(), array)
    return list(seen.values())


def _check_closure(members: Sequence[np.ndarray], shape: Tuple[int, ...], settings: ClosureSettings) -> TopologyVerdict:
    members = [np.ascontiguousarray(m, dtype=np.float64) for m in members]
    keys = {m.tobytes() for m in members}
    n = len(members)
    method = "exhaustive" if n <= settings.exhaustive_limit else "pairwise+sampled"

    def fail(kind: str, witness: Tuple[int, ...]) -> TopologyVerdict:
        return TopologyVerdict(False, kind, witness, method, n)

    if np.zeros(shape).tobytes() not in keys:
        return fail(MISSING_NULL, ())
    if np.ones(shape).tobytes() not in keys:
        return fail(MISSING_ABSOLUTE, ())
    for i, j in itertools.combinations(range(n), 2):
        if np.minimum(members[i], members[j]).tobytes() not in keys:
            return fail(INTERSECTION_VIOLATION, (i, j))
        if np.maximum(members[i], members[j]).tobytes() not in keys:
            return fail(UNION_VIOLATION, (i, j))

    if n <= settings.exhaustive_limit:
        for size in range(3, n + 1):
            for combo in itertools.combinations(range(n), size):
                if np.maximum.reduce([members[k] for k in combo]).tobytes() not in keys:
                    return fail(UNION_VIOLATION, combo)
        return TopologyVerdict(True, method=method, members=n)

    if np.maximum.reduce(members).tobytes() not in keys:
        return fail(UNION_VIOLATION, tuple(range(n)))
    LOGGER.warning(
        "Union closure of %d opens verified pairwise and on %d sampled subfamilies", n, settings.sample_draws
    )
    rng = np.random.default_rng(settings.seed)
    for _ in range(settings.sample_draws):
        mask = rng.random(n) < 0.5
        if not mask.any():
            continue
        picked = np.flatnonzero(mask)
        if np.maximum.reduce([members[k] for k in picked]).tobytes() not in keys:
            return fail(UNION_VIOLATION, tuple(int(k) for k in picked))
    return TopologyVerdict(True, method=method, members=n)


def _close_lattice(arrays: Iterable[np.ndarray]) -> List[np.ndarray]:
    """Smallest superset closed under pairwise max and min."""

    members = _dedupe(arrays)
    keys = {m.tobytes() for m in members}
    frontier = list(members)
    while frontier:
        fresh: List[np.ndarray] = []
        for new in frontier:
            for old in list(members):
                for candidate in (np.maximum(new, old), np.minimum(new, old)):
                    key = candidate.tobytes()
                    if key not in keys:
                        keys.add(key)
                        members.append(candidate)
                        fresh.append(candidate)
        frontier = fresh
    return members


# Crisp topologies ---------------------------------------------------------


def crisp_check(universe: Universe, opens: Sequence[Iterable[str]], settings: Optional[ClosureSettings] = None) -> TopologyVerdict:
    arrays = _dedupe(universe.indicator(v) for v in opens)
    return _check_closure(arrays, (len(universe),), settings or ClosureSettings())


@dataclass(frozen=True, eq=False)
class CrispTopology:
    universe: Universe
    opens: Tuple[FrozenSet[str], ...]
    settings: ClosureSettings = field(default_factory=ClosureSettings, repr=False)

    def __post_init__(self) -> None:
        unique = tuple(dict.fromkeys(frozenset(v) for v in self.opens))
        object.__setattr__(self, "opens", unique)
        verdict = crisp_check(self.universe, unique, self.settings)
        if not verdict.ok:
            raise TopologyAxiomError(verdict, "topology")

    def is_open(self, subset: Iterable[str]) -> bool:
        return frozenset(subset) in self.opens

    def as_set(self) -> FrozenSet[FrozenSet[str]]:
        return frozenset(self.opens)

    def __len__(self) -> int:
        return len(self.opens)


# Fuzzy topologies ---------------------------------------------------------


def fuzzy_check(universe: Universe, opens: Sequence[FuzzySet], settings: Optional[ClosureSettings] = None) -> TopologyVerdict:
    for member in opens:
        ensure_same_universe(universe, member.universe)
    arrays = _dedupe(member.grades for member in opens)
    return _check_closure(arrays, (len(universe),), settings or ClosureSettings())


@dataclass(frozen=True, eq=False)
class FuzzyTopology:
    universe: Universe
    opens: Tuple[FuzzySet, ...]
    settings: ClosureSettings = field(default_factory=ClosureSettings, repr=False)

    def __post_init__(self) -> None:
        unique = tuple(dict.fromkeys(self.opens))
        object.__setattr__(self, "opens", unique)
        verdict = fuzzy_check(self.universe, unique, self.settings)
        if not verdict.ok:
            raise TopologyAxiomError(verdict, "fuzzy topology")

    def __len__(self) -> int:
        return len(self.opens)


def ft_it(ft: FuzzyTopology, thresholds: Sequence[float] = DEFAULT_LATTICE) -> CrispTopology:
    """Strict superlevel sets of every open at every threshold in [0, 1), closed up."""

    levels = [float(t) for t in thresholds if 0.0 <= float(t) < 1.0] or [0.0]
    universe = ft.universe
    subsets = [fz_superlevel(member, t) for member in ft.opens for t in levels]
    closed = _close_lattice(universe.indicator(s) for s in subsets)
    opens = tuple(universe.labels_where(array > 0.0) for array in closed)
    return CrispTopology(universe, opens, ft.settings)


# F.S topologies -----------------------------------------------------------


def _matrix_in(f: FuzzySoftSet, params: ParameterSet, universe: Universe) -> np.ndarray:
    ensure_same_universe(universe, f.universe)
    if not f.params.same_labels(params):
        raise ParameterMismatch(
            f"Open over {f.params.parameters} does not use the full parameter set {params.parameters}"
        )
    return f.grades if f.params.parameters == params.parameters else f.reordered(params.parameters).grades


def fst_check(
    collection: Sequence[FuzzySoftSet],
    *,
    params: Optional[ParameterSet] = None,
    universe: Optional[Universe] = None,
    settings: Optional[ClosureSettings] = None,
) -> TopologyVerdict:
    """Verify the three F.S topology axioms on an explicit collection."""

    if params is None or universe is None:
        if not collection:
            raise FuzzySoftError("An empty collection needs explicit params and universe")
        params = params or collection[0].params
        universe = universe or collection[0].universe
    arrays = _dedupe(_matrix_in(f, params, universe) for f in collection)
    verdict = _check_closure(arrays, (len(params), len(universe)), settings or ClosureSettings())
    LOGGER.info("F.S topology check: %s", verdict.describe())
    return verdict


@dataclass(frozen=True, eq=False)
class FSTopology:
    params: ParameterSet
    universe: Universe
    opens: Tuple[FuzzySoftSet, ...]
    settings: ClosureSettings = field(default_factory=ClosureSettings, repr=False)

    def __post_init__(self) -> None:
        arrays = _dedupe(_matrix_in(f, self.params, self.universe) for f in self.opens)
        opens = tuple(FuzzySoftSet(self.params, self.universe, array) for array in arrays)
        object.__setattr__(self, "opens", opens)
        verdict = _check_closure(arrays, (len(self.params), len(self.universe)), self.settings)
        if not verdict.ok:
            raise TopologyAxiomError(verdict)

    def is_open(self, f: FuzzySoftSet) -> bool:
        key = _matrix_in(f, self.params, self.universe).tobytes()
        return any(member.grades.tobytes() == key for member in self.opens)

    def __len__(self) -> int:
        return len(self.opens)

    def __iter__(self):
        return iter(self.opens)


def fst_slice(t: FSTopology, e: str) -> FuzzyTopology:
    row = t.params.index(e)
    return FuzzyTopology(t.universe, tuple(FuzzySet(t.universe, f.grades[row]) for f in t.opens), t.settings)


def fst_lift_crisp(t: CrispTopology, params: ParameterSet) -> FSTopology:
    """Each crisp open V becomes the F.S set whose every row is the indicator of V."""

    opens = tuple(
        FuzzySoftSet(params, t.universe, np.tile(t.universe.indicator(v), (len(params), 1))) for v in t.opens
    )
    return FSTopology(params, t.universe, opens, t.settings)


def fst_it(t: FSTopology, e: str, thresholds: Sequence[float] = DEFAULT_LATTICE) -> CrispTopology:
    return ft_it(fst_slice(t, e), thresholds)


def fst_membership_wprime(f: FuzzySoftSet, t: CrispTopology, grade_grid: Sequence[float] = DEFAULT_LATTICE) -> bool:
    """Every strict superlevel set of every row is open in ``t``."""

    ensure_same_universe(f.universe, t.universe)
    thresholds = sorted({0.0, *(float(g) for g in grade_grid)})
    for e in f.params:
        row = f.row(e)
        for level in thresholds:
            if not t.is_open(fz_superlevel(row, level)):
                LOGGER.debug("Row %s has non-open superlevel set at %s", e, level)
                return False
    return True


def fst_membership_support_open(f: FuzzySoftSet, t: CrispTopology) -> bool:
    ensure_same_universe(f.universe, t.universe)
    return all(t.is_open(fz_superlevel(f.row(e), 0.0)) for e in f.params)


def fst_lift_alpha_cuts(
    mu: FuzzySet, levels: Union[ParameterSet, AlphaGrid], settings: Optional[ClosureSettings] = None
) -> Tuple[Tuple[FuzzySoftSet, ...], TopologyVerdict]:
    """The F.S set ``alpha -> indicator of the alpha-cut of mu`` with the null and absolute sets.

    The verdict is reported, not asserted.
    """

    if isinstance(levels, AlphaGrid):
        params = ParameterSet(tuple(f"a{j}" for j in range(1, len(levels) + 1)), tuple(levels.levels))
    elif levels.reindex is None:
        params = ParameterSet.reindexed(levels.parameters)
    else:
        params = levels
    universe = mu.universe
    rows = np.array([(mu.grades >= params.level_of(e)).astype(np.float64) for e in params])
    lifted = FuzzySoftSet(params, universe, rows)
    null = FuzzySoftSet(params, universe, np.zeros(rows.shape))
    absolute = FuzzySoftSet(params, universe, np.ones(rows.shape))
    collection = tuple(dict.fromkeys((null, absolute, lifted)))
    verdict = fst_check(collection, params=params, universe=universe, settings=settings)
    return collection, verdict


def fst_closure(
    generators: Sequence[FuzzySoftSet],
    params: ParameterSet,
    universe: Universe,
    settings: Optional[ClosureSettings] = None,
) -> FSTopology:
    """Smallest F.S topology containing ``generators`` and closed under pairwise max and min."""

    shape = (len(params), len(universe))
    arrays = [np.zeros(shape), np.ones(shape)]
    arrays.extend(_matrix_in(f, params, universe) for f in generators)
    closed = _close_lattice(arrays)
    LOGGER.debug("Closure of %d generators has %d opens", len(generators), len(closed))
    return FSTopology(params, universe, tuple(FuzzySoftSet(params, universe, a) for a in closed), settings or ClosureSettings())


def fst_indiscrete(params: ParameterSet, universe: Universe) -> FSTopology:
    shape = (len(params), len(universe))
    return FSTopology(
        params, universe, (FuzzySoftSet(params, universe, np.zeros(shape)), FuzzySoftSet(params, universe, np.ones(shape)))
    )


def fst_discrete(
    params: ParameterSet,
    universe: Universe,
    lattice: Sequence[float] = DEFAULT_LATTICE,
    settings: Optional[ClosureSettings] = None,
) -> FSTopology:
    """Every F.S set with grades on ``lattice``."""

    values = sorted({float(v) for v in lattice} | {0.0, 1.0})
    cells = len(params) * len(universe)
    count = len(values) ** cells
    if count > DISCRETE_LIMIT:
        raise FuzzySoftError(f"Discrete topology would have {count} opens (limit {DISCRETE_LIMIT})")
    shape = (len(params), len(universe))
    opens = tuple(
        FuzzySoftSet(params, universe, np.array(combo).reshape(shape))
        for combo in itertools.product(values, repeat=cells)
    )
    return FSTopology(params, universe, opens, settings or ClosureSettings())


# Neighborhoods and separation ---------------------------------------------


def fsn_is_neighborhood(g: FuzzySoftSet, pt: FuzzySoftPoint, t: FSTopology) -> bool:
    return any(fsp_member(pt, f) and fs_subset(f, g) for f in t.opens)


def fsn_is_q_neighborhood(g: FuzzySoftSet, pt: FuzzySoftPoint, t: FSTopology) -> bool:
    return any(fsp_quasi_coincident(pt, f) and fs_subset(f, g) for f in t.opens)


@dataclass(frozen=True)
class AxiomVerdict:
    ok: bool
    checked: int
    counterexample: Optional[int] = None
    witnesses: Dict[int, Tuple[int, ...]] = field(default_factory=dict)


@dataclass(frozen=True)
class SeparationReport:
    t0: AxiomVerdict
    t1: AxiomVerdict
    t2: AxiomVerdict
    skipped: Tuple[int, ...] = ()

    def as_dict(self) -> Dict[str, bool]:
        return {"T0": self.t0.ok, "T1": self.t1.ok, "T2": self.t2.ok}


def _misses(f: FuzzySoftSet, pt: FuzzySoftPoint) -> bool:
    return fs_intersection(f, pt.as_set()).is_null()


def _verdict(results: Dict[int, Optional[Tuple[int, ...]]]) -> AxiomVerdict:
    failures = [k for k, w in results.items() if w is None]
    witnesses = {k: w for k, w in results.items() if w is not None}
    return AxiomVerdict(not failures, len(results), failures[0] if failures else None, witnesses)


def fst_separation(t: FSTopology, pairs: Sequence[Tuple[FuzzySoftPoint, FuzzySoftPoint]]) -> SeparationReport:
    """Search the opens of ``t`` for T0, T1 and T2 witnesses on each sampled pair.

    Witnesses are indices into ``t.opens``; pairs that are not distinct are skipped.
    """

    t0: Dict[int, Optional[Tuple[int, ...]]] = {}
    t1: Dict[int, Optional[Tuple[int, ...]]] = {}
    t2: Dict[int, Optional[Tuple[int, ...]]] = {}
    skipped: List[int] = []
    for k, (x, y) in enumerate(pairs):
        if not fsp_distinct(x, y):
            skipped.append(k)
            continue
        around_x = [i for i, f in enumerate(t.opens) if fsp_member(x, f)]
        around_y = [j for j, g in enumerate(t.opens) if fsp_member(y, g)]
        x_only = next((i for i in around_x if _misses(t.opens[i], y)), None)
        y_only = next((j for j in around_y if _misses(t.opens[j], x)), None)

        if x_only is not None:
            t0[k] = (x_only,)
        elif y_only is not None:
            t0[k] = (y_only,)
        else:
            t0[k] = None
        t1[k] = (x_only, y_only) if x_only is not None and y_only is not None else None
        t2[k] = next(
            (
                (i, j)
                for i in around_x
                for j in around_y
                if fs_intersection(t.opens[i], t.opens[j]).is_null()
            ),
            None,
        )
    report = SeparationReport(_verdict(t0), _verdict(t1), _verdict(t2), tuple(skipped))
    LOGGER.info("Separation over %d pairs: %s", len(pairs) - len(skipped), report.as_dict())
    return report


__all__ = [
    "AxiomVerdict",
    "ClosureSettings",
    "CrispTopology",
    "DEFAULT_LATTICE",
    "FSTopology",
    "FuzzyTopology",
    "INTERSECTION_VIOLATION",
    "MISSING_ABSOLUTE",
    "MISSING_NULL",
    "SeparationReport",
    "TopologyAxiomError",
    "TopologyVerdict",
    "UNION_VIOLATION",
    "crisp_check",
    "fsn_is_neighborhood",
    "fsn_is_q_neighborhood",
    "fst_check",
    "fst_closure",
    "fst_discrete",
    "fst_indiscrete",
    "fst_it",
    "fst_lift_alpha_cuts",
    "fst_lift_crisp",
    "fst_membership_support_open",
    "fst_membership_wprime",
    "fst_separation",
    "ft_it",
    "fuzzy_check",
]
