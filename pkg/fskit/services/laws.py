"""Seeded property suites behind ``fskit check`` and the acceptance script.

Every suite draws its cases from ``np.random.default_rng(seed)`` in a fixed
order, so a seed fully determines the report.  Suites never raise for a
failed law; they count violations and keep the first witness.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .core_fuzzy import FuzzySoftError, Universe
from .fuzzy_real import DEFAULT_LEVELS, AlphaGrid, FuzzyReal, fr_triangular, oracle_deviation
from .normed import (
    FSNorm,
    FSSequence,
    FSVectorPoint,
    fsnorm_axiom_check,
    hausdorff_separate,
    limits_agree,
    seq_converges,
    seq_is_cauchy,
    subsequence,
)
from .soft_algebra import (
    FuzzySoftSet,
    ParameterSet,
    SoftMapping,
    fs_absolute,
    fs_complement,
    fs_equal,
    fs_image,
    fs_intersection,
    fs_intersection_all,
    fs_null,
    fs_preimage,
    fs_subset,
    fs_union,
    fs_union_all,
)
from .soft_real import FuzzySoftReal, fsr_abs, fsr_add, fsr_crisp, fsr_equal, fsr_mul
from .topology import ClosureSettings, TopologyAxiomError, fst_closure, fst_slice

LOGGER = logging.getLogger(__name__)

DEFAULT_CASES: Dict[str, int] = {
    "demorgan": 1000,
    "maplaws": 500,
    "identities": 200,
    "normaxioms": 500,
    "slices": 100,
    "hausdorff": 200,
    "oracle": 50,
    "convergence": 100,
}

# Grade lattice step of the De Morgan and mapping-law suites.
LATTICE_STEP = 0.05


class UnknownLaw(FuzzySoftError):
    """Raised when ``check`` names a suite that does not exist."""


@dataclass(frozen=True)
class SuiteSettings:
    grid: int = DEFAULT_LEVELS
    oracle_step: float = 1e-3
    closure: ClosureSettings = field(default_factory=ClosureSettings)


@dataclass
class LawReport:
    law: str
    seed: int
    cases: int
    violations: int = 0
    skipped: int = 0
    first_witness: Optional[Dict[str, Any]] = None
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.violations == 0

    def record(self, witness: Dict[str, Any]) -> None:
        self.violations += 1
        if self.first_witness is None:
            self.first_witness = witness

    def as_dict(self) -> Dict[str, Any]:
        return {
            "law": self.law,
            "seed": self.seed,
            "cases": self.cases,
            "violations": self.violations,
            "skipped": self.skipped,
            "ok": self.ok,
            "first_witness": self.first_witness,
            "details": self.details,
        }


# Random instances ---------------------------------------------------------


def _labels(prefix: str, count: int) -> Tuple[str, ...]:
    return tuple(f"{prefix}{i}" for i in range(1, count + 1))


def _lattice_grades(rng: np.random.Generator, shape: Tuple[int, ...], step: float = LATTICE_STEP) -> np.ndarray:
    levels = int(round(1.0 / step))
    return rng.integers(0, levels + 1, size=shape) / levels


def _random_fss(rng: np.random.Generator, params: ParameterSet, universe: Universe) -> FuzzySoftSet:
    return FuzzySoftSet(params, universe, _lattice_grades(rng, (len(params), len(universe))))


def _corrupted(f: FuzzySoftSet) -> FuzzySoftSet:
    """Fault injection: the complement stands in for the honest result."""

    return fs_complement(f)


def _matrix(f: FuzzySoftSet) -> Dict[str, List[float]]:
    return {e: f.grades[i].tolist() for i, e in enumerate(f.params)}


# De Morgan ----------------------------------------------------------------


def demorgan_suite(rng: np.random.Generator, report: LawReport, inject_fault: bool, settings: SuiteSettings) -> None:
    params = ParameterSet(_labels("e", 4))
    universe = Universe(_labels("x", 5))
    for case in range(report.cases):
        f = _random_fss(rng, params, universe)
        g = _random_fss(rng, params, universe)
        union_lhs = fs_complement(fs_union(f, g))
        if inject_fault:
            union_lhs = _corrupted(union_lhs)
        checks = {
            "union": fs_equal(union_lhs, fs_intersection(fs_complement(f), fs_complement(g))),
            "intersection": fs_equal(
                fs_complement(fs_intersection(f, g)), fs_union(fs_complement(f), fs_complement(g))
            ),
        }
        for identity, holds in checks.items():
            if not holds:
                report.record({"case": case, "identity": identity, "f": _matrix(f), "g": _matrix(g)})


# Mapping laws -------------------------------------------------------------


@dataclass(frozen=True)
class MappingInstance:
    mapping: SoftMapping
    domain: ParameterSet
    f_family: Tuple[FuzzySoftSet, ...]
    g_family: Tuple[FuzzySoftSet, ...]

    def describe(self) -> Dict[str, Any]:
        return {
            "u": dict(self.mapping.u),
            "p": dict(self.mapping.p),
            "A": list(self.domain.parameters),
            "f_family": [_matrix(f) for f in self.f_family],
            "g_family": [_matrix(g) for g in self.g_family],
        }


def random_mapping_instance(rng: np.random.Generator, max_objects: int = 4, max_params: int = 3) -> MappingInstance:
    source = Universe(_labels("x", int(rng.integers(1, max_objects + 1))))
    target = Universe(_labels("y", int(rng.integers(1, max_objects + 1))))
    params = ParameterSet(_labels("e", int(rng.integers(1, max_params + 1))))
    target_params = ParameterSet(_labels("k", int(rng.integers(1, max_params + 1))))
    u = {x: target.objects[int(rng.integers(len(target)))] for x in source}
    p = {e: target_params.parameters[int(rng.integers(len(target_params)))] for e in params}
    mapping = SoftMapping(source, target, params, target_params, u, p)

    # the whole of E about half the time, otherwise a random non-empty part of it
    if rng.random() < 0.5 or len(params) == 1:
        domain = params
    else:
        keep = rng.random(len(params)) < 0.5
        keep[int(rng.integers(len(params)))] = True
        domain = ParameterSet(tuple(e for e, k in zip(params, keep) if k))

    f_family = tuple(_random_fss(rng, domain, source) for _ in range(int(rng.integers(1, 4))))
    g_family = tuple(_random_fss(rng, target_params, target) for _ in range(int(rng.integers(1, 4))))
    return MappingInstance(mapping, domain, f_family, g_family)


def mapping_law_checks(instance: MappingInstance, inject_fault: bool = False) -> Tuple[Dict[str, bool], bool]:
    """Evaluate every mapping law on one instance.

    Returns the per-item results and whether the complement inequality for
    images was applicable (surjective ``u`` and ``f`` over all of ``E``).
    """

    h = instance.mapping
    image_params = h.image_params()
    f_union = fs_union_all(instance.f_family)
    g_union = fs_union_all(instance.g_family)

    image_of_union = fs_image(h, f_union)
    if inject_fault:
        image_of_union = _corrupted(image_of_union)

    results = {
        "image_null": fs_equal(fs_image(h, fs_null(instance.domain, h.source_universe)), fs_null(image_params, h.target_universe)),
        "preimage_null": fs_equal(
            fs_preimage(h, fs_null(h.target_params, h.target_universe)), fs_null(h.source_params, h.source_universe)
        ),
        "image_absolute": fs_subset(
            fs_image(h, fs_absolute(h.source_params, h.source_universe)), fs_absolute(h.target_params, h.target_universe)
        ),
        "preimage_absolute": fs_equal(
            fs_preimage(h, fs_absolute(h.target_params, h.target_universe)), fs_absolute(h.source_params, h.source_universe)
        ),
        "image_union": fs_equal(image_of_union, fs_union_all([fs_image(h, f) for f in instance.f_family])),
        "image_intersection": fs_subset(
            fs_image(h, fs_intersection_all(instance.f_family)),
            fs_intersection_all([fs_image(h, f) for f in instance.f_family]),
        ),
        "preimage_union": fs_equal(fs_preimage(h, g_union), fs_union_all([fs_preimage(h, g) for g in instance.g_family])),
        "preimage_intersection": fs_equal(
            fs_preimage(h, fs_intersection_all(instance.g_family)),
            fs_intersection_all([fs_preimage(h, g) for g in instance.g_family]),
        ),
        "preimage_complement": all(
            fs_equal(fs_preimage(h, fs_complement(g)), fs_complement(fs_preimage(h, g))) for g in instance.g_family
        ),
    }
    applicable = h.is_surjective() and instance.domain.same_labels(h.source_params)
    if applicable:
        results["image_complement"] = all(
            fs_subset(fs_complement(fs_image(h, f)), fs_image(h, fs_complement(f))) for f in instance.f_family
        )
    return results, applicable


def maplaws_suite(rng: np.random.Generator, report: LawReport, inject_fault: bool, settings: SuiteSettings) -> None:
    for case in range(report.cases):
        instance = random_mapping_instance(rng)
        results, applicable = mapping_law_checks(instance, inject_fault)
        if not applicable:
            report.skipped += 1
        failed = [item for item, holds in results.items() if not holds]
        if failed:
            report.record({"case": case, "items": failed, **instance.describe()})
    report.details["image_complement_checked"] = report.cases - report.skipped


# Arithmetic identities ----------------------------------------------------


def _random_fsr(rng: np.random.Generator, params: ParameterSet, grid: AlphaGrid) -> FuzzySoftReal:
    values = []
    for _ in params:
        a, b, c = np.sort(rng.uniform(-10.0, 10.0, size=3))
        values.append(fr_triangular(float(a), float(b), float(c), grid))
    return FuzzySoftReal(params, tuple(values))


def identities_suite(rng: np.random.Generator, report: LawReport, inject_fault: bool, settings: SuiteSettings) -> None:
    grid = AlphaGrid.uniform(settings.grid)
    params = ParameterSet(_labels("e", 3))
    zero = fsr_crisp(0.5 if inject_fault else 0.0, params, grid)
    one = fsr_crisp(1.0, params, grid)
    for case in range(report.cases):
        a = _random_fsr(rng, params, grid)
        if not fsr_equal(fsr_add(a, zero), a):
            report.record({"case": case, "identity": "additive", "support": [v.support_hull for v in a.values]})
        if not fsr_equal(fsr_mul(a, one), a):
            report.record({"case": case, "identity": "multiplicative", "support": [v.support_hull for v in a.values]})

    for case in range(report.cases):
        r, x = (float(v) for v in rng.uniform(-100.0, 100.0, size=2))
        if not fsr_equal(fsr_abs(fsr_crisp(r, params, grid)), fsr_crisp(abs(r), params, grid)):
            report.record({"case": case, "identity": "abs_of_crisp", "r": r})
        if not fsr_equal(fsr_mul(fsr_crisp(r, params, grid), fsr_crisp(x, params, grid)), fsr_crisp(r * x, params, grid)):
            report.record({"case": case, "identity": "crisp_product", "r": r, "x": x})
    report.details["crisp_cases"] = report.cases


# Norm axioms --------------------------------------------------------------


def normaxioms_suite(rng: np.random.Generator, report: LawReport, inject_fault: bool, settings: SuiteSettings) -> None:
    params = ParameterSet(_labels("e", 3))
    grid = AlphaGrid.uniform(settings.grid)
    weights = rng.uniform(0.5, 2.0, size=len(params))
    if inject_fault:
        weights[-1] = 0.0
        norm = FSNorm(params, grid, 2.0, weights, dim=3)
    else:
        norm = FSNorm.lifted(params, grid, 2.0, weights.tolist(), dim=3)
    samples = []
    for _ in range(report.cases):
        x = np.zeros(3) if rng.random() < 0.1 else rng.normal(0.0, 10.0, size=3)
        y = rng.normal(0.0, 10.0, size=3)
        r = float(rng.uniform(-5.0, 5.0))
        lambdas_x = rng.integers(1, 21, size=3) / 20
        lambdas_y = rng.integers(1, 21, size=3) / 20
        samples.append((FSVectorPoint.of(x, params, lambdas_x), FSVectorPoint.of(y, params, lambdas_y), r))
    result = fsnorm_axiom_check(norm, samples)
    for violation in result.violations:
        x, y, r = samples[violation.sample]
        report.record(
            {"case": violation.sample, "axiom": violation.axiom, "detail": violation.detail, "r": r}
        )
    report.details["weights"] = norm.weights.tolist()


# Topology slices ----------------------------------------------------------


def slices_suite(rng: np.random.Generator, report: LawReport, inject_fault: bool, settings: SuiteSettings) -> None:
    params = ParameterSet(_labels("e", 2))
    universe = Universe(_labels("x", 2))
    sizes = []
    for case in range(report.cases):
        generators = [
            FuzzySoftSet(params, universe, rng.integers(0, 3, size=(2, 2)) / 2)
            for _ in range(int(rng.integers(1, 4)))
        ]
        try:
            topology = fst_closure(generators, params, universe, settings.closure)
        except TopologyAxiomError as exc:
            report.record({"case": case, "stage": "closure", "verdict": exc.verdict.describe()})
            continue
        sizes.append(len(topology))
        for e in params:
            try:
                fst_slice(topology, e)
            except TopologyAxiomError as exc:
                report.record(
                    {"case": case, "parameter": e, "verdict": exc.verdict.describe(), "generators": [_matrix(g) for g in generators]}
                )
    if sizes:
        report.details["opens_min"] = int(min(sizes))
        report.details["opens_max"] = int(max(sizes))


# Hausdorff separation -----------------------------------------------------


def hausdorff_suite(rng: np.random.Generator, report: LawReport, inject_fault: bool, settings: SuiteSettings) -> None:
    params = ParameterSet(_labels("e", 2))
    norm = FSNorm.lifted(params, AlphaGrid.uniform(settings.grid), 2.0, dim=2)
    grid_points = 0
    for case in range(report.cases):
        x = rng.normal(0.0, 5.0, size=2)
        y = rng.normal(0.0, 5.0, size=2)
        while np.array_equal(x, y):
            y = rng.normal(0.0, 5.0, size=2)
        px = FSVectorPoint.of(x, params, rng.integers(1, 21, size=2) / 20)
        py = FSVectorPoint.of(y, params, rng.integers(1, 21, size=2) / 20)
        witness = hausdorff_separate(norm, px, py)
        grid_points = max(grid_points, witness.grid_points)
        if not (witness.ok and witness.u.contains(px) and witness.v.contains(py)):
            report.record(
                {"case": case, "x": x.tolist(), "y": y.tolist(), "common_points": witness.common_points}
            )
    report.details["largest_grid"] = grid_points


# Cut arithmetic against the sup-min oracle --------------------------------


def _random_triangle(rng: np.random.Generator, grid: AlphaGrid, low: float = -5.0, high: float = 5.0):
    a, b, c = np.sort(rng.uniform(low, high, size=3))
    return fr_triangular(float(a), float(b), float(c), grid)


def _result_span(a: FuzzyReal, b: FuzzyReal, op: str) -> Tuple[float, float]:
    (a_lo, a_hi), (b_lo, b_hi) = a.support_hull, b.support_hull
    if op == "add":
        return a_lo + b_lo, a_hi + b_hi
    if op == "sub":
        return a_lo - b_hi, a_hi - b_lo
    corners = [x * y for x in a.support_hull for y in b.support_hull]
    return min(corners), max(corners)


def oracle_suite(rng: np.random.Generator, report: LawReport, inject_fault: bool, settings: SuiteSettings) -> None:
    """``add`` and ``mul`` on non-negative reals must agree with the oracle; ``sub`` is reported only."""

    grid = AlphaGrid.uniform(settings.grid)
    worst = {"add": 0.0, "sub": 0.0, "mul": 0.0}
    sub_disagreements = 0
    for case in range(report.cases):
        a = _random_triangle(rng, grid)
        b = _random_triangle(rng, grid)
        p = _random_triangle(rng, grid, 0.0)
        q = _random_triangle(rng, grid, 0.0)
        for op, left, right in (("add", a, b), ("sub", a, b), ("mul", p, q)):
            lo, hi = _result_span(left, right, op)
            step = settings.oracle_step * max(hi - lo, 1e-9)
            result = oracle_deviation(left, right, op, step)
            worst[op] = max(worst[op], result.max_deviation)
            if result.agrees:
                continue
            if op == "sub":
                sub_disagreements += 1
                continue
            report.record(
                {
                    "case": case,
                    "op": op,
                    "max_deviation": result.max_deviation,
                    "tolerance": result.tolerance,
                    "alpha": float(grid.levels[result.worst_level]),
                }
            )
    for op, deviation in worst.items():
        report.details[f"{op}_max_deviation"] = deviation
    report.details["sub_disagreements"] = sub_disagreements


# Convergence --------------------------------------------------------------


def _constant_grade_sequence(supports: np.ndarray, params: ParameterSet, lambdas: np.ndarray) -> FSSequence:
    return FSSequence(tuple(FSVectorPoint.of(np.atleast_1d(x), params, lambdas) for x in supports))


def geometric_sequence(length: int, params: ParameterSet) -> FSSequence:
    """``x_n = 2 - 2^(1-n)`` for ``n = 1..length`` with grades 1."""

    n = np.arange(1, length + 1, dtype=np.float64)
    return _constant_grade_sequence(2.0 - 2.0 ** (1.0 - n), params, np.ones(len(params)))


def predicted_index(delta: float) -> int:
    """Smallest ``N`` with ``2^(1-n) < delta`` for every ``n >= N``."""

    return int(math.floor(1.0 + math.log2(1.0 / delta))) + 1


def random_selection(rng: np.random.Generator, length: int, size: int) -> np.ndarray:
    """Strictly increasing 0-based positions of ``size`` random terms plus the last two."""

    head = rng.choice(length - 2, size=min(size, length - 2), replace=False)
    return np.union1d(head, [length - 2, length - 1])


def _subsequence_holds(
    norm: FSNorm, seq: FSSequence, indices: Sequence[int], limit: FSVectorPoint, eps: float
) -> bool:
    picked = subsequence(seq, indices)
    return seq_converges(norm, picked, limit, eps, eps).ok and limits_agree(picked[-1], limit, eps)


def convergence_suite(rng: np.random.Generator, report: LawReport, inject_fault: bool, settings: SuiteSettings) -> None:
    """Convergent sequences are Cauchy and every subsequence keeps the limit."""

    params = ParameterSet(_labels("e", 2))
    grid = AlphaGrid.uniform(settings.grid)
    line = FSNorm.lifted(params, grid, 2.0, dim=1)
    eps = 1e-3
    seq = geometric_sequence(40, params)
    limit = FSVectorPoint.of([2.0], params)

    converged = seq_converges(line, seq, limit, eps, eps)
    expected = predicted_index(eps)
    if not converged.ok or converged.n != expected:
        report.record({"case": "geometric", "check": "converges", "n": converged.n, "expected": expected})
    if not seq_is_cauchy(line, seq, eps).ok:
        report.record({"case": "geometric", "check": "cauchy"})
    if not _subsequence_holds(line, seq, range(1, len(seq), 2), limit, eps):
        report.record({"case": "geometric", "check": "even_subsequence"})
    selection = random_selection(rng, len(seq), int(rng.integers(1, 20)))
    if not _subsequence_holds(line, seq, selection, limit, eps):
        report.record({"case": "geometric", "check": "random_subsequence", "indices": (selection + 1).tolist()})
    report.details["predicted_n"] = expected

    plane = FSNorm.lifted(params, grid, 2.0, dim=2)
    convergent = 0
    for case in range(report.cases):
        target = rng.normal(0.0, 5.0, size=2)
        direction = rng.normal(0.0, 1.0, size=2)
        ratio = float(rng.uniform(0.3, 0.8))
        scale = float(rng.uniform(0.5, 10.0))
        supports = target + scale * ratio ** np.arange(1, 101)[:, None] * direction
        lambdas = rng.integers(1, 21, size=2) / 20
        sequence = _constant_grade_sequence(supports, params, lambdas)
        target_point = FSVectorPoint.of(target, params, lambdas)
        verdict = seq_converges(plane, sequence, target_point, eps / 2, eps / 2)
        if not verdict.ok:
            report.record(
                {"case": case, "check": "converges", "ratio": ratio, "scale": scale, "last_far": verdict.counterexample}
            )
            continue
        convergent += 1
        if not seq_is_cauchy(plane, sequence, eps).ok:
            report.record({"case": case, "check": "convergent_implies_cauchy", "ratio": ratio, "scale": scale})
        selection = random_selection(rng, len(sequence), int(rng.integers(1, 40)))
        if not _subsequence_holds(plane, sequence, selection, target_point, eps / 2):
            report.record({"case": case, "check": "random_subsequence", "indices": (selection + 1).tolist()})
    report.details["random_convergent"] = convergent


# Registry -----------------------------------------------------------------

Suite = Callable[[np.random.Generator, LawReport, bool, SuiteSettings], None]

LAWS: Dict[str, Suite] = {
    "demorgan": demorgan_suite,
    "maplaws": maplaws_suite,
    "identities": identities_suite,
    "normaxioms": normaxioms_suite,
    "slices": slices_suite,
    "hausdorff": hausdorff_suite,
    "oracle": oracle_suite,
    "convergence": convergence_suite,
}

FAULT_INJECTABLE = frozenset({"demorgan", "maplaws", "identities", "normaxioms"})


def run_law(
    law: str,
    seed: int,
    cases: Optional[int] = None,
    inject_fault: bool = False,
    settings: Optional[SuiteSettings] = None,
) -> LawReport:
    if law not in LAWS:
        raise UnknownLaw(f"Unknown law {law!r}; choose from {', '.join(sorted(LAWS))}")
    if inject_fault and law not in FAULT_INJECTABLE:
        LOGGER.warning("Fault injection is not available for %s; running the honest suite", law)
        inject_fault = False
    count = DEFAULT_CASES[law] if cases is None else int(cases)
    if count < 1:
        raise FuzzySoftError(f"A suite needs at least one case, got {count}")
    report = LawReport(law, seed, count)
    rng = np.random.default_rng(seed)
    LOGGER.info("Running %s over %d cases (seed=%d)", law, count, seed)
    LAWS[law](rng, report, inject_fault, settings or SuiteSettings())
    if report.violations:
        LOGGER.warning("%s: %d violations, first %s", law, report.violations, report.first_witness)
    return report


def run_laws(laws: Sequence[str], seed: int, settings: Optional[SuiteSettings] = None) -> List[LawReport]:
    return [run_law(law, seed, settings=settings) for law in laws]


__all__ = [
    "DEFAULT_CASES",
    "FAULT_INJECTABLE",
    "LAWS",
    "LawReport",
    "MappingInstance",
    "SuiteSettings",
    "UnknownLaw",
    "geometric_sequence",
    "mapping_law_checks",
    "predicted_index",
    "random_mapping_instance",
    "random_selection",
    "run_law",
    "run_laws",
]
