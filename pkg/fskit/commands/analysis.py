from __future__ import annotations

import argparse
import logging
import re
from typing import Any, Dict, List, Optional

import numpy as np

from ..services.core_fuzzy import FuzzySoftError
from ..services.fuzzy_real import (
    LEVEL_OPS,
    AlphaGrid,
    FuzzyReal,
    fr_abs,
    fr_crisp,
    fr_trapezoidal,
    fr_triangular,
    oracle_deviation,
)
from ..services.laws import LAWS, run_law
from ..services.normed import (
    ContractionSpec,
    FSNorm,
    FSVectorPoint,
    fixpoint_solve,
    fixpoint_uniqueness_probe,
)
from ..services.soft_algebra import ParameterSet
from . import CommandContext, parse_floats, parse_labels
from .report import RunReport

LOGGER = logging.getLogger(__name__)

FUZZY_REAL = re.compile(r"^\s*(tri|trap|crisp)\s*:\s*(.+)$")
# Slack allowed when comparing a measured error against its bound.
BOUND_SLACK = 1e-12


def register(subparsers: argparse._SubParsersAction, common: argparse.ArgumentParser) -> None:
    check = subparsers.add_parser("check", parents=[common], help="Run a seeded property suite")
    check.add_argument("law", help=f"one of: {', '.join(LAWS)}")
    check.add_argument("--count", type=int, help="number of random cases")
    check.add_argument("--inject-fault", action="store_true", help="corrupt one side of every law")
    check.set_defaults(handler=handle_check)

    fixpoint = subparsers.add_parser("fixpoint", parents=[common], help="Iterate a contraction to its fixed point")
    fixpoint.add_argument("map", nargs="?", help='sympy expression, e.g. "x/2+1" or "[x0/3, x1/4+1]"')
    fixpoint.add_argument("--k", type=float, help="Lipschitz constant in (0, 1)")
    fixpoint.add_argument("--affine-a", help='matrix rows separated by ";", e.g. "0.2,0.1;0,0.3"')
    fixpoint.add_argument("--affine-b", help="offset vector, e.g. 1,1")
    fixpoint.add_argument("--start", action="append", help="start support (repeat to check uniqueness)")
    fixpoint.add_argument("--grades", help="grades of the start point, one per parameter")
    fixpoint.add_argument("--params", default="e1", help="parameter labels, comma-separated")
    fixpoint.add_argument("--weights", help="norm weights, one per parameter")
    fixpoint.add_argument("--p", default="2", help="base norm exponent: 1, 2 or inf")
    fixpoint.add_argument("--dim", type=int, default=1)
    fixpoint.add_argument("--max-iter", type=int, default=10_000)
    fixpoint.set_defaults(handler=handle_fixpoint)

    real = subparsers.add_parser("real", parents=[common], help="Fuzzy real arithmetic on alpha-cuts")
    real.add_argument("op", choices=[*LEVEL_OPS, "abs"])
    real.add_argument("a", help="tri:a,b,c | trap:a,b,c,d | crisp:r")
    real.add_argument("b", nargs="?", help="second operand (not used by abs)")
    real.add_argument("--alpha", help="levels to print, comma-separated (default: lowest, middle, 1)")
    real.add_argument("--oracle", action="store_true", help="compare with the sup-min oracle")
    real.set_defaults(handler=handle_real)


# check --------------------------------------------------------------------


def handle_check(args: argparse.Namespace, ctx: CommandContext) -> RunReport:
    config = ctx.config
    result = run_law(args.law, config.seed, args.count, args.inject_fault, config.suite_settings())
    report = RunReport(command=f"check {args.law}", seed=config.seed, ok=result.ok)
    report.verdicts = {
        "law": result.law,
        "cases": result.cases,
        "violations": result.violations,
        "skipped": result.skipped,
        "inject_fault": bool(args.inject_fault),
        **result.details,
    }
    if result.first_witness is not None:
        report.witnesses["first"] = result.first_witness
    return report


# fixpoint -----------------------------------------------------------------


def _affine_matrix(text: str) -> np.ndarray:
    rows = [parse_floats(row, "matrix row") for row in text.split(";") if row.strip()]
    if not rows or len({len(row) for row in rows}) != 1:
        raise FuzzySoftError(f"Cannot read matrix {text!r}")
    return np.array(rows, dtype=np.float64)


def _contraction(args: argparse.Namespace) -> tuple[ContractionSpec, Optional[np.ndarray]]:
    """The map and, for affine maps, the solution of ``(I - A) x = b``."""

    if args.affine_a is not None:
        if args.affine_b is None:
            raise FuzzySoftError("--affine-a needs --affine-b")
        a = _affine_matrix(args.affine_a)
        b = np.array(parse_floats(args.affine_b, "offset"), dtype=np.float64)
        spec = ContractionSpec.affine(a, b, args.k, args.p)
        exact = np.linalg.solve(np.eye(b.size) - a, b)
        return spec, exact
    if args.map is None:
        raise FuzzySoftError("fixpoint needs a map expression or --affine-a/--affine-b")
    if args.k is None:
        raise FuzzySoftError("An expression map needs --k")
    return ContractionSpec.from_expression(args.map, args.k, args.dim, args.p), None


def _starts(args: argparse.Namespace, params: ParameterSet, dim: int) -> List[FSVectorPoint]:
    texts = args.start or [",".join(["0"] * dim)]
    grades = parse_floats(args.grades, "grades")
    return [FSVectorPoint.of(parse_floats(text, "start"), params, grades) for text in texts]


def _coords(x: np.ndarray) -> Any:
    return float(x[0]) if x.size == 1 else [float(v) for v in x]


def handle_fixpoint(args: argparse.Namespace, ctx: CommandContext) -> RunReport:
    config = ctx.config
    report = RunReport(command="fixpoint", seed=config.seed)
    spec, exact = _contraction(args)
    params = ParameterSet(tuple(parse_labels(args.params)))
    norm = FSNorm.lifted(params, config.alpha_grid(), spec.p, parse_floats(args.weights, "weights"), spec.dim)
    starts = _starts(args, params, spec.dim or args.dim)

    result = fixpoint_solve(norm, spec, starts[0], config.tol, args.max_iter)
    reference = result.fixed_point if exact is None else result.fixed_point.moved_to(exact)
    measured = result.measured_errors(norm, reference)
    # against the last iterate the true error may exceed the measured one by up to tol
    slack = BOUND_SLACK + (config.tol if exact is None else 0.0)
    previous = starts[0].x
    bounds_hold = True
    for index, point in enumerate(result.iterates):
        within = bool(
            measured[index] <= result.apriori_bounds[index] + slack
            and measured[index] <= result.aposteriori_bounds[index] + slack
        )
        bounds_hold = bounds_hold and within
        report.table.append(
            {
                "n": index + 1,
                "x_n": _coords(point.x),
                "step": norm.distance(point.x, previous),
                "a_priori": float(result.apriori_bounds[index]),
                "a_posteriori": float(result.aposteriori_bounds[index]),
                "measured": float(measured[index]),
            }
        )
        previous = point.x

    report.verdicts = {
        "map": spec.label,
        "k": spec.k,
        "status": result.status,
        "iterations": result.iterations,
        "fixed_point": _coords(result.fixed_point.x),
        "grades": [float(g) for g in result.fixed_point.lambdas],
        "bounds_hold": bounds_hold,
    }
    if exact is not None:
        report.verdicts["elimination_solution"] = _coords(exact)
        report.verdicts["oracle_gap"] = norm.distance(result.fixed_point.x, exact)
    ok = result.converged and bounds_hold
    if len(starts) > 1:
        uniqueness = fixpoint_uniqueness_probe(norm, spec, starts, config.tol, args.max_iter)
        report.verdicts["unique"] = uniqueness.ok
        report.verdicts["spread"] = uniqueness.spread
        report.verdicts["allowance"] = uniqueness.allowance
        report.witnesses["supports"] = [list(s) for s in uniqueness.supports]
        ok = ok and uniqueness.ok
    report.ok = ok
    return report


# real ---------------------------------------------------------------------


def parse_fuzzy_real(text: str, grid: AlphaGrid) -> FuzzyReal:
    match = FUZZY_REAL.match(text)
    if match is None:
        raise FuzzySoftError(f"Cannot read fuzzy real {text!r}; use tri:a,b,c, trap:a,b,c,d or crisp:r")
    kind, body = match.groups()
    values = parse_floats(body, kind) or []
    expected = {"tri": 3, "trap": 4, "crisp": 1}[kind]
    if len(values) != expected:
        raise FuzzySoftError(f"{kind} takes {expected} numbers, got {len(values)}")
    if kind == "tri":
        return fr_triangular(*values, grid)
    if kind == "trap":
        return fr_trapezoidal(*values, grid)
    return fr_crisp(values[0], grid)


def _levels(args: argparse.Namespace, grid: AlphaGrid) -> List[float]:
    requested = parse_floats(args.alpha, "alpha")
    if requested is not None:
        return requested
    levels = grid.levels
    return sorted({float(levels[0]), float(levels[len(levels) // 2]), float(levels[-1])})


def handle_real(args: argparse.Namespace, ctx: CommandContext) -> RunReport:
    config = ctx.config
    grid = config.alpha_grid()
    report = RunReport(command=f"real {args.op}", seed=config.seed)
    a = parse_fuzzy_real(args.a, grid)
    if args.op == "abs":
        result: FuzzyReal = fr_abs(a)
    else:
        if args.b is None:
            raise FuzzySoftError(f"{args.op} needs two operands")
        b = parse_fuzzy_real(args.b, grid)
        result = LEVEL_OPS[args.op](a, b)
        if args.oracle:
            lo, hi = result.support_hull
            oracle = oracle_deviation(a, b, args.op, config.oracle_step * max(hi - lo, 1e-9))
            report.verdicts["oracle_max_deviation"] = oracle.max_deviation
            report.verdicts["oracle_tolerance"] = oracle.tolerance
            report.verdicts["oracle_agrees"] = oracle.agrees
    report.verdicts["support"] = list(result.support_hull)
    report.verdicts["core"] = list(result.core)
    for alpha in _levels(args, grid):
        lower, upper = result.cut(alpha)
        report.table.append({"alpha": alpha, "lower": lower, "upper": upper})
    return report


__all__ = ["handle_check", "handle_fixpoint", "handle_real", "parse_fuzzy_real", "register"]
