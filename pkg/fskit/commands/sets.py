from __future__ import annotations

import argparse
import logging
from pathlib import Path
from typing import Dict, List

from ..services.core_fuzzy import FuzzySoftError
from ..services.decision import STRATEGIES, TIE_BREAK, rank_objects, ranking_table, winner
from ..services.expressions import evaluate
from ..services.ingestion import (
    TABLE,
    document_kind,
    format_grade,
    inputs_digest,
    load_collection,
    load_fss,
    read_json,
    save_fss,
)
from ..services.soft_algebra import FuzzySoftSet
from . import CommandContext, parse_floats
from .report import RunReport

LOGGER = logging.getLogger(__name__)


def register(subparsers: argparse._SubParsersAction, common: argparse.ArgumentParser) -> None:
    ops = subparsers.add_parser("ops", parents=[common], help="Evaluate a set expression over loaded documents")
    ops.add_argument("expression", help='e.g. "complement f", "union f phi", "subset? f g"')
    ops.add_argument("inputs", nargs="+", help="grade tables (bound to their file stem) or collections")
    ops.add_argument("--output", type=Path, help="where to save a set-valued result")
    ops.set_defaults(handler=handle_ops)

    decide = subparsers.add_parser("decide", parents=[common], help="Rank the objects of a grade table")
    decide.add_argument("table")
    decide.add_argument("--strategy", choices=STRATEGIES, default=STRATEGIES[0])
    decide.add_argument("--weights", help="comma-separated, one per parameter (weighted-sum)")
    decide.set_defaults(handler=handle_decide)


def _load_names(paths: List[Path]) -> Dict[str, FuzzySoftSet]:
    names: Dict[str, FuzzySoftSet] = {}
    for path in paths:
        if path.suffix.lower() == ".csv" or document_kind(read_json(path)) == TABLE:
            names[path.stem] = load_fss(path)
        else:
            names.update(load_collection(path).sets)
    return names


def _set_payload(f: FuzzySoftSet) -> Dict[str, object]:
    return {
        "parameters": list(f.params.parameters),
        "universe": list(f.universe.objects),
        "grades": {e: [format_grade(g) for g in row] for e, row in zip(f.params, f.grades)},
    }


def handle_ops(args: argparse.Namespace, ctx: CommandContext) -> RunReport:
    paths = [ctx.ingestor.resolve(name) for name in args.inputs]
    report = RunReport(command="ops", seed=ctx.config.seed, inputs_digest=inputs_digest(paths))
    names = _load_names(paths)
    if not names:
        raise FuzzySoftError("No F.S sets found in the inputs")
    first = next(iter(names.values()))
    value = evaluate(args.expression, names, first.params, first.universe)
    report.verdicts["expression"] = args.expression
    if isinstance(value, bool):
        report.verdicts["value"] = value
        return report
    report.verdicts["result"] = _set_payload(value)
    if args.output is not None:
        report.output = str(save_fss(value, args.output))
    return report


def handle_decide(args: argparse.Namespace, ctx: CommandContext) -> RunReport:
    path = ctx.ingestor.resolve(args.table)
    report = RunReport(command="decide", seed=ctx.config.seed, inputs_digest=inputs_digest([path]))
    table = load_fss(path)
    ranking = rank_objects(table, args.strategy, parse_floats(args.weights, "weights"))
    report.verdicts["strategy"] = args.strategy
    label, score = winner(ranking)
    report.verdicts["winner"] = label
    report.verdicts["winner_score"] = score
    report.verdicts["tie_break"] = TIE_BREAK
    report.table = ranking_table(ranking)
    return report


__all__ = ["handle_decide", "handle_ops", "register"]
