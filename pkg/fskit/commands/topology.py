from __future__ import annotations

import argparse
import itertools
import logging
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..services.core_fuzzy import FuzzySoftError, grades_on_lattice
from ..services.ingestion import (
    TOPOLOGY,
    Collection,
    document_kind,
    inputs_digest,
    load_collection,
    load_crisp_topology,
    read_json,
    save_collection,
)
from ..services.soft_algebra import FuzzySoftPoint, FuzzySoftSet, ParameterSet
from ..services.topology import (
    CrispTopology,
    FSTopology,
    TopologyAxiomError,
    TopologyVerdict,
    crisp_check,
    fst_check,
    fst_it,
    fst_lift_alpha_cuts,
    fst_lift_crisp,
    fst_membership_support_open,
    fst_membership_wprime,
    fst_separation,
    fst_slice,
)
from . import CommandContext, parse_floats, parse_labels
from .report import RunReport

LOGGER = logging.getLogger(__name__)

DEFAULT_CUT_LEVELS = "0.25,0.5,0.75,1"


def register(subparsers: argparse._SubParsersAction, common: argparse.ArgumentParser) -> None:
    topology = subparsers.add_parser("topology", parents=[common], help="Finite F.S topology checks")
    actions = topology.add_subparsers(dest="action", required=True, metavar="ACTION")

    check = actions.add_parser("check", parents=[common], help="Verify the topology axioms on a document")
    check.add_argument("document")
    check.set_defaults(handler=handle_check)

    slice_ = actions.add_parser("slice", parents=[common], help="Fuzzy topology of each parameter slice")
    slice_.add_argument("document")
    slice_.add_argument("--parameter", action="append", help="only these parameters (repeatable)")
    slice_.set_defaults(handler=handle_slice)

    lift = actions.add_parser("lift", parents=[common], help="Lift a crisp topology or the alpha-cuts of a row")
    lift.add_argument("document")
    lift.add_argument("--params", default="e1,e2", help="parameters of the lift of a crisp topology")
    lift.add_argument("--set", dest="set_name", help="set whose row is lifted (default: the first)")
    lift.add_argument("--row", help="parameter row to lift (default: the first)")
    lift.add_argument("--levels", default=DEFAULT_CUT_LEVELS, help="alpha levels, comma-separated")
    lift.add_argument("--output", type=Path, help="save the lifted collection")
    lift.set_defaults(handler=handle_lift)

    separation = actions.add_parser("separation", parents=[common], help="Search T0, T1 and T2 witnesses")
    separation.add_argument("document")
    separation.set_defaults(handler=handle_separation)


def _open_names(collection: Collection) -> Optional[List[str]]:
    """Names of the distinct opens in checking order, if every set uses the header parameters."""

    names: Dict[bytes, str] = {}
    for name, f in collection.sets.items():
        if f.params.parameters != collection.params.parameters:
            return None
        names.setdefault(np.ascontiguousarray(f.grades, dtype=np.float64).tobytes(), name)
    return list(names.values())


def _verdict_fields(verdict: TopologyVerdict, names: Optional[Sequence[str]]) -> Tuple[Dict, Dict]:
    verdicts = {"topology": verdict.ok, "members": verdict.members, "method": verdict.method}
    witnesses: Dict = {}
    if not verdict.ok:
        verdicts["failure"] = verdict.failure
        if verdict.witness:
            witnesses["members"] = [names[i] if names else i for i in verdict.witness]
    return verdicts, witnesses


def _topology(collection: Collection, ctx: CommandContext) -> FSTopology:
    return FSTopology(
        collection.params,
        collection.universe,
        tuple(collection.sets.values()),
        ctx.config.closure_settings(),
    )


# check --------------------------------------------------------------------


def handle_check(args: argparse.Namespace, ctx: CommandContext) -> RunReport:
    path = ctx.ingestor.resolve(args.document)
    report = RunReport(command="topology check", seed=ctx.config.seed, inputs_digest=inputs_digest([path]))
    settings = ctx.config.closure_settings()
    if path.suffix.lower() == ".json" and document_kind(read_json(path)) == TOPOLOGY:
        universe, opens = load_crisp_topology(path)
        verdict = crisp_check(universe, opens, settings)
        names: Optional[List[str]] = ["{" + ",".join(sorted(v)) + "}" for v in dict.fromkeys(opens)]
        report.verdicts["kind"] = "crisp"
    else:
        collection = load_collection(path)
        verdict = fst_check(
            list(collection.sets.values()),
            params=collection.params,
            universe=collection.universe,
            settings=settings,
        )
        names = _open_names(collection)
        report.verdicts["kind"] = "fuzzy soft"
        report.verdicts["on_grade_lattice"] = all(
            grades_on_lattice(f.grades.ravel(), ctx.config.grade_lattice) for f in collection.sets.values()
        )
    verdicts, witnesses = _verdict_fields(verdict, names)
    report.verdicts.update(verdicts)
    report.witnesses.update(witnesses)
    report.ok = verdict.ok
    return report


# slice --------------------------------------------------------------------


def handle_slice(args: argparse.Namespace, ctx: CommandContext) -> RunReport:
    path = ctx.ingestor.resolve(args.document)
    report = RunReport(command="topology slice", seed=ctx.config.seed, inputs_digest=inputs_digest([path]))
    t = _topology(load_collection(path), ctx)
    parameters = args.parameter or list(t.params)
    failed: List[str] = []
    for e in parameters:
        try:
            ft = fst_slice(t, e)
            induced = len(fst_it(t, e, ctx.config.grade_lattice))
            row = {"parameter": e, "opens": len(ft), "fuzzy_topology": True, "induced_crisp_opens": induced}
        except TopologyAxiomError as exc:
            failed.append(e)
            report.witnesses[e] = exc.verdict.describe()
            row = {"parameter": e, "opens": 0, "fuzzy_topology": False, "induced_crisp_opens": 0}
        report.table.append(row)
    report.verdicts["opens"] = len(t)
    report.verdicts["slices"] = len(parameters)
    report.verdicts["failed_slices"] = failed
    report.ok = not failed
    return report


# lift ---------------------------------------------------------------------


def _lift_crisp(args: argparse.Namespace, ctx: CommandContext, path: Path, report: RunReport) -> Collection:
    universe, opens = load_crisp_topology(path)
    crisp = CrispTopology(universe, tuple(opens), ctx.config.closure_settings())
    lifted = fst_lift_crisp(crisp, ParameterSet(tuple(parse_labels(args.params))))
    report.verdicts["kind"] = "crisp"
    report.verdicts["topology"] = True
    report.verdicts["opens"] = len(lifted)
    sets: Dict[str, FuzzySoftSet] = {}
    lattice = ctx.config.grade_lattice
    for index, (members, f) in enumerate(zip(crisp.opens, lifted.opens)):
        sets[f"V{index}"] = f
        report.table.append(
            {
                "name": f"V{index}",
                "open": sorted(members),
                "support_open": fst_membership_support_open(f, crisp),
                "superlevels_open": fst_membership_wprime(f, crisp, lattice),
            }
        )
    return Collection(lifted.params, lifted.universe, sets)


def _lift_cuts(args: argparse.Namespace, ctx: CommandContext, path: Path, report: RunReport) -> Collection:
    source = load_collection(path)
    if not source.sets:
        raise FuzzySoftError("The document holds no F.S set to lift")
    name = args.set_name or next(iter(source.sets))
    if name not in source.sets:
        raise FuzzySoftError(f"No set named {name!r}")
    f = source.sets[name]
    row = args.row or f.params.parameters[0]
    mu = f.row(row)
    levels = sorted(set(parse_floats(args.levels, "levels") or []))
    params = ParameterSet(tuple(f"a{j}" for j in range(1, len(levels) + 1)), tuple(levels))
    collection, verdict = fst_lift_alpha_cuts(mu, params, ctx.config.closure_settings())
    report.verdicts["kind"] = "alpha-cuts"
    report.verdicts["source"] = f"{name}.{row}"
    report.verdicts.update(_verdict_fields(verdict, None)[0])
    report.ok = verdict.ok
    for label, level in zip(params, levels):
        cut = [x for x, grade in zip(mu.universe, mu.grades) if grade >= level]
        report.table.append({"parameter": label, "alpha": level, "cut": cut})
    sets: Dict[str, FuzzySoftSet] = {}
    for member in collection:
        if member.is_null():
            sets["null"] = member
        elif bool(np.all(member.grades == 1.0)):
            sets["absolute"] = member
        else:
            sets["lifted"] = member
    return Collection(params, mu.universe, sets)


def handle_lift(args: argparse.Namespace, ctx: CommandContext) -> RunReport:
    path = ctx.ingestor.resolve(args.document)
    report = RunReport(command="topology lift", seed=ctx.config.seed, inputs_digest=inputs_digest([path]))
    if path.suffix.lower() == ".json" and document_kind(read_json(path)) == TOPOLOGY:
        lifted = _lift_crisp(args, ctx, path, report)
    else:
        lifted = _lift_cuts(args, ctx, path, report)
    if args.output is not None:
        report.output = str(save_collection(lifted, args.output))
    return report


# separation ---------------------------------------------------------------


def _pairs(collection: Collection) -> List[Tuple[str, str, FuzzySoftPoint, FuzzySoftPoint]]:
    if collection.points:
        points = collection.points
    else:
        points = {x: FuzzySoftPoint.crisp(collection.params, collection.universe, x) for x in collection.universe}
    return [(a, b, points[a], points[b]) for a, b in itertools.combinations(points, 2)]


def handle_separation(args: argparse.Namespace, ctx: CommandContext) -> RunReport:
    path = ctx.ingestor.resolve(args.document)
    report = RunReport(command="topology separation", seed=ctx.config.seed, inputs_digest=inputs_digest([path]))
    collection = load_collection(path)
    t = _topology(collection, ctx)
    pairs = _pairs(collection)
    result = fst_separation(t, [(x, y) for _, _, x, y in pairs])
    report.verdicts["opens"] = len(t)
    report.verdicts["pairs"] = len(pairs)
    report.verdicts["skipped"] = [f"{pairs[k][0]},{pairs[k][1]}" for k in result.skipped]
    report.verdicts.update(result.as_dict())
    for axiom, verdict in (("T0", result.t0), ("T1", result.t1), ("T2", result.t2)):
        if verdict.counterexample is not None:
            a, b, _, _ = pairs[verdict.counterexample]
            report.witnesses[f"not_{axiom}"] = [a, b]
    for k, (a, b, _, _) in enumerate(pairs):
        if k in result.skipped:
            continue
        report.table.append(
            {
                "pair": f"{a},{b}",
                "T0": list(result.t0.witnesses.get(k, ())),
                "T1": list(result.t1.witnesses.get(k, ())),
                "T2": list(result.t2.witnesses.get(k, ())),
            }
        )
    return report


__all__ = ["handle_check", "handle_lift", "handle_separation", "handle_slice", "register"]
