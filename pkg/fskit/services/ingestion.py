"""Utilities for reading and writing grade-table documents.

Three JSON document kinds are understood, told apart by their keys:

* grade tables ``{"universe", "parameters", "reindex"?, "grades"}``,
* collections ``{"universe", "parameters", "reindex"?, "sets", "points"?}``,
* crisp topologies ``{"universe", "opens"}``.

Grade tables may also be CSV files (header row = objects, first column =
parameters).  Grades are written as decimal strings so that a saved
document loads back to the same binary64 values.
"""
from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, FrozenSet, List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from .core_fuzzy import FuzzySoftError, Universe
from .soft_algebra import FuzzySoftPoint, FuzzySoftSet, ParameterSet

LOGGER = logging.getLogger(__name__)

GradeText = Union[str, float]

TABLE = "table"
COLLECTION = "collection"
TOPOLOGY = "topology"


class DocumentError(FuzzySoftError):
    """Raised for malformed documents; carries the position when one is known."""

    def __init__(
        self,
        message: str,
        *,
        path: Optional[Path] = None,
        line: Optional[int] = None,
        column: Optional[int] = None,
        cell: Optional[Tuple[str, str]] = None,
    ) -> None:
        where = []
        if path is not None:
            where.append(str(path))
        if line is not None:
            where.append(f"line {line}" + (f", column {column}" if column is not None else ""))
        if cell is not None:
            where.append(f"cell ({cell[0]}, {cell[1]})")
        super().__init__(f"{': '.join(where)}: {message}" if where else message)
        self.path = path
        self.line = line
        self.column = column
        self.cell = cell


# Document models ----------------------------------------------------------


def _unique(labels: List[str]) -> List[str]:
    duplicates = sorted(label for label, count in Counter(labels).items() if count > 1)
    if duplicates:
        raise ValueError(f"duplicate labels {duplicates}")
    return labels


class _Header(BaseModel):
    model_config = ConfigDict(extra="forbid")

    universe: List[str] = Field(min_length=1)
    parameters: List[str] = Field(min_length=1)
    reindex: Optional[List[float]] = None

    @field_validator("universe", "parameters")
    @classmethod
    def distinct_labels(cls, labels: List[str]) -> List[str]:
        return _unique(labels)

    @model_validator(mode="after")
    def reindex_matches(self) -> "_Header":
        if self.reindex is not None and len(self.reindex) != len(self.parameters):
            raise ValueError(f"reindex has {len(self.reindex)} values for {len(self.parameters)} parameters")
        return self


class GradeTableDocument(_Header):
    grades: List[List[GradeText]]

    @model_validator(mode="after")
    def matrix_dimensions(self) -> "GradeTableDocument":
        _check_matrix(self.grades, len(self.parameters), len(self.universe))
        return self


class SetEntry(BaseModel):
    model_config = ConfigDict(extra="forbid")

    parameters: Optional[List[str]] = None
    grades: List[List[GradeText]]

    @field_validator("parameters")
    @classmethod
    def distinct_labels(cls, labels: Optional[List[str]]) -> Optional[List[str]]:
        return labels if labels is None else _unique(labels)


class PointEntry(BaseModel):
    model_config = ConfigDict(extra="forbid")

    support: str
    grades: List[GradeText] = Field(min_length=1)


class CollectionDocument(_Header):
    sets: Dict[str, SetEntry] = Field(default_factory=dict)
    points: Optional[Dict[str, PointEntry]] = None


class CrispTopologyDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    universe: List[str] = Field(min_length=1)
    opens: List[List[str]]

    @field_validator("universe")
    @classmethod
    def distinct_labels(cls, labels: List[str]) -> List[str]:
        return _unique(labels)


def _check_matrix(grades: Sequence[Sequence[Any]], rows: int, columns: int) -> None:
    if len(grades) != rows:
        raise ValueError(f"grade matrix has {len(grades)} rows for {rows} parameters")
    for index, row in enumerate(grades):
        if len(row) != columns:
            raise ValueError(f"grade row {index + 1} has {len(row)} entries for {columns} objects")


# Parsing helpers ----------------------------------------------------------


def _parse_grade(value: GradeText, cell: Tuple[str, str], path: Optional[Path]) -> float:
    try:
        number = float(value)
    except (TypeError, ValueError):
        raise DocumentError(f"grade {value!r} is not a number", path=path, cell=cell) from None
    if math.isnan(number) or not 0.0 <= number <= 1.0:
        raise DocumentError(f"grade {value!r} is outside [0, 1]", path=path, cell=cell)
    return number


def _grade_matrix(
    grades: Sequence[Sequence[GradeText]], params: Sequence[str], universe: Universe, path: Optional[Path]
) -> np.ndarray:
    return np.array(
        [[_parse_grade(g, (e, x), path) for x, g in zip(universe, row)] for e, row in zip(params, grades)],
        dtype=np.float64,
    )


def format_grade(value: float) -> str:
    """Shortest decimal string that reads back to ``value``."""

    return repr(float(value))


def read_json(path: Path) -> Dict[str, Any]:
    try:
        raw = path.read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise DocumentError(f"not UTF-8 text ({exc.reason})", path=path) from None
    except OSError as exc:
        raise DocumentError(f"cannot read document ({exc.strerror})", path=path) from None
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise DocumentError(exc.msg, path=path, line=exc.lineno, column=exc.colno) from None
    if not isinstance(data, dict):
        raise DocumentError("top-level value must be an object", path=path, line=1, column=1)
    return data


def _validated(model: type, data: Dict[str, Any], path: Optional[Path]) -> Any:
    try:
        return model.model_validate(data)
    except ValidationError as exc:
        error = exc.errors()[0]
        location = ".".join(str(part) for part in error["loc"]) or "document"
        message = str(error["msg"]).removeprefix("Value error, ")
        raise DocumentError(f"{location}: {message}", path=path) from None


def _header(doc: _Header, path: Optional[Path]) -> Tuple[ParameterSet, Universe]:
    reindex = None if doc.reindex is None else tuple(doc.reindex)
    try:
        return ParameterSet(tuple(doc.parameters), reindex), Universe(tuple(doc.universe))
    except FuzzySoftError as exc:
        raise DocumentError(str(exc), path=path) from None


def document_kind(data: Dict[str, Any]) -> str:
    if "opens" in data:
        return TOPOLOGY
    if "sets" in data or "points" in data:
        return COLLECTION
    return TABLE


def _dump(payload: Dict[str, Any]) -> str:
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


def _header_payload(params: ParameterSet, universe: Universe) -> Dict[str, Any]:
    payload: Dict[str, Any] = {"universe": list(universe.objects), "parameters": list(params.parameters)}
    if params.reindex is not None:
        payload["reindex"] = list(params.reindex)
    return payload


def _matrix_payload(grades: np.ndarray) -> List[List[str]]:
    return [[format_grade(g) for g in row] for row in grades]


# Grade tables -------------------------------------------------------------


def parse_fss(data: Dict[str, Any], path: Optional[Path] = None) -> FuzzySoftSet:
    doc = _validated(GradeTableDocument, data, path)
    params, universe = _header(doc, path)
    return FuzzySoftSet(params, universe, _grade_matrix(doc.grades, params.parameters, universe, path))


def parse_csv(text: str, path: Optional[Path] = None) -> FuzzySoftSet:
    reader = csv.reader(io.StringIO(text))
    rows = [(reader.line_num, row) for row in reader if any(cell.strip() for cell in row)]
    if not rows:
        raise DocumentError("empty CSV table", path=path, line=1)
    _, header = rows[0]
    objects = [cell.strip() for cell in header[1:]]
    if not objects:
        raise DocumentError("header row lists no objects", path=path, line=rows[0][0])
    parameters: List[str] = []
    grades: List[List[str]] = []
    for line, row in rows[1:]:
        if len(row) != len(objects) + 1:
            raise DocumentError(
                f"expected {len(objects) + 1} fields, got {len(row)}", path=path, line=line, column=1
            )
        parameters.append(row[0].strip())
        grades.append([cell.strip() for cell in row[1:]])
    return parse_fss({"universe": objects, "parameters": parameters, "grades": grades}, path)


def dump_fss(f: FuzzySoftSet) -> str:
    payload = _header_payload(f.params, f.universe)
    payload["grades"] = _matrix_payload(f.grades)
    return _dump(payload)


def load_fss(path: Path) -> FuzzySoftSet:
    path = Path(path)
    if path.suffix.lower() == ".csv":
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise DocumentError(f"cannot read document ({exc.strerror})", path=path) from None
        result = parse_csv(text, path)
    else:
        data = read_json(path)
        if document_kind(data) != TABLE:
            raise DocumentError(f"expected a grade table, found a {document_kind(data)} document", path=path)
        result = parse_fss(data, path)
    LOGGER.info("Loaded %dx%d grade table from %s", len(result.params), len(result.universe), path)
    return result


def save_fss(f: FuzzySoftSet, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dump_fss(f), encoding="utf-8")
    LOGGER.info("Stored grade table at %s", path)
    return path


# Collections --------------------------------------------------------------


@dataclass(frozen=True)
class Collection:
    params: ParameterSet
    universe: Universe
    sets: Dict[str, FuzzySoftSet] = field(default_factory=dict)
    points: Dict[str, FuzzySoftPoint] = field(default_factory=dict)


def parse_collection(data: Dict[str, Any], path: Optional[Path] = None) -> Collection:
    doc = _validated(CollectionDocument, data, path)
    params, universe = _header(doc, path)
    sets: Dict[str, FuzzySoftSet] = {}
    for name, entry in doc.sets.items():
        labels = params.parameters if entry.parameters is None else tuple(entry.parameters)
        unknown = [label for label in labels if label not in params]
        if unknown:
            raise DocumentError(f"sets.{name}: unknown parameters {unknown}", path=path)
        try:
            _check_matrix(entry.grades, len(labels), len(universe))
        except ValueError as exc:
            raise DocumentError(f"sets.{name}: {exc}", path=path) from None
        sub = params if entry.parameters is None else ParameterSet(labels)
        sets[name] = FuzzySoftSet(sub, universe, _grade_matrix(entry.grades, labels, universe, path))
    points: Dict[str, FuzzySoftPoint] = {}
    for name, point in (doc.points or {}).items():
        if point.support not in universe:
            raise DocumentError(f"points.{name}: unknown object {point.support!r}", path=path)
        if len(point.grades) != len(params):
            raise DocumentError(f"points.{name}: {len(point.grades)} grades for {len(params)} parameters", path=path)
        lambdas = [_parse_grade(g, (e, point.support), path) for e, g in zip(params, point.grades)]
        try:
            points[name] = FuzzySoftPoint(params, universe, point.support, np.array(lambdas))
        except FuzzySoftError as exc:
            raise DocumentError(f"points.{name}: {exc}", path=path) from None
    return Collection(params, universe, sets, points)


def dump_collection(collection: Collection) -> str:
    payload = _header_payload(collection.params, collection.universe)
    sets: Dict[str, Any] = {}
    for name, f in collection.sets.items():
        entry: Dict[str, Any] = {}
        if f.params.parameters != collection.params.parameters:
            entry["parameters"] = list(f.params.parameters)
        entry["grades"] = _matrix_payload(f.grades)
        sets[name] = entry
    payload["sets"] = sets
    if collection.points:
        payload["points"] = {
            name: {"support": pt.support, "grades": [format_grade(g) for g in pt.lambdas]}
            for name, pt in collection.points.items()
        }
    return _dump(payload)


def load_collection(path: Path) -> Collection:
    path = Path(path)
    data = read_json(path)
    if document_kind(data) == TABLE:
        # a single grade table is a one-set collection named after the file
        f = parse_fss(data, path)
        return Collection(f.params, f.universe, {path.stem: f})
    if document_kind(data) != COLLECTION:
        raise DocumentError("expected a collection document", path=path)
    collection = parse_collection(data, path)
    LOGGER.info("Loaded %d sets and %d points from %s", len(collection.sets), len(collection.points), path)
    return collection


def save_collection(collection: Collection, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dump_collection(collection), encoding="utf-8")
    LOGGER.info("Stored collection at %s", path)
    return path


# Crisp topologies ---------------------------------------------------------


def load_crisp_topology(path: Path) -> Tuple[Universe, List[FrozenSet[str]]]:
    path = Path(path)
    doc = _validated(CrispTopologyDocument, read_json(path), path)
    universe = Universe(tuple(doc.universe))
    opens = []
    for index, members in enumerate(doc.opens):
        unknown = sorted(set(members) - set(universe.objects))
        if unknown:
            raise DocumentError(f"opens.{index}: unknown objects {unknown}", path=path)
        opens.append(frozenset(members))
    return universe, opens


# Input bookkeeping --------------------------------------------------------


def inputs_digest(paths: Sequence[Path]) -> str:
    """sha1 over the bytes of every input, in argument order."""

    digest = hashlib.sha1()
    for path in paths:
        digest.update(Path(path).read_bytes())
    return digest.hexdigest()


class DataDirectoryIngestor:
    """Resolve document arguments against the working directory, then ``data/``."""

    def __init__(self, base_path: Path) -> None:
        self.base_path = base_path
        self.data_dir = base_path / "data"

    def resolve(self, name: Union[str, Path]) -> Path:
        candidate = Path(name)
        if candidate.exists():
            return candidate
        bundled = self.data_dir / candidate
        if bundled.exists():
            LOGGER.debug("Resolved %s to bundled document %s", name, bundled)
            return bundled
        raise DocumentError("no such document", path=candidate)

    def collect_documents(self) -> List[Dict[str, str]]:
        """Every bundled document with its kind and sha1."""

        documents = []
        if not self.data_dir.exists():
            return documents
        for path in sorted(self.data_dir.iterdir()):
            if path.suffix.lower() == ".csv":
                kind = TABLE
            elif path.suffix.lower() == ".json":
                kind = document_kind(read_json(path))
            else:
                continue
            documents.append(
                {"name": path.name, "kind": kind, "sha1": hashlib.sha1(path.read_bytes()).hexdigest()}
            )
        return documents


__all__ = [
    "COLLECTION",
    "Collection",
    "CollectionDocument",
    "CrispTopologyDocument",
    "DataDirectoryIngestor",
    "DocumentError",
    "GradeTableDocument",
    "TABLE",
    "TOPOLOGY",
    "document_kind",
    "dump_collection",
    "dump_fss",
    "format_grade",
    "inputs_digest",
    "load_collection",
    "load_crisp_topology",
    "load_fss",
    "parse_collection",
    "parse_csv",
    "parse_fss",
    "read_json",
    "save_collection",
    "save_fss",
]
