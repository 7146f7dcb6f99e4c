"""Prefix expressions over named F.S sets, as accepted by ``fskit ops``.

    expr := NAME | "(" expr ")" | "complement" expr
          | ("union" | "intersect" | "subset?" | "equal?") expr expr

``phi`` and ``absolute`` name the null and absolute sets over the default
parameters and universe.  ``subset?`` and ``equal?`` yield booleans and may
only appear at the top.
"""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from typing import Callable, Dict, List, Mapping, Tuple, Union

from .core_fuzzy import FuzzySoftError, Universe
from .soft_algebra import (
    FuzzySoftSet,
    ParameterSet,
    fs_absolute,
    fs_complement,
    fs_equal,
    fs_intersection,
    fs_null,
    fs_subset,
    fs_union,
)

LOGGER = logging.getLogger(__name__)

TOKEN = re.compile(r"\s*(\(|\)|[^\s()]+)")

SET_OPS: Dict[str, Tuple[int, Callable[..., FuzzySoftSet]]] = {
    "complement": (1, fs_complement),
    "union": (2, fs_union),
    "intersect": (2, fs_intersection),
}
PREDICATES: Dict[str, Callable[[FuzzySoftSet, FuzzySoftSet], bool]] = {
    "subset?": fs_subset,
    "equal?": fs_equal,
}
NULL_NAMES = ("phi", "null")
ABSOLUTE_NAMES = ("absolute",)

Value = Union[FuzzySoftSet, bool]


class UnknownIdentifier(FuzzySoftError):
    """Raised when an expression names a set that was not loaded."""


class ExpressionSyntaxError(FuzzySoftError):
    """Raised for malformed ``ops`` expressions."""


def tokenize(text: str) -> List[str]:
    tokens = TOKEN.findall(text)
    if not tokens:
        raise ExpressionSyntaxError("Empty expression")
    return tokens


@dataclass
class _Parser:
    tokens: List[str]
    names: Mapping[str, FuzzySoftSet]
    params: ParameterSet
    universe: Universe
    position: int = 0

    def take(self) -> str:
        if self.position >= len(self.tokens):
            raise ExpressionSyntaxError("Expression ends early")
        token = self.tokens[self.position]
        self.position += 1
        return token

    def operand(self) -> FuzzySoftSet:
        value = self.expr()
        if isinstance(value, bool):
            raise ExpressionSyntaxError("Predicates cannot be used as operands")
        return value

    def expr(self) -> Value:
        token = self.take()
        if token == "(":
            value = self.expr()
            if self.take() != ")":
                raise ExpressionSyntaxError("Expected ')'")
            return value
        if token == ")":
            raise ExpressionSyntaxError("Unexpected ')'")
        if token in SET_OPS:
            arity, op = SET_OPS[token]
            return op(*(self.operand() for _ in range(arity)))
        if token in PREDICATES:
            return PREDICATES[token](self.operand(), self.operand())
        return self.lookup(token)

    def lookup(self, name: str) -> FuzzySoftSet:
        if name in self.names:
            return self.names[name]
        if name in NULL_NAMES:
            return fs_null(self.params, self.universe)
        if name in ABSOLUTE_NAMES:
            return fs_absolute(self.params, self.universe)
        known = ", ".join(sorted(self.names)) or "none"
        raise UnknownIdentifier(f"Unknown identifier {name!r} (loaded: {known})")


def evaluate(text: str, names: Mapping[str, FuzzySoftSet], params: ParameterSet, universe: Universe) -> Value:
    parser = _Parser(tokenize(text), names, params, universe)
    value = parser.expr()
    if parser.position != len(parser.tokens):
        raise ExpressionSyntaxError(f"Unexpected trailing input {' '.join(parser.tokens[parser.position:])!r}")
    LOGGER.debug("Evaluated %r to %r", text, value)
    return value


__all__ = [
    "ExpressionSyntaxError",
    "PREDICATES",
    "SET_OPS",
    "UnknownIdentifier",
    "evaluate",
    "tokenize",
]
