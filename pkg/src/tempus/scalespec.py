"""Text and JSON descriptions of time scales.

Two equivalent forms are accepted:

* generator calls such as ``integers(0, 5)``, ``real_interval(0, 2)``,
  ``q_scale(0.5, 0, 3)`` and ``union(real_interval(0, 1), integers(2, 4))``;
* JSON documents ``{"pieces": [[0, 1], [2, 2]]}`` or
  ``{"generator": {"kind": "q_scale", "params": {"q": 0.5, "kmin": 0, "kmax": 3}}}``.
  The ``"generator"`` value may also be a generator call string.
"""

from __future__ import annotations

import ast
import json
import operator
from typing import Any

from tempus.errors import TempusError
from tempus.timescale import (
    GeneratorSpec,
    Integers,
    QScale,
    RealInterval,
    TimeScale,
    UnionOf,
    from_pieces,
    generate,
)

PARAM_NAMES = {
    "integers": ("a", "b"),
    "real_interval": ("a", "b"),
    "q_scale": ("q", "kmin", "kmax"),
}


class ScaleSpecError(TempusError, ValueError):
    def __init__(self, msg: str, line: int | None = None, col: int | None = None):
        self.line = line
        self.col = col
        where = f"line {line}, column {col}: " if line is not None else ""
        super().__init__(f"{where}{msg}")


def _build(kind: str, args: list[Any]) -> GeneratorSpec:
    if kind == "union":
        if not args:
            raise ScaleSpecError("union() needs at least one part")
        return UnionOf(*args)

    names = PARAM_NAMES.get(kind)
    if names is None:
        raise ScaleSpecError(
            f"unknown generator {kind!r}; use one of "
            f"{', '.join([*PARAM_NAMES, 'union'])}"
        )
    if len(args) != len(names):
        raise ScaleSpecError(f"{kind}() takes {len(names)} arguments ({', '.join(names)})")
    if not all(isinstance(x, (int, float)) for x in args):
        raise ScaleSpecError(f"{kind}() arguments must be numbers")

    if kind == "integers":
        return Integers(*args)
    if kind == "real_interval":
        return RealInterval(*args)
    return QScale(*args)


# {{{ generator call syntax

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
}


def _eval_node(node: ast.AST) -> Any:
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
        return node.value
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        value = _eval_node(node.operand)
        return -value if isinstance(node.op, ast.USub) else value
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        return _BINOPS[type(node.op)](_eval_node(node.left), _eval_node(node.right))
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and not node.keywords:
        return _build(node.func.id, [_eval_node(arg) for arg in node.args])

    raise ScaleSpecError(
        f"unsupported syntax {ast.unparse(node)!r}",
        getattr(node, "lineno", None),
        getattr(node, "col_offset", -1) + 1,
    )


def parse_generator(text: str) -> GeneratorSpec:
    """Parse a generator call such as ``"union(real_interval(0,1), integers(2,4))"``."""
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as exc:
        raise ScaleSpecError(f"invalid generator: {exc.msg}", exc.lineno, exc.offset) from None

    spec = _eval_node(tree.body)
    if isinstance(spec, (int, float)):
        raise ScaleSpecError("a generator call is required, got a number")
    return spec

# }}}


# {{{ JSON


def generator_from_json(doc: Any) -> GeneratorSpec:
    if isinstance(doc, str):
        return parse_generator(doc)
    if not isinstance(doc, dict) or "kind" not in doc:
        raise ScaleSpecError('a generator must be a string or an object with "kind"')

    kind = doc["kind"]
    params = doc.get("params", {})
    if kind == "union":
        parts = params.get("parts") if isinstance(params, dict) else params
        if not isinstance(parts, list):
            raise ScaleSpecError('union needs "params": {"parts": [...]}')
        return _build("union", [generator_from_json(p) for p in parts])

    if isinstance(params, dict):
        names = PARAM_NAMES.get(kind, ())
        missing = [n for n in names if n not in params]
        if missing:
            raise ScaleSpecError(f"{kind} is missing params {', '.join(missing)}")
        args = [params[n] for n in names]
    elif isinstance(params, list):
        args = params
    else:
        raise ScaleSpecError('"params" must be an object or a list')

    return _build(kind, args)


def scale_from_json(doc: Any) -> TimeScale:
    if not isinstance(doc, dict):
        raise ScaleSpecError("a scale document must be a JSON object")
    if ("pieces" in doc) == ("generator" in doc):
        raise ScaleSpecError('a scale document needs exactly one of "pieces" or "generator"')

    if "generator" in doc:
        return generate(generator_from_json(doc["generator"]))

    pieces = doc["pieces"]
    if not isinstance(pieces, list) or not all(
        isinstance(p, list) and len(p) == 2 for p in pieces
    ):
        raise ScaleSpecError('"pieces" must be a list of [left, right] pairs')
    return from_pieces(pieces)


def loads_scale(text: str) -> TimeScale:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScaleSpecError(exc.msg, exc.lineno, exc.colno) from None
    return scale_from_json(doc)


def parse_pieces(text: str) -> TimeScale:
    """Parse an inline ``[[l, r], ...]`` list."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScaleSpecError(exc.msg, exc.lineno, exc.colno) from None
    return scale_from_json({"pieces": doc})

# }}}
