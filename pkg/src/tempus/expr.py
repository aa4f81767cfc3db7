"""A small expression language for real functions of ``t``.

Grammar, from loosest to tightest binding::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' unary)?
    atom   := number | 't' | 'pi' | ident '(' expr ')' | '(' expr ')'

so ``^`` is right-associative and binds tighter than unary minus
(``-2^2 == -4``, ``2^-1 == 0.5``). There is no implicit multiplication.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Callable, Union

from tempus.errors import TempusError

FUNCTIONS: dict[str, Callable[[float], float]] = {
    "sin": math.sin,
    "cos": math.cos,
    "exp": math.exp,
    "log": math.log,
    "sqrt": math.sqrt,
    "abs": abs,
}


# {{{ errors


class ExprSyntaxError(TempusError, ValueError):
    def __init__(self, text: str, offset: int, expected: tuple[str, ...]) -> None:
        self.text = text
        self.offset = offset
        self.expected = expected
        found = repr(text[offset]) if offset < len(text) else "end of input"
        super().__init__(
            f"at offset {offset}: expected {' or '.join(expected)}, found {found}"
        )


class UnknownFunction(TempusError, ValueError):
    def __init__(self, name: str, offset: int) -> None:
        self.name = name
        self.offset = offset
        super().__init__(
            f"at offset {offset}: unknown function {name!r} "
            f"(known: {', '.join(sorted(FUNCTIONS))})"
        )


class EvalError(TempusError, ArithmeticError):
    def __init__(self, kind: str, offset: int, detail: str = "") -> None:
        self.kind = kind
        self.offset = offset
        msg = f"{kind} in sub-expression at offset {offset}"
        super().__init__(f"{msg}: {detail}" if detail else msg)

# }}}


# {{{ tree


@dataclass(frozen=True)
class Num:
    value: float
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Var:
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Pi:
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Neg:
    operand: Expr
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class BinOp:
    op: str
    left: Expr
    right: Expr
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Call:
    name: str
    arg: Expr
    pos: int = field(default=0, compare=False)


Expr = Union[Num, Var, Pi, Neg, BinOp, Call]


def Add(left: Expr, right: Expr) -> BinOp:
    return BinOp("+", left, right)


def Sub(left: Expr, right: Expr) -> BinOp:
    return BinOp("-", left, right)


def Mul(left: Expr, right: Expr) -> BinOp:
    return BinOp("*", left, right)


def Div(left: Expr, right: Expr) -> BinOp:
    return BinOp("/", left, right)


def Pow(left: Expr, right: Expr) -> BinOp:
    return BinOp("^", left, right)

# }}}


# {{{ parser

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_]\w*)|(?P<op>[-+*/^()]))"
)


@dataclass
class _Token:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise ExprSyntaxError(text, pos, ("number", "identifier", "operator"))
        kind = m.lastgroup or "op"
        tokens.append(_Token(kind, m.group(kind), m.start(kind)))
        pos = m.end()

    tokens.append(_Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str) -> None:
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, *expected: str) -> ExprSyntaxError:
        return ExprSyntaxError(self.text, self.tok.pos, expected)

    def expect(self, op: str) -> _Token:
        if self.tok.kind != "op" or self.tok.text != op:
            raise self.fail(repr(op))
        return self.advance()

    def at_op(self, *ops: str) -> bool:
        return self.tok.kind == "op" and self.tok.text in ops

    def parse(self) -> Expr:
        node = self.expr()
        if self.tok.kind != "end":
            raise self.fail("operator", "end of input")
        return node

    def expr(self) -> Expr:
        node = self.term()
        while self.at_op("+", "-"):
            op = self.advance()
            node = BinOp(op.text, node, self.term(), op.pos)
        return node

    def term(self) -> Expr:
        node = self.unary()
        while self.at_op("*", "/"):
            op = self.advance()
            node = BinOp(op.text, node, self.unary(), op.pos)
        return node

    def unary(self) -> Expr:
        if self.at_op("-"):
            op = self.advance()
            return Neg(self.unary(), op.pos)
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.at_op("^"):
            op = self.advance()
            return BinOp("^", base, self.unary(), op.pos)
        return base

    def atom(self) -> Expr:
        tok = self.tok
        if tok.kind == "num":
            self.advance()
            return Num(float(tok.text), tok.pos)
        if tok.kind == "ident":
            self.advance()
            if tok.text == "t":
                return Var(tok.pos)
            if tok.text == "pi":
                return Pi(tok.pos)
            if not self.at_op("("):
                raise self.fail("'('")
            if tok.text not in FUNCTIONS:
                raise UnknownFunction(tok.text, tok.pos)
            self.advance()
            arg = self.expr()
            self.expect(")")
            return Call(tok.text, arg, tok.pos)
        if self.at_op("("):
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        raise self.fail("number", "'t'", "'pi'", "function call", "'('")


def parse(text: str) -> Expr:
    """Parse *text* into an expression tree.

    :raises ExprSyntaxError: with the offset of the first offending token.
    :raises UnknownFunction: for calls to functions outside :data:`FUNCTIONS`.
    """
    if not text.strip():
        raise ExprSyntaxError(text, len(text), ("expression",))
    return _Parser(text).parse()

# }}}


# {{{ evaluation


def evaluate(e: Expr, t: float) -> float:
    """Evaluate *e* at ``t`` in IEEE double precision.

    Domain violations raise :class:`EvalError` instead of producing NaN.
    """
    match e:
        case Num(value):
            return value
        case Var():
            return float(t)
        case Pi():
            return math.pi
        case Neg(operand):
            return -evaluate(operand, t)
        case BinOp(op, left, right):
            return _binop(op, evaluate(left, t), evaluate(right, t), e.pos)
        case Call(name, arg):
            return _call(name, evaluate(arg, t), e.pos)
    raise TypeError(f"not an expression node: {e!r}")


def _binop(op: str, x: float, y: float, pos: int) -> float:
    if op == "+":
        result = x + y
    elif op == "-":
        result = x - y
    elif op == "*":
        result = x * y
    elif op == "/":
        if y == 0.0:
            raise EvalError("division by zero", pos)
        result = x / y
    else:
        if x == 0.0 and y < 0.0:
            raise EvalError("zero to a negative power", pos)
        if x < 0.0 and not float(y).is_integer():
            raise EvalError("negative base with non-integer exponent", pos)
        try:
            result = math.pow(x, y)
        except OverflowError:
            raise EvalError("overflow", pos) from None

    if not math.isfinite(result):
        raise EvalError("non-finite result", pos, f"{x!r} {op} {y!r}")
    return result


def _call(name: str, x: float, pos: int) -> float:
    if name == "log" and x <= 0.0:
        raise EvalError("log of non-positive argument", pos, repr(x))
    if name == "sqrt" and x < 0.0:
        raise EvalError("sqrt of negative argument", pos, repr(x))
    try:
        result = float(FUNCTIONS[name](x))
    except (OverflowError, ValueError) as exc:
        raise EvalError(f"{name} domain error", pos, str(exc)) from None

    if not math.isfinite(result):
        raise EvalError("non-finite result", pos, f"{name}({x!r})")
    return result


def compile_expr(text: str) -> Callable[[float], float]:
    """Parse *text* once and return ``t -> evaluate(tree, t)``."""
    tree = parse(text)

    def fn(t: float) -> float:
        return evaluate(tree, t)

    return fn

# }}}


# {{{ printing

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def to_text(e: Expr) -> str:
    """Render *e* with the parentheses needed to reparse to the same tree."""
    match e:
        case Num(value):
            return repr(value)
        case Var():
            return "t"
        case Pi():
            return "pi"
        case Neg(operand):
            inner = to_text(operand)
            if isinstance(operand, BinOp) and operand.op != "^":
                inner = f"({inner})"
            return f"-{inner}"
        case Call(name, arg):
            return f"{name}({to_text(arg)})"
        case BinOp("^", left, right):
            lhs = to_text(left)
            if isinstance(left, (BinOp, Neg)):
                lhs = f"({lhs})"
            rhs = to_text(right)
            if isinstance(right, BinOp) and right.op != "^":
                rhs = f"({rhs})"
            return f"{lhs}^{rhs}"
        case BinOp(op, left, right):
            prec = _PREC[op]
            lhs = to_text(left)
            if isinstance(left, BinOp) and left.op != "^" and _PREC[left.op] < prec:
                lhs = f"({lhs})"
            rhs = to_text(right)
            if isinstance(right, BinOp) and right.op != "^" and _PREC[right.op] <= prec:
                rhs = f"({rhs})"
            return f"{lhs} {op} {rhs}"
    raise TypeError(f"not an expression node: {e!r}")

# }}}
