"""
A small expression language for scalar fields in scenario files.

Grammar, loosest binding first:

    sum     = product (("+" | "-") product)*
    product = unary (("*" | "/") unary)*
    unary   = "-" unary | power
    power   = atom ("^" unary)?
    atom    = number | "pi" | "x<k>" | func "(" sum ("," sum)* ")" | "(" sum ")"

so ``^`` binds tighter than unary minus and is right-associative.
"""

import logging
import math
import re
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Set, Tuple, Union

import numpy as np
import sympy as sp
from pydantic_core import core_schema

from forms.fields import ScalarField, constant, symbol

from .config import DIVISION_FLOOR
from .errors import ExpressionDomainError, ExpressionSyntaxError

logger = logging.getLogger(__name__)


# ----------------------------------------------------------------------
# syntax tree
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class Number:
    value: float

    def __post_init__(self):
        if not math.isfinite(self.value) or self.value < 0:
            raise ValueError(f"Literals are finite and non-negative, got {self.value}")


@dataclass(frozen=True)
class Symbol:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Call:
    func: str
    args: Tuple["Node", ...]


Node = Union[Number, Symbol, Neg, BinOp, Call]

FUNCTIONS: Dict[str, int] = {"sin": 1, "cos": 1, "exp": 1, "log": 1, "sqrt": 1, "atan2": 2}
CONSTANTS: Dict[str, float] = {"pi": math.pi}

_COORDINATE = re.compile(r"x(0|[1-9][0-9]*)")
_TOKEN = re.compile(
    r"(?P<space>\s+)"
    r"|(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^(),])"
)


# ----------------------------------------------------------------------
# tokenizer
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    offset: int


def _byte_offset(text: str, index: int) -> int:
    return len(text[:index].encode("utf-8"))


def tokenize(text: str) -> List[Token]:
    tokens = []
    i = 0
    while i < len(text):
        m = _TOKEN.match(text, i)
        if m is None:
            raise ExpressionSyntaxError(f"Unexpected character {text[i]!r}", _byte_offset(text, i), text)
        if m.lastgroup != "space":
            tokens.append(Token(m.lastgroup, m.group(), _byte_offset(text, i)))
        i = m.end()
    tokens.append(Token("end", "", _byte_offset(text, len(text))))
    return tokens


# ----------------------------------------------------------------------
# parser
# ----------------------------------------------------------------------
class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def take(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def error(self, message: str, tok: Token) -> ExpressionSyntaxError:
        return ExpressionSyntaxError(message, tok.offset, self.text)

    def expect(self, text: str) -> Token:
        tok = self.peek()
        if tok.text != text or tok.kind != "op":
            raise self.error(f"Expected {text!r}, found {tok.text or 'end of input'!r}", tok)
        return self.take()

    def parse(self) -> Node:
        node = self.sum()
        tok = self.peek()
        if tok.kind != "end":
            raise self.error(f"Unexpected {tok.text!r}", tok)
        return node

    def sum(self) -> Node:
        node = self.product()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.take().text
            node = BinOp(op, node, self.product())
        return node

    def product(self) -> Node:
        node = self.unary()
        while self.peek().kind == "op" and self.peek().text in "*/":
            op = self.take().text
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Node:
        if self.peek().kind == "op" and self.peek().text == "-":
            self.take()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        if self.peek().kind == "op" and self.peek().text == "^":
            self.take()
            return BinOp("^", base, self.unary())
        return base

    def atom(self) -> Node:
        tok = self.peek()
        if tok.kind == "number":
            self.take()
            value = float(tok.text)
            if not math.isfinite(value):
                raise self.error(f"Literal {tok.text} overflows", tok)
            return Number(value)
        if tok.kind == "name":
            self.take()
            if tok.text in FUNCTIONS:
                return self.call(tok)
            if tok.text in CONSTANTS or _COORDINATE.fullmatch(tok.text):
                return Symbol(tok.text)
            raise self.error(f"Unknown identifier {tok.text!r}", tok)
        if tok.kind == "op" and tok.text == "(":
            self.take()
            node = self.sum()
            self.expect(")")
            return node
        raise self.error(f"Expected an operand, found {tok.text or 'end of input'!r}", tok)

    def call(self, name: Token) -> Node:
        self.expect("(")
        args = [self.sum()]
        while self.peek().kind == "op" and self.peek().text == ",":
            self.take()
            args.append(self.sum())
        close = self.expect(")")
        if len(args) != FUNCTIONS[name.text]:
            raise self.error(f"{name.text} takes {FUNCTIONS[name.text]} argument(s), got {len(args)}", close)
        return Call(name.text, tuple(args))


def parse_expression(text: str) -> "Expression":
    root = _Parser(text).parse()
    return Expression(text, root)


# ----------------------------------------------------------------------
# printing
# ----------------------------------------------------------------------
_PRECEDENCE = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 4}
_NEG = 3
_ATOM = 5


def _precedence(node: Node) -> int:
    if isinstance(node, BinOp):
        return _PRECEDENCE[node.op]
    if isinstance(node, Neg):
        return _NEG
    return _ATOM


def _format_number(value: float) -> str:
    if value.is_integer() and value < 1e15:
        return str(int(value))
    return repr(value)


def to_text(node: Node) -> str:
    """Canonical text: minimal parentheses, spaces around + and - only."""
    if isinstance(node, Number):
        return _format_number(node.value)
    if isinstance(node, Symbol):
        return node.name
    if isinstance(node, Call):
        return f"{node.func}({', '.join(to_text(a) for a in node.args)})"
    if isinstance(node, Neg):
        inner = to_text(node.operand)
        return f"-({inner})" if _precedence(node.operand) < _NEG else f"-{inner}"

    p = _PRECEDENCE[node.op]
    if node.op == "^":
        left_paren = _precedence(node.left) <= p
        right_paren = _precedence(node.right) < _NEG
    else:
        left_paren = _precedence(node.left) < p
        right_paren = _precedence(node.right) <= p
    left = f"({to_text(node.left)})" if left_paren else to_text(node.left)
    right = f"({to_text(node.right)})" if right_paren else to_text(node.right)
    sep = f" {node.op} " if node.op in "+-" else node.op
    return f"{left}{sep}{right}"


_OP_NAMES = {"+": "add", "-": "sub", "*": "mul", "/": "div", "^": "pow"}


def to_sexpr(node: Node) -> str:
    """Prefix form such as ``add(mul(x0,x1),pow(x2,2))``."""
    if isinstance(node, Number):
        return _format_number(node.value)
    if isinstance(node, Symbol):
        return node.name
    if isinstance(node, Neg):
        return f"neg({to_sexpr(node.operand)})"
    if isinstance(node, Call):
        return f"{node.func}({','.join(to_sexpr(a) for a in node.args)})"
    return f"{_OP_NAMES[node.op]}({to_sexpr(node.left)},{to_sexpr(node.right)})"


# ----------------------------------------------------------------------
# evaluation
# ----------------------------------------------------------------------
def _checked(values: np.ndarray, what: str) -> np.ndarray:
    if not np.all(np.isfinite(values)):
        raise ExpressionDomainError(f"{what} is not finite on the sample set")
    return values


def _log(x: np.ndarray) -> np.ndarray:
    if np.any(x <= 0):
        raise ExpressionDomainError(f"log of a non-positive value (min {float(np.min(x)):.3e})")
    return np.log(x)


def _sqrt(x: np.ndarray) -> np.ndarray:
    if np.any(x < 0):
        raise ExpressionDomainError(f"sqrt of a negative value (min {float(np.min(x)):.3e})")
    return np.sqrt(x)


_UNARY: Dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "sin": np.sin,
    "cos": np.cos,
    "exp": np.exp,
    "log": _log,
    "sqrt": _sqrt,
}


def _divide(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if np.any(np.abs(b) < DIVISION_FLOOR):
        raise ExpressionDomainError("division by zero")
    return a / b


def _power(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    fractional = b != np.round(b)
    if np.any((a < 0) & fractional):
        raise ExpressionDomainError("negative base raised to a fractional power")
    if np.any((a == 0) & (b < 0)):
        raise ExpressionDomainError("zero raised to a negative power")
    return np.power(a, b)


def evaluate(node: Node, points: np.ndarray) -> np.ndarray:
    points = np.atleast_2d(np.asarray(points, dtype=float))
    n = points.shape[0]
    if isinstance(node, Number):
        return np.full(n, node.value)
    if isinstance(node, Symbol):
        if node.name in CONSTANTS:
            return np.full(n, CONSTANTS[node.name])
        k = int(node.name[1:])
        if k >= points.shape[1]:
            raise ExpressionDomainError(f"{node.name} does not exist on a {points.shape[1]}-dimensional ambient space")
        return points[:, k].copy()
    if isinstance(node, Neg):
        return -evaluate(node.operand, points)
    with np.errstate(all="ignore"):
        if isinstance(node, Call):
            args = [evaluate(a, points) for a in node.args]
            if node.func == "atan2":
                return np.arctan2(args[0], args[1])
            return _checked(_UNARY[node.func](args[0]), node.func)
        a, b = evaluate(node.left, points), evaluate(node.right, points)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return _checked(a * b, "product")
        if node.op == "/":
            return _checked(_divide(a, b), "quotient")
        return _checked(_power(a, b), "power")


def coordinates(node: Node) -> Set[int]:
    if isinstance(node, Symbol):
        return {int(node.name[1:])} if node.name not in CONSTANTS else set()
    if isinstance(node, Neg):
        return coordinates(node.operand)
    if isinstance(node, BinOp):
        return coordinates(node.left) | coordinates(node.right)
    if isinstance(node, Call):
        return set().union(*(coordinates(a) for a in node.args))
    return set()


_SYMPY_FUNCTIONS: Dict[str, Callable[..., sp.Expr]] = {
    "sin": sp.sin,
    "cos": sp.cos,
    "exp": sp.exp,
    "log": sp.log,
    "sqrt": sp.sqrt,
    "atan2": sp.atan2,
}


def to_sympy(node: Node) -> sp.Expr:
    """The tree as a sympy expression in the ambient coordinate symbols."""
    if isinstance(node, Number):
        return constant(node.value).expr
    if isinstance(node, Symbol):
        return sp.pi if node.name == "pi" else symbol(int(node.name[1:]))
    if isinstance(node, Neg):
        return -to_sympy(node.operand)
    if isinstance(node, Call):
        return _SYMPY_FUNCTIONS[node.func](*(to_sympy(a) for a in node.args))
    a, b = to_sympy(node.left), to_sympy(node.right)
    if node.op == "+":
        return a + b
    if node.op == "-":
        return a - b
    if node.op == "*":
        return a * b
    if node.op == "/":
        return a / b
    return a ** b


@dataclass(frozen=True)
class Expression:
    text: str
    root: Node

    @property
    def canonical(self) -> str:
        return to_text(self.root)

    @property
    def coordinates(self) -> Set[int]:
        return coordinates(self.root)

    def evaluate(self, points) -> np.ndarray:
        return evaluate(self.root, points)

    def to_field(self) -> ScalarField:
        """The expression as a scalar field with symbolic partials, printed as its canonical text."""
        return ScalarField(to_sympy(self.root), name=self.canonical)

    def __str__(self):
        return self.canonical

    @classmethod
    def __get_pydantic_core_schema__(cls, source, handler):
        return core_schema.no_info_plain_validator_function(
            as_expression, serialization=core_schema.plain_serializer_function_ser_schema(str)
        )


def as_expression(value: Any) -> Expression:
    """Parse strings and plain numbers; pass expressions through."""
    if isinstance(value, Expression):
        return value
    if isinstance(value, bool):
        raise ValueError("expected an expression, got a boolean")
    if isinstance(value, (int, float)):
        value = repr(value) if value >= 0 else f"-{-value!r}"
    if not isinstance(value, str):
        raise ValueError(f"expected an expression string, got {type(value).__name__}")
    return parse_expression(value)
