"""Tokenizer and Pratt parser for the Fracstab expression language.

Grammar (lowest to highest binding): ``+ -`` < ``* /`` < unary minus <
``^`` (right-associative) < function call. Offsets in errors are byte
offsets into the UTF-8 source.
"""

import math
import re
from collections.abc import Iterator, Mapping
from dataclasses import dataclass

from fracstab.expr.nodes import (
    FUNCTIONS,
    BinaryOp,
    Call,
    Expr,
    Negate,
    Number,
    Variable,
)
from fracstab.models.exceptions import (
    ArityError,
    ExpressionSyntaxError,
    NonFiniteResultError,
    UnknownFunctionError,
)

TOKEN_PATTERN = re.compile(
    r"""
    (?P<space>\s+)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/^(),])
    """,
    re.VERBOSE,
)

# Left binding powers of infix operators
INFIX_POWER: dict[str, int] = {"+": 10, "-": 10, "*": 20, "/": 20, "^": 40}
PREFIX_POWER = 30

OPERAND_START = ["number", "identifier", "'('", "'-'"]


@dataclass(frozen=True)
class Token:
    """Lexical token with its byte offset."""

    kind: str
    text: str
    offset: int

    def describe(self) -> str:
        if self.kind == "end":
            return "end of input"
        return f"'{self.text}'"


def _byte_offset(source: str, index: int) -> int:
    return len(source[:index].encode("utf-8"))


def tokenize(source: str) -> Iterator[Token]:
    """Split source text into tokens, ending with an ``end`` token."""
    index = 0
    while index < len(source):
        match = TOKEN_PATTERN.match(source, index)
        if match is None:
            raise ExpressionSyntaxError(
                _byte_offset(source, index),
                OPERAND_START + ["operator"],
                f"'{source[index]}'",
            )
        kind = match.lastgroup or ""
        if kind != "space":
            yield Token(kind, match.group(), _byte_offset(source, index))
        index = match.end()
    yield Token("end", "", _byte_offset(source, len(source)))


class Parser:
    """Pratt parser over a token stream."""

    def __init__(self, source: str) -> None:
        self._tokens = list(tokenize(source))
        self._position = 0

    @property
    def current(self) -> Token:
        return self._tokens[self._position]

    def _advance(self) -> Token:
        token = self.current
        self._position += 1
        return token

    def _expect(self, text: str) -> Token:
        if self.current.text != text or self.current.kind == "end":
            raise ExpressionSyntaxError(self.current.offset, [f"'{text}'"], self.current.describe())
        return self._advance()

    def parse(self) -> Expr:
        expr = self.expression(0)
        if self.current.kind != "end":
            raise ExpressionSyntaxError(
                self.current.offset, ["operator", "end of input"], self.current.describe()
            )
        return expr

    def expression(self, right_power: int) -> Expr:
        left = self._prefix()
        while self.current.kind == "op" and INFIX_POWER.get(self.current.text, 0) > right_power:
            op = self._advance().text
            power = INFIX_POWER[op]
            # ^ is right-associative and its exponent may carry a unary minus
            right = self.expression(power - 1 if op == "^" else power)
            left = BinaryOp(op, left, right)
        return left

    def _prefix(self) -> Expr:
        token = self._advance()
        if token.kind == "number":
            value = float(token.text)
            if not math.isfinite(value):
                raise NonFiniteResultError(f"literal {token.text} at offset {token.offset}")
            return Number(value)
        if token.kind == "name":
            if self.current.text == "(" and self.current.kind == "op":
                return self._call(token)
            return Variable(token.text)
        if token.text == "-" and token.kind == "op":
            return Negate(self.expression(PREFIX_POWER))
        if token.text == "(" and token.kind == "op":
            inner = self.expression(0)
            self._expect(")")
            return inner
        raise ExpressionSyntaxError(token.offset, OPERAND_START, token.describe())

    def _call(self, name: Token) -> Expr:
        if name.text not in FUNCTIONS:
            raise UnknownFunctionError(name.text, name.offset)
        self._expect("(")
        args = [self.expression(0)]
        while self.current.text == "," and self.current.kind == "op":
            self._advance()
            args.append(self.expression(0))
        if self.current.text != ")":
            raise ExpressionSyntaxError(self.current.offset, ["','", "')'"], self.current.describe())
        self._advance()
        arity, _ = FUNCTIONS[name.text]
        if len(args) != arity:
            raise ArityError(name.text, arity, len(args))
        return Call(name.text, tuple(args))


def parse(source: str) -> Expr:
    """Parse expression source text into a tree.

    Raises:
        ExpressionSyntaxError: On malformed input (with byte offset and expected tokens)
        UnknownFunctionError: On a call to an unknown function
        ArityError: On a call with the wrong number of arguments
    """
    if not source.strip():
        raise ExpressionSyntaxError(0, OPERAND_START, "end of input")
    return Parser(source).parse()


def evaluate(expr: Expr, env: Mapping[str, float]) -> float:
    """Evaluate a tree and insist on a finite result.

    Raises:
        UnboundVariableError: If a free variable has no binding
        ExpressionDomainError: On ln/gamma of nonpositive values, division by zero,
            or a non-integer power of a negative base
        NonFiniteResultError: If the result is inf or nan
    """
    value = expr.evaluate(env)
    if not math.isfinite(value):
        raise NonFiniteResultError(f"{expr.render()} evaluated to {value}")
    return value


def free_vars(expr: Expr) -> frozenset[str]:
    """Exact set of variable names occurring in a tree."""
    return expr.free_vars()


def serialize(expr: Expr) -> str:
    """Render a tree back to source with minimal parentheses."""
    return expr.render()
