"""Expression tree nodes for Fracstab.

Nodes are frozen dataclasses, so two trees compare equal exactly when they
are structurally identical. Each node knows how to evaluate itself, list its
free variables and render itself with minimal parentheses.
"""

import math
from abc import ABC, abstractmethod
from collections.abc import Callable, Mapping
from dataclasses import dataclass

from fracstab.models.exceptions import (
    ExpressionDomainError,
    FracstabError,
    NonFiniteResultError,
    UnboundVariableError,
)
from fracstab.numerics.specfun import gamma_fn

# Binding strength used by the parser and the renderer
ADDITIVE = 1
MULTIPLICATIVE = 2
UNARY = 3
POWER = 4
ATOM = 5

BINARY_PRECEDENCE: dict[str, int] = {
    "+": ADDITIVE,
    "-": ADDITIVE,
    "*": MULTIPLICATIVE,
    "/": MULTIPLICATIVE,
    "^": POWER,
}

Env = Mapping[str, float]


def _sgn(x: float) -> float:
    if x > 0:
        return 1.0
    if x < 0:
        return -1.0
    return 0.0


def _ln(x: float) -> float:
    if x <= 0:
        raise ExpressionDomainError(f"ln of nonpositive argument {x!r}")
    return math.log(x)


def _exp(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError as e:
        raise NonFiniteResultError(f"exp({x!r}) overflows") from e


def _gamma(x: float) -> float:
    if x <= 0:
        raise ExpressionDomainError(f"gamma of nonpositive argument {x!r}")
    try:
        return gamma_fn(x)
    except FracstabError as e:
        raise NonFiniteResultError(str(e)) from e


def _power(base: float, exponent: float) -> float:
    if base < 0 and not float(exponent).is_integer():
        raise ExpressionDomainError(
            f"{base!r} ^ {exponent!r} is not real; use spow for signed powers"
        )
    if base == 0 and exponent < 0:
        raise ExpressionDomainError(f"0 ^ {exponent!r} divides by zero")
    try:
        return math.pow(base, exponent)
    except OverflowError as e:
        raise NonFiniteResultError(f"{base!r} ^ {exponent!r} overflows") from e


def spow(x: float, p: float) -> float:
    """Signed power sgn(x) * |x|^p, real for every real x."""
    if x == 0:
        if p < 0:
            raise ExpressionDomainError(f"spow(0, {p!r}) divides by zero")
        return 0.0
    return math.copysign(_power(abs(x), p), x)


FUNCTIONS: dict[str, tuple[int, Callable[..., float]]] = {
    "sin": (1, math.sin),
    "cos": (1, math.cos),
    "exp": (1, _exp),
    "ln": (1, _ln),
    "abs": (1, abs),
    "sgn": (1, _sgn),
    "spow": (2, spow),
    "gamma": (1, _gamma),
}


class Expr(ABC):
    """Base class of expression tree nodes."""

    @property
    @abstractmethod
    def precedence(self) -> int:
        """Binding strength of the node's outermost operator."""

    @abstractmethod
    def evaluate(self, env: Env) -> float:
        """Evaluate the node under a variable environment."""

    @abstractmethod
    def free_vars(self) -> frozenset[str]:
        """Variables occurring in the node."""

    @abstractmethod
    def render(self) -> str:
        """Source text with minimal parentheses."""


@dataclass(frozen=True)
class Number(Expr):
    """Nonnegative numeric literal."""

    value: float

    @property
    def precedence(self) -> int:
        return ATOM

    def evaluate(self, env: Env) -> float:
        return self.value

    def free_vars(self) -> frozenset[str]:
        return frozenset()

    def render(self) -> str:
        if self.value.is_integer() and abs(self.value) < 1e15:
            return str(int(self.value))
        return repr(self.value)


@dataclass(frozen=True)
class Variable(Expr):
    """Reference to a bound name (t, x1, d1_2, ...)."""

    name: str

    @property
    def precedence(self) -> int:
        return ATOM

    def evaluate(self, env: Env) -> float:
        try:
            return env[self.name]
        except KeyError:
            raise UnboundVariableError(self.name) from None

    def free_vars(self) -> frozenset[str]:
        return frozenset({self.name})

    def render(self) -> str:
        return self.name


@dataclass(frozen=True)
class Negate(Expr):
    """Unary minus."""

    operand: Expr

    @property
    def precedence(self) -> int:
        return UNARY

    def evaluate(self, env: Env) -> float:
        return -self.operand.evaluate(env)

    def free_vars(self) -> frozenset[str]:
        return self.operand.free_vars()

    def render(self) -> str:
        inner = self.operand.render()
        if self.operand.precedence < UNARY:
            inner = f"({inner})"
        return f"-{inner}"


@dataclass(frozen=True)
class BinaryOp(Expr):
    """Binary arithmetic: + - * / and right-associative ^."""

    op: str
    left: Expr
    right: Expr

    @property
    def precedence(self) -> int:
        return BINARY_PRECEDENCE[self.op]

    def evaluate(self, env: Env) -> float:
        a = self.left.evaluate(env)
        b = self.right.evaluate(env)
        if self.op == "+":
            return a + b
        if self.op == "-":
            return a - b
        if self.op == "*":
            return a * b
        if self.op == "/":
            if b == 0:
                raise ExpressionDomainError("division by zero")
            return a / b
        return _power(a, b)

    def free_vars(self) -> frozenset[str]:
        return self.left.free_vars() | self.right.free_vars()

    def render(self) -> str:
        own = self.precedence
        left = self.left.render()
        right = self.right.render()
        if self.op == "^":
            if self.left.precedence <= own:
                left = f"({left})"
            if self.right.precedence < UNARY:
                right = f"({right})"
        else:
            if self.left.precedence < own:
                left = f"({left})"
            if self.right.precedence <= own:
                right = f"({right})"
        return f"{left} {self.op} {right}"


@dataclass(frozen=True)
class Call(Expr):
    """Call of a built-in function."""

    name: str
    args: tuple[Expr, ...]

    @property
    def precedence(self) -> int:
        return ATOM

    def evaluate(self, env: Env) -> float:
        _, function = FUNCTIONS[self.name]
        values = [arg.evaluate(env) for arg in self.args]
        try:
            return float(function(*values))
        except ValueError as e:
            # math.sin / math.cos reject infinite arguments
            raise ExpressionDomainError(f"{self.name}{tuple(values)!r}: {e}") from e

    def free_vars(self) -> frozenset[str]:
        names: frozenset[str] = frozenset()
        for arg in self.args:
            names |= arg.free_vars()
        return names

    def render(self) -> str:
        return f"{self.name}({', '.join(arg.render() for arg in self.args)})"
