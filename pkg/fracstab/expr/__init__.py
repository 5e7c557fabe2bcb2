"""Expression language for nonlinearities and delay kernels.

Expressions are parsed once from the system-spec document and evaluated
many times under different variable environments.
"""

from fracstab.expr.nodes import (
    FUNCTIONS,
    BinaryOp,
    Call,
    Expr,
    Negate,
    Number,
    Variable,
    spow,
)
from fracstab.expr.parser import evaluate, free_vars, parse, serialize, tokenize

__all__ = [
    "Expr",
    "Number",
    "Variable",
    "Negate",
    "BinaryOp",
    "Call",
    "FUNCTIONS",
    "spow",
    "parse",
    "evaluate",
    "free_vars",
    "serialize",
    "tokenize",
]
