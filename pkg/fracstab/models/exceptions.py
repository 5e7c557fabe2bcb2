"""Custom exceptions for Fracstab.

Provides a hierarchy of exceptions for error handling throughout the application.
"""

from typing import Any


class FracstabError(Exception):
    """Base exception for all Fracstab errors."""

    pass


class NumericalError(FracstabError):
    """Base exception for numerical failures (domains, poles, convergence)."""

    pass


class DomainError(NumericalError):
    """Raised when a function is evaluated outside its domain."""

    def __init__(self, name: str, value: float, detail: str = "") -> None:
        self.name = name
        self.value = value
        message = f"{name} is undefined at {value!r}"
        if detail:
            message = f"{message} ({detail})"
        super().__init__(message)


class GammaPoleError(DomainError):
    """Raised when the Gamma function is evaluated at a nonpositive integer."""

    def __init__(self, x: float) -> None:
        super().__init__("gamma", x, "pole at nonpositive integer")


class MittagLefflerDomainError(NumericalError):
    """Raised outside the documented Mittag-Leffler evaluation domain."""

    def __init__(self, z: float, limit: float, detail: str = "") -> None:
        self.z = z
        self.limit = limit
        message = f"Mittag-Leffler argument z={z!r} is outside |z| <= {limit:g}"
        if detail:
            message = f"Mittag-Leffler evaluation at z={z!r} failed: {detail}"
        super().__init__(message)


class SeriesConvergenceError(NumericalError):
    """Raised when a series does not meet its truncation criterion in time."""

    def __init__(self, terms: int, reason: str = "") -> None:
        self.terms = terms
        self.reason = reason
        message = f"Series did not converge within {terms} terms"
        super().__init__(f"{message}: {reason}" if reason else message)


class SingularMatrixError(NumericalError):
    """Raised when LU factorization meets a pivot below the singularity guard."""

    def __init__(self, pivot_index: int, pivot: float) -> None:
        self.pivot_index = pivot_index
        self.pivot = pivot
        super().__init__(f"Matrix is singular: pivot {pivot_index} has magnitude {abs(pivot):.3e}")


class EigenConvergenceError(NumericalError):
    """Raised when the QR eigenvalue iteration fails to converge."""

    def __init__(self, detail: str = "") -> None:
        message = "Eigenvalue iteration did not converge"
        if detail:
            message = f"{message}: {detail}"
        super().__init__(message)


class MatrixOverflowError(NumericalError):
    """Raised when a matrix function leaves the representable range."""

    def __init__(self, operation: str) -> None:
        self.operation = operation
        super().__init__(f"Overflow in {operation}: entries exceed 1e300")


class MEstimationError(NumericalError):
    """Raised when the semigroup constant keeps growing at the end of the grid."""

    def __init__(self, t: float, value: float) -> None:
        self.t = t
        self.value = value
        super().__init__(
            f"Semigroup constant still increasing at t={t:g} (value {value:.6g}); "
            "extend the horizon or check for a defective spectrum"
        )


class ExpressionError(FracstabError):
    """Base exception for expression language errors."""

    pass


class ExpressionSyntaxError(ExpressionError):
    """Raised when an expression cannot be parsed."""

    def __init__(self, offset: int, expected: list[str], found: str) -> None:
        self.offset = offset
        self.expected = expected
        self.found = found
        wanted = ", ".join(expected)
        super().__init__(f"Syntax error at offset {offset}: expected {wanted}, found {found}")


class UnknownFunctionError(ExpressionError):
    """Raised when an expression calls a function that does not exist."""

    def __init__(self, name: str, offset: int) -> None:
        self.name = name
        self.offset = offset
        super().__init__(f"Unknown function '{name}' at offset {offset}")


class ArityError(ExpressionError):
    """Raised when a function receives the wrong number of arguments."""

    def __init__(self, name: str, expected: int, got: int) -> None:
        self.name = name
        self.expected = expected
        self.got = got
        super().__init__(f"Function '{name}' takes {expected} argument(s), got {got}")


class UnboundVariableError(ExpressionError):
    """Raised when an expression references a variable with no binding."""

    def __init__(self, name: str) -> None:
        self.name = name
        super().__init__(f"Unbound variable: {name}")


class ExpressionDomainError(ExpressionError):
    """Raised when evaluation leaves the domain of an operation."""

    def __init__(self, detail: str) -> None:
        self.detail = detail
        super().__init__(f"Domain error: {detail}")


class NonFiniteResultError(ExpressionError):
    """Raised when evaluation produces inf or nan."""

    def __init__(self, detail: str) -> None:
        self.detail = detail
        super().__init__(f"Non-finite result: {detail}")


class SpecError(FracstabError):
    """Base exception for system-spec errors."""

    pass


class SpecValidationError(SpecError):
    """Raised when a system-spec document fails validation."""

    def __init__(self, errors: list[str]) -> None:
        self.errors = errors
        message = "Invalid system spec: " + "; ".join(errors)
        super().__init__(message)


class DimensionError(SpecError):
    """Raised when vectors or matrices do not match the system dimension."""

    def __init__(self, field: str, expected: Any, got: Any) -> None:
        self.field = field
        super().__init__(f"Dimension mismatch in {field}: expected {expected}, got {got}")


class ParameterPathError(SpecError):
    """Raised when a sweep parameter path does not address a scalar."""

    def __init__(self, path: str, detail: str) -> None:
        self.path = path
        super().__init__(f"Invalid parameter path '{path}': {detail}")


class SimulationError(FracstabError):
    """Base exception for simulation failures."""

    pass


class SimulationAbortedError(SimulationError):
    """Raised when integration stops on an evaluation error.

    The trajectory recorded up to the failing step is kept in ``partial``.
    """

    def __init__(self, step: int, cause: Exception, partial: Any = None) -> None:
        self.step = step
        self.cause = cause
        self.partial = partial
        super().__init__(f"Simulation aborted at step {step}: {cause}")
