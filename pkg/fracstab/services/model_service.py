"""Model service for Fracstab.

Loads and validates system-spec documents, serializes specs back to
documents, solves the feedback loop for the state derivative and evaluates
the closed-loop right-hand side.
"""

import json
import logging
from collections.abc import Callable, Mapping
from pathlib import Path
from typing import Any

import numpy as np
from numpy.typing import NDArray
from pydantic import ValidationError

from fracstab.catalog.stabilization_example import get_example_document
from fracstab.expr import Expr, evaluate, parse, serialize
from fracstab.models.enums import LoopKind, NonlinearityForm, ThirdExponent
from fracstab.models.exceptions import (
    DimensionError,
    ExpressionError,
    SpecValidationError,
)
from fracstab.models.system import (
    ClosedLoopSystem,
    SystemDocument,
    SystemSpec,
    allowed_variables,
)
from fracstab.numerics.fracderiv import CaputoOrder
from fracstab.numerics.matrix import invert

logger = logging.getLogger(__name__)

Vector = NDArray[np.float64]
RhsFn = Callable[[float, Vector, Vector, Vector], Vector]

# Tolerance of the M_inv (I - K) = I check
INVERSE_TOLERANCE = 1e-10


def _format_validation_error(error: ValidationError) -> list[str]:
    """Flatten pydantic errors into 'field.path: message' lines."""
    lines = []
    for item in error.errors():
        path = ".".join(str(part) for part in item["loc"]) or "<document>"
        lines.append(f"{path}: {item['msg']}")
    return lines


def _parse_field(source: str, field: str, errors: list[str]) -> Expr | None:
    """Parse one expression field, recording a syntax error instead of raising."""
    try:
        return parse(source)
    except ExpressionError as e:
        errors.append(f"{field}: {e}")
        return None


class ModelService:
    """Service for system-spec documents and closed-loop systems."""

    def load_spec(self, doc: Mapping[str, Any] | SystemDocument) -> SystemSpec:
        """Validate a document and build the runtime spec.

        Args:
            doc: Parsed JSON document or an already validated SystemDocument

        Returns:
            SystemSpec with numpy matrices and parsed expressions

        Raises:
            SpecValidationError: On schema, range, syntax or variable errors
            DimensionError: If a matrix or vector does not match n
        """
        if isinstance(doc, SystemDocument):
            document = doc
        else:
            try:
                document = SystemDocument.model_validate(doc)
            except ValidationError as e:
                raise SpecValidationError(_format_validation_error(e)) from e

        n = document.n
        A = self._square(document.A, "A", n)
        feedback_K = None if document.feedback_K is None else self._square(document.feedback_K, "feedback_K", n)
        if len(document.x0) != n:
            raise DimensionError("x0", n, len(document.x0))
        if len(document.g) != n:
            raise DimensionError("g", n, len(document.g))

        errors: list[str] = []
        kernel = _parse_field(document.delay_kernel, "delay_kernel", errors)
        if kernel is not None:
            stray = kernel.free_vars() - {"t"}
            if stray:
                errors.append(f"delay_kernel: may only use t, found {', '.join(sorted(stray))}")

        allowed = allowed_variables(n)
        g: list[Expr] = []
        for index, source in enumerate(document.g):
            expr = _parse_field(source, f"g.{index}", errors)
            if expr is None:
                continue
            stray = expr.free_vars() - allowed
            if stray:
                errors.append(f"g.{index}: unknown variable(s) {', '.join(sorted(stray))}")
            g.append(expr)
        if errors or kernel is None:
            raise SpecValidationError(errors)

        return SystemSpec(
            n=n,
            A=A,
            feedback_K=feedback_K,
            alpha1=CaputoOrder(document.alpha1),
            alpha2=CaputoOrder(document.alpha2),
            delay_kernel=kernel,
            g=tuple(g),
            x0=np.array(document.x0, dtype=float),
            label=document.label,
            sim=document.sim,
        )

    @staticmethod
    def _square(rows: list[list[float]], field: str, n: int) -> NDArray[np.float64]:
        if len(rows) != n or any(len(row) != n for row in rows):
            got = f"{len(rows)} rows of lengths {[len(row) for row in rows]}"
            raise DimensionError(field, f"{n}x{n}", got)
        return np.array(rows, dtype=float)

    def read_document(self, path: Path) -> dict[str, Any]:
        """Read a JSON system-spec document without validating it.

        Raises:
            SpecValidationError: If the file is missing or is not a JSON object
        """
        try:
            content = path.read_text(encoding="utf-8")
        except OSError as e:
            raise SpecValidationError([f"{path}: cannot read file ({e.strerror})"]) from e
        try:
            doc = json.loads(content)
        except json.JSONDecodeError as e:
            raise SpecValidationError([f"{path}: invalid JSON: {e}"]) from e
        if not isinstance(doc, dict):
            raise SpecValidationError([f"{path}: document must be a JSON object"])
        return doc

    def load_spec_file(self, path: Path) -> SystemSpec:
        """Read and load a JSON system-spec document."""
        return self.load_spec(self.read_document(path))

    def serialize_spec(self, spec: SystemSpec) -> dict[str, Any]:
        """Document form of a spec; ``load_spec`` inverts it."""
        return {
            "n": spec.n,
            "A": spec.A.tolist(),
            "feedback_K": None if spec.feedback_K is None else spec.feedback_K.tolist(),
            "alpha1": spec.alpha1.alpha,
            "alpha2": spec.alpha2.alpha,
            "delay_kernel": serialize(spec.delay_kernel),
            "g": [serialize(expr) for expr in spec.g],
            "x0": spec.x0.tolist(),
            "label": spec.label,
            "sim": spec.sim.model_dump(),
        }

    def close_loop(self, spec: SystemSpec) -> ClosedLoopSystem:
        """Solve (I - K) x' = A x + kernel g for x'.

        Raises:
            SingularMatrixError: If I - K is singular
        """
        identity = np.eye(spec.n)
        if spec.feedback_K is None:
            return ClosedLoopSystem(base=spec, M_inv=identity, M_inv_A=spec.A.copy())
        implicit = identity - spec.feedback_K
        M_inv = invert(implicit)
        residual = float(np.max(np.abs(M_inv @ implicit - identity)))
        if residual > INVERSE_TOLERANCE:
            logger.warning("(I - K)^-1 residual %.3e exceeds %.0e", residual, INVERSE_TOLERANCE)
        logger.debug("Closed loop for %r: residual %.3e", spec.label, residual)
        return ClosedLoopSystem(base=spec, M_inv=M_inv, M_inv_A=M_inv @ spec.A)

    def make_rhs(self, cls: ClosedLoopSystem) -> RhsFn:
        """Right-hand side x' = M_inv (A x + kernel(t) g(t, x, c1, c2)) as a closure.

        A kernel value of exactly zero annihilates g, which is then not
        evaluated. Evaluation errors get a note naming the failing component.
        """
        spec = cls.base
        n = spec.n
        x_names = [f"x{i}" for i in range(1, n + 1)]
        d1_names = [f"d1_{i}" for i in range(1, n + 1)]
        d2_names = [f"d2_{i}" for i in range(1, n + 1)]
        kernel_is_constant = not spec.delay_kernel.free_vars()
        constant_kernel = evaluate(spec.delay_kernel, {}) if kernel_is_constant else 0.0
        M_inv = cls.M_inv
        A = spec.A
        g = spec.g

        def rhs(t: float, x: Vector, c1: Vector, c2: Vector) -> Vector:
            if kernel_is_constant:
                gain = constant_kernel
            else:
                try:
                    gain = evaluate(spec.delay_kernel, {"t": t})
                except ExpressionError as e:
                    e.add_note(f"in delay_kernel at t={t!r}")
                    raise
            linear = A @ x
            if gain == 0.0:
                return np.asarray(M_inv @ linear, dtype=float)
            env: dict[str, float] = {"t": t}
            env.update(zip(x_names, x.tolist()))
            env.update(zip(d1_names, c1.tolist()))
            env.update(zip(d2_names, c2.tolist()))
            values = np.empty(n)
            for index, expr in enumerate(g):
                try:
                    values[index] = evaluate(expr, env)
                except ExpressionError as e:
                    e.add_note(f"in g component {index + 1} at t={t!r}")
                    raise
            return np.asarray(M_inv @ (linear + gain * values), dtype=float)

        return rhs

    def rhs(
        self,
        cls: ClosedLoopSystem,
        t: float,
        x: Vector,
        c1: Vector | None = None,
        c2: Vector | None = None,
    ) -> Vector:
        """Evaluate the closed-loop right-hand side once.

        Args:
            cls: Closed-loop system
            t: Time
            x: State
            c1: Order-alpha1 Caputo estimates (zeros if omitted)
            c2: Order-alpha2 Caputo estimates (zeros if omitted)

        Returns:
            State derivative
        """
        zeros = np.zeros(cls.n)
        x = np.asarray(x, dtype=float)
        c1 = zeros if c1 is None else np.asarray(c1, dtype=float)
        c2 = zeros if c2 is None else np.asarray(c2, dtype=float)
        return self.make_rhs(cls)(t, x, c1, c2)

    def builtin_example(
        self,
        loop: LoopKind = LoopKind.CLOSED,
        form: NonlinearityForm = NonlinearityForm.AS_PRINTED,
        third_exponent: ThirdExponent = ThirdExponent.TWO_FIFTHS,
    ) -> SystemSpec:
        """Load a catalog variant of the stabilization example."""
        return self.load_spec(get_example_document(loop, form, third_exponent))


# Singleton instance
_model_service: ModelService | None = None


def get_model_service() -> ModelService:
    """Get the global model service instance."""
    global _model_service
    if _model_service is None:
        _model_service = ModelService()
    return _model_service
