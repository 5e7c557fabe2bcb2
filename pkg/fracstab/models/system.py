"""System models for Fracstab.

Two layers describe a controlled system: ``SystemDocument`` is the pydantic
schema of the JSON document users write, ``SystemSpec`` is the validated
runtime form with numpy matrices and parsed expressions. ``ClosedLoopSystem``
adds the solved form x' = (I - K)^-1 [A x + kernel(t) g].
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

if TYPE_CHECKING:
    from fracstab.expr.nodes import Expr
    from fracstab.numerics.fracderiv import CaputoOrder

Mat = NDArray[np.float64]

# Fixed-step simulation may not exceed this many steps
MAX_STEPS = 10_000_000
# Step count ceiling when g carries Caputo-derivative variables (quadratic history cost)
MAX_HISTORY_STEPS = 100_000
# Relative slack on t_end / dt being a whole number of steps
STEP_RATIO_TOLERANCE = 1e-9

_DERIV_VAR = re.compile(r"^d[12]_[1-9][0-9]*$")


class SimConfig(BaseModel):
    """Fixed-step simulation settings (the document's ``sim`` block)."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    t_end: float = Field(
        40.0,
        gt=0,
        description="Final simulation time",
    )
    dt: float = Field(
        1e-3,
        gt=0,
        description="Integration step",
    )
    divergence_cap: float = Field(
        1e6,
        gt=0,
        description="Norm at which a run is truncated and classified diverged",
    )
    record_stride: int = Field(
        1,
        ge=1,
        description="Record every k-th step",
    )

    @model_validator(mode="after")
    def check_step_count(self) -> "SimConfig":
        """Ensure dt < t_end, dt divides t_end and the step count stays bounded."""
        if not self.dt < self.t_end:
            raise ValueError(f"dt ({self.dt:g}) must be smaller than t_end ({self.t_end:g})")
        ratio = self.t_end / self.dt
        if ratio > MAX_STEPS:
            raise ValueError(f"t_end / dt exceeds {MAX_STEPS} steps")
        if abs(ratio - round(ratio)) > STEP_RATIO_TOLERANCE * ratio:
            raise ValueError(
                f"t_end ({self.t_end:g}) is not a whole number of steps of dt ({self.dt:g}); "
                f"the run would stop at t = {round(ratio) * self.dt:g}"
            )
        return self

    @property
    def n_steps(self) -> int:
        """Number of integration steps; t_end / dt is whole up to rounding."""
        return int(round(self.t_end / self.dt))


class SystemDocument(BaseModel):
    """JSON schema of a system-spec document.

    Matrices are row-major lists; ``feedback_K`` is null for an open loop.
    Dimension and expression checks happen when the document is loaded
    into a ``SystemSpec``.
    """

    model_config = ConfigDict(extra="forbid")

    n: int = Field(
        ...,
        ge=1,
        description="State dimension",
    )
    A: list[list[float]] = Field(
        ...,
        description="System matrix, n x n",
    )
    feedback_K: list[list[float]] | None = Field(
        None,
        description="State-derivative feedback gain, n x n, or null",
    )
    alpha1: float = Field(
        ...,
        gt=0,
        lt=1,
        description="Order of the first Caputo derivative",
    )
    alpha2: float = Field(
        ...,
        gt=0,
        lt=1,
        description="Order of the second Caputo derivative",
    )
    delay_kernel: str = Field(
        ...,
        description="Scalar gain expression over t",
    )
    g: list[str] = Field(
        ...,
        min_length=1,
        description="Nonlinearity components over t, x*, d1_*, d2_*",
    )
    x0: list[float] = Field(
        ...,
        description="Initial state",
    )
    label: str = Field(
        "",
        max_length=200,
        description="Free-text system label",
    )
    sim: SimConfig = Field(
        default_factory=SimConfig,
        description="Simulation settings",
    )

    @field_validator("A", "feedback_K")
    @classmethod
    def validate_finite_matrix(cls, v: list[list[float]] | None) -> list[list[float]] | None:
        """Reject inf and nan entries."""
        if v is not None and not all(np.isfinite(entry) for row in v for entry in row):
            raise ValueError("matrix entries must be finite")
        return v

    @field_validator("x0")
    @classmethod
    def validate_finite_state(cls, v: list[float]) -> list[float]:
        """Reject inf and nan entries."""
        if not all(np.isfinite(entry) for entry in v):
            raise ValueError("initial state must be finite")
        return v


def allowed_variables(n: int) -> frozenset[str]:
    """Names a nonlinearity component of an n-dimensional system may use."""
    names = {"t"}
    for i in range(1, n + 1):
        names.update({f"x{i}", f"d1_{i}", f"d2_{i}"})
    return frozenset(names)


def is_derivative_variable(name: str) -> bool:
    """True for d1_i / d2_i names."""
    return _DERIV_VAR.match(name) is not None


@dataclass(frozen=True, eq=False)
class SystemSpec:
    """Validated runtime description of a controlled system."""

    n: int
    A: Mat
    feedback_K: Mat | None
    alpha1: CaputoOrder
    alpha2: CaputoOrder
    delay_kernel: Expr
    g: tuple[Expr, ...]
    x0: Mat
    label: str
    sim: SimConfig

    @property
    def is_open_loop(self) -> bool:
        return self.feedback_K is None

    @property
    def uses_history(self) -> bool:
        """Whether any nonlinearity component reads a Caputo derivative."""
        return any(is_derivative_variable(name) for expr in self.g for name in expr.free_vars())


@dataclass(frozen=True, eq=False)
class ClosedLoopSystem:
    """System solved for the derivative: x' = M_inv (A x + kernel(t) g)."""

    base: SystemSpec
    M_inv: Mat
    M_inv_A: Mat

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def uses_history(self) -> bool:
        return self.base.uses_history
