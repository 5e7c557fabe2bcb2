"""Data models for Fracstab.

This module contains the system-spec document and runtime system types,
the stability certificate, trajectories, enums and exceptions.
"""

from fracstab.models.certificate import SCHEMA_VERSION, StabilityCertificate
from fracstab.models.enums import (
    ExitStatus,
    LoopKind,
    NonlinearityForm,
    Outcome,
    ReportMode,
    ThirdExponent,
    Verdict,
)
from fracstab.models.exceptions import (
    ArityError,
    DimensionError,
    DomainError,
    EigenConvergenceError,
    ExpressionDomainError,
    ExpressionError,
    ExpressionSyntaxError,
    FracstabError,
    GammaPoleError,
    MatrixOverflowError,
    MEstimationError,
    MittagLefflerDomainError,
    NonFiniteResultError,
    NumericalError,
    ParameterPathError,
    SeriesConvergenceError,
    SimulationAbortedError,
    SimulationError,
    SingularMatrixError,
    SpecError,
    SpecValidationError,
    UnboundVariableError,
    UnknownFunctionError,
)
from fracstab.models.system import ClosedLoopSystem, SimConfig, SystemDocument, SystemSpec
from fracstab.models.trajectory import Trajectory

__all__ = [
    # System
    "SystemDocument",
    "SystemSpec",
    "ClosedLoopSystem",
    "SimConfig",
    # Results
    "StabilityCertificate",
    "SCHEMA_VERSION",
    "Trajectory",
    # Enums
    "Verdict",
    "Outcome",
    "LoopKind",
    "NonlinearityForm",
    "ThirdExponent",
    "ReportMode",
    "ExitStatus",
    # Exceptions
    "FracstabError",
    "NumericalError",
    "DomainError",
    "GammaPoleError",
    "MittagLefflerDomainError",
    "SeriesConvergenceError",
    "SingularMatrixError",
    "EigenConvergenceError",
    "MatrixOverflowError",
    "MEstimationError",
    "ExpressionError",
    "ExpressionSyntaxError",
    "UnknownFunctionError",
    "ArityError",
    "UnboundVariableError",
    "ExpressionDomainError",
    "NonFiniteResultError",
    "SpecError",
    "SpecValidationError",
    "DimensionError",
    "ParameterPathError",
    "SimulationError",
    "SimulationAbortedError",
]
