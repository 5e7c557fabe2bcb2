"""Enumeration types for Fracstab models.

Defines verdicts, simulation outcomes, catalog variants and report modes.
"""

from enum import Enum


class Verdict(str, Enum):
    """Outcome of a stability certificate."""

    CERTIFIED_NUMERICALLY = "certified_numerically"
    FAILED = "failed"
    INCONCLUSIVE = "inconclusive"


class Outcome(str, Enum):
    """Classification of a simulated trajectory."""

    CONVERGED = "converged"
    DIVERGED = "diverged"
    COMPLETED = "completed"


class LoopKind(str, Enum):
    """Whether the catalog system carries the feedback gain."""

    OPEN = "open"
    CLOSED = "closed"


class NonlinearityForm(str, Enum):
    """How the example's nonlinearity coefficients are read."""

    AS_PRINTED = "as-printed"
    POWER_RULE_EXACT = "power-rule-exact"


class ThirdExponent(str, Enum):
    """Exponent of x2 in the third nonlinearity component (printed both ways)."""

    TWO_FIFTHS = "2/5"
    TWO_THIRDS = "2/3"


class ReportMode(str, Enum):
    """Which gain-margin readings a certificate report includes."""

    SPECTRAL = "spectral"
    PAPER_LITERAL = "paper-literal"
    BOTH = "both"


class ExitStatus(int, Enum):
    """Process exit codes of the command line."""

    OK = 0
    FAILED = 1
    USAGE = 2
    NUMERICAL = 3
