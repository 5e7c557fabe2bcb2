"""Real-argument special functions for Fracstab.

Gamma and log-Gamma wrap scipy.special with explicit pole and domain errors.
The Mittag-Leffler series is summed term by term in extended precision
(mpmath) so that alternating series for negative arguments keep full double
accuracy; the working precision grows with the peak term magnitude.
"""

import logging
import math
from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np
from mpmath import mp
from scipy import special

from fracstab.models.exceptions import (
    DomainError,
    GammaPoleError,
    MittagLefflerDomainError,
    SeriesConvergenceError,
)
from fracstab.utils.config import get_numerics_config

logger = logging.getLogger(__name__)

# Documented evaluation domain of the series representation
ML_DOMAIN_LIMIT = 50.0

# Truncation: |term| <= RELATIVE_TOLERANCE * |partial sum| + ABSOLUTE_FLOOR
RELATIVE_TOLERANCE = 1e-15
ABSOLUTE_FLOOR = 1e-300

_BASE_DIGITS = 30
# Ceiling on the mpmath precision of alternating sums
MAX_WORKING_DIGITS = 400


@dataclass(frozen=True)
class MLParams:
    """Parameters of the two-parameter Mittag-Leffler function E_{alpha,beta}."""

    alpha: float
    beta: float = 1.0

    def __post_init__(self) -> None:
        if not self.alpha > 0:
            raise DomainError("alpha", self.alpha, "must be > 0")
        if not self.beta > 0:
            raise DomainError("beta", self.beta, "must be > 0")


@dataclass(frozen=True)
class EvalReport:
    """Value of a truncated series with its bookkeeping."""

    value: float
    terms_used: int
    truncation_bound: float


def gamma_fn(x: float) -> float:
    """Evaluate the Gamma function at a real point.

    Args:
        x: Real argument, not a nonpositive integer

    Returns:
        Gamma(x)

    Raises:
        GammaPoleError: If x is 0, -1, -2, ...
        DomainError: If the value overflows
    """
    if x <= 0 and float(x).is_integer():
        raise GammaPoleError(x)
    value = float(special.gamma(x))
    if not math.isfinite(value):
        raise DomainError("gamma", x, "value overflows double precision")
    return value


def log_gamma(x: float) -> float:
    """Evaluate ln Gamma(x) for positive x without overflow."""
    if not x > 0:
        raise DomainError("log_gamma", x, "requires x > 0")
    return float(special.gammaln(x))


def _working_digits(params: MLParams, z: float, max_terms: int) -> int:
    """Digits needed to absorb cancellation, checked against the term cap.

    The log-magnitude of the terms is concave in r, so its argmax over the
    first ``max_terms`` indices locates the peak term up front, and every
    term between the peak and the cap is at least as large as the last one.

    Raises:
        SeriesConvergenceError: If the peak term lies at or beyond the cap,
            cancellation would need more than MAX_WORKING_DIGITS digits, or the
            last term below the cap still exceeds the truncation tolerance
    """
    r = np.arange(max_terms, dtype=float)
    log_terms = r * math.log(abs(z)) - special.gammaln(r * params.alpha + params.beta)
    peak = int(np.argmax(log_terms))
    if peak >= max_terms - 1:
        raise SeriesConvergenceError(max_terms, "the largest term lies beyond the cap")
    digits = _BASE_DIGITS
    if z < 0:
        peak_digits = max(0.0, float(log_terms[peak])) / math.log(10.0)
        digits += 2 * math.ceil(peak_digits)
    if digits > MAX_WORKING_DIGITS:
        raise SeriesConvergenceError(max_terms, f"cancellation needs {digits} digits")
    # |partial sum| <= max_terms * peak term
    tail_limit = math.log(RELATIVE_TOLERANCE) + float(log_terms[peak]) + math.log(max_terms)
    if float(log_terms[-1]) > tail_limit:
        raise SeriesConvergenceError(max_terms, "terms are still above tolerance at the cap")
    return digits


def mittag_leffler(params: MLParams, z: float, max_terms: int | None = None) -> EvalReport:
    """Evaluate E_{alpha,beta}(z) = sum_r z^r / Gamma(r*alpha + beta).

    Summation stops once the terms are decreasing and the current term falls
    below 1e-15 * |partial sum| + 1e-300. The reported truncation bound is the
    geometric tail estimate from the last term ratio.

    Args:
        params: Series parameters
        z: Real argument with |z| <= 50
        max_terms: Term cap (default from configuration)

    Returns:
        EvalReport with value, number of terms and tail bound

    Raises:
        MittagLefflerDomainError: If |z| > 50 or the value overflows
        SeriesConvergenceError: If the cap is reached first, or the peak term
            or the required precision makes the cap unreachable
    """
    if not math.isfinite(z) or abs(z) > ML_DOMAIN_LIMIT:
        raise MittagLefflerDomainError(z, ML_DOMAIN_LIMIT)
    if max_terms is None:
        max_terms = get_numerics_config().ml_max_terms
    if z == 0:
        return EvalReport(value=1.0 / gamma_fn(params.beta), terms_used=1, truncation_bound=0.0)

    digits = _working_digits(params, z, max_terms)
    with mp.workdps(digits):
        alpha = mp.mpf(params.alpha)
        beta = mp.mpf(params.beta)
        zz = mp.mpf(z)
        power = mp.mpf(1)
        total = mp.mpf(0)
        previous = None
        for r in range(max_terms):
            term = power * mp.rgamma(r * alpha + beta)
            total += term
            magnitude = abs(term)
            if previous is not None and magnitude <= previous:
                if magnitude <= RELATIVE_TOLERANCE * abs(total) + ABSOLUTE_FLOOR:
                    ratio = magnitude / previous if previous else mp.mpf(0)
                    bound = magnitude * ratio / (1 - ratio) if ratio < 1 else magnitude
                    value = float(total)
                    if not math.isfinite(value):
                        raise MittagLefflerDomainError(
                            z, ML_DOMAIN_LIMIT, "value overflows double precision"
                        )
                    return EvalReport(
                        value=value, terms_used=r + 1, truncation_bound=float(bound)
                    )
            previous = magnitude
            power *= zz
    logger.debug("Mittag-Leffler series hit the cap: alpha=%s beta=%s z=%s", params.alpha, params.beta, z)
    raise SeriesConvergenceError(max_terms)


def ml_exp_ratio(alpha: float, a: float, grid: Iterable[float]) -> float:
    """Largest ratio E_{alpha,1}(a t^alpha) / e^{a t} over a time grid.

    Diagnostic only: no boundedness is claimed for the ratio.

    Args:
        alpha: Order in (0, 1]
        a: Scalar rate
        grid: Nonempty sequence of times t >= 0

    Returns:
        Maximum ratio over the grid
    """
    if not 0 < alpha <= 1:
        raise DomainError("alpha", alpha, "must lie in (0, 1]")
    times = [float(t) for t in grid]
    if not times:
        raise DomainError("grid", 0.0, "must not be empty")
    params = MLParams(alpha=alpha, beta=1.0)
    best = -math.inf
    for t in times:
        if t < 0:
            raise DomainError("grid", t, "times must be nonnegative")
        value = mittag_leffler(params, a * t**alpha).value
        exponent = -a * t
        if exponent > 709.0:
            raise DomainError("ml_exp_ratio", t, "e^(a t) underflows")
        best = max(best, value * math.exp(exponent))
    return best
