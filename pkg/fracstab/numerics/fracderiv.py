"""Caputo fractional derivatives of order 0 < alpha < 1 for Fracstab.

Closed-form power rule plus the L1 discretization on uniform grids with the
lower terminal fixed at t = 0:

    D^alpha f(t_k) ~ h^-alpha / Gamma(2 - alpha) * sum_{j<k} b_j (f_{k-j} - f_{k-j-1}),
    b_j = (j + 1)^(1 - alpha) - j^(1 - alpha).

The scheme is O(h^(2 - alpha)) for C^2 functions.
"""

import math
from collections.abc import Sequence
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from numpy.typing import NDArray
from scipy import signal

from fracstab.models.exceptions import DomainError
from fracstab.numerics.specfun import gamma_fn

FloatArray = NDArray[np.float64]


@dataclass(frozen=True)
class CaputoOrder:
    """Order of a Caputo derivative, strictly between 0 and 1."""

    alpha: float

    def __post_init__(self) -> None:
        if not 0 < self.alpha < 1:
            raise DomainError("alpha", self.alpha, "Caputo order must lie in (0, 1)")

    @property
    def l1_scale(self) -> float:
        """1 / Gamma(2 - alpha), the constant in front of the L1 sum."""
        return 1.0 / gamma_fn(2.0 - self.alpha)


@dataclass(frozen=True, eq=False)
class SampledFn:
    """Samples f(0), f(h), ..., f(Nh) on a uniform grid."""

    h: float
    values: FloatArray

    def __post_init__(self) -> None:
        if not self.h > 0:
            raise DomainError("h", self.h, "step must be > 0")
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or values.size < 2:
            raise DomainError("values", float(values.size), "need at least two samples")
        if not np.all(np.isfinite(values)):
            raise DomainError("values", float("nan"), "samples must be finite")
        object.__setattr__(self, "values", values)

    @property
    def n_intervals(self) -> int:
        return int(self.values.size - 1)

    @property
    def times(self) -> FloatArray:
        return np.arange(self.values.size, dtype=float) * self.h

    @classmethod
    def from_function(cls, f: object, h: float, n_intervals: int) -> "SampledFn":
        """Sample a vectorized callable at k*h for k = 0..n_intervals."""
        times = np.arange(n_intervals + 1, dtype=float) * h
        return cls(h=h, values=np.asarray(f(times), dtype=float))  # type: ignore[operator]


class PowerRuleTerm(NamedTuple):
    """Result of the closed-form rule D^alpha t^beta = coefficient * t^exponent."""

    coefficient: float
    exponent: float | None


def caputo_power_rule(order: CaputoOrder, beta: float) -> PowerRuleTerm:
    """Caputo derivative of t^beta in closed form.

    Constants (beta = 0) are annihilated and have no exponent.

    Raises:
        DomainError: If beta < 0 or beta - alpha + 1 is a Gamma pole
    """
    if beta < 0:
        raise DomainError("beta", beta, "must be >= 0")
    if float(beta).is_integer() and beta < 1:
        return PowerRuleTerm(coefficient=0.0, exponent=None)
    shifted = beta - order.alpha + 1.0
    if shifted <= 0 and float(shifted).is_integer():
        raise DomainError("beta", beta, "beta - alpha + 1 is a Gamma pole")
    coefficient = gamma_fn(beta + 1.0) / gamma_fn(shifted)
    return PowerRuleTerm(coefficient=coefficient, exponent=beta - order.alpha)


def l1_weights(alpha: float, count: int) -> FloatArray:
    """First ``count`` L1 weights b_j = (j+1)^(1-alpha) - j^(1-alpha)."""
    j = np.arange(count, dtype=float)
    return np.asarray((j + 1.0) ** (1.0 - alpha) - j ** (1.0 - alpha), dtype=float)


def caputo_l1(f: SampledFn, order: CaputoOrder, k: int) -> float:
    """L1 approximation of D^alpha f at t_k = k h.

    Raises:
        DomainError: If k is outside 1..N
    """
    if not 1 <= k <= f.n_intervals:
        raise DomainError("k", float(k), f"index must lie in 1..{f.n_intervals}")
    diffs = np.diff(f.values[: k + 1])
    weights = l1_weights(order.alpha, k)
    total = float(np.dot(weights, diffs[::-1]))
    return f.h ** (-order.alpha) * order.l1_scale * total


def caputo_l1_track(f: SampledFn, order: CaputoOrder) -> SampledFn:
    """L1 values at every grid point (0 at t = 0).

    The history sums form one discrete convolution of the weights with the
    increments; scipy picks direct or FFT evaluation by size.
    """
    diffs = np.diff(f.values)
    weights = l1_weights(order.alpha, diffs.size)
    sums = signal.convolve(diffs, weights, mode="full", method="auto")[: diffs.size]
    track = np.zeros_like(f.values)
    track[1:] = f.h ** (-order.alpha) * order.l1_scale * sums
    return SampledFn(h=f.h, values=track)


def empirical_order(errors_at_h: Sequence[tuple[float, float]]) -> float:
    """Least-squares slope of log(err) against log(h).

    Returns +inf when any error is exactly zero.

    Raises:
        DomainError: With fewer than two points, non-decreasing h, or negative errors
    """
    if len(errors_at_h) < 2:
        raise DomainError("errors_at_h", float(len(errors_at_h)), "need at least two points")
    steps = [h for h, _ in errors_at_h]
    if any(later >= earlier for earlier, later in zip(steps, steps[1:])):
        raise DomainError("h", steps[-1], "steps must be strictly decreasing")
    errors = [err for _, err in errors_at_h]
    if any(err < 0 for err in errors):
        raise DomainError("err", min(errors), "errors must be nonnegative")
    if any(err == 0 for err in errors):
        return math.inf
    slope, _ = np.polyfit(np.log(steps), np.log(errors), 1)
    return float(slope)


class L1History:
    """On-line L1 evaluation for a vector state advanced one step at a time.

    Holds the increments x_k - x_{k-1} of every component so the history
    sum for the next point is computed once per step and reused by the
    predictor and the corrector.
    """

    def __init__(self, order: CaputoOrder, h: float, dim: int, capacity: int) -> None:
        self.order = order
        self.h = h
        self._weights = l1_weights(order.alpha, capacity + 1)
        self._diffs = np.zeros((capacity + 1, dim))
        self._count = 0
        self._scale = h ** (-order.alpha) * order.l1_scale

    @property
    def count(self) -> int:
        """Number of accepted increments."""
        return self._count

    def history_sum(self) -> FloatArray:
        """sum_{j>=1} b_j * diff_{k+1-j} for the next point k+1."""
        k = self._count
        if k == 0:
            return np.zeros(self._diffs.shape[1])
        return np.asarray(self._weights[1 : k + 1] @ self._diffs[k - 1 :: -1][:k], dtype=float)

    def value_with(self, history: FloatArray, increment: FloatArray) -> FloatArray:
        """Derivative estimate at the next point given its increment."""
        return np.asarray(self._scale * (self._weights[0] * increment + history), dtype=float)

    def accept(self, increment: FloatArray) -> None:
        """Store the increment of an accepted step."""
        self._diffs[self._count] = increment
        self._count += 1
