"""Stability service for Fracstab.

Builds numerical stability certificates for closed-loop systems: the
eigenvalue condition on (I - K)^-1 A, the semigroup, kernel and gain
constants M, M1, M2 and the gain margin omega > M1 M2 M ||(I - K)^-1||.
Also evaluates the Gronwall envelope, the perturbed-semigroup bound and the
decay envelope of certified systems.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray
from scipy import optimize
from scipy.stats import qmc

from fracstab.expr import Expr, evaluate
from fracstab.models.certificate import StabilityCertificate
from fracstab.models.enums import Verdict
from fracstab.models.exceptions import (
    DomainError,
    EigenConvergenceError,
    ExpressionError,
    MEstimationError,
)
from fracstab.models.system import ClosedLoopSystem, SystemSpec
from fracstab.numerics.matrix import Spectrum, eigenvalues, expm, spectral_norm
from fracstab.numerics.specfun import MLParams, gamma_fn, mittag_leffler
from fracstab.utils.config import get_numerics_config

logger = logging.getLogger(__name__)

Mat = NDArray[np.float64]

# Decay rate used for M is shrunk by this factor
OMEGA_SHRINK = 0.99
# Smallest denominator ||x|| + ||c1|| + ||c2|| taken into the M2 supremum
M2_DENOMINATOR_FLOOR = 1e-9
MIN_M2_SAMPLES = 1000
# Left end of the log-spaced M grid, relative to the horizon
M_GRID_START = 1e-4


@dataclass(frozen=True)
class GronwallInstance:
    """Constant data of a fractional Gronwall inequality.

    a(t) <= Z + u * int_0^t (t - s)^(alpha - 1) a(s) ds implies
    a(t) <= Z * E_alpha(Gamma(alpha) u t^alpha).
    """

    Z: float
    u: float
    alpha: float

    def __post_init__(self) -> None:
        if self.Z < 0:
            raise DomainError("Z", self.Z, "must be >= 0")
        if self.u < 0:
            raise DomainError("u", self.u, "must be >= 0")
        if not self.alpha > 0:
            raise DomainError("alpha", self.alpha, "must be > 0")


def _safe_exp(exponent: float) -> float:
    try:
        return math.exp(exponent)
    except OverflowError:
        return math.inf


class StabilityService:
    """Service for stability certificates and the bounds built on them."""

    def estimate_M(
        self,
        m: Mat,
        omega: float,
        horizon: float,
        grid_points: int | None = None,
    ) -> float:
        """Semigroup constant M with ||e^{mt}||_2 <= M e^{-0.99 omega t} on [0, horizon].

        The supremum is taken over a log-spaced grid merged with a uniform
        grid and refined around the best grid point.

        Args:
            m: Matrix with negative spectral abscissa
            omega: Decay rate (minus the spectral abscissa)
            horizon: Right end of the time window
            grid_points: Points per grid (default from configuration)

        Returns:
            M >= 1

        Raises:
            DomainError: If horizon <= 0 or omega <= 0
            MEstimationError: If the product still increases at the horizon
        """
        if not horizon > 0:
            raise DomainError("horizon", horizon, "must be > 0")
        if not omega > 0:
            raise DomainError("omega", omega, "the spectral abscissa must be negative")
        points = grid_points or get_numerics_config().m_grid_points
        rate = OMEGA_SHRINK * omega

        def weighted_norm(t: float) -> float:
            return spectral_norm(expm(m, t)) * math.exp(rate * t)

        grid = np.union1d(
            np.geomspace(horizon * M_GRID_START, horizon, points),
            np.linspace(0.0, horizon, points),
        )
        values = np.array([weighted_norm(float(t)) for t in grid])
        best = int(np.argmax(values))
        if best == grid.size - 1 and values[-1] > values[-2]:
            raise MEstimationError(float(grid[-1]), float(values[-1]))

        supremum = float(values[best])
        if 0 < best < grid.size - 1:
            refined = optimize.minimize_scalar(
                lambda t: -weighted_norm(float(t)),
                bounds=(float(grid[best - 1]), float(grid[best + 1])),
                method="bounded",
                options={"xatol": 1e-10 * horizon},
            )
            supremum = max(supremum, -float(refined.fun))
        logger.debug("estimate_M: sup %.6g at t=%.4g over %d points", supremum, grid[best], grid.size)
        return max(1.0, supremum)

    def estimate_M1(self, kernel: Expr, horizon: float, grid_points: int | None = None) -> float:
        """Supremum of |kernel(t)| on a uniform grid over [0, horizon].

        The value is horizon-relative: unbounded kernels grow with the horizon.
        """
        if not horizon > 0:
            raise DomainError("horizon", horizon, "must be > 0")
        if not kernel.free_vars():
            return abs(evaluate(kernel, {}))
        points = grid_points or get_numerics_config().m1_grid_points
        grid = np.linspace(0.0, horizon, points)
        return max(abs(evaluate(kernel, {"t": float(t)})) for t in grid)

    def estimate_M2(
        self,
        spec: SystemSpec,
        ball_radius: float,
        samples: int | None = None,
        horizon: float = 1.0,
    ) -> float:
        """Sampled gain bound ||g|| <= M2 (||x|| + ||c1|| + ||c2||) on a ball.

        Points come from an unscrambled Halton sequence in 3n + 2 dimensions
        (three direction blocks, a radius fraction and a time fraction). The
        sequence is cut into four contiguous blocks: x alone, x with c1, x
        with c2, and all three.

        Args:
            spec: System whose nonlinearity is bounded
            ball_radius: Radius of ||x|| + ||c1|| + ||c2|| <= ball_radius
            samples: Number of sample points, at least 1000
            horizon: Times are sampled in [0, horizon]

        Returns:
            Supremum of the sampled ratios (0 for g identically zero)
        """
        if not ball_radius > 0:
            raise DomainError("ball_radius", ball_radius, "must be > 0")
        count = samples or get_numerics_config().m2_samples
        if count < MIN_M2_SAMPLES:
            raise DomainError("samples", float(count), f"need at least {MIN_M2_SAMPLES}")

        n = spec.n
        points = qmc.Halton(d=3 * n + 2, scramble=False).random(count)
        block = math.ceil(count / 4)
        x_names = [f"x{i}" for i in range(1, n + 1)]
        d1_names = [f"d1_{i}" for i in range(1, n + 1)]
        d2_names = [f"d2_{i}" for i in range(1, n + 1)]

        supremum = 0.0
        for index, point in enumerate(points):
            family = index // block
            directions = 2.0 * point[: 3 * n] - 1.0
            x = directions[:n]
            c1 = directions[n : 2 * n] if family in (1, 3) else np.zeros(n)
            c2 = directions[2 * n : 3 * n] if family in (2, 3) else np.zeros(n)
            size = float(np.linalg.norm(x) + np.linalg.norm(c1) + np.linalg.norm(c2))
            radius = ball_radius * float(point[3 * n])
            if size == 0.0 or radius < M2_DENOMINATOR_FLOOR:
                continue
            scale = radius / size
            env = {"t": horizon * float(point[3 * n + 1])}
            env.update(zip(x_names, (scale * x).tolist()))
            env.update(zip(d1_names, (scale * c1).tolist()))
            env.update(zip(d2_names, (scale * c2).tolist()))
            try:
                values = [evaluate(expr, env) for expr in spec.g]
            except ExpressionError as e:
                e.add_note(f"at sample point {env}")
                raise
            supremum = max(supremum, float(np.linalg.norm(values)) / radius)
        logger.debug("estimate_M2: sup %.6g over %d samples", supremum, count)
        return supremum

    def certify(
        self,
        cls: ClosedLoopSystem,
        horizon: float,
        ball_radius: float,
        asserted_m3: float | None = None,
        samples: int | None = None,
    ) -> StabilityCertificate:
        """Check the stabilizability conditions numerically.

        The verdict is ``failed`` when some closed-loop eigenvalue has a
        nonnegative real part, ``inconclusive`` when the eigenvalue
        iteration does not converge, M cannot be estimated or the gain
        margin does not hold, and
        ``certified_numerically`` otherwise.

        Args:
            cls: Closed-loop system
            horizon: Time window of the M and M1 estimates
            ball_radius: Ball of the M2 estimate
            asserted_m3: Externally asserted M3 for the paper-literal replay
            samples: M2 sample count (default from configuration)

        Returns:
            StabilityCertificate
        """
        if not horizon > 0:
            raise DomainError("horizon", horizon, "must be > 0")
        if not ball_radius > 0:
            raise DomainError("ball_radius", ball_radius, "must be > 0")

        spec = cls.base
        notes: list[str] = []
        inv_norm_spectral = spectral_norm(cls.M_inv)
        inv_norm_paper_literal = float(np.max(np.diag(cls.M_inv)))

        spectrum: Spectrum | None
        try:
            spectrum = eigenvalues(cls.M_inv_A)
        except EigenConvergenceError as e:
            spectrum = None
            notes.append(f"eigenvalues unavailable: {e}")

        stable = spectrum is not None and spectrum.max_real_part < 0
        omega = -spectrum.max_real_part if spectrum is not None else None

        with ThreadPoolExecutor(max_workers=3) as pool:
            m1_future = pool.submit(self.estimate_M1, spec.delay_kernel, horizon)
            m2_future = pool.submit(self.estimate_M2, spec, ball_radius, samples, horizon)
            m_future = (
                pool.submit(self.estimate_M, cls.M_inv_A, omega, horizon)
                if stable and omega is not None
                else None
            )
            M1 = m1_future.result()
            M2 = m2_future.result()
            M: float | None = None
            if m_future is not None:
                try:
                    M = m_future.result()
                except MEstimationError as e:
                    notes.append(f"M unavailable: {e}")

        M3 = M * M1 * M2 if M is not None else None
        spectral_product = M3 * inv_norm_spectral if M3 is not None else None
        margin = (
            omega is not None and spectral_product is not None and omega > spectral_product
        )

        if spectrum is not None and not stable:
            verdict = Verdict.FAILED
            notes.append(f"closed-loop spectral abscissa {spectrum.max_real_part:.6g} >= 0")
        elif spectrum is None or not margin:
            verdict = Verdict.INCONCLUSIVE
            if spectral_product is not None:
                notes.append(
                    f"gain margin fails: omega={omega:.6g} <= M3*||(I-K)^-1||_2={spectral_product:.6g}"
                )
        else:
            verdict = Verdict.CERTIFIED_NUMERICALLY

        notes.append(f"M and M1 are estimated on [0, {horizon:g}]; M1 of an unbounded kernel grows with the horizon")
        notes.append(f"M2 is a sampled estimate on the ball of radius {ball_radius:g}, not a proven bound")

        paper_literal_product = None
        paper_literal_holds = None
        if asserted_m3 is not None:
            paper_literal_product = asserted_m3 * inv_norm_paper_literal
            if omega is not None:
                paper_literal_holds = omega > paper_literal_product
            notes.append(
                f"paper-literal replay: max diag (I-K)^-1 = {inv_norm_paper_literal:.6g}, "
                f"asserted M3 = {asserted_m3:g}, product = {paper_literal_product:.6g}; "
                "a diagonal entry is not an operator norm, the spectral reading governs the verdict"
            )

        logger.info(
            "Certificate %r: verdict=%s omega=%s M=%s M1=%.6g M2=%.6g",
            spec.label,
            verdict.value,
            omega,
            M,
            M1,
            M2,
        )
        return StabilityCertificate(
            label=spec.label,
            eigenvalues=spectrum.as_pairs() if spectrum is not None else None,
            max_real_part=spectrum.max_real_part if spectrum is not None else None,
            omega=omega,
            M=M,
            M1=M1,
            M2=M2,
            M3=M3,
            inv_norm_spectral=inv_norm_spectral,
            inv_norm_paper_literal=inv_norm_paper_literal,
            spectral_product=spectral_product,
            spectral_margin_holds=margin,
            paper_literal_M3=asserted_m3,
            paper_literal_product=paper_literal_product,
            paper_literal_holds=paper_literal_holds,
            verdict=verdict,
            horizon=horizon,
            ball_radius=ball_radius,
            notes=notes,
        )

    def decay_envelope(
        self,
        cert: StabilityCertificate,
        x0_norm: float,
        k1_sup: float,
        k2_sup: float,
        t: float,
    ) -> float:
        """Decay bound on ||x(t)|| implied by the certified constants.

        (M ||x0|| + M3 (e^{omega t} - 1) / omega * inv * (k1 + k2)) * e^{(M3 inv - omega) t}
        with inv = ||(I - K)^-1||_2, evaluated with the exponents folded as
        M ||x0|| e^{(g - omega) t} + g (k1 + k2) / omega * e^{g t} (1 - e^{-omega t}),
        g = M3 inv. Overflow returns +inf.

        Raises:
            DomainError: If the certificate lacks M, M3 or omega, or t < 0
        """
        if cert.M is None or cert.M3 is None or cert.omega is None or cert.omega <= 0:
            raise DomainError("decay_envelope", float("nan"), f"certificate verdict is {cert.verdict.value}")
        if t < 0:
            raise DomainError("t", t, "must be >= 0")
        gain = cert.M3 * cert.inv_norm_spectral
        value = cert.M * x0_norm * _safe_exp((gain - cert.omega) * t)
        if k1_sup + k2_sup > 0 and gain > 0:
            growth = _safe_exp(gain * t) * -math.expm1(-cert.omega * t)
            value += gain * (k1_sup + k2_sup) / cert.omega * growth
        return value if math.isfinite(value) else math.inf

    def gronwall_bound(self, gi: GronwallInstance, t: float) -> float:
        """Z * E_alpha(Gamma(alpha) u t^alpha).

        Raises:
            MittagLefflerDomainError: If the argument leaves the series domain
        """
        if t < 0:
            raise DomainError("t", t, "must be >= 0")
        z = gamma_fn(gi.alpha) * gi.u * t**gi.alpha
        return gi.Z * mittag_leffler(MLParams(alpha=gi.alpha, beta=1.0), z).value

    def perturbation_bound(self, M: float, w: float, normB: float, t: float) -> float:
        """M e^{(w + M ||B||) t}; overflow returns +inf."""
        if M < 1:
            raise DomainError("M", M, "must be >= 1")
        if normB < 0:
            raise DomainError("normB", normB, "must be >= 0")
        if t < 0:
            raise DomainError("t", t, "must be >= 0")
        return M * _safe_exp((w + M * normB) * t)

    def fit_semigroup_constants(self, m: Mat, horizon: float) -> tuple[float, float]:
        """Fit (M, w) with ||e^{mt}|| <= M e^{wt} on [0, horizon], w = -0.99 omega."""
        spectrum = eigenvalues(m)
        if not spectrum.max_real_part < 0:
            raise DomainError("spectral abscissa", spectrum.max_real_part, "matrix must be stable")
        omega = -spectrum.max_real_part
        return self.estimate_M(m, omega, horizon), -OMEGA_SHRINK * omega


# Singleton instance
_stability_service: StabilityService | None = None


def get_stability_service() -> StabilityService:
    """Get the global stability service instance."""
    global _stability_service
    if _stability_service is None:
        _stability_service = StabilityService()
    return _stability_service
