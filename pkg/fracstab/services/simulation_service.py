"""Simulation service for Fracstab.

Fixed-step Heun integration of closed-loop systems. When the nonlinearity
reads Caputo derivatives (d1_i, d2_i) their L1 estimates are advanced on-line
with the state; otherwise the derivative tracks are computed after the run
from the full-resolution history.
"""

import logging
import math
from dataclasses import dataclass, replace
from typing import Any

import numpy as np
from numpy.typing import NDArray
from pydantic import ValidationError

from fracstab.models.certificate import StabilityCertificate
from fracstab.models.enums import Outcome
from fracstab.models.exceptions import (
    DomainError,
    ExpressionError,
    NumericalError,
    SimulationAbortedError,
    SpecValidationError,
)
from fracstab.models.system import MAX_HISTORY_STEPS, ClosedLoopSystem, SimConfig
from fracstab.models.trajectory import Trajectory
from fracstab.numerics.fracderiv import CaputoOrder, L1History, SampledFn, caputo_l1_track
from fracstab.services.model_service import get_model_service
from fracstab.services.stability_service import get_stability_service

logger = logging.getLogger(__name__)

FloatArray = NDArray[np.float64]

# Final norm at or below this fraction of the initial norm counts as converged
CONVERGENCE_FRACTION = 1e-3


@dataclass(frozen=True)
class EnvelopeCheck:
    """Result of comparing a trajectory with the certified decay envelope."""

    holds: bool
    violated_at: float | None = None


def make_sim_config(base: SimConfig, **overrides: Any) -> SimConfig:
    """Apply non-None overrides to simulation settings with validation.

    Raises:
        SpecValidationError: If the resulting settings are invalid
    """
    values = base.model_dump()
    values.update({key: value for key, value in overrides.items() if value is not None})
    try:
        return SimConfig.model_validate(values)
    except ValidationError as e:
        errors = []
        for item in e.errors():
            path = ".".join(str(part) for part in item["loc"])
            errors.append(f"sim.{path}: {item['msg']}" if path else f"sim: {item['msg']}")
        raise SpecValidationError(errors) from e


class SimulationService:
    """Service for integrating closed-loop systems."""

    def integrate(
        self,
        cls: ClosedLoopSystem,
        cfg: SimConfig,
        x0: FloatArray | None = None,
    ) -> Trajectory:
        """Integrate x' = rhs(t, x, c1, c2) with a Heun predictor-corrector.

        The predictor is an explicit Euler step with the current derivative
        estimates; the Caputo estimates at the predicted point reuse the
        frozen history sum of the accepted states. The run stops at the
        divergence cap, and the crossing step is the last recorded row.

        Args:
            cls: Closed-loop system
            cfg: Simulation settings
            x0: Initial state (default: the document's x0)

        Returns:
            Trajectory sampled every ``record_stride`` steps

        Raises:
            SpecValidationError: If g reads Caputo derivatives and the run
                exceeds the step limit of the on-line history
            SimulationAbortedError: On an evaluation error, with the partial trajectory
        """
        spec = cls.base
        n = spec.n
        dt = cfg.dt
        n_steps = cfg.n_steps
        online = cls.uses_history
        if online and n_steps > MAX_HISTORY_STEPS:
            raise SpecValidationError(
                [f"sim: {n_steps} steps exceed {MAX_HISTORY_STEPS} for a nonlinearity with Caputo terms"]
            )

        rhs = get_model_service().make_rhs(cls)
        state = np.array(spec.x0 if x0 is None else x0, dtype=float)
        if state.shape != (n,):
            raise DomainError("x0", float(state.size), f"expected {n} components")

        states = np.empty((n_steps + 1, n))
        states[0] = state
        c1_norms = np.zeros(n_steps + 1) if online else None
        c2_norms = np.zeros(n_steps + 1) if online else None
        hist1 = L1History(spec.alpha1, dt, n, n_steps) if online else None
        hist2 = L1History(spec.alpha2, dt, n, n_steps) if online else None
        c1 = np.zeros(n)
        c2 = np.zeros(n)
        outcome = Outcome.COMPLETED
        last = n_steps

        logger.debug("Integrating %r: %d steps of %g (online history: %s)", spec.label, n_steps, dt, online)
        for k in range(n_steps):
            t = k * dt
            try:
                slope = rhs(t, state, c1, c2)
                predicted = state + dt * slope
                if hist1 is not None and hist2 is not None:
                    history1 = hist1.history_sum()
                    history2 = hist2.history_sum()
                    c1_pred = hist1.value_with(history1, predicted - state)
                    c2_pred = hist2.value_with(history2, predicted - state)
                else:
                    c1_pred, c2_pred = c1, c2
                corrector = rhs((k + 1) * dt, predicted, c1_pred, c2_pred)
            except (ExpressionError, NumericalError) as e:
                partial = self._build(states, k, cfg, c1_norms, c2_norms, spec.alpha1, spec.alpha2)
                logger.debug("Integration aborted at step %d: %s", k, e)
                raise SimulationAbortedError(k, e, partial) from e

            new_state = state + 0.5 * dt * (slope + corrector)
            if hist1 is not None and hist2 is not None and c1_norms is not None and c2_norms is not None:
                increment = new_state - state
                c1 = hist1.value_with(history1, increment)
                c2 = hist2.value_with(history2, increment)
                hist1.accept(increment)
                hist2.accept(increment)
                c1_norms[k + 1] = math.hypot(*c1)
                c2_norms[k + 1] = math.hypot(*c2)
            states[k + 1] = new_state
            state = new_state

            norm = math.hypot(*state)
            if not math.isfinite(norm) or norm > cfg.divergence_cap:
                outcome = Outcome.DIVERGED
                last = k + 1
                logger.info("Diverged at step %d (t=%g, norm=%g)", last, last * dt, norm)
                break

        trajectory = self._build(states, last, cfg, c1_norms, c2_norms, spec.alpha1, spec.alpha2, outcome)
        if outcome == Outcome.COMPLETED:
            initial = float(np.linalg.norm(states[0]))
            if trajectory.final_norm <= CONVERGENCE_FRACTION * initial:
                trajectory = replace(trajectory, outcome=Outcome.CONVERGED)
        logger.info(
            "Simulation of %r: %s after %d steps, final norm %.6g",
            spec.label,
            trajectory.outcome.value,
            trajectory.stop_step,
            trajectory.final_norm,
        )
        return trajectory

    @staticmethod
    def _build(
        states: FloatArray,
        last: int,
        cfg: SimConfig,
        c1_norms: FloatArray | None,
        c2_norms: FloatArray | None,
        alpha1: CaputoOrder,
        alpha2: CaputoOrder,
        outcome: Outcome = Outcome.COMPLETED,
    ) -> Trajectory:
        """Assemble recorded rows from the full-resolution history up to step ``last``."""
        history = states[: last + 1]
        if c1_norms is not None and c2_norms is not None:
            k1_full = c1_norms[: last + 1]
            k2_full = c2_norms[: last + 1]
        else:
            k1_full = SimulationService._track_norms(history, cfg.dt, alpha1)
            k2_full = SimulationService._track_norms(history, cfg.dt, alpha2)

        steps = np.arange(0, last + 1, cfg.record_stride)
        if steps[-1] != last and outcome == Outcome.DIVERGED:
            steps = np.append(steps, last)
        recorded = history[steps]
        with np.errstate(over="ignore", invalid="ignore"):
            norms = np.linalg.norm(recorded, axis=1)
        norms = np.where(np.isfinite(norms), norms, math.inf)
        return Trajectory(
            times=steps * cfg.dt,
            states=recorded,
            norm_track=norms,
            k1_track=k1_full[steps],
            k2_track=k2_full[steps],
            outcome=outcome,
            final_state=history[-1].copy(),
            stop_step=last,
        )

    @staticmethod
    def _track_norms(history: FloatArray, dt: float, order: CaputoOrder) -> FloatArray:
        """Norm of the componentwise L1 Caputo track of a state history.

        Rows after the first non-finite state get +inf.
        """
        finite = np.all(np.isfinite(history), axis=1)
        count = history.shape[0] if finite.all() else int(np.argmin(finite))
        tracks = np.full(history.shape[0], math.inf)
        tracks[0] = 0.0
        if count >= 2:
            columns = [
                caputo_l1_track(SampledFn(h=dt, values=history[:count, i]), order).values
                for i in range(history.shape[1])
            ]
            tracks[:count] = np.linalg.norm(np.column_stack(columns), axis=1)
        return tracks

    def check_envelope(
        self,
        traj: Trajectory,
        cert: StabilityCertificate,
        slack: float = 1.0,
    ) -> EnvelopeCheck:
        """Compare the norm track with slack times the certified decay envelope.

        The envelope uses the trajectory's initial norm and the suprema of
        its Caputo tracks.

        Raises:
            DomainError: If slack < 1 or the certificate is not certified
        """
        if slack < 1:
            raise DomainError("slack", slack, "must be >= 1")
        if not cert.is_certified:
            raise DomainError("check_envelope", float("nan"), f"certificate verdict is {cert.verdict.value}")
        stability = get_stability_service()
        x0_norm = traj.initial_norm
        k1_sup = traj.k1_sup
        k2_sup = traj.k2_sup
        for t, norm in zip(traj.times.tolist(), traj.norm_track.tolist()):
            bound = stability.decay_envelope(cert, x0_norm, k1_sup, k2_sup, t)
            if norm > slack * bound:
                return EnvelopeCheck(holds=False, violated_at=t)
        return EnvelopeCheck(holds=True)

    def step_refinement_error(self, cls: ClosedLoopSystem, cfg: SimConfig) -> float:
        """Max-norm difference between runs at dt and dt/2 on the shared grid."""
        coarse_cfg = make_sim_config(cfg, record_stride=1)
        fine_cfg = make_sim_config(cfg, dt=cfg.dt / 2, record_stride=1)
        coarse = self.integrate(cls, coarse_cfg)
        fine = self.integrate(cls, fine_cfg)
        shared = min(coarse.states.shape[0], (fine.states.shape[0] + 1) // 2)
        if shared == 0:
            return 0.0
        difference = coarse.states[:shared] - fine.states[: 2 * shared : 2]
        return float(np.max(np.abs(difference)))


# Singleton instance
_simulation_service: SimulationService | None = None


def get_simulation_service() -> SimulationService:
    """Get the global simulation service instance."""
    global _simulation_service
    if _simulation_service is None:
        _simulation_service = SimulationService()
    return _simulation_service
