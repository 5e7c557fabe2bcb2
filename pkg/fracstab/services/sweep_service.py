"""Sweep service for Fracstab.

Certifies and simulates a family of systems that differ in one scalar of
the system-spec document. Rows share nothing and may run in worker processes.
"""

import logging
from dataclasses import dataclass
from multiprocessing import Pool
from typing import Any

from fracstab.models.enums import Outcome, Verdict
from fracstab.models.exceptions import FracstabError, ParameterPathError
from fracstab.services.model_service import get_model_service
from fracstab.services.simulation_service import get_simulation_service
from fracstab.services.stability_service import get_stability_service
from fracstab.utils.validation import get_parameter, set_parameter

logger = logging.getLogger(__name__)

SWEEP_COLUMNS = ["value", "verdict", "omega", "M3", "outcome", "final_norm"]

# Verdict or outcome cell of a row whose certificate or simulation raised
ERROR_CELL = "error"


@dataclass(frozen=True)
class SweepRow:
    """Certificate and simulation summary for one parameter value.

    A row whose certificate failed to compute has no verdict; a row whose
    simulation failed has no outcome. ``error`` holds the message.
    """

    value: float
    verdict: Verdict | None
    omega: float | None
    M3: float | None
    outcome: Outcome | None
    final_norm: float | None
    error: str | None = None

    def as_csv_row(self) -> list[str]:
        """Cells in ``SWEEP_COLUMNS`` order."""

        def number(x: float | None) -> str:
            return "" if x is None else f"{x:.15g}"

        return [
            number(self.value),
            ERROR_CELL if self.verdict is None else self.verdict.value,
            number(self.omega),
            number(self.M3),
            ERROR_CELL if self.outcome is None else self.outcome.value,
            number(self.final_norm),
        ]


@dataclass(frozen=True)
class SweepTask:
    """Picklable input of one sweep row."""

    doc: dict[str, Any]
    value: float
    horizon: float
    ball_radius: float


def run_sweep_row(task: SweepTask) -> SweepRow:
    """Load, certify and simulate one swept document.

    Errors become an error row so the other values still run.
    """
    model = get_model_service()
    try:
        spec = model.load_spec(task.doc)
        cls = model.close_loop(spec)
        cert = get_stability_service().certify(cls, task.horizon, task.ball_radius)
    except FracstabError as e:
        logger.warning("Sweep value %g: certificate failed: %s", task.value, e)
        return SweepRow(task.value, None, None, None, None, None, error=str(e))
    try:
        traj = get_simulation_service().integrate(cls, spec.sim)
    except FracstabError as e:
        logger.warning("Sweep value %g: simulation failed: %s", task.value, e)
        return SweepRow(task.value, cert.verdict, cert.omega, cert.M3, None, None, error=str(e))
    return SweepRow(
        value=task.value,
        verdict=cert.verdict,
        omega=cert.omega,
        M3=cert.M3,
        outcome=traj.outcome,
        final_norm=traj.final_norm,
    )


class SweepService:
    """Service for one-parameter sweeps over a spec document."""

    def sweep(
        self,
        doc: dict[str, Any],
        path: str,
        values: list[float],
        horizon: float,
        ball_radius: float,
        workers: int = 1,
    ) -> list[SweepRow]:
        """Run one row per value, in value order.

        Args:
            doc: Base system-spec document
            path: Dotted path of the swept scalar
            values: Values to substitute
            horizon: Certificate horizon
            ball_radius: Certificate ball radius
            workers: Worker processes (1 runs in-process)

        Returns:
            Rows in the order of ``values``; a value whose certificate or
            simulation raises gives an error row

        Raises:
            ParameterPathError: If the path is invalid or values is empty
        """
        get_parameter(doc, path)
        if not values:
            raise ParameterPathError(path, "no values to sweep")
        tasks = [
            SweepTask(doc=set_parameter(doc, path, value), value=value, horizon=horizon, ball_radius=ball_radius)
            for value in values
        ]
        logger.info("Sweeping %s over %d values with %d worker(s)", path, len(values), workers)
        if workers > 1 and len(tasks) > 1:
            with Pool(processes=min(workers, len(tasks))) as pool:
                return pool.map(run_sweep_row, tasks)
        return [run_sweep_row(task) for task in tasks]


# Singleton instance
_sweep_service: SweepService | None = None


def get_sweep_service() -> SweepService:
    """Get the global sweep service instance."""
    global _sweep_service
    if _sweep_service is None:
        _sweep_service = SweepService()
    return _sweep_service
