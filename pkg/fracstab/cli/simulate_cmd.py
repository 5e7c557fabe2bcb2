"""Simulate command for Fracstab.

Implements 'fracstab simulate': integrate a system spec and write the
trajectory as CSV and optionally as an SVG line plot.
"""

from pathlib import Path
from typing import Optional

import numpy as np
import typer

from fracstab.cli.common import exit_with, fail, usage_error
from fracstab.models.enums import ExitStatus, Outcome
from fracstab.models.exceptions import FracstabError, SimulationAbortedError
from fracstab.models.trajectory import Trajectory
from fracstab.services.model_service import get_model_service
from fracstab.services.simulation_service import get_simulation_service, make_sim_config
from fracstab.utils.display import print_info, print_success, print_warning
from fracstab.utils.export import write_trajectory_csv, write_trajectory_svg
from fracstab.utils.validation import parse_csv_floats


def simulate(
    spec_path: Path = typer.Argument(
        ...,
        help="System-spec JSON document",
    ),
    t_end: Optional[float] = typer.Option(
        None,
        "--t-end",
        help="Final time (overrides sim.t_end)",
    ),
    dt: Optional[float] = typer.Option(
        None,
        "--dt",
        help="Step size (overrides sim.dt)",
    ),
    x0: Optional[str] = typer.Option(
        None,
        "--x0",
        help="Initial state as a comma-separated list (overrides x0)",
    ),
    csv_path: Optional[Path] = typer.Option(
        None,
        "--csv",
        help="Trajectory CSV path (default: standard output)",
    ),
    svg_path: Optional[Path] = typer.Option(
        None,
        "--svg",
        help="Optional SVG line plot path",
    ),
    stride: Optional[int] = typer.Option(
        None,
        "--stride",
        help="Record every k-th step (overrides sim.record_stride)",
    ),
) -> None:
    """Integrate a system spec with fixed-step Heun steps.

    Exits 0 when the run converges or completes, 1 when it crosses the
    divergence cap, 2 on input errors and 3 when an expression fails
    mid-run (the partial trajectory is still written).
    """
    model_service = get_model_service()
    simulation_service = get_simulation_service()

    try:
        spec = model_service.load_spec_file(spec_path)
        cfg = make_sim_config(spec.sim, t_end=t_end, dt=dt, record_stride=stride)
    except FracstabError as e:
        fail(e)

    initial = None
    if x0 is not None:
        try:
            values = parse_csv_floats(x0)
        except ValueError as e:
            usage_error(f"--x0: {e}")
        if len(values) != spec.n:
            usage_error(f"--x0 has {len(values)} components, the system has {spec.n}")
        initial = np.array(values)

    try:
        cls = model_service.close_loop(spec)
        trajectory = simulation_service.integrate(cls, cfg, initial)
    except SimulationAbortedError as e:
        if isinstance(e.partial, Trajectory):
            write_trajectory_csv(e.partial, csv_path)
            print_warning(f"Partial trajectory of {e.partial.times.size} rows written")
        fail(e)
    except FracstabError as e:
        fail(e)

    write_trajectory_csv(trajectory, csv_path)
    if svg_path is not None:
        write_trajectory_svg(trajectory, svg_path, title=spec.label)
        print_info(f"Plot written to {svg_path}")

    summary = f"{trajectory.outcome.value} at t={trajectory.times[-1]:.6g}, final norm {trajectory.final_norm:.6g}"
    if trajectory.outcome == Outcome.DIVERGED:
        print_warning(summary)
        exit_with(ExitStatus.FAILED)
    print_success(summary)
