"""Check command for Fracstab.

Implements 'fracstab check': certify a system spec and write the report.
"""

from pathlib import Path
from typing import Optional

import typer
from rich.markup import escape

from fracstab.catalog.stabilization_example import (
    ASSERTED_M3,
    PRINTED_KERNEL,
    get_replay_notes,
    is_catalog_label,
)
from fracstab.cli.common import exit_with, fail, usage_error
from fracstab.expr import parse
from fracstab.models.certificate import StabilityCertificate
from fracstab.models.enums import ExitStatus, ReportMode, Verdict
from fracstab.models.exceptions import FracstabError
from fracstab.services.model_service import get_model_service
from fracstab.services.stability_service import get_stability_service
from fracstab.utils.display import err_console, format_constants_table, print_success, print_warning
from fracstab.utils.export import write_certificate


def check(
    spec_path: Path = typer.Argument(
        ...,
        help="System-spec JSON document",
    ),
    horizon: float = typer.Option(
        40.0,
        "--horizon",
        help="Time window of the M and M1 estimates",
    ),
    ball: float = typer.Option(
        0.5,
        "--ball",
        help="Radius of the M2 sampling ball",
    ),
    mode: ReportMode = typer.Option(
        ReportMode.BOTH,
        "--mode",
        help="Gain-margin readings to report",
    ),
    asserted_m3: float = typer.Option(
        ASSERTED_M3,
        "--asserted-m3",
        help="Asserted M3 for the paper-literal replay",
    ),
    out: Optional[Path] = typer.Option(
        None,
        "--out",
        "-o",
        help="Report path (default: standard output)",
    ),
) -> None:
    """Certify local asymptotic stabilizability of a system spec.

    Exits 0 when the spectral verdict is certified_numerically, 1 when a
    condition fails, 2 on input errors and 3 on numerical errors.
    """
    if not horizon > 0 or not ball > 0:
        usage_error("--horizon and --ball must be > 0")

    model_service = get_model_service()
    stability_service = get_stability_service()
    replay = mode in (ReportMode.PAPER_LITERAL, ReportMode.BOTH)

    try:
        spec = model_service.load_spec_file(spec_path)
        cls = model_service.close_loop(spec)
        cert = stability_service.certify(
            cls,
            horizon=horizon,
            ball_radius=ball,
            asserted_m3=asserted_m3 if replay else None,
        )
        if replay and is_catalog_label(spec.label):
            printed_sup = stability_service.estimate_M1(parse(PRINTED_KERNEL), horizon)
            real_parts = [re for re, _ in cert.eigenvalues] if cert.eigenvalues is not None else None
            cert.notes.extend(
                get_replay_notes(real_parts, cert.inv_norm_paper_literal, printed_sup, horizon)
            )
    except FracstabError as e:
        fail(e)

    write_certificate(cert, out, mode)
    _display_summary(cert, mode)

    if cert.eigenvalues is None:
        exit_with(ExitStatus.NUMERICAL)
    if cert.verdict != Verdict.CERTIFIED_NUMERICALLY:
        exit_with(ExitStatus.FAILED)


def _display_summary(cert: StabilityCertificate, mode: ReportMode) -> None:
    """Show constants and verdicts on the error stream."""
    err_console.print(format_constants_table(cert.constants()))
    if mode in (ReportMode.SPECTRAL, ReportMode.BOTH) and cert.spectral_product is not None:
        err_console.print(
            f"spectral margin: omega = {cert.omega:.6g} "
            f"{'>' if cert.spectral_margin_holds else '<='} "
            f"M3 * ||(I-K)^-1||_2 = {cert.spectral_product:.6g}"
        )
    if mode in (ReportMode.PAPER_LITERAL, ReportMode.BOTH) and cert.paper_literal_product is not None:
        err_console.print(
            f"paper-literal replay: M3 * max diag (I-K)^-1 = {cert.paper_literal_product:.6g}, "
            f"holds: {cert.paper_literal_holds}"
        )
    for note in cert.notes:
        err_console.print(f"[dim]- {escape(note)}[/dim]")
    if cert.verdict == Verdict.CERTIFIED_NUMERICALLY:
        print_success(f"Verdict: {cert.verdict.value}")
    else:
        print_warning(f"Verdict: {cert.verdict.value}")
