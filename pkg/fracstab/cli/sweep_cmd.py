"""Sweep command for Fracstab.

Implements 'fracstab sweep': certify and simulate a spec for each value of
one scalar parameter.
"""

from pathlib import Path
from typing import Optional

import typer
from rich.markup import escape

from fracstab.cli.common import exit_with, fail, usage_error
from fracstab.models.enums import ExitStatus
from fracstab.models.exceptions import FracstabError
from fracstab.services.model_service import get_model_service
from fracstab.services.sweep_service import get_sweep_service
from fracstab.utils.config import get_numerics_config
from fracstab.utils.display import create_table, err_console, print_error, print_success
from fracstab.utils.export import write_sweep_csv
from fracstab.utils.validation import parse_csv_floats


def sweep(
    spec_path: Path = typer.Argument(
        ...,
        help="Base system-spec JSON document",
    ),
    param: str = typer.Option(
        ...,
        "--param",
        help="Dotted path of the swept scalar, e.g. alpha2 or A.0.1",
    ),
    values: str = typer.Option(
        ...,
        "--values",
        help="Comma-separated values",
    ),
    csv_path: Optional[Path] = typer.Option(
        None,
        "--csv",
        help="Sweep CSV path (default: standard output)",
    ),
    horizon: float = typer.Option(
        40.0,
        "--horizon",
        help="Certificate horizon",
    ),
    ball: float = typer.Option(
        0.5,
        "--ball",
        help="Certificate ball radius",
    ),
    workers: Optional[int] = typer.Option(
        None,
        "--workers",
        help="Worker processes (default: FRACSTAB_WORKERS)",
    ),
) -> None:
    """Run one certificate and one simulation per parameter value.

    Rows are independent and are written once, in value order, after the
    last one finishes. A value whose certificate or simulation raises gives
    an error row and makes the command exit 3 after writing the CSV.
    """
    try:
        swept = parse_csv_floats(values)
    except ValueError as e:
        usage_error(f"--values: {e}")
    if not swept:
        usage_error("--values is empty")
    if not horizon > 0 or not ball > 0:
        usage_error("--horizon and --ball must be > 0")
    if workers is None:
        workers = get_numerics_config().workers
    if workers < 1:
        usage_error("--workers must be >= 1")

    model_service = get_model_service()
    try:
        doc = model_service.read_document(spec_path)
        model_service.load_spec(doc)
        rows = get_sweep_service().sweep(doc, param, swept, horizon, ball, workers)
    except FracstabError as e:
        fail(e)

    write_sweep_csv(rows, csv_path)

    table = create_table(f"Sweep of {param}", [("value", "highlight"), ("verdict", "verdict"), ("outcome", "number")])
    for row in rows:
        cells = row.as_csv_row()
        table.add_row(cells[0], cells[1], cells[4])
    err_console.print(table)

    failed = [row for row in rows if row.error is not None]
    for row in failed:
        print_error(escape(f"{row.value:g}: {row.error}"))
    if failed:
        exit_with(ExitStatus.NUMERICAL)
    print_success(f"{len(rows)} rows")
