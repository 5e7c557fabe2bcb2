"""Special-function commands for Fracstab.

Implements 'fracstab mlf' and 'fracstab gamma'.
"""

import typer

from fracstab.cli.common import fail, usage_error
from fracstab.models.exceptions import DomainError, FracstabError
from fracstab.numerics.specfun import MLParams, gamma_fn, mittag_leffler


def mlf(
    alpha: float = typer.Option(
        ...,
        "--alpha",
        help="Series parameter alpha > 0",
    ),
    beta: float = typer.Option(
        1.0,
        "--beta",
        help="Series parameter beta > 0",
    ),
    z: float = typer.Option(
        ...,
        "--z",
        help="Real argument, |z| <= 50",
    ),
) -> None:
    """Evaluate the Mittag-Leffler function E_{alpha,beta}(z).

    Prints the value and the truncation bound on one line.
    """
    try:
        params = MLParams(alpha=alpha, beta=beta)
    except DomainError as e:
        usage_error(str(e))

    try:
        report = mittag_leffler(params, z)
    except FracstabError as e:
        fail(e)

    typer.echo(f"{report.value!r} {report.truncation_bound!r}")


def gamma(
    x: float = typer.Option(
        ...,
        "--x",
        help="Real argument, not a nonpositive integer",
    ),
) -> None:
    """Evaluate the Gamma function."""
    try:
        value = gamma_fn(x)
    except FracstabError as e:
        fail(e)
    typer.echo(repr(value))
