"""Main CLI application for Fracstab.

Defines the Typer app and registers all commands.
"""

import typer

from fracstab import __version__
from fracstab.utils.display import configure_logging, print_info

# Main application
app = typer.Typer(
    name="fracstab",
    help="Fracstab - stabilizability toolkit for fractional nonlinear control systems",
    no_args_is_help=True,
    rich_markup_mode="rich",
)


def version_callback(value: bool) -> None:
    """Display version and exit."""
    if value:
        print_info(f"Fracstab version {__version__}")
        raise typer.Exit()


@app.callback()
def main(
    version: bool = typer.Option(
        None,
        "--version",
        help="Show version and exit.",
        callback=version_callback,
        is_eager=True,
    ),
    verbose: bool = typer.Option(
        False,
        "--verbose",
        "-v",
        help="Log numerical progress on the error stream.",
    ),
) -> None:
    """Fracstab - stabilizability toolkit for fractional nonlinear control systems.

    Simulates systems mixing first-order dynamics with Caputo derivatives and
    a time-dependent nonlinear gain, and certifies local asymptotic
    stabilizability under state-derivative feedback. Data goes to standard
    output or files, diagnostics to standard error.
    """
    configure_logging(verbose)


def register_commands() -> None:
    """Register all CLI commands."""
    # Import here to avoid circular imports
    from fracstab.cli import check_cmd, example_cmd, mlf_cmd, simulate_cmd, sweep_cmd

    app.command(name="check")(check_cmd.check)
    app.command(name="simulate")(simulate_cmd.simulate)
    app.command(name="example")(example_cmd.example)
    app.command(name="mlf")(mlf_cmd.mlf)
    app.command(name="gamma")(mlf_cmd.gamma)
    app.command(name="sweep")(sweep_cmd.sweep)


# Register commands when module is loaded
register_commands()


if __name__ == "__main__":
    app()
