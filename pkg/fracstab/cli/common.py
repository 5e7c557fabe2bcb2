"""Shared command helpers for Fracstab.

Maps the exception hierarchy onto process exit codes and prints diagnostics
on the error stream.
"""

from typing import NoReturn

import typer
from rich.markup import escape

from fracstab.models.enums import ExitStatus
from fracstab.models.exceptions import FracstabError, SpecError, SpecValidationError
from fracstab.utils.display import err_console, print_error


def status_for(error: FracstabError) -> ExitStatus:
    """Exit code for a library error: input errors 2, everything else 3."""
    if isinstance(error, SpecError):
        return ExitStatus.USAGE
    return ExitStatus.NUMERICAL


def exit_with(status: ExitStatus) -> NoReturn:
    """Leave the command with an exit status."""
    raise typer.Exit(int(status))


def fail(error: FracstabError) -> NoReturn:
    """Print an error with its field errors and notes, then exit accordingly."""
    if isinstance(error, SpecValidationError):
        print_error("Invalid system spec")
        for line in error.errors:
            err_console.print(f"  [error]•[/error] {escape(line)}")
    else:
        print_error(escape(str(error)))
    for note in getattr(error, "__notes__", []):
        err_console.print(f"  [dim]{escape(note)}[/dim]")
    exit_with(status_for(error))


def usage_error(message: str) -> NoReturn:
    """Print a usage error and exit with code 2."""
    print_error(escape(message))
    exit_with(ExitStatus.USAGE)
