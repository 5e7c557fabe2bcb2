"""Rich formatting helpers for Fracstab.

Provides consistent terminal UI components and logging using the Rich library.
Everything printed here goes to ``err_console`` on stderr; data is written
with ``typer.echo`` or to files.
"""

import logging

from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table
from rich.theme import Theme

# Custom theme for Fracstab
FRACSTAB_THEME = Theme(
    {
        "info": "cyan",
        "success": "green",
        "warning": "yellow",
        "error": "red bold",
        "highlight": "magenta",
        "dim": "dim white",
        "verdict": "bold cyan",
        "number": "green",
    }
)

# Diagnostics console with custom theme
err_console = Console(theme=FRACSTAB_THEME, stderr=True)


def configure_logging(verbose: bool = False) -> None:
    """Route package loggers through a Rich handler on stderr.

    Args:
        verbose: Enable DEBUG level instead of WARNING
    """
    logger = logging.getLogger("fracstab")
    logger.handlers.clear()
    handler = RichHandler(console=err_console, show_path=False, markup=False)
    handler.setFormatter(logging.Formatter("%(message)s"))
    logger.addHandler(handler)
    logger.setLevel(logging.DEBUG if verbose else logging.WARNING)
    logger.propagate = False


def print_success(message: str) -> None:
    """Print a success message."""
    err_console.print(f"[success]✓[/success] {message}")


def print_error(message: str) -> None:
    """Print an error message."""
    err_console.print(f"[error]✗[/error] {message}")


def print_warning(message: str) -> None:
    """Print a warning message."""
    err_console.print(f"[warning]⚠[/warning] {message}")


def print_info(message: str) -> None:
    """Print an info message."""
    err_console.print(f"[info]ℹ[/info] {message}")


def create_table(title: str, columns: list[tuple[str, str]]) -> Table:
    """Create a styled table.

    Args:
        title: Table title
        columns: List of (name, style) tuples for columns

    Returns:
        Configured Rich Table instance
    """
    table = Table(title=title, show_header=True, header_style="bold")
    for name, style in columns:
        table.add_column(name, style=style)
    return table


def format_constants_table(constants: dict[str, float]) -> Table:
    """Format estimated constants as a two-column table.

    Args:
        constants: Mapping of constant name to value

    Returns:
        Formatted Rich Table
    """
    table = create_table("Estimated constants", [("Constant", "highlight"), ("Value", "number")])
    for name, value in constants.items():
        table.add_row(name, f"{value:.6g}")
    return table
