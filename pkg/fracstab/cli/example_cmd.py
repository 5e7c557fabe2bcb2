"""Example command for Fracstab.

Implements 'fracstab example': emit a catalog variant of the built-in
stabilization example as a system-spec document.
"""

import json
from pathlib import Path
from typing import Optional

import typer

from fracstab.cli.common import fail, usage_error
from fracstab.models.enums import ThirdExponent
from fracstab.models.exceptions import FracstabError
from fracstab.services.model_service import get_model_service
from fracstab.utils.display import print_success
from fracstab.utils.validation import parse_variant


def example(
    variant: str = typer.Option(
        "closed/as-printed",
        "--variant",
        help="Catalog variant: {open,closed}/{as-printed,power-rule-exact}",
    ),
    emit_spec: Optional[Path] = typer.Option(
        None,
        "--emit-spec",
        help="Document path (default: standard output)",
    ),
    third_exponent: ThirdExponent = typer.Option(
        ThirdExponent.TWO_FIFTHS,
        "--third-exponent",
        help="Exponent of x2 in the third nonlinearity component",
    ),
) -> None:
    """Emit the built-in stabilization example as a system spec.

    The document is exactly what 'fracstab check' and 'fracstab simulate'
    accept.
    """
    try:
        loop, form = parse_variant(variant)
    except ValueError as e:
        usage_error(str(e))

    model_service = get_model_service()
    try:
        spec = model_service.builtin_example(loop, form, third_exponent)
    except FracstabError as e:
        fail(e)

    text = json.dumps(model_service.serialize_spec(spec), indent=2) + "\n"
    if emit_spec is None:
        typer.echo(text, nl=False)
    else:
        emit_spec.write_text(text, encoding="utf-8")
        print_success(f"Wrote {spec.label} to {emit_spec}")
