"""Input validation helpers for Fracstab.

Provides parsing of command-line lists, catalog variant names and dotted
parameter paths into system-spec documents.
"""

import copy
import math
from typing import Any

from fracstab.models.enums import LoopKind, NonlinearityForm
from fracstab.models.exceptions import ParameterPathError


def parse_csv_floats(text: str) -> list[float]:
    """Parse a comma-separated list of finite reals.

    Args:
        text: Input such as "0.5, 0.5, 0.5"

    Returns:
        List of floats (empty for blank input)

    Raises:
        ValueError: If an item is not a finite real
    """
    values: list[float] = []
    for item in text.split(","):
        stripped = item.strip()
        if not stripped:
            if text.strip():
                raise ValueError(f"empty item in list {text!r}")
            continue
        value = float(stripped)
        if not math.isfinite(value):
            raise ValueError(f"{stripped!r} is not finite")
        values.append(value)
    return values


def parse_variant(text: str) -> tuple[LoopKind, NonlinearityForm]:
    """Parse a catalog variant written as ``loop/form``.

    Args:
        text: e.g. "closed/as-printed" or "open/power-rule-exact"

    Returns:
        Tuple of (loop kind, nonlinearity form)

    Raises:
        ValueError: If the text names no catalog variant
    """
    loop_text, sep, form_text = text.strip().partition("/")
    if not sep:
        raise ValueError(f"variant {text!r} must be written as loop/form")
    try:
        return LoopKind(loop_text), NonlinearityForm(form_text)
    except ValueError:
        loops = ", ".join(kind.value for kind in LoopKind)
        forms = ", ".join(form.value for form in NonlinearityForm)
        raise ValueError(f"unknown variant {text!r}; loop is one of {loops}, form one of {forms}") from None


def _step(node: Any, part: str, path: str) -> tuple[Any, str | int]:
    if isinstance(node, dict):
        if part not in node:
            raise ParameterPathError(path, f"no key '{part}'")
        return node[part], part
    if isinstance(node, list):
        try:
            index = int(part)
        except ValueError:
            raise ParameterPathError(path, f"'{part}' is not a list index") from None
        if not 0 <= index < len(node):
            raise ParameterPathError(path, f"index {index} out of range")
        return node[index], index
    raise ParameterPathError(path, f"cannot descend into a scalar at '{part}'")


def get_parameter(doc: dict[str, Any], path: str) -> float:
    """Read the numeric scalar addressed by a dotted path.

    Integer parts index into lists, e.g. ``A.0.1`` or ``sim.divergence_cap``.

    Raises:
        ParameterPathError: If the path is empty, missing or not numeric
    """
    if not path.strip():
        raise ParameterPathError(path, "empty path")
    node: Any = doc
    for part in path.split("."):
        node, _ = _step(node, part, path)
    if isinstance(node, bool) or not isinstance(node, (int, float)):
        raise ParameterPathError(path, f"addresses {type(node).__name__}, not a number")
    return float(node)


def set_parameter(doc: dict[str, Any], path: str, value: float) -> dict[str, Any]:
    """Copy of the document with the addressed scalar replaced.

    Raises:
        ParameterPathError: As ``get_parameter``
    """
    get_parameter(doc, path)
    updated = copy.deepcopy(doc)
    parts = path.split(".")
    node: Any = updated
    for part in parts[:-1]:
        node, _ = _step(node, part, path)
    _, key = _step(node, parts[-1], path)
    node[key] = value
    return updated
