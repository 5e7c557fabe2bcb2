"""Shared pytest fixtures for Fracstab tests."""

import json
import tempfile
from collections.abc import Callable
from pathlib import Path
from typing import Any, Generator

import pytest

from fracstab.catalog.stabilization_example import get_example_document
from fracstab.models.enums import LoopKind, NonlinearityForm

DocFactory = Callable[..., dict[str, Any]]


@pytest.fixture
def temp_dir() -> Generator[Path, None, None]:
    """Create a temporary directory for spec documents and artifacts."""
    with tempfile.TemporaryDirectory() as tmpdir:
        yield Path(tmpdir)


@pytest.fixture
def closed_loop_doc() -> dict[str, Any]:
    """Catalog document of the stabilized example."""
    return get_example_document(LoopKind.CLOSED, NonlinearityForm.AS_PRINTED)


@pytest.fixture
def open_loop_doc() -> dict[str, Any]:
    """Catalog document of the example without feedback."""
    return get_example_document(LoopKind.OPEN, NonlinearityForm.AS_PRINTED)


@pytest.fixture
def write_doc(temp_dir: Path) -> Callable[[dict[str, Any], str], Path]:
    """Write a document as JSON into the temporary directory."""

    def write(doc: dict[str, Any], name: str = "spec.json") -> Path:
        path = temp_dir / name
        path.write_text(json.dumps(doc), encoding="utf-8")
        return path

    return write


@pytest.fixture
def closed_loop_file(write_doc: Callable[[dict[str, Any], str], Path], closed_loop_doc: dict[str, Any]) -> Path:
    """Closed-loop catalog document on disk."""
    return write_doc(closed_loop_doc, "closed.json")


@pytest.fixture
def open_loop_file(write_doc: Callable[[dict[str, Any], str], Path], open_loop_doc: dict[str, Any]) -> Path:
    """Open-loop catalog document on disk."""
    return write_doc(open_loop_doc, "open.json")


@pytest.fixture
def make_doc() -> DocFactory:
    """Build small system documents; g defaults to zero and the kernel to 1."""

    def build(
        A: list[list[float]],
        feedback_K: list[list[float]] | None = None,
        delay_kernel: str = "1",
        g: list[str] | None = None,
        x0: list[float] | None = None,
        **sim: Any,
    ) -> dict[str, Any]:
        n = len(A)
        return {
            "n": n,
            "A": A,
            "feedback_K": feedback_K,
            "alpha1": 0.5,
            "alpha2": 0.5,
            "delay_kernel": delay_kernel,
            "g": g if g is not None else ["0"] * n,
            "x0": x0 if x0 is not None else [1.0] * n,
            "label": "test system",
            "sim": sim,
        }

    return build
