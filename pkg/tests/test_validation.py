"""Tests for input parsing helpers and configuration."""

from typing import Any

import pytest

from fracstab.models.enums import LoopKind, NonlinearityForm
from fracstab.models.exceptions import ParameterPathError
from fracstab.utils.config import DEFAULT_NUMERICS_CONFIG, NumericsConfig, get_numerics_config
from fracstab.utils.validation import get_parameter, parse_csv_floats, parse_variant, set_parameter


class TestParseCsvFloats:
    def test_values(self) -> None:
        assert parse_csv_floats("0.5, 0.5,1e-3") == [0.5, 0.5, 1e-3]

    def test_blank(self) -> None:
        assert parse_csv_floats("  ") == []

    @pytest.mark.parametrize("text", ["1,,2", "1, x", "inf", "1, nan"])
    def test_invalid(self, text: str) -> None:
        with pytest.raises(ValueError):
            parse_csv_floats(text)


class TestParseVariant:
    def test_closed(self) -> None:
        assert parse_variant("closed/as-printed") == (LoopKind.CLOSED, NonlinearityForm.AS_PRINTED)

    def test_open_power_rule(self) -> None:
        assert parse_variant(" open/power-rule-exact ") == (LoopKind.OPEN, NonlinearityForm.POWER_RULE_EXACT)

    @pytest.mark.parametrize("text", ["closed", "half/as-printed", "closed/exact"])
    def test_invalid(self, text: str) -> None:
        with pytest.raises(ValueError):
            parse_variant(text)


class TestParameterPaths:
    """Tests for dotted parameter paths into documents."""

    def test_get(self, closed_loop_doc: dict[str, Any]) -> None:
        assert get_parameter(closed_loop_doc, "A.0.1") == 15.0
        assert get_parameter(closed_loop_doc, "feedback_K.2.2") == -3.0
        assert get_parameter(closed_loop_doc, "sim.divergence_cap") == 1e6
        assert get_parameter(closed_loop_doc, "n") == 3.0

    def test_set_copies(self, closed_loop_doc: dict[str, Any]) -> None:
        updated = set_parameter(closed_loop_doc, "feedback_K.2.2", -5.0)
        assert updated["feedback_K"][2][2] == -5.0
        assert closed_loop_doc["feedback_K"][2][2] == -3.0

    @pytest.mark.parametrize(
        "path",
        ["", "B", "A.3.0", "A.x", "A.0", "label", "A.0.0.1", "feedback_K.-1.0"],
    )
    def test_invalid(self, closed_loop_doc: dict[str, Any], path: str) -> None:
        with pytest.raises(ParameterPathError):
            get_parameter(closed_loop_doc, path)
        with pytest.raises(ParameterPathError):
            set_parameter(closed_loop_doc, path, 1.0)

    def test_null_feedback(self, open_loop_doc: dict[str, Any]) -> None:
        with pytest.raises(ParameterPathError):
            get_parameter(open_loop_doc, "feedback_K.0.0")


class TestNumericsConfig:
    """Tests for environment configuration."""

    def test_defaults(self, monkeypatch: pytest.MonkeyPatch) -> None:
        for name in ["ML_MAX_TERMS", "M_GRID_POINTS", "M1_GRID_POINTS", "M2_SAMPLES", "WORKERS"]:
            monkeypatch.delenv(f"FRACSTAB_{name}", raising=False)
        assert get_numerics_config() == DEFAULT_NUMERICS_CONFIG

    def test_from_env(self, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setenv("FRACSTAB_M2_SAMPLES", "128")
        monkeypatch.setenv("FRACSTAB_WORKERS", "4")
        config = NumericsConfig.from_env()
        assert config.m2_samples == 128
        assert config.workers == 4
