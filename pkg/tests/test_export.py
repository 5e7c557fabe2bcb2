"""Tests for artifact writers."""

import csv
import io
import json
import xml.etree.ElementTree as ET
from pathlib import Path

import numpy as np
import pytest

from fracstab.models.certificate import StabilityCertificate
from fracstab.models.enums import Outcome, ReportMode, Verdict
from fracstab.models.trajectory import Trajectory
from fracstab.services.sweep_service import SWEEP_COLUMNS, SweepRow
from fracstab.utils.export import (
    PAPER_LITERAL_FIELDS,
    certificate_json,
    sweep_csv,
    trajectory_csv,
    trajectory_svg,
    write_certificate,
    write_trajectory_svg,
)

SVG_NS = "{http://www.w3.org/2000/svg}"


@pytest.fixture
def trajectory() -> Trajectory:
    """Three-component trajectory with a known shape."""
    times = np.linspace(0.0, 1.0, 11)
    states = np.column_stack([np.exp(-times), np.cos(times), times])
    return Trajectory(
        times=times,
        states=states,
        norm_track=np.linalg.norm(states, axis=1),
        k1_track=np.zeros(11),
        k2_track=np.full(11, 0.5),
        outcome=Outcome.COMPLETED,
        final_state=states[-1].copy(),
        stop_step=10,
    )


@pytest.fixture
def certificate() -> StabilityCertificate:
    return StabilityCertificate(
        label="unit",
        eigenvalues=[(-1.0, 0.0)],
        max_real_part=-1.0,
        omega=1.0,
        M=1.0,
        M1=1.0,
        M2=0.5,
        M3=0.5,
        inv_norm_spectral=1.0,
        inv_norm_paper_literal=1.0,
        spectral_product=0.5,
        spectral_margin_holds=True,
        paper_literal_M3=0.5,
        paper_literal_product=0.5,
        paper_literal_holds=True,
        verdict=Verdict.CERTIFIED_NUMERICALLY,
        horizon=40.0,
        ball_radius=0.5,
    )


class TestTrajectoryCsv:
    def test_header_and_rows(self, trajectory: Trajectory) -> None:
        rows = list(csv.reader(io.StringIO(trajectory_csv(trajectory))))
        assert rows[0] == ["t", "x1", "x2", "x3", "norm", "k1", "k2"]
        assert len(rows) == 12
        assert float(rows[-1][0]) == 1.0
        assert float(rows[-1][1]) == pytest.approx(np.exp(-1.0), rel=1e-14)
        assert float(rows[5][6]) == 0.5

    def test_deterministic(self, trajectory: Trajectory) -> None:
        assert trajectory_csv(trajectory) == trajectory_csv(trajectory)


class TestTrajectorySvg:
    """Tests for the SVG line plot."""

    def test_one_polyline_per_component(self, trajectory: Trajectory) -> None:
        root = ET.fromstring(trajectory_svg(trajectory, title="run"))
        polylines = root.findall(f"{SVG_NS}polyline")
        assert len(polylines) == 3
        assert [line.get("data-series") for line in polylines] == ["x1", "x2", "x3"]
        assert all(len(line.get("points", "").split()) == 11 for line in polylines)
        assert root.get("viewBox") == "0 0 800 600"
        assert root.find(f"{SVG_NS}title") is not None

    def test_points_stay_in_view(self, trajectory: Trajectory) -> None:
        root = ET.fromstring(trajectory_svg(trajectory))
        for line in root.findall(f"{SVG_NS}polyline"):
            for pair in line.get("points", "").split():
                x, y = (float(part) for part in pair.split(","))
                assert 0.0 <= x <= 800.0
                assert 0.0 <= y <= 600.0

    def test_drops_non_finite_rows(self, trajectory: Trajectory) -> None:
        states = trajectory.states.copy()
        states[-1] = np.inf
        broken = Trajectory(
            times=trajectory.times,
            states=states,
            norm_track=trajectory.norm_track,
            k1_track=trajectory.k1_track,
            k2_track=trajectory.k2_track,
            outcome=Outcome.DIVERGED,
            final_state=states[-1],
            stop_step=10,
        )
        root = ET.fromstring(trajectory_svg(broken))
        assert all(len(line.get("points", "").split()) == 10 for line in root.findall(f"{SVG_NS}polyline"))

    def test_write(self, trajectory: Trajectory, temp_dir: Path) -> None:
        path = temp_dir / "plot.svg"
        write_trajectory_svg(trajectory, path)
        assert path.read_text(encoding="utf-8").startswith("<?xml")


class TestCertificateJson:
    """Tests for certificate reports."""

    def test_both_readings(self, certificate: StabilityCertificate) -> None:
        data = json.loads(certificate_json(certificate, ReportMode.BOTH))
        assert PAPER_LITERAL_FIELDS <= data.keys()
        assert data["verdict"] == "certified_numerically"
        assert data["eigenvalues"] == [[-1.0, 0.0]]

    def test_spectral_only(self, certificate: StabilityCertificate) -> None:
        data = json.loads(certificate_json(certificate, ReportMode.SPECTRAL))
        assert not PAPER_LITERAL_FIELDS & data.keys()
        assert data["inv_norm_spectral"] == 1.0

    def test_paper_literal_mode_keeps_all_fields(self, certificate: StabilityCertificate) -> None:
        data = json.loads(certificate_json(certificate, ReportMode.PAPER_LITERAL))
        assert PAPER_LITERAL_FIELDS <= data.keys()
        assert "spectral_product" in data

    def test_reloads(self, certificate: StabilityCertificate) -> None:
        assert StabilityCertificate.model_validate_json(certificate_json(certificate)) == certificate

    def test_write_file(self, certificate: StabilityCertificate, temp_dir: Path) -> None:
        path = temp_dir / "cert.json"
        write_certificate(certificate, path)
        assert json.loads(path.read_text(encoding="utf-8"))["schema_version"] == 1


class TestSweepCsv:
    def test_rows(self) -> None:
        rows = [
            SweepRow(-1.0, Verdict.CERTIFIED_NUMERICALLY, 1.0, 0.0, Outcome.COMPLETED, 0.125),
            SweepRow(1.0, Verdict.FAILED, None, None, Outcome.DIVERGED, 2e6),
            SweepRow(2.0, None, None, None, None, None, error="singular"),
        ]
        parsed = list(csv.reader(io.StringIO(sweep_csv(rows))))
        assert parsed[0] == SWEEP_COLUMNS
        assert parsed[1] == ["-1", "certified_numerically", "1", "0", "completed", "0.125"]
        assert parsed[2] == ["1", "failed", "", "", "diverged", "2000000"]
        assert parsed[3] == ["2", "error", "", "", "error", ""]
