"""Tests for the stability service: constants, certificates and bounds."""

import math
from collections.abc import Callable
from typing import Any

import numpy as np
import pytest
from scipy import integrate

from fracstab.catalog.stabilization_example import ASSERTED_M3
from fracstab.expr import parse
from fracstab.models.certificate import StabilityCertificate
from fracstab.models.enums import Verdict
from fracstab.models.exceptions import DomainError, MEstimationError
from fracstab.numerics.matrix import expm, spectral_norm
from fracstab.services.model_service import get_model_service
from fracstab.services.stability_service import GronwallInstance, StabilityService

DocFactory = Callable[..., dict[str, Any]]


@pytest.fixture
def service() -> StabilityService:
    return StabilityService()


@pytest.fixture(scope="module")
def example_certificate() -> StabilityCertificate:
    """Certificate of the stabilized catalog example with the asserted M3 replay."""
    models = get_model_service()
    closed = models.close_loop(models.builtin_example())
    return StabilityService().certify(closed, horizon=40.0, ball_radius=0.5, asserted_m3=ASSERTED_M3)


def certify_doc(doc: dict[str, Any], **kwargs: Any) -> StabilityCertificate:
    models = get_model_service()
    closed = models.close_loop(models.load_spec(doc))
    return StabilityService().certify(closed, horizon=kwargs.pop("horizon", 40.0), ball_radius=0.5, **kwargs)


def picard_gronwall(Z: float, u: float, alpha: float, times: np.ndarray) -> np.ndarray:
    """Picard iterates of a = Z + u int_0^t (t - s)^(alpha - 1) a(s) ds summed on a grid.

    Iterate k adds c_k t^(k alpha); the kernel integral of s^(k alpha) is
    taken by quadrature after substituting 1 - s/t = w^(1/alpha).
    """
    values = np.full(times.shape, Z)
    coefficient = Z
    for k in range(2000):
        integral, _ = integrate.quad(
            lambda w: (1.0 - w ** (1.0 / alpha)) ** (k * alpha), 0.0, 1.0, epsabs=0.0, epsrel=1e-13, limit=200
        )
        coefficient *= u * integral / alpha
        term = coefficient * times ** ((k + 1) * alpha)
        values = values + term
        if k > 1 and np.all(term <= 1e-17 * values):
            return values
    raise AssertionError("Picard iteration did not settle")


class TestCertify:
    """Tests for the verdict rule."""

    def test_example_is_certified(self, example_certificate: StabilityCertificate) -> None:
        cert = example_certificate
        assert cert.verdict == Verdict.CERTIFIED_NUMERICALLY
        assert cert.omega == pytest.approx(0.25, abs=1e-9)
        assert cert.M == pytest.approx(1.0)
        assert cert.M1 == 1.0
        assert 0.4 <= cert.M2 <= 0.6
        assert cert.inv_norm_spectral == pytest.approx(0.25, rel=1e-12)
        assert cert.spectral_product is not None and cert.spectral_product < cert.omega
        assert cert.spectral_margin_holds

    def test_example_eigenvalues(self, example_certificate: StabilityCertificate) -> None:
        assert example_certificate.eigenvalues is not None
        parts = sorted(re for re, _ in example_certificate.eigenvalues)
        assert parts == pytest.approx([-1.0, -1635.0 / 1650.0, -0.25], abs=1e-8)

    def test_paper_literal_replay(self, example_certificate: StabilityCertificate) -> None:
        cert = example_certificate
        assert cert.inv_norm_paper_literal == pytest.approx(0.25)
        assert cert.paper_literal_M3 == 0.5
        assert cert.paper_literal_product == pytest.approx(0.125)
        assert cert.paper_literal_holds is True
        assert any("paper-literal" in note for note in cert.notes)

    def test_open_loop_fails(self, open_loop_doc: dict[str, Any]) -> None:
        cert = certify_doc(open_loop_doc)
        assert cert.verdict == Verdict.FAILED
        assert cert.max_real_part is not None and cert.max_real_part > 33.0
        assert cert.M is None
        assert cert.M3 is None

    def test_stable_without_nonlinearity(self, make_doc: DocFactory) -> None:
        cert = certify_doc(make_doc([[-1.0]], feedback_K=[[0.0]]))
        assert cert.verdict == Verdict.CERTIFIED_NUMERICALLY
        assert cert.M == pytest.approx(1.0)
        assert cert.M2 == 0.0
        assert cert.M3 == 0.0
        assert cert.paper_literal_product is None

    def test_margin_failure_is_inconclusive(self, make_doc: DocFactory) -> None:
        cert = certify_doc(make_doc([[-1.0]], delay_kernel="2", g=["x1"]))
        assert cert.verdict == Verdict.INCONCLUSIVE
        assert not cert.spectral_margin_holds
        assert cert.M3 == pytest.approx(2.0, rel=1e-9)

    def test_zero_eigenvalue_fails(self, make_doc: DocFactory) -> None:
        cert = certify_doc(make_doc([[0.0]]))
        assert cert.verdict == Verdict.FAILED

    def test_unestimated_M_is_inconclusive(self, make_doc: DocFactory) -> None:
        cert = certify_doc(make_doc([[-1.0, 1.0], [0.0, -1.0]]), horizon=10.0)
        assert cert.verdict == Verdict.INCONCLUSIVE
        assert cert.M is None
        assert cert.omega == pytest.approx(1.0)
        assert any(note.startswith("M unavailable") for note in cert.notes)

    def test_invalid_arguments(self, service: StabilityService) -> None:
        models = get_model_service()
        closed = models.close_loop(models.builtin_example())
        with pytest.raises(DomainError):
            service.certify(closed, horizon=0.0, ball_radius=0.5)
        with pytest.raises(DomainError):
            service.certify(closed, horizon=40.0, ball_radius=-1.0)

    def test_certificate_rejects_unsound_verdict(self) -> None:
        with pytest.raises(ValueError):
            StabilityCertificate(
                max_real_part=0.5,
                omega=-0.5,
                M1=1.0,
                M2=0.0,
                M3=0.0,
                inv_norm_spectral=1.0,
                inv_norm_paper_literal=1.0,
                verdict=Verdict.CERTIFIED_NUMERICALLY,
                horizon=1.0,
                ball_radius=1.0,
            )


class TestEstimateM:
    """Tests for the semigroup constant."""

    def test_normal_matrix(self, service: StabilityService) -> None:
        assert service.estimate_M(np.diag([-1.0, -3.0]), 1.0, 20.0) == pytest.approx(1.0)

    def test_non_normal_matrix(self, service: StabilityService) -> None:
        m = np.array([[-1.0, 10.0], [0.0, -2.0]])
        M = service.estimate_M(m, 1.0, 20.0)
        assert M > 1.0
        for t in np.linspace(0.0, 20.0, 401):
            assert spectral_norm(expm(m, float(t))) <= M * math.exp(-0.99 * t) * (1 + 1e-9)

    def test_growth_at_horizon(self, service: StabilityService) -> None:
        jordan = np.array([[-1.0, 1.0], [0.0, -1.0]])
        with pytest.raises(MEstimationError):
            service.estimate_M(jordan, 1.0, 10.0)

    def test_invalid(self, service: StabilityService) -> None:
        with pytest.raises(DomainError):
            service.estimate_M(np.eye(1) * -1.0, 1.0, 0.0)
        with pytest.raises(DomainError):
            service.estimate_M(np.eye(1), 0.0, 1.0)


class TestEstimateM1:
    def test_constant_kernel(self, service: StabilityService) -> None:
        assert service.estimate_M1(parse("-3"), 10.0) == 3.0

    def test_printed_kernel(self, service: StabilityService) -> None:
        assert service.estimate_M1(parse("t - 1"), 40.0) == pytest.approx(39.0)

    def test_periodic_kernel(self, service: StabilityService) -> None:
        assert service.estimate_M1(parse("sin(t)"), 10.0) == pytest.approx(1.0, abs=1e-6)


class TestEstimateM2:
    """Tests for the sampled gain bound."""

    def test_linear_component(self, service: StabilityService, make_doc: DocFactory) -> None:
        spec = get_model_service().load_spec(make_doc(np.diag([-1.0] * 3).tolist(), g=["x1", "0", "0"]))
        M2 = service.estimate_M2(spec, 1.0)
        assert 0.95 <= M2 <= 1.0 + 1e-12

    def test_zero_nonlinearity(self, service: StabilityService, make_doc: DocFactory) -> None:
        spec = get_model_service().load_spec(make_doc([[-1.0]]))
        assert service.estimate_M2(spec, 1.0) == 0.0

    def test_sample_refinement(self, service: StabilityService) -> None:
        spec = get_model_service().builtin_example()
        coarse = service.estimate_M2(spec, 0.1, samples=4096)
        fine = service.estimate_M2(spec, 0.1, samples=40960)
        assert abs(fine - coarse) <= 0.1 * max(fine, coarse)

    def test_deterministic(self, service: StabilityService) -> None:
        spec = get_model_service().builtin_example()
        assert service.estimate_M2(spec, 0.5, samples=2000) == service.estimate_M2(spec, 0.5, samples=2000)

    def test_invalid(self, service: StabilityService) -> None:
        spec = get_model_service().builtin_example()
        with pytest.raises(DomainError):
            service.estimate_M2(spec, 0.0)
        with pytest.raises(DomainError):
            service.estimate_M2(spec, 0.5, samples=100)


class TestDecayEnvelope:
    """Tests for the decay envelope of certified systems."""

    def test_starts_at_scaled_norm(self, service: StabilityService, example_certificate: StabilityCertificate) -> None:
        assert service.decay_envelope(example_certificate, 2.0, 0.0, 0.0, 0.0) == pytest.approx(
            2.0 * example_certificate.M
        )

    def test_decreasing_without_forcing(
        self, service: StabilityService, example_certificate: StabilityCertificate
    ) -> None:
        values = [service.decay_envelope(example_certificate, 1.0, 0.0, 0.0, t) for t in np.linspace(0, 40, 81)]
        assert all(later < earlier for earlier, later in zip(values, values[1:]))

    def test_forcing_raises_envelope(
        self, service: StabilityService, example_certificate: StabilityCertificate
    ) -> None:
        bare = service.decay_envelope(example_certificate, 1.0, 0.0, 0.0, 5.0)
        forced = service.decay_envelope(example_certificate, 1.0, 0.5, 0.5, 5.0)
        assert forced > bare

    def test_matches_integrated_factors_at_twenty(
        self, service: StabilityService, example_certificate: StabilityCertificate
    ) -> None:
        cert = example_certificate
        assert cert.M is not None and cert.M3 is not None and cert.omega is not None
        M, omega, gain = cert.M, cert.omega, cert.M3 * cert.inv_norm_spectral
        forcing, _ = integrate.quad(lambda s: gain * (0.3 + 0.2) * math.exp(omega * s), 0.0, 20.0, epsrel=1e-13)
        expected = (M * 1.5 + forcing) * math.exp((gain - omega) * 20.0)
        assert service.decay_envelope(cert, 1.5, 0.3, 0.2, 20.0) == pytest.approx(expected, rel=1e-10)

    def test_finite_past_exponent_overflow(
        self, service: StabilityService, example_certificate: StabilityCertificate
    ) -> None:
        cert = example_certificate
        assert cert.M3 is not None and cert.omega is not None
        gain = cert.M3 * cert.inv_norm_spectral
        t = 3000.0
        assert cert.omega * t > 710.0 > gain * t
        value = service.decay_envelope(cert, 1.0, 0.5, 0.5, t)
        assert math.isfinite(value)
        assert value == pytest.approx(gain / cert.omega * math.exp(gain * t), rel=1e-12)

    def test_requires_certificate(self, service: StabilityService, open_loop_doc: dict[str, Any]) -> None:
        with pytest.raises(DomainError):
            service.decay_envelope(certify_doc(open_loop_doc), 1.0, 0.0, 0.0, 1.0)

    def test_negative_time(self, service: StabilityService, example_certificate: StabilityCertificate) -> None:
        with pytest.raises(DomainError):
            service.decay_envelope(example_certificate, 1.0, 0.0, 0.0, -1.0)


class TestGronwall:
    """Tests for the fractional Gronwall envelope."""

    def test_zero_gain(self, service: StabilityService) -> None:
        assert service.gronwall_bound(GronwallInstance(Z=2.0, u=0.0, alpha=0.5), 3.0) == pytest.approx(2.0)

    def test_exponential_case(self, service: StabilityService) -> None:
        assert service.gronwall_bound(GronwallInstance(Z=1.0, u=0.5, alpha=1.0), 2.0) == pytest.approx(
            math.e, rel=1e-12
        )

    @pytest.mark.parametrize("alpha", [0.3, 0.5, 0.8])
    @pytest.mark.parametrize("t", [0.5, 1.0, 2.0])
    def test_solves_integral_equation(self, service: StabilityService, alpha: float, t: float) -> None:
        gi = GronwallInstance(Z=1.0, u=0.5, alpha=alpha)
        integral, _ = integrate.quad(
            lambda s: service.gronwall_bound(gi, s),
            0.0,
            t,
            weight="alg",
            wvar=(0.0, alpha - 1.0),
            epsabs=1e-11,
            limit=200,
        )
        assert service.gronwall_bound(gi, t) == pytest.approx(gi.Z + gi.u * integral, rel=1e-5)

    @pytest.mark.parametrize("alpha", [0.3, 0.5, 0.8])
    @pytest.mark.parametrize(("Z", "u"), [(0.5, 0.5), (0.5, 1.0), (1.0, 0.5), (1.0, 1.0)])
    def test_matches_picard_iteration(self, service: StabilityService, alpha: float, Z: float, u: float) -> None:
        times = np.linspace(0.0, 2.0, 21)
        expected = picard_gronwall(Z, u, alpha, times)
        gi = GronwallInstance(Z=Z, u=u, alpha=alpha)
        actual = np.array([service.gronwall_bound(gi, float(t)) for t in times])
        assert np.all(np.abs(actual - expected) <= 1e-6 * expected)

    def test_monotone_in_time(self, service: StabilityService) -> None:
        gi = GronwallInstance(Z=1.0, u=1.0, alpha=0.6)
        values = [service.gronwall_bound(gi, t) for t in np.linspace(0.0, 5.0, 26)]
        assert all(later >= earlier for earlier, later in zip(values, values[1:]))

    def test_invalid_instance(self) -> None:
        with pytest.raises(DomainError):
            GronwallInstance(Z=-1.0, u=1.0, alpha=0.5)
        with pytest.raises(DomainError):
            GronwallInstance(Z=1.0, u=1.0, alpha=0.0)


class TestPerturbationBound:
    """Tests for the perturbed-semigroup bound."""

    def test_holds_for_random_perturbations(self, service: StabilityService) -> None:
        rng = np.random.default_rng(5)
        violations = 0
        for _ in range(100):
            diagonal = rng.uniform(-2.0, -0.5, size=3)
            A = np.diag(diagonal)
            for i in range(3):
                off = rng.uniform(0.0, 1.0, size=2)
                off *= rng.uniform(0.1, 0.9) * abs(diagonal[i]) / off.sum()
                A[i, [j for j in range(3) if j != i]] = -off
            M, w = service.fit_semigroup_constants(A, 5.0)
            B = rng.normal(size=(3, 3))
            B *= rng.uniform(0.05, 0.5) / spectral_norm(B)
            normB = spectral_norm(B)
            for t in np.linspace(0.0, 5.0, 26):
                lhs = spectral_norm(expm(A + B, float(t)))
                if lhs > service.perturbation_bound(M, w, normB, float(t)) * (1 + 1e-9):
                    violations += 1
        assert violations == 0

    def test_overflow_is_infinite(self, service: StabilityService) -> None:
        assert service.perturbation_bound(1.0, 10.0, 1.0, 1000.0) == math.inf

    def test_invalid(self, service: StabilityService) -> None:
        with pytest.raises(DomainError):
            service.perturbation_bound(0.5, -1.0, 0.1, 1.0)
        with pytest.raises(DomainError):
            service.perturbation_bound(1.0, -1.0, -0.1, 1.0)

    def test_fit_requires_stable_matrix(self, service: StabilityService) -> None:
        with pytest.raises(DomainError):
            service.fit_semigroup_constants(np.eye(2), 10.0)
