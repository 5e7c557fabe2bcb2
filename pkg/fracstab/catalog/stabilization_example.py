"""Built-in three-state stabilization example.

A mixed first-order/fractional system that is unstable without feedback and
is stabilized by the state-derivative gain u = K x'. The printed kernel
``t - 1`` multiplies a nonlinearity carrying the factor 1/(t - 1); catalog
documents store the cancelled product (kernel ``1``, polynomial g) so that
t = 1 is regular.
"""

from typing import Any

from fracstab.models.enums import LoopKind, NonlinearityForm, ThirdExponent
from fracstab.numerics.fracderiv import CaputoOrder, caputo_power_rule

SYSTEM_MATRIX: list[list[float]] = [
    [-15.0, 15.0, 0.0],
    [110.0, -1.0, 0.0],
    [0.0, 0.0, -1.0],
]

FEEDBACK_GAIN: list[list[float]] = [
    [1.0, 15.0, 0.0],
    [110.0, 0.0, 0.0],
    [0.0, 0.0, -3.0],
]

ALPHA1 = 2.0 / 3.0
ALPHA2 = 3.0 / 5.0

# Kernel as printed, before cancellation against the 1/(t - 1) factor of g
PRINTED_KERNEL = "t - 1"
CANCELLED_KERNEL = "1"

# Printed constants used by the literal replay of the stability inequality
ASSERTED_M3 = 0.5
PRINTED_OMEGA = 0.25
PRINTED_CLOSED_LOOP_REAL_PARTS = (-0.981, -1.0005, -0.25)
PRINTED_INVERSE_DIAGONAL_MAX = -0.25

DEFAULT_X0 = [0.5, 0.5, 0.5]
DEFAULT_SIM: dict[str, Any] = {"t_end": 40.0, "dt": 1e-3, "divergence_cap": 1e6}


def power_rule_coefficients() -> tuple[float, float]:
    """Coefficients 2/Gamma(7/3) and 1/Gamma(7/5) of the Caputo power rule.

    They are the derivatives of x1^2 at order 2/3 and of x2 at order 3/5.
    """
    first = caputo_power_rule(CaputoOrder(ALPHA1), 2.0).coefficient
    second = caputo_power_rule(CaputoOrder(ALPHA2), 1.0).coefficient
    return first, second


def get_nonlinearity(
    form: NonlinearityForm = NonlinearityForm.AS_PRINTED,
    third_exponent: ThirdExponent = ThirdExponent.TWO_FIFTHS,
) -> list[str]:
    """Nonlinearity components of the example as expression sources.

    Args:
        form: Unit coefficients or power-rule coefficients
        third_exponent: Exponent of x2 in the third component

    Returns:
        Three expression strings
    """
    exponent = third_exponent.value
    if form == NonlinearityForm.POWER_RULE_EXACT:
        first, second = power_rule_coefficients()
        return [
            "0",
            f"{first!r} * x2 * spow(x1, 4/3)",
            f"{second!r} * x1 * spow(x2, {exponent})",
        ]
    return ["0", "x2 * spow(x1, 4/3)", f"x1 * spow(x2, {exponent})"]


def get_example_document(
    loop: LoopKind = LoopKind.CLOSED,
    form: NonlinearityForm = NonlinearityForm.AS_PRINTED,
    third_exponent: ThirdExponent = ThirdExponent.TWO_FIFTHS,
) -> dict[str, Any]:
    """System-spec document of a catalog variant.

    Args:
        loop: With or without the feedback gain
        form: Nonlinearity coefficient reading
        third_exponent: Exponent of x2 in the third component

    Returns:
        Document dictionary accepted by the model service
    """
    return {
        "n": 3,
        "A": [row[:] for row in SYSTEM_MATRIX],
        "feedback_K": [row[:] for row in FEEDBACK_GAIN] if loop == LoopKind.CLOSED else None,
        "alpha1": ALPHA1,
        "alpha2": ALPHA2,
        "delay_kernel": CANCELLED_KERNEL,
        "g": get_nonlinearity(form, third_exponent),
        "x0": DEFAULT_X0[:],
        "label": f"example {loop.value}/{form.value}",
        "sim": dict(DEFAULT_SIM),
    }


def list_variants() -> list[tuple[LoopKind, NonlinearityForm]]:
    """All four catalog variants."""
    return [(loop, form) for loop in LoopKind for form in NonlinearityForm]


def is_catalog_label(label: str) -> bool:
    """Whether a spec label was produced by ``get_example_document``."""
    return any(label == f"example {loop.value}/{form.value}" for loop, form in list_variants())


def get_replay_notes(
    real_parts: list[float] | None,
    inverse_diagonal_max: float,
    printed_kernel_sup: float,
    horizon: float,
) -> list[str]:
    """Discrepancy notes between printed and recomputed example quantities.

    Args:
        real_parts: Recomputed closed-loop eigenvalue real parts, if available
        inverse_diagonal_max: Recomputed largest diagonal entry of (I - K)^-1
        printed_kernel_sup: Supremum of the uncancelled kernel on the horizon
        horizon: Horizon of that supremum

    Returns:
        Note lines for the certificate
    """
    printed = ", ".join(f"{value:g}" for value in PRINTED_CLOSED_LOOP_REAL_PARTS)
    notes = []
    if real_parts is not None:
        recomputed = ", ".join(f"{value:.6g}" for value in sorted(real_parts))
        notes.append(f"printed closed-loop real parts {printed}; recomputed {recomputed}")
        notes.append(f"printed omega = {PRINTED_OMEGA:g}; recomputed {-max(real_parts):.6g}")
    notes.append(
        f"printed max diag (I-K)^-1 = {PRINTED_INVERSE_DIAGONAL_MAX:g}; recomputed "
        f"{inverse_diagonal_max:.6g} (exact inverse diagonal is -1/1650, 0, 1/4)"
    )
    notes.append(
        f"kernel '{PRINTED_KERNEL}' is cancelled against the 1/(t - 1) factor of g; "
        f"uncancelled it has sup {printed_kernel_sup:g} on [0, {horizon:g}] and is unbounded"
    )
    notes.append("third component reads A33 = -1 as in the printed matrix (the expanded equation shows -3 x3)")
    return notes
