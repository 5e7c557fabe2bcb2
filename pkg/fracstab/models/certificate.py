"""Stability certificate model for Fracstab."""

from pydantic import BaseModel, Field, model_validator

from fracstab.models.enums import Verdict

SCHEMA_VERSION = 1


class StabilityCertificate(BaseModel):
    """Numerical verification of the closed-loop stabilizability conditions.

    The verdict is governed by the spectral reading: the closed-loop matrix
    must have eigenvalues with negative real parts and the decay rate
    ``omega`` must exceed ``M3 * inv_norm_spectral``. The paper-literal
    reading (largest diagonal entry of (I - K)^-1 against an asserted M3)
    is carried for replay only.
    """

    schema_version: int = Field(
        SCHEMA_VERSION,
        description="Report schema version",
    )
    label: str = Field(
        "",
        description="Label of the certified system",
    )
    eigenvalues: list[tuple[float, float]] | None = Field(
        None,
        description="Eigenvalues of (I - K)^-1 A as (re, im) pairs; null if not computed",
    )
    max_real_part: float | None = Field(
        None,
        description="Spectral abscissa of (I - K)^-1 A",
    )
    omega: float | None = Field(
        None,
        description="Decay rate, minus the spectral abscissa",
    )
    M: float | None = Field(
        None,
        ge=1,
        description="Semigroup constant: ||e^{mt}|| <= M e^{-0.99 omega t} on the horizon",
    )
    M1: float = Field(
        ...,
        ge=0,
        description="Supremum of |kernel(t)| on the horizon",
    )
    M2: float = Field(
        ...,
        ge=0,
        description="Sampled gain bound of g on the ball",
    )
    M3: float | None = Field(
        None,
        ge=0,
        description="M * M1 * M2",
    )
    inv_norm_spectral: float = Field(
        ...,
        ge=0,
        description="Spectral norm of (I - K)^-1",
    )
    inv_norm_paper_literal: float = Field(
        ...,
        description="Largest diagonal entry of (I - K)^-1",
    )
    spectral_product: float | None = Field(
        None,
        description="M3 * inv_norm_spectral",
    )
    spectral_margin_holds: bool = Field(
        False,
        description="omega > M3 * inv_norm_spectral",
    )
    paper_literal_M3: float | None = Field(
        None,
        description="Asserted M3 used for the paper-literal replay",
    )
    paper_literal_product: float | None = Field(
        None,
        description="paper_literal_M3 * inv_norm_paper_literal",
    )
    paper_literal_holds: bool | None = Field(
        None,
        description="omega > paper_literal_product",
    )
    verdict: Verdict = Field(
        ...,
        description="certified_numerically, failed or inconclusive",
    )
    horizon: float = Field(
        ...,
        gt=0,
        description="Time horizon of the M and M1 estimates",
    )
    ball_radius: float = Field(
        ...,
        gt=0,
        description="Radius of the sampling ball of the M2 estimate",
    )
    notes: list[str] = Field(
        default_factory=list,
        description="Estimation caveats and discrepancy notes",
    )

    @model_validator(mode="after")
    def check_verdict_soundness(self) -> "StabilityCertificate":
        """A certified verdict needs a stable spectrum and a holding margin."""
        if self.verdict == Verdict.CERTIFIED_NUMERICALLY:
            if self.max_real_part is None or not self.max_real_part < 0:
                raise ValueError("certified verdict requires max_real_part < 0")
            if self.omega is None or self.M3 is None:
                raise ValueError("certified verdict requires omega and M3")
            if not self.omega > self.M3 * self.inv_norm_spectral:
                raise ValueError("certified verdict requires omega > M3 * inv_norm_spectral")
        return self

    @property
    def is_certified(self) -> bool:
        return self.verdict == Verdict.CERTIFIED_NUMERICALLY

    def constants(self) -> dict[str, float]:
        """Estimated constants that are available, keyed by name."""
        values = {
            "omega": self.omega,
            "M": self.M,
            "M1": self.M1,
            "M2": self.M2,
            "M3": self.M3,
            "||(I-K)^-1||_2": self.inv_norm_spectral,
            "max diag (I-K)^-1": self.inv_norm_paper_literal,
        }
        return {name: value for name, value in values.items() if value is not None}
