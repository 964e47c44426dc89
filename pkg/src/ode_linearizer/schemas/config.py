"""Run configuration schemas."""

from __future__ import annotations

from enum import Enum

from pydantic import BaseModel, Field

from ode_linearizer.schemas.expression import ZeroTestConfig
from ode_linearizer.schemas.invariants import JScaling
from ode_linearizer.schemas.linearization import AnsatzFamily, AnsatzKind, CanonicalTarget, Sign


class OutputFormat(str, Enum):
    TEXT = "text"
    JSON = "json"


class RunConfig(BaseModel):
    """Everything that determines a run's output besides its input."""
    seed: int = 0
    samples: int = Field(default=12, ge=1)
    output_format: OutputFormat = OutputFormat.TEXT
    scaling: JScaling | None = None
    target: CanonicalTarget = CanonicalTarget.AUTO
    sign: Sign | None = None
    ansatz_max_exp: int = Field(default=6, ge=0)
    ansatz_terms: int = Field(default=3, ge=1)
    ansatz_degree: int = Field(default=4, ge=0)
    ansatz_budget: int = Field(default=5000, ge=1)
    params: list[str] = Field(default_factory=list)

    def zero_test_config(self) -> ZeroTestConfig:
        return ZeroTestConfig(seed=self.seed, samples=self.samples)

    def ansatz_families(self) -> list[AnsatzFamily]:
        """Default search order: monomials, shifted inverse powers, sums of monomials, polynomials."""
        return [
            AnsatzFamily(kind=AnsatzKind.MONOMIAL, max_exponent=self.ansatz_max_exp),
            AnsatzFamily(kind=AnsatzKind.SHIFTED_POWER, max_exponent=self.ansatz_max_exp),
            AnsatzFamily(kind=AnsatzKind.SUM_OF_MONOMIALS, max_exponent=min(self.ansatz_max_exp, 2), terms=self.ansatz_terms),
            AnsatzFamily(kind=AnsatzKind.POLYNOMIAL, degree=self.ansatz_degree),
        ]
