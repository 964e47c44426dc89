"""Classification schemas."""

from __future__ import annotations

from enum import Enum

from pydantic import BaseModel, Field

from ode_linearizer.schemas.expression import SymExpr, ZeroFlag
from ode_linearizer.schemas.invariants import InvariantReport


class Verdict(str, Enum):
    """Point-symmetry class of a third-order ODE."""
    SEVEN = "seven"
    FIVE = "five"
    FOUR = "four"
    NOT_LINEARIZABLE = "not_linearizable"
    INDETERMINATE = "indeterminate"

    @property
    def dimension(self) -> int | None:
        return {"seven": 7, "five": 5, "four": 4}.get(self.value)

    @property
    def description(self) -> str:
        if self.dimension is not None:
            return f"{_WORDS[self.dimension]} point symmetries"
        if self is Verdict.NOT_LINEARIZABLE:
            return "not linearizable by a point transformation"
        return "indeterminate"


_WORDS = {7: "seven", 5: "five", 4: "four"}


class SymmetryClass(BaseModel):
    """Verdict plus the data the verdict carries."""
    verdict: Verdict
    s: SymExpr | None = None  # five: constant of u''' = s u' + u
    K: SymExpr | None = None  # four
    DxK: SymExpr | None = None  # four
    failing: list[str] = Field(default_factory=list)  # not linearizable: nonvanishing invariants
    undecided: list[str] = Field(default_factory=list)  # indeterminate: invariants with unknown flags
    residual_conditions: list[SymExpr] = Field(default_factory=list)
    report: InvariantReport | None = None

    @property
    def deciding_flags(self) -> dict[str, ZeroFlag]:
        return dict(self.report.zero_flags) if self.report else {}


class ConditionReport(BaseModel):
    """Parameter-space stratification for a linear ODE with symbolic coefficients.

    Seven iff W ≡ 0; five iff W ≠ 0 and D_xK ≡ 0; four iff W ≠ 0 and D_xK ≠ 0.
    """
    params: list[str]
    W: SymExpr
    seven_conditions: list[SymExpr] = Field(default_factory=list)  # all must vanish
    seven_solutions: dict[str, list[SymExpr]] = Field(default_factory=dict)
    DxK: SymExpr | None = None
    DxK_flag: ZeroFlag = ZeroFlag.NOT_APPLICABLE
    generic_verdict: Verdict = Verdict.INDETERMINATE  # verdict off the seven hypersurface


class KConsistency(str, Enum):
    CONSISTENT = "consistent"
    INCONSISTENT = "inconsistent"


class ConstraintOutcome(str, Enum):
    SATISFIES = "satisfies"
    VIOLATES = "violates"
    UNKNOWN = "unknown"


class BeamCheck(BaseModel):
    """Beam-equation constraint test cross-checked against classification."""
    B: SymExpr
    constraint: SymExpr
    outcome: ConstraintOutcome
    classification: SymmetryClass
    consistent: bool  # satisfies <=> five, for nonconstant B
