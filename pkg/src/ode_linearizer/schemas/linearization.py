"""Linearization schemas: determining systems, ansatz families, results."""

from __future__ import annotations

from enum import Enum

from pydantic import BaseModel, Field

from ode_linearizer.schemas.classification import Verdict
from ode_linearizer.schemas.expression import SymExpr, ZeroFlag
from ode_linearizer.schemas.jet import PointTransformation, VerificationResult


class Branch(str, Enum):
    """Which construction a determining system belongs to."""
    SEVEN = "seven"
    FIVE = "five"
    FOUR_LAGUERRE = "four_laguerre"
    FOUR_YUMAGUZHIN = "four_yumaguzhin"


class CanonicalTarget(str, Enum):
    """Requested canonical form for four-symmetry equations."""
    AUTO = "auto"
    LAGUERRE = "laguerre"
    YUMAGUZHIN = "yumaguzhin"


class TargetForm(str, Enum):
    TRIVIAL = "trivial"  # ū''' = 0
    CONSTANT = "constant"  # ū''' = s ū' + ū
    LAGUERRE_FORSYTH = "laguerre_forsyth"  # ū''' = ā(x̄)³ ū
    YUMAGUZHIN = "yumaguzhin"


class Sign(str, Enum):
    PLUS = "+"
    MINUS = "-"

    @property
    def factor(self) -> int:
        return 1 if self is Sign.PLUS else -1


class AnsatzKind(str, Enum):
    MONOMIAL = "monomial"  # c x^a u^b p^e
    SUM_OF_MONOMIALS = "sum_of_monomials"
    POLYNOMIAL = "polynomial"
    SINGLE_VARIABLE = "single_variable"
    SHIFTED_POWER = "shifted_power"  # c0 (v + c1)^-k


class AnsatzFamily(BaseModel):
    """Candidate shapes for an unknown function and their search bounds."""
    kind: AnsatzKind = AnsatzKind.MONOMIAL
    max_exponent: int = Field(default=6, ge=0)
    terms: int = Field(default=3, ge=1)
    degree: int = Field(default=4, ge=0)


class UnknownFunction(BaseModel):
    name: str
    arguments: list[str]
    nonzero: bool = False


class DeterminingEquation(BaseModel):
    """expression ≡ 0, identically in the jet variables."""
    expression: SymExpr
    provenance: str


class DeterminingSystem(BaseModel):
    branch: Branch
    unknowns: list[UnknownFunction]
    equations: list[DeterminingEquation]
    fixed: dict[str, SymExpr] = Field(default_factory=dict)  # already-known unknowns
    params: list[str] = Field(default_factory=list)

    def unknown(self, name: str) -> UnknownFunction:
        for item in self.unknowns:
            if item.name == name:
                return item
        raise KeyError(name)


class SolveStatus(str, Enum):
    SOLVED = "solved"
    FAILED = "failed"


class AnsatzSolution(BaseModel):
    status: SolveStatus
    bindings: dict[str, SymExpr] = Field(default_factory=dict)
    alternates: dict[str, list[SymExpr]] = Field(default_factory=dict)
    residual: DeterminingSystem | None = None
    candidates_tried: int = 0


class CanonicalForm(BaseModel):
    """Target equation ū''' = f̄(x̄, ū, ū', ū'') and its defining data."""
    form: TargetForm
    rhs: SymExpr | None = None  # in barred variables, when explicit
    s: SymExpr | None = None
    a_bar: SymExpr | None = None  # function of xbar
    g_bar: SymExpr | None = None  # function of xbar
    sign: Sign | None = None
    implicit: dict[str, SymExpr] = Field(default_factory=dict)  # e.g. {"xbar": ±K, "g": ±J/D_xK}
    complex_branch: bool = False


class LinearizationResult(BaseModel):
    """Verified linearizing transformation with its canonical data."""
    verdict: Verdict
    transformation: PointTransformation
    canonical: CanonicalForm
    auxiliaries: dict[str, SymExpr] = Field(default_factory=dict)
    alternates: dict[str, list[SymExpr]] = Field(default_factory=dict)
    verification: VerificationResult
    identity_checks: dict[str, ZeroFlag] = Field(default_factory=dict)
    rejected_branch: CanonicalForm | None = None
