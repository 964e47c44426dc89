"""Jet-space schemas: ODE context, point transformations, verification results."""

from __future__ import annotations

from enum import Enum

import sympy
from pydantic import BaseModel, Field, computed_field, model_validator

from ode_linearizer.schemas.expression import SymExpr, ZeroTestConfig, ZeroTestOutcome
from ode_linearizer.symbols import P, Q, U, X


class JetContext(BaseModel):
    """Right-hand side of u''' = f(x, u, p, q) plus its parameters."""
    f: SymExpr
    params: list[SymExpr] = Field(default_factory=list)
    singular_locus_hint: SymExpr | None = None
    zero_config: ZeroTestConfig = Field(default_factory=ZeroTestConfig)

    model_config = {"frozen": True}

    @model_validator(mode="after")
    def _check_symbols(self) -> JetContext:
        allowed = {X, U, P, Q, *self.params}
        stray = self.f.free_symbols - allowed
        if stray:
            names = ", ".join(sorted(s.name for s in stray))
            raise ValueError(f"f has symbols outside the jet and parameters: {names}")
        return self

    @property
    def param_symbols(self) -> tuple[sympy.Symbol, ...]:
        return tuple(self.params)


class PointTransformation(BaseModel):
    """x̄ = phi(x, u), ū = psi(x, u)."""
    phi: SymExpr
    psi: SymExpr

    model_config = {"frozen": True}

    @model_validator(mode="after")
    def _check_point(self) -> PointTransformation:
        for name, expr in (("phi", self.phi), ("psi", self.psi)):
            if expr.has(P) or expr.has(Q):
                raise ValueError(f"{name} must not depend on p or q")
        return self

    @computed_field  # type: ignore[prop-decorator]
    @property
    def jacobian(self) -> SymExpr:
        value = sympy.diff(self.phi, X) * sympy.diff(self.psi, U) - sympy.diff(self.phi, U) * sympy.diff(self.psi, X)
        return sympy.cancel(value)


class VerifyOutcome(str, Enum):
    VERIFIED = "verified"
    REFUTED = "refuted"
    UNKNOWN = "unknown"


class VerificationResult(BaseModel):
    """Pullback check of a transformation against a target right-hand side."""
    outcome: VerifyOutcome
    residual: SymExpr
    zero_test: ZeroTestOutcome
    witness: dict[str, str] | None = None

    @property
    def verified(self) -> bool:
        return self.outcome is VerifyOutcome.VERIFIED
