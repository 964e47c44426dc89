"""Relative-invariant schemas."""

from __future__ import annotations

from enum import Enum

from pydantic import BaseModel, Field

from ode_linearizer.schemas.expression import SymExpr, ZeroFlag


class JScaling(str, Enum):
    """Normalization of J³ against W."""
    LAGUERRE_FORSYTH = "laguerre"  # J³ = W/54
    YUMAGUZHIN = "yumaguzhin"  # J³ = -W/27


# invariants whose vanishing is independent of the J-scaling
SCALING_FREE = ("I1", "I2", "I4", "I5", "I6", "I7")


class InvariantReport(BaseModel):
    """Relative invariants of one ODE under one J-scaling.

    J-dependent fields are ``None`` when W vanishes identically; their flags
    are then ``not_applicable``.
    """
    scaling: JScaling
    W: SymExpr
    J: SymExpr | None = None
    I1: SymExpr
    I2: SymExpr
    I4: SymExpr | None = None
    I5: SymExpr | None = None
    I6: SymExpr | None = None
    I7: SymExpr
    I8: SymExpr | None = None
    K: SymExpr | None = None
    DxK: SymExpr | None = None
    I9: SymExpr | None = None  # K_q
    I10: SymExpr | None = None  # K_p
    I11: SymExpr | None = None  # f_qq D_xK - 6 K_u
    I12: SymExpr | None = None  # K_x
    Ku: SymExpr | None = None
    zero_flags: dict[str, ZeroFlag] = Field(default_factory=dict)

    def flag(self, name: str) -> ZeroFlag:
        return self.zero_flags.get(name, ZeroFlag.NOT_APPLICABLE)

    def expression(self, name: str) -> SymExpr | None:
        return getattr(self, name)

    @property
    def has_J(self) -> bool:
        return self.J is not None
