"""Expression-level schemas shared by every other schema module."""

from __future__ import annotations

from enum import Enum
from fractions import Fraction
from typing import Annotated, Any

import sympy
from pydantic import BaseModel, Field, PlainSerializer, PlainValidator, WithJsonSchema


def _validate_expr(value: Any) -> sympy.Basic:
    if isinstance(value, sympy.Basic):
        return value
    if isinstance(value, bool):
        raise ValueError("booleans are not expressions")
    if isinstance(value, int):
        return sympy.Integer(value)
    if isinstance(value, Fraction):
        return sympy.Rational(value.numerator, value.denominator)
    raise ValueError(f"expected a symbolic expression, got {type(value).__name__}")


def _serialize_expr(value: sympy.Basic) -> str:
    from ode_linearizer.core.printing import to_infix

    return to_infix(value)


# sympy values in Python mode, infix strings in JSON mode
SymExpr = Annotated[
    Any,
    PlainValidator(_validate_expr),
    PlainSerializer(_serialize_expr, return_type=str, when_used="json"),
    WithJsonSchema({"type": "string", "description": "infix expression"}),
]


class ZeroFlag(str, Enum):
    """Outcome of an identity test."""
    ZERO = "zero"
    NONZERO = "nonzero"
    UNKNOWN = "unknown"
    NOT_APPLICABLE = "not_applicable"


class ZeroTestMethod(str, Enum):
    EXACT = "exact"
    SAMPLED = "sampled"


class PrintFormat(str, Enum):
    """Output syntax for expressions."""
    INFIX = "infix"
    LATEX = "latex"
    JSON = "json"


class ZeroTestOutcome(BaseModel):
    """Zero-test verdict with the evidence behind it."""
    flag: ZeroFlag
    method: ZeroTestMethod
    confidence: float = Field(default=1.0, ge=0.0, le=1.0)
    samples: int = 0
    witness: dict[str, str] | None = None  # symbol -> "a/b"


class ZeroTestConfig(BaseModel):
    """Constants of the sampling zero test."""
    seed: int = 0
    samples: int = Field(default=12, ge=1)
    box: int = Field(default=5, ge=1)  # coordinates drawn from [-box, box]
    max_denominator: int = Field(default=64, ge=1)
    eps_abs: float = 1e-9
    eps_rej: float = 1e-4
    max_attempts: int = Field(default=200, ge=1)
    precision: int = Field(default=30, ge=15)  # decimal digits for evalf

    model_config = {"frozen": True}
