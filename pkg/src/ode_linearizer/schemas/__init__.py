"""Pydantic schemas for ode-linearizer."""

from ode_linearizer.schemas.classification import (
    BeamCheck,
    ConditionReport,
    ConstraintOutcome,
    KConsistency,
    SymmetryClass,
    Verdict,
)
from ode_linearizer.schemas.config import OutputFormat, RunConfig
from ode_linearizer.schemas.expression import (
    PrintFormat,
    SymExpr,
    ZeroTestConfig,
    ZeroFlag,
    ZeroTestMethod,
    ZeroTestOutcome,
)
from ode_linearizer.schemas.invariants import SCALING_FREE, InvariantReport, JScaling
from ode_linearizer.schemas.jet import JetContext, PointTransformation, VerificationResult, VerifyOutcome
from ode_linearizer.schemas.linearization import (
    AnsatzFamily,
    AnsatzKind,
    AnsatzSolution,
    Branch,
    CanonicalForm,
    CanonicalTarget,
    DeterminingEquation,
    DeterminingSystem,
    LinearizationResult,
    Sign,
    SolveStatus,
    TargetForm,
    UnknownFunction,
)

__all__ = [
    "AnsatzFamily",
    "AnsatzKind",
    "AnsatzSolution",
    "BeamCheck",
    "Branch",
    "CanonicalForm",
    "CanonicalTarget",
    "ConditionReport",
    "ConstraintOutcome",
    "DeterminingEquation",
    "DeterminingSystem",
    "InvariantReport",
    "JetContext",
    "JScaling",
    "KConsistency",
    "LinearizationResult",
    "OutputFormat",
    "PointTransformation",
    "PrintFormat",
    "RunConfig",
    "SCALING_FREE",
    "Sign",
    "SolveStatus",
    "SymExpr",
    "SymmetryClass",
    "TargetForm",
    "UnknownFunction",
    "VerificationResult",
    "Verdict",
    "VerifyOutcome",
    "ZeroFlag",
    "ZeroTestConfig",
    "ZeroTestMethod",
    "ZeroTestOutcome",
]
