"""Exception hierarchy for the symbolic engine."""

from __future__ import annotations

from typing import TYPE_CHECKING, Any

if TYPE_CHECKING:
    from ode_linearizer.schemas import DeterminingSystem


class OdeLinearizerError(Exception):
    """Base class for all engine errors."""


class UnsupportedNode(OdeLinearizerError):
    """An expression uses a function outside the supported set."""


class NotRationalForm(OdeLinearizerError):
    """Expression cannot be brought into the radical-graded rational normal form."""


class EvaluationDomain(OdeLinearizerError):
    """No admissible sample point was found for a probabilistic test."""


class DivisionByZero(OdeLinearizerError):
    """Exact evaluation hit a pole."""


class NegativeEvenRoot(OdeLinearizerError):
    """Exact evaluation produced a non-real value from an even root."""


class ExpressionSyntaxError(OdeLinearizerError):
    """Source text does not match the expression grammar."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class UnknownIdentifier(OdeLinearizerError):
    """Identifier is neither a jet variable nor a declared parameter."""

    def __init__(self, names: list[str]):
        super().__init__(f"Unknown identifier(s): {', '.join(names)}")
        self.names = names


class DegenerateTransformation(OdeLinearizerError):
    """D_x(phi) vanishes identically or the Jacobian is zero."""


class NotPolynomialInJetVars(OdeLinearizerError):
    """Coefficient matching met a jet variable inside a non-polynomial node."""


class SearchBudgetExceeded(OdeLinearizerError):
    """Ansatz enumeration ran past the configured candidate cap."""


class WrongBranch(OdeLinearizerError):
    """A branch system was requested for an ODE of another symmetry class."""

    def __init__(self, message: str, verdict: Any = None):
        super().__init__(message)
        self.verdict = verdict


class NotLinearizable(OdeLinearizerError):
    """The ODE is not point-equivalent to a linear canonical form."""

    def __init__(self, message: str, failing: list[str] | None = None):
        super().__init__(message)
        self.failing = failing or []


class AnsatzFailed(OdeLinearizerError):
    """No candidate solved the determining system; the residual is attached."""

    def __init__(self, message: str, residual: DeterminingSystem):
        super().__init__(message)
        self.residual = residual


class NoClosedFormInverse(OdeLinearizerError):
    """A point transformation could not be inverted in closed form."""


class Undecided(OdeLinearizerError):
    """Classification stopped on an inconclusive zero test."""

    def __init__(self, message: str, undecided: list[str] | None = None):
        super().__init__(message)
        self.undecided = undecided or []


class VerificationFailed(OdeLinearizerError):
    """A constructed transformation did not verify against its target."""

    def __init__(self, message: str, result: Any = None):
        super().__init__(message)
        self.result = result
