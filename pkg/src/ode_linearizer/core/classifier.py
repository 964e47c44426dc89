"""Point-symmetry classification of linearizable third-order ODEs."""

from __future__ import annotations

from collections.abc import Sequence

import sympy
from loguru import logger

from ode_linearizer.core.errors import EvaluationDomain, NotRationalForm
from ode_linearizer.core.expr import ZeroTester, as_expr, normalize, rational_nf
from ode_linearizer.core.invariants import compute_report
from ode_linearizer.core.jet import make_context
from ode_linearizer.schemas import (
    BeamCheck,
    ConditionReport,
    ConstraintOutcome,
    InvariantReport,
    JetContext,
    JScaling,
    SymmetryClass,
    Verdict,
    ZeroFlag,
    ZeroTestConfig,
)
from ode_linearizer.symbols import P, Q, U, X


def _stage(report: InvariantReport, names: Sequence[str]) -> tuple[ZeroFlag, list[str]]:
    """NonZero if any named invariant is NonZero, else Unknown if any is Unknown, else Zero."""
    nonzero = [n for n in names if report.flag(n) is ZeroFlag.NONZERO]
    if nonzero:
        return ZeroFlag.NONZERO, nonzero
    unknown = [n for n in names if report.flag(n) is ZeroFlag.UNKNOWN]
    if unknown:
        return ZeroFlag.UNKNOWN, unknown
    return ZeroFlag.ZERO, []


def _not_linearizable(report: InvariantReport, failing: list[str]) -> SymmetryClass:
    logger.info(f"Not linearizable: {', '.join(failing)} do not vanish")
    return SymmetryClass(verdict=Verdict.NOT_LINEARIZABLE, failing=failing, report=report)


def _indeterminate(report: InvariantReport, undecided: list[str]) -> SymmetryClass:
    logger.warning(f"Indeterminate: zero tests inconclusive for {', '.join(undecided)}")
    return SymmetryClass(
        verdict=Verdict.INDETERMINATE,
        undecided=undecided,
        residual_conditions=[report.expression(n) for n in undecided],
        report=report,
    )


def classify_report(report: InvariantReport) -> SymmetryClass:
    """Decision tree over the zero flags of one report."""
    flag, names = _stage(report, ("I1", "I2"))
    if flag is ZeroFlag.NONZERO:
        return _not_linearizable(report, names)
    if flag is ZeroFlag.UNKNOWN:
        return _indeterminate(report, names)

    W_flag = report.flag("W")
    if W_flag is ZeroFlag.UNKNOWN:
        return _indeterminate(report, ["W"])
    if W_flag is ZeroFlag.ZERO:
        flag, names = _stage(report, ("I7",))
        if flag is ZeroFlag.NONZERO:
            return _not_linearizable(report, names)
        if flag is ZeroFlag.UNKNOWN:
            return _indeterminate(report, names)
        return SymmetryClass(verdict=Verdict.SEVEN, report=report)

    flag, names = _stage(report, ("I4", "I5", "I6", "I7"))
    if flag is ZeroFlag.NONZERO:
        return _not_linearizable(report, names)
    if flag is ZeroFlag.UNKNOWN:
        return _indeterminate(report, names)

    five_flag, five_names = _stage(report, ("I9", "I10", "Ku", "I12"))
    if five_flag is ZeroFlag.ZERO:
        return SymmetryClass(verdict=Verdict.FIVE, s=report.K, report=report)

    flag, names = _stage(report, ("I9", "I10", "I11"))
    if flag is ZeroFlag.NONZERO:
        return _not_linearizable(report, names)
    if flag is ZeroFlag.UNKNOWN or five_flag is ZeroFlag.UNKNOWN and report.flag("DxK") is not ZeroFlag.NONZERO:
        return _indeterminate(report, names or five_names)

    nonvanishing = [n for n in ("I8", "DxK") if report.flag(n) is not ZeroFlag.NONZERO]
    if nonvanishing:
        if any(report.flag(n) is ZeroFlag.UNKNOWN for n in nonvanishing):
            return _indeterminate(report, nonvanishing)
        return _not_linearizable(report, nonvanishing)
    return SymmetryClass(verdict=Verdict.FOUR, K=report.K, DxK=report.DxK, report=report)


def classify(ctx: JetContext, scaling: JScaling = JScaling.LAGUERRE_FORSYTH) -> SymmetryClass:
    """Seven, five or four point symmetries, not linearizable, or indeterminate."""
    result = classify_report(compute_report(ctx, scaling))
    logger.info(f"Classified u''' = {ctx.f}: {result.verdict.description}")
    return result


def linear_rhs(c1: object, c2: object, c3: object, c4: object) -> sympy.Expr:
    """f = c1·q + c2·p + c3·u + c4."""
    return normalize(as_expr(c1) * Q + as_expr(c2) * P + as_expr(c3) * U + as_expr(c4))


def _vanishing_conditions(expr: sympy.Expr) -> list[sympy.Expr]:
    """Coefficients in x of the numerator of ``expr``: all vanish iff expr ≡ 0."""
    try:
        nf = rational_nf(expr, (X,), strict=False, grade_constant_radicals=False)
    except NotRationalForm:
        return [sympy.numer(sympy.together(expr))]
    conditions = []
    for coeff in nf.coefficients():
        condition = sympy.factor_terms(normalize(coeff))
        if condition != 0 and condition not in conditions:
            conditions.append(condition)
    return conditions


def _solve_for_params(conditions: list[sympy.Expr], params: Sequence[sympy.Symbol]) -> dict[str, list[sympy.Expr]]:
    """Explicit form of the seven-symmetry hypersurface for each parameter entering linearly."""
    solutions: dict[str, list[sympy.Expr]] = {}
    if not conditions:
        return solutions
    numerator = sympy.numer(sympy.together(conditions[0]))
    for param in params:
        try:
            if sympy.degree(numerator, param) != 1:
                continue
        except sympy.PolynomialError:
            continue
        roots = [normalize(r) for r in sympy.solve(numerator, param)]
        if roots:
            solutions[param.name] = roots
    return solutions


def classify_linear(
    c1: object,
    c2: object,
    c3: object,
    c4: object = 0,
    params: Sequence[sympy.Symbol] = (),
    config: ZeroTestConfig | None = None,
) -> SymmetryClass | ConditionReport:
    """Classify u''' = c1u″ + c2u′ + c3u + c4; parameterised coefficients give a stratification."""
    f = linear_rhs(c1, c2, c3, c4)
    present = [p for p in params if f.has(p)]
    ctx = make_context(f, params, config=config)
    if not present:
        return classify(ctx)

    report = compute_report(ctx)
    conditions = _vanishing_conditions(report.W)
    solutions = _solve_for_params(conditions, present)
    generic = {ZeroFlag.ZERO: Verdict.FIVE, ZeroFlag.NONZERO: Verdict.FOUR}.get(
        report.flag("DxK"), Verdict.INDETERMINATE
    )
    if report.flag("W") is ZeroFlag.ZERO:
        generic = Verdict.SEVEN
    return ConditionReport(
        params=[p.name for p in present],
        W=report.W,
        seven_conditions=conditions,
        seven_solutions=solutions,
        DxK=report.DxK,
        DxK_flag=report.flag("DxK"),
        generic_verdict=generic,
    )


def beam_ode(B: object, pa3: sympy.Symbol) -> sympy.Expr:
    """Bending-moment equation of a curved beam with flexural rigidity B(x):

    M''' = −(1 + pa³/B)·M′ + (pa³·B′/B²)·M, with x standing for ξ and u for M.
    """
    B = as_expr(B)
    return normalize(-(1 + pa3 / B) * P + pa3 * sympy.diff(B, X) / B**2 * U)


def beam_constraint(B: object, pa3: sympy.Symbol) -> sympy.Expr:
    """Differential constraint on B(ξ) singling out the five-symmetry beams."""
    B = as_expr(B)
    B1, B2, B3, B4 = (sympy.diff(B, X, k) for k in range(1, 5))
    return normalize(
        18 * B**3 * B1**2 * B2
        - 36 * B**2 * B1**4
        + 18 * pa3 * B**2 * B1**2 * B2
        - 9 * pa3 * B * B1**4
        + 24 * B * B1**4 * B2
        - 12 * B**2 * B1**2 * B2**2
        - 72 * B**3 * B1 * B2 * B3
        + 18 * B**3 * B1**2 * B4
        - 16 * B1**6
        + 56 * B**3 * B2**3
    )


def beam_constraint_check(B: object, pa3: sympy.Symbol, config: ZeroTestConfig | None = None) -> BeamCheck:
    """Test the constraint and cross-check it against the classification of the beam equation."""
    B = as_expr(B)
    constraint = beam_constraint(B, pa3)
    try:
        flag = ZeroTester(config).test(constraint).flag
    except EvaluationDomain:
        flag = ZeroFlag.UNKNOWN
    outcome = {ZeroFlag.ZERO: ConstraintOutcome.SATISFIES, ZeroFlag.NONZERO: ConstraintOutcome.VIOLATES}.get(
        flag, ConstraintOutcome.UNKNOWN
    )
    classification = classify(make_context(beam_ode(B, pa3), [pa3], config=config))
    if not B.has(X):
        # constant rigidity is the seven-symmetry case; the constraint holds trivially
        consistent = classification.verdict is Verdict.SEVEN
    elif outcome is ConstraintOutcome.UNKNOWN or classification.verdict is Verdict.INDETERMINATE:
        consistent = False
    else:
        consistent = (outcome is ConstraintOutcome.SATISFIES) == (classification.verdict is Verdict.FIVE)
    return BeamCheck(
        B=B, constraint=constraint, outcome=outcome, classification=classification, consistent=consistent
    )
