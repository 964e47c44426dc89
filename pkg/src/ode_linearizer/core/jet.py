"""Jet-space calculus on (x, u, p, q) for u''' = f(x, u, p, q)."""

from __future__ import annotations

from collections.abc import Sequence

import sympy
from loguru import logger

from ode_linearizer.core.errors import DegenerateTransformation, EvaluationDomain, NoClosedFormInverse
from ode_linearizer.core.expr import ZeroTester, as_expr, normalize, substitute
from ode_linearizer.schemas import (
    JetContext,
    PointTransformation,
    VerificationResult,
    VerifyOutcome,
    ZeroFlag,
    ZeroTestConfig,
    ZeroTestMethod,
    ZeroTestOutcome,
)
from ode_linearizer.symbols import PB, QB, UB, XB, P, Q, U, X


def make_context(
    f: object,
    params: Sequence[sympy.Symbol] = (),
    *,
    hint: object | None = None,
    config: ZeroTestConfig | None = None,
) -> JetContext:
    return JetContext(
        f=normalize(f),
        params=list(params),
        singular_locus_hint=None if hint is None else as_expr(hint),
        zero_config=config or ZeroTestConfig(),
    )


def total_derivative(ctx: JetContext, expr: object, n: int = 1) -> sympy.Expr:
    """D_x = ∂x + p ∂u + q ∂p + f ∂q applied ``n`` times."""
    if n < 1:
        raise ValueError("order must be positive")
    result = as_expr(expr)
    for _ in range(n):
        result = normalize(
            sympy.diff(result, X)
            + P * sympy.diff(result, U)
            + Q * sympy.diff(result, P)
            + ctx.f * sympy.diff(result, Q)
        )
    return result


def _tester(ctx: JetContext, *extra: sympy.Expr | None) -> ZeroTester:
    factors = [e for e in (ctx.singular_locus_hint, *extra) if e is not None]
    return ZeroTester(ctx.zero_config, sympy.Mul(*factors) if factors else None)


def _checked_dphi(ctx: JetContext, t: PointTransformation) -> sympy.Expr:
    jacobian = normalize(t.jacobian)
    if jacobian == 0 or _tester(ctx).test(jacobian).flag is ZeroFlag.ZERO:
        raise DegenerateTransformation(f"({t.phi}, {t.psi}) has an identically zero Jacobian")
    dphi = total_derivative(ctx, t.phi)
    if dphi == 0 or _tester(ctx).test(dphi).flag is ZeroFlag.ZERO:
        raise DegenerateTransformation(f"D_x({t.phi}) vanishes identically")
    return dphi


def _prolongation(ctx: JetContext, t: PointTransformation) -> tuple[sympy.Expr, sympy.Expr, sympy.Expr]:
    dphi = total_derivative(ctx, t.phi)
    ubar1 = normalize(total_derivative(ctx, t.psi) / dphi)
    ubar2 = normalize(total_derivative(ctx, ubar1) / dphi)
    return dphi, ubar1, ubar2


def prolong(ctx: JetContext, t: PointTransformation, *, check: bool = True) -> tuple[sympy.Expr, sympy.Expr]:
    """Transformed first and second derivatives (ubar1 in x,u,p; ubar2 in x,u,p,q).

    ``check=False`` skips the degeneracy tests, for transformations that still
    contain unknown functions or undetermined constants.
    """
    if check:
        _checked_dphi(ctx, t)
    _, ubar1, ubar2 = _prolongation(ctx, t)
    return ubar1, ubar2


def pullback_residual(ctx: JetContext, t: PointTransformation, target_on_source: object) -> sympy.Expr:
    """D_x(ubar2) - (f̄∘σ)·D_xφ; vanishes identically iff t maps u''' = f onto the target."""
    dphi, _, ubar2 = _prolongation(ctx, t)
    return normalize(total_derivative(ctx, ubar2) - as_expr(target_on_source) * dphi)


def _decide(ctx: JetContext, t: PointTransformation, residual: sympy.Expr) -> VerificationResult:
    tester = _tester(ctx, t.jacobian)
    try:
        outcome = tester.test(residual)
    except EvaluationDomain as exc:
        logger.warning(f"Verification undecided: {exc}")
        outcome = ZeroTestOutcome(flag=ZeroFlag.UNKNOWN, method=ZeroTestMethod.SAMPLED)
    if outcome.flag is ZeroFlag.ZERO:
        status = VerifyOutcome.VERIFIED
        witness = None
    elif outcome.flag is ZeroFlag.NONZERO:
        status = VerifyOutcome.REFUTED
        witness = outcome.witness or tester.witness(residual)
    else:
        status = VerifyOutcome.UNKNOWN
        witness = None
    logger.info(f"Transformation ({t.phi}, {t.psi}): {status.value}")
    return VerificationResult(outcome=status, residual=residual, zero_test=outcome, witness=witness)


def verify_pulled_back(ctx: JetContext, t: PointTransformation, target_on_source: object) -> VerificationResult:
    """Check D_x(ubar2) = (f̄∘σ)·D_xφ with f̄∘σ already written on the source jet."""
    _checked_dphi(ctx, t)
    return _decide(ctx, t, pullback_residual(ctx, t, target_on_source))


def pull_back(ctx: JetContext, t: PointTransformation, fbar: object, *, check: bool = True) -> sympy.Expr:
    """f̄ ∘ σ with σ = {x̄→φ, ū→ψ, p̄→ubar1, q̄→ubar2}."""
    ubar1, ubar2 = prolong(ctx, t, check=check)
    return substitute(fbar, {XB: t.phi, UB: t.psi, PB: ubar1, QB: ubar2})


def verify_transformation(ctx: JetContext, t: PointTransformation, fbar: object) -> VerificationResult:
    """Verified iff (φ, ψ) maps u''' = f onto ū''' = f̄, checked in source coordinates."""
    fbar = as_expr(fbar)
    stray = fbar.free_symbols - {XB, UB, PB, QB, *ctx.params}
    if stray:
        raise ValueError(f"target has symbols outside the barred jet: {', '.join(sorted(s.name for s in stray))}")
    return verify_pulled_back(ctx, t, pull_back(ctx, t, fbar))


def compose(first: PointTransformation, second: PointTransformation) -> PointTransformation:
    """second ∘ first: apply ``first``, then ``second`` in its image coordinates."""
    bindings = {X: first.phi, U: first.psi}
    return PointTransformation(phi=substitute(second.phi, bindings), psi=substitute(second.psi, bindings))


def invert(t: PointTransformation) -> tuple[sympy.Expr, sympy.Expr]:
    """(x, u) as expressions in (x̄, ū); raises NoClosedFormInverse unless unique."""
    try:
        solutions = sympy.solve([XB - t.phi, UB - t.psi], [X, U], dict=True)
    except NotImplementedError as exc:
        raise NoClosedFormInverse(str(exc)) from exc
    if len(solutions) != 1 or set(solutions[0]) != {X, U}:
        raise NoClosedFormInverse(f"({t.phi}, {t.psi}) has {len(solutions)} inverse branch(es)")
    solution = solutions[0]
    return normalize(solution[X]), normalize(solution[U])
