"""Relative invariants of u''' = f(x, u, p, q)."""

from __future__ import annotations

from functools import cached_property

import sympy
from loguru import logger

from ode_linearizer.core.errors import EvaluationDomain
from ode_linearizer.core.expr import ZeroTester, as_expr, diff, normalize
from ode_linearizer.core.jet import total_derivative
from ode_linearizer.core.radicals import cube_root
from ode_linearizer.schemas import InvariantReport, JetContext, JScaling, KConsistency, ZeroFlag
from ode_linearizer.symbols import P, Q, U, X

# order in which zero flags are reported
FLAG_ORDER = ("W", "I1", "I2", "I4", "I5", "I6", "I7", "I8", "DxK", "I9", "I10", "I11", "I12", "Ku")

_J_DEPENDENT = ("I4", "I5", "I6", "I8", "K", "DxK", "I9", "I10", "I11", "I12", "Ku")


class InvariantCalculator:
    """Partial derivatives of f and the invariants built from them, computed once per context."""

    def __init__(self, ctx: JetContext):
        self.ctx = ctx
        self.f = ctx.f

    def D(self, expr: sympy.Expr, n: int = 1) -> sympy.Expr:
        return total_derivative(self.ctx, expr, n)

    @cached_property
    def f_q(self) -> sympy.Expr:
        return diff(self.f, Q)

    @cached_property
    def f_p(self) -> sympy.Expr:
        return diff(self.f, P)

    @cached_property
    def f_u(self) -> sympy.Expr:
        return diff(self.f, U)

    @cached_property
    def f_qq(self) -> sympy.Expr:
        return diff(self.f_q, Q)

    @cached_property
    def Dx_f_q(self) -> sympy.Expr:
        return self.D(self.f_q)

    @cached_property
    def W(self) -> sympy.Expr:
        f_q, f_p = self.f_q, self.f_p
        return normalize(
            4 * f_q**3
            + 18 * f_q * (f_p - self.Dx_f_q)
            + 9 * self.D(self.Dx_f_q)
            - 27 * self.D(f_p)
            + 54 * self.f_u
        )

    @cached_property
    def I1(self) -> sympy.Expr:
        return diff(self.f_qq, Q)

    @cached_property
    def I2(self) -> sympy.Expr:
        return normalize(self.f_qq**2 + 6 * diff(self.f_qq, P))

    @cached_property
    def I7(self) -> sympy.Expr:
        f_q, f_p = self.f_q, self.f_p
        return normalize(
            self.f_qq * (9 * f_p + f_q**2 - 3 * self.Dx_f_q)
            - 9 * diff(f_p, P)
            + 18 * diff(self.f_u, Q)
            - 6 * f_q * diff(f_p, Q)
        )

    def J(self, scaling: JScaling) -> sympy.Expr:
        return compute_J(self.W, scaling)

    def J_dependent(self, J: sympy.Expr) -> dict[str, sympy.Expr]:
        """Invariants that need J; J must not vanish identically."""
        J_p = diff(J, P)
        DJ = self.D(J)
        I8 = normalize(
            ((self.f_q**2 + 3 * self.f_p - 3 * self.Dx_f_q) * J**2 + 6 * J * self.D(DJ) - 9 * DJ**2) / 3
        )
        K = normalize(I8 / J**4)
        DxK = self.D(K)
        K_u = diff(K, U)
        return {
            "I4": diff(J, Q),
            "I5": normalize(self.f_qq * J - 6 * J_p),
            "I6": normalize(diff(J, U) - self.D(J_p)),
            "I8": I8,
            "K": K,
            "DxK": DxK,
            "I9": diff(K, Q),
            "I10": diff(K, P),
            "I11": normalize(self.f_qq * DxK - 6 * K_u),
            "I12": diff(K, X),
            "Ku": K_u,
        }


def compute_W(ctx: JetContext) -> sympy.Expr:
    """W = 4f_q³ + 18f_q(f_p − D_xf_q) + 9D_x²f_q − 27D_xf_p + 54f_u."""
    return InvariantCalculator(ctx).W


def compute_J(W: object, scaling: JScaling = JScaling.LAGUERRE_FORSYTH) -> sympy.Expr:
    """Real cube root of W/54 (Laguerre–Forsyth) or −W/27 (Yumaguzhin), cube content pulled out."""
    W = as_expr(W)
    radicand = W / 54 if scaling is JScaling.LAGUERRE_FORSYTH else -W / 27
    # factored so perfect-cube polynomial factors leave the radical
    return normalize(cube_root(sympy.factor(normalize(radicand))))


def _flag(tester: ZeroTester, name: str, expr: sympy.Expr) -> ZeroFlag:
    try:
        flag = tester.test(expr).flag
    except EvaluationDomain as exc:
        logger.warning(f"{name}: no admissible sample point ({exc})")
        return ZeroFlag.UNKNOWN
    if flag is ZeroFlag.UNKNOWN:
        logger.warning(f"{name}: zero test inconclusive")
    return flag


def compute_report(ctx: JetContext, scaling: JScaling = JScaling.LAGUERRE_FORSYTH) -> InvariantReport:
    """All relative invariants of ``ctx`` under ``scaling`` with their zero flags."""
    calc = InvariantCalculator(ctx)
    tester = ZeroTester(ctx.zero_config, ctx.singular_locus_hint)
    values: dict[str, sympy.Expr | None] = {"W": calc.W, "I1": calc.I1, "I2": calc.I2, "I7": calc.I7}
    flags = {name: _flag(tester, name, values[name]) for name in ("W", "I1", "I2", "I7")}

    if flags["W"] is ZeroFlag.ZERO:
        values.update(dict.fromkeys(_J_DEPENDENT))
        values["J"] = None
    else:
        J = calc.J(scaling)
        values["J"] = J
        values.update(calc.J_dependent(J))

    for name in FLAG_ORDER:
        if name in flags:
            continue
        flags[name] = ZeroFlag.NOT_APPLICABLE if values[name] is None else _flag(tester, name, values[name])
    logger.debug(f"Invariant flags ({scaling.value}): {flags}")
    return InvariantReport(scaling=scaling, zero_flags={name: flags[name] for name in FLAG_ORDER}, **values)


def expected_K(a: object, scaling: JScaling = JScaling.LAGUERRE_FORSYTH) -> sympy.Expr:
    """K of u''' = a(x)³u: (2aa″ − 3a′²)/a⁴, divided by ∛4 under the Yumaguzhin scaling."""
    a = as_expr(a)
    a1, a2 = sympy.diff(a, X), sympy.diff(a, X, 2)
    K = (2 * a * a2 - 3 * a1**2) / a**4
    if scaling is JScaling.YUMAGUZHIN:
        K = K / cube_root(4)
    return normalize(K)


def check_K_consistency(report: InvariantReport, a: object) -> KConsistency:
    """Compare the report's K for f = a(x)³u with the closed form in a."""
    a = as_expr(a)
    if report.K is None:
        return KConsistency.CONSISTENT if normalize(a) == 0 else KConsistency.INCONSISTENT
    difference = normalize(report.K - expected_K(a, report.scaling))
    if ZeroTester().test(difference).flag is ZeroFlag.ZERO:
        return KConsistency.CONSISTENT
    return KConsistency.INCONSISTENT
