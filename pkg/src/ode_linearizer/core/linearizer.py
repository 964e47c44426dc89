"""Linearizing point transformations.

Each symmetry class has its own determining system in auxiliary functions.
The systems are assembled here from the invariant report, solved with the
ansatz search in dependency order, and the resulting (phi, psi) is verified
by exact pullback before a result is returned.

    seven             a3 -> A -> a1 -> phi -> psi      target  ubar''' = 0
    five              a1 -> phi -> psi                 target  ubar''' = s ubar' + ubar
    four (Laguerre)   H -> b -> a1 -> phi -> psi       target  ubar''' = abar(xbar)^3 ubar
    four (Yumaguzhin) a1 -> psi, phi = +-K             target  built from gbar(xbar)
"""

from __future__ import annotations

from collections.abc import Callable, Sequence

import sympy
from loguru import logger

from ode_linearizer.core.ansatz import AnsatzSolver, match_coefficients, unknown_function
from ode_linearizer.core.classifier import classify_report
from ode_linearizer.core.errors import (
    AnsatzFailed,
    EvaluationDomain,
    NoClosedFormInverse,
    NotLinearizable,
    NotPolynomialInJetVars,
    SearchBudgetExceeded,
    Undecided,
    VerificationFailed,
    WrongBranch,
)
from ode_linearizer.core.expr import ZeroTester, as_expr, diff, normalize, substitute
from ode_linearizer.core.invariants import InvariantCalculator, compute_report
from ode_linearizer.core.jet import (
    invert,
    prolong,
    pull_back,
    pullback_residual,
    total_derivative,
    verify_pulled_back,
    verify_transformation,
)
from ode_linearizer.schemas import (
    AnsatzFamily,
    AnsatzSolution,
    Branch,
    CanonicalForm,
    CanonicalTarget,
    DeterminingEquation,
    DeterminingSystem,
    InvariantReport,
    JetContext,
    JScaling,
    LinearizationResult,
    PointTransformation,
    RunConfig,
    Sign,
    SolveStatus,
    SymmetryClass,
    TargetForm,
    UnknownFunction,
    Verdict,
    VerificationResult,
    VerifyOutcome,
    ZeroFlag,
)
from ode_linearizer.symbols import JET_VARIABLES, PB, QB, UB, XB, P, Q, U, X

# f̄ of the target composed with a candidate transformation, on the source jet
Target = Callable[[PointTransformation], sympy.Expr]

_XU = ["x", "u"]
_XUP = ["x", "u", "p"]


def _unknown(name: str, arguments: list[str], nonzero: bool = True) -> tuple[UnknownFunction, sympy.Expr]:
    unknown = UnknownFunction(name=name, arguments=arguments, nonzero=nonzero)
    return unknown, sympy.Function(name)(*(sympy.Symbol(a) for a in arguments))


def _jacobian(phi: sympy.Expr, psi: sympy.Expr) -> sympy.Expr:
    return sympy.diff(phi, X) * sympy.diff(psi, U) - sympy.diff(phi, U) * sympy.diff(psi, X)


def _equation(expr: sympy.Expr, provenance: str) -> DeterminingEquation:
    return DeterminingEquation(expression=normalize(expr), provenance=provenance)


def _require(classification: SymmetryClass, expected: Verdict, branch: Branch) -> None:
    if classification.verdict is not expected:
        raise WrongBranch(
            f"the {branch.value} system needs {expected.description}; "
            f"this equation has {classification.verdict.description}",
            classification.verdict,
        )


def _lf_report(ctx: JetContext, report: InvariantReport | None) -> InvariantReport:
    if report is None or report.scaling is not JScaling.LAGUERRE_FORSYTH:
        return compute_report(ctx, JScaling.LAGUERRE_FORSYTH)
    return report


# ---------------------------------------------------------------------------
# Determining systems
# ---------------------------------------------------------------------------

def build_system_seven(ctx: JetContext, report: InvariantReport | None = None) -> DeterminingSystem:
    """a3, A, a1, phi, psi with a2 = -a3 f_qq q / 6 + A."""
    report = _lf_report(ctx, report)
    _require(classify_report(report), Verdict.SEVEN, Branch.SEVEN)
    calc = InvariantCalculator(ctx)
    D = calc.D

    a3_u, a3 = _unknown("a3", _XUP)
    A_u, A = _unknown("A", _XUP, nonzero=False)
    a1_u, a1 = _unknown("a1", _XUP)
    phi_u, phi = _unknown("phi", _XU)
    psi_u, psi = _unknown("psi", _XU)
    a2 = -a3 * calc.f_qq * Q / 6 + A

    equations = [
        _equation(D(a3) + calc.f_q * a3 / 3, "a3: D_x a3 = -f_q a3 / 3"),
        _equation(
            D(a2) - a2**2 / (2 * a3) + a3 * (2 * calc.f_q**2 + 9 * calc.f_p - 3 * calc.Dx_f_q) / 18,
            "A: Riccati equation for a2",
        ),
        _equation(D(a1) - a2 / a3 * a1, "a1: D_x a1 = (a2 / a3) a1"),
        _equation(sympy.diff(a1 / a3, P, 2), "a1: (a1 / a3)_pp = 0"),
        _equation(sympy.diff(a1**2 / a3, P), "a1: (a1^2 / a3)_p = 0"),
        _equation(D(phi) - a1 / a3, "phi: D_x phi = a1 / a3"),
        _equation(_jacobian(phi, psi) - a1**2 / a3, "psi: jacobian = a1^2 / a3"),
    ]
    return DeterminingSystem(
        branch=Branch.SEVEN,
        unknowns=[a3_u, A_u, a1_u, phi_u, psi_u],
        equations=equations,
        params=[p.name for p in ctx.params],
    )


def build_system_five(ctx: JetContext, report: InvariantReport | None = None) -> DeterminingSystem:
    report = _lf_report(ctx, report)
    _require(classify_report(report), Verdict.FIVE, Branch.FIVE)
    calc = InvariantCalculator(ctx)
    J = report.J

    a1_u, a1 = _unknown("a1", _XUP)
    phi_u, phi = _unknown("phi", _XU)
    psi_u, psi = _unknown("psi", _XU)
    equations = [
        _equation(
            calc.D(a1) - (3 * calc.D(J) - J * calc.f_q) / (3 * J) * a1,
            "a1: D_x a1 / a1 = (3 D_x J - J f_q) / (3 J)",
        ),
        _equation(calc.D(phi) - J, "phi: D_x phi = J"),
        _equation(_jacobian(phi, psi) - J * a1, "psi: jacobian = J a1"),
    ]
    return DeterminingSystem(
        branch=Branch.FIVE,
        unknowns=[a1_u, phi_u, psi_u],
        equations=equations,
        params=[p.name for p in ctx.params],
    )


def build_system_four_LF(ctx: JetContext, report: InvariantReport | None = None) -> DeterminingSystem:
    """H, b, a1, phi, psi for the Laguerre-Forsyth target."""
    report = _lf_report(ctx, report)
    _require(classify_report(report), Verdict.FOUR, Branch.FOUR_LAGUERRE)
    calc = InvariantCalculator(ctx)
    D = calc.D
    J, K = report.J, report.K

    H_u, H = _unknown("H", _XU, nonzero=False)
    b_u, b = _unknown("b", _XU)
    a1_u, a1 = _unknown("a1", _XUP)
    phi_u, phi = _unknown("phi", _XU)
    psi_u, psi = _unknown("psi", _XU)
    equations = [
        _equation(2 / J * D(H) + H**2 - K, "H: (2/J) D_x H + H^2 = K"),
        _equation(D(b) - J * H * b, "b: D_x b = J H b"),
        _equation(D(a1) - (D(J) / J - calc.f_q / 3 - J * H) * a1, "a1: D_x a1 = (D_x J / J - f_q / 3 - J H) a1"),
        _equation(D(phi) - J / b, "phi: D_x phi = J / b"),
        _equation(_jacobian(phi, psi) - J * a1 / b, "psi: jacobian = J a1 / b"),
    ]
    return DeterminingSystem(
        branch=Branch.FOUR_LAGUERRE,
        unknowns=[H_u, b_u, a1_u, phi_u, psi_u],
        equations=equations,
        params=[p.name for p in ctx.params],
    )


def build_system_four_Yum(
    ctx: JetContext, report: InvariantReport | None = None, sign: Sign = Sign.PLUS
) -> DeterminingSystem:
    """a1 and psi for the Yumaguzhin target; phi is fixed to sign * K."""
    if report is None or report.scaling is not JScaling.YUMAGUZHIN:
        report = compute_report(ctx, JScaling.YUMAGUZHIN)
    _require(classify_report(report), Verdict.FOUR, Branch.FOUR_YUMAGUZHIN)
    calc = InvariantCalculator(ctx)
    D = calc.D
    J, K, DxK = report.J, report.K, report.DxK

    a1_u, a1 = _unknown("a1", _XUP)
    phi_u, _ = _unknown("phi", _XU)
    psi_u, psi = _unknown("psi", _XU)
    equations = [
        _equation(
            D(a1) - (D(J) / J - calc.f_q / 3 - DxK / J * D(normalize(J / DxK))) * a1,
            "a1: D_x a1 = (D_x J / J - f_q / 3 - (D_x K / J) D_x(J / D_x K)) a1",
        ),
        _equation(
            sympy.diff(K, X) * sympy.diff(psi, U) - sympy.diff(K, U) * sympy.diff(psi, X) - a1 * DxK,
            "psi: K_x psi_u - K_u psi_x = a1 D_x K",
        ),
    ]
    return DeterminingSystem(
        branch=Branch.FOUR_YUMAGUZHIN,
        unknowns=[a1_u, phi_u, psi_u],
        equations=equations,
        fixed={"phi": normalize(sign.factor * K)},
        params=[p.name for p in ctx.params],
    )


# ---------------------------------------------------------------------------
# Canonical forms
# ---------------------------------------------------------------------------

def constant_coefficient_rhs(s: object) -> sympy.Expr:
    """ubar''' = s ubar' + ubar."""
    return normalize(as_expr(s) * PB + UB)


def laguerre_forsyth_rhs(a_bar: object) -> sympy.Expr:
    """ubar''' = abar(xbar)^3 ubar."""
    return as_expr(a_bar) ** 3 * UB


def yumaguzhin_coefficient(g_bar: object, sign: Sign) -> sympy.Expr:
    """G = +-xbar g^2 - 2 (g'/g)' + (g'/g)^2."""
    g = as_expr(g_bar)
    ratio = sympy.diff(g, XB) / g
    return sign.factor * XB * g**2 - 2 * sympy.diff(ratio, XB) + ratio**2


def yumaguzhin_rhs(g_bar: object, sign: Sign) -> sympy.Expr:
    """ubar''' = G ubar' + (G' - g^3) ubar / 2."""
    g = as_expr(g_bar)
    G = yumaguzhin_coefficient(g, sign)
    return sympy.powsimp(sympy.expand(G * PB + (sympy.diff(G, XB) - g**3) / 2 * UB))


def _dbar(ctx: JetContext, expr: sympy.Expr, dphi: sympy.Expr) -> sympy.Expr:
    """d/dxbar written on the source jet."""
    return normalize(total_derivative(ctx, expr) / dphi)


def laguerre_forsyth_on_source(t: PointTransformation, b: object) -> sympy.Expr:
    """abar(phi)^3 psi with abar(phi) = b."""
    return normalize(as_expr(b) ** 3 * t.psi)


def yumaguzhin_on_source(ctx: JetContext, t: PointTransformation, g_source: object, sign: Sign) -> sympy.Expr:
    """The Yumaguzhin right-hand side composed with the prolonged transformation.

    ``g_source`` is gbar(phi) as a function on the source jet; derivatives in
    xbar become D_x(.) / D_x phi.
    """
    g = as_expr(g_source)
    dphi = total_derivative(ctx, t.phi)
    ratio = normalize(_dbar(ctx, g, dphi) / g)
    G = normalize(sign.factor * t.phi * g**2 - 2 * _dbar(ctx, ratio, dphi) + ratio**2)
    ubar1, _ = prolong(ctx, t, check=False)
    return normalize(G * ubar1 + (_dbar(ctx, G, dphi) - g**3) / 2 * t.psi)


def _monomial_parts(expr: sympy.Expr, v: sympy.Symbol) -> tuple[sympy.Expr | None, sympy.Rational | None]:
    """(c, n) with expr == c * v**n, or (None, None)."""
    coeff, rest = expr.as_independent(v, as_Add=False)
    if rest == 1:
        return coeff, sympy.S.Zero
    base, exponent = rest.as_base_exp()
    if base == v and exponent.is_Rational:
        return coeff, exponent
    return None, None


def _real_power(c: sympy.Expr, r: sympy.Rational) -> sympy.Expr:
    """c**r on the real branch where one exists; (-1)**r otherwise carries the sign."""
    if r.is_integer:
        return c**r
    if c.is_negative:
        return sympy.S.NegativeOne**r * _real_power(-c, r)
    return sympy.simplify(sympy.expand_power_base(c**r))


def explicit_in_xbar(phi: object, value: object) -> sympy.Expr | None:
    """Rewrite ``value`` as a function of xbar = phi, or None when phi is not invertible here.

    Only phi linear in a single variable, or a monomial in a single
    variable, is inverted; for a monomial the value must be a monomial in
    the same variable.
    """
    phi, value = normalize(phi), normalize(value)
    base = phi.free_symbols & {X, U}
    if len(base) != 1 or phi.free_symbols - base:
        return None
    (v,) = base
    if (value.free_symbols & {X, U, P, Q}) - {v}:
        return None

    slope = sympy.diff(phi, v)
    if not slope.has(v):
        offset = normalize(phi - slope * v)
        return substitute(value, {v: (XB - offset) / slope})

    c, n = _monomial_parts(phi, v)
    if c is None:
        return None
    d, m = _monomial_parts(value, v)
    if d is None:
        return None
    exponent = m / n
    return d * _real_power(c, -exponent) * XB**exponent


def _is_complex(expr: sympy.Expr | None) -> bool:
    return expr is not None and expr.has(sympy.I)


# ---------------------------------------------------------------------------
# Pipeline
# ---------------------------------------------------------------------------

class Linearizer:
    """Classify, build the branch system, solve it and verify the result."""

    def __init__(
        self,
        config: RunConfig | None = None,
        families: Sequence[AnsatzFamily] | None = None,
        budget: int | None = None,
    ):
        self.config = config or RunConfig()
        self.families = list(families) if families is not None else self.config.ansatz_families()
        self.budget = budget if budget is not None else self.config.ansatz_budget

    def _solve(self, ctx: JetContext, system: DeterminingSystem) -> AnsatzSolution:
        solver = AnsatzSolver(self.families, self.budget, ctx.zero_config)
        try:
            solution = solver.solve(system)
        except SearchBudgetExceeded as exc:
            raise AnsatzFailed(f"{system.branch.value}: {exc}", system) from exc
        if solution.status is SolveStatus.FAILED:
            missing = [u.name for u in system.unknowns if u.name not in solution.bindings]
            raise AnsatzFailed(
                f"{system.branch.value}: no ansatz solution for {', '.join(missing)}", solution.residual or system
            )
        logger.info(f"{system.branch.value} system solved after {solution.candidates_tried} candidates")
        return solution

    @staticmethod
    def _identity_flag(ctx: JetContext, expr: sympy.Expr) -> ZeroFlag:
        try:
            return ZeroTester(ctx.zero_config, ctx.singular_locus_hint).test(expr).flag
        except EvaluationDomain:
            return ZeroFlag.UNKNOWN

    @staticmethod
    def _auxiliaries(bindings: dict[str, sympy.Expr]) -> dict[str, sympy.Expr]:
        return {name: value for name, value in bindings.items() if name not in ("phi", "psi")}

    def linearize(
        self, ctx: JetContext, target: CanonicalTarget | None = None, sign: Sign | None = None
    ) -> LinearizationResult:
        target = target or self.config.target
        sign = sign or self.config.sign
        report = compute_report(ctx, JScaling.LAGUERRE_FORSYTH)
        classification = classify_report(report)
        verdict = classification.verdict

        if verdict is Verdict.NOT_LINEARIZABLE:
            raise NotLinearizable(
                f"u''' = {ctx.f} is not linearizable: {', '.join(classification.failing)} do not vanish",
                classification.failing,
            )
        if verdict is Verdict.INDETERMINATE:
            raise Undecided(
                f"zero tests inconclusive for {', '.join(classification.undecided)}", classification.undecided
            )
        if verdict is not Verdict.FOUR and target is not CanonicalTarget.AUTO:
            canonical = "ubar''' = 0" if verdict is Verdict.SEVEN else "ubar''' = s ubar' + ubar"
            raise WrongBranch(
                f"the {target.value} form needs four point symmetries; this equation has "
                f"{verdict.description} and linearizes to {canonical}",
                verdict,
            )

        if verdict is Verdict.SEVEN:
            result = self._seven(ctx, report)
        elif verdict is Verdict.FIVE:
            result = self._five(ctx, report, classification)
        elif target is CanonicalTarget.YUMAGUZHIN:
            result = self._yumaguzhin(ctx, sign)
        else:
            result = self._laguerre(ctx, report)

        if not result.verification.verified:
            raise VerificationFailed(
                f"transformation ({result.transformation.phi}, {result.transformation.psi}) "
                f"is {result.verification.outcome.value}",
                result,
            )
        return result

    def _particular_shift(
        self, ctx: JetContext, t: PointTransformation, target: Target
    ) -> PointTransformation | None:
        """t with psi + chi(phi), chi a Laurent polynomial in phi absorbing an inhomogeneous term.

        chi(phi) leaves the Jacobian unchanged, so only the pullback condition
        decides it; that condition is linear in the coefficients of chi.
        """
        bound = self.config.ansatz_degree
        powers = sorted(range(-bound, bound + 1), key=lambda e: (abs(e), e))
        constants = tuple(sympy.Dummy(f"k{i}") for i in range(len(powers)))
        chi = sympy.Add(*(k * t.phi**e for k, e in zip(constants, powers)))
        trial = PointTransformation(phi=t.phi, psi=t.psi + chi)
        try:
            conditions = match_coefficients(pullback_residual(ctx, trial, target(trial)), JET_VARIABLES)
            solutions = sympy.linsolve(conditions, constants) if conditions else sympy.S.EmptySet
        except (NotPolynomialInJetVars, ValueError) as exc:
            logger.debug(f"no particular shift for ({t.phi}, {t.psi}): {exc}")
            return None
        if solutions == sympy.S.EmptySet:
            return None
        values = next(iter(solutions))
        shift = chi.subs(dict(zip(constants, values)), simultaneous=True).subs(dict.fromkeys(constants, 0))
        logger.debug(f"particular shift for ({t.phi}, {t.psi}): {shift}")
        return PointTransformation(phi=t.phi, psi=normalize(t.psi + shift))

    def _open_psi_system(
        self, ctx: JetContext, system: DeterminingSystem, bindings: dict[str, sympy.Expr], target: Target
    ) -> DeterminingSystem:
        """Everything but psi fixed, plus the pullback condition on psi itself."""
        psi = unknown_function(system.unknown("psi"))
        open_t = PointTransformation(phi=bindings["phi"], psi=psi)
        condition = _equation(pullback_residual(ctx, open_t, target(open_t)), "psi: pullback onto the canonical form")
        fixed = {name: value for name, value in bindings.items() if name != "psi"}
        return system.model_copy(update={"fixed": fixed, "equations": [*system.equations, condition]})

    def _settle(
        self, ctx: JetContext, system: DeterminingSystem, solution: AnsatzSolution, target: Target
    ) -> tuple[PointTransformation, VerificationResult]:
        """First psi whose transformation verifies.

        The Jacobian equation fixes psi only up to a function of phi, so the
        solved value and its alternates are tried as they are and then shifted
        by a particular solution. A refuted search ends in AnsatzFailed.
        """
        phi = solution.bindings["phi"]
        choices = [solution.bindings["psi"], *solution.alternates.get("psi", [])]
        for psi in choices:
            t = PointTransformation(phi=phi, psi=psi)
            verification = verify_pulled_back(ctx, t, target(t))
            if verification.outcome is not VerifyOutcome.REFUTED:
                return t, verification
        for psi in choices:
            shifted = self._particular_shift(ctx, PointTransformation(phi=phi, psi=psi), target)
            if shifted is None:
                continue
            verification = verify_pulled_back(ctx, shifted, target(shifted))
            if verification.verified:
                logger.info(f"psi = {psi} shifted to {shifted.psi}")
                return shifted, verification
        raise AnsatzFailed(
            f"{system.branch.value}: no psi with phi = {phi} maps onto the canonical form",
            self._open_psi_system(ctx, system, solution.bindings, target),
        )

    @staticmethod
    def _explicit_target(ctx: JetContext, rhs: sympy.Expr) -> Target:
        return lambda t: pull_back(ctx, t, rhs, check=False)

    def _seven(self, ctx: JetContext, report: InvariantReport) -> LinearizationResult:
        system = build_system_seven(ctx, report)
        solution = self._solve(ctx, system)
        canonical = CanonicalForm(form=TargetForm.TRIVIAL, rhs=sympy.S.Zero)
        t, verification = self._settle(ctx, system, solution, lambda _: sympy.S.Zero)
        return LinearizationResult(
            verdict=Verdict.SEVEN,
            transformation=t,
            canonical=canonical,
            auxiliaries=self._auxiliaries(solution.bindings),
            alternates=solution.alternates,
            verification=verification,
        )

    def _five(self, ctx: JetContext, report: InvariantReport, classification: SymmetryClass) -> LinearizationResult:
        system = build_system_five(ctx, report)
        solution = self._solve(ctx, system)
        s = classification.s
        canonical = CanonicalForm(form=TargetForm.CONSTANT, rhs=constant_coefficient_rhs(s), s=s)
        t, verification = self._settle(ctx, system, solution, self._explicit_target(ctx, canonical.rhs))
        return LinearizationResult(
            verdict=Verdict.FIVE,
            transformation=t,
            canonical=canonical,
            auxiliaries=self._auxiliaries(solution.bindings),
            alternates=solution.alternates,
            verification=verification,
        )

    def _laguerre(self, ctx: JetContext, report: InvariantReport) -> LinearizationResult:
        system = build_system_four_LF(ctx, report)
        solution = self._solve(ctx, system)
        phi, b = solution.bindings["phi"], solution.bindings["b"]
        a_bar = explicit_in_xbar(phi, b)
        checks: dict[str, ZeroFlag] = {}
        if a_bar is None:
            canonical = CanonicalForm(form=TargetForm.LAGUERRE_FORSYTH, implicit={"xbar": phi, "a": b})
            target: Target = lambda t: laguerre_forsyth_on_source(t, b)  # noqa: E731
        else:
            canonical = CanonicalForm(
                form=TargetForm.LAGUERRE_FORSYTH, rhs=laguerre_forsyth_rhs(a_bar), a_bar=a_bar
            )
            target = self._explicit_target(ctx, canonical.rhs)
            checks["a_identity"] = self._identity_flag(ctx, normalize(a_bar.subs(XB, phi) - b))
        t, verification = self._settle(ctx, system, solution, target)
        return LinearizationResult(
            verdict=Verdict.FOUR,
            transformation=t,
            canonical=canonical,
            auxiliaries=self._auxiliaries(solution.bindings),
            alternates=solution.alternates,
            verification=verification,
            identity_checks=checks,
        )

    def _yumaguzhin_form(self, report: InvariantReport, sign: Sign) -> CanonicalForm:
        phi = normalize(sign.factor * report.K)
        g_source = normalize(sign.factor * report.J / report.DxK)
        g_bar = explicit_in_xbar(phi, g_source)
        if g_bar is None:
            return CanonicalForm(form=TargetForm.YUMAGUZHIN, sign=sign, implicit={"xbar": phi, "g": g_source})
        return CanonicalForm(
            form=TargetForm.YUMAGUZHIN,
            rhs=yumaguzhin_rhs(g_bar, sign),
            g_bar=g_bar,
            sign=sign,
            complex_branch=_is_complex(g_bar),
            implicit={"xbar": phi, "g": g_source} if _is_complex(g_bar) else {},
        )

    def _yumaguzhin(self, ctx: JetContext, sign: Sign | None) -> LinearizationResult:
        report = compute_report(ctx, JScaling.YUMAGUZHIN)
        forms = {s: self._yumaguzhin_form(report, s) for s in (Sign.PLUS, Sign.MINUS)}
        if sign is None:
            # first sign with a real gbar; plus when neither could be made explicit
            real = [s for s in (Sign.PLUS, Sign.MINUS) if forms[s].g_bar is not None and not forms[s].complex_branch]
            sign = real[0] if real else Sign.PLUS
        chosen = forms[sign]
        other = forms[Sign.MINUS if sign is Sign.PLUS else Sign.PLUS]
        if chosen.complex_branch:
            logger.warning(f"sign {sign.value} gives a complex gbar = {chosen.g_bar}")

        system = build_system_four_Yum(ctx, report, sign)
        solution = self._solve(ctx, system)
        g_source = normalize(sign.factor * report.J / report.DxK)
        checks: dict[str, ZeroFlag] = {}
        if chosen.g_bar is not None and not chosen.complex_branch:
            target = self._explicit_target(ctx, chosen.rhs)
            residual = normalize(chosen.g_bar.subs(XB, solution.bindings["phi"]) * report.DxK - sign.factor * report.J)
            checks["g_identity"] = self._identity_flag(ctx, residual)
        else:
            target = lambda t: yumaguzhin_on_source(ctx, t, g_source, sign)  # noqa: E731
        t, verification = self._settle(ctx, system, solution, target)
        return LinearizationResult(
            verdict=Verdict.FOUR,
            transformation=t,
            canonical=chosen,
            auxiliaries=self._auxiliaries(solution.bindings),
            alternates=solution.alternates,
            verification=verification,
            identity_checks=checks,
            rejected_branch=other if other.complex_branch else None,
        )


def linearize(
    ctx: JetContext,
    target: CanonicalTarget = CanonicalTarget.AUTO,
    sign: Sign | None = None,
    config: RunConfig | None = None,
) -> LinearizationResult:
    """Verified linearizing transformation of ``ctx`` onto its canonical form."""
    return Linearizer(config).linearize(ctx, target, sign)


def pushforward(ctx: JetContext, t: PointTransformation) -> sympy.Expr:
    """fbar such that (phi, psi) maps u''' = f onto ubar''' = fbar."""
    ubar1, ubar2 = prolong(ctx, t)
    dphi = total_derivative(ctx, t.phi)
    fbar_on_source = normalize(total_derivative(ctx, ubar2) / dphi)
    x_of, u_of = invert(t)

    q_roots = sympy.solve(sympy.Eq(ubar2, QB), Q)
    if len(q_roots) != 1:
        raise NoClosedFormInverse(f"second prolongation of ({t.phi}, {t.psi}) does not solve uniquely for q")
    phi_x, phi_u = diff(t.phi, X), diff(t.phi, U)
    psi_x, psi_u = diff(t.psi, X), diff(t.psi, U)
    p_of = (PB * phi_x - psi_x) / (psi_u - PB * phi_u)

    result = substitute(fbar_on_source, {Q: q_roots[0]})
    result = substitute(result, {P: p_of})
    result = substitute(result, {X: x_of, U: u_of})
    logger.debug(f"pushforward of {ctx.f} through ({t.phi}, {t.psi}): {result}")
    return result


def verify_result(ctx: JetContext, result: LinearizationResult) -> VerificationResult:
    """Re-run the pullback check of a result, against its explicit target where it has one."""
    canonical = result.canonical
    if canonical.rhs is not None and not canonical.complex_branch:
        return verify_transformation(ctx, result.transformation, canonical.rhs)
    if canonical.form is TargetForm.LAGUERRE_FORSYTH:
        return verify_pulled_back(
            ctx, result.transformation, laguerre_forsyth_on_source(result.transformation, canonical.implicit["a"])
        )
    return verify_pulled_back(
        ctx,
        result.transformation,
        yumaguzhin_on_source(ctx, result.transformation, canonical.implicit["g"], canonical.sign),
    )
