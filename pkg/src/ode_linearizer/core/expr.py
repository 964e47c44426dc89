"""Exact symbolic kernel.

Expressions are sympy trees. This module fixes the canonical form used across
the package (``normalize``), the radical-graded rational normal form used for
exact identity tests (``rational_nf``), and a seeded sampling test for
everything outside that class.
"""

from __future__ import annotations

import random
from collections import defaultdict
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

import sympy
from loguru import logger
from sympy.core.function import AppliedUndef

from ode_linearizer.core.errors import (
    DivisionByZero,
    EvaluationDomain,
    NegativeEvenRoot,
    NotRationalForm,
    UnsupportedNode,
)
from ode_linearizer.core.radicals import Cbrt, radical_atoms
from ode_linearizer.schemas import ZeroFlag, ZeroTestConfig, ZeroTestMethod, ZeroTestOutcome
from ode_linearizer.symbols import ordered_symbols, symbol_key

SUPPORTED_FUNCTIONS: tuple[type, ...] = (sympy.exp, sympy.log, sympy.sin, sympy.cos, Cbrt)

DEFAULT_ZERO_CONFIG = ZeroTestConfig()


def _check_supported(expr: sympy.Basic) -> None:
    for node in expr.atoms(sympy.Function):
        if isinstance(node, SUPPORTED_FUNCTIONS) or isinstance(node, AppliedUndef):
            continue
        raise UnsupportedNode(f"Unsupported function: {node.func}")


def as_expr(value: object) -> sympy.Expr:
    if isinstance(value, Fraction):
        return sympy.Rational(value.numerator, value.denominator)
    return sympy.sympify(value)


def normalize(expr: object) -> sympy.Expr:
    """Canonical form: a single cancelled fraction with expanded numerator and denominator."""
    expr = as_expr(expr)
    _check_supported(expr)
    if expr.is_Atom:
        return expr
    return sympy.cancel(sympy.together(expr))


def diff(expr: object, variable: sympy.Symbol, order: int = 1) -> sympy.Expr:
    return normalize(sympy.diff(as_expr(expr), variable, order))


def substitute(expr: object, bindings: Mapping[sympy.Basic, object]) -> sympy.Expr:
    """Simultaneous substitution followed by normalization."""
    expr = as_expr(expr)
    if not bindings:
        return normalize(expr)
    mapping = {key: as_expr(value) for key, value in bindings.items()}
    replaced = expr.subs(mapping, simultaneous=True)
    if replaced.has(sympy.Derivative):
        replaced = replaced.doit()
    return normalize(replaced)


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

def _rational(value: object) -> sympy.Rational:
    if isinstance(value, Fraction):
        return sympy.Rational(value.numerator, value.denominator)
    result = sympy.sympify(value)
    if not result.is_Rational:
        raise ValueError(f"sample coordinate must be rational, got {value!r}")
    return result


def _is_pole(value: sympy.Basic) -> bool:
    return value.has(sympy.zoo, sympy.nan, sympy.oo, -sympy.oo)


def _numeric(value: sympy.Expr, precision: int) -> sympy.Float:
    number = sympy.N(value, precision)
    if _is_pole(number):
        raise DivisionByZero("pole at evaluation point")
    real, imag = number.as_real_imag()
    if abs(imag) > sympy.Float(10) ** (-precision // 2) * (1 + abs(real)):
        raise NegativeEvenRoot(f"non-real value {number}")
    return sympy.Float(real, precision)


def evaluate(
    expr: object,
    point: Mapping[sympy.Symbol, object],
    mode: Literal["exact", "float"] = "exact",
) -> Fraction | sympy.Float | float:
    """Value of ``expr`` at a rational point.

    Exact mode returns a Fraction when the value is rational and a 50-digit
    Float otherwise (irrational cube roots); float mode returns a double.
    """
    expr = as_expr(expr)
    bindings = {symbol: _rational(value) for symbol, value in point.items()}
    missing = expr.free_symbols - set(bindings)
    if missing:
        raise ValueError(f"point does not bind: {', '.join(sorted(s.name for s in missing))}")
    value = expr.xreplace(bindings)
    if _is_pole(value):
        raise DivisionByZero(f"pole of {expr} at {point}")
    if mode == "exact" and value.is_Rational:
        return Fraction(int(value.p), int(value.q))
    number = _numeric(value, 50)
    if mode == "float":
        return float(number)
    return number


# ---------------------------------------------------------------------------
# Radical-graded rational normal form
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RationalNF:
    """numerator / denominator with the numerator split by radical grade.

    ``components`` maps a grade (k_1, ..., k_n), k_i ∈ {0, 1, 2}, standing for
    ∏ Cbrt(radicand_i)^k_i, to a polynomial over ``variables``. Distinct grades
    are treated as linearly independent: radicands are assumed not to be
    perfect cubes of non-monomial factors.
    """

    variables: tuple[sympy.Symbol, ...]
    radicands: tuple[sympy.Expr, ...]
    components: dict[tuple[int, ...], sympy.Poly]
    denominator: sympy.Expr
    graded_symbolic: bool = False

    @property
    def is_zero(self) -> bool:
        return all(poly.is_zero for poly in self.components.values())

    def coefficients(self) -> list[sympy.Expr]:
        """Every coefficient of every graded component, in a fixed order."""
        result = []
        for key in sorted(self.components):
            poly = self.components[key]
            if poly.is_zero:
                continue
            result.extend(poly.coeffs())
        return result

    def as_expr(self) -> sympy.Expr:
        total = sympy.S.Zero
        for key, poly in self.components.items():
            weight = sympy.Mul(*(Cbrt(base) ** k for base, k in zip(self.radicands, key)))
            total += weight * poly.as_expr()
        return normalize(total / self.denominator)


def _is_strictly_rational(expr: sympy.Basic) -> bool:
    for node in sympy.preorder_traversal(expr):
        if isinstance(node, sympy.Pow) and not node.exp.is_Integer:
            return False
        if isinstance(node, (sympy.Function, sympy.Derivative)) and not isinstance(node, Cbrt):
            return False
        if isinstance(node, sympy.Number) and not node.is_Rational:
            return False
        if node in (sympy.I, sympy.pi, sympy.E):
            return False
    return True


def rational_nf(
    expr: object,
    variables: Sequence[sympy.Symbol] | None = None,
    *,
    strict: bool = True,
    grade_constant_radicals: bool = True,
) -> RationalNF:
    """Bring ``expr`` into radical-graded rational normal form over ``variables``.

    With ``strict`` the expression must be built from rationals, symbols,
    integer powers and cube roots only; otherwise anything free of the
    variables is kept in the coefficient domain. Raises NotRationalForm.
    """
    expr = as_expr(expr)
    if strict and not _is_strictly_rational(expr):
        raise NotRationalForm("expression leaves the rational/cube-root class")
    atoms = radical_atoms(expr)
    if not grade_constant_radicals:
        atoms = [atom for atom in atoms if atom.free_symbols]
    for atom in atoms:
        if atom.args[0].atoms(Cbrt):
            raise NotRationalForm("nested cube roots")
    dummies = [sympy.Dummy(f"r{i}") for i in range(len(atoms))]
    replaced = expr.xreplace(dict(zip(atoms, dummies)))
    if variables is None:
        variables = ordered_symbols(replaced)
    variables = tuple(v for v in variables if v not in dummies)
    gens = variables + tuple(dummies)
    if gens and not replaced.is_rational_function(*gens):
        raise NotRationalForm("not a rational function of the jet variables")

    numerator, denominator = sympy.fraction(sympy.cancel(sympy.together(replaced)))
    if dummies and denominator.has(*dummies):
        try:
            if not sympy.Poly(denominator, *dummies).is_monomial:
                raise NotRationalForm("cube roots in a non-monomial denominator")
        except sympy.PolynomialError as exc:
            raise NotRationalForm(str(exc)) from exc
    if not gens:
        poly = sympy.Poly(numerator, sympy.Dummy("t"))
        return RationalNF((), (), {(): poly}, denominator)

    try:
        numerator_poly = sympy.Poly(numerator, *gens)
    except sympy.PolynomialError as exc:
        raise NotRationalForm(str(exc)) from exc

    radicands = tuple(atom.args[0] for atom in atoms)
    n_vars = len(variables)
    graded: dict[tuple[int, ...], sympy.Expr] = defaultdict(lambda: sympy.S.Zero)
    for monom, coeff in numerator_poly.terms():
        var_part, rad_part = monom[:n_vars], monom[n_vars:]
        term = coeff * sympy.Mul(*(v**k for v, k in zip(variables, var_part)))
        term *= sympy.Mul(*(base ** (k // 3) for base, k in zip(radicands, rad_part)))
        graded[tuple(k % 3 for k in rad_part)] += term

    components = {}
    for key in sorted(graded):
        component = sympy.numer(sympy.together(graded[key]))
        components[key] = sympy.Poly(sympy.expand(component), *variables) if variables else sympy.Poly(
            component, sympy.Dummy("t")
        )
    back = {dummy: atom for dummy, atom in zip(dummies, atoms)}
    return RationalNF(
        variables=variables,
        radicands=radicands,
        components=components,
        denominator=denominator.xreplace(back),
        graded_symbolic=any(atom.free_symbols for atom in atoms),
    )


# ---------------------------------------------------------------------------
# Zero testing
# ---------------------------------------------------------------------------

class ZeroTester:
    """Exact zero test with a seeded sampling fallback.

    The sampling RNG is seeded from the configured seed and the expression
    text, so results depend on neither call order nor thread.
    """

    def __init__(self, config: ZeroTestConfig | None = None, hint: sympy.Expr | None = None):
        self.config = config or DEFAULT_ZERO_CONFIG
        self.hint = hint

    def test(self, expr: object) -> ZeroTestOutcome:
        expr = as_expr(expr)
        if expr == 0:
            return ZeroTestOutcome(flag=ZeroFlag.ZERO, method=ZeroTestMethod.EXACT)
        try:
            nf = rational_nf(expr)
        except NotRationalForm as exc:
            logger.debug(f"Exact zero test unavailable ({exc}); sampling")
            return self.sample(expr)
        if nf.is_zero:
            return ZeroTestOutcome(flag=ZeroFlag.ZERO, method=ZeroTestMethod.EXACT)
        if nf.graded_symbolic:
            # grade independence is an assumption for symbolic radicands
            try:
                sampled = self.sample(expr)
            except EvaluationDomain:
                return ZeroTestOutcome(flag=ZeroFlag.NONZERO, method=ZeroTestMethod.EXACT)
            if sampled.flag is not ZeroFlag.NONZERO:
                logger.warning("Graded form is nonzero but samples vanish; reporting unknown")
                return sampled.model_copy(update={"flag": ZeroFlag.UNKNOWN})
            return sampled.model_copy(update={"method": ZeroTestMethod.EXACT})
        return ZeroTestOutcome(flag=ZeroFlag.NONZERO, method=ZeroTestMethod.EXACT)

    def _rng(self, expr: sympy.Expr) -> random.Random:
        return random.Random(f"{self.config.seed}:{sympy.sstr(expr, order='lex')}")

    def _coordinate(self, rng: random.Random) -> sympy.Rational:
        denominator = rng.randint(1, self.config.max_denominator)
        bound = self.config.box * denominator
        return sympy.Rational(rng.randint(-bound, bound), denominator)

    def _admissible(self, point: dict[sympy.Symbol, sympy.Rational]) -> bool:
        if self.hint is None:
            return True
        value = self.hint.xreplace(point)
        return not (_is_pole(value) or value == 0)

    def sample_points(self, expr: sympy.Expr, count: int) -> Iterable[dict[sympy.Symbol, sympy.Rational]]:
        """Yield admissible rational points for ``expr`` (poles and the hint's zero set excluded)."""
        rng = self._rng(expr)
        symbols = ordered_symbols(expr, self.hint)
        produced = attempts = 0
        while produced < count:
            attempts += 1
            if attempts > self.config.max_attempts:
                raise EvaluationDomain(f"no admissible sample point after {self.config.max_attempts} attempts")
            point = {symbol: self._coordinate(rng) for symbol in symbols}
            if not self._admissible(point):
                continue
            produced += 1
            yield point

    def _value_and_scale(self, expr: sympy.Expr, point) -> tuple[sympy.Float, sympy.Float]:
        precision = self.config.precision
        value = expr.xreplace(point)
        if _is_pole(value):
            raise DivisionByZero("pole")
        number = _numeric(value, precision)
        scale = max((abs(_numeric(term.xreplace(point), precision)) for term in sympy.Add.make_args(expr)),
                    default=sympy.Float(0))
        return number, scale

    def sample(self, expr: sympy.Expr) -> ZeroTestOutcome:
        """Evaluate at N admissible rational points and compare against the tolerances."""
        cfg = self.config
        values = []
        rejected = 0
        points = self.sample_points(expr, cfg.samples + cfg.max_attempts)
        for point in points:
            try:
                number, scale = self._value_and_scale(expr, point)
            except (DivisionByZero, NegativeEvenRoot):
                rejected += 1
                if rejected > cfg.max_attempts:
                    raise EvaluationDomain("every sample point hit a pole or a non-real branch") from None
                continue
            if abs(number) > cfg.eps_rej:
                return ZeroTestOutcome(
                    flag=ZeroFlag.NONZERO,
                    method=ZeroTestMethod.SAMPLED,
                    samples=len(values) + 1,
                    witness={symbol.name: str(value) for symbol, value in point.items()},
                )
            values.append((number, scale))
            if len(values) == cfg.samples:
                break
        if len(values) < cfg.samples:
            raise EvaluationDomain("not enough admissible sample points")
        if all(abs(number) <= cfg.eps_abs * (1 + scale) for number, scale in values):
            return ZeroTestOutcome(
                flag=ZeroFlag.ZERO,
                method=ZeroTestMethod.SAMPLED,
                confidence=1 - 2.0 ** (-cfg.samples),
                samples=len(values),
            )
        return ZeroTestOutcome(flag=ZeroFlag.UNKNOWN, method=ZeroTestMethod.SAMPLED, samples=len(values))

    def witness(self, expr: object) -> dict[str, str] | None:
        """First sample point where ``expr`` is clearly nonzero, if any."""
        expr = as_expr(expr)
        try:
            for point in self.sample_points(expr, self.config.samples * 4):
                try:
                    number, _ = self._value_and_scale(expr, point)
                except (DivisionByZero, NegativeEvenRoot):
                    continue
                if abs(number) > self.config.eps_rej:
                    return {symbol.name: str(value) for symbol, value in point.items()}
        except EvaluationDomain:
            return None
        return None


def zero_test(expr: object, config: ZeroTestConfig | None = None, hint: sympy.Expr | None = None) -> ZeroTestOutcome:
    return ZeroTester(config, hint).test(expr)


def is_zero(expr: object, config: ZeroTestConfig | None = None, hint: sympy.Expr | None = None) -> ZeroFlag:
    """Zero / NonZero / Unknown; Zero and NonZero are sound up to the recorded confidence."""
    return zero_test(expr, config, hint).flag


def sort_key(expr: sympy.Basic) -> tuple:
    """Deterministic ordering for candidate values and printed lists."""
    return (sympy.count_ops(expr), sympy.default_sort_key(expr))


__all__ = [
    "DEFAULT_ZERO_CONFIG",
    "RationalNF",
    "ZeroTester",
    "as_expr",
    "diff",
    "evaluate",
    "is_zero",
    "normalize",
    "rational_nf",
    "sort_key",
    "substitute",
    "symbol_key",
    "zero_test",
]
