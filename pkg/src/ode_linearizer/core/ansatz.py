"""Ansatz search for determining systems.

Unknowns are solved one at a time in declaration order. For each unknown the
equations that involve only it and already-solved unknowns are collected; a
candidate with undetermined constants is substituted, the result is required
to vanish identically in the jet variables (coefficient matching), and the
algebraic system for the constants is solved. A solution is accepted only
after every collected equation passes an exact zero test.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from typing import Any

import sympy
from loguru import logger
from sympy.core.function import AppliedUndef

from ode_linearizer.core.errors import (
    EvaluationDomain,
    NotPolynomialInJetVars,
    NotRationalForm,
    SearchBudgetExceeded,
)
from ode_linearizer.core.expr import ZeroTester, as_expr, rational_nf, substitute
from ode_linearizer.core.printing import from_json_tree, to_json_tree
from ode_linearizer.schemas import (
    AnsatzFamily,
    AnsatzKind,
    AnsatzSolution,
    DeterminingEquation,
    DeterminingSystem,
    SolveStatus,
    UnknownFunction,
    ZeroFlag,
    ZeroTestConfig,
)
from ode_linearizer.symbols import JET_VARIABLES, P, Q

DEFAULT_BUDGET = 5000
SCREEN_POINTS = 3


def unknown_function(unknown: UnknownFunction) -> sympy.Expr:
    """H(x, u) style placeholder for an unknown."""
    return sympy.Function(unknown.name)(*(sympy.Symbol(arg) for arg in unknown.arguments))


def unknown_names(expr: sympy.Basic) -> set[str]:
    return {node.func.__name__ for node in expr.atoms(AppliedUndef)}


def _has_marker(expr: sympy.Basic) -> bool:
    if expr.has(AppliedUndef, sympy.Derivative):
        return True
    return any(isinstance(s, sympy.Dummy) for s in expr.free_symbols)


def _strip_free_factors(coeff: sympy.Expr) -> sympy.Expr:
    """Drop multiplicative factors carrying no unknown and no ansatz constant."""
    coeff = sympy.factor_terms(coeff)
    factors = sympy.Mul.make_args(coeff)
    kept = [f for f in factors if _has_marker(f)]
    return sympy.Mul(*kept) if kept else coeff


def match_coefficients(expr: object, variables: Sequence[sympy.Symbol] = (P, Q)) -> list[sympy.Expr]:
    """Coefficients of the numerator of ``expr`` as a polynomial in ``variables``.

    ``expr`` vanishes identically in ``variables`` iff every returned
    coefficient does. Factors free of unknowns are divided out.
    """
    expr = as_expr(expr)
    if expr == 0:
        return []
    for node in sympy.preorder_traversal(expr):
        if isinstance(node, sympy.Function) and not isinstance(node, AppliedUndef) and node.has(*variables):
            if _has_marker(node):
                raise NotPolynomialInJetVars(f"{node} mixes jet variables and unknowns")
    try:
        nf = rational_nf(expr, tuple(variables), strict=False, grade_constant_radicals=False)
    except NotRationalForm as exc:
        raise NotPolynomialInJetVars(str(exc)) from exc
    result: list[sympy.Expr] = []
    for coeff in nf.coefficients():
        coeff = _strip_free_factors(coeff)
        if coeff != 0 and coeff not in result:
            result.append(coeff)
    return result


def exponent_vectors(n: int, bound: int) -> list[tuple[int, ...]]:
    """Integer vectors in [-bound, bound]^n by (L1 norm, max |e|, lexicographic)."""
    vectors = itertools.product(range(-bound, bound + 1), repeat=n)
    return sorted(vectors, key=lambda v: (sum(map(abs, v)), max(map(abs, v), default=0), v))


@dataclass(frozen=True)
class Candidate:
    """One trial shape; ``constants`` are solved for."""

    index: int
    expression: sympy.Expr
    constants: tuple[sympy.Dummy, ...]


def _monomial(args: Sequence[sympy.Symbol], exponents: Sequence[int]) -> sympy.Expr:
    return sympy.Mul(*(a**e for a, e in zip(args, exponents)))


def _shapes(args: list[sympy.Symbol], family: AnsatzFamily) -> Iterator[list[sympy.Expr]]:
    """Lists of basis terms; the candidate is a linear combination with fresh constants."""
    if family.kind is AnsatzKind.MONOMIAL:
        for vector in exponent_vectors(len(args), family.max_exponent):
            yield [_monomial(args, vector)]
    elif family.kind is AnsatzKind.SINGLE_VARIABLE:
        exponents = sorted(range(-family.max_exponent, family.max_exponent + 1), key=lambda e: (abs(e), e))
        yield [sympy.S.One]
        for arg in args:
            for e in exponents:
                if e:
                    yield [arg**e]
    elif family.kind is AnsatzKind.SUM_OF_MONOMIALS:
        monomials = [_monomial(args, v) for v in exponent_vectors(len(args), family.max_exponent)]
        for k in range(2, family.terms + 1):
            for combo in itertools.combinations(monomials, k):
                yield list(combo)
    else:
        for degree in range(family.degree + 1):
            basis = [
                _monomial(args, v)
                for v in exponent_vectors(len(args), degree)
                if all(e >= 0 for e in v) and sum(v) <= degree
            ]
            yield basis


def _shifted_powers(args: list[sympy.Symbol], family: AnsatzFamily) -> Iterator[tuple[sympy.Expr, tuple[sympy.Dummy, ...]]]:
    """c0 (v + c1)^-k for each argument v, k = 1 .. max_exponent."""
    for k in range(1, family.max_exponent + 1):
        for arg in args:
            scale, shift = sympy.Dummy("c0"), sympy.Dummy("c1")
            yield scale * (arg + shift) ** -k, (scale, shift)


def enumerate_candidates(unknown: UnknownFunction, family: AnsatzFamily) -> Iterator[Candidate]:
    """Deterministic candidate stream; the zero function comes first for unknowns allowed to vanish."""
    args = [sympy.Symbol(a) for a in unknown.arguments]
    index = 0
    if not unknown.nonzero:
        yield Candidate(index, sympy.S.Zero, ())
        index += 1
    if family.kind is AnsatzKind.SHIFTED_POWER:
        for expression, constants in _shifted_powers(args, family):
            yield Candidate(index, expression, constants)
            index += 1
        return
    for basis in _shapes(args, family):
        constants = tuple(sympy.Dummy(f"c{i}") for i in range(len(basis)))
        yield Candidate(index, sympy.Add(*(c * term for c, term in zip(constants, basis))), constants)
        index += 1


def _magnitude(values: Sequence[sympy.Expr]) -> float:
    total = 0.0
    for value in values:
        if value.is_number:
            total += float(abs(value.evalf()))
    return total


class AnsatzSolver:
    """Sequential per-unknown ansatz search over a list of families."""

    def __init__(
        self,
        families: Sequence[AnsatzFamily] | AnsatzFamily | None = None,
        budget: int = DEFAULT_BUDGET,
        config: ZeroTestConfig | None = None,
    ):
        if families is None:
            families = [AnsatzFamily()]
        elif isinstance(families, AnsatzFamily):
            families = [families]
        self.families = list(families)
        self.budget = budget
        self.tester = ZeroTester(config)
        self.tried = 0

    def _screened_out(self, candidate: Candidate, substituted: list[sympy.Expr]) -> bool:
        """True when a few sample points already leave no admissible constants.

        A solution of the full coefficient system zeroes every equation at
        every sample point.
        """
        constants = set(candidate.constants)
        if not constants:
            return False
        try:
            values: list[sympy.Expr] = []
            for expr in substituted:
                for point in self.tester.sample_points(expr, SCREEN_POINTS):
                    value = expr.xreplace({s: v for s, v in point.items() if s not in constants})
                    if value.has(sympy.zoo, sympy.nan, sympy.oo):
                        continue
                    numerator = sympy.numer(sympy.cancel(value))
                    if numerator == 0:
                        continue
                    if not numerator.has(*constants):
                        return True
                    values.append(numerator)
            if not values:
                return False
            if len(constants) == 1:
                (c,) = constants
                common = sympy.gcd_list(values)
                if not common.has(c):
                    return True
                # only c = 0 left, which is the zero function
                return sympy.Poly(common, c).is_monomial and candidate.expression.subs(c, 0) == 0
            ordered = tuple(candidate.constants)
            if any(sympy.Poly(v, *ordered).total_degree() > 1 for v in values):
                return False
            solutions = sympy.linsolve(values, ordered)
            if solutions == sympy.S.EmptySet:
                return True
            values_at = dict(zip(ordered, next(iter(solutions))))
            return sympy.cancel(candidate.expression.subs(values_at, simultaneous=True)) == 0
        except (EvaluationDomain, sympy.PolynomialError, NotImplementedError, ValueError):
            return False

    @staticmethod
    def _coefficient_system(substituted: list[sympy.Expr]) -> list[sympy.Expr]:
        conditions: list[sympy.Expr] = []
        for expr in substituted:
            conditions.extend(match_coefficients(expr, JET_VARIABLES))
        return conditions

    def _solutions(self, unknown: UnknownFunction, candidate: Candidate, conditions: list[sympy.Expr]):
        constants = candidate.constants
        # a condition free of the constants is a nonzero coefficient
        if any(not constants or not c.has(*constants) for c in conditions):
            return []
        if conditions:
            try:
                raw = sympy.solve(conditions, constants, dict=True)
            except (NotImplementedError, sympy.PolynomialError):
                return []
        else:
            raw = [{}]
        unset = dict.fromkeys(constants, sympy.S.One)
        found = []
        for solution in raw:
            values = [sympy.sympify(solution.get(c, c)).subs(unset) for c in constants]
            if any(v.has(sympy.I) or v.is_real is False for v in values):
                continue
            value = sympy.cancel(candidate.expression.subs(dict(zip(constants, values)), simultaneous=True))
            if unknown.nonzero and value == 0:
                continue
            if value not in [v for v, _ in found]:
                found.append((value, values))
        found.sort(key=lambda item: (sympy.count_ops(item[0]), _magnitude(item[1]), sympy.default_sort_key(item[0])))
        return [value for value, _ in found]

    def _accepts(self, func: sympy.Expr, value: sympy.Expr, equations: list[sympy.Expr]) -> bool:
        for equation in equations:
            try:
                flag = self.tester.test(substitute(equation, {func: value})).flag
            except EvaluationDomain:
                return False
            if flag is not ZeroFlag.ZERO:
                return False
        return True

    def solve_unknown(self, unknown: UnknownFunction, equations: list[sympy.Expr]) -> list[sympy.Expr]:
        """Accepted values for one unknown, best first; empty when every family is exhausted."""
        func = unknown_function(unknown)
        for family in self.families:
            for candidate in enumerate_candidates(unknown, family):
                self.tried += 1
                if self.tried > self.budget:
                    raise SearchBudgetExceeded(f"more than {self.budget} candidates tried")
                substituted = [substitute(equation, {func: candidate.expression}) for equation in equations]
                if self._screened_out(candidate, substituted):
                    logger.trace(f"{unknown.name} candidate {candidate.index} screened out")
                    continue
                try:
                    conditions = self._coefficient_system(substituted)
                except NotPolynomialInJetVars as exc:
                    logger.debug(f"{unknown.name} candidate {candidate.index} skipped: {exc}")
                    continue
                accepted = [v for v in self._solutions(unknown, candidate, conditions) if self._accepts(func, v, equations)]
                if accepted:
                    logger.info(f"Solved {unknown.name} = {accepted[0]} ({family.kind.value}, candidate {candidate.index})")
                    return accepted
        return []

    def solve(self, system: DeterminingSystem) -> AnsatzSolution:
        functions = {u.name: unknown_function(u) for u in system.unknowns}
        bindings: dict[str, sympy.Expr] = dict(system.fixed)
        alternates: dict[str, list[sympy.Expr]] = {}
        for unknown in system.unknowns:
            if unknown.name in bindings:
                continue
            equations = []
            for item in system.equations:
                names = unknown_names(item.expression) & set(functions)
                if unknown.name in names and names <= set(bindings) | {unknown.name}:
                    known = {functions[n]: bindings[n] for n in names if n in bindings}
                    equations.append(substitute(item.expression, known))
            accepted = self.solve_unknown(unknown, equations) if equations else []
            if not accepted:
                logger.warning(f"No ansatz solution for {unknown.name}")
                return AnsatzSolution(
                    status=SolveStatus.FAILED,
                    bindings=bindings,
                    residual=system.model_copy(update={"fixed": bindings}),
                    candidates_tried=self.tried,
                )
            bindings[unknown.name] = accepted[0]
            if len(accepted) > 1:
                alternates[unknown.name] = accepted[1:]
        return AnsatzSolution(
            status=SolveStatus.SOLVED, bindings=bindings, alternates=alternates, candidates_tried=self.tried
        )


def solve_ansatz(
    system: DeterminingSystem,
    families: Sequence[AnsatzFamily] | AnsatzFamily | None = None,
    seed: int = 0,
    budget: int = DEFAULT_BUDGET,
) -> AnsatzSolution:
    """Solve ``system`` by ansatz; raises SearchBudgetExceeded past ``budget`` candidates."""
    return AnsatzSolver(families, budget, ZeroTestConfig(seed=seed)).solve(system)


def check_solution(
    system: DeterminingSystem, bindings: dict[str, object], config: ZeroTestConfig | None = None
) -> dict[str, ZeroFlag]:
    """Zero flag of every equation under user-supplied bindings, keyed by provenance."""
    functions = {u.name: unknown_function(u) for u in system.unknowns}
    values = {**system.fixed, **{k: as_expr(v) for k, v in bindings.items()}}
    substitution = {functions[name]: value for name, value in values.items() if name in functions}
    tester = ZeroTester(config)
    flags = {}
    for item in system.equations:
        try:
            flags[item.provenance] = tester.test(substitute(item.expression, substitution)).flag
        except EvaluationDomain:
            flags[item.provenance] = ZeroFlag.UNKNOWN
    return flags


def dump_system(system: DeterminingSystem) -> dict[str, Any]:
    """JSON-ready form with expression trees, for solving elsewhere and re-import."""
    data = system.model_dump(mode="json", exclude={"equations", "fixed"})
    data["equations"] = [
        {"expression": to_json_tree(item.expression), "provenance": item.provenance} for item in system.equations
    ]
    data["fixed"] = {name: to_json_tree(value) for name, value in system.fixed.items()}
    return data


def load_system(data: dict[str, Any]) -> DeterminingSystem:
    return DeterminingSystem(
        branch=data["branch"],
        unknowns=[UnknownFunction(**u) for u in data["unknowns"]],
        equations=[
            DeterminingEquation(expression=from_json_tree(item["expression"]), provenance=item["provenance"])
            for item in data["equations"]
        ],
        fixed={name: from_json_tree(tree) for name, tree in data.get("fixed", {}).items()},
        params=data.get("params", []),
    )
