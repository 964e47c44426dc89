import sympy

from ode_linearizer.core import invariants
from ode_linearizer.core.classifier import beam_constraint, beam_constraint_check, classify, classify_linear
from ode_linearizer.core.grammar import as_symbols, parse
from ode_linearizer.schemas import ConditionReport, ConstraintOutcome, JScaling, SymmetryClass, Verdict, ZeroFlag
from ode_linearizer.symbols import U, X
from tests.fixtures import (
    BEAM_CONSTANT,
    BEAM_FIVE,
    BEAM_FOUR,
    FIVE_NONLINEAR,
    NOT_LINEARIZABLE,
    SEVEN_NONLINEAR,
    STEAM_COEFFICIENTS,
    STEAM_PARAMS,
    same,
)


def test_verdicts(context, ex1, trivial, constant, cubic):
    assert classify(ex1).verdict is Verdict.FOUR
    assert classify(trivial).verdict is Verdict.SEVEN
    assert classify(constant).verdict is Verdict.FIVE
    assert classify(cubic).verdict is Verdict.FOUR
    assert classify(context(SEVEN_NONLINEAR)).verdict is Verdict.SEVEN
    assert classify(context(FIVE_NONLINEAR)).verdict is Verdict.FIVE


def test_four_carries_K(ex1):
    result = classify(ex1)
    assert same(result.K, -3 / U**4)
    assert result.DxK is not None
    assert result.deciding_flags["I8"] is ZeroFlag.NONZERO


def test_five_carries_s(constant):
    assert classify(constant).s == 0


def test_verdict_does_not_depend_on_scaling(ex1):
    assert classify(ex1, JScaling.YUMAGUZHIN).verdict is Verdict.FOUR


def test_not_linearizable(context):
    result = classify(context(NOT_LINEARIZABLE))
    assert result.verdict is Verdict.NOT_LINEARIZABLE
    assert result.failing == ["I2"]
    assert classify(context("u''^3")).failing == ["I1", "I2"]


def test_inconclusive_zero_test_is_indeterminate(mocker, ex1):
    original = invariants._flag

    def flaky(tester, name, expr):
        return ZeroFlag.UNKNOWN if name == "I2" else original(tester, name, expr)

    mocker.patch("ode_linearizer.core.invariants._flag", side_effect=flaky)
    result = classify(ex1)
    assert result.verdict is Verdict.INDETERMINATE
    assert result.undecided == ["I2"]
    assert len(result.residual_conditions) == 1


def test_linear_without_parameters():
    assert classify_linear(0, 0, 0, 0).verdict is Verdict.SEVEN
    assert classify_linear(0, 0, 1, 0).verdict is Verdict.FIVE
    assert classify_linear(0, 0, X**3, 0).verdict is Verdict.FOUR
    assert classify_linear(0, 0, 0, sympy.sin(X)).verdict is Verdict.SEVEN


def test_steam_turbine_stratification():
    symbols = as_symbols(STEAM_PARAMS)
    f, m, k, h, inertia, alpha = symbols
    coefficients = [parse(c, symbols) for c in STEAM_COEFFICIENTS]
    result = classify_linear(*coefficients, params=symbols)
    assert isinstance(result, ConditionReport)
    assert len(result.seven_conditions) == 1
    (root,) = result.seven_solutions["alpha"]
    assert same(root, f * inertia * (9 * k * m - 2 * f**2) / (27 * m**2 * h))
    assert result.generic_verdict is Verdict.FIVE
    assert result.DxK_flag is ZeroFlag.ZERO


def test_linear_with_unused_parameter():
    a = sympy.Symbol("a")
    assert isinstance(classify_linear(0, 0, 1, 0, params=[a]), SymmetryClass)


def _beam(source: str):
    pa3 = sympy.Symbol("pa3")
    return beam_constraint_check(parse(source, [pa3]), pa3)


def test_beam_five():
    check = _beam(BEAM_FIVE)
    assert check.outcome is ConstraintOutcome.SATISFIES
    assert check.classification.verdict is Verdict.FIVE
    assert check.consistent


def test_beam_four():
    check = _beam(BEAM_FOUR)
    assert check.outcome is ConstraintOutcome.VIOLATES
    assert check.classification.verdict is Verdict.FOUR
    assert check.consistent


def test_beam_constant_rigidity():
    check = _beam(BEAM_CONSTANT)
    assert check.classification.verdict is Verdict.SEVEN
    assert check.consistent


def test_beam_constraint_vanishes_for_constant():
    assert beam_constraint(3, sympy.Symbol("pa3")) == 0
