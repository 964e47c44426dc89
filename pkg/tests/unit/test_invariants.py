import random

import pytest
import sympy

from ode_linearizer.core.classifier import classify
from ode_linearizer.core.invariants import (
    InvariantCalculator,
    check_K_consistency,
    compute_J,
    compute_report,
    compute_W,
    expected_K,
)
from ode_linearizer.core.jet import make_context
from ode_linearizer.core.radicals import Cbrt
from ode_linearizer.schemas import JScaling, KConsistency, Verdict, ZeroFlag
from ode_linearizer.symbols import P, U, X
from tests.fixtures import same


def test_W_of_ex1(ex1):
    assert same(compute_W(ex1), 54 * U**3 * P**3)


def test_W_of_linear_equation(context):
    assert compute_W(context("u''' = 2*u'' + 3*u' + 5*u")) == 4 * 8 + 18 * 2 * 3 + 54 * 5


def test_compute_J():
    assert compute_J(54 * X**3) == X
    assert compute_J(-27 * X**3, JScaling.YUMAGUZHIN) == X
    assert compute_J(108) == Cbrt(2)
    assert same(compute_J(54 * (X + 1) ** 3 * 8), 2 * X + 2)


def test_ex1_laguerre_forsyth(ex1):
    report = compute_report(ex1)
    assert same(report.J, U * P)
    assert same(report.K, -3 / U**4)
    for name in ("I1", "I2", "I4", "I5", "I6", "I7", "I9", "I10", "I11", "I12"):
        assert report.flag(name) is ZeroFlag.ZERO, name
    assert report.flag("I8") is ZeroFlag.NONZERO
    assert report.flag("DxK") is ZeroFlag.NONZERO


def test_ex1_yumaguzhin(ex1):
    report = compute_report(ex1, JScaling.YUMAGUZHIN)
    assert same(report.J, -Cbrt(2) * U * P)
    assert same(report.I8, -3 * Cbrt(4) * P**4)
    assert same(report.K, -3 * Cbrt(2) / (2 * U**4))
    assert same(report.DxK, 6 * Cbrt(2) * P / U**5)


def test_trivial_equation_has_no_J(trivial):
    report = compute_report(trivial)
    assert report.W == 0
    assert report.J is None
    assert not report.has_J
    assert report.flag("I4") is ZeroFlag.NOT_APPLICABLE
    assert report.flag("I7") is ZeroFlag.ZERO


def test_constant_coefficients(constant):
    report = compute_report(constant)
    assert report.J == 1
    assert report.K == 0
    assert report.flag("DxK") is ZeroFlag.ZERO


def test_calculator_caches_partials(ex1):
    calc = InvariantCalculator(ex1)
    assert calc.f_q is calc.f_q
    assert same(calc.f_qq, 6 / P)
    assert calc.I1 == 0


def test_expected_K():
    assert same(expected_K(X), -3 / X**4)
    assert expected_K(5) == 0
    assert same(expected_K(X, JScaling.YUMAGUZHIN), -3 / (Cbrt(4) * X**4))


def test_K_consistency(cubic):
    report = compute_report(cubic)
    assert same(report.K, -3 / X**4)
    assert check_K_consistency(report, X) is KConsistency.CONSISTENT
    assert check_K_consistency(report, 2 * X) is KConsistency.INCONSISTENT


def _random_polynomial(rng: random.Random) -> sympy.Expr:
    degree = rng.randint(0, 3)
    return sympy.Add(*(rng.randint(-3, 3) * X**k for k in range(degree + 1)))


@pytest.mark.slow
def test_cubed_polynomial_coefficients():
    rng = random.Random(17)
    samples = [sympy.S.Zero, sympy.Integer(2), X, X + 1] + [_random_polynomial(rng) for _ in range(21)]
    for a in samples:
        ctx = make_context(a**3 * U)
        verdict = classify(ctx).verdict
        if a == 0:
            assert verdict is Verdict.SEVEN
        elif not a.has(X):
            assert verdict is Verdict.FIVE
        else:
            assert verdict is Verdict.FOUR, a
        for scaling in JScaling:
            report = compute_report(ctx, scaling)
            assert check_K_consistency(report, a) is KConsistency.CONSISTENT, (a, scaling)
