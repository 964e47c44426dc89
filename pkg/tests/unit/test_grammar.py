import pytest
import sympy

from ode_linearizer.core.errors import ExpressionSyntaxError, UnknownIdentifier
from ode_linearizer.core.grammar import as_symbols, parse, parse_barred
from ode_linearizer.core.radicals import Cbrt
from ode_linearizer.symbols import PB, QB, UB, XB, P, Q, U, X


def test_parse_equation_with_primes():
    parsed = parse("u''' = 3*u''^2/u' - x*u^3*u'^4")
    assert sympy.simplify(parsed - (3 * Q**2 / P - X * U**3 * P**4)) == 0


def test_bare_right_hand_side():
    assert parse("u' + u''") == P + Q


def test_precedence():
    assert parse("x^2^3") == X**8
    assert parse("-x^2") == -(X**2)
    assert parse("2^-1") == sympy.Rational(1, 2)
    assert parse("x - u - 1") == X - U - 1
    assert parse("x/u/2") == X / (2 * U)


def test_cube_roots():
    assert parse("x^(1/3)") == Cbrt(X)
    assert parse("8^(2/3)") == 4
    assert parse("cbrt(2)*x") == Cbrt(2) * X


def test_functions():
    assert parse("exp(x) + sin(u)") == sympy.exp(X) + sympy.sin(U)
    assert parse("ln(x)") == sympy.log(X)


def test_parameters():
    a = sympy.Symbol("a")
    assert parse("a*x", ["a"]) == a * X
    assert parse("a*x", "a") == a * X


def test_unknown_identifier():
    with pytest.raises(UnknownIdentifier) as excinfo:
        parse("a*x")
    assert excinfo.value.names == ["a"]


def test_unknown_function():
    with pytest.raises(UnknownIdentifier):
        parse("tan(x)")


def test_syntax_errors():
    with pytest.raises(ExpressionSyntaxError) as excinfo:
        parse("x +")
    assert excinfo.value.line == 1
    with pytest.raises(ExpressionSyntaxError):
        parse("")
    with pytest.raises(ExpressionSyntaxError):
        parse("(x")


def test_as_symbols():
    assert as_symbols("a, b") == list(sympy.symbols("a b"))
    assert as_symbols(None) == []
    with pytest.raises(ValueError):
        as_symbols(["x"])


def test_parse_barred():
    assert parse_barred("xbar^3*ubar") == XB**3 * UB
    assert parse_barred("ubar''' = 3*ubar''^2/ubar'") == 3 * QB**2 / PB
    with pytest.raises(UnknownIdentifier):
        parse_barred("x")
