"""ODE sources and random expressions shared by the test suite."""

import random

import sympy

from ode_linearizer.core.expr import is_zero, normalize
from ode_linearizer.schemas import ZeroFlag
from ode_linearizer.symbols import JET_VARIABLES

# four symmetries; linearized by (u, -x) onto ubar''' = xbar^3 ubar
EX1 = "u''' = 3*u''^2/u' - x*u^3*u'^4"

TRIVIAL = "u''' = 0"
CONSTANT = "u''' = u"
LAGUERRE_CUBIC = "u''' = x^3*u"

# u''' = 0 and u''' = u seen through the interchange (x, u) -> (u, x)
SEVEN_NONLINEAR = "3*u''^2/u'"
FIVE_NONLINEAR = "3*u''^2/u' - x*u'^4"

NOT_LINEARIZABLE = "u''' = u''^2"

# steam-turbine regulation: m u''' + f u'' + k u' + (h alpha / I) u = 0
STEAM_PARAMS = ["f", "m", "k", "h", "I", "alpha"]
STEAM_COEFFICIENTS = ("-f/m", "-k/m", "-h*alpha/(m*I)", "0")

# curved beam, flexural rigidity B(x) with load parameter pa3
BEAM_FIVE = "-pa3*x^2/(x^2 - 1)"
BEAM_FOUR = "x"
BEAM_CONSTANT = "3"


def same(actual, expected) -> bool:
    """Exact identity of two expressions, radicals included."""
    return is_zero(sympy.sympify(actual) - sympy.sympify(expected)) is ZeroFlag.ZERO


# linear but inhomogeneous: psi needs a particular solution on top of the Jacobian's
INHOMOGENEOUS_FIVE = "u - x"
INHOMOGENEOUS_FOUR = "u*x^3 - x^4"
INHOMOGENEOUS_SCALED = "u/8 + x^2/32 - x/16 + 1/32"

# mapped onto u''' = 0 by (x, u) -> (u - x, -u); a3 and a1 are shifted inverse powers of p
SHIFTED_SEVEN = "3*q^2/(p - 1)"


def random_tree(rng: random.Random, depth: int = 3, variables=JET_VARIABLES, division: bool = True) -> sympy.Expr:
    """Random rational expression; polynomial when ``division`` is off."""
    if depth == 0 or rng.random() < 0.25:
        if rng.random() < 0.3:
            return sympy.Rational(rng.randint(-5, 5), 1 if not division else rng.randint(1, 4))
        return rng.choice(variables)
    ops = ["add", "mul", "pow", "div"] if division else ["add", "mul", "pow"]
    op = rng.choice(ops)
    left = random_tree(rng, depth - 1, variables, division)
    if op == "pow":
        exponent = rng.choice([-2, -1, 2, 3] if division else [2, 3])
        return left if left == 0 and exponent < 0 else left**exponent
    right = random_tree(rng, depth - 1, variables, division)
    if op == "add":
        return left + right
    if op == "mul":
        return left * right
    return left if normalize(right) == 0 else left / right
