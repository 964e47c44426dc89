"""Real cube-root node.

``Cbrt`` is a sympy function with real-branch semantics (``Cbrt(-8) == -2``).
Construction canonicalizes the radicand: signs and perfect-cube content are
pulled outside, integer radicands are split into prime cube roots, and powers
are reduced so only ``Cbrt(a)`` and ``Cbrt(a)**2`` survive.
"""

from __future__ import annotations

import sympy
from sympy import Integer, Rational, S

# Integers above this are only partially factored.
_FACTOR_LIMIT = 10**6


def _integer_parts(n: int) -> tuple[sympy.Expr, sympy.Expr]:
    """Split a positive integer into (cube part, cube-free radical product)."""
    factors = sympy.factorint(n, limit=_FACTOR_LIMIT)
    outside = Integer(1)
    inside = Integer(1)
    for prime, exponent in sorted(factors.items()):
        outside *= Integer(prime) ** (exponent // 3)
        if exponent % 3:
            inside *= Cbrt(Integer(prime), evaluate=False) ** (exponent % 3)
    return outside, inside


def _rational_cbrt(value: Rational) -> sympy.Expr | None:
    if value == 0:
        return S.Zero
    sign = -1 if value < 0 else 1
    numerator, denominator = abs(value.p), value.q
    radicand = numerator * denominator**2
    factors = sympy.factorint(radicand, limit=_FACTOR_LIMIT)
    if sign == 1 and denominator == 1 and factors == {radicand: 1}:
        return None
    if radicand == 1:
        return Rational(sign, denominator)
    outside, inside = _integer_parts(radicand)
    return sign * outside * inside / denominator


def _coefficient_parts(coeff: sympy.Expr) -> tuple[sympy.Expr, sympy.Expr]:
    """Cube part of an integer coefficient; the cube-free rest stays a plain integer."""
    if not coeff.is_Integer or coeff == 0:
        return Integer(1), coeff
    outside, inside = Integer(1), Integer(1 if coeff > 0 else -1)
    for prime, exponent in sympy.factorint(abs(int(coeff)), limit=_FACTOR_LIMIT).items():
        outside *= Integer(prime) ** (exponent // 3)
        inside *= Integer(prime) ** (exponent % 3)
    return outside, inside


def _split_cube_content(arg: sympy.Expr) -> tuple[sympy.Expr, sympy.Expr]:
    """Return (outside, inside) with arg == outside**3 * inside."""
    numerator, denominator = sympy.fraction(sympy.factor_terms(arg))
    if denominator != 1:
        return 1 / denominator, numerator * denominator**2
    coeff, rest = numerator.as_coeff_Mul()
    outside, inside = _coefficient_parts(coeff)
    for factor in sympy.Mul.make_args(rest):
        base, exponent = factor.as_base_exp()
        if exponent.is_Integer and exponent >= 3:
            outside *= base ** (exponent // 3)
            inside *= base ** (exponent % 3)
        else:
            inside *= factor
    return outside, inside


class Cbrt(sympy.Function):
    """Real cube root."""

    nargs = 1

    @classmethod
    def eval(cls, arg):
        if arg.is_Rational:
            return _rational_cbrt(arg)
        if arg.is_Float:
            root = abs(arg) ** Rational(1, 3)
            return -root if arg < 0 else root
        if arg.is_Number:
            return None
        if arg.could_extract_minus_sign():
            return -cls(-arg)
        outside, inside = _split_cube_content(arg)
        if outside == 1 and inside == arg:
            return None
        return outside * cls(inside)

    def fdiff(self, argindex=1):
        if argindex != 1:
            raise sympy.ArgumentIndexError(self, argindex)
        return self / (3 * self.args[0])

    def _eval_power(self, exponent):
        arg = self.args[0]
        if exponent.is_Integer:
            whole, rest = divmod(int(exponent), 3)
            if whole:
                return arg**whole * self.func(arg) ** rest
            return None
        if exponent.is_Rational and arg.is_positive:
            return arg ** (exponent / 3)
        return None

    def _eval_evalf(self, prec):
        value = self.args[0]._eval_evalf(prec)
        if value is None or not value.is_real:
            return None
        root = abs(value) ** Rational(1, 3)
        return -root if value.is_negative else root

    def _eval_is_extended_real(self):
        return self.args[0].is_extended_real

    def _eval_is_extended_positive(self):
        return self.args[0].is_extended_positive

    def _eval_is_extended_negative(self):
        return self.args[0].is_extended_negative

    def _eval_is_zero(self):
        return self.args[0].is_zero

    def _eval_is_finite(self):
        return self.args[0].is_finite


def cube_root(value: sympy.Expr) -> sympy.Expr:
    """Real cube root of an expression, canonicalized."""
    return Cbrt(sympy.sympify(value))


def radical_atoms(expr: sympy.Basic) -> list[Cbrt]:
    """Cube-root atoms of an expression in a deterministic order."""
    return sorted(expr.atoms(Cbrt), key=sympy.default_sort_key)
