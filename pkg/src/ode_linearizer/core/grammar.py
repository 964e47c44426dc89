"""Infix expression grammar.

    expop    :: '^'
    multop   :: '*' | '/'
    addop    :: '+' | '-'
    atom     :: fn '(' expr ')' | integer | identifier | '(' expr ')'
    power    :: atom [ expop factor ]
    factor   :: addop* power
    term     :: factor [ multop factor ]*
    expr     :: term [ addop term ]*
    equation :: [ "u'''" '=' ] expr

Exponents are right-associative because ``power`` recurses into ``factor``;
unary minus binds looser than ``^`` so ``-x^2`` is ``-(x^2)``.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from functools import lru_cache

import pyparsing as pp
import sympy

from ode_linearizer.core.errors import ExpressionSyntaxError, UnknownIdentifier
from ode_linearizer.core.expr import normalize
from ode_linearizer.core.radicals import Cbrt
from ode_linearizer.symbols import BARRED_VARIABLES, JET_VARIABLES, PB, QB, P, Q

pp.ParserElement.enable_packrat()

FUNCTIONS = {
    "exp": sympy.exp,
    "ln": sympy.log,
    "log": sympy.log,
    "sin": sympy.sin,
    "cos": sympy.cos,
    "sqrt": sympy.sqrt,
    "cbrt": Cbrt,
}

ALIASES = {"u'": P, "u''": Q, "ubar'": PB, "ubar''": QB}


class ExpressionGrammar:
    """pyparsing grammar producing sympy expressions."""

    def __init__(self):
        integer = pp.Regex(r"\d+").set_parse_action(lambda t: sympy.Integer(t[0]))
        identifier = pp.Regex(r"[A-Za-z_][A-Za-z0-9_]*'*")
        lpar, rpar = pp.Suppress("("), pp.Suppress(")")
        addop = pp.one_of("+ -")
        multop = pp.one_of("* /")

        expr = pp.Forward()
        call = (pp.Regex(r"[A-Za-z_][A-Za-z0-9_]*") + lpar + expr + rpar).set_parse_action(self._call)
        variable = identifier.copy().set_parse_action(self._variable)
        atom = call | integer | variable | (lpar + expr + rpar)

        factor = pp.Forward()
        power = (atom + pp.Optional(pp.Suppress("^") + factor)).set_parse_action(self._power)
        factor <<= (pp.ZeroOrMore(addop) + power).set_parse_action(self._signed)
        term = (factor + pp.ZeroOrMore(multop + factor)).set_parse_action(self._fold)
        expr <<= (term + pp.ZeroOrMore(addop + term)).set_parse_action(self._fold)

        lhs = pp.Suppress(pp.Regex(r"(u|ubar)'''\s*="))
        self.bnf = pp.Optional(lhs) + expr + pp.StringEnd()

    @staticmethod
    def _call(s, loc, tokens):
        name, argument = tokens[0], tokens[1]
        if name not in FUNCTIONS:
            raise UnknownIdentifier([name])
        return FUNCTIONS[name](argument)

    @staticmethod
    def _variable(s, loc, tokens):
        name = tokens[0]
        return ALIASES.get(name) or sympy.Symbol(name)

    @staticmethod
    def _power(s, loc, tokens):
        if len(tokens) == 1:
            return tokens[0]
        base, exponent = tokens[0], tokens[1]
        if exponent.is_Rational and exponent.q == 3:
            return Cbrt(base) ** exponent.p
        return base**exponent

    @staticmethod
    def _signed(s, loc, tokens):
        *signs, value = tokens
        if sum(1 for sign in signs if sign == "-") % 2:
            return -value
        return value

    @staticmethod
    def _fold(s, loc, tokens):
        result = tokens[0]
        for op, operand in zip(tokens[1::2], tokens[2::2]):
            if op == "+":
                result = result + operand
            elif op == "-":
                result = result - operand
            elif op == "*":
                result = result * operand
            else:
                result = result / operand
        return result

    def parse(self, src: str) -> sympy.Expr:
        try:
            return self.bnf.parse_string(src, parse_all=True)[0]
        except pp.ParseBaseException as exc:
            raise ExpressionSyntaxError(exc.msg, exc.lineno, exc.col) from exc


@lru_cache(maxsize=1)
def _grammar() -> ExpressionGrammar:
    return ExpressionGrammar()


def as_symbols(params: Iterable[str | sympy.Symbol] | str | None) -> list[sympy.Symbol]:
    """Parameter symbols from names, symbols or a comma-separated string."""
    if params is None:
        return []
    if isinstance(params, str):
        params = [name.strip() for name in params.split(",") if name.strip()]
    symbols = [p if isinstance(p, sympy.Symbol) else sympy.Symbol(str(p)) for p in params]
    reserved = {s.name for s in JET_VARIABLES + BARRED_VARIABLES}
    clashes = sorted(s.name for s in symbols if s.name in reserved)
    if clashes:
        raise ValueError(f"parameter names clash with jet variables: {', '.join(clashes)}")
    return symbols


def parse(
    src: str,
    params: Sequence[str | sympy.Symbol] | str | None = None,
    *,
    variables: Sequence[sympy.Symbol] = JET_VARIABLES,
) -> sympy.Expr:
    """Parse infix text into a normalized expression over ``variables`` and ``params``."""
    if not src or not src.strip():
        raise ExpressionSyntaxError("empty expression", 1, 1)
    symbols = as_symbols(params)
    result = _grammar().parse(src)
    allowed = set(variables) | set(symbols)
    unknown = sorted(s.name for s in result.free_symbols - allowed)
    if unknown:
        raise UnknownIdentifier(unknown)
    return normalize(result)


def parse_barred(src: str, params: Sequence[str | sympy.Symbol] | str | None = None) -> sympy.Expr:
    """Parse a target right-hand side in (xbar, ubar, pbar, qbar)."""
    return parse(src, params, variables=BARRED_VARIABLES)
