"""Expression printers: plain infix, LaTeX and a JSON tree.

Infix output is accepted back by the grammar, so ``parse(to_infix(e)) == e``
for normalized expressions.
"""

from __future__ import annotations

import json
from typing import Any

import sympy
from sympy.core.function import AppliedUndef
from sympy.printing.latex import LatexPrinter
from sympy.printing.precedence import PRECEDENCE
from sympy.printing.str import StrPrinter

from ode_linearizer.core.errors import UnsupportedNode
from ode_linearizer.core.radicals import Cbrt
from ode_linearizer.schemas import PrintFormat


class InfixPrinter(StrPrinter):
    """sympy's str printer with ``^`` powers and ``a^(k/3)`` cube roots."""

    def _radicand(self, arg: sympy.Expr) -> str:
        return self.parenthesize(arg, PRECEDENCE["Pow"], strict=True)

    def _print_Cbrt(self, expr: Cbrt) -> str:
        return f"{self._radicand(expr.args[0])}^(1/3)"

    def _print_Pow(self, expr: sympy.Pow, rational: bool = False) -> str:
        if isinstance(expr.base, Cbrt) and expr.exp.is_Integer:
            return f"{self._radicand(expr.base.args[0])}^({expr.exp}/3)"
        return super()._print_Pow(expr, rational).replace("**", "^")


class TexPrinter(LatexPrinter):
    def _print_Cbrt(self, expr: Cbrt, exp: str | None = None) -> str:
        tex = r"\sqrt[3]{%s}" % self._print(expr.args[0])
        return tex if exp is None else f"{tex}^{{{exp}}}"


def to_infix(expr: sympy.Basic) -> str:
    return InfixPrinter({"order": "lex"}).doprint(expr)


def to_latex(expr: sympy.Basic) -> str:
    return TexPrinter({"order": "lex"}).doprint(expr)


_FUNCTION_NAMES = {sympy.exp: "exp", sympy.log: "ln", sympy.sin: "sin", sympy.cos: "cos"}
_NAMED_FUNCTIONS = {name: func for func, name in _FUNCTION_NAMES.items()}
_CONSTANTS = {"I": sympy.I, "pi": sympy.pi, "E": sympy.E}


def to_json_tree(expr: sympy.Basic) -> dict[str, Any]:
    """Tree of {"kind", "children", "value", "name"} nodes; rationals as "a/b" strings."""
    if expr.is_Rational:
        return {"kind": "Rational", "value": str(expr)}
    if expr.is_Symbol:
        return {"kind": "Symbol", "name": expr.name}
    if expr in (sympy.I, sympy.pi, sympy.E):
        return {"kind": "Constant", "name": str(expr)}
    if expr.is_Add:
        return {"kind": "Sum", "children": [to_json_tree(a) for a in sympy.Add.make_args(expr)]}
    if expr.is_Mul:
        return {"kind": "Product", "children": [to_json_tree(a) for a in expr.as_ordered_factors()]}
    if expr.is_Pow:
        return {"kind": "Power", "children": [to_json_tree(expr.base), to_json_tree(expr.exp)]}
    if isinstance(expr, Cbrt):
        return {"kind": "Cbrt", "children": [to_json_tree(expr.args[0])]}
    if isinstance(expr, AppliedUndef):
        return {"kind": "Unknown", "name": expr.func.__name__, "children": [to_json_tree(a) for a in expr.args]}
    if isinstance(expr, sympy.Derivative):
        variables = [v for v, count in expr.variable_count for _ in range(int(count))]
        return {"kind": "Derivative", "children": [to_json_tree(expr.expr), *map(to_json_tree, variables)]}
    if expr.func in _FUNCTION_NAMES:
        return {"kind": "Function", "name": _FUNCTION_NAMES[expr.func], "children": [to_json_tree(expr.args[0])]}
    raise UnsupportedNode(f"Cannot serialize {expr.func}")


def from_json_tree(node: dict[str, Any]) -> sympy.Expr:
    """Inverse of :func:`to_json_tree`."""
    kind = node["kind"]
    children = [from_json_tree(child) for child in node.get("children", [])]
    if kind == "Rational":
        return sympy.Rational(node["value"])
    if kind == "Symbol":
        return sympy.Symbol(node["name"])
    if kind == "Constant":
        return _CONSTANTS[node["name"]]
    if kind == "Sum":
        return sympy.Add(*children)
    if kind == "Product":
        return sympy.Mul(*children)
    if kind == "Power":
        return children[0] ** children[1]
    if kind == "Cbrt":
        return Cbrt(children[0])
    if kind == "Unknown":
        return sympy.Function(node["name"])(*children)
    if kind == "Derivative":
        return sympy.Derivative(children[0], *children[1:])
    if kind == "Function":
        return _NAMED_FUNCTIONS[node["name"]](children[0])
    raise UnsupportedNode(f"Unknown node kind: {kind}")


def to_json(expr: sympy.Basic) -> str:
    return json.dumps(to_json_tree(expr))


def from_json(text: str) -> sympy.Expr:
    return from_json_tree(json.loads(text))


def print_expr(expr: sympy.Basic, fmt: PrintFormat | str = PrintFormat.INFIX) -> str:
    fmt = PrintFormat(fmt)
    if fmt is PrintFormat.LATEX:
        return to_latex(expr)
    if fmt is PrintFormat.JSON:
        return to_json(expr)
    return to_infix(expr)
