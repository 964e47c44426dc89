"""Jet coordinates and their barred counterparts."""

from __future__ import annotations

import sympy

X, U, P, Q = sympy.symbols("x u p q")
XB, UB, PB, QB = sympy.symbols("xbar ubar pbar qbar")

JET_VARIABLES: tuple[sympy.Symbol, ...] = (X, U, P, Q)
BARRED_VARIABLES: tuple[sympy.Symbol, ...] = (XB, UB, PB, QB)
BAR_OF: dict[sympy.Symbol, sympy.Symbol] = dict(zip(JET_VARIABLES, BARRED_VARIABLES))

_RANK = {s.name: i for i, s in enumerate(JET_VARIABLES + BARRED_VARIABLES)}


def symbol_key(symbol: sympy.Symbol) -> tuple[int, str]:
    """Fixed order: x < u < p < q < barred variables < everything else by name."""
    return _RANK.get(symbol.name, len(_RANK)), symbol.name


def ordered_symbols(*exprs: sympy.Basic) -> tuple[sympy.Symbol, ...]:
    found: set[sympy.Symbol] = set()
    for expr in exprs:
        if expr is not None:
            found |= {s for s in expr.free_symbols if isinstance(s, sympy.Symbol)}
    return tuple(sorted(found, key=symbol_key))
