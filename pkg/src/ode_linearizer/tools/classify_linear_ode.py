"""classify_linear_ode MCP tool implementation."""

from __future__ import annotations

from loguru import logger

from ode_linearizer.core import classify_linear, parse
from ode_linearizer.core.grammar import as_symbols
from ode_linearizer.schemas import SymmetryClass, ZeroTestConfig
from ode_linearizer.utils import describe_class


async def classify_linear_ode(
    c1: str = "0",
    c2: str = "0",
    c3: str = "0",
    c4: str = "0",
    params: list[str] | None = None,
    seed: int = 0,
    samples: int = 12,
) -> dict:
    """Classify the linear equation u''' = c1 u'' + c2 u' + c3 u + c4.

    With symbolic parameters the result is a stratification: the conditions
    for seven symmetries and the verdict everywhere else.

    Args:
        c1: Coefficient of u'' (function of x and params)
        c2: Coefficient of u'
        c3: Coefficient of u
        c4: Inhomogeneous term
        params: Names of symbolic parameters
        seed: Seed of the sampling zero test
        samples: Sample points per zero test

    Returns:
        Verdict, or the parameter conditions for each symmetry class
    """
    logger.info(f"Classifying linear ODE: c1={c1}, c2={c2}, c3={c3}, c4={c4}")
    try:
        symbols = as_symbols(params)
        coefficients = [parse(c, symbols) for c in (c1, c2, c3, c4)]
        result = classify_linear(*coefficients, params=symbols, config=ZeroTestConfig(seed=seed, samples=samples))
        if isinstance(result, SymmetryClass):
            return {"summary": describe_class(result), **result.model_dump(mode="json")}
        return result.model_dump(mode="json")
    except Exception as e:
        logger.error(f"Linear classification failed: {e}")
        raise
