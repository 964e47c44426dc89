"""classify_ode MCP tool implementation."""

from __future__ import annotations

from loguru import logger

from ode_linearizer.core import classify, make_context, parse
from ode_linearizer.core.grammar import as_symbols
from ode_linearizer.schemas import JScaling, ZeroTestConfig
from ode_linearizer.utils import describe_class


async def classify_ode(
    equation: str,
    params: list[str] | None = None,
    scaling: str = "laguerre",
    seed: int = 0,
    samples: int = 12,
) -> dict:
    """Classify u''' = f(x, u, u', u'') by its point-symmetry dimension.

    Args:
        equation: Right-hand side f, optionally prefixed with "u''' ="
        params: Names of symbolic parameters appearing in f
        scaling: J-scaling, "laguerre" or "yumaguzhin" (default: laguerre)
        seed: Seed of the sampling zero test
        samples: Sample points per zero test

    Returns:
        Verdict with its deciding invariants and zero flags
    """
    logger.info(f"Classifying: {equation}")
    try:
        symbols = as_symbols(params)
        ctx = make_context(parse(equation, symbols), symbols, config=ZeroTestConfig(seed=seed, samples=samples))
        result = classify(ctx, JScaling(scaling))
        return {"summary": describe_class(result), **result.model_dump(mode="json")}
    except Exception as e:
        logger.error(f"Classification failed: {e}")
        raise
