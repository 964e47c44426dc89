"""compute_invariants MCP tool implementation."""

from __future__ import annotations

from loguru import logger

from ode_linearizer.core import compute_report, make_context, parse
from ode_linearizer.core.grammar import as_symbols
from ode_linearizer.schemas import JScaling, ZeroTestConfig


async def compute_invariants(
    equation: str,
    params: list[str] | None = None,
    scaling: str = "laguerre",
    seed: int = 0,
    samples: int = 12,
) -> dict:
    """Compute W, J, I1-I12, K and D_xK of u''' = f with their zero flags.

    Args:
        equation: Right-hand side f, optionally prefixed with "u''' ="
        params: Names of symbolic parameters appearing in f
        scaling: J-scaling, "laguerre" (J^3 = W/54) or "yumaguzhin" (J^3 = -W/27)
        seed: Seed of the sampling zero test
        samples: Sample points per zero test

    Returns:
        Invariant report with infix expressions and zero flags
    """
    logger.info(f"Computing invariants ({scaling}): {equation}")
    try:
        symbols = as_symbols(params)
        ctx = make_context(parse(equation, symbols), symbols, config=ZeroTestConfig(seed=seed, samples=samples))
        return compute_report(ctx, JScaling(scaling)).model_dump(mode="json")
    except Exception as e:
        logger.error(f"Invariant computation failed: {e}")
        raise
