"""verify_transformation MCP tool implementation."""

from __future__ import annotations

from loguru import logger

from ode_linearizer.core import jet, make_context, parse, parse_barred
from ode_linearizer.core.grammar import as_symbols
from ode_linearizer.schemas import PointTransformation, ZeroTestConfig


async def verify_transformation(
    equation: str,
    phi: str,
    psi: str,
    fbar: str,
    params: list[str] | None = None,
    seed: int = 0,
    samples: int = 12,
) -> dict:
    """Check that xbar = phi(x, u), ubar = psi(x, u) maps u''' = f onto ubar''' = fbar.

    Args:
        equation: Right-hand side f in x, u, u', u''
        phi: New independent variable as a function of x and u
        psi: New dependent variable as a function of x and u
        fbar: Target right-hand side in xbar, ubar, ubar', ubar''
        params: Names of symbolic parameters
        seed: Seed of the sampling zero test
        samples: Sample points per zero test

    Returns:
        Verified/refuted/unknown outcome, the residual and a witness point when refuted
    """
    logger.info(f"Verifying ({phi}, {psi}) on {equation}")
    try:
        symbols = as_symbols(params)
        ctx = make_context(parse(equation, symbols), symbols, config=ZeroTestConfig(seed=seed, samples=samples))
        t = PointTransformation(phi=parse(phi, symbols), psi=parse(psi, symbols))
        result = jet.verify_transformation(ctx, t, parse_barred(fbar, symbols))
        return result.model_dump(mode="json")
    except Exception as e:
        logger.error(f"Verification failed: {e}")
        raise
