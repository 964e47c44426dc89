"""linearize_ode MCP tool implementation."""

from __future__ import annotations

from loguru import logger

from ode_linearizer.core import Linearizer, dump_system, make_context, parse
from ode_linearizer.core.errors import AnsatzFailed
from ode_linearizer.core.grammar import as_symbols
from ode_linearizer.schemas import CanonicalTarget, RunConfig, Sign


async def linearize_ode(
    equation: str,
    params: list[str] | None = None,
    target: str = "auto",
    sign: str | None = None,
    seed: int = 0,
    samples: int = 12,
    ansatz_max_exp: int = 6,
    ansatz_budget: int = 5000,
) -> dict:
    """Construct and verify a point transformation onto a linear canonical form.

    Args:
        equation: Right-hand side f, optionally prefixed with "u''' ="
        params: Names of symbolic parameters appearing in f
        target: "auto", "laguerre" or "yumaguzhin" (the last two need four symmetries)
        sign: "+" or "-" for the Yumaguzhin form (default: first real branch)
        seed: Seed of the sampling zero test
        samples: Sample points per zero test
        ansatz_max_exp: Largest monomial exponent tried by the ansatz search
        ansatz_budget: Candidate cap for the ansatz search

    Returns:
        Verified transformation with canonical data, or the residual
        determining system when the ansatz search fails
    """
    logger.info(f"Linearizing ({target}): {equation}")
    config = RunConfig(
        seed=seed,
        samples=samples,
        target=CanonicalTarget(target),
        sign=Sign(sign) if sign else None,
        ansatz_max_exp=ansatz_max_exp,
        ansatz_budget=ansatz_budget,
    )
    try:
        symbols = as_symbols(params)
        ctx = make_context(parse(equation, symbols), symbols, config=config.zero_test_config())
        result = Linearizer(config).linearize(ctx)
        logger.info(f"Linearized: ({result.transformation.phi}, {result.transformation.psi})")
        return {"status": "verified", **result.model_dump(mode="json")}
    except AnsatzFailed as e:
        logger.warning(f"Ansatz search failed: {e}")
        return {"status": "ansatz_failed", "message": str(e), "residual": dump_system(e.residual)}
    except Exception as e:
        logger.error(f"Linearization failed: {e}")
        raise
