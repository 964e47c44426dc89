"""MCP Server initialization and tool registration."""

from __future__ import annotations

import asyncio
import json
from typing import Any

from dotenv import load_dotenv
from loguru import logger
from mcp.server import Server
from mcp.server.stdio import stdio_server
from mcp.types import TextContent, Tool

from ode_linearizer import __version__
from ode_linearizer.log import configure_logging
from ode_linearizer.tools import (
    classify_linear_ode,
    classify_ode,
    compute_invariants,
    linearize_ode,
    verify_transformation,
)

load_dotenv()

_EQUATION = {
    "type": "string",
    "description": "Right-hand side f of u''' = f in x, u, u', u'' (e.g. \"3*u''^2/u' - x*u^3*u'^4\")",
}
_PARAMS = {
    "type": "array",
    "items": {"type": "string"},
    "description": "Names of symbolic parameters appearing in the expressions",
}
_SEED = {"type": "integer", "description": "Seed of the sampling zero test (default: 0)", "default": 0}
_SAMPLES = {"type": "integer", "description": "Sample points per zero test (default: 12)", "default": 12}
_SCALING = {
    "type": "string",
    "enum": ["laguerre", "yumaguzhin"],
    "description": "J-scaling: J^3 = W/54 (laguerre) or J^3 = -W/27 (yumaguzhin)",
    "default": "laguerre",
}

TOOLS: dict[str, dict[str, Any]] = {
    "classify_ode": {
        "description": "Decide whether u''' = f(x, u, u', u'') is linearizable by a point transformation and "
        "give its point-symmetry dimension (7, 5 or 4) with the deciding invariants.",
        "inputSchema": {
            "type": "object",
            "properties": {"equation": _EQUATION, "params": _PARAMS, "scaling": _SCALING, "seed": _SEED, "samples": _SAMPLES},
            "required": ["equation"],
        },
        "handler": classify_ode,
    },
    "compute_invariants": {
        "description": "Compute the relative invariants W, J, I1-I12, K and D_xK of a third-order ODE with zero flags.",
        "inputSchema": {
            "type": "object",
            "properties": {"equation": _EQUATION, "params": _PARAMS, "scaling": _SCALING, "seed": _SEED, "samples": _SAMPLES},
            "required": ["equation"],
        },
        "handler": compute_invariants,
    },
    "linearize_ode": {
        "description": "Construct a verified point transformation mapping the ODE onto u''' = 0, u''' = s u' + u, "
        "the Laguerre-Forsyth form or the Yumaguzhin form. Returns the residual determining system when the "
        "ansatz search fails.",
        "inputSchema": {
            "type": "object",
            "properties": {
                "equation": _EQUATION,
                "params": _PARAMS,
                "target": {
                    "type": "string",
                    "enum": ["auto", "laguerre", "yumaguzhin"],
                    "description": "Canonical form for four-symmetry equations (default: auto = laguerre)",
                    "default": "auto",
                },
                "sign": {
                    "type": "string",
                    "enum": ["+", "-"],
                    "description": "Sign of the Yumaguzhin form (default: first sign with a real gbar)",
                },
                "seed": _SEED,
                "samples": _SAMPLES,
                "ansatz_max_exp": {
                    "type": "integer",
                    "description": "Largest monomial exponent tried (default: 6)",
                    "default": 6,
                },
                "ansatz_budget": {
                    "type": "integer",
                    "description": "Candidate cap of the ansatz search (default: 5000)",
                    "default": 5000,
                },
            },
            "required": ["equation"],
        },
        "handler": linearize_ode,
    },
    "verify_transformation": {
        "description": "Check by exact pullback that xbar = phi(x, u), ubar = psi(x, u) maps u''' = f onto "
        "ubar''' = fbar. Refuted results carry a witness point.",
        "inputSchema": {
            "type": "object",
            "properties": {
                "equation": _EQUATION,
                "phi": {"type": "string", "description": "xbar as a function of x and u"},
                "psi": {"type": "string", "description": "ubar as a function of x and u"},
                "fbar": {"type": "string", "description": "Target right-hand side in xbar, ubar, ubar', ubar''"},
                "params": _PARAMS,
                "seed": _SEED,
                "samples": _SAMPLES,
            },
            "required": ["equation", "phi", "psi", "fbar"],
        },
        "handler": verify_transformation,
    },
    "classify_linear_ode": {
        "description": "Classify u''' = c1 u'' + c2 u' + c3 u + c4; with parameters, return the conditions "
        "for seven symmetries and the verdict off that set.",
        "inputSchema": {
            "type": "object",
            "properties": {
                "c1": {"type": "string", "description": "Coefficient of u'' (default: 0)", "default": "0"},
                "c2": {"type": "string", "description": "Coefficient of u' (default: 0)", "default": "0"},
                "c3": {"type": "string", "description": "Coefficient of u (default: 0)", "default": "0"},
                "c4": {"type": "string", "description": "Inhomogeneous term (default: 0)", "default": "0"},
                "params": _PARAMS,
                "seed": _SEED,
                "samples": _SAMPLES,
            },
            "required": [],
        },
        "handler": classify_linear_ode,
    },
}


def tool_listing() -> list[Tool]:
    return [Tool(name=name, description=spec["description"], inputSchema=spec["inputSchema"]) for name, spec in TOOLS.items()]


async def dispatch(name: str, arguments: dict) -> str:
    """Run one tool and serialize its result; failures become error payloads."""
    if name not in TOOLS:
        return f"Unknown tool: {name}"
    handler = TOOLS[name]["handler"]
    try:
        logger.info(f"Executing tool: {name}")
        result = await handler(**arguments)
    except Exception as e:
        logger.error(f"{name} failed: {e}")
        return json.dumps({"error": True, "message": str(e), "tool": name})
    return json.dumps(result, indent=2, default=str) if isinstance(result, dict) else str(result)


def create_server() -> Server:
    """MCP server exposing the TOOLS registry."""
    server = Server("ode-linearizer", version=__version__)

    @server.list_tools()
    async def list_tools() -> list[Tool]:
        return tool_listing()

    @server.call_tool()
    async def call_tool(name: str, arguments: dict) -> list[TextContent]:
        return [TextContent(type="text", text=await dispatch(name, arguments))]

    return server


async def run_server() -> None:
    """Serve over stdio until the client disconnects."""
    server = create_server()
    logger.info(f"ode-linearizer {__version__} serving {len(TOOLS)} tools on stdio")
    async with stdio_server() as (read_stream, write_stream):
        await server.run(read_stream, write_stream, server.create_initialization_options())


def main() -> None:
    configure_logging("INFO")
    asyncio.run(run_server())


if __name__ == "__main__":
    main()
