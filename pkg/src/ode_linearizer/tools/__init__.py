"""MCP tool implementations."""

from ode_linearizer.tools.classify_linear_ode import classify_linear_ode
from ode_linearizer.tools.classify_ode import classify_ode
from ode_linearizer.tools.compute_invariants import compute_invariants
from ode_linearizer.tools.linearize_ode import linearize_ode
from ode_linearizer.tools.verify_transformation import verify_transformation

__all__ = [
    "classify_linear_ode",
    "classify_ode",
    "compute_invariants",
    "linearize_ode",
    "verify_transformation",
]
