"""ode-linearizer - point-symmetry classification and linearization of u''' = f(x, u, u', u'')."""

from ode_linearizer.core import classify, linearize, parse, verify_transformation

__all__ = ["classify", "linearize", "parse", "verify_transformation"]
__version__ = "0.1.0"
