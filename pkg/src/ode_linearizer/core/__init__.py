"""Core module exports."""

from ode_linearizer.core.ansatz import AnsatzSolver, check_solution, dump_system, load_system, solve_ansatz
from ode_linearizer.core.classifier import beam_constraint_check, classify, classify_linear, classify_report
from ode_linearizer.core.grammar import parse, parse_barred
from ode_linearizer.core.invariants import InvariantCalculator, compute_report
from ode_linearizer.core.jet import compose, invert, make_context, verify_transformation
from ode_linearizer.core.linearizer import Linearizer, linearize, pushforward, verify_result
from ode_linearizer.core.printing import print_expr

__all__ = [
    "AnsatzSolver",
    "InvariantCalculator",
    "Linearizer",
    "beam_constraint_check",
    "check_solution",
    "classify",
    "classify_linear",
    "classify_report",
    "compose",
    "compute_report",
    "dump_system",
    "invert",
    "linearize",
    "load_system",
    "make_context",
    "parse",
    "parse_barred",
    "print_expr",
    "pushforward",
    "solve_ansatz",
    "verify_result",
    "verify_transformation",
]
