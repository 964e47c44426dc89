"""Utility functions shared by the CLI and the tools."""

from __future__ import annotations

from pathlib import Path

from ode_linearizer.core.printing import to_infix
from ode_linearizer.schemas import (
    ConditionReport,
    InvariantReport,
    LinearizationResult,
    SymmetryClass,
    TargetForm,
    Verdict,
    VerificationResult,
)


def load_source(text: str | None = None, file: str | Path | None = None) -> str:
    """ODE source from an argument or a file; exactly one must be given."""
    if (text is None) == (file is None):
        raise ValueError("give either an equation or a file, not both or neither")
    if file is not None:
        return Path(file).read_text(encoding="utf-8").strip()
    return text.strip()


def truncate_text(text: str, max_length: int = 1000, suffix: str = "...") -> str:
    """Truncate text to maximum length with suffix."""
    if len(text) <= max_length:
        return text
    return text[: max_length - len(suffix)] + suffix


def describe_class(result: SymmetryClass) -> str:
    """One-line verdict, e.g. ``four point symmetries; K = -3/u^4``."""
    verdict = result.verdict
    if verdict is Verdict.FIVE:
        return f"{verdict.description}; s = {to_infix(result.s)}"
    if verdict is Verdict.FOUR:
        return f"{verdict.description}; K = {to_infix(result.K)}"
    if verdict is Verdict.NOT_LINEARIZABLE:
        return f"{verdict.description}; nonvanishing: {', '.join(result.failing)}"
    if verdict is Verdict.INDETERMINATE:
        return f"{verdict.description}; undecided: {', '.join(result.undecided)}"
    return verdict.description


def flag_lines(report: InvariantReport | None) -> list[str]:
    if report is None:
        return []
    return [f"  {name}: {flag.value}" for name, flag in report.zero_flags.items()]


def report_lines(report: InvariantReport) -> list[str]:
    """Every invariant with its value and zero flag."""
    lines = [f"scaling: {report.scaling.value}"]
    for name in ("W", "J", "I1", "I2", "I4", "I5", "I6", "I7", "I8", "K", "DxK", "I9", "I10", "I11", "I12", "Ku"):
        value = report.expression(name)
        shown = "-" if value is None else to_infix(value)
        flag = report.zero_flags.get(name)
        lines.append(f"{name} = {shown}" + (f"  [{flag.value}]" if flag else ""))
    return lines


def condition_lines(report: ConditionReport) -> list[str]:
    lines = [f"W = {to_infix(report.W)}", "seven point symmetries iff all vanish:"]
    lines += [f"  {to_infix(c)} = 0" for c in report.seven_conditions]
    for name, roots in report.seven_solutions.items():
        lines += [f"  {name} = {to_infix(root)}" for root in roots]
    if report.DxK is not None:
        lines.append(f"DxK = {to_infix(report.DxK)}  [{report.DxK_flag.value}]")
    lines.append(f"otherwise: {report.generic_verdict.description}")
    return lines


def _target_line(result: LinearizationResult) -> str:
    canonical = result.canonical
    if canonical.rhs is not None and not canonical.complex_branch:
        line = f"ubar''' = {to_infix(canonical.rhs)}"
    elif canonical.form is TargetForm.LAGUERRE_FORSYTH:
        line = f"ubar''' = a(xbar)^3*ubar with a({to_infix(canonical.implicit['xbar'])}) = {to_infix(canonical.implicit['a'])}"
    else:
        line = f"gbar({to_infix(canonical.implicit['xbar'])}) = {to_infix(canonical.implicit['g'])}"
    if canonical.form is TargetForm.YUMAGUZHIN and canonical.g_bar is not None:
        line += f"; gbar = {to_infix(canonical.g_bar)}"
    if canonical.sign is not None:
        line += f", sign {canonical.sign.value}"
    return line


def result_lines(result: LinearizationResult) -> list[str]:
    """Transformation, canonical data, auxiliaries and the verification stamp."""
    t = result.transformation
    lines = [
        result.verdict.description,
        f"xbar = {to_infix(t.phi)}, ubar = {to_infix(t.psi)}",
        _target_line(result),
    ]
    for name, value in result.auxiliaries.items():
        lines.append(f"  {name} = {to_infix(value)}")
    for name, values in result.alternates.items():
        lines.append(f"  {name} alternates: {', '.join(to_infix(v) for v in values)}")
    for name, flag in result.identity_checks.items():
        lines.append(f"  {name}: {flag.value}")
    if result.rejected_branch is not None:
        lines.append(f"  rejected sign {result.rejected_branch.sign.value}: complex gbar = {to_infix(result.rejected_branch.g_bar)}")
    lines.append(result.verification.outcome.value.upper())
    return lines


def verification_lines(result: VerificationResult) -> list[str]:
    lines = [result.outcome.value.upper()]
    if result.witness:
        point = ", ".join(f"{name} = {value}" for name, value in result.witness.items())
        lines.append(f"witness: {point}")
    if not result.verified:
        lines.append(f"residual: {truncate_text(to_infix(result.residual))}")
    return lines
