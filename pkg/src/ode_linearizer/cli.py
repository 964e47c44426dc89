"""Command-line interface.

Exit codes: 0 success, 1 not linearizable / wrong branch / refuted,
2 parse error, 3 indeterminate or unknown, 4 ansatz search failed.
"""

from __future__ import annotations

import functools
import json
import sys
from collections.abc import Callable
from typing import Any

import click
from dotenv import load_dotenv

from ode_linearizer import __version__
from ode_linearizer.core import (
    Linearizer,
    beam_constraint_check,
    classify,
    classify_linear,
    compute_report,
    dump_system,
    jet,
    make_context,
    parse,
    parse_barred,
)
from ode_linearizer.core.errors import (
    AnsatzFailed,
    ExpressionSyntaxError,
    NotLinearizable,
    OdeLinearizerError,
    Undecided,
    UnknownIdentifier,
    VerificationFailed,
    WrongBranch,
)
from ode_linearizer.core.grammar import as_symbols
from ode_linearizer.log import configure_logging
from ode_linearizer.schemas import (
    CanonicalTarget,
    JScaling,
    OutputFormat,
    PointTransformation,
    RunConfig,
    Sign,
    SymmetryClass,
    Verdict,
    VerifyOutcome,
)
from ode_linearizer.utils import (
    condition_lines,
    describe_class,
    flag_lines,
    load_source,
    report_lines,
    result_lines,
    verification_lines,
)

ENV_PREFIX = "ODE_LINEARIZER_"

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_PARSE = 2
EXIT_UNDECIDED = 3
EXIT_ANSATZ = 4


def _env(name: str) -> str:
    return f"{ENV_PREFIX}{name}"


def run_options(func: Callable) -> Callable:
    """Options every subcommand shares; each also reads ODE_LINEARIZER_<NAME>."""
    options = [
        click.option("--seed", type=int, default=0, show_default=True, envvar=_env("SEED"),
                     help="Seed of the sampling zero test."),
        click.option("--samples", type=click.IntRange(min=1), default=12, show_default=True,
                     envvar=_env("SAMPLES"), help="Sample points per zero test."),
        click.option("--format", "output_format", type=click.Choice([f.value for f in OutputFormat]),
                     default=OutputFormat.TEXT.value, show_default=True, envvar=_env("FORMAT")),
        click.option("--params", default="", envvar=_env("PARAMS"),
                     help='Comma-separated parameter names, e.g. "a,b,c".'),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def source_options(func: Callable) -> Callable:
    func = click.option("--file", "file", type=click.Path(exists=True, dir_okay=False),
                        help="Read the equation from a file.")(func)
    return click.argument("equation", required=False)(func)


def _config(**options: Any) -> RunConfig:
    values = {k: v for k, v in options.items() if v is not None}
    values["params"] = [s.name for s in as_symbols(values.get("params", ""))]
    return RunConfig(**values)


def _context(config: RunConfig, equation: str | None, file: str | None):
    symbols = as_symbols(config.params)
    return make_context(parse(load_source(equation, file), symbols), symbols, config=config.zero_test_config())


def _emit(config: RunConfig, data: dict[str, Any], lines: list[str]) -> None:
    if config.output_format is OutputFormat.JSON:
        click.echo(json.dumps(data, indent=2, sort_keys=True, default=str))
    else:
        for line in lines:
            click.echo(line)


def _exit(code: int, message: str | None = None) -> None:
    if message:
        click.echo(f"error: {message}", err=True)
    sys.exit(code)


def handle_errors(func: Callable) -> Callable:
    """Map engine errors onto exit codes."""

    @functools.wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        try:
            return func(*args, **kwargs)
        except (ExpressionSyntaxError, UnknownIdentifier) as exc:
            _exit(EXIT_PARSE, str(exc))
        except AnsatzFailed as exc:
            click.echo(json.dumps(dump_system(exc.residual), indent=2, sort_keys=True))
            _exit(EXIT_ANSATZ, str(exc))
        except Undecided as exc:
            _exit(EXIT_UNDECIDED, str(exc))
        except VerificationFailed as exc:
            undecided = exc.result is not None and exc.result.verification.outcome is VerifyOutcome.UNKNOWN
            _exit(EXIT_UNDECIDED if undecided else EXIT_NEGATIVE, str(exc))
        except (NotLinearizable, WrongBranch) as exc:
            _exit(EXIT_NEGATIVE, str(exc))
        except OdeLinearizerError as exc:
            _exit(EXIT_NEGATIVE, str(exc))
        except ValueError as exc:
            _exit(EXIT_PARSE, str(exc))

    return wrapper


def _class_exit(result: SymmetryClass) -> None:
    if result.verdict is Verdict.NOT_LINEARIZABLE:
        sys.exit(EXIT_NEGATIVE)
    if result.verdict is Verdict.INDETERMINATE:
        sys.exit(EXIT_UNDECIDED)


@click.group()
@click.version_option(__version__, prog_name="ode-linearizer")
def cli() -> None:
    """Point-symmetry classification and linearization of u''' = f(x, u, u', u'')."""


@cli.command("classify")
@source_options
@click.option("--scaling", type=click.Choice([s.value for s in JScaling]), default=JScaling.LAGUERRE_FORSYTH.value,
              show_default=True, envvar=_env("SCALING"))
@run_options
@handle_errors
def classify_command(equation, file, scaling, **options) -> None:
    """Seven, five or four point symmetries, or not linearizable."""
    config = _config(scaling=scaling, **options)
    result = classify(_context(config, equation, file), config.scaling)
    _emit(config, result.model_dump(mode="json"), [describe_class(result), *flag_lines(result.report)])
    _class_exit(result)


@cli.command("invariants")
@source_options
@click.option("--scaling", type=click.Choice([s.value for s in JScaling]), default=JScaling.LAGUERRE_FORSYTH.value,
              show_default=True, envvar=_env("SCALING"))
@run_options
@handle_errors
def invariants_command(equation, file, scaling, **options) -> None:
    """Print every relative invariant with its zero flag."""
    config = _config(scaling=scaling, **options)
    report = compute_report(_context(config, equation, file), config.scaling)
    _emit(config, report.model_dump(mode="json"), report_lines(report))


@cli.command("linearize")
@source_options
@click.option("--target", type=click.Choice([t.value for t in CanonicalTarget]), default=CanonicalTarget.AUTO.value,
              show_default=True, envvar=_env("TARGET"))
@click.option("--sign", type=click.Choice([s.value for s in Sign]), default=None, envvar=_env("SIGN"),
              help="Sign of the Yumaguzhin form; default is the first sign with a real gbar.")
@click.option("--ansatz-max-exp", type=click.IntRange(min=0), default=6, show_default=True,
              envvar=_env("ANSATZ_MAX_EXP"))
@click.option("--ansatz-budget", type=click.IntRange(min=1), default=5000, show_default=True,
              envvar=_env("ANSATZ_BUDGET"))
@run_options
@handle_errors
def linearize_command(equation, file, target, sign, ansatz_max_exp, ansatz_budget, **options) -> None:
    """Construct and verify the linearizing point transformation."""
    config = _config(target=target, sign=sign, ansatz_max_exp=ansatz_max_exp, ansatz_budget=ansatz_budget, **options)
    result = Linearizer(config).linearize(_context(config, equation, file))
    _emit(config, result.model_dump(mode="json"), result_lines(result))


@cli.command("verify")
@source_options
@click.option("--phi", required=True, help="xbar as a function of x and u.")
@click.option("--psi", required=True, help="ubar as a function of x and u.")
@click.option("--fbar", required=True, help="Target right-hand side in xbar, ubar, ubar', ubar''.")
@run_options
@handle_errors
def verify_command(equation, file, phi, psi, fbar, **options) -> None:
    """Check a transformation against a target equation by exact pullback."""
    config = _config(**options)
    ctx = _context(config, equation, file)
    symbols = as_symbols(config.params)
    t = PointTransformation(phi=parse(phi, symbols), psi=parse(psi, symbols))
    result = jet.verify_transformation(ctx, t, parse_barred(fbar, symbols))
    _emit(config, result.model_dump(mode="json"), verification_lines(result))
    if result.outcome is VerifyOutcome.REFUTED:
        sys.exit(EXIT_NEGATIVE)
    if result.outcome is VerifyOutcome.UNKNOWN:
        sys.exit(EXIT_UNDECIDED)


@cli.command("linear")
@click.option("--c1", default="0", show_default=True, help="Coefficient of u''.")
@click.option("--c2", default="0", show_default=True, help="Coefficient of u'.")
@click.option("--c3", default="0", show_default=True, help="Coefficient of u.")
@click.option("--c4", default="0", show_default=True, help="Inhomogeneous term.")
@run_options
@handle_errors
def linear_command(c1, c2, c3, c4, **options) -> None:
    """Classify u''' = c1 u'' + c2 u' + c3 u + c4, stratified over parameters."""
    config = _config(**options)
    symbols = as_symbols(config.params)
    coefficients = [parse(c, symbols) for c in (c1, c2, c3, c4)]
    result = classify_linear(*coefficients, params=symbols, config=config.zero_test_config())
    if isinstance(result, SymmetryClass):
        _emit(config, result.model_dump(mode="json"), [describe_class(result)])
        _class_exit(result)
    else:
        _emit(config, result.model_dump(mode="json"), condition_lines(result))


@cli.command("beam")
@click.argument("rigidity")
@click.option("--load", "load", default="pa3", show_default=True, help="Name of the load parameter p*a^3.")
@run_options
@handle_errors
def beam_command(rigidity, load, **options) -> None:
    """Check the five-symmetry constraint on a beam rigidity B(x)."""
    config = _config(**options)
    pa3 = as_symbols([load])[0]
    symbols = [pa3, *(s for s in as_symbols(config.params) if s != pa3)]
    check = beam_constraint_check(parse(rigidity, symbols), pa3, config.zero_test_config())
    lines = [
        f"constraint: {check.outcome.value}",
        describe_class(check.classification),
        f"consistent: {'yes' if check.consistent else 'no'}",
    ]
    _emit(config, check.model_dump(mode="json"), lines)
    if not check.consistent:
        sys.exit(EXIT_NEGATIVE)


def main() -> None:
    """CLI entry point."""
    load_dotenv()
    configure_logging("WARNING")
    cli()


if __name__ == "__main__":
    main()
