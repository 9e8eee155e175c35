from __future__ import annotations

from collections.abc import Callable
from typing import Any, TypeVar

import click
from dotenv import load_dotenv
from rich.console import Console
from rich.table import Table

from sincsmooth import __version__
from sincsmooth.config import get_settings
from sincsmooth.core.types import GridAxis, Smoothness
from sincsmooth.errors import DomainError
from sincsmooth.logging import configure_logging
from sincsmooth.runner import Command, RunConfig, parse_grid, parse_overrides, parse_rule, run

console = Console()
F = TypeVar("F", bound=Callable[..., Any])


def _parse_rule(
    ctx: click.Context,  # noqa: ARG001
    param: click.Parameter,  # noqa: ARG001
    value: str | None,
) -> Smoothness | None:
    if value is None:
        return None
    try:
        return parse_rule(value)
    except DomainError as exc:
        raise click.BadParameter(str(exc)) from exc


def _parse_grid(
    ctx: click.Context,  # noqa: ARG001
    param: click.Parameter,  # noqa: ARG001
    value: tuple[str, ...],
) -> tuple[GridAxis, ...]:
    try:
        return tuple(parse_grid(axis) for axis in value)
    except DomainError as exc:
        raise click.BadParameter(str(exc)) from exc


def _parse_floats(
    ctx: click.Context,  # noqa: ARG001
    param: click.Parameter,  # noqa: ARG001
    value: str | None,
) -> tuple[float, ...]:
    if value is None:
        return ()
    try:
        return tuple(float(part) for part in value.split(",") if part.strip())
    except ValueError as exc:
        raise click.BadParameter("Expected comma-separated numbers.") from exc


def _io_options(func: F) -> F:
    func = click.option(
        "--output",
        "-o",
        "output_path",
        default="-",
        show_default=True,
        help="Output CSV, - for stdout.",
    )(func)
    return click.option(
        "--input",
        "-i",
        "input_path",
        default="-",
        show_default=True,
        help="Input CSV, - for stdin.",
    )(func)


def _estimator_options(func: F) -> F:
    options = [
        click.option("--threads", type=int, help="Worker threads, 0 = all cores."),
        click.option("--seed", default=0, show_default=True, type=int, help="Root RNG seed."),
        click.option(
            "--grid",
            multiple=True,
            callback=_parse_grid,
            help="Evaluation axis min:max:count; repeat once per dimension.",
        ),
        click.option(
            "--candidates",
            callback=_parse_floats,
            help="Comma-separated radii for least-squares cross-validation.",
        ),
        click.option(
            "--rule", callback=_parse_rule, help="Radius rule: super:alpha:C1 or ordinary:beta."
        ),
        click.option("--R", "R", type=float, help="Explicit radius."),
    ]
    for option in options:
        func = option(func)
    return _io_options(func)


def _point_option(func: F) -> F:
    return click.option(
        "--x", "x", callback=_parse_floats, help="Comma-separated point, e.g. --x=1,-1."
    )(func)


def _tau_option(func: F) -> F:
    return click.option(
        "--tau", default=0.1, show_default=True, type=float, help="Miscoverage level (0..1)."
    )(func)


def _execute(command: Command, **options: Any) -> None:
    code = run(RunConfig(command=command, **options))
    if code:
        raise SystemExit(code)


@click.group()
def main() -> None:
    """Fourier-kernel smoothing CLI."""
    load_dotenv()
    configure_logging(get_settings().log_level)


@main.command()
def version() -> None:
    """Print package version."""
    console.print(__version__)


@main.command()
def doctor() -> None:
    """Print resolved settings."""
    settings = get_settings()

    table = Table(title="Settings")
    table.add_column("Key", style="bold")
    table.add_column("Value")
    for name, field_info in type(settings).model_fields.items():
        table.add_row(field_info.alias or name.upper(), str(getattr(settings, name)))

    console.print("OK")
    console.print(table)


@main.command()
@_estimator_options
@_point_option
@_tau_option
@click.option(
    "--variance",
    type=click.Choice(["empirical", "plugin"]),
    default="empirical",
    show_default=True,
    help="Variance used for the interval columns.",
)
def density(**options: Any) -> None:
    """Density estimate with pointwise intervals on a grid."""
    _execute(Command.DENSITY, **options)


@main.command()
@_estimator_options
@_point_option
@click.option("--order", type=click.IntRange(1, 2), default=1, show_default=True)
def derivs(**options: Any) -> None:
    """Gradient or Hessian of the density estimate."""
    _execute(Command.DERIVS, **options)


@main.command()
@_estimator_options
@_point_option
@_tau_option
@click.option(
    "--variance",
    type=click.Choice(["empirical", "plugin"]),
    default="empirical",
    show_default=True,
)
def ci(**options: Any) -> None:
    """Pointwise confidence interval for the density."""
    _execute(Command.CI, **options)


@main.command()
@_estimator_options
@_tau_option
@click.option("--B", "B", default=200, show_default=True, type=int, help="Bootstrap replicates.")
def band(**options: Any) -> None:
    """Bootstrap confidence band over the grid."""
    _execute(Command.BAND, **options)


@main.command()
@_estimator_options
@_point_option
@_tau_option
def regress(**options: Any) -> None:
    """Regression estimate with pointwise intervals (CSV needs a y column)."""
    _execute(Command.REGRESS, **options)


@main.command()
@_estimator_options
@click.option("--noise", required=True, help="gaussian:h, laplace:b or none.")
@click.option("--order", type=click.IntRange(0, 1), default=0, show_default=True)
@click.option(
    "--mc",
    "mc_draws",
    default=0,
    show_default=True,
    type=click.IntRange(min=0),
    help="Uniform frequency draws per observation; 0 = quadrature.",
)
def deconv(**options: Any) -> None:
    """Mixing-density estimate or its derivative."""
    _execute(Command.DECONV, **options)


@main.command()
@_estimator_options
@click.option("--noise", help="Find modes of the mixing density under this noise.")
def modes(**options: Any) -> None:
    """Local modes of the density (or mixing density)."""
    _execute(Command.MODES, **options)


@main.command()
@_estimator_options
@_point_option
def modal(**options: Any) -> None:
    """Conditional modes of y over a grid of x."""
    _execute(Command.MODAL, **options)


@main.command()
@_estimator_options
@_point_option
@click.option(
    "--transform",
    type=click.Choice(["log-returns"]),
    help="Apply 10*log(p[t+1]/p[t]) before estimating.",
)
def transition(**options: Any) -> None:
    """Transition density p(y | x) of a time-ordered series."""
    _execute(Command.TRANSITION, **options)


@main.command()
@_io_options
@click.option("--candidates", required=True, callback=_parse_floats, help="Comma-separated radii.")
def lscv(**options: Any) -> None:
    """Least-squares cross-validation scores."""
    _execute(Command.LSCV, **options)


@main.command()
@click.option("--output", "-o", "output_path", default="-", show_default=True)
@click.option("--example", required=True, type=click.IntRange(1, 7), help="Example number.")
@click.option("--n", "n", type=click.IntRange(min=1), help="Sample size (default per example).")
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--set", "overrides", multiple=True, help="Parameter override key=value.")
@click.option("--full-scale", is_flag=True, help="Use the large reference sample size.")
def simulate(overrides: tuple[str, ...], **options: Any) -> None:
    """Write a seeded example dataset as CSV."""
    try:
        parsed = parse_overrides(overrides)
    except DomainError as exc:
        raise click.BadParameter(str(exc), param_hint="--set") from exc
    _execute(Command.SIMULATE, overrides=parsed, **options)
