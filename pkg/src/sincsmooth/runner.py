from __future__ import annotations

import json
import math
import sys
import time
from collections.abc import Callable, Mapping
from dataclasses import dataclass, field
from enum import StrEnum
from typing import Any

import numpy as np
from loguru import logger
from numpy.typing import NDArray
from rich.console import Console

from sincsmooth import __version__
from sincsmooth.config import Settings, get_settings
from sincsmooth.core.numerics import parallel_map, two_sided_z
from sincsmooth.core.types import (
    EstimatorConfig,
    GridAxis,
    LabeledSample,
    MarkovSeries,
    OrdinarySmooth,
    SampleMatrix,
    Smoothness,
    Supersmooth,
    build_grid,
)
from sincsmooth.deconv import (
    NoiseModel,
    deconv_derivative_at,
    deconv_derivative_mc,
    deconv_grid,
    deconv_grid_mc,
)
from sincsmooth.density import (
    BootstrapPlan,
    bootstrap_band,
    density_derivative_at,
    pointwise_ci,
    select_radius,
    select_radius_lscv,
)
from sincsmooth.density.intervals import VarianceKind
from sincsmooth.density.radius import lscv_minimizer, lscv_scores
from sincsmooth.errors import DegenerateSmootherError, DomainError
from sincsmooth.ingest import (
    load_labeled,
    load_sample,
    load_series,
    log_returns,
    write_sample,
    write_table,
)
from sincsmooth.markov import transition_grid
from sincsmooth.modes import (
    AscentConfig,
    StartKind,
    find_modes_density,
    find_modes_mixing,
    modal_curve,
)
from sincsmooth.regression import regress_curve, sigma2_hat
from sincsmooth.regression.estimator import regression_half_width
from sincsmooth.simulate import ExampleId, ExampleSpec, generate

SCHEMA_VERSION = 1

_stderr = Console(stderr=True)


class Command(StrEnum):
    DENSITY = "density"
    DERIVS = "derivs"
    CI = "ci"
    BAND = "band"
    REGRESS = "regress"
    DECONV = "deconv"
    MODES = "modes"
    MODAL = "modal"
    TRANSITION = "transition"
    SIMULATE = "simulate"
    LSCV = "lscv"


@dataclass(frozen=True, slots=True)
class RunConfig:
    command: Command
    input_path: str = "-"
    output_path: str = "-"
    R: float | None = None  # noqa: N815
    rule: Smoothness | None = None
    candidates: tuple[float, ...] = ()
    grid: tuple[GridAxis, ...] = ()
    tau: float = 0.1
    B: int = 200  # noqa: N815
    seed: int = 0
    threads: int | None = None
    x: tuple[float, ...] = ()
    order: int = 1
    noise: str | None = None
    mc_draws: int = 0
    variance: VarianceKind = "empirical"
    transform: str | None = None
    example: int | None = None
    n: int | None = None
    overrides: Mapping[str, float] = field(default_factory=dict)
    full_scale: bool = False


@dataclass(slots=True)
class CommandResult:
    header: list[str]
    rows: NDArray[np.float64]
    summary: dict[str, Any]
    data: SampleMatrix | LabeledSample | MarkovSeries | None = None


def parse_rule(text: str) -> Smoothness:
    """'super:alpha:C1' or 'ordinary:beta'."""
    parts = [part.strip() for part in text.split(":")]
    try:
        if parts[0] in {"super", "supersmooth"} and len(parts) == 3:
            return Supersmooth(alpha=float(parts[1]), c1=float(parts[2]))
        if parts[0] in {"ordinary", "ord"} and len(parts) == 2:
            return OrdinarySmooth(beta=float(parts[1]))
    except ValueError as exc:
        raise DomainError(f"invalid smoothness rule {text!r}: {exc}") from exc
    raise DomainError(f"smoothness rule must be super:alpha:C1 or ordinary:beta, got {text!r}")


def parse_grid(text: str) -> GridAxis:
    """'min:max:count' for one axis."""
    parts = text.split(":")
    if len(parts) != 3:
        raise DomainError(f"grid axis must be min:max:count, got {text!r}")
    try:
        return GridAxis(lower=float(parts[0]), upper=float(parts[1]), count=int(parts[2]))
    except ValueError as exc:
        raise DomainError(f"invalid grid axis {text!r}: {exc}") from exc


def parse_overrides(pairs: tuple[str, ...]) -> dict[str, float]:
    values: dict[str, float] = {}
    for pair in pairs:
        key, sep, raw = pair.partition("=")
        if not sep or not key.strip():
            raise DomainError(f"override must be key=value, got {pair!r}")
        try:
            values[key.strip()] = float(raw)
        except ValueError as exc:
            raise DomainError(f"override {key.strip()} is not a number: {raw!r}") from exc
    return values


def _point_columns(d: int, prefix: str = "x") -> list[str]:
    return ["point"] if d == 1 else [f"{prefix}{j}" for j in range(1, d + 1)]


def _estimator_config(
    cfg: RunConfig,
    settings: Settings,
    data: SampleMatrix,
    *,
    radius_rows: SampleMatrix | None = None,
) -> tuple[EstimatorConfig, dict[str, Any]]:
    """Estimator configuration with the radius resolved from exactly one of R, rule, candidates."""
    supplied = [cfg.R is not None, cfg.rule is not None, bool(cfg.candidates)]
    if sum(supplied) != 1:
        raise DomainError("supply exactly one of --R, --rule, --candidates")
    threads = settings.threads if cfg.threads is None else cfg.threads
    base = EstimatorConfig.from_settings(
        settings, dimension=data.d, smoothness=cfg.rule, threads=threads, seed=cfg.seed
    )
    rows = radius_rows or data
    if cfg.R is not None:
        return base.with_radius(cfg.R), {"radius_source": "explicit"}
    if cfg.rule is not None:
        radius = select_radius(base, rows.n)
        return base.with_radius(radius), {"radius_source": "rule"}
    radius = select_radius_lscv(rows, list(cfg.candidates))
    return base.with_radius(radius), {"radius_source": "lscv"}


def _ascent_config(settings: Settings, grid: tuple[GridAxis, ...]) -> AscentConfig:
    return AscentConfig(
        starts=StartKind.GRID if grid else StartKind.DATA,
        grid=grid,
        max_iter=settings.max_ascent_iter,
        grad_tol=settings.grad_tol,
        ripple_fraction=settings.ripple_fraction,
        max_starts=settings.mode_max_starts or None,
        branch_fraction=settings.branch_fraction,
        prominence_z=settings.prominence_z,
    )


def _grid_points(cfg: RunConfig, d: int) -> NDArray[np.float64]:
    if not cfg.grid:
        raise DomainError("--grid is required for this command")
    if len(cfg.grid) != d:
        raise DomainError(f"grid has {len(cfg.grid)} axes, data has dimension {d}")
    return build_grid(cfg.grid)


def _evaluation_points(cfg: RunConfig, d: int) -> NDArray[np.float64]:
    if cfg.x:
        if len(cfg.x) != d:
            raise DomainError(f"--x has {len(cfg.x)} coordinates, data has dimension {d}")
        return np.array([cfg.x], dtype=np.float64)
    return _grid_points(cfg, d)


def _base_summary(estimator: str, est: EstimatorConfig, n: int, d: int) -> dict[str, Any]:
    return {"estimator": estimator, "R": est.R, "n": n, "d": d}


def _density(cfg: RunConfig, settings: Settings) -> CommandResult:
    sample = load_sample(cfg.input_path)
    est, extra = _estimator_config(cfg, settings, sample)
    points = _evaluation_points(cfg, sample.d)
    intervals = parallel_map(
        lambda x: pointwise_ci(sample, x, est, cfg.tau, variance=cfg.variance),
        list(points),
        est.threads,
    )
    rows = np.array(
        [
            [
                *interval.point,
                interval.estimate,
                est.clip_mode.apply(interval.estimate),
                interval.lower,
                interval.upper,
            ]
            for interval in intervals
        ]
    )
    header = [*_point_columns(sample.d), "estimate", "clipped", "lower", "upper"]
    summary = _base_summary("fourier_density", est, sample.n, sample.d)
    summary.update(extra, tau=cfg.tau, variance=cfg.variance, points=len(intervals))
    return CommandResult(header, rows, summary)


def _ci(cfg: RunConfig, settings: Settings) -> CommandResult:
    result = _density(cfg, settings)
    result.summary["estimator"] = "fourier_density_ci"
    return result


def _derivs(cfg: RunConfig, settings: Settings) -> CommandResult:
    sample = load_sample(cfg.input_path)
    est, extra = _estimator_config(cfg, settings, sample)
    points = _evaluation_points(cfg, sample.d)
    d = sample.d
    tensors = parallel_map(
        lambda x: density_derivative_at(sample, x, cfg.order, est), list(points), est.threads
    )
    if cfg.order == 1:
        names = [f"grad_{j}" for j in range(1, d + 1)]
    else:
        names = [f"hess_{j}{k}" for j in range(1, d + 1) for k in range(1, d + 1)]
    rows = np.array(
        [[*point, *tensor.entries.ravel()] for point, tensor in zip(points, tensors, strict=True)]
    )
    summary = _base_summary("fourier_density_derivative", est, sample.n, d)
    summary.update(extra, order=cfg.order)
    return CommandResult([*_point_columns(d), *names], rows, summary)


def _band(cfg: RunConfig, settings: Settings) -> CommandResult:
    sample = load_sample(cfg.input_path)
    est, extra = _estimator_config(cfg, settings, sample)
    grid = _grid_points(cfg, sample.d)
    band = bootstrap_band(sample, est, BootstrapPlan(B=cfg.B, seed=cfg.seed, grid=grid), cfg.tau)
    rows = np.column_stack([band.grid, band.center, band.lower, band.upper])
    summary = _base_summary("fourier_density_band", est, sample.n, sample.d)
    summary.update(extra, tau=cfg.tau, B=cfg.B, eta=band.eta, seed=cfg.seed)
    return CommandResult([*_point_columns(sample.d), "estimate", "lower", "upper"], rows, summary)


def _regress(cfg: RunConfig, settings: Settings) -> CommandResult:
    data = load_labeled(cfg.input_path)
    est, extra = _estimator_config(cfg, settings, data.x)
    points = _evaluation_points(cfg, data.d)
    evaluations = regress_curve(data, points, est)
    sigma2: float | None
    try:
        sigma2 = sigma2_hat(data, est)
    except DegenerateSmootherError as exc:
        logger.warning("No noise variance, intervals left empty: {}", exc)
        sigma2 = None
    z = two_sided_z(cfg.tau)
    rows = []
    for evaluation in evaluations:
        lower = upper = math.nan
        if sigma2 is not None and evaluation.reliable and evaluation.denominator != 0.0:
            half = regression_half_width(sigma2, data.n, est.R, data.d, evaluation.denominator, z)
            lower, upper = evaluation.m_hat - half, evaluation.m_hat + half
        rows.append([*evaluation.point, evaluation.m_hat, float(evaluation.reliable), lower, upper])
    summary = _base_summary("fourier_regression", est, data.n, data.d)
    summary.update(
        extra,
        tau=cfg.tau,
        sigma2=sigma2,
        sigma2_degenerate=sigma2 is None,
        unreliable=sum(1 for evaluation in evaluations if not evaluation.reliable),
    )
    header = [*_point_columns(data.d), "estimate", "reliable", "lower", "upper"]
    return CommandResult(header, np.array(rows), summary)


def _noise(cfg: RunConfig, d: int) -> NoiseModel:
    if cfg.noise is None:
        raise DomainError("--noise is required for deconvolution")
    noise = NoiseModel.parse(cfg.noise)
    noise.check_dimension(d)
    return noise


def _deconv(cfg: RunConfig, settings: Settings) -> CommandResult:
    sample = load_sample(cfg.input_path)
    est, extra = _estimator_config(cfg, settings, sample)
    noise = _noise(cfg, sample.d)
    points = _grid_points(cfg, sample.d)
    d = sample.d
    summary = _base_summary("fourier_deconvolution", est, sample.n, d)
    summary.update(extra, noise=noise.describe(), order=cfg.order, mc_draws=cfg.mc_draws)

    if cfg.mc_draws > 0:
        if noise.kind != "gaussian":
            raise DomainError("Monte-Carlo deconvolution supports gaussian noise only")
        evaluate = deconv_derivative_mc if cfg.order == 1 else deconv_grid_mc
        evaluations = evaluate(sample, points[:, 0], noise.scale, est.R, cfg.mc_draws, cfg.seed)
        rows = np.array([[*e.theta, e.raw_value, e.mc_std_error] for e in evaluations])
        name = "derivative" if cfg.order == 1 else "estimate"
        return CommandResult([*_point_columns(d), name, "std_error"], rows, summary)

    if cfg.order == 1:
        tensors = parallel_map(
            lambda theta: deconv_derivative_at(sample, theta, noise, est, 1),
            list(points),
            est.threads,
        )
        rows = np.array([[*p, *t.entries] for p, t in zip(points, tensors, strict=True)])
        names = [f"grad_{j}" for j in range(1, d + 1)]
        return CommandResult([*_point_columns(d), *names], rows, summary)
    evaluations = deconv_grid(sample, points, noise, est)
    rows = np.array([[*e.theta, e.raw_value] for e in evaluations])
    return CommandResult([*_point_columns(d), "estimate"], rows, summary)


def _modes(cfg: RunConfig, settings: Settings) -> CommandResult:
    sample = load_sample(cfg.input_path)
    est, extra = _estimator_config(cfg, settings, sample)
    if cfg.grid and len(cfg.grid) != sample.d:
        raise DomainError(f"grid has {len(cfg.grid)} axes, data has dimension {sample.d}")
    ascent = _ascent_config(settings, cfg.grid)
    if cfg.noise is not None:
        mode_set = find_modes_mixing(sample, _noise(cfg, sample.d), est, ascent)
        estimator = "fourier_mixing_modes"
    else:
        mode_set = find_modes_density(sample, est, ascent)
        estimator = "fourier_density_modes"
    rows = np.array(
        [
            [*mode, value, norm, eig]
            for mode, value, norm, eig in zip(
                mode_set.modes,
                mode_set.values,
                mode_set.gradient_norms,
                mode_set.hessian_top_eigs,
                strict=True,
            )
        ]
    ).reshape(mode_set.k, sample.d + 3)
    summary = _base_summary(estimator, est, sample.n, sample.d)
    summary.update(extra, k=mode_set.k, starts=mode_set.starts, converged=mode_set.converged)
    header = [*_point_columns(sample.d), "value", "gradient_norm", "hessian_top_eig"]
    return CommandResult(header, rows, summary)


def _modal(cfg: RunConfig, settings: Settings) -> CommandResult:
    data = load_labeled(cfg.input_path)
    joint = SampleMatrix(np.column_stack([data.x.data, data.y]))
    est, extra = _estimator_config(cfg, settings, data.x, radius_rows=joint)
    points = _evaluation_points(cfg, data.d)
    curve = modal_curve(data, points, est, _ascent_config(settings, ()))
    rows = [
        [*mode_set.x, y, value, dy, dyy]
        for mode_set in curve.mode_sets
        for y, value, (dy, dyy) in zip(
            mode_set.modes_y, mode_set.values, mode_set.certificates, strict=True
        )
    ]
    summary = _base_summary("fourier_modal_regression", est, data.n, data.d)
    summary.update(
        extra,
        points=len(curve.mode_sets),
        max_branches=max(len(mode_set.modes_y) for mode_set in curve.mode_sets),
    )
    header = [*_point_columns(data.d), "y", "value", "dy", "dyy"]
    return CommandResult(header, np.array(rows).reshape(len(rows), data.d + 4), summary)


def _transition(cfg: RunConfig, settings: Settings) -> CommandResult:
    series = load_series(cfg.input_path)
    if cfg.transform == "log-returns":
        series = MarkovSeries(log_returns(series.data))
    elif cfg.transform is not None:
        raise DomainError(f"unknown transform {cfg.transform!r}")
    if len(cfg.x) != series.d:
        raise DomainError(f"--x needs {series.d} coordinates for the conditioning point")
    rows_for_radius = SampleMatrix(series.data)
    est, extra = _estimator_config(cfg, settings, rows_for_radius)
    evaluations = transition_grid(series, cfg.x, _grid_points(cfg, series.d), est)
    rows = np.array([[*e.y, e.value, e.clipped, float(e.reliable)] for e in evaluations])
    summary = _base_summary("fourier_transition", est, series.T, series.d)
    summary.update(extra, x=list(cfg.x), transform=cfg.transform)
    header = [*_point_columns(series.d, prefix="y"), "estimate", "clipped", "reliable"]
    return CommandResult(header, rows, summary)


def _lscv(cfg: RunConfig, settings: Settings) -> CommandResult:  # noqa: ARG001
    if cfg.R is not None or cfg.rule is not None:
        raise DomainError("lscv takes --candidates only")
    if not cfg.candidates:
        raise DomainError("--candidates is required for lscv")
    sample = load_sample(cfg.input_path)
    scores = lscv_scores(sample, list(cfg.candidates))
    best_radius, best_score = lscv_minimizer(scores)
    summary = {
        "estimator": "lscv",
        "R": best_radius,
        "n": sample.n,
        "d": sample.d,
        "score": best_score,
    }
    return CommandResult(["R", "score"], np.array(scores), summary)


def _simulate(cfg: RunConfig, settings: Settings) -> CommandResult:  # noqa: ARG001
    if cfg.example is None:
        raise DomainError("--example is required for simulate")
    try:
        example = ExampleId(cfg.example)
    except ValueError as exc:
        raise DomainError(f"example must be 1..7, got {cfg.example}") from exc
    spec = ExampleSpec(
        example, n=cfg.n, seed=cfg.seed, overrides=cfg.overrides, full_scale=cfg.full_scale
    )
    data = generate(spec)
    summary = {
        "estimator": "simulate",
        "example": int(example),
        "n": spec.size,
        "d": data.d,
        "seed": cfg.seed,
        "overrides": dict(spec.overrides),
    }
    return CommandResult([], np.empty((0, 0)), summary, data=data)


_HANDLERS: dict[Command, Callable[[RunConfig, Settings], CommandResult]] = {
    Command.DENSITY: _density,
    Command.DERIVS: _derivs,
    Command.CI: _ci,
    Command.BAND: _band,
    Command.REGRESS: _regress,
    Command.DECONV: _deconv,
    Command.MODES: _modes,
    Command.MODAL: _modal,
    Command.TRANSITION: _transition,
    Command.SIMULATE: _simulate,
    Command.LSCV: _lscv,
}


def _emit(result: CommandResult, cfg: RunConfig) -> None:
    if result.data is not None:
        write_sample(cfg.output_path, result.data)
    else:
        write_table(cfg.output_path, result.header, result.rows)
    payload = json.dumps(result.summary, sort_keys=True, allow_nan=True)
    stream = sys.stderr if cfg.output_path == "-" else sys.stdout
    stream.write(payload + "\n")
    stream.flush()


def run(cfg: RunConfig, settings: Settings | None = None) -> int:
    """Execute one command; 0 on success, 1 on a domain error, 2 on an I/O error."""
    settings = settings or get_settings()
    started_at = time.monotonic()
    try:
        result = _HANDLERS[cfg.command](cfg, settings)
        result.summary.update(
            schema_version=SCHEMA_VERSION,
            command=str(cfg.command),
            version=__version__,
        )
        _emit(result, cfg)
    except DomainError as exc:
        _stderr.print(f"Error: {exc}", markup=False, highlight=False, soft_wrap=True)
        return 1
    except OSError as exc:
        _stderr.print(f"Error: {exc}", markup=False, highlight=False, soft_wrap=True)
        return 2
    logger.info("{} finished in {:.2f}s", cfg.command, time.monotonic() - started_at)
    return 0
