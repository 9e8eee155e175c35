from __future__ import annotations

import os
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache
from typing import TypeVar

import numpy as np
from numpy.polynomial.legendre import leggauss
from numpy.typing import NDArray
from scipy.stats import norm

T = TypeVar("T")
U = TypeVar("U")


def canonical_sum(terms: NDArray[np.float64]) -> float:
    """Sum of a 1-D term vector in ascending order of value.

    The result depends only on the multiset of terms, never on their order.
    """
    return float(np.sort(terms).sum())


def canonical_sum_rows(terms: NDArray[np.float64]) -> NDArray[np.float64]:
    """`canonical_sum` applied to every row along the last axis."""
    flat = terms.reshape(-1, terms.shape[-1])
    sums = np.array([np.sort(row).sum() for row in flat], dtype=np.float64)
    return sums.reshape(terms.shape[:-1])


def guarded_ratio(numerator: float, denominator: float, floor: float) -> tuple[float, bool]:
    """numerator / denominator, or against +-floor (sign kept) when |denominator| <= floor.

    The flag tells whether the plain ratio was used.
    """
    if abs(denominator) > floor:
        return numerator / denominator, True
    sign = -1.0 if denominator < 0.0 else 1.0
    return numerator / (sign * floor), False


def normal_quantile(p: float) -> float:
    return float(norm.ppf(p))


def two_sided_z(tau: float) -> float:
    return normal_quantile(1.0 - tau / 2.0)


@lru_cache(maxsize=64)
def _leggauss(count: int) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    nodes, weights = leggauss(count)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def gauss_legendre(
    lower: float, upper: float, count: int
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    nodes, weights = _leggauss(count)
    half = 0.5 * (upper - lower)
    mid = 0.5 * (upper + lower)
    return mid + half * nodes, half * weights


def gauss_legendre_panels(
    lower: float, upper: float, panels: int, per_panel: int = 16
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    edges = np.linspace(lower, upper, panels + 1)
    nodes, weights = _leggauss(per_panel)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    points = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
    scaled = (half[:, None] * weights[None, :]).ravel()
    return points, scaled


def top_eigenvalue(hessian: NDArray[np.float64]) -> float:
    return float(np.linalg.eigvalsh(hessian)[-1])


def resolve_threads(threads: int) -> int:
    if threads > 0:
        return threads
    return os.cpu_count() or 1


def parallel_map(fn: Callable[[T], U], items: Sequence[T], threads: int = 0) -> list[U]:
    """Map `fn` over `items`, results in input order regardless of scheduling."""
    workers = min(resolve_threads(threads), len(items))
    if workers <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
