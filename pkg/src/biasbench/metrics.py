"""Complexity distributions, AUC, expressivity, and Spearman correlation."""

from __future__ import annotations

import csv
import io
import math
from collections import Counter
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np
from scipy import stats

_MASS_TOL = 1e-12


@dataclass(frozen=True)
class ComplexityDistribution:
    """Empirical probability mass over complexity values from ``trials`` samples."""

    support: tuple[float, ...]
    mass: tuple[float, ...]
    trials: int

    def __post_init__(self):
        if len(self.support) != len(self.mass) or not self.support:
            raise ValueError("support and mass must be non-empty and of equal length")
        if any(b <= a for a, b in zip(self.support, self.support[1:])):
            raise ValueError("support must be strictly increasing")
        if any(m < 0 for m in self.mass) or abs(math.fsum(self.mass) - 1.0) > _MASS_TOL:
            raise ValueError("masses must be non-negative and sum to 1")
        if self.trials < 1:
            raise ValueError("trials must be positive")

    def mean(self) -> float:
        return math.fsum(x * p for x, p in zip(self.support, self.mass))

    def to_csv(self) -> str:
        """Rows of ``complexity,probability`` with a header line."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["complexity", "probability"])
        for x, p in zip(self.support, self.mass):
            writer.writerow([repr(x), repr(p)])
        return buf.getvalue()


@dataclass(frozen=True)
class StepCDF:
    """Right-continuous step function: ``F(x) = cumulative[k]`` on ``[points[k], points[k+1])``."""

    points: tuple[float, ...]
    cumulative: tuple[float, ...]

    def __call__(self, x: float) -> float:
        k = int(np.searchsorted(self.points, x, side="right"))
        return 0.0 if k == 0 else self.cumulative[k - 1]


@dataclass(frozen=True)
class BiasExpressivityScore:
    auc: float
    exp: float
    c_min: float
    c_max: float


@dataclass(frozen=True)
class CorrelationResult:
    rho: float
    p_value: float
    n: int

    def to_dict(self) -> dict:
        return {"rho": self.rho, "p_value": self.p_value, "n": self.n}


def empirical_distribution(scores: Iterable[float]) -> ComplexityDistribution:
    counts = Counter(float(s) for s in scores)
    if not counts:
        raise ValueError("cannot build a distribution from zero scores")
    total = sum(counts.values())
    support = tuple(sorted(counts))
    mass = tuple(counts[x] / total for x in support)
    return ComplexityDistribution(support, mass, total)


def cdf(dist: ComplexityDistribution) -> StepCDF:
    cumulative = []
    acc = []
    for p in dist.mass:
        acc.append(p)
        cumulative.append(math.fsum(acc))
    # Rounding must not leave the last step a hair under 1.
    cumulative[-1] = 1.0
    return StepCDF(dist.support, tuple(cumulative))


def auc(dist: ComplexityDistribution, c_min: float, c_max: float) -> float:
    """Area under the complexity CDF between ``c_min`` and ``c_max``.

    The CDF is zero below the smallest support point, so the area is the sum of
    ``F(x_k) * (x_{k+1} - x_k)`` over the steps, with ``c_max`` closing the last one.
    """
    if c_min > dist.support[0] or c_max < dist.support[-1]:
        raise ValueError("integration range excludes support")
    step = cdf(dist)
    right = list(step.points[1:]) + [c_max]
    return math.fsum(f * (b - a) for f, a, b in zip(step.cumulative, step.points, right))


def expressivity(functions: Sequence[str]) -> float:
    """Fraction of distinct functions among the ``T`` sampled ones."""
    if not functions:
        raise ValueError("expressivity needs at least one function")
    lengths = {len(f) for f in functions}
    if len(lengths) != 1:
        raise ValueError(f"all functions must have the same length, got lengths {sorted(lengths)}")
    return len(set(functions)) / len(functions)


def score(dist: ComplexityDistribution, functions: Sequence[str], c_min: float, c_max: float) -> BiasExpressivityScore:
    return BiasExpressivityScore(auc(dist, c_min, c_max), expressivity(functions), c_min, c_max)


def average_ranks(values: Sequence[float]) -> np.ndarray:
    """1-based ranks; tied values share the mean of the ranks they span."""
    x = np.asarray(values, dtype=float)
    order = np.argsort(x, kind="mergesort")
    ranks = np.empty(len(x))
    sorted_x = x[order]
    start = 0
    while start < len(x):
        stop = start
        while stop + 1 < len(x) and sorted_x[stop + 1] == sorted_x[start]:
            stop += 1
        ranks[order[start : stop + 1]] = (start + stop) / 2 + 1
        start = stop + 1
    return ranks


def spearman(x: Sequence[float], y: Sequence[float]) -> CorrelationResult:
    """Spearman rank correlation with a two-sided t-approximation p-value.

    Without ties this is ``1 - 6 * sum(d_i^2) / (n (n^2 - 1))``; with ties it is
    the Pearson correlation of the average ranks.
    """
    if len(x) != len(y):
        raise ValueError(f"length mismatch: {len(x)} vs {len(y)}")
    n = len(x)
    if n < 3:
        raise ValueError(f"spearman needs at least 3 samples, got {n}")
    rx, ry = average_ranks(x), average_ranks(y)
    if np.all(rx == rx[0]) or np.all(ry == ry[0]):
        raise ValueError("undefined correlation: constant input")

    if len(set(rx)) == n and len(set(ry)) == n:
        d2 = float(np.sum((rx - ry) ** 2))
        rho = 1.0 - 6.0 * d2 / (n * (n * n - 1))
    else:
        dx, dy = rx - rx.mean(), ry - ry.mean()
        rho = float(np.dot(dx, dy) / math.sqrt(np.dot(dx, dx) * np.dot(dy, dy)))
    rho = min(1.0, max(-1.0, rho))
    return CorrelationResult(rho, spearman_p_value(rho, n), n)


def spearman_p_value(rho: float, n: int) -> float:
    if abs(rho) >= 1.0:
        return 0.0
    t = rho * math.sqrt((n - 2) / (1.0 - rho * rho))
    return float(min(1.0, 2.0 * stats.t.sf(abs(t), n - 2)))
