"""Small statistical helpers shared by experiments and verifiers."""
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.stats import iqr

from ..config import config


def mean_and_se(samples, axis: int = 0) -> Tuple[np.ndarray, np.ndarray]:
    """Sample mean and standard error of the mean along ``axis`` (ddof=1)."""
    data = np.asarray(samples)
    count = data.shape[axis]
    mean = data.mean(axis=axis)
    if count < 2:
        return mean, np.zeros_like(np.abs(mean), dtype=float)
    if np.iscomplexobj(data):
        var = data.real.var(axis=axis, ddof=1) + data.imag.var(axis=axis, ddof=1)
    else:
        var = data.var(axis=axis, ddof=1)
    return mean, np.sqrt(var / count)


def within_tolerance(
    estimate: float,
    target: float,
    se: float,
    abs_tol: Optional[float] = None,
    z: Optional[float] = None,
) -> bool:
    """|estimate - target| <= max(abs_tol, z * se)."""
    abs_tol = config.MOMENT_TOL if abs_tol is None else abs_tol
    z = config.Z_SCORE if z is None else z
    return bool(abs(estimate - target) <= max(abs_tol, z * se))


@dataclass(frozen=True)
class GrowthVerdict:
    slope: float
    slope_se: float
    passed: bool

    def to_dict(self) -> dict:
        return {"slope": self.slope, "slope_se": self.slope_se, "passed": self.passed}


def growth_verdict(
    ns: Sequence[int],
    values: Sequence[float],
    ses: Optional[Sequence[float]] = None,
    max_slope: Optional[float] = None,
    sigmas: Optional[float] = None,
) -> GrowthVerdict:
    """
    Log-log slope of ``values`` against ``ns`` and whether it shows growth.

    Each value is floored at its standard error before taking logs. The sweep
    passes when slope <= max_slope + sigmas * se(slope).
    """
    max_slope = config.GROWTH_SLOPE if max_slope is None else max_slope
    sigmas = config.GROWTH_SIGMAS if sigmas is None else sigmas
    x = np.log(np.asarray(ns, dtype=float))
    vals = np.abs(np.asarray(values, dtype=float))
    errs = np.zeros_like(vals) if ses is None else np.abs(np.asarray(ses, dtype=float))
    floored = np.maximum(vals, errs)
    if x.size < 2 or not np.any(floored > 0):
        return GrowthVerdict(0.0, 0.0, True)

    floored = np.maximum(floored, np.finfo(float).tiny)
    y = np.log(floored)
    sigma = errs / floored
    if np.all(sigma > 0):
        w = 1.0 / sigma**2
        xbar = np.sum(w * x) / np.sum(w)
        ybar = np.sum(w * y) / np.sum(w)
        sxx = np.sum(w * (x - xbar) ** 2)
        slope = float(np.sum(w * (x - xbar) * (y - ybar)) / sxx)
        slope_se = float(np.sqrt(1.0 / sxx))
    else:
        slope, intercept = np.polyfit(x, y, 1)
        slope = float(slope)
        if x.size > 2:
            resid = y - (slope * x + intercept)
            slope_se = float(np.sqrt(np.sum(resid**2) / (x.size - 2) / np.sum((x - x.mean()) ** 2)))
        else:
            slope_se = 0.0
    return GrowthVerdict(slope, slope_se, bool(slope <= max_slope + sigmas * slope_se))


@dataclass(frozen=True)
class Histogram:
    edges: List[float]
    masses: List[float]

    def to_dict(self) -> dict:
        return {"edges": list(self.edges), "masses": list(self.masses)}


def freedman_diaconis_bins(data: np.ndarray) -> int:
    """
    Freedman-Diaconis bin count, capped at ceil(2 sqrt(n)).

    A point mass plus a few outliers gives a tiny IQR over a wide range, and
    the uncapped rule would then ask for an unbounded number of bins.
    """
    limit = float(np.ceil(2.0 * np.sqrt(data.size)))
    width = 2.0 * float(iqr(data)) * data.size ** (-1.0 / 3.0)
    span = float(np.ptp(data))
    if width <= 0.0 or span <= 0.0:
        return 1
    return int(max(1.0, min(np.ceil(span / width), limit)))


def freedman_diaconis_histogram(values) -> Histogram:
    """Histogram with Freedman-Diaconis bins (capped); masses sum to one."""
    data = np.asarray(values, dtype=float).ravel()
    if data.size == 0:
        return Histogram([], [])
    edges = np.histogram_bin_edges(data, bins=freedman_diaconis_bins(data))
    counts, edges = np.histogram(data, bins=edges)
    masses = counts / counts.sum()
    return Histogram([float(e) for e in edges], [float(m) for m in masses])
