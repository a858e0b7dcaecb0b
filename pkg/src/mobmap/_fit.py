"""Log-log power-law fitting shared by the metric-dimension estimators."""

from __future__ import annotations

import numpy as np


class FitError(ValueError):
    """Raised when the data cannot support a log-log fit."""


def _validated_logs(x, y):
    x = np.ascontiguousarray(x, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise FitError("need two 1-d arrays of equal length")
    if x.shape[0] < 2:
        raise FitError("need at least two points")
    if (x <= 0).any() or (y <= 0).any():
        raise FitError("log-log fit needs strictly positive data")
    lx, ly = np.log(x), np.log(y)
    if np.ptp(lx) == 0 or np.ptp(ly) == 0:
        raise FitError("degenerate (constant) data, slope undefined")
    return lx, ly


def loglog_slope(x, y) -> tuple:
    """OLS slope and intercept of log(y) against log(x)."""
    lx, ly = _validated_logs(x, y)
    slope, intercept = np.polyfit(lx, ly, 1)
    return float(slope), float(intercept)


def bootstrap_slope_interval(x, y, n_boot: int = 500, generator=None, level: float = 0.95) -> tuple:
    """Percentile confidence interval for the log-log slope, pairs bootstrap."""
    lx, ly = _validated_logs(x, y)
    gen = generator if generator is not None else np.random.default_rng(0)
    k = lx.shape[0]
    slopes = np.empty(n_boot)
    for b in range(n_boot):
        pick = gen.integers(0, k, size=k)
        sx, sy = lx[pick], ly[pick]
        if np.ptp(sx) == 0:
            slopes[b] = np.nan
            continue
        slopes[b] = np.polyfit(sx, sy, 1)[0]
    slopes = slopes[~np.isnan(slopes)]
    if slopes.shape[0] == 0:
        raise FitError("all bootstrap resamples degenerate")
    alpha = (1.0 - level) / 2.0
    return (
        float(np.quantile(slopes, alpha)),
        float(np.quantile(slopes, 1.0 - alpha)),
    )
