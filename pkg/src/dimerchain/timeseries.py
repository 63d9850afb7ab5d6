"""Sampled protocol metrics versus time, peak extraction, and line fits."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["TimeSeries", "PeakResult", "LinearFit", "find_optimal_time", "find_first_peak", "fit_linear"]


@dataclass(frozen=True)
class TimeSeries:
    """A metric sampled on an ascending time grid, with free-form metadata."""

    times: np.ndarray
    values: np.ndarray
    label: str = ""
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if t.shape != v.shape or t.ndim != 1:
            raise ValueError("times and values must be 1-d arrays of equal length")
        if t.size and np.any(np.diff(t) < 0):
            raise ValueError("time grid must be ascending")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", v)

    def __len__(self) -> int:
        return self.times.size

    def restricted(self, t_min: float, t_max: float) -> "TimeSeries":
        sel = (self.times >= t_min) & (self.times <= t_max)
        if not np.any(sel):
            raise ValueError(f"window [{t_min}, {t_max}] contains no grid points")
        return TimeSeries(self.times[sel], self.values[sel], self.label, dict(self.meta))


@dataclass(frozen=True)
class PeakResult:
    t_star: float
    value: float
    index: int
    on_boundary: bool


def _refine(times: np.ndarray, values: np.ndarray, k: int) -> tuple[float, float]:
    """Quadratic interpolation through the three points around a grid peak."""
    if k == 0 or k == len(times) - 1:
        return float(times[k]), float(values[k])
    t0, t1, t2 = times[k - 1 : k + 2]
    y0, y1, y2 = values[k - 1 : k + 2]
    denom = (t0 - t1) * (t0 - t2) * (t1 - t2)
    a = (t2 * (y1 - y0) + t1 * (y0 - y2) + t0 * (y2 - y1)) / denom
    b = (t2**2 * (y0 - y1) + t1**2 * (y2 - y0) + t0**2 * (y1 - y2)) / denom
    if a >= 0.0:  # flat or concave-up triple: keep the grid point
        return float(t1), float(y1)
    tv = -b / (2.0 * a)
    if not t0 <= tv <= t2:
        return float(t1), float(y1)
    c = y1 - a * t1**2 - b * t1
    return float(tv), float(a * tv**2 + b * tv + c)


def find_optimal_time(series: TimeSeries, window: tuple[float, float] | None = None) -> PeakResult:
    """Grid argmax refined by local quadratic interpolation.

    Ties break toward the earliest time. A peak sitting on the window
    boundary is flagged via ``on_boundary`` so the caller can widen the
    window instead of trusting a clipped optimum.
    """
    s = series if window is None else series.restricted(*window)
    if len(s) == 0:
        raise ValueError("empty series")
    k = int(np.argmax(s.values))  # argmax takes the first of equal values
    t_star, value = _refine(s.times, s.values, k)
    boundary = k == 0 or k == len(s) - 1
    if len(s) == 1:
        boundary = True
    return PeakResult(t_star=t_star, value=value, index=k, on_boundary=boundary)


def find_first_peak(series: TimeSeries, floor: float | None = None) -> PeakResult:
    """First local maximum above a floor, quadratically refined.

    Default floor is the midpoint between the series baseline of 1/2 and the
    global maximum, which skips the small pre-arrival wiggles of transfer
    fidelities while landing on the first genuine arrival peak.
    """
    if len(series) == 0:
        raise ValueError("empty series")
    v = series.values
    if floor is None:
        floor = 0.5 + 0.5 * (float(v.max()) - 0.5)
    for k in range(1, len(v) - 1):
        if v[k] >= v[k - 1] and v[k] >= v[k + 1] and v[k] >= floor:
            t_star, value = _refine(series.times, v, k)
            return PeakResult(t_star=t_star, value=value, index=k, on_boundary=False)
    return find_optimal_time(series)


@dataclass(frozen=True)
class LinearFit:
    slope: float
    intercept: float
    residuals: np.ndarray
    r_squared: float

    def crossing(self, level: float) -> float:
        """x where the fitted line reaches the given level."""
        if self.slope == 0.0:
            raise ValueError("flat fit never crosses")
        return (level - self.intercept) / self.slope


def fit_linear(x, y) -> LinearFit:
    """Ordinary least squares y = slope*x + intercept with diagnostics."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1 or x.size < 3:
        raise ValueError("need at least 3 paired points")
    if np.ptp(x) == 0.0:
        raise ValueError("degenerate fit: all x values coincide")
    slope, intercept = np.polyfit(x, y, 1)
    pred = slope * x + intercept
    residuals = y - pred
    ss_res = float(np.sum(residuals**2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r_squared = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return LinearFit(float(slope), float(intercept), residuals, r_squared)
