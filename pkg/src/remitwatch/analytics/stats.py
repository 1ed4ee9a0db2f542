"""Descriptive statistics and least-squares trend lines.

Quantiles interpolate linearly between order statistics; the population
standard deviation is reported and flagged absent for a single point.
"""

from __future__ import annotations

import math

from ..errors import DegenerateAbscissa, EmptySeries


def _quantile(sorted_values, p: float) -> float:
    n = len(sorted_values)
    if n == 1:
        return float(sorted_values[0])
    pos = (n - 1) * p
    lo = int(math.floor(pos))
    hi = int(math.ceil(pos))
    frac = pos - lo
    return sorted_values[lo] * (1.0 - frac) + sorted_values[hi] * frac


def descriptive_stats(series) -> dict:
    values = [float(v) for v in series]
    if not values:
        raise EmptySeries("descriptive_stats needs at least one value")
    n = len(values)
    mean = sum(values) / n
    std = math.sqrt(sum((v - mean) ** 2 for v in values) / n) if n > 1 else None
    ordered = sorted(values)
    return {
        "n": n,
        "mean": mean,
        "median": _quantile(ordered, 0.5),
        "std": std,
        "min": ordered[0],
        "max": ordered[-1],
        "q1": _quantile(ordered, 0.25),
        "q3": _quantile(ordered, 0.75),
    }


def trend_line(points) -> dict:
    """Ordinary least squares fit of y on t. r^2 is defined as 1 when
    both residual and total variance vanish (a perfectly flat fit)."""
    pts = [(float(t), float(y)) for t, y in points]
    if len(pts) < 2:
        raise DegenerateAbscissa("trend line needs at least 2 points")
    ts = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    n = len(pts)
    t_mean = sum(ts) / n
    y_mean = sum(ys) / n
    stt = sum((t - t_mean) ** 2 for t in ts)
    if stt == 0.0:
        raise DegenerateAbscissa("all abscissa values are equal")
    sty = sum((t - t_mean) * (y - y_mean) for t, y in pts)
    slope = sty / stt
    intercept = y_mean - slope * t_mean
    ss_res = sum((y - (slope * t + intercept)) ** 2 for t, y in pts)
    ss_tot = sum((y - y_mean) ** 2 for y in ys)
    if ss_tot == 0.0:
        r2 = 1.0
    else:
        r2 = 1.0 - ss_res / ss_tot
    return {"slope": slope, "intercept": intercept, "r2": r2}
