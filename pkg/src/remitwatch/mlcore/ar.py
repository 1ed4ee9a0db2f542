"""Autoregressive forecasting on a d-times-differenced series.

fit_ar regresses the differenced series on its own p lags by least
squares; forecasting iterates the recursion and then integrates the
differencing back out. Rank-deficient lag matrices are accepted when
the system is consistent (a constant series, say) via the minimum-norm
solution; inconsistent rank-deficient designs raise SingularDesign.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import SeriesTooShort, SingularDesign


@dataclass
class ArModel:
    p: int
    d: int
    coefficients: np.ndarray
    intercept: float
    residual_variance: float
    train_meta: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"p": self.p, "d": self.d,
                "coefficients": self.coefficients.tolist(),
                "intercept": self.intercept,
                "residual_variance": self.residual_variance,
                "train_meta": dict(self.train_meta)}

    @classmethod
    def from_dict(cls, doc) -> "ArModel":
        return cls(p=int(doc["p"]), d=int(doc["d"]),
                   coefficients=np.asarray(doc["coefficients"], dtype=np.float64),
                   intercept=float(doc["intercept"]),
                   residual_variance=float(doc["residual_variance"]),
                   train_meta=dict(doc.get("train_meta", {})))


def _difference(series, d):
    out = np.asarray(series, dtype=np.float64)
    for _ in range(d):
        out = np.diff(out)
    return out


def fit_ar(series, p: int, d: int = 0) -> ArModel:
    if p < 1:
        raise ValueError("p must be >= 1")
    if d not in (0, 1, 2):
        raise ValueError("d must be 0, 1, or 2")
    series = np.asarray(series, dtype=np.float64)
    if len(series) < p + d + 10:
        raise SeriesTooShort(f"need at least {p + d + 10} points, got {len(series)}")
    z = _difference(series, d)
    n = len(z)
    rows = n - p
    design = np.empty((rows, p + 1))
    design[:, 0] = 1.0
    for lag in range(1, p + 1):
        design[:, lag] = z[p - lag:n - lag]
    target = z[p:]
    coef, residuals, rank, _ = np.linalg.lstsq(design, target, rcond=None)
    if rank < p + 1:
        # accept only if the min-norm solution actually reproduces the data
        fitted = design @ coef
        scale = max(float(np.abs(target).max()), 1.0)
        if float(np.abs(fitted - target).max()) > 1e-8 * scale:
            raise SingularDesign("collinear lag matrix with inconsistent targets")
    fitted = design @ coef
    resid = target - fitted
    var = float(resid @ resid / rows)
    return ArModel(p=p, d=d, coefficients=coef[1:], intercept=float(coef[0]),
                   residual_variance=var, train_meta={"rank": int(rank), "n": int(n)})


def forecast(model: ArModel, recent, horizon: int) -> list:
    """Forecast `horizon` future values given the most recent
    observations (at least p + d of them)."""
    recent = np.asarray(recent, dtype=np.float64)
    if horizon < 0:
        raise ValueError("horizon must be >= 0")
    if len(recent) < model.p + model.d:
        raise SeriesTooShort(
            f"forecast needs at least {model.p + model.d} recent points")
    # last values of each difference level, for integration
    levels = [recent]
    for _ in range(model.d):
        levels.append(np.diff(levels[-1]))
    tails = [float(level[-1]) for level in levels[:-1]]
    z = list(levels[-1][-model.p:])
    out = []
    for _ in range(horizon):
        nxt = model.intercept
        for i, phi in enumerate(model.coefficients):
            nxt += phi * z[-1 - i]
        z.append(nxt)
        # integrate d times
        value = nxt
        for lvl in range(model.d - 1, -1, -1):
            value = tails[lvl] + value
            tails[lvl] = value
        out.append(float(value))
    return out
