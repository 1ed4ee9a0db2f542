"""Logistic regression by full-batch gradient descent.

Loss is mean cross-entropy plus an (l2/2)*||w||^2 penalty on the
weights (bias unpenalized). Steps that would increase the loss are
retried at half the step size, so the accepted-loss sequence is
non-increasing by construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import DimensionMismatch, NonFiniteInput, SingleClassInput

P_EPS = 1e-12


@dataclass
class LogisticConfig:
    learning_rate: float = 0.1
    l2: float = 1e-4
    max_iters: int = 5000
    tol: float = 1e-8
    seed: int = 0


@dataclass
class LogisticModel:
    weights: np.ndarray
    bias: float
    l2: float
    train_meta: dict = field(default_factory=dict)

    def predict_proba(self, x) -> float:
        x = np.asarray(x, dtype=np.float64)
        if x.shape[-1] != len(self.weights):
            raise DimensionMismatch(
                f"expected {len(self.weights)} features, got {x.shape[-1]}")
        return float(sigmoid(np.dot(x, self.weights) + self.bias))

    def predict_proba_batch(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.shape[1] != len(self.weights):
            raise DimensionMismatch(
                f"expected {len(self.weights)} features, got {X.shape[1]}")
        return sigmoid(X @ self.weights + self.bias)

    def to_dict(self) -> dict:
        return {"weights": self.weights.tolist(), "bias": self.bias,
                "l2": self.l2, "train_meta": dict(self.train_meta)}

    @classmethod
    def from_dict(cls, doc) -> "LogisticModel":
        return cls(weights=np.asarray(doc["weights"], dtype=np.float64),
                   bias=float(doc["bias"]), l2=float(doc["l2"]),
                   train_meta=dict(doc.get("train_meta", {})))


def sigmoid(z):
    """Numerically stable for |z| up to ~700."""
    z = np.asarray(z, dtype=np.float64)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    if out.ndim == 0:
        return float(out)
    return out


def loss_and_gradient(w, b, X, y, l2):
    p = sigmoid(X @ w + b)
    pc = np.clip(p, P_EPS, 1.0 - P_EPS)
    loss = float(-np.mean(y * np.log(pc) + (1 - y) * np.log(1 - pc))
                 + 0.5 * l2 * float(w @ w))
    resid = p - y
    grad_w = X.T @ resid / len(y) + l2 * w
    grad_b = float(resid.mean())
    return loss, grad_w, grad_b


def train_logistic(X, y, config: LogisticConfig | None = None) -> LogisticModel:
    config = config or LogisticConfig()
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    if len(X) != len(y) or len(y) < 2:
        raise DimensionMismatch("need |X| == |y| >= 2")
    if not (np.isfinite(X).all() and np.isfinite(y).all()):
        raise NonFiniteInput("training data must be finite")
    classes = set(np.unique(y))
    if not classes <= {0.0, 1.0} or len(classes) < 2:
        raise SingleClassInput("y must contain both classes, encoded 0/1")

    w = np.zeros(X.shape[1])
    b = 0.0
    loss, grad_w, grad_b = loss_and_gradient(w, b, X, y, config.l2)
    iterations = 0
    for iterations in range(1, config.max_iters + 1):
        lr = config.learning_rate
        accepted = False
        for _ in range(40):
            w_new = w - lr * grad_w
            b_new = b - lr * grad_b
            new_loss, new_gw, new_gb = loss_and_gradient(w_new, b_new, X, y, config.l2)
            if new_loss <= loss:
                accepted = True
                break
            lr *= 0.5
        if not accepted:
            break
        improvement = loss - new_loss
        w, b, loss, grad_w, grad_b = w_new, b_new, new_loss, new_gw, new_gb
        if improvement < config.tol:
            break
    return LogisticModel(
        weights=w, bias=b, l2=config.l2,
        train_meta={"iterations": iterations, "final_loss": loss, "seed": config.seed},
    )
