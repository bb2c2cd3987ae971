"""Logistic regression trained by full-batch gradient descent.

Used by the error-reduction study on two-cloud data, where thousands of
classifiers must be fit on two- and three-point training sets.  A batched
trainer fits many such models simultaneously; it matches the single-model
path numerically.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class LogisticModel:
    """Linear weights, bias last: p(y=1 | x) = sigmoid(w . [x, 1])."""

    weights: np.ndarray

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=np.float64)
        if not np.all(np.isfinite(self.weights)):
            raise ValueError("weights must be finite")


def sigmoid(z):
    return 1.0 / (1.0 + np.exp(-np.clip(z, -40.0, 40.0)))


def _augment(X: np.ndarray) -> np.ndarray:
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    return np.hstack([X, np.ones((X.shape[0], 1))])


def logistic_loss(weights, features, targets) -> float:
    """Mean log-loss of ``sigmoid(X1 @ w)`` against 0/1 targets."""
    x1 = _augment(features)
    y = np.asarray(targets, dtype=np.float64)
    p = np.clip(sigmoid(x1 @ np.asarray(weights, dtype=np.float64)), 1e-12, 1.0 - 1e-12)
    return float(-np.mean(y * np.log(p) + (1.0 - y) * np.log(1.0 - p)))


def logistic_gradient(weights, features, targets) -> np.ndarray:
    """Gradient of :func:`logistic_loss` with respect to the weights."""
    x1 = _augment(features)
    y = np.asarray(targets, dtype=np.float64)
    p = sigmoid(x1 @ np.asarray(weights, dtype=np.float64))
    return x1.T @ (p - y) / len(y)


def train_logistic(features, targets, learn_rate: float = 0.5,
                   iterations: int = 200) -> LogisticModel:
    """Fit from zero weights with ``iterations`` full-batch steps."""
    x1 = _augment(features)
    y = np.asarray(targets, dtype=np.float64)
    if x1.shape[0] != len(y) or len(y) == 0:
        raise ValueError("features and targets must be non-empty and aligned")
    w = np.zeros(x1.shape[1])
    for _ in range(iterations):
        w = w - learn_rate * (x1.T @ (sigmoid(x1 @ w) - y) / len(y))
    return LogisticModel(w)


def predict_logistic(model: LogisticModel, x) -> float:
    """Probability of class 1 at a single point."""
    return float(sigmoid(_augment(np.asarray(x))[0] @ model.weights))


def predict_logistic_batch(model: LogisticModel, X) -> np.ndarray:
    return sigmoid(_augment(X) @ model.weights)


def train_logistic_batch(features, targets, sample_mask, learn_rate: float = 0.5,
                         iterations: int = 200) -> np.ndarray:
    """Fit B independent models at once.

    Parameters
    ----------
    features : (B, S, D) array
        Per-model training rows; slots with ``sample_mask == 0`` are padding.
    targets : (B, S) array
    sample_mask : (B, S) array of 0/1

    Returns
    -------
    (B, D+1) weight matrix, bias last.
    """
    X = np.asarray(features, dtype=np.float64)
    y = np.asarray(targets, dtype=np.float64)
    m = np.asarray(sample_mask, dtype=np.float64)
    b, s, d = X.shape
    x1 = np.concatenate([X, np.ones((b, s, 1))], axis=2)
    w = np.zeros((b, d + 1))
    counts = m.sum(axis=1, keepdims=True)
    for _ in range(iterations):
        p = sigmoid(np.einsum("bsd,bd->bs", x1, w))
        err = (p - y) * m
        w = w - learn_rate * (np.einsum("bsd,bs->bd", x1, err) / counts)
    return w
