"""Soft-margin RBF kernel classifier with balanced class weights.

The dual problem is solved by sequential minimal optimization over sample
pairs. All heuristics (first and second choice, tie-breaking) are
deterministic, so identical inputs produce bit-identical models. Per-class
box constraints are C * n / (2 * n_c), the "balanced" weighting: the
per-sample penalty is invariant under whole-set duplication, and so is the
decision function whenever no dual coefficient sits at its bound.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, ParameterError, TrainingError


def _pairwise_sq_dists(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    sq_a = np.sum(a * a, axis=1)
    sq_b = np.sum(b * b, axis=1)
    d2 = sq_a[:, None] + sq_b[None, :] - 2.0 * (a @ b.T)
    return np.maximum(d2, 0.0)


def rbf_kernel(a: np.ndarray, b: np.ndarray, gamma: float) -> np.ndarray:
    return np.exp(-gamma * _pairwise_sq_dists(a, b))


@dataclass(frozen=True, eq=False)
class TrainedModel:
    """A fitted classifier: support vectors, dual coefficients, bias, gamma.

    The decision function is f(x) = sum_i dual_coef[i] * K(sv[i], x) + bias;
    predictions are 1 where f >= 0 (exact zeros map to class 1) else 0.
    """

    support_vectors: np.ndarray
    dual_coef: np.ndarray
    bias: float
    gamma: float
    n_features: int
    class_weights: tuple

    def __post_init__(self):
        sv = np.array(self.support_vectors, dtype=float, copy=True)
        if sv.ndim != 2:
            sv = sv.reshape(0, self.n_features)
        sv.flags.writeable = False
        coef = np.array(self.dual_coef, dtype=float, copy=True)
        coef.flags.writeable = False
        object.__setattr__(self, "support_vectors", sv)
        object.__setattr__(self, "dual_coef", coef)
        if sv.shape[0] != coef.shape[0]:
            raise ParameterError("dual_coef length must match support vector count")

    def decision_function(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise ParameterError(
                f"expected shape (n, {self.n_features}), got {X.shape}"
            )
        if self.support_vectors.shape[0] == 0:
            return np.full(X.shape[0], self.bias)
        k = rbf_kernel(self.support_vectors, X, self.gamma)
        return self.dual_coef @ k + self.bias

    def to_dict(self) -> dict:
        return {
            "format_version": 1,
            "kind": "rbf-svm",
            "gamma": self.gamma,
            "bias": self.bias,
            "n_features": self.n_features,
            "class_weights": list(self.class_weights),
            "dual_coef": self.dual_coef.tolist(),
            "support_vectors": self.support_vectors.tolist(),
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "TrainedModel":
        if payload.get("kind") != "rbf-svm":
            raise ParameterError(f"not an rbf-svm payload: kind={payload.get('kind')!r}")
        return cls(
            support_vectors=np.array(payload["support_vectors"], dtype=float),
            dual_coef=np.array(payload["dual_coef"], dtype=float),
            bias=float(payload["bias"]),
            gamma=float(payload["gamma"]),
            n_features=int(payload["n_features"]),
            class_weights=tuple(payload["class_weights"]),
        )


def fit_svm(
    X,
    y,
    C: float = 1.0,
    tol: float = 1e-3,
    max_iter: int = 1_000_000,
    gamma: float | None = None,
) -> TrainedModel:
    """Fit the balanced-weight RBF classifier on a feature matrix.

    gamma defaults to 1 / (n_features * X.var()). Convergence means no sample
    violates its KKT condition by more than tol; exceeding max_iter
    pair-optimization steps raises ConvergenceError.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y)
    if X.ndim != 2 or y.ndim != 1 or X.shape[0] != len(y):
        raise ParameterError("X must be (n, d) with one label per row")
    n, d = X.shape
    n_pos = int(np.sum(y == 1))
    n_neg = int(np.sum(y == 0))
    if n_pos == 0 or n_neg == 0:
        raise TrainingError("training data must contain both classes")
    if gamma is None:
        pooled_var = float(X.var())
        gamma = 1.0 / (d * pooled_var) if pooled_var > 0 else 1.0 / d
    w_neg = n / (2.0 * n_neg)
    w_pos = n / (2.0 * n_pos)
    t = np.where(y == 1, 1.0, -1.0)
    box = np.where(y == 1, C * w_pos, C * w_neg)
    kernel = rbf_kernel(X, X, gamma)

    alpha = np.zeros(n)
    bias = 0.0
    errors = -t.copy()
    steps = 0
    step_eps = tol * 1e-2
    snap = 1e-12 * float(box.max())

    def take_step(i1: int, i2: int) -> bool:
        nonlocal bias, errors, steps
        if i1 == i2:
            return False
        a1, a2 = alpha[i1], alpha[i2]
        t1, t2 = t[i1], t[i2]
        e1, e2 = errors[i1], errors[i2]
        s = t1 * t2
        c1, c2 = box[i1], box[i2]
        if s > 0:
            low = max(0.0, a1 + a2 - c1)
            high = min(c2, a1 + a2)
        else:
            low = max(0.0, a2 - a1)
            high = min(c2, c1 + a2 - a1)
        if low >= high:
            return False
        k11 = kernel[i1, i1]
        k12 = kernel[i1, i2]
        k22 = kernel[i2, i2]
        eta = k11 + k22 - 2.0 * k12
        if eta > 0:
            a2_new = a2 + t2 * (e1 - e2) / eta
            a2_new = min(max(a2_new, low), high)
        else:
            # eta can only hit 0 for duplicate rows; the objective is then
            # linear along the constraint segment
            slope = t2 * (e1 - e2)
            if slope > step_eps:
                a2_new = high
            elif slope < -step_eps:
                a2_new = low
            else:
                return False
        if abs(a2_new - a2) < step_eps * (a2_new + a2 + step_eps):
            return False
        a1_new = a1 + s * (a2 - a2_new)
        if a1_new < snap:
            a1_new = 0.0
        elif a1_new > c1 - snap:
            a1_new = c1
        if a2_new < snap:
            a2_new = 0.0
        elif a2_new > c2 - snap:
            a2_new = c2
        da1 = a1_new - a1
        da2 = a2_new - a2
        b1 = bias - e1 - t1 * da1 * k11 - t2 * da2 * k12
        b2 = bias - e2 - t1 * da1 * k12 - t2 * da2 * k22
        if 0.0 < a1_new < c1:
            b_new = b1
        elif 0.0 < a2_new < c2:
            b_new = b2
        else:
            b_new = 0.5 * (b1 + b2)
        errors += t1 * da1 * kernel[i1] + t2 * da2 * kernel[i2] + (b_new - bias)
        alpha[i1] = a1_new
        alpha[i2] = a2_new
        bias = b_new
        steps += 1
        if steps >= max_iter:
            raise ConvergenceError(
                f"SMO stopped after {max_iter} pair steps without converging",
                iteration_cap=max_iter,
            )
        return True

    def examine(i2: int) -> bool:
        t2 = t[i2]
        a2 = alpha[i2]
        e2 = errors[i2]
        r2 = e2 * t2
        if not ((r2 < -tol and a2 < box[i2]) or (r2 > tol and a2 > 0)):
            return False
        non_bound = np.flatnonzero((alpha > 0) & (alpha < box))
        if len(non_bound) > 1:
            gaps = np.abs(errors[non_bound] - e2)
            i1 = int(non_bound[int(np.argmax(gaps))])
            if take_step(i1, i2):
                return True
        for i1 in non_bound:
            if take_step(int(i1), i2):
                return True
        for i1 in range(n):
            if take_step(i1, i2):
                return True
        return False

    examine_all = True
    num_changed = 1
    while num_changed > 0 or examine_all:
        num_changed = 0
        if examine_all:
            errors[:] = (alpha * t) @ kernel + bias - t
            for i in range(n):
                num_changed += examine(i)
            examine_all = False
        else:
            for i in np.flatnonzero((alpha > 0) & (alpha < box)):
                num_changed += examine(int(i))
            if num_changed == 0:
                examine_all = True
                num_changed = 1

    support = np.flatnonzero(alpha > 0)
    return TrainedModel(
        support_vectors=X[support],
        dual_coef=alpha[support] * t[support],
        bias=bias,
        gamma=gamma,
        n_features=d,
        class_weights=(w_neg, w_pos),
    )


def predict(model: TrainedModel, X) -> np.ndarray:
    """Binary labels from the kernel decision function (0 maps to class 1)."""
    return (model.decision_function(X) >= 0).astype(int)
