"""Soft-margin kernel SVM dual solver (sequential two-variable optimization).

Solves

    minimize    0.5 sum_ij a_i a_j y_i y_j K_ij - sum_i a_i
    subject to  sum_i y_i a_i = 0,   0 <= a_i <= C

by repeatedly optimizing the maximal violating pair, with the gradient
maintained incrementally. Termination is on the KKT violation gap, so the
returned multipliers satisfy the optimality conditions to ``tol``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["rbf_kernel", "SmoSolution", "smo_solve"]

_BOUND_EPS = 1e-12


def rbf_kernel(x1: np.ndarray, x2: np.ndarray, width: float) -> np.ndarray:
    """K(a, b) = exp(-||a - b||^2 / width^2) for row vectors of x1 and x2."""
    x1 = np.atleast_2d(x1)
    x2 = np.atleast_2d(x2)
    sq = (
        np.sum(x1 * x1, axis=1)[:, None]
        + np.sum(x2 * x2, axis=1)[None, :]
        - 2.0 * (x1 @ x2.T)
    )
    return np.exp(-np.maximum(sq, 0.0) / width**2)


@dataclass(frozen=True)
class SmoSolution:
    alpha: np.ndarray
    bias: float
    iterations: int
    kkt_gap: float
    converged: bool

    def dual_objective(self, kernel: np.ndarray, labels: np.ndarray) -> float:
        q = kernel * np.outer(labels, labels)
        return float(0.5 * self.alpha @ q @ self.alpha - self.alpha.sum())


def smo_solve(
    kernel: np.ndarray,
    labels: np.ndarray,
    penalty: float,
    tol: float = 1e-6,
    max_iter: int = 200_000,
) -> SmoSolution:
    labels = np.asarray(labels, dtype=np.float64)
    m = labels.size
    if kernel.shape != (m, m):
        raise ValueError("kernel must be square and match the label count")
    if not set(np.unique(labels)) <= {-1.0, 1.0}:
        raise ValueError("labels must be in {-1, +1}")
    if penalty <= 0:
        raise ValueError("penalty must be positive")

    q = kernel * np.outer(labels, labels)
    alpha = np.zeros(m)
    grad = -np.ones(m)  # gradient of the dual objective at alpha = 0

    it = 0
    gap = np.inf
    while it < max_iter:
        at_upper = alpha >= penalty - _BOUND_EPS
        at_lower = alpha <= _BOUND_EPS
        up_mask = ((labels > 0) & ~at_upper) | ((labels < 0) & ~at_lower)
        low_mask = ((labels > 0) & ~at_lower) | ((labels < 0) & ~at_upper)
        score = -labels * grad
        if not up_mask.any() or not low_mask.any():
            gap = 0.0
            break
        i = int(np.argmax(np.where(up_mask, score, -np.inf)))
        j = int(np.argmin(np.where(low_mask, score, np.inf)))
        gap = float(score[i] - score[j])
        if gap <= tol:
            break

        yi, yj = labels[i], labels[j]
        if yi != yj:
            lo = max(0.0, alpha[j] - alpha[i])
            hi = min(penalty, penalty + alpha[j] - alpha[i])
        else:
            lo = max(0.0, alpha[i] + alpha[j] - penalty)
            hi = min(penalty, alpha[i] + alpha[j])
        eta = max(kernel[i, i] + kernel[j, j] - 2.0 * kernel[i, j], 1e-12)
        # E_i - E_j in terms of the maintained gradient
        delta_err = yi * grad[i] - yj * grad[j]
        new_aj = np.clip(alpha[j] + yj * delta_err / eta, lo, hi)
        d_aj = new_aj - alpha[j]
        d_ai = -yi * yj * d_aj
        if abs(d_aj) < 1e-14:
            # numerically stuck pair; nudge off via bound clamp and stop
            break
        alpha[i] += d_ai
        alpha[j] += d_aj
        grad += q[:, i] * d_ai + q[:, j] * d_aj
        it += 1

    free = (alpha > _BOUND_EPS) & (alpha < penalty - _BOUND_EPS)
    score = -labels * grad
    if free.any():
        bias = float(np.mean(score[free]))
    else:
        at_upper = alpha >= penalty - _BOUND_EPS
        at_lower = alpha <= _BOUND_EPS
        up_mask = ((labels > 0) & ~at_upper) | ((labels < 0) & ~at_lower)
        low_mask = ((labels > 0) & ~at_lower) | ((labels < 0) & ~at_upper)
        hi = score[up_mask].max() if up_mask.any() else 0.0
        lo = score[low_mask].min() if low_mask.any() else 0.0
        bias = float(0.5 * (hi + lo))
    return SmoSolution(alpha=alpha, bias=bias, iterations=it, kkt_gap=float(max(gap, 0.0)), converged=gap <= tol)
