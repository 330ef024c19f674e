"""Soft-margin SVM with a cubic polynomial kernel, trained by SMO.

The dual

    min  1/2 a'Qa - e'a   s.t.  0 <= a_i <= C,  y'a = 0,   Q_ij = y_i y_j K_ij

is solved two variables at a time.  The working pair is the maximal
violating pair with second-order selection of the second index (Fan, Chen
and Lin, JMLR 2005); iteration stops once the violation gap ``m - M`` drops
below ``tol``.
"""

from __future__ import annotations

import logging

import numpy as np

from ..errors import DegenerateTraining
from ..features import SystemConfig
from .base import AE, BENIGN, Classifier, to_arrays

log = logging.getLogger(__name__)

DEGREE = 3
_TAU = 1e-12


def poly_kernel(A: np.ndarray, B: np.ndarray, degree: int = DEGREE) -> np.ndarray:
    return (A @ B.T + 1.0) ** degree


class SvmModel(Classifier):
    kind = "svm"

    def __init__(self, support_vectors, coef, bias, C, n_features, degree=DEGREE,
                 config: SystemConfig | None = None, gap: float | None = None):
        super().__init__(n_features, config)
        self.support_vectors = np.asarray(support_vectors, dtype=float).reshape(-1, n_features)
        # coef_i = alpha_i * y_i
        self.coef = np.asarray(coef, dtype=float)
        self.bias = float(bias)
        self.C = float(C)
        self.degree = int(degree)
        self.gap = gap

    @property
    def alphas(self) -> np.ndarray:
        return np.abs(self.coef)

    @property
    def sv_labels(self) -> np.ndarray:
        return np.where(self.coef > 0, AE, BENIGN)

    def decision_values(self, X):
        X = self._check(X)
        if len(self.coef) == 0:
            return np.full(len(X), self.bias)
        return poly_kernel(X, self.support_vectors, self.degree) @ self.coef + self.bias

    def _is_ae(self, values):
        return values >= 0

    def params(self):
        return {
            "C": self.C,
            "degree": self.degree,
            "bias": self.bias,
            "support_vectors": self.support_vectors.tolist(),
            "coef": self.coef.tolist(),
        }

    @classmethod
    def from_params(cls, n_features, params, config=None):
        return cls(params["support_vectors"], params["coef"], params["bias"], params["C"],
                   n_features, params.get("degree", DEGREE), config)


def _smo(K: np.ndarray, y: np.ndarray, C: float, tol: float, max_iter: int):
    n = len(y)
    yf = y.astype(float)
    alpha = np.zeros(n)
    grad = -np.ones(n)
    diag = np.diag(K).copy()

    it = 0
    gap = np.inf
    while it < max_iter:
        up = ((y == AE) & (alpha < C)) | ((y == BENIGN) & (alpha > 0))
        low = ((y == AE) & (alpha > 0)) | ((y == BENIGN) & (alpha < C))
        minus_yg = -yf * grad
        if not up.any() or not low.any():
            gap = 0.0
            break
        i = int(np.flatnonzero(up)[np.argmax(minus_yg[up])])
        m_up = minus_yg[i]
        m_low = minus_yg[low].min()
        gap = m_up - m_low
        if gap <= tol:
            break

        cand = low & (minus_yg < m_up)
        b = m_up - minus_yg[cand]
        a = diag[i] + diag[cand] - 2.0 * K[i, cand]
        a = np.where(a > 0, a, _TAU)
        idx = np.flatnonzero(cand)
        j = int(idx[np.argmin(-(b * b) / a)])

        a_ij = max(diag[i] + diag[j] - 2.0 * K[i, j], _TAU)
        step = (m_up - minus_yg[j]) / a_ij
        step = min(step,
                   C - alpha[i] if y[i] == AE else alpha[i],
                   alpha[j] if y[j] == AE else C - alpha[j])
        alpha[i] += step * yf[i]
        alpha[j] -= step * yf[j]
        # snap to the box to keep the index sets exact
        for t in (i, j):
            if alpha[t] < 1e-12:
                alpha[t] = 0.0
            elif alpha[t] > C - 1e-12:
                alpha[t] = C
        grad += step * yf * (K[:, i] - K[:, j])
        it += 1
    else:
        log.warning("SMO stopped at max_iter=%d with gap %.3g > tol %.3g", max_iter, gap, tol)
    return alpha, grad, it, gap


def _rho(alpha, grad, y, C):
    yg = y * grad
    free = (alpha > 0) & (alpha < C)
    if free.any():
        return float(yg[free].mean())
    at_upper = alpha >= C
    at_lower = alpha <= 0
    ub_mask = (at_upper & (y == BENIGN)) | (at_lower & (y == AE))
    lb_mask = (at_upper & (y == AE)) | (at_lower & (y == BENIGN))
    ub = yg[ub_mask].min() if ub_mask.any() else np.inf
    lb = yg[lb_mask].max() if lb_mask.any() else -np.inf
    if np.isinf(ub) or np.isinf(lb):
        return float(ub if np.isfinite(ub) else lb)
    return float((ub + lb) / 2)


def train_svm(data, C: float = 1.0, tol: float = 1e-3, config: SystemConfig | None = None,
              max_iter: int | None = None) -> SvmModel:
    """Train on labelled feature vectors (ae is the positive class)."""
    if C <= 0:
        raise ValueError("C must be positive")
    X, y = to_arrays(data)
    if len(np.unique(y)) < 2:
        raise DegenerateTraining("SVM training needs both benign and ae samples")
    K = poly_kernel(X, X)
    if max_iter is None:
        max_iter = max(100_000, 100 * len(y))
    alpha, grad, iters, gap = _smo(K, y, C, tol, max_iter)
    rho = _rho(alpha, grad, y, C)
    sv = alpha > 0
    log.debug("SMO converged in %d iterations, %d support vectors, gap %.3g", iters, sv.sum(), gap)
    return SvmModel(X[sv], alpha[sv] * y[sv], -rho, C, X.shape[1], DEGREE, config, gap=float(gap))
