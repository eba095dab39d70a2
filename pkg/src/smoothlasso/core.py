"""Data model, standardization and the fusion matrices.

Everything downstream works on a :class:`RegressionData` whose design has
centered columns with unit second moment (population convention, divide by
``n``) and whose response is centered.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import ConstantColumn, DimensionMismatch, InvalidPenalty


@dataclass(frozen=True)
class RegressionData:
    """Standardized design, centered response, and the metadata to undo it."""

    X: np.ndarray
    Y: np.ndarray
    col_means: np.ndarray
    col_scales: np.ndarray
    y_mean: float

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]

    def transform(self, raw_X):
        """Apply the stored column transform to new rows (e.g. a test set)."""
        raw_X = np.atleast_2d(np.asarray(raw_X, dtype=float))
        if raw_X.shape[1] != self.p:
            raise DimensionMismatch(f"expected {self.p} columns, got {raw_X.shape[1]}")
        return (raw_X - self.col_means) / self.col_scales

    def predict(self, beta, raw_X):
        """Predict the raw response for new raw rows."""
        return self.transform(raw_X) @ np.asarray(beta) + self.y_mean

    def to_original(self, beta):
        """Coefficients and intercept on the raw covariate scale."""
        beta = np.asarray(beta, dtype=float)
        coef = beta / self.col_scales
        intercept = self.y_mean - coef @ self.col_means
        return coef, intercept


def standardize(raw_X, raw_Y) -> RegressionData:
    """Center and scale columns of ``raw_X`` to unit second moment; center ``raw_Y``.

    Raises
    ------
    DimensionMismatch
        If the row counts differ or fewer than two rows are given.
    ConstantColumn
        If some column has zero empirical variance.
    """
    X = np.asarray(raw_X, dtype=float)
    Y = np.asarray(raw_Y, dtype=float).ravel()
    if X.ndim == 1:
        X = X[:, None]
    if X.ndim != 2 or X.shape[0] != Y.shape[0]:
        raise DimensionMismatch(f"design has shape {X.shape}, response has {Y.shape[0]} entries")
    n = X.shape[0]
    if n < 2:
        raise DimensionMismatch("need at least two observations")

    means = X.mean(axis=0)
    Xc = X - means
    scales = np.sqrt(np.mean(Xc**2, axis=0))
    for j, s in enumerate(scales):
        # relative test: a column of identical large values leaves rounding noise
        if not s > 1e-12 * max(1.0, np.max(np.abs(X[:, j]))):
            raise ConstantColumn(j)
    Xs = Xc / scales
    # second pass removes the O(eps) residual mean left by the first
    Xs -= Xs.mean(axis=0)
    y_mean = float(Y.mean())
    Yc = Y - y_mean
    Yc -= Yc.mean()

    for arr in (Xs, Yc, means, scales):
        arr.setflags(write=False)
    return RegressionData(X=Xs, Y=Yc, col_means=means, col_scales=scales, y_mean=y_mean)


def gram(data: RegressionData) -> np.ndarray:
    """Return ``C_n = X'X / n``."""
    X = data.X
    C = X.T @ X / data.n
    return 0.5 * (C + C.T)


@dataclass(frozen=True)
class FusionMatrices:
    J: np.ndarray
    Jtilde: np.ndarray


def fusion_J(p: int) -> np.ndarray:
    """Difference operator: zero first row, then ``J[j, j-1] = 1, J[j, j] = -1``."""
    J = np.zeros((p, p))
    idx = np.arange(1, p)
    J[idx, idx - 1] = 1.0
    J[idx, idx] = -1.0
    return J


def fusion_Jtilde(p: int) -> np.ndarray:
    """Tridiagonal ``J'J``: diagonal (1, 2, ..., 2, 1), off-diagonals -1."""
    if p == 1:
        return np.zeros((1, 1))
    d = np.full(p, 2.0)
    d[0] = d[-1] = 1.0
    Jt = np.diag(d)
    idx = np.arange(p - 1)
    Jt[idx, idx + 1] = -1.0
    Jt[idx + 1, idx] = -1.0
    return Jt


def fusion_matrices(p: int) -> FusionMatrices:
    if p < 1:
        raise ValueError("p must be >= 1")
    return FusionMatrices(J=fusion_J(p), Jtilde=fusion_Jtilde(p))


def fusion_quadratic(beta) -> float:
    """``beta' Jtilde beta`` evaluated as the sum of squared successive differences."""
    return float(np.sum(np.diff(np.asarray(beta, dtype=float)) ** 2))


class QuadKind(enum.Enum):
    FUSION = "fusion"
    IDENTITY = "identity"
    CUSTOM = "custom"


@dataclass(frozen=True)
class PenaltySpec:
    """``lambda * |beta|_1 + beta' M beta``.

    ``M`` is ``mu * Jtilde`` for FUSION, ``mu * I`` for IDENTITY and the
    user matrix ``custom`` (``mu`` unused) for CUSTOM.
    """

    lam: float
    mu: float = 0.0
    kind: QuadKind = QuadKind.FUSION
    custom: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        if not (self.lam >= 0 and np.isfinite(self.lam)):
            raise InvalidPenalty(f"lambda must be a finite nonnegative number, got {self.lam}")
        if not (self.mu >= 0 and np.isfinite(self.mu)):
            raise InvalidPenalty(f"mu must be a finite nonnegative number, got {self.mu}")
        if self.kind is QuadKind.CUSTOM:
            if self.custom is None:
                raise InvalidPenalty("CUSTOM penalty requires a matrix")
            M = np.asarray(self.custom, dtype=float)
            if M.ndim != 2 or M.shape[0] != M.shape[1]:
                raise InvalidPenalty("custom matrix must be square")
            if np.max(np.abs(M - M.T), initial=0.0) > 1e-10:
                raise InvalidPenalty("custom matrix must be symmetric")
            if np.linalg.eigvalsh(0.5 * (M + M.T)).min() < -1e-8:
                raise InvalidPenalty("custom matrix must be positive semidefinite")
            object.__setattr__(self, "custom", 0.5 * (M + M.T))

    def quad_matrix(self, p: int) -> np.ndarray:
        if self.kind is QuadKind.FUSION:
            return self.mu * fusion_Jtilde(p)
        if self.kind is QuadKind.IDENTITY:
            return self.mu * np.eye(p)
        if self.custom.shape[0] != p:
            raise DimensionMismatch(f"custom matrix is {self.custom.shape}, expected p={p}")
        return self.custom

    def augmentation_block(self, n: int, p: int) -> np.ndarray:
        """Rows ``B`` with ``B'B / n = M``, stacked under ``X`` by the augmentation."""
        if self.kind is QuadKind.FUSION:
            return np.sqrt(n * self.mu) * fusion_J(p)
        if self.kind is QuadKind.IDENTITY:
            return np.sqrt(n * self.mu) * np.eye(p)
        w, V = np.linalg.eigh(self.quad_matrix(p))
        w = np.where(w < 1e-12, 0.0, w)
        R = np.sqrt(w)[:, None] * V.T
        return np.sqrt(n) * R

    def with_lambda(self, lam: float) -> "PenaltySpec":
        return PenaltySpec(lam=lam, mu=self.mu, kind=self.kind, custom=self.custom)


def objective(beta, data: RegressionData, penalty: PenaltySpec) -> float:
    """``||Y - X beta||_n^2 + lambda |beta|_1 + beta' M beta``."""
    beta = np.asarray(beta, dtype=float)
    r = data.Y - data.X @ beta
    M = penalty.quad_matrix(data.p)
    return float(r @ r / data.n + penalty.lam * np.abs(beta).sum() + beta @ M @ beta)
