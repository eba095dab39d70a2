"""Degrees of freedom, BIC, and (lambda, mu) selection over paths."""

from __future__ import annotations

import csv
import enum
import warnings
from dataclasses import dataclass

import numpy as np

from .core import PenaltySpec, QuadKind, RegressionData, fusion_Jtilde
from .errors import SingularSystem
from .slasso import HS, NS, ORIGINAL, ScalingSpec, SLassoFit, family_path, make_fit

DEFAULT_MU_GRID = (0.0, 0.01, 0.1, 0.5, 1.0, 2.0, 10.0)


class DfMethod(enum.Enum):
    EXACT_TRACE = "exact_trace"
    APPROX = "approx"
    LASSO_COUNT = "lasso_count"
    ENET_SCALED = "enet_scaled"


@dataclass(frozen=True)
class DfEstimate:
    value: float
    method: DfMethod
    active_size: int
    mu: float
    normalized: bool = False


def df_exact(data: RegressionData, active_set, mu: float, normalized: bool = False) -> DfEstimate:
    """Trace estimate ``Tr[X_A (X_A'X_A + mu Jt_AA)^{-1} X_A']``.

    ``Jt_AA`` is the sub-matrix of the full ``p x p`` fusion matrix. With
    ``normalized=True`` the inner matrix is ``X_A'X_A/n + mu Jt_AA`` and the
    outer product carries ``1/n``, matching the normal equations of the
    ``||.||_n`` criterion.
    """
    A = np.asarray(sorted(active_set), dtype=int)
    if A.size == 0:
        return DfEstimate(0.0, DfMethod.EXACT_TRACE, 0, mu, normalized)
    XA = data.X[:, A]
    XtX = XA.T @ XA
    JAA = fusion_Jtilde(data.p)[np.ix_(A, A)]
    inner = XtX / data.n + mu * JAA if normalized else XtX + mu * JAA
    outer = XtX / data.n if normalized else XtX
    w = np.linalg.eigvalsh(0.5 * (inner + inner.T))
    if w[0] <= 1e-12 * max(w[-1], 1.0):
        raise SingularSystem(f"df inner matrix singular for active set of size {A.size}")
    value = float(np.trace(np.linalg.solve(inner, outer)))
    return DfEstimate(value, DfMethod.EXACT_TRACE, int(A.size), mu, normalized)


def df_approx(active_size: int, mu: float) -> DfEstimate:
    """``(|A| - 2)/(1 + 2 mu) + 2/(1 + mu)``, the orthogonal-design approximation.

    The empty model has zero degrees of freedom; other values are clamped at 0.
    """
    if active_size < 0:
        raise ValueError("active_size must be nonnegative")
    if active_size == 0:
        return DfEstimate(0.0, DfMethod.APPROX, 0, mu)
    value = (active_size - 2.0) / (1.0 + 2.0 * mu) + 2.0 / (1.0 + mu)
    if value < 0:
        warnings.warn(f"df approximation negative ({value:.3g}); clamped to 0", RuntimeWarning)
        value = 0.0
    return DfEstimate(value, DfMethod.APPROX, active_size, mu)


def df_comparators(active_size: int, mu: float) -> tuple[DfEstimate, DfEstimate]:
    """Lasso count ``|A|`` and Elastic-Net ``|A|/(1+mu)``."""
    if active_size < 0 or mu < 0:
        raise ValueError("active_size and mu must be nonnegative")
    lasso = DfEstimate(float(active_size), DfMethod.LASSO_COUNT, active_size, mu)
    enet = DfEstimate(active_size / (1.0 + mu), DfMethod.ENET_SCALED, active_size, mu)
    return lasso, enet


def bic(fit, data: RegressionData, sigma2: float, df) -> float:
    """``||Y - X beta||_n^2 + log(n) sigma2 / n * df``.

    ``fit`` may be an :class:`SLassoFit` or a coefficient vector, ``df`` a
    :class:`DfEstimate` or a number.
    """
    if not sigma2 > 0:
        raise ValueError("sigma2 must be positive")
    beta = fit.beta if isinstance(fit, SLassoFit) else np.asarray(fit, dtype=float)
    d = df.value if isinstance(df, DfEstimate) else float(df)
    r = data.Y - data.X @ beta
    return float(r @ r / data.n + np.log(data.n) * sigma2 / data.n * d)


class Method(enum.Enum):
    """Estimator families compared in the benchmark.

    ENET is the rescaled Elastic-Net: identity quadratic matrix with the
    ``(1 + mu)`` correction, i.e. the NS scaling.
    """

    LASSO = "lasso"
    SLASSO = "slasso"
    NS = "ns"
    HS = "hs"
    ENET = "enet"

    @property
    def kind(self) -> QuadKind:
        return QuadKind.IDENTITY if self is Method.ENET else QuadKind.FUSION

    @property
    def scaling(self) -> ScalingSpec:
        return {Method.LASSO: ORIGINAL, Method.SLASSO: ORIGINAL, Method.NS: NS,
                Method.HS: HS, Method.ENET: NS}[self]

    def df(self, active_size: int, mu: float) -> DfEstimate:
        if self is Method.LASSO:
            return df_comparators(active_size, mu)[0]
        if self is Method.ENET:
            return df_comparators(active_size, mu)[1]
        return df_approx(active_size, mu)


@dataclass(frozen=True)
class TraceRow:
    lam: float
    mu: float
    method: str
    df: float
    bic: float
    active_size: int


@dataclass(frozen=True)
class SelectionResult:
    best_lambda: float
    best_mu: float
    best_fit: SLassoFit
    bic_value: float
    grid_trace: tuple

    def write_trace_csv(self, path) -> None:
        write_trace_csv(self.grid_trace, path)


def write_trace_csv(rows, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["lambda", "mu", "method", "df", "bic", "active_size"])
        for r in rows:
            w.writerow([f"{r.lam:.17g}", f"{r.mu:.17g}", r.method, f"{r.df:.17g}",
                        f"{r.bic:.17g}", r.active_size])


def _better(value, lam, mu, best) -> bool:
    b_value, b_lam, b_mu, _ = best
    if value != b_value:
        return value < b_value
    # knots of different mu share lam0 up to rounding of nu1 * (lam0 / nu1)
    if abs(lam - b_lam) > 1e-12 * max(abs(lam), abs(b_lam)):
        return lam > b_lam
    return mu > b_mu


def select_model(data: RegressionData, mu_grid=DEFAULT_MU_GRID, method: Method = Method.NS,
                 sigma2: float = 1.0) -> SelectionResult:
    """BIC over every path knot for every ``mu`` in the grid.

    Exact BIC ties go to the larger ``lambda``, then the larger ``mu``.
    """
    method = Method(method)
    if not sigma2 > 0:
        raise ValueError("sigma2 must be positive")
    mus = (0.0,) if method is Method.LASSO else tuple(float(m) for m in mu_grid)
    if not mus:
        raise ValueError("mu_grid must be nonempty")

    n = data.n
    penalty_per_df = np.log(n) * sigma2 / n
    rows = []
    best = None
    for mu in mus:
        path = family_path(data, mu, method.kind, method.scaling)
        resid = data.Y[None, :] - path.vertices @ data.X.T
        rss = np.einsum("ij,ij->i", resid, resid) / n
        for k, lam in enumerate(path.knots):
            size = int(np.count_nonzero(path.vertices[k]))
            df = method.df(size, mu).value
            value = float(rss[k] + penalty_per_df * df)
            rows.append(TraceRow(float(lam), mu, method.value, df, value, size))
            if best is None or _better(value, float(lam), mu, best):
                best = (value, float(lam), mu, path.vertices[k])

    value_b, lam_b, mu_b, beta_b = best
    penalty = PenaltySpec(lam=lam_b, mu=mu_b, kind=method.kind)
    best_fit = make_fit(beta_b.copy(), data, penalty, method.scaling)
    return SelectionResult(best_lambda=lam_b, best_mu=mu_b, best_fit=best_fit,
                           bic_value=value_b, grid_trace=tuple(rows))
