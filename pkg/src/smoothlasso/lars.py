"""LARS with the Lasso modification.

Solves, for every ``lam >= 0``,

    min_b  ||y - X b||^2 / denom + lam * |b|_1

by homotopy in ``lam``. On a segment with active set ``A`` and signs ``s``
the solution is ``b_A(lam) = G_AA^{-1} (c_A - lam/2 s)`` with ``G = X'X/denom``
and ``c = X'y/denom``, so the path is piecewise affine in ``lam``. Columns of
``X`` are never rescaled; correlations are raw inner products, which is what
the augmented-data problems need.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDesign, DimensionMismatch, MaxStepsExceeded

# relative to lam0: events closer than this to the current knot are the knot itself
_EVENT_EPS = 1e-12
# relative to the largest eigenvalue of the active Gram block
_RANK_TOL = 1e-12


@dataclass(frozen=True)
class RegPath:
    """Piecewise-linear path ``lam -> beta(lam)``.

    ``knots`` is strictly decreasing and ends at 0; ``vertices[k]`` is the
    solution at ``knots[k]``. Segment ``k`` joins knots ``k`` and ``k+1`` and
    has constant ``active_sets[k]`` / ``signs[k]``.
    """

    knots: np.ndarray
    vertices: np.ndarray
    active_sets: tuple
    signs: tuple

    @property
    def n_segments(self) -> int:
        return len(self.knots) - 1

    @property
    def p(self) -> int:
        return self.vertices.shape[1]

    def interpolate(self, lam: float) -> np.ndarray:
        return interpolate(self, lam)

    def scaled(self, lam_factor: float, beta_factor: float) -> "RegPath":
        """Path of ``beta_factor * b`` indexed by ``lam_factor * lam``."""
        return RegPath(
            knots=self.knots * lam_factor,
            vertices=self.vertices * beta_factor,
            active_sets=self.active_sets,
            signs=self.signs,
        )

    def segment_midpoints(self) -> np.ndarray:
        return 0.5 * (self.knots[:-1] + self.knots[1:])


def interpolate(path: RegPath, lam: float) -> np.ndarray:
    """Coefficients at ``lam`` by affine interpolation inside the bracketing segment."""
    if lam < 0:
        raise ValueError("lambda must be nonnegative")
    knots = path.knots
    if lam >= knots[0]:
        return path.vertices[0].copy()
    if lam <= knots[-1]:
        return path.vertices[-1].copy()
    # knots decreasing: k is the segment with knots[k] > lam >= knots[k+1]
    k = int(np.searchsorted(-knots, -lam, side="right")) - 1
    hi, lo = knots[k], knots[k + 1]
    if lam == lo:
        return path.vertices[k + 1].copy()
    w = (lam - lo) / (hi - lo)
    return path.vertices[k + 1] + w * (path.vertices[k] - path.vertices[k + 1])


def _solve_active(G_AA: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    w, V = np.linalg.eigh(G_AA)
    if w[0] <= _RANK_TOL * max(w[-1], 1.0):
        raise DegenerateDesign(
            f"active Gram block of size {len(w)} is singular (smallest eigenvalue {w[0]:.3e})"
        )
    return V @ ((V.T @ rhs) / w[:, None])


def lars_lasso_path(X, y, *, max_steps: int | None = None, tol: float = 1e-8,
                    denom: float | None = None) -> RegPath:
    """Full Lasso regularization path.

    Parameters
    ----------
    X : (m, p) array
        Design; columns are used as given.
    y : (m,) array
    max_steps : int, optional
        Defaults to ``8 * min(m, p)``.
    tol : float
        A response whose largest correlation is below ``tol`` gives the
        single-knot zero path.
    denom : float, optional
        Denominator of the squared loss; defaults to ``m``. The augmented
        problems pass the original sample size here.

    Raises
    ------
    DegenerateDesign
        Active Gram block singular, e.g. two identical columns entering together.
    MaxStepsExceeded
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float).ravel()
    if X.ndim != 2 or X.shape[0] != y.shape[0]:
        raise DimensionMismatch(f"X has shape {X.shape}, y has {y.shape[0]} entries")
    if not np.all(np.isfinite(X)) or not np.all(np.isfinite(y)):
        raise ValueError("X and y must be finite")
    m, p = X.shape
    denom = float(m if denom is None else denom)
    if max_steps is None:
        max_steps = 8 * min(m, p)

    G = X.T @ X / denom
    G = 0.5 * (G + G.T)
    c0 = X.T @ y / denom

    lam0 = 2.0 * np.max(np.abs(c0)) if p else 0.0
    if lam0 <= tol:
        return RegPath(knots=np.array([0.0]), vertices=np.zeros((1, p)),
                       active_sets=(), signs=())
    eps = _EVENT_EPS * lam0

    # all indices tied for the largest correlation enter together, in index order
    active = sorted(np.flatnonzero(2.0 * np.abs(c0) >= lam0 - eps).tolist())
    sign = {j: float(np.sign(c0[j])) for j in active}

    knots = [lam0]
    vertices = [np.zeros(p)]
    active_sets, signs = [], []
    lam = lam0
    steps = 0
    while lam > 0:
        steps += 1
        if steps > max_steps:
            raise MaxStepsExceeded(f"path not finished after {max_steps} steps (lambda={lam:.3e})")
        A = np.array(active, dtype=int)
        s = np.array([sign[j] for j in active])
        sol = _solve_active(G[np.ix_(A, A)], np.column_stack([c0[A], s]))
        a, d = sol[:, 0], sol[:, 1]

        # entry events: c_j(t) = alpha_j + (t/2) gamma_j hits +-t/2
        inactive = np.setdiff1d(np.arange(p), A)
        t_join = np.full(inactive.shape, -np.inf)
        if inactive.size:
            alpha = c0[inactive] - G[np.ix_(inactive, A)] @ a
            gamma = G[np.ix_(inactive, A)] @ d
            with np.errstate(divide="ignore", invalid="ignore"):
                r_plus = np.where(1.0 - gamma != 0, 2.0 * alpha / (1.0 - gamma), -np.inf)
                r_minus = np.where(1.0 + gamma != 0, -2.0 * alpha / (1.0 + gamma), -np.inf)
            for r in (r_plus, r_minus):
                ok = (r > eps) & (r < lam - eps)
                t_join = np.where(ok, np.maximum(t_join, r), t_join)

        # exit events: b_i(t) = a_i - (t/2) d_i hits zero
        with np.errstate(divide="ignore", invalid="ignore"):
            r_drop = np.where(d != 0, 2.0 * a / d, -np.inf)
        t_drop = np.where((r_drop > eps) & (r_drop < lam - eps), r_drop, -np.inf)

        t_next = max(t_join.max(initial=-np.inf), t_drop.max(initial=-np.inf))
        if not np.isfinite(t_next):
            t_next = 0.0

        beta = np.zeros(p)
        beta[A] = a - 0.5 * t_next * d
        active_sets.append(tuple(active))
        signs.append(s.copy())

        if t_next > 0.0:
            leaving = [int(A[i]) for i in np.flatnonzero(t_drop >= t_next - eps)]
            entering = [int(inactive[i]) for i in np.flatnonzero(t_join >= t_next - eps)]
            for j in leaving:
                beta[j] = 0.0
                active.remove(j)
                del sign[j]
            if entering:
                corr = c0[entering] - G[entering] @ beta
                for j, cj in zip(entering, corr):
                    sign[j] = float(np.sign(cj))
                active = sorted(active + entering)
            if not active:
                # everything dropped: restart from the zero solution
                corr = c0 - G @ beta
                lam_here = 2.0 * np.max(np.abs(corr))
                active = sorted(np.flatnonzero(2.0 * np.abs(corr) >= lam_here - eps).tolist())
                sign = {j: float(np.sign(corr[j])) for j in active}

        knots.append(t_next)
        vertices.append(beta)
        lam = t_next

    return RegPath(
        knots=np.array(knots),
        vertices=np.array(vertices),
        active_sets=tuple(active_sets),
        signs=tuple(signs),
    )


def lasso_kkt_residual(X, y, beta, lam: float, denom: float | None = None) -> float:
    """Largest violation of the Lasso optimality conditions at ``beta``.

    Active ``j``: ``|c_j - lam/2 sign(b_j)|``; inactive: ``(|c_j| - lam/2)_+``,
    with ``c = X'(y - X b) / denom``.
    """
    X = np.asarray(X, dtype=float)
    beta = np.asarray(beta, dtype=float)
    denom = float(X.shape[0] if denom is None else denom)
    corr = X.T @ (np.asarray(y, dtype=float) - X @ beta) / denom
    nz = beta != 0
    res_active = np.abs(corr[nz] - 0.5 * lam * np.sign(beta[nz]))
    res_inactive = np.maximum(np.abs(corr[~nz]) - 0.5 * lam, 0.0)
    return float(max(res_active.max(initial=0.0), res_inactive.max(initial=0.0)))
