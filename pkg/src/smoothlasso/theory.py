"""Evaluators for the selection-consistency conditions and the finite-sample bounds.

Index sets are 0-based. ``C`` is a Gram matrix ``X'X/n`` and ``Jt`` the
fusion matrix (or any symmetric quadratic matrix, e.g. the identity for the
Elastic-Net analogue).
"""

from __future__ import annotations

import dataclasses
import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .core import RegressionData, fusion_Jtilde, gram
from .errors import IndexInSupport, InvalidConstant, SingularSystem

BOUNDARY_TOL = 1e-9
DEFAULT_ALPHA = 16.0 / 3.0


@dataclass(frozen=True)
class OracleModel:
    beta_star: np.ndarray = field(compare=False)
    sigma: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "beta_star", np.asarray(self.beta_star, dtype=float))
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")

    @property
    def support(self) -> tuple:
        return tuple(int(j) for j in np.flatnonzero(self.beta_star))

    @property
    def p(self) -> int:
        return self.beta_star.size


class Condition(enum.Enum):
    OMEGA_STRICT = "omega_strict"
    OMEGA_WEAK = "omega_weak"
    A1 = "A1"
    A2 = "A2"
    A3 = "A3"
    A4 = "A4"
    A3EN = "A3EN"
    EIC = "EIC"


@dataclass(frozen=True)
class ConditionReport:
    """Outcome of one condition.

    ``margin`` is the signed distance to the boundary (positive means inside).
    ``satisfied`` is ``None`` when ``|margin| <= 1e-9``; such cases are
    reported as indeterminate rather than pass/fail.
    """

    condition: Condition
    satisfied: bool | None
    margin: float
    details: dict = field(default_factory=dict)

    @property
    def status(self) -> str:
        if self.satisfied is None:
            return "indeterminate"
        return "satisfied" if self.satisfied else "violated"

    def to_json(self) -> dict:
        return {
            "condition": self.condition.value,
            "status": self.status,
            "satisfied": self.satisfied,
            "margin": _json_float(self.margin),
            "details": {k: _jsonable(v) for k, v in self.details.items()},
        }


def _json_float(x):
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def _jsonable(v):
    if isinstance(v, np.ndarray):
        return [_jsonable(x) for x in v.tolist()]
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (float, np.floating)):
        return _json_float(v)
    if isinstance(v, np.integer):
        return int(v)
    return v


def _report(cond, margin, strict, details=None):
    if math.isinf(margin) and margin > 0:
        sat = True
    elif abs(margin) <= BOUNDARY_TOL:
        sat = None
    else:
        sat = margin > 0 if strict else margin >= 0
    return ConditionReport(cond, sat, float(margin), details or {})


# --------------------------------------------------------------------------
# irrepresentable-type quantities


def _support_solve(C, Jt, mu, A, rhs):
    M = C[np.ix_(A, A)] + mu * Jt[np.ix_(A, A)]
    w = np.linalg.eigvalsh(0.5 * (M + M.T))
    if w.size and w[0] <= 1e-12 * max(abs(w[-1]), 1.0):
        raise SingularSystem("C_AA + mu Jt_AA is singular")
    return np.linalg.solve(M, rhs)


def _ratio(lam, mu, ratio):
    if ratio is not None:
        return float(ratio)
    if mu == 0:
        return 0.0
    if not lam > 0:
        raise ValueError("lambda must be positive when mu > 0")
    return mu / lam


def omega_all(lam, mu, oracle: OracleModel, C, Jt, ratio=None) -> dict:
    """``Omega_j`` for every ``j`` outside the support, keyed by ``j``.

    ``ratio`` overrides ``mu/lam`` in the two outer terms; with ``mu = 0`` it
    gives the regime where only the ratio ``gamma`` survives.
    """
    C = np.asarray(C, dtype=float)
    Jt = np.asarray(Jt, dtype=float)
    A = np.array(oracle.support, dtype=int)
    out_idx = np.setdiff1d(np.arange(oracle.p), A)
    if A.size == 0:
        return {int(j): 0.0 for j in out_idx}
    g = _ratio(lam, mu, ratio)
    b = oracle.beta_star[A]
    v = 0.5 * np.sign(b) + g * (Jt[np.ix_(A, A)] @ b)
    w = _support_solve(C, Jt, mu, A, v)
    vals = C[np.ix_(out_idx, A)] @ w - g * (Jt[np.ix_(out_idx, A)] @ b)
    return {int(j): float(x) for j, x in zip(out_idx, vals)}


def omega(j, lam, mu, oracle: OracleModel, C, Jt, ratio=None) -> float:
    """``C_jA (C_AA + mu Jt_AA)^{-1} (sgn(b_A)/2 + (mu/lam) Jt_AA b_A) - (mu/lam) Jt_jA b_A``."""
    if j in oracle.support:
        raise IndexInSupport(f"index {j} is in the support")
    C = np.asarray(C, dtype=float)
    Jt = np.asarray(Jt, dtype=float)
    A = np.array(oracle.support, dtype=int)
    if A.size == 0:
        return 0.0
    g = _ratio(lam, mu, ratio)
    b = oracle.beta_star[A]
    v = 0.5 * np.sign(b) + g * (Jt[np.ix_(A, A)] @ b)
    w = _support_solve(C, Jt, mu, A, v)
    return float(C[j, A] @ w - g * (Jt[j, A] @ b))


def check_selection_conditions(lam, mu, oracle: OracleModel, C, Jt, ratio=None,
                               weak: bool = False) -> ConditionReport:
    """``max_j |Omega_j| < 1`` (or ``<= 1`` with ``weak``) over the complement of the support."""
    vals = omega_all(lam, mu, oracle, C, Jt, ratio)
    cond = Condition.OMEGA_WEAK if weak else Condition.OMEGA_STRICT
    if not vals:
        return ConditionReport(cond, True, math.inf, {})
    worst = max(abs(v) for v in vals.values())
    return _report(cond, 1.0 - worst, strict=not weak, details={"omega": vals})


@dataclass(frozen=True)
class Interval:
    """Open interval ``(lo, hi)``; empty when ``lo >= hi``."""

    lo: float
    hi: float

    @property
    def empty(self) -> bool:
        return not self.lo < self.hi

    @property
    def full(self) -> bool:
        return self.lo == -math.inf and self.hi == math.inf

    def __contains__(self, x) -> bool:
        return self.lo < x < self.hi

    def intersect(self, other: "Interval") -> "Interval":
        return Interval(max(self.lo, other.lo), min(self.hi, other.hi))


FULL = Interval(-math.inf, math.inf)
EMPTY = Interval(0.0, 0.0)


def _gamma_terms(oracle, C, Jt):
    C = np.asarray(C, dtype=float)
    Jt = np.asarray(Jt, dtype=float)
    A = np.array(oracle.support, dtype=int)
    b = oracle.beta_star[A]
    out_idx = np.setdiff1d(np.arange(oracle.p), A)
    # W = C_AA^{-1} [sgn(b)/2, Jt_AA b]
    W = _support_solve(C, Jt, 0.0, A, np.column_stack([0.5 * np.sign(b), Jt[np.ix_(A, A)] @ b]))
    N = C[np.ix_(out_idx, A)] @ W[:, 0]
    D = C[np.ix_(out_idx, A)] @ W[:, 1] - Jt[np.ix_(out_idx, A)] @ b
    return out_idx, N, D


def _interval_from(N, D):
    if abs(D) <= 1e-14:
        return FULL if abs(N) < 1 else EMPTY
    a, b = (-1.0 - N) / D, (1.0 - N) / D
    return Interval(min(a, b), max(a, b))


def gamma_interval(j, oracle: OracleModel, C, Jt) -> Interval:
    """Admissible ``gamma = mu/lam`` for index ``j`` when ``mu -> 0``.

    With ``N = C_jA C_AA^{-1} sgn(b_A)/2`` and
    ``D = (C_jA C_AA^{-1} Jt_AA - Jt_jA) b_A`` the condition is
    ``|N + gamma D| < 1``.
    """
    if j in oracle.support:
        raise IndexInSupport(f"index {j} is in the support")
    out_idx, N, D = _gamma_terms(oracle, C, Jt)
    k = int(np.flatnonzero(out_idx == j)[0])
    return _interval_from(N[k], D[k])


def gamma_interval_all(oracle: OracleModel, C, Jt) -> Interval:
    """Intersection of :func:`gamma_interval` over the complement of the support."""
    out_idx, N, D = _gamma_terms(oracle, C, Jt)
    iv = FULL
    for n_j, d_j in zip(N, D):
        iv = iv.intersect(_interval_from(n_j, d_j))
    return EMPTY if iv.empty else iv


# --------------------------------------------------------------------------
# assumptions


def _offdiag_max(M, rows=None):
    M = np.abs(np.asarray(M, dtype=float)).copy()
    np.fill_diagonal(M, 0.0)
    if rows is not None:
        M = M[list(rows)]
    return float(M.max(initial=0.0))


def fusion_constants(beta_star, p=None):
    """Tightest ``(L1, L2)`` with ``b_A'Jt_AA b_A <= L1 log(p)|A|`` and ``||Jt b||_inf <= L2 log p``."""
    b = np.asarray(beta_star, dtype=float)
    p = b.size if p is None else p
    Jt = fusion_Jtilde(p)
    A = np.flatnonzero(b)
    q = float(b[A] @ Jt[np.ix_(A, A)] @ b[A])
    jinf = float(np.max(np.abs(Jt @ b), initial=0.0))
    logp = math.log(p)

    def solve(num, den):
        if num <= 0:
            return 0.0
        return num / den if den > 0 else math.inf

    return solve(q, logp * max(A.size, 1)), solve(jinf, logp)


def check_assumptions(data, oracle: OracleModel, mu_n: float, lam=None, L1=None, c_l=None,
                      theta=None) -> list:
    """Reports for A1, A2, A3, A4, A3-EN and (when ``lam`` is given) EIC.

    ``data`` is a :class:`RegressionData` or a Gram matrix (then ``n`` is
    taken from ``data.n`` only when available; A4 needs it).
    """
    if isinstance(data, RegressionData):
        C, n = gram(data), data.n
    else:
        C, n = np.asarray(data, dtype=float), None
    p = C.shape[0]
    A = np.array(oracle.support, dtype=int)
    s = max(A.size, 1)
    bound = 1.0 / (16.0 * s)
    Jt = fusion_Jtilde(p)
    logp = math.log(p)
    reports = []

    L1_min, L2_min = fusion_constants(oracle.beta_star, p)
    q = float(oracle.beta_star[A] @ Jt[np.ix_(A, A)] @ oracle.beta_star[A]) if A.size else 0.0
    if L1 is None:
        reports.append(ConditionReport(Condition.A1, bool(math.isfinite(L1_min)),
                                       math.inf if math.isfinite(L1_min) else -math.inf,
                                       {"L1": L1_min, "L2": L2_min, "quad_form": q}))
    else:
        reports.append(_report(Condition.A1, L1 * logp * s - q, strict=False,
                               details={"L1": L1, "L1_min": L1_min, "L2": L2_min, "quad_form": q}))

    rho1 = _offdiag_max(C, rows=A) if A.size else 0.0
    reports.append(_report(Condition.A2, bound - rho1, strict=False,
                           details={"rho1": rho1, "bound": bound}))

    K = C + mu_n * Jt
    kmax = _offdiag_max(K)
    reports.append(_report(Condition.A3, bound - kmax, strict=False,
                           details={"max_offdiag_K": kmax, "bound": bound, "mu_n": mu_n}))

    bmin = float(np.min(np.abs(oracle.beta_star[A]), initial=math.inf))
    rate = math.sqrt(logp / n) if n else None
    if rate is None:
        reports.append(ConditionReport(Condition.A4, None, math.nan, {"reason": "n unknown"}))
    elif c_l is None:
        c_max = bmin / rate if rate > 0 else math.inf
        reports.append(ConditionReport(Condition.A4, A.size > 0, math.inf if A.size else -math.inf,
                                       {"c_l_sup": c_max, "min_abs_beta": bmin}))
    else:
        reports.append(_report(Condition.A4, bmin - c_l * rate, strict=True,
                               details={"c_l": c_l, "threshold": c_l * rate, "min_abs_beta": bmin}))

    en_max = _offdiag_max(C + mu_n * np.eye(p))
    reports.append(_report(Condition.A3EN, bound - en_max, strict=False,
                           details={"max_offdiag": en_max, "bound": bound}))

    if lam is not None:
        vals = omega_all(lam, mu_n, oracle, C, np.eye(p))
        worst = max((abs(v) for v in vals.values()), default=0.0)
        target = 1.0 - (0.0 if theta is None else theta)
        reports.append(_report(Condition.EIC, target - worst, strict=theta is None,
                               details={"max_abs": worst, "theta_sup": 1.0 - worst, "values": vals}))
    return reports


# --------------------------------------------------------------------------
# bounds


@dataclass(frozen=True)
class BoundSet:
    risk_bound: float
    l1_bound: float
    supnorm_bound: float | None
    probability: float
    lambda_n: float
    mu_n: float
    constants: dict

    def to_json(self) -> dict:
        d = dataclasses.asdict(self)
        return {k: _jsonable(v) for k, v in d.items()}


def _check_kappa1(kappa1):
    if not kappa1 > 2 * math.sqrt(2):
        raise InvalidConstant(f"kappa1 must exceed 2*sqrt(2), got {kappa1}")


def risk_tuning(n, p, sigma, kappa1, kappa2):
    """``lam_n = k1 sigma sqrt(log p / n)``, ``mu_n = k2 sigma^2 sqrt(log p) / n``."""
    logp = math.log(p)
    return kappa1 * sigma * math.sqrt(logp / n), kappa2 * sigma**2 * math.sqrt(logp) / n


def supnorm_tuning(n, p, sigma, kappa1, kappa3, mu_scaling: str = "statement"):
    """``lam_n`` as above; ``mu_n = k3 sigma / sqrt(n log p)`` or, with ``"proof"``, ``k3 sigma / n``."""
    logp = math.log(p)
    lam_n = kappa1 * sigma * math.sqrt(logp / n)
    if mu_scaling == "statement":
        mu_n = kappa3 * sigma / math.sqrt(n * logp)
    elif mu_scaling == "proof":
        mu_n = kappa3 * sigma / n
    else:
        raise ValueError(f"unknown mu scaling {mu_scaling!r}")
    return lam_n, mu_n


def si_bounds(n, p, support_size, sigma, kappa1, kappa2, L1) -> BoundSet:
    """Prediction and l1 bounds with the probability level they hold at."""
    _check_kappa1(kappa1)
    if min(n, p, support_size) < 1:
        raise InvalidConstant("n, p and support_size must be >= 1")
    c2 = (16 * kappa1**2 + L1 * kappa2) * sigma**2
    c1 = (16 * kappa1 + L1 * kappa2 / kappa1) * sigma
    logp = math.log(p)
    lam_n, mu_n = risk_tuning(n, p, sigma, kappa1, kappa2)
    return BoundSet(
        risk_bound=c2 * logp * support_size / n,
        l1_bound=c1 * math.sqrt(logp / n) * support_size,
        supnorm_bound=None,
        probability=1.0 - p ** (1.0 - kappa1**2 / 8.0),
        lambda_n=lam_n,
        mu_n=mu_n,
        constants={"kappa1": kappa1, "kappa2": kappa2, "c1": c1, "c2": c2, "L1": L1},
    )


def supnorm_constant(n, p, sigma, kappa1, kappa3, L1, L2, alpha=DEFAULT_ALPHA) -> float:
    """Sup-norm constant, with the unnamed constants A, B bound to ``kappa1``, ``kappa3``."""
    _check_kappa1(kappa1)
    if not alpha > 1:
        raise InvalidConstant(f"alpha must exceed 1, got {alpha}")
    if not kappa3 > 0:
        raise InvalidConstant(f"kappa3 must be positive, got {kappa3}")
    A, B = kappa1, kappa3
    lam_n = kappa1 * sigma * math.sqrt(math.log(p) / n)
    inner = (
        0.75
        + 1.0 / (alpha - 1.0)
        + 4 * L1 * B / (9 * alpha**2 * A**2)
        + 2 * L1 * B / (3 * alpha * A**2)
        + math.sqrt(2 * L1 * B / (3 * alpha * (alpha - 1) * A**2)
                    + 8 * L1 * L2 * B**2 / (9 * alpha * (alpha - 1) * A**4) * lam_n)
        + (4 * L2 * B / (3 * A**2) + L2 * B / A**2) * lam_n
    )
    return inner / (1.0 + B * sigma / n)


def supnorm_bounds(n, p, sigma, kappa1, kappa3, L1, L2, alpha=DEFAULT_ALPHA,
                   mu_scaling: str = "statement") -> BoundSet:
    c_t = supnorm_constant(n, p, sigma, kappa1, kappa3, L1, L2, alpha)
    lam_n, mu_n = supnorm_tuning(n, p, sigma, kappa1, kappa3, mu_scaling)
    return BoundSet(
        risk_bound=math.nan,
        l1_bound=math.nan,
        supnorm_bound=c_t * math.sqrt(math.log(p) / n),
        probability=1.0 - p ** (1.0 - kappa1**2 / 8.0),
        lambda_n=lam_n,
        mu_n=mu_n,
        constants={"kappa1": kappa1, "kappa3": kappa3, "c_tilde": c_t, "alpha": alpha,
                   "L1": L1, "L2": L2},
    )


# --------------------------------------------------------------------------
# thresholding and signs


def threshold_fit(fit, c_tilde: float, n: int, p: int):
    """Zero the coordinates with ``|beta_j| < c_tilde sqrt(log p / n)``.

    The returned fit keeps the penalty, scaling and KKT residual of the
    input; it is a post-processed estimate, not a minimizer.
    """
    if c_tilde < 0:
        raise ValueError("c_tilde must be nonnegative")
    level = c_tilde * math.sqrt(math.log(p) / n)
    beta = np.where(np.abs(fit.beta) >= level, fit.beta, 0.0)
    return dataclasses.replace(fit, beta=beta,
                               active_set=tuple(int(j) for j in np.flatnonzero(beta)))


def sign_consistency(estimate, oracle: OracleModel) -> bool:
    est = np.asarray(estimate, dtype=float)
    if est.shape != oracle.beta_star.shape:
        raise ValueError("dimension mismatch")
    return bool(np.array_equal(np.sign(est), np.sign(oracle.beta_star)))
