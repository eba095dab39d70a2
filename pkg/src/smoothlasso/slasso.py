"""Smooth-Lasso family via augmented-data Lasso paths.

The criterion ``||Y - X beta||_n^2 + lam |beta|_1 + beta' M beta`` is a Lasso
on the augmented data ``Xa = [X; B] / nu1``, ``Ya = [Y; 0]`` with ``B'B/n = M``
(``B = sqrt(n mu) J`` for the fusion penalty). The squared loss of the
augmented problem keeps the denominator ``n``. With ``r = lam / nu1`` and
``b`` the augmented Lasso solution, the scaled estimator is ``(c / nu2) b``.

Presets for ``(nu1, nu2, c)``:

* ORIGINAL: ``sqrt(1+mu), sqrt(1+mu), 1``; the plain S-Lasso.
* NS: ``sqrt(1+mu), sqrt(1+mu), 1+mu``; equals ``(1+mu)`` times the S-Lasso.
* HS: ``sqrt(1+2mu), sqrt(1+2mu), 1+2mu``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .core import PenaltySpec, QuadKind, RegressionData, gram
from .lars import RegPath, lars_lasso_path


class Preset(enum.Enum):
    ORIGINAL = "original"
    NS = "ns"
    HS = "hs"
    CUSTOM = "custom"


@dataclass(frozen=True)
class ScalingSpec:
    preset: Preset = Preset.ORIGINAL
    nu1: float | None = None
    nu2: float | None = None
    c: float | None = None

    def __post_init__(self):
        if self.preset is Preset.CUSTOM:
            for name in ("nu1", "nu2", "c"):
                v = getattr(self, name)
                if v is None or not v > 0:
                    raise ValueError(f"custom scaling needs a positive {name}")

    def constants(self, mu: float) -> tuple[float, float, float]:
        """``(nu1, nu2, c)`` for a given ``mu``."""
        if self.preset is Preset.ORIGINAL:
            v = np.sqrt(1.0 + mu)
            return v, v, 1.0
        if self.preset is Preset.NS:
            v = np.sqrt(1.0 + mu)
            return v, v, 1.0 + mu
        if self.preset is Preset.HS:
            v = np.sqrt(1.0 + 2.0 * mu)
            return v, v, 1.0 + 2.0 * mu
        return float(self.nu1), float(self.nu2), float(self.c)


ORIGINAL = ScalingSpec(Preset.ORIGINAL)
NS = ScalingSpec(Preset.NS)
HS = ScalingSpec(Preset.HS)


@dataclass(frozen=True)
class SLassoFit:
    beta: np.ndarray
    penalty: PenaltySpec
    scaling: ScalingSpec
    active_set: tuple = field(default=())
    kkt_residual: float = 0.0


@dataclass(frozen=True)
class KKTReport:
    residual: float
    violations: list
    gradient: np.ndarray


def augment(data: RegressionData, mu: float, nu1: float, penalty: PenaltySpec | None = None):
    """Augmented design ``(n+p) x p`` and response ``(n+p)``.

    ``penalty`` selects the quadratic block; by default the fusion block
    ``sqrt(n mu) J``. Only its ``kind``/``custom`` are used, ``mu`` comes from
    the argument.
    """
    if mu < 0:
        raise ValueError("mu must be nonnegative")
    if not nu1 > 0:
        raise ValueError("nu1 must be positive")
    if penalty is None:
        penalty = PenaltySpec(lam=0.0, mu=mu)
    else:
        penalty = PenaltySpec(lam=0.0, mu=mu, kind=penalty.kind, custom=penalty.custom)
    n, p = data.n, data.p
    block = penalty.augmentation_block(n, p)
    Xa = np.vstack([data.X, block]) / nu1
    Ya = np.concatenate([data.Y, np.zeros(block.shape[0])])
    return Xa, Ya


def _unit_path(data, mu, kind, scaling, custom, lars_opts):
    # path of b / nu2 indexed by lam = nu1 r; the factor c is applied by the callers
    template = PenaltySpec(lam=0.0, mu=mu, kind=kind, custom=custom)
    nu1, nu2, c = scaling.constants(mu)
    Xa, Ya = augment(data, mu, nu1, template)
    path_b = lars_lasso_path(Xa, Ya, denom=data.n, **lars_opts)
    return path_b.scaled(nu1, 1.0 / nu2), c


def family_path(data: RegressionData, mu: float, kind: QuadKind = QuadKind.FUSION,
                scaling: ScalingSpec = ORIGINAL, custom=None, **lars_opts) -> RegPath:
    """Regularization path of a family member at fixed ``mu``, in ``beta`` coordinates."""
    path, c = _unit_path(data, mu, kind, scaling, custom, lars_opts)
    # r = lam / nu1 and beta = (c / nu2) b
    return path.scaled(1.0, c)


def slasso_path(data: RegressionData, mu: float, **lars_opts) -> RegPath:
    """S-Lasso path at fixed ``mu``; ``mu = 0`` gives the Lasso path."""
    return family_path(data, mu, QuadKind.FUSION, ORIGINAL, **lars_opts)


def kkt_check(beta, data: RegressionData, penalty: PenaltySpec,
              scaling: ScalingSpec | None = None, tol: float = 1e-8) -> KKTReport:
    """Optimality conditions of the (scaled) criterion at ``beta``.

    The smooth part's gradient is ``g = 2 k (C + M) beta - 2 X'Y/n`` with
    ``k = nu2 / (nu1 c)``; ``k = 1`` for the unscaled criterion, where this is
    ``-2 X'(Y - X beta)/n + 2 M beta``. Active coordinates need
    ``g_j = -lam sign(beta_j)``, inactive ones ``|g_j| <= lam``.
    """
    beta = np.asarray(beta, dtype=float)
    k = 1.0
    if scaling is not None:
        nu1, nu2, c = scaling.constants(penalty.mu)
        k = nu2 / (nu1 * c)
    M = penalty.quad_matrix(data.p)
    z = data.X.T @ data.Y / data.n
    g = 2.0 * k * (gram(data) @ beta + M @ beta) - 2.0 * z
    lam = penalty.lam
    nz = beta != 0
    per = np.where(nz, np.abs(g + lam * np.sign(beta)), np.maximum(np.abs(g) - lam, 0.0))
    violations = [int(j) for j in np.flatnonzero(per > tol)]
    return KKTReport(residual=float(per.max(initial=0.0)), violations=violations, gradient=g)


def fit(data: RegressionData, penalty: PenaltySpec, scaling: ScalingSpec = ORIGINAL,
        tol: float = 1e-8) -> SLassoFit:
    """Estimate at a single ``(lam, mu)`` by interpolating the family path.

    The factor ``c`` multiplies the interpolated vector, so presets sharing
    ``nu1, nu2`` differ by exactly that factor (NS is ``(1 + mu)`` times the
    original S-Lasso bit for bit).
    """
    path, c = _unit_path(data, penalty.mu, penalty.kind, scaling, penalty.custom, {})
    beta = path.interpolate(penalty.lam) * c
    return make_fit(beta, data, penalty, scaling, tol)


def make_fit(beta, data, penalty, scaling=ORIGINAL, tol=1e-8) -> SLassoFit:
    beta = np.asarray(beta, dtype=float)
    report = kkt_check(beta, data, penalty, scaling, tol)
    return SLassoFit(
        beta=beta,
        penalty=penalty,
        scaling=scaling,
        active_set=tuple(int(j) for j in np.flatnonzero(beta)),
        kkt_residual=report.residual,
    )


def soft_threshold_limit(data: RegressionData, lam: float) -> np.ndarray:
    """Univariate soft thresholding ``sign(z)(|z| - lam/2)_+`` with ``z = X'Y/n``.

    This is the large-``mu`` limit of the NS-scaled estimator when the
    quadratic matrix is the identity, since ``(C + mu I)/(1 + mu) -> I``.
    For the fusion matrix ``(C + mu Jtilde)/(1 + mu) -> Jtilde`` instead, and
    the NS-Lasso limit minimizes ``b'Jtilde b - 2 z'b + lam |b|_1``, which is
    not separable.
    """
    if lam < 0:
        raise ValueError("lambda must be nonnegative")
    z = data.X.T @ data.Y / data.n
    return np.sign(z) * np.maximum(np.abs(z) - 0.5 * lam, 0.0)


def lambda_max(data: RegressionData) -> float:
    """Smallest ``lam`` at which every family member is identically zero.

    The augmented response has zeros below ``Y``, so ``Xa'Ya = X'Y / nu1`` and
    the first knot ``2 max|X'Y| / (n nu1)`` maps back to ``2 max|X'Y| / n``
    whatever the scaling or ``mu``.
    """
    return float(2.0 * np.max(np.abs(data.X.T @ data.Y)) / data.n)
