"""Monte Carlo checks of the sparsity inequalities and of thresholded sign recovery.

    python3 scripts/theorem_checks.py --seeds 1000
"""

import argparse
import math

import numpy as np

from smoothlasso.core import PenaltySpec, standardize
from smoothlasso.slasso import fit
from smoothlasso.theory import (OracleModel, check_assumptions, fusion_constants, si_bounds,
                                sign_consistency, supnorm_constant, supnorm_tuning, threshold_fit)


def design(n, p, delta, rng):
    """Centered design with ``X'X/n`` tridiagonal (off-diagonal ``delta``)."""
    Z = rng.standard_normal((n, p))
    Z -= Z.mean(axis=0)
    Q, _ = np.linalg.qr(Z)
    T = np.eye(p) + delta * (np.eye(p, k=1) + np.eye(p, k=-1))
    return np.sqrt(n) * Q @ np.linalg.cholesky(T).T


def risk_check(n, p, seeds, sigma=1.0, kappa1=3.0, kappa2=1.0):
    X = design(n, p, 0.0, np.random.default_rng(70))
    beta = np.zeros(p)
    beta[[20, 21]] = [2.0, 1.5]
    L1, _ = fusion_constants(beta)
    b = si_bounds(n, p, 2, sigma, kappa1, kappa2, L1)
    pred_ok = l1_ok = 0
    worst_pred = worst_l1 = 0.0
    for s in range(seeds):
        d = standardize(X, X @ beta + sigma * np.random.default_rng(7000 + s).standard_normal(n))
        est = fit(d, PenaltySpec(b.lambda_n, b.mu_n)).beta
        pe = float(np.mean((d.X @ (est - beta)) ** 2))
        le = float(np.abs(est - beta).sum())
        pred_ok += pe <= b.risk_bound
        l1_ok += le <= b.l1_bound
        worst_pred, worst_l1 = max(worst_pred, pe), max(worst_l1, le)
    print(f"risk bound {b.risk_bound:.3f}: holds {pred_ok / seeds:.1%}, worst {worst_pred:.3f}")
    print(f"l1 bound   {b.l1_bound:.3f}: holds {l1_ok / seeds:.1%}, worst {worst_l1:.3f}")
    print(f"guaranteed level {b.probability:.3f}")


def sign_check(n, p, seeds, delta, sigma=1.0, kappa1=3.0):
    X = design(n, p, delta, np.random.default_rng(80))
    beta = np.zeros(p)
    beta[[20, 21]] = 1.0
    oracle = OracleModel(beta, sigma)
    k3 = delta * math.sqrt(n * math.log(p)) / sigma
    lam, mu = supnorm_tuning(n, p, sigma, kappa1, k3)
    L1, L2 = fusion_constants(beta)
    c_t = supnorm_constant(n, p, sigma, kappa1, k3, L1, L2)
    for r in check_assumptions(standardize(X, X @ beta), oracle, mu, c_l=2.5 * c_t):
        print(f"  {r.condition.value:5s} {r.status:14s} margin {r.margin:.4g}")
    hits = 0
    for s in range(seeds):
        d = standardize(X, X @ beta + sigma * np.random.default_rng(8000 + s).standard_normal(n))
        hits += sign_consistency(threshold_fit(fit(d, PenaltySpec(lam, mu)), c_t, n, p).beta, oracle)
    print(f"delta {delta}: mu_n {mu:.3f}, c_tilde {c_t:.3f}, sign recovery {hits / seeds:.1%}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=256)
    ap.add_argument("--p", type=int, default=64)
    ap.add_argument("--seeds", type=int, default=1000)
    ap.add_argument("--deltas", default="0.02,0.05,0.1,0.3")
    args = ap.parse_args()
    print("sparsity inequalities, orthogonal design")
    risk_check(args.n, args.p, args.seeds)
    print("\nthresholded sign recovery, tridiagonal design with mu_n = delta")
    for delta in (float(x) for x in args.deltas.split(",")):
        sign_check(args.n, args.p, args.seeds, delta)


if __name__ == "__main__":
    main()
