import math

import numpy as np
import pytest

from oracles import jtilde, lasso_irrepresentable
from smoothlasso.core import PenaltySpec, standardize
from smoothlasso.errors import IndexInSupport, InvalidConstant
from smoothlasso.slasso import fit
from smoothlasso.theory import (EMPTY, FULL, Condition, Interval, OracleModel, check_assumptions,
                                check_selection_conditions, fusion_constants, gamma_interval,
                                gamma_interval_all, omega, omega_all, risk_tuning, si_bounds,
                                sign_consistency, supnorm_bounds, supnorm_constant, supnorm_tuning,
                                threshold_fit)


def _tridiag(p, delta):
    return np.eye(p) + delta * (np.eye(p, k=1) + np.eye(p, k=-1))


def _random_gram(rng, p, n=60):
    X = rng.standard_normal((n, p))
    X = X + 0.4 * np.roll(X, 1, axis=1)
    X -= X.mean(0)
    X /= np.sqrt((X**2).mean(0))
    return X.T @ X / n


def test_oracle_model():
    o = OracleModel([0, 2.0, 0, -1.0], 2.0)
    assert o.support == (1, 3) and o.p == 4
    with pytest.raises(ValueError):
        OracleModel([1.0], 0.0)


def test_omega_mu_zero_matches_lasso_irrepresentable(rng):
    C = _random_gram(rng, 7)
    beta = np.array([1.5, 0, -2, 0, 0, 1, 0])
    o = OracleModel(beta)
    ref = lasso_irrepresentable(C.tolist(), beta.tolist())
    got = omega_all(1.0, 0.0, o, C, jtilde(7))
    assert got.keys() == ref.keys()
    for j in ref:
        assert got[j] == pytest.approx(ref[j], abs=1e-12)
        assert omega(j, 1.0, 0.0, o, C, jtilde(7)) == pytest.approx(ref[j], abs=1e-12)
    with pytest.raises(IndexInSupport):
        omega(0, 1.0, 0.0, o, C, jtilde(7))


def test_omega_dense_formula(rng):
    C = _random_gram(rng, 6)
    beta = np.array([0, 1.0, 1.0, 0, -1, 0])
    lam, mu = 0.4, 0.3
    Jt = jtilde(6)
    A, Ac = [1, 2, 4], [0, 3, 5]
    inv = np.linalg.inv(C[np.ix_(A, A)] + mu * Jt[np.ix_(A, A)])
    v = np.sign(beta[A]) / 2 + mu / lam * Jt[np.ix_(A, A)] @ beta[A]
    for j in Ac:
        want = C[j, A] @ inv @ v - mu / lam * Jt[j, A] @ beta[A]
        assert omega(j, lam, mu, OracleModel(beta), C, Jt) == pytest.approx(want, abs=1e-12)


def test_selection_condition_identity_gram():
    o = OracleModel([1.0, 0, 0, 2.0])
    r = check_selection_conditions(0.5, 0.0, o, np.eye(4), jtilde(4))
    assert r.satisfied and r.margin == 1.0 and r.condition is Condition.OMEGA_STRICT


def test_interval_algebra():
    assert 0.5 in Interval(0, 1) and 1 not in Interval(0, 1)
    assert Interval(0, 2).intersect(Interval(1, 3)) == Interval(1, 2)
    assert Interval(0, 1).intersect(Interval(2, 3)).empty
    assert FULL.full and EMPTY.empty


def test_gamma_interval_dense_oracle(rng):
    C = _random_gram(rng, 6)
    beta = np.array([0, 1.0, 2.0, 0, 0, 0])
    o = OracleModel(beta)
    Jt = jtilde(6)
    A = [1, 2]
    inv = np.linalg.inv(C[np.ix_(A, A)])
    for j in (0, 3, 4, 5):
        N = C[j, A] @ inv @ np.sign(beta[A]) / 2
        D = (C[j, A] @ inv @ Jt[np.ix_(A, A)] - Jt[j, A]) @ beta[A]
        iv = gamma_interval(j, o, C, Jt)
        if abs(D) > 1e-14:
            lo, hi = sorted(((-1 - N) / D, (1 - N) / D))
            assert iv.lo == pytest.approx(lo) and iv.hi == pytest.approx(hi)


def test_gamma_interval_full_when_d_zero():
    # identity Gram and a support far from j: N = D = 0
    o = OracleModel([0, 0, 0, 0, 1.0, 1.0])
    assert gamma_interval(0, o, np.eye(6), jtilde(6)).full


def test_gamma_interval_membership_matches_check(rng):
    C = _random_gram(rng, 8)
    o = OracleModel(np.array([0, 0, 1.0, 1.0, 0, 0, 0, 0]))
    iv = gamma_interval_all(o, C, jtilde(8))
    pts = np.linspace(-5, 5, 201)
    for g in pts:
        r = check_selection_conditions(1.0, 0.0, o, C, jtilde(8), ratio=g)
        if r.satisfied is None:
            continue
        assert r.satisfied == (g in iv)


def test_assumptions_identity():
    o = OracleModel([1.0, 1.0, 0, 0, 0])
    reports = {r.condition: r for r in check_assumptions(np.eye(5), o, 0.0)}
    assert reports[Condition.A2].margin == pytest.approx(1 / 32)
    assert reports[Condition.A2].satisfied
    # Jt_AA = [[1, -1], [-1, 2]] since index 1 is interior: 1 - 2 + 2
    assert reports[Condition.A1].details["quad_form"] == 1.0
    assert reports[Condition.A4].satisfied is None  # n unknown for a bare Gram


@pytest.mark.parametrize("delta,mu", [(0.3, 0.3), (0.3, 0.25), (0.05, 0.0), (0.2, 0.4)])
def test_a3_tridiagonal_margin(delta, mu):
    o = OracleModel([0, 0, 1.0, -1.0, 0, 0, 0, 0])
    r = {x.condition: x for x in check_assumptions(_tridiag(8, delta), o, mu)}[Condition.A3]
    assert r.margin == pytest.approx(1 / 32 - abs(delta - mu), abs=1e-12)


def test_constant_beta_l1_zero():
    L1, L2 = fusion_constants(np.full(6, 2.0))
    assert L1 == 0.0 and L2 == 0.0


def test_fusion_constants_hand():
    b = np.array([0, 1.0, 1.0, 0, 0])
    # b_A'Jt_AA b_A with A={1,2}: 2 - 2 + 2 = 2; Jt b = (-1, 1, 1, -1, 0)
    L1, L2 = fusion_constants(b)
    assert L1 == pytest.approx(2 / (math.log(5) * 2))
    assert L2 == pytest.approx(1 / math.log(5))


def test_a4_and_eic(rng):
    X = rng.standard_normal((50, 6))
    d = standardize(X, X[:, 0])
    o = OracleModel([2.0, 0, 0, 0, 0, 0])
    reps = {r.condition: r for r in check_assumptions(d, o, 0.1, lam=0.5, c_l=1.0)}
    rate = math.sqrt(math.log(6) / 50)
    assert reps[Condition.A4].margin == pytest.approx(2.0 - rate)
    assert Condition.EIC in reps


def test_si_bounds_hand():
    # n=100, p=1000, |A|=5, sigma=1, k1=3, k2=1, L1=2; values by hand
    b = si_bounds(100, 1000, 5, 1.0, 3.0, 1.0, 2.0)
    assert b.risk_bound == pytest.approx(50.42661353656959, rel=1e-12)
    assert b.l1_bound == pytest.approx(63.954348198709326, rel=1e-12)
    assert b.probability == pytest.approx(0.5783034965714178, rel=1e-12)
    assert b.lambda_n == pytest.approx(0.7884782654635396, rel=1e-12)
    assert b.mu_n == pytest.approx(0.02628260884878466, rel=1e-12)
    assert b.constants["c2"] == 146


def test_si_bounds_errors():
    with pytest.raises(InvalidConstant):
        si_bounds(100, 10, 2, 1.0, 2 * math.sqrt(2), 1.0, 0.0)
    with pytest.raises(InvalidConstant):
        si_bounds(100, 10, 0, 1.0, 3.0, 1.0, 0.0)


def test_lasso_constant_collapse():
    assert si_bounds(50, 20, 3, 2.0, 3.0, 7.0, 0.0).constants["c2"] == 16 * 9 * 4


def test_supnorm_constant_values():
    alpha = 16 / 3
    want = (0.75 + 1 / (alpha - 1)) / (1 + 2.0 * 1.5 / 80)
    assert supnorm_constant(80, 30, 1.5, 3.0, 2.0, 0, 0) == pytest.approx(want, rel=1e-14)
    big = supnorm_constant(80, 30, 1.0, 3.0, 2.0, 0, 0, alpha=1e12)
    assert big == pytest.approx(0.75 / (1 + 2.0 / 80), rel=1e-9)
    # n=100, p=1000, sigma=1, k1=3, k3=1, L1=L2=1, alpha=2: terms summed by hand
    assert supnorm_constant(100, 1000, 1.0, 3.0, 1.0, 1.0, 1.0, 2.0) == pytest.approx(
        2.1853296321114883, rel=1e-12)
    with pytest.raises(InvalidConstant):
        supnorm_constant(80, 30, 1.0, 3.0, 2.0, 0, 0, alpha=1.0)
    with pytest.raises(InvalidConstant):
        supnorm_constant(80, 30, 1.0, 3.0, 0.0, 0, 0)


def test_tuning_scalings():
    lam, mu = supnorm_tuning(100, 50, 2.0, 3.0, 4.0)
    assert lam == pytest.approx(3 * 2 * math.sqrt(math.log(50) / 100))
    assert mu == pytest.approx(4 * 2 / math.sqrt(100 * math.log(50)))
    assert supnorm_tuning(100, 50, 2.0, 3.0, 4.0, "proof")[1] == pytest.approx(0.08)
    with pytest.raises(ValueError):
        supnorm_tuning(100, 50, 2.0, 3.0, 4.0, "other")
    assert risk_tuning(100, 50, 2.0, 3.0, 1.0)[1] == pytest.approx(4 * math.sqrt(math.log(50)) / 100)
    sb = supnorm_bounds(100, 50, 1.0, 3.0, 1.0, 0.0, 0.0)
    assert sb.supnorm_bound == pytest.approx(sb.constants["c_tilde"] * math.sqrt(math.log(50) / 100))


def test_threshold_and_signs(rng):
    X = rng.standard_normal((40, 5))
    d = standardize(X, X @ [2, -2, 0, 0, 0.0] + 0.5 * rng.standard_normal(40))
    f = fit(d, PenaltySpec(0.05, 0.1))
    assert np.array_equal(threshold_fit(f, 0.0, 40, 5).beta, f.beta)
    assert np.all(threshold_fit(f, 1e9, 40, 5).beta == 0)
    level = 0.5 * math.sqrt(math.log(5) / 40)
    th = threshold_fit(f, 0.5, 40, 5)
    assert np.all((np.abs(th.beta) >= level) | (th.beta == 0))
    assert th.beta[1] < 0  # negative coefficients survive: the rule uses |beta|
    assert th.kkt_residual == f.kkt_residual
    o = OracleModel([2, -2, 0, 0, 0.0])
    assert sign_consistency([1, -3, 0, 0, 0], o)
    assert not sign_consistency([1, -3, 0, 0.1, 0], o)
    with pytest.raises(ValueError):
        sign_consistency([1, 2], o)
    with pytest.raises(ValueError):
        threshold_fit(f, -1.0, 40, 5)


def test_report_json_and_indeterminate():
    o = OracleModel([1.0, 0, 0])
    C = np.eye(3)
    C[0, 1] = C[1, 0] = 2.0  # Omega_1 = 2 * 1/2 = 1 exactly
    r = check_selection_conditions(1.0, 0.0, o, C, jtilde(3))
    assert r.satisfied is None and r.status == "indeterminate"
    j = r.to_json()
    assert j["status"] == "indeterminate" and j["condition"] == "omega_strict"
