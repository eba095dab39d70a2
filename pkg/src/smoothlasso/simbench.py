"""Monte-Carlo harness for the four simulated examples.

Each replication draws a training set and an independent test set of the
same size, runs BIC selection (known noise variance) for every method, and
records the number of selected covariates, the relevant/noise selection
ratio, the BIC value and the test mean squared error.
"""

from __future__ import annotations

import csv
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .core import standardize
from .selection import DEFAULT_MU_GRID, Method, select_model
from .theory import OracleModel

BENCH_METHODS = (Method.LASSO, Method.ENET, Method.NS, Method.HS)


# --------------------------------------------------------------------------
# covariance models


@dataclass(frozen=True)
class Toeplitz:
    rate: float

    def matrix(self, p):
        idx = np.arange(p)
        return self.rate ** np.abs(idx[:, None] - idx[None, :])


@dataclass(frozen=True)
class LatentGroups:
    """``xi_j = Z_g + e_j`` for ``j`` in group ``g``; the rest i.i.d. N(0, 1)."""

    groups: tuple  # tuple of index tuples (0-based)
    noise_var: float

    def matrix(self, p):
        S = np.eye(p)
        for g in self.groups:
            g = np.asarray(g)
            S[np.ix_(g, g)] = 1.0
            S[g, g] = 1.0 + self.noise_var
        return S


@dataclass(frozen=True)
class BlockExp:
    """``exp(-|j-k|/scale)`` on ``start..stop-1`` (0-based); identity elsewhere."""

    start: int
    stop: int
    scale: float

    def matrix(self, p):
        S = np.eye(p)
        idx = np.arange(self.start, self.stop)
        S[np.ix_(idx, idx)] = np.exp(-np.abs(idx[:, None] - idx[None, :]) / self.scale)
        return S


@dataclass(frozen=True)
class Identity:
    def matrix(self, p):
        return np.eye(p)


@dataclass(frozen=True)
class CustomCov:
    cov: np.ndarray = field(compare=False)

    def matrix(self, p):
        return np.asarray(self.cov, dtype=float)


def symmetric_sqrt(S):
    w, V = np.linalg.eigh(0.5 * (S + S.T))
    w = np.clip(w, 0.0, None)
    return (V * np.sqrt(w)) @ V.T


# --------------------------------------------------------------------------
# scenarios


@dataclass(frozen=True)
class ScenarioSpec:
    id: str
    n: int
    p: int
    beta_star: np.ndarray = field(compare=False)
    sigma: float
    covariance: object
    key: int = 0  # separates the random streams of different scenarios

    def cov_matrix(self):
        return self.covariance.matrix(self.p)


def scenario(name: str) -> ScenarioSpec:
    """Built-in examples ``a``-``d``."""
    name = name.lower()
    if name == "a":
        beta = np.array([3, 1.5, 0, 0, 2, 0, 0, 0], dtype=float)
        return ScenarioSpec("a", 20, 8, beta, 3.0, Toeplitz(0.5), key=1)
    if name == "b":
        return ScenarioSpec("b", 50, 8, np.full(8, 0.85), 3.0, Toeplitz(0.5), key=2)
    if name == "c":
        beta = np.zeros(40)
        beta[:15] = 3.0
        groups = (tuple(range(0, 5)), tuple(range(5, 10)), tuple(range(10, 15)))
        return ScenarioSpec("c", 50, 40, beta, 15.0, LatentGroups(groups, 0.01), key=3)
    if name == "d":
        j = np.arange(1, 31)
        beta = np.zeros(30)
        beta[:10] = 3 - 0.1 * j[:10]
        beta[19:25] = -5 + 0.3 * j[19:25]
        return ScenarioSpec("d", 50, 30, beta, 9.0, BlockExp(10, 25, 2.0), key=4)
    raise ValueError(f"unknown scenario {name!r}")


@dataclass(frozen=True)
class SimDraw:
    X: np.ndarray
    Y: np.ndarray
    X_test: np.ndarray
    Y_test: np.ndarray
    oracle: OracleModel


def generate(spec: ScenarioSpec, rng) -> SimDraw:
    """Training and same-sized test set from the scenario's linear model."""
    rng = np.random.default_rng(rng)
    root = symmetric_sqrt(spec.cov_matrix())

    def draw():
        X = rng.standard_normal((spec.n, spec.p)) @ root
        Y = X @ spec.beta_star + spec.sigma * rng.standard_normal(spec.n)
        return X, Y

    X, Y = draw()
    X_test, Y_test = draw()
    return SimDraw(X, Y, X_test, Y_test, OracleModel(spec.beta_star, spec.sigma))


def rep_rng(master_seed: int, spec: ScenarioSpec, r: int):
    """Independent stream per (scenario, replication), free of execution order."""
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(spec.key, r)))


# --------------------------------------------------------------------------
# metrics


def snr_metric(selected, support) -> tuple[float, bool]:
    """Relevant-selected over noise-selected; a zero denominator is clamped to 1.

    Returns the ratio and whether clamping happened.
    """
    selected, support = set(selected), set(support)
    relevant = len(selected & support)
    noise = len(selected - support)
    if noise == 0:
        return float(relevant), True
    return relevant / noise, False


@dataclass(frozen=True)
class RepResult:
    scenario: str
    rep: int
    method: str
    selected_lambda: float
    selected_mu: float
    bic_error: float
    test_error: float
    nonzero_count: int
    snr: float
    snr_clamped: bool
    selected_set: tuple


def run_replication(spec: ScenarioSpec, r: int, methods, mu_grid, master_seed) -> list:
    draw = generate(spec, rep_rng(master_seed, spec, r))
    data = standardize(draw.X, draw.Y)
    support = draw.oracle.support
    out = []
    for m in methods:
        m = Method(m)
        res = select_model(data, mu_grid, m, spec.sigma**2)
        beta = res.best_fit.beta
        pred = data.predict(beta, draw.X_test)
        selected = res.best_fit.active_set
        snr, clamped = snr_metric(selected, support)
        out.append(RepResult(
            scenario=spec.id, rep=r, method=m.value,
            selected_lambda=res.best_lambda, selected_mu=res.best_mu,
            bic_error=res.bic_value,
            test_error=float(np.mean((draw.Y_test - pred) ** 2)),
            nonzero_count=len(selected), snr=snr, snr_clamped=clamped,
            selected_set=selected,
        ))
    return out


def _run_task(args):
    return run_replication(*args)


# --------------------------------------------------------------------------
# aggregation


@dataclass(frozen=True)
class MethodSummary:
    scenario: str
    method: str
    R: int
    nonzero_mean: float
    nonzero_se: float
    snr_mean: float
    snr_se: float
    snr_clamp_rate: float
    selection_counts: np.ndarray = field(compare=False)
    bic_errors: np.ndarray = field(compare=False)
    test_errors: np.ndarray = field(compare=False)


@dataclass(frozen=True)
class BenchSummary:
    results: tuple  # all RepResult, ordered by (scenario, rep, method)
    summaries: dict = field(compare=False)  # (scenario, method) -> MethodSummary

    def get(self, scenario_id, method) -> MethodSummary:
        return self.summaries[(scenario_id, Method(method).value)]


def _mean_se(x):
    x = np.asarray(x, dtype=float)
    if x.size < 2:
        return float(x.mean()), 0.0
    return float(x.mean()), float(x.std(ddof=1) / np.sqrt(x.size))


def summarize(results, p_of) -> BenchSummary:
    groups = {}
    for rr in results:
        groups.setdefault((rr.scenario, rr.method), []).append(rr)
    summaries = {}
    for key, rows in groups.items():
        rows.sort(key=lambda rr: rr.rep)
        counts = np.zeros(p_of[key[0]], dtype=int)
        for rr in rows:
            counts[list(rr.selected_set)] += 1
        nz_m, nz_se = _mean_se([rr.nonzero_count for rr in rows])
        snr_m, snr_se = _mean_se([rr.snr for rr in rows])
        summaries[key] = MethodSummary(
            scenario=key[0], method=key[1], R=len(rows),
            nonzero_mean=nz_m, nonzero_se=nz_se, snr_mean=snr_m, snr_se=snr_se,
            snr_clamp_rate=float(np.mean([rr.snr_clamped for rr in rows])),
            selection_counts=counts,
            bic_errors=np.array([rr.bic_error for rr in rows]),
            test_errors=np.array([rr.test_error for rr in rows]),
        )
    return BenchSummary(results=tuple(results), summaries=summaries)


def run_benchmark(scenarios, methods=BENCH_METHODS, R: int = 200, mu_grid=DEFAULT_MU_GRID,
                  master_seed: int = 0, jobs: int = 1) -> BenchSummary:
    """Run ``R`` replications of every scenario and aggregate.

    The result does not depend on ``jobs``: each replication owns its random
    stream and results are reassembled in replication order.
    """
    if R < 1:
        raise ValueError("R must be >= 1")
    specs = [scenario(s) if isinstance(s, str) else s for s in scenarios]
    methods = tuple(Method(m).value for m in methods)
    mu_grid = tuple(float(m) for m in mu_grid)
    tasks = [(spec, r, methods, mu_grid, master_seed) for spec in specs for r in range(R)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            chunks = list(ex.map(_run_task, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        chunks = [_run_task(t) for t in tasks]
    results = [rr for chunk in chunks for rr in chunk]
    return summarize(results, {spec.id: spec.p for spec in specs})


# --------------------------------------------------------------------------
# output files


def _f(x):
    return f"{x:.17g}"


def write_summary(summary: BenchSummary, out_dir, figures: bool = False) -> list:
    """Write table1/table2/bic_error/test_error/selection_freq CSV files."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    keys = sorted(summary.summaries)
    written = []

    def table(name, mean_attr, se_attr, extra=None):
        path = out / name
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["method", "scenario", "mean", "se", "R"] + ([extra] if extra else []))
            for k in keys:
                s = summary.summaries[k]
                row = [s.method, s.scenario, _f(getattr(s, mean_attr)), _f(getattr(s, se_attr)), s.R]
                if extra:
                    row.append(_f(getattr(s, extra)))
                w.writerow(row)
        written.append(path)

    table("table1.csv", "nonzero_mean", "nonzero_se")
    table("table2.csv", "snr_mean", "snr_se", extra="snr_clamp_rate")

    for name, attr in (("bic_error.csv", "bic_error"), ("test_error.csv", "test_error")):
        path = out / name
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["scenario", "method", "rep", "value"])
            for rr in summary.results:
                w.writerow([rr.scenario, rr.method, rr.rep, _f(getattr(rr, attr))])
        written.append(path)

    path = out / "selection_freq.csv"
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["scenario", "method", "covariate", "frequency"])
        for k in keys:
            s = summary.summaries[k]
            for j, cnt in enumerate(s.selection_counts, start=1):
                w.writerow([s.scenario, s.method, j, int(cnt)])
    written.append(path)

    if figures:
        written += _write_gnuplot(summary, out)
    return written


def _write_gnuplot(summary: BenchSummary, out: Path) -> list:
    """Whitespace-separated data blocks, one per scenario, for boxplots and bar charts."""
    written = []
    scenarios = sorted({k[0] for k in summary.summaries})
    for sc in scenarios:
        methods = [m.value for m in BENCH_METHODS if (sc, m.value) in summary.summaries]
        methods += sorted(m for (s, m) in summary.summaries if s == sc and m not in methods)
        for attr in ("bic_errors", "test_errors"):
            path = out / f"{attr[:-1]}_{sc}.dat"
            with open(path, "w") as fh:
                fh.write("# method_index method value\n")
                for i, m in enumerate(methods, start=1):
                    for v in getattr(summary.summaries[(sc, m)], attr):
                        fh.write(f"{i} {m} {_f(v)}\n")
            written.append(path)
        path = out / f"selection_freq_{sc}.dat"
        with open(path, "w") as fh:
            fh.write("# covariate " + " ".join(methods) + "\n")
            counts = [summary.summaries[(sc, m)].selection_counts for m in methods]
            for j in range(len(counts[0])):
                fh.write(f"{j + 1} " + " ".join(str(int(c[j])) for c in counts) + "\n")
        written.append(path)
    return written


def default_out_dir() -> str:
    return os.environ.get("SMOOTHLASSO_OUT", "results")
