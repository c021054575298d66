"""Monte Carlo checks of the exact identities and limit laws.

Each check returns CheckResult records with a z-score against the exact
value (one-sample) or against an independent simulation (two-sample,
combined standard error). Checks are deterministic given the seed.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import asdict, dataclass, field, replace
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy import stats as sps

from . import __version__
from .dual import DisasterBdParams, gf_from_pdmp, z_samples
from .graph import Graph, builtin_graph
from .observables import binomial_moments, degree_stats, generating_function
from .sim import SimParams, iter_replicas
from .theory import (
    Regime,
    beta_k,
    classify_regime,
    ef0_series,
    expected_degree_limit,
    expected_degree_t,
    fplus_exponent,
    gamma_ratio,
    graph_size_pmf,
    martingale_exponent,
    z_survival_series,
)

Z_THRESHOLD = 4.0
MIN_REPLICAS = 10_000


class ConfigurationError(ValueError):
    """Check requested outside the setting where its statement holds."""


class InsufficientSignalError(ValueError):
    """Too little usable data to fit or compare."""


@dataclass
class CheckResult:
    name: str
    statistic: float
    expected: float
    stderr: float
    z_score: float
    passed: bool
    n_replicas: int
    runtime: float = 0.0
    hard: bool = True
    detail: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        return {k: _jsonable(v) for k, v in d.items()}


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, np.generic):
        v = v.item()
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    return v


def z_score(diff: float, se: float) -> float:
    """diff / se, with 0/0 read as agreement and x/0 as infinite disagreement."""
    if se > 0:
        return diff / se
    return 0.0 if abs(diff) <= 1e-12 else math.copysign(math.inf, diff)


def _mean_se(values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = values.shape[0]
    mean = values.mean(axis=0)
    se = values.std(axis=0, ddof=1) / math.sqrt(n) if n > 1 else np.zeros_like(mean)
    return mean, se


class _Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


def _with_times(params: SimParams, times: Sequence[float], clique_ks=()) -> SimParams:
    times = tuple(sorted({float(t) for t in times}))
    return replace(params, horizon=times[-1], checkpoints=times,
                   clique_ks=tuple(sorted(set(params.clique_ks) | set(clique_ks))))


def graph_table(params: SimParams, g0: Graph, n: int, stat: Callable, workers: int = 1) -> np.ndarray:
    """stat(snapshot) for every replicate and checkpoint, shape (n, n_checkpoints, ...)."""
    rows = []
    for tr in iter_replicas(params, g0, n, workers=workers):
        if tr.truncated:
            raise ConfigurationError(f"replicate {tr.replicate} hit max_vertices; shorten the horizon")
        rows.append([stat(s) for s in tr.snapshots])
    return np.asarray(rows, dtype=float)


def _initial_law(g0: Graph) -> np.ndarray:
    return degree_stats(g0).f


# -- duality -------------------------------------------------------------------

def z_pmf_mixture(params: DisasterBdParams, law: np.ndarray, times: Sequence[float], n: int,
                  k_max: int, seed: int = 0) -> tuple[np.ndarray, np.ndarray, int]:
    """P(Z_t = k), k <= k_max, with Z_0 drawn from `law`, estimated by stratifying on Z_0.

    Each initial size j with law[j] > 0 gets its own paths; the strata are
    recombined with weights law[j]. At t = 0 the estimate is exact.
    Returns (pmf, stderr, total paths), arrays of shape (len(times), k_max + 1).
    """
    times = np.asarray(times, dtype=float)
    pmf = np.zeros((times.size, k_max + 1))
    var = np.zeros_like(pmf)
    first = 0
    total = 0
    for j, w in enumerate(law):
        if w <= 0:
            continue
        n_j = max(1000, int(round(n * w)))
        z, _ = z_samples(params, j, times, n_j, seed=seed, first=first)
        first += n_j
        total += n_j
        for k in range(k_max + 1):
            hit = (z == k).mean(axis=0)
            pmf[:, k] += w * hit
            var[:, k] += w * w * hit * (1.0 - hit) / max(n_j - 1, 1)
    return pmf, np.sqrt(var), total


def check_duality(params: SimParams, g0: Graph, t, n: int, k_max: int = 5,
                  threshold: float = Z_THRESHOLD, workers: int = 1) -> list[CheckResult]:
    """Mean degree distribution of the graph against the law of Z(p, delta, p), cell by cell."""
    if n < MIN_REPLICAS:
        raise ConfigurationError(f"duality check needs n >= {MIN_REPLICAS}, got {n}")
    times = sorted(np.atleast_1d(np.asarray(t, dtype=float)).tolist())
    with _Timer() as clock:
        sp = _with_times(params, times)

        def cells(s):
            h = np.zeros(k_max + 1)
            m = min(k_max + 1, s.histogram.size)
            h[:m] = s.histogram[:m]
            return h / s.n_vertices

        graph = graph_table(sp, g0, n, cells, workers)
        g_mean, g_se = _mean_se(graph)
        zp = DisasterBdParams(params.p, params.delta, params.p) if params.p > 0 else None
        if zp is None:
            raise ConfigurationError("the dual birth-death process needs p > 0")
        z_mean, z_se, nz = z_pmf_mixture(zp, _initial_law(g0), times, n, k_max, params.seed)
    out = []
    for i, tt in enumerate(times):
        for k in range(k_max + 1):
            se = math.hypot(g_se[i, k], z_se[i, k])
            z = z_score(g_mean[i, k] - z_mean[i, k], se)
            out.append(CheckResult(
                f"duality t={tt:g} k={k}", float(g_mean[i, k]), float(z_mean[i, k]), se, z,
                abs(z) <= threshold, n, clock.elapsed / (len(times) * (k_max + 1)),
                detail={"z_paths": nz, "graph_se": float(g_se[i, k]), "z_se": float(z_se[i, k])},
            ))
    return out


def check_gf_duality(params: SimParams, g0: Graph, t, xs: Sequence[float], n: int,
                     threshold: float = Z_THRESHOLD, workers: int = 1) -> list[CheckResult]:
    """E[H_x(t)] from the graph against sum_k F_k(0) E_x[(1 - X_t)^k] from the PDMP."""
    if n < MIN_REPLICAS:
        raise ConfigurationError(f"generating-function duality needs n >= {MIN_REPLICAS}, got {n}")
    times = sorted(np.atleast_1d(np.asarray(t, dtype=float)).tolist())
    xs = [float(x) for x in xs]
    f0 = _initial_law(g0)
    with _Timer() as clock:
        sp = _with_times(params, times)
        graph = graph_table(sp, g0, n, lambda s: [generating_function(degree_stats(s), x) for x in xs],
                            workers)
        g_mean, g_se = _mean_se(graph)
        pd_mean = np.zeros((len(times), len(xs)))
        pd_se = np.zeros_like(pd_mean)
        for j, x in enumerate(xs):
            pd_mean[:, j], pd_se[:, j] = gf_from_pdmp(params.p, params.delta, x, times, f0, n,
                                                      seed=params.seed)
    out = []
    for i, tt in enumerate(times):
        for j, x in enumerate(xs):
            se = math.hypot(g_se[i, j], pd_se[i, j])
            z = z_score(g_mean[i, j] - pd_mean[i, j], se)
            out.append(CheckResult(
                f"gf-duality t={tt:g} x={x:g}", float(g_mean[i, j]), float(pd_mean[i, j]), se, z,
                abs(z) <= threshold, n, clock.elapsed / (len(times) * len(xs)),
            ))
    return out


# -- martingales ---------------------------------------------------------------

MARTINGALE_KINDS = ("B", "C", "D", "size")


def _compensated(kind: str, params: SimParams, k: int, i: int, r: float):
    lam = martingale_exponent(kind, params.p, params.delta, k=k, r=r)
    if kind == "B":
        return lambda s: math.exp(-lam * s.t) * float(np.dot(np.arange(s.histogram.size), s.histogram)) / s.n_vertices
    if kind == "C" and k == 2:
        return lambda s: math.exp(-lam * s.t) * s.n_edges / s.n_vertices
    if kind == "C":
        return lambda s: math.exp(-lam * s.t) * s.cliques[k] / s.n_vertices
    if kind == "D":
        return lambda s: math.exp(-lam * s.t) * float(s.initial_degrees[i - 1]) / s.n_vertices
    return lambda s: math.exp(-lam * s.t) * gamma_ratio(s.n_vertices + 1, r)


def check_martingale(kind: str, params: SimParams, g0: Graph, times: Sequence[float], n: int,
                     k: int = 1, i: int = 1, r: float = 1.0, threshold: float = Z_THRESHOLD,
                     workers: int = 1) -> CheckResult:
    """Constancy of the mean of a compensated statistic over `times`.

    kind "B": e^{t g(1)} B_1; "C": e^{-t(k p^{k-1} - 1 - delta C(k,2))} C_k/|V|;
    "D": e^{-t(p - delta - 1)} D_i/|V|; "size": e^{-t r} Gamma(|V|+1+r)/Gamma(|V|+1).
    Every pair of times is compared through the per-replicate difference,
    which accounts for the correlation along a path.
    """
    if kind not in MARTINGALE_KINDS:
        raise ConfigurationError(f"unknown statistic kind {kind!r}; choose from {MARTINGALE_KINDS}")
    if kind == "B" and k != 1:
        raise ConfigurationError(
            "B_k for k >= 2 is not a martingale after a single exponential compensation; "
            "only B_1 (rate g(1)) is checked"
        )
    if kind == "C" and k < 2:
        raise ConfigurationError("clique size must be at least 2")
    if kind == "D" and not 1 <= i <= g0.vertex_count:
        raise ConfigurationError(f"vertex {i} is not an initial vertex")
    if 0.0 not in [float(t) for t in times]:
        raise ConfigurationError("martingale times must include 0")
    if n < MIN_REPLICAS:
        raise ConfigurationError(f"martingale check needs n >= {MIN_REPLICAS}, got {n}")
    ks = (k,) if kind == "C" and k > 2 else ()
    with _Timer() as clock:
        sp = _with_times(params, times, ks)
        stat = _compensated(kind, sp, k, i, r)
        values = graph_table(sp, g0, n, stat, workers)
    means, ses = _mean_se(values)
    pairs = []
    for a in range(values.shape[1]):
        for b in range(a + 1, values.shape[1]):
            diff = values[:, b] - values[:, a]
            se = float(diff.std(ddof=1) / math.sqrt(n))
            pairs.append((a, b, z_score(float(diff.mean()), se), se))
    a, b, z, se = max(pairs, key=lambda row: abs(row[2]))
    label = {"B": "B_1", "C": f"C_{k}/|V|", "D": f"D_{i}/|V|", "size": f"size r={r:g}"}[kind]
    return CheckResult(
        f"martingale {label}", float(means[b]), float(means[a]), se, z, abs(z) <= threshold, n,
        clock.elapsed,
        detail={"times": list(sp.checkpoints), "means": means.tolist(), "stderr": ses.tolist(),
                "pairs": [{"t0": sp.checkpoints[x], "t1": sp.checkpoints[y], "z": zz}
                          for x, y, zz, _ in pairs]},
    )


# -- exact laws ----------------------------------------------------------------

def check_degree_expectation(params: SimParams, g0: Graph, i: int, times: Sequence[float], n: int,
                             threshold: float = Z_THRESHOLD, workers: int = 1) -> list[CheckResult]:
    """MC mean of e^{-t(p-delta)} D_i(t) against its exact value, and the limit at the last time."""
    if not 1 <= i <= g0.vertex_count:
        raise ConfigurationError(f"vertex {i} is not an initial vertex")
    n0 = g0.vertex_count
    d0 = g0.degree(i)
    rate = params.p - params.delta
    with _Timer() as clock:
        sp = _with_times(params, times)
        values = graph_table(sp, g0, n, lambda s: math.exp(-rate * s.t) * float(s.initial_degrees[i - 1]),
                             workers)
    means, ses = _mean_se(values)
    out = []
    per = clock.elapsed / (len(sp.checkpoints) + 1)
    for j, t in enumerate(sp.checkpoints):
        expected = expected_degree_t(d0, params.p, params.delta, n0, t)
        z = z_score(float(means[j]) - expected, float(ses[j]))
        out.append(CheckResult(f"degree-mean D_{i} t={t:g}", float(means[j]), expected, float(ses[j]),
                               z, abs(z) <= threshold, n, per))
    limit = expected_degree_limit(d0, params.p, n0)
    z = z_score(float(means[-1]) - limit, float(ses[-1]))
    out.append(CheckResult(f"degree-limit D_{i} t={sp.checkpoints[-1]:g}", float(means[-1]), limit,
                           float(ses[-1]), z, abs(z) <= threshold, n, per))
    return out


def check_graph_size_law(params: SimParams, g0: Graph, t: float, n: int,
                         probes: Sequence[int] | None = None,
                         threshold: float = Z_THRESHOLD, workers: int = 1) -> CheckResult:
    """Empirical pmf of |V_t| + 1 against the negative binomial law at probe points.

    The standard error of each probe uses the exact probability. The
    distance of e^{-t}|V_t| to Gamma(|V_0|+1, 1) is reported as a diagnostic.
    """
    if t < 0:
        raise ConfigurationError("t must be nonnegative")
    n0 = g0.vertex_count
    r = n0 + 1
    probes = list(probes) if probes is not None else list(range(r, r + 5))
    with _Timer() as clock:
        sp = _with_times(params, [t])
        sizes = graph_table(sp, g0, n, lambda s: s.n_vertices + 1, workers)[:, 0]
    rows = []
    for m in probes:
        expected = graph_size_pmf(n0, t, m)
        est = float((sizes == m).mean())
        se = math.sqrt(expected * (1.0 - expected) / n)
        rows.append({"m": m, "estimate": est, "expected": expected, "stderr": se,
                     "z": z_score(est - expected, se)})
    worst = max(rows, key=lambda row: abs(row["z"]))
    ks = sps.kstest(math.exp(-t) * (sizes - 1), sps.gamma(a=r).cdf) if t > 0 else None
    return CheckResult(
        f"graph-size law t={t:g}", worst["estimate"], worst["expected"], worst["stderr"], worst["z"],
        all(abs(row["z"]) <= threshold for row in rows), n, clock.elapsed,
        detail={"probes": rows, "gamma_limit_ks": ks.statistic if ks is not None else None},
    )


def check_ef0(params: SimParams, g0: Graph, horizon: float, n: int, slack: float = 0.02,
              z_cap: int = 1000, threshold: float = Z_THRESHOLD) -> CheckResult:
    """Extinction frequency of Z(p, delta, p) by `horizon`, Z_0 ~ F(0), against the E[F_0] series.

    Paths reaching z_cap are counted as surviving; from that size the
    chance of later extinction is negligible (see the decision notes).
    """
    rep = classify_regime(params.p, params.delta)
    if rep.regime is not Regime.SUPERCRITICAL:
        raise ConfigurationError(f"E[F_0] series needs the supercritical regime, got {rep.regime.value}")
    b0 = binomial_moments(degree_stats(g0), max(1, degree_stats(g0).max_degree))
    expected = ef0_series(params.p, params.delta, b0)
    with _Timer() as clock:
        zp = DisasterBdParams(params.p, params.delta, params.p)
        z, capped = z_samples(zp, _initial_law(g0), [horizon], n, seed=params.seed, z_cap=z_cap)
    extinct = (z[:, 0] == 0).astype(float)
    est = float(extinct.mean())
    se = float(extinct.std(ddof=1) / math.sqrt(n))
    z_val = z_score(est - expected, se)
    ok = abs(est - expected) <= max(threshold * se, slack)
    return CheckResult(f"E[F_0] extinction t={horizon:g}", est, expected, se, z_val, ok, n, clock.elapsed,
                       detail={"slack": slack, "capped": int(capped.sum()), "z_cap": z_cap})


def check_series_consistency(p: float, delta: float, b0: Sequence[float], f0: Sequence[float],
                             tol: float = 1e-12) -> CheckResult:
    """ef0_series against 1 - sum_k F_k(0) P_k(survival): two routes to the same probability."""
    with _Timer() as clock:
        direct = ef0_series(p, delta, b0)
        via_z = 1.0 - math.fsum(float(w) * z_survival_series(p, delta, p, k) for k, w in enumerate(f0) if w)
    diff = direct - via_z
    return CheckResult("E[F_0] series consistency", direct, via_z, 0.0, z_score(diff, 0.0),
                       abs(diff) <= tol, 0, clock.elapsed, detail={"abs_error": abs(diff), "tol": tol})


# -- rates ---------------------------------------------------------------------

def fit_log_slope(series: Iterable[tuple[float, float, float]],
                  window: tuple[float, float]) -> tuple[float, float, int]:
    """Weighted least-squares slope of log(mean) against t inside `window`.

    Weights are (mean / stderr)^2, the delta-method precision of log(mean);
    with any zero stderr all points are weighted equally.
    Returns (slope, slope stderr, points used).
    """
    lo, hi = window
    pts = [(float(t), float(m), float(s)) for t, m, s in series if lo <= t <= hi]
    if len(pts) < 3:
        raise InsufficientSignalError(f"need at least 3 points in [{lo}, {hi}], got {len(pts)}")
    if any(m <= 0 for _, m, _ in pts):
        raise InsufficientSignalError("nonpositive mean in the fit window")
    t = np.array([p[0] for p in pts])
    y = np.log([p[1] for p in pts])
    se = np.array([p[2] for p in pts])
    w = (np.array([p[1] for p in pts]) / se) ** 2 if np.all(se > 0) else np.ones_like(t)
    tw = np.average(t, weights=w)
    yw = np.average(y, weights=w)
    sxx = float(np.sum(w * (t - tw) ** 2))
    slope = float(np.sum(w * (t - tw) * (y - yw)) / sxx)
    if np.all(se > 0):
        slope_se = math.sqrt(1.0 / sxx)
    else:
        resid = y - (yw + slope * (t - tw))
        slope_se = math.sqrt(float(np.sum(resid**2)) / max(len(t) - 2, 1) / sxx)
    return slope, slope_se, len(pts)


def check_rate(series, expected_slope: float, window: tuple[float, float], rel_tol: float = 0.10,
               name: str = "rate") -> CheckResult:
    """Pass iff the fitted log-slope is within rel_tol of expected_slope (relative)."""
    with _Timer() as clock:
        slope, slope_se, used = fit_log_slope(series, window)
    rel = abs(slope - expected_slope) / abs(expected_slope) if expected_slope else abs(slope)
    return CheckResult(name, slope, expected_slope, slope_se, z_score(slope - expected_slope, slope_se),
                       rel <= rel_tol, used, clock.elapsed,
                       detail={"window": list(window), "rel_error": rel, "rel_tol": rel_tol})


def z_survival_series_mc(p: float, delta: float, z0: int, times: Sequence[float], n: int,
                         seed: int = 0) -> list[tuple[float, float, float]]:
    """(t, P(Z_t > 0), stderr) for Z(p, delta, p) from z0."""
    z, _ = z_samples(DisasterBdParams(p, delta, p), z0, times, n, seed=seed)
    alive = (z > 0).mean(axis=0)
    se = np.sqrt(alive * (1.0 - alive) / max(n - 1, 1))
    return [(float(t), float(a), float(s)) for t, a, s in zip(times, alive, se)]


def check_fplus_rate(p: float, delta: float, window: tuple[float, float], n: int, seed: int = 0,
                     z0: int = 1, rel_tol: float = 0.10, points: int = 9) -> CheckResult:
    """Decay rate of P(Z_t > 0), the dual of E[F_+(t)], against fplus_exponent."""
    rate = fplus_exponent(p, delta)
    if rate is None:
        raise ConfigurationError("F_+ does not decay in the supercritical regime")
    times = np.linspace(window[0], window[1], points)
    with _Timer() as clock:
        series = z_survival_series_mc(p, delta, z0, times, n, seed)
    res = check_rate(series, -rate, window, rel_tol, f"F_+ decay p={p:g} delta={delta:g}")
    res.n_replicas = n
    res.runtime = clock.elapsed
    res.detail["series"] = series
    return res


def check_b1_rate(params: SimParams, g0: Graph, window: tuple[float, float], n: int,
                  rel_tol: float = 0.15, points: int = 4, workers: int = 1) -> CheckResult:
    """Growth rate of E[B_1(t)] from graph trajectories against -beta_1 = -g(1)."""
    times = np.linspace(window[0], window[1], points)
    with _Timer() as clock:
        sp = _with_times(params, times)
        values = graph_table(sp, g0, n, lambda s: 2.0 * s.n_edges / s.n_vertices, workers)
    means, ses = _mean_se(values)
    series = list(zip(sp.checkpoints, means.tolist(), ses.tolist()))
    res = check_rate(series, -beta_k(params.p, params.delta, 1), window, rel_tol,
                     f"B_1 rate p={params.p:g} delta={params.delta:g}")
    res.n_replicas = n
    res.runtime = clock.elapsed
    return res


# -- extinction ----------------------------------------------------------------

def check_extinction(params: SimParams, g0: Graph, k, horizon: float, n: int,
                     bound: float = 0.99, workers: int = 1) -> CheckResult:
    """Fraction of runs in which the statistic is 0 at `horizon` (a soft check).

    k >= 2 selects the k-clique count, needing delta >= 2 p^{k-1}/(k-1);
    k = "D" selects all initial degrees, needing delta >= p. Both
    statistics are absorbed at 0, so "0 at the horizon" means "hit 0 by it".
    """
    if k == "D":
        if not params.delta >= params.p:
            raise ConfigurationError(f"initial degrees die out only for delta >= p, got p={params.p}, "
                                     f"delta={params.delta}")
        label = "initial degrees"
        stat = lambda s: float(np.all(s.initial_degrees == 0))  # noqa: E731
        ks = ()
    else:
        k = int(k)
        if k < 2:
            raise ConfigurationError("clique size must be at least 2")
        if not params.delta >= 2.0 * params.p ** (k - 1) / (k - 1):
            raise ConfigurationError(f"{k}-cliques die out only for delta >= 2 p^(k-1)/(k-1)")
        label = f"C_{k}"
        if k == 2:
            stat = lambda s: float(s.n_edges == 0)  # noqa: E731
            ks = ()
        else:
            stat = lambda s: float(s.cliques[k] == 0)  # noqa: E731
            ks = (k,)
    with _Timer() as clock:
        sp = _with_times(params, [horizon], ks)
        hit = graph_table(sp, g0, n, stat, workers)[:, 0]
    frac = float(hit.mean())
    se = float(hit.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    return CheckResult(f"extinction {label} t={horizon:g}", frac, bound, se, z_score(frac - bound, se),
                       frac >= bound, n, clock.elapsed, hard=False, detail={"bound": bound})


# -- suites --------------------------------------------------------------------

SUITES = ("duality", "martingales", "rates", "laws", "extinction")
SCALES = {"smoke": 0.1, "default": 1.0, "deep": 10.0}


def _n(base: int, scale: float) -> int:
    return max(1, int(round(base * scale)))


def suite_checks(suite: str, seed: int, scale: float, workers: int = 1) -> list[Callable[[], list[CheckResult]]]:
    """Deferred checks of one suite; calling each returns its CheckResult list."""
    edge = builtin_graph("edge")
    path3 = builtin_graph("path3")
    n_mc = max(MIN_REPLICAS, _n(100_000, scale))

    def sp(p, delta):
        return SimParams(p=p, delta=delta, seed=seed)

    if suite == "duality":
        n_dual = max(MIN_REPLICAS, _n(200_000, scale))
        return [
            lambda: check_duality(sp(0.5, 0.2), edge, [1.0, 2.0], n_dual, workers=workers),
            lambda: check_gf_duality(sp(0.5, 0.2), edge, [1.0, 2.0], [0.25, 0.5, 1.0], n_dual,
                                     workers=workers),
        ]
    if suite == "martingales":
        return [
            lambda: [check_martingale("B", sp(0.5, 0.2), edge, [0, 1, 2], n_mc, workers=workers)],
            lambda: [check_martingale("C", sp(0.5, 0.3), edge, [0, 1, 2], n_mc, k=2, workers=workers)],
            lambda: [check_martingale("D", sp(0.6, 0.2), path3, [0, 1, 2], n_mc, i=1, workers=workers)],
            lambda: [check_martingale("size", sp(0.5, 0.2), edge, [0, 1, 2, 4], n_mc, r=1.0,
                                      workers=workers)],
        ]
    if suite == "rates":
        return [
            lambda: [check_fplus_rate(0.3, 0.5, (4.0, 8.0), _n(1_000_000, scale), seed=seed)],
            lambda: [check_b1_rate(sp(0.3, 0.5), edge, (0.0, 3.0), _n(100_000, scale), workers=workers)],
        ]
    if suite == "laws":
        return [
            lambda: check_degree_expectation(sp(0.6, 0.2), path3, 1, [0.5, 1, 2, 6], n_mc, workers=workers),
            lambda: [check_graph_size_law(sp(0.5, 0.2), edge, 1.0, n_mc, workers=workers)],
            lambda: [check_ef0(sp(0.8, 0.05), edge, 30.0, _n(100_000, scale))],
            lambda: [check_series_consistency(0.8, 0.05, [1.0], [0.0, 1.0])],
        ]
    if suite == "extinction":
        n_ext = _n(1000, scale)
        return [
            lambda: [check_extinction(sp(0.5, 2.5), edge, 2, 10.0, n_ext, workers=workers)],
            lambda: [check_extinction(sp(0.3, 0.5), edge, "D", 10.0, n_ext, workers=workers)],
        ]
    raise ConfigurationError(f"unknown suite {suite!r}; choose from {SUITES + ('all',)}")


def run_suite(suite: str, seed: int = 0, scale: str | float = "default", workers: int = 1,
              sink: Callable[[CheckResult], None] | None = None) -> list[CheckResult]:
    """Run one suite (or "all"); results are passed to `sink` as they complete."""
    factor = SCALES[scale] if isinstance(scale, str) else float(scale)
    names = SUITES if suite == "all" else (suite,)
    results = []
    for name in names:
        for check in suite_checks(name, seed, factor, workers):
            for res in check():
                res.detail.setdefault("suite", name)
                results.append(res)
                if sink is not None:
                    sink(res)
    return results


def all_hard_passed(results: Iterable[CheckResult]) -> bool:
    return all(r.passed for r in results if r.hard)


def metadata_record(**config) -> dict:
    return {"type": "metadata", "version": __version__, **config}


def dumps(record: dict) -> str:
    return json.dumps(record, sort_keys=True)

