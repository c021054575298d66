"""Closed-form quantities: phase classification, decay exponents and exact expectations."""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np
from scipy.linalg import expm
from scipy.optimize import bisect


class DomainError(ValueError):
    """Parameters outside the range where a formula holds."""


class Regime(str, enum.Enum):
    FAST_ISOLATION = "FAST_ISOLATION"
    SLOW_ISOLATION = "SLOW_ISOLATION"
    SUPERCRITICAL = "SUPERCRITICAL"


def _check_p(p):
    if not 0.0 < p < 1.0:
        raise DomainError(f"p must lie in (0, 1), got {p}")


def _check_delta(delta):
    if not delta >= 0.0:
        raise DomainError(f"delta must be nonnegative, got {delta}")


def g_func(p: float, delta: float, x: float) -> float:
    """g(x) = 1 + delta x - p x - p**x."""
    _check_p(p)
    if x < 0:
        raise DomainError(f"g is defined on [0, inf), got x={x}")
    return 1.0 + delta * x - p * x - p**x


def g_prime(p: float, delta: float, x: float) -> float:
    return delta - p + math.log(1.0 / p) * p**x


def gamma(p: float, delta: float) -> float:
    """log(1/p) / (p - delta)."""
    _check_p(p)
    if p == delta:
        raise DomainError("gamma is undefined for p == delta")
    return math.log(1.0 / p) / (p - delta)


def thresholds(p: float) -> tuple[float, float]:
    """(p - p log(1/p), p - log(1/p)): the fast/slow and slow/supercritical boundaries in delta."""
    _check_p(p)
    lp = math.log(1.0 / p)
    return p - p * lp, p - lp


@functools.cache
def p_star() -> float:
    """Root of p e^p = 1, by bisection to 1e-12."""
    return bisect(lambda p: p * math.exp(p) - 1.0, 0.5, 0.6, xtol=1e-15, rtol=4 * np.finfo(float).eps)


@dataclass(frozen=True)
class RegimeReport:
    p: float
    delta: float
    regime: Regime
    gamma: float | None
    xi: float | None
    thresholds: tuple[float, float]
    g_at_1: float
    g_at_xi: float | None
    fplus_exponent: float | None
    p_star: float

    def to_dict(self) -> dict:
        d = asdict(self)
        d["regime"] = self.regime.value
        d["thresholds"] = list(self.thresholds)
        return d


def classify_regime(p: float, delta: float) -> RegimeReport:
    _check_p(p)
    _check_delta(delta)
    upper, lower = thresholds(p)
    if delta >= upper:
        regime = Regime.FAST_ISOLATION
    elif delta >= lower:
        regime = Regime.SLOW_ISOLATION
    else:
        regime = Regime.SUPERCRITICAL
    gam = gamma(p, delta) if p != delta else None
    xi = None
    if gam is not None and lower <= delta < p:
        xi = math.log(gam) / math.log(1.0 / p)
    return RegimeReport(
        p=p,
        delta=delta,
        regime=regime,
        gamma=gam,
        xi=xi,
        thresholds=(upper, lower),
        g_at_1=g_func(p, delta, 1.0),
        g_at_xi=g_func(p, delta, xi) if xi is not None else None,
        fplus_exponent=fplus_exponent(p, delta),
        p_star=p_star(),
    )


def fplus_exponent(p: float, delta: float) -> float | None:
    """Exponential decay rate of E[F_+(t)]; None in the supercritical regime."""
    _check_p(p)
    _check_delta(delta)
    upper, lower = thresholds(p)
    if delta >= upper:
        return 1.0 + delta - 2.0 * p
    if delta >= lower:
        gam = gamma(p, delta)
        return 1.0 - (1.0 + math.log(gam)) / gam
    return None


def beta_k(p: float, delta: float, k: int) -> float:
    """Growth exponent of binomial moments: e^{t beta_k} B_k(t) converges."""
    if k < 1:
        raise DomainError("k must be at least 1")
    return min(g_func(p, delta, 1.0), g_func(p, delta, float(k)))


def clique_rate(p: float, delta: float, k: int) -> float:
    """Exponential rate of C_k(t): k p^{k-1} - delta C(k, 2)."""
    if k < 2:
        raise DomainError("clique size must be at least 2")
    return k * p ** (k - 1) - delta * k * (k - 1) / 2.0


def clique_extinct(p: float, delta: float, k: int) -> bool:
    """True when k-cliques die out in finite time: delta >= 2 p^{k-1} / (k-1)."""
    if k < 2:
        raise DomainError("clique size must be at least 2")
    return delta >= 2.0 * p ** (k - 1) / (k - 1)


def cesaro_ck(p: float, delta: float, k: int) -> float:
    """Cesaro limit of E[X^{k+1}]/E[X^k]: (log(1/(gamma p^k)) + gamma p^k - 1) / (k gamma p)."""
    if k < 1:
        raise DomainError("k must be at least 1")
    gam = gamma(p, delta)
    if gam <= 0:
        raise DomainError(f"c_k needs p > delta (gamma > 0), got p={p}, delta={delta}")
    u = gam * p**k
    # log(1/u) + u - 1 evaluated as u - 1 - log u, with log1p near u = 1
    w = u - 1.0
    return (w - math.log1p(w)) / (k * gam * p)


def _product_terms(p: float, delta: float, n: int) -> list[float]:
    """prod_{l=1}^{k-1} (1 - delta/p - (1 - p^l)/(p l)) for k = 1..n."""
    out, acc = [], 1.0
    for k in range(1, n + 1):
        out.append(acc)
        acc *= 1.0 - delta / p - (1.0 - p**k) / (p * k)
    return out


def ef0_series(p: float, delta: float, b0: Sequence[float]) -> float:
    """Limit E[F_0] in the supercritical regime from the initial binomial moments.

    b0[0] is B_1(0), b0[1] is B_2(0), and so on; the series stops where b0 does.
    """
    _check_p(p)
    _check_delta(delta)
    if not delta < p - math.log(1.0 / p):
        raise DomainError(f"E[F_0] series needs the supercritical regime, got p={p}, delta={delta}")
    prods = _product_terms(p, delta, len(b0))
    s = math.fsum(float(b) * (-1) ** k * prods[k] for k, b in enumerate(b0))
    return 1.0 - (1.0 - delta / p - math.log(1.0 / p) / p) * s


def z_survival_series(b: float, d: float, p: float, k: int) -> float:
    """P_k(Z_t -> infinity) for the birth-death process with binomial disasters."""
    _check_p(p)
    lp = math.log(1.0 / p)
    if not b - d > lp:
        raise DomainError(f"survival series needs b - d > log(1/p), got b={b}, d={d}, p={p}")
    if k < 0:
        raise DomainError("initial size must be nonnegative")
    terms = []
    acc = 1.0
    for ell in range(1, k + 1):
        terms.append(math.comb(k, ell) * (-1) ** (ell - 1) * acc)
        acc *= 1.0 - (d * ell + (1.0 - p**ell)) / (b * ell)
    return (1.0 - (d + lp) / b) * math.fsum(terms)


def expected_degree_t(d0: int, p: float, delta: float, n0: int, t: float,
                      normalized: bool = True) -> float:
    """E[e^{-t(p-delta)} D_i(t)] = d0 (1 + (1 - e^{-t}) p / n0).

    With normalized=False the factor e^{t(p-delta)} is restored, giving E[D_i(t)].
    """
    if n0 < 1 or d0 < 0 or t < 0:
        raise DomainError("need n0 >= 1, d0 >= 0 and t >= 0")
    value = d0 * (1.0 - math.expm1(-t) * p / n0)
    return value if normalized else value * math.exp(t * (p - delta))


def expected_degree_limit(d0: int, p: float, n0: int) -> float:
    if n0 < 1 or d0 < 0:
        raise DomainError("need n0 >= 1 and d0 >= 0")
    return d0 * (1.0 + p / n0)


def gamma_ratio(n: int, r: float) -> float:
    """Gamma(n + r) / Gamma(n)."""
    if n < 1:
        raise DomainError("n must be at least 1")
    if n + r <= 0:
        raise DomainError(f"Gamma(n + r) needs n + r > 0, got n={n}, r={r}")
    if float(r).is_integer() and abs(r) <= 64:
        r = int(r)
        if r >= 0:
            return float(math.prod(range(n, n + r)))
        return 1.0 / math.prod(range(n + r, n))
    return math.exp(math.lgamma(n + r) - math.lgamma(n))


def graph_size_pmf(n0: int, t: float, m: int) -> float:
    """P(|V_t| + 1 = m): negative binomial, n0 + 1 successes with success probability e^{-t}."""
    r = n0 + 1
    if m < r:
        return 0.0
    if t == 0:
        return 1.0 if m == r else 0.0
    log_q = -t
    log_fail = math.log(-math.expm1(-t))
    return math.exp(math.log(math.comb(m - 1, r - 1)) + r * log_q + (m - r) * log_fail)


def expected_binomial_moments(p: float, delta: float, b0: Sequence[float], t: float) -> np.ndarray:
    """Exact E[B_k(t)] for k = 1..len(b0).

    The means obey the triangular linear system
    d/dt E[B_k] = -g(k) E[B_k] + p (k-1) E[B_{k-1}].
    """
    _check_p(p)
    n = len(b0)
    a = np.zeros((n, n))
    for i in range(n):
        k = i + 1
        a[i, i] = -g_func(p, delta, float(k))
        if i:
            a[i, i - 1] = p * (k - 1)
    return expm(a * t) @ np.asarray(b0, dtype=float)


def martingale_exponent(kind: str, p: float, delta: float, k: int = 1, r: float = 1.0) -> float:
    """Rate lam such that e^{-lam t} * statistic has constant mean.

    kind: "B" (B_1 only), "C" (C_k/|V|), "D" (D_i/|V|), "size" (Gamma(|V|+1+r)/Gamma(|V|+1)).
    """
    if kind == "B":
        if k != 1:
            raise DomainError("only B_1 is itself a martingale after compensation")
        return -g_func(p, delta, 1.0)
    if kind == "C":
        return k * p ** (k - 1) - 1.0 - delta * k * (k - 1) / 2.0
    if kind == "D":
        return p - delta - 1.0
    if kind == "size":
        return float(r)
    raise DomainError(f"unknown statistic kind {kind!r}")


def sweep_row(p: float, delta: float, k_max: int) -> dict:
    """One grid point of the phase diagram: regime, F_+ exponent, beta_k and clique rates."""
    rep = classify_regime(p, delta)
    row = {
        "p": p,
        "delta": delta,
        "regime": rep.regime.value,
        "fplus_exponent": rep.fplus_exponent,
        "gamma": rep.gamma,
    }
    for k in range(1, k_max + 1):
        row[f"beta_{k}"] = beta_k(p, delta, k)
    for k in range(2, k_max + 1):
        row[f"clique_rate_{k}"] = clique_rate(p, delta, k)
    return row
