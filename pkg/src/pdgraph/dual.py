"""Dual processes of the degree distribution.

Z(b, d, p): birth rate b z, death rate d z, and rate-1 disasters that thin
the population to Binomial(z, p). With b = p and d = delta the law of Z_t is
the expected degree distribution of the graph.

X: piecewise-deterministic process on [0, 1] following
x' = p x (1 - x) - delta x and jumping x -> p x at rate 1. Its moments
give the expected generating function of the degree distribution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _kernels as K
from .sim import STREAM_PDMP, STREAM_Z, replicate_rng
from .theory import DomainError, thresholds


@dataclass(frozen=True)
class DisasterBdParams:
    b: float
    d: float
    p: float

    def __post_init__(self):
        if not self.b > 0:
            raise ValueError(f"birth rate must be positive, got {self.b}")
        if not self.d >= 0:
            raise ValueError(f"death rate must be nonnegative, got {self.d}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"disaster survival probability must lie in [0, 1], got {self.p}")


@dataclass(frozen=True)
class DisasterBdState:
    z: int
    clock: float = 0.0


@dataclass(frozen=True)
class PdmpState:
    x: float
    clock: float = 0.0


def z_step(state: DisasterBdState, params: DisasterBdParams,
           rng: np.random.Generator) -> DisasterBdState:
    z = state.z
    b, d = params.b, params.d
    total = (b + d) * z + 1.0
    clock = state.clock + rng.exponential(1.0 / total)
    u = rng.random() * total
    if u < b * z:
        z += 1
    elif u < (b + d) * z:
        z -= 1
    else:
        z = int(rng.binomial(z, params.p))
    return DisasterBdState(z, clock)


@dataclass
class ZLaw:
    """Empirical law of Z at each observation time.

    pmf[i, k] estimates P(Z_{times[i]} = k); the last column collects
    everything >= that index when a cap is in force.
    """

    times: np.ndarray
    pmf: np.ndarray
    stderr: np.ndarray
    survival: np.ndarray
    survival_stderr: np.ndarray
    n: int
    capped: int = 0

    def extinction(self, i: int = -1) -> tuple[float, float]:
        return 1.0 - float(self.survival[i]), float(self.survival_stderr[i])


def _initial_sampler(z0):
    if isinstance(z0, (int, np.integer)):
        if z0 < 0:
            raise ValueError("initial population must be nonnegative")
        return lambda rng: int(z0)
    law = np.asarray(z0, dtype=float)
    if law.ndim != 1 or np.any(law < 0) or not math.isclose(law.sum(), 1.0, rel_tol=1e-9):
        raise ValueError("initial law must be a probability vector over 0, 1, 2, ...")
    cdf = np.cumsum(law)
    cdf[-1] = 1.0
    return lambda rng: int(np.searchsorted(cdf, rng.random(), side="right"))


def z_samples(params: DisasterBdParams, z0, times: Sequence[float], n: int, seed: int = 0,
              first: int = 0, z_cap: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Z at `times` for replicates first..first+n-1, shape (n, len(times)), plus a capped mask.

    z0 is an initial size or a probability vector over sizes. With z_cap set,
    a path is frozen once it reaches z_cap.
    """
    times = np.asarray(times, dtype=float)
    if n < 1:
        raise ValueError("need at least one replicate")
    if np.any(times < 0) or np.any(np.diff(times) < 0):
        raise ValueError("times must be nonnegative and sorted")
    draw0 = _initial_sampler(z0)
    out = np.zeros((n, times.size), dtype=np.int64)
    capped = np.zeros(n, dtype=bool)
    cap_at = int(z_cap) if z_cap else 0
    for i in range(n):
        rng = replicate_rng(seed, first + i, STREAM_Z)
        capped[i] = K.z_path(rng, draw0(rng), params.b, params.d, params.p, times, cap_at, out[i])
    return out, capped


def z_run(params: DisasterBdParams, z0, t, n: int, seed: int = 0,
          z_cap: int | None = None) -> ZLaw:
    """Empirical law of Z_t and survival frequency over n independent paths.

    t may be a single time or a sorted sequence of observation times.
    """
    times = np.atleast_1d(np.asarray(t, dtype=float))
    samples, capped = z_samples(params, z0, times, n, seed, z_cap=z_cap)
    top = int(samples.max()) if samples.size else 0
    if z_cap:
        top = min(top, int(z_cap))
    pmf = np.zeros((times.size, top + 1))
    for i in range(times.size):
        pmf[i] = np.bincount(np.minimum(samples[:, i], top), minlength=top + 1) / n
    stderr = np.sqrt(pmf * (1.0 - pmf) / max(n - 1, 1))
    survival = (samples > 0).mean(axis=0)
    survival_stderr = np.sqrt(survival * (1.0 - survival) / max(n - 1, 1))
    return ZLaw(times, pmf, stderr, survival, survival_stderr, n, int(capped.sum()))


def pdmp_flow(p: float, delta: float, x0: float, s: float) -> float:
    """Deterministic flow of x' = p x (1 - x) - delta x, in closed form."""
    if not 0.0 <= x0 <= 1.0:
        raise ValueError(f"x0 must lie in [0, 1], got {x0}")
    if s < 0:
        raise ValueError("flow time must be nonnegative")
    return float(K.flow(float(p), float(delta), float(x0), float(s)))


def pdmp_step(state: PdmpState, p: float, delta: float, rng: np.random.Generator) -> PdmpState:
    """Flow for an Exp(1) holding time, then jump x -> p x."""
    wait = rng.exponential(1.0)
    return PdmpState(p * pdmp_flow(p, delta, state.x, wait), state.clock + wait)


def pdmp_samples(p: float, delta: float, x0: float, times: Sequence[float], n: int,
                 seed: int = 0, first: int = 0) -> np.ndarray:
    """X at `times` for n independent paths started at x0, shape (n, len(times))."""
    if not 0.0 <= x0 <= 1.0:
        raise ValueError(f"x0 must lie in [0, 1], got {x0}")
    times = np.asarray(times, dtype=float)
    if np.any(times < 0) or np.any(np.diff(times) < 0):
        raise ValueError("times must be nonnegative and sorted")
    out = np.empty((n, times.size))
    for i in range(n):
        K.pdmp_path(replicate_rng(seed, first + i, STREAM_PDMP), float(p), float(delta), float(x0), times, out[i])
    return out


def _mean_se(values: np.ndarray) -> tuple[float, float]:
    n = values.shape[0]
    mean = float(values.mean())
    se = float(values.std(ddof=1) / math.sqrt(n)) if n > 1 else float("nan")
    return mean, se


def x_moment(p: float, delta: float, x0: float, k: int, t: float, n: int,
             seed: int = 0) -> tuple[float, float]:
    """Monte Carlo E_x[X_t^k] with its standard error."""
    if k < 1 or n < 1:
        raise ValueError("need k >= 1 and n >= 1")
    x = pdmp_samples(p, delta, x0, [t], n, seed)[:, 0]
    return _mean_se(x**k)


def x_moment_grid(p: float, delta: float, x0: float, ks: Sequence[int], times: Sequence[float],
                  n: int, seed: int = 0) -> list[tuple[float, int, float, float]]:
    """Rows (t, k, estimate, stderr) from one shared set of paths."""
    x = pdmp_samples(p, delta, x0, times, n, seed)
    rows = []
    for j, t in enumerate(times):
        for k in ks:
            rows.append((float(t), int(k), *_mean_se(x[:, j] ** k)))
    return rows


def _ratio_curve(p, delta, x0, k, grid, n, seed):
    x = pdmp_samples(p, delta, x0, grid, n, seed)
    num = (x ** (k + 1)).mean(axis=0)
    den = (x**k).mean(axis=0)
    return num / den


def cesaro_ratio(p: float, delta: float, x0: float, k: int, t: float, n: int,
                 seed: int = 0, points: int = 201) -> float:
    """(1/t) * integral_0^t E_x[X^{k+1}]/E_x[X^k] ds, trapezoidal on a uniform grid."""
    grid = np.linspace(0.0, t, points)
    ratio = _ratio_curve(p, delta, x0, k, grid, n, seed)
    return float(np.trapezoid(ratio, grid) / t)


@dataclass(frozen=True)
class CEstimate:
    """c = exp(-p * integral_0^T E_1[X^2]/E_1[X] ds) and quadrature diagnostics."""

    c: float
    integral: float
    tail_contribution: float
    truncation: float
    n: int

    def scaled(self, b1_0: float) -> float:
        """B_1(0) * c, the prefactor of E[F_+(t)] e^{t(1+delta-2p)}."""
        return b1_0 * self.c


def estimate_c(p: float, delta: float, T: float = 30.0, n: int = 10_000, seed: int = 0,
               points: int = 601, x0: float = 1.0) -> CEstimate:
    """Prefactor constant of the fast-isolation regime.

    The integrand decays exponentially there, so the integral is cut at T;
    tail_contribution is the share of the last grid interval.
    """
    upper, _ = thresholds(p)
    if not delta > upper:
        raise DomainError(f"c is only available for delta > p - p log(1/p), got p={p}, delta={delta}")
    grid = np.linspace(0.0, T, points)
    ratio = _ratio_curve(p, delta, x0, 1, grid, n, seed)
    integral = float(np.trapezoid(ratio, grid))
    tail = float(0.5 * (ratio[-1] + ratio[-2]) * (grid[-1] - grid[-2]))
    return CEstimate(x0 * math.exp(-p * integral), integral, p * tail, T, n)


def ix_series(p: float, delta: float, x0: float, t: float, b0: Sequence[float], n: int,
              seed: int = 0) -> tuple[float, float]:
    """E[1 - H_x(t)] = sum_l B_l(0) (-1)^{l+1} E_x[X_t^l], estimated on shared paths."""
    x = pdmp_samples(p, delta, x0, [t], n, seed)[:, 0]
    per_path = np.zeros_like(x)
    for ell, b in enumerate(b0, start=1):
        per_path += float(b) * (-1) ** (ell + 1) * x**ell
    return _mean_se(per_path)


def gf_from_pdmp(p: float, delta: float, x0: float, times: Sequence[float], f0: Sequence[float],
                 n: int, seed: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """sum_k F_k(0) E_x[(1 - X_t)^k] at each time: the PDMP side of the generating-function duality."""
    x = pdmp_samples(p, delta, x0, times, n, seed)
    vals = np.zeros_like(x)
    for k, fk in enumerate(f0):
        if fk:
            vals += float(fk) * (1.0 - x) ** k
    mean = vals.mean(axis=0)
    se = vals.std(axis=0, ddof=1) / math.sqrt(n)
    return mean, se
