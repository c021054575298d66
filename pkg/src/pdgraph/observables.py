"""Graph functionals: degree distribution, binomial moments, cliques, generating function."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .graph import Graph, GraphError

MAX_CLIQUE_K = 12


@dataclass(frozen=True)
class DegreeStats:
    """histogram[k] = number of vertices of degree k."""

    histogram: np.ndarray
    n_vertices: int

    def __post_init__(self):
        hist = np.asarray(self.histogram, dtype=np.int64)
        if int(hist.sum()) != self.n_vertices:
            raise ValueError("histogram does not sum to the vertex count")
        object.__setattr__(self, "histogram", hist)

    @property
    def f(self) -> np.ndarray:
        return self.histogram / self.n_vertices

    @property
    def f_plus(self) -> float:
        return 1.0 - self.histogram[0] / self.n_vertices

    @property
    def max_degree(self) -> int:
        nz = np.flatnonzero(self.histogram)
        return int(nz[-1]) if nz.size else 0


@dataclass(frozen=True)
class CliqueCount:
    k: int
    count: int


def degree_stats(source) -> DegreeStats:
    """DegreeStats of a Graph or of a simulation Snapshot."""
    if isinstance(source, Graph):
        n = source.vertex_count
        if n < 1:
            raise GraphError("degree distribution of an empty graph is undefined")
        return DegreeStats(np.bincount(source.deg[:n], minlength=1), n)
    return DegreeStats(source.histogram, source.n_vertices)


def star_count(stats: DegreeStats, k: int) -> int:
    """|V| * B_k = sum over vertices of C(deg, k), exactly."""
    if k < 1:
        raise ValueError("k must be at least 1")
    return sum(math.comb(ell, k) * int(c) for ell, c in enumerate(stats.histogram) if c and ell >= k)


def binomial_moment_exact(stats: DegreeStats, k: int) -> Fraction:
    return Fraction(star_count(stats, k), stats.n_vertices)


def binomial_moment(stats: DegreeStats, k: int) -> float:
    """B_k = sum_{l >= k} C(l, k) F_l."""
    return float(binomial_moment_exact(stats, k))


def binomial_moments(stats: DegreeStats, k_max: int) -> list[float]:
    """[B_1, ..., B_k_max]; these vanish beyond the maximum degree."""
    return [binomial_moment(stats, k) for k in range(1, k_max + 1)]


def generating_function(stats: DegreeStats, x: float) -> float:
    """H_x = sum_k (1-x)^k F_k for x in [0, 1]."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must lie in [0, 1], got {x}")
    hist = stats.histogram
    return math.fsum(float(c) * (1.0 - x) ** k for k, c in enumerate(hist) if c) / stats.n_vertices


def generating_function_complement(stats: DegreeStats, x: float) -> float:
    """I_x = 1 - H_x; I_1 is the fraction of non-isolated vertices."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must lie in [0, 1], got {x}")
    def one_minus_power(k):
        return 1.0 if x == 1.0 else -math.expm1(k * math.log1p(-x))

    terms = (float(c) * one_minus_power(k) for k, c in enumerate(stats.histogram) if c and k)
    return math.fsum(terms) / stats.n_vertices


def initial_degrees(g: Graph, n0: int) -> list[int]:
    """Degrees of vertices 1..n0."""
    if not 0 <= n0 <= g.vertex_count:
        raise GraphError(f"n0={n0} exceeds the vertex count {g.vertex_count}")
    return [int(d) for d in g.deg[:n0]]


def _oriented_adjacency(g: Graph) -> list[set[int]]:
    # orient each edge towards the endpoint later in (degree, id) order
    n = g.vertex_count
    deg = g.deg[:n]
    rank = np.lexsort((np.arange(n), deg))
    order = np.empty(n, dtype=np.int64)
    order[rank] = np.arange(n)
    out: list[set[int]] = [set() for _ in range(n)]
    for slot in range(g.edge_count):
        u, v = int(g.eu[slot]), int(g.ev[slot])
        if order[u] < order[v]:
            out[u].add(v)
        else:
            out[v].add(u)
    return out


def _extend(out: list[set[int]], candidates: set[int], remaining: int) -> int:
    if remaining == 1:
        return len(candidates)
    total = 0
    for v in candidates:
        nxt = candidates & out[v]
        if len(nxt) >= remaining - 1:
            total += _extend(out, nxt, remaining - 1)
    return total


def count_cliques(g: Graph, k: int) -> CliqueCount:
    """Number of complete subgraphs on k vertices (2 <= k <= 12).

    Each clique is counted once, from its earliest vertex in a
    degree ordering, by intersecting forward neighbourhoods.
    """
    if not 2 <= k <= MAX_CLIQUE_K:
        raise GraphError(f"clique size must lie in [2, {MAX_CLIQUE_K}], got {k}")
    if k == 2:
        return CliqueCount(2, g.edge_count)
    out = _oriented_adjacency(g)
    total = 0
    for v in range(g.vertex_count):
        if len(out[v]) >= k - 1:
            total += _extend(out, out[v], k - 1)
    return CliqueCount(k, total)
