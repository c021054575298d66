"""Exact continuous-time simulation of the partial-duplication graph with edge deletion.

Every vertex is p-copied at rate (|V|+1)/|V| and every edge is deleted at
rate delta, so the next event is a duplication of a uniform vertex with
probability (|V|+1)/(|V|+1+delta|E|) and a deletion of a uniform edge
otherwise (Gillespie direct method).
"""

from __future__ import annotations

import enum
import logging
import math
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from . import _kernels as K
from .graph import Graph, GraphError, add_duplicate, delete_edge, sample_uniform_edge

log = logging.getLogger(__name__)

DEFAULT_MAX_VERTICES = 2_000_000


class RunError(RuntimeError):
    pass


class Event(enum.Enum):
    DUPLICATION = "duplication"
    DELETION = "deletion"


@dataclass(frozen=True)
class SimParams:
    p: float
    delta: float
    seed: int = 0
    horizon: float = 0.0
    checkpoints: tuple[float, ...] = ()
    max_vertices: int | None = DEFAULT_MAX_VERTICES
    clique_ks: tuple[int, ...] = ()

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must lie in [0, 1], got {self.p}")
        if not self.delta >= 0.0:
            raise ValueError(f"delta must be nonnegative, got {self.delta}")
        if not self.horizon >= 0.0 or not math.isfinite(self.horizon):
            raise ValueError(f"horizon must be a finite nonnegative time, got {self.horizon}")
        cps = tuple(float(t) for t in self.checkpoints) or (float(self.horizon),)
        if any(t < 0 for t in cps) or any(a >= b for a, b in zip(cps, cps[1:])):
            raise ValueError("checkpoints must be nonnegative and strictly increasing")
        if cps[-1] > self.horizon:
            raise ValueError(f"checkpoint {cps[-1]} lies beyond the horizon {self.horizon}")
        object.__setattr__(self, "checkpoints", cps)
        object.__setattr__(self, "clique_ks", tuple(int(k) for k in self.clique_ks))
        if self.max_vertices is not None and self.max_vertices < 1:
            raise ValueError("max_vertices must be positive")


@dataclass
class Snapshot:
    t: float
    n_vertices: int
    n_edges: int
    histogram: np.ndarray
    initial_degrees: np.ndarray
    cliques: dict[int, int] = field(default_factory=dict)


@dataclass
class Trajectory:
    replicate: int
    snapshots: list[Snapshot]
    event_count: int
    truncated: bool = False
    edgeless_start: bool = False

    @property
    def times(self) -> list[float]:
        return [s.t for s in self.snapshots]


STREAM_GRAPH = 0
STREAM_Z = 1
STREAM_PDMP = 2


def replicate_rng(seed: int, replicate: int, stream: int = STREAM_GRAPH) -> np.random.Generator:
    """Independent generator for one replicate, derived from (seed, stream, replicate) only.

    Distinct streams keep the graph simulator and the dual processes
    statistically independent when they share a seed.
    """
    key = np.random.SeedSequence(seed, spawn_key=(stream, replicate))
    return np.random.Generator(np.random.PCG64(key))


def total_rates(g: Graph, params: SimParams) -> tuple[float, float]:
    if g.vertex_count < 1:
        raise GraphError("rates are undefined on a graph without vertices")
    return g.vertex_count + 1.0, params.delta * g.edge_count


def step(g: Graph, params: SimParams, clock: float, rng: np.random.Generator) -> tuple[float, Event]:
    """Apply one event to `g` in place; return the new clock and the event kind."""
    dup, dele = total_rates(g, params)
    total = dup + dele
    new_clock = clock + rng.exponential(1.0 / total)
    if not math.isfinite(new_clock):
        raise RunError(f"clock overflow at t={clock}")
    if rng.random() * total < dup:
        add_duplicate(g, int(rng.integers(g.vertex_count)) + 1, params.p, rng)
        return new_clock, Event.DUPLICATION
    delete_edge(g, sample_uniform_edge(g, rng))
    return new_clock, Event.DELETION


def snapshot(g: Graph, t: float, n0: int, clique_ks: Sequence[int] = ()) -> Snapshot:
    from .observables import count_cliques

    n = g.vertex_count
    deg = g.deg[:n]
    return Snapshot(
        t=t,
        n_vertices=n,
        n_edges=g.edge_count,
        histogram=np.bincount(deg, minlength=1).astype(np.int64),
        initial_degrees=deg[:n0].copy(),
        cliques={k: count_cliques(g, k).count for k in clique_ks},
    )


def _advance(g: Graph, rng, clock: float, t: float, params: SimParams, cap: int):
    events = 0
    while True:
        clock, n_ev, status = K.advance(
            rng, g.meta, g.deg, g.head, g.ends, g.nxt, g.prv,
            clock, t, params.p, params.delta, cap,
        )
        events += n_ev
        if status != K.RUN_NEED_ROOM:
            return clock, events, status
        g.ensure_room()


def run(params: SimParams, g0: Graph, replicate: int = 0, work: Graph | None = None) -> Trajectory:
    """Simulate one trajectory from g0; deterministic in (seed, replicate).

    `work` is scratch storage that is overwritten; passing the same one
    across calls avoids reallocating the graph for every replicate.
    """
    if g0.vertex_count < 1:
        raise GraphError("initial graph needs at least one vertex")
    rng = replicate_rng(params.seed, replicate)
    if work is None:
        g = g0.copy()
    else:
        work.load(g0)
        g = work
    n0 = g0.vertex_count
    cap = params.max_vertices if params.max_vertices is not None else np.iinfo(np.int64).max
    clock = 0.0
    events = 0
    snaps = []
    truncated = False
    for t in params.checkpoints:
        clock, n_ev, status = _advance(g, rng, clock, t, params, cap)
        events += n_ev
        if status == K.RUN_TRUNCATED:
            truncated = True
            log.warning("replicate %d hit max_vertices=%d before t=%g", replicate, cap, t)
            break
        snaps.append(snapshot(g, t, n0, params.clique_ks))
    return Trajectory(replicate, snaps, events, truncated, edgeless_start=g0.edge_count == 0)


def iter_replicas(params: SimParams, g0: Graph, n: int, first: int = 0,
                  workers: int = 1) -> Iterator[Trajectory]:
    """Trajectories for replicates first..first+n-1, in replicate order."""
    if n < 1:
        raise ValueError("need at least one replicate")
    if g0.edge_count == 0:
        log.info("initial graph has no edges; the graph stays edgeless")
    indices = range(first, first + n)
    if workers <= 1:
        work = g0.copy()
        for r in indices:
            yield run(params, g0, r, work)
        return
    local = threading.local()

    def one(r):
        if not hasattr(local, "work"):
            local.work = g0.copy()
        return run(params, g0, r, local.work)

    with ThreadPoolExecutor(max_workers=workers) as pool:
        yield from pool.map(one, indices)


def run_replicas(params: SimParams, g0: Graph, n: int, workers: int = 1) -> list[Trajectory]:
    return list(iter_replicas(params, g0, n, workers=workers))
