import math

import numpy as np
import pytest

from pdgraph.graph import Graph, GraphError, builtin_graph, edge_graph
from pdgraph.sim import (
    Event,
    SimParams,
    iter_replicas,
    replicate_rng,
    run,
    run_replicas,
    step,
    total_rates,
)


def test_params_validation():
    with pytest.raises(ValueError):
        SimParams(p=1.5, delta=0.1)
    with pytest.raises(ValueError):
        SimParams(p=0.5, delta=-1)
    with pytest.raises(ValueError):
        SimParams(p=0.5, delta=0.1, horizon=1, checkpoints=(0.5, 0.2))
    with pytest.raises(ValueError):
        SimParams(p=0.5, delta=0.1, horizon=1, checkpoints=(2.0,))
    assert SimParams(p=0.5, delta=0.1, horizon=3).checkpoints == (3.0,)


def test_total_rates():
    g = builtin_graph("path3")
    assert total_rates(g, SimParams(p=0.5, delta=0.25)) == (4.0, 0.5)
    with pytest.raises(GraphError):
        total_rates(Graph(0), SimParams(p=0.5, delta=0.25))


def test_step_applies_one_event():
    g = edge_graph()
    rng = np.random.default_rng(3)
    params = SimParams(p=0.5, delta=0.5)
    clock = 0.0
    for _ in range(50):
        n, m = g.vertex_count, g.edge_count
        new_clock, kind = step(g, params, clock, rng)
        assert new_clock > clock
        if kind is Event.DUPLICATION:
            assert g.vertex_count == n + 1 and g.edge_count >= m
        else:
            assert g.vertex_count == n and g.edge_count == m - 1
        clock = new_clock
        if g.edge_count == 0:
            break
    g.check_invariants()


def test_full_copy_without_deletion_stays_complete_bipartite():
    g = edge_graph()
    rng = np.random.default_rng(5)
    params = SimParams(p=1.0, delta=0.0)
    for _ in range(60):
        step(g, params, 0.0, rng)
        side = {1}
        other = g.neighbors(1)
        for v in range(2, g.vertex_count + 1):
            if v not in other:
                side.add(v)
        assert all(g.neighbors(v) == other for v in side)
        assert all(g.neighbors(w) == side for w in other)


def test_determinism_and_replicate_contract():
    params = SimParams(p=0.6, delta=0.2, seed=9, horizon=2.0, checkpoints=(0.0, 1.0, 2.0))
    g0 = builtin_graph("path3")
    a = run_replicas(params, g0, 5)
    b = run_replicas(params, g0, 5)
    c = list(iter_replicas(params, g0, 5, workers=3))
    for x, y, z in zip(a, b, c):
        for s, t, u in zip(x.snapshots, y.snapshots, z.snapshots):
            assert np.array_equal(s.histogram, t.histogram) and np.array_equal(s.histogram, u.histogram)
            assert s.n_edges == t.n_edges == u.n_edges
    single = run(params, g0)
    assert [s.n_vertices for s in single.snapshots] == [s.n_vertices for s in a[0].snapshots]
    assert g0.edge_set() == {(1, 2), (2, 3)}


def test_snapshot_at_zero_is_initial_graph():
    g0 = builtin_graph("star-3")
    tr = run(SimParams(p=0.5, delta=0.5, seed=1, horizon=1.0, checkpoints=(0.0, 1.0), clique_ks=(3,)), g0)
    s0 = tr.snapshots[0]
    assert s0.n_vertices == 4 and s0.n_edges == 3
    assert s0.histogram.tolist() == [0, 3, 0, 1]
    assert s0.initial_degrees.tolist() == [3, 1, 1, 1]
    assert s0.cliques == {3: 0}


def test_vertex_count_nondecreasing_and_sizes_consistent():
    times = tuple(np.linspace(0, 3, 13))
    for tr in run_replicas(SimParams(p=0.5, delta=1.0, seed=2, horizon=3.0, checkpoints=times),
                           builtin_graph("triangle"), 20):
        counts = [s.n_vertices for s in tr.snapshots]
        assert counts == sorted(counts)
        for s in tr.snapshots:
            assert int(s.histogram.sum()) == s.n_vertices
            assert int(np.dot(np.arange(s.histogram.size), s.histogram)) == 2 * s.n_edges


def test_edgeless_start_is_allowed_and_flagged():
    tr = run(SimParams(p=0.5, delta=0.2, seed=0, horizon=2.0), Graph(2))
    assert tr.edgeless_start
    assert tr.snapshots[-1].n_edges == 0


def test_truncation_flag():
    tr = run(SimParams(p=0.5, delta=0.0, seed=0, horizon=20.0, max_vertices=50), edge_graph())
    assert tr.truncated
    assert tr.snapshots == []


def test_disjoint_replicate_ranges_uncorrelated():
    params = SimParams(p=0.5, delta=0.2, seed=4, horizon=1.0)
    n = 10_000
    a = [tr.snapshots[-1].n_vertices for tr in iter_replicas(params, edge_graph(), n)]
    b = [tr.snapshots[-1].n_vertices for tr in iter_replicas(params, edge_graph(), n, first=n)]
    assert abs(np.corrcoef(a, b)[0, 1]) < 4 / math.sqrt(n)


def test_streams_differ():
    assert replicate_rng(1, 0).random() != replicate_rng(1, 0, stream=1).random()


def test_python_step_agrees_with_compiled_kernel():
    # the Python step() path and the compiled kernel are separate code;
    # both must give the same law of the edge count at t = 1
    params = SimParams(p=0.5, delta=0.5, seed=0, horizon=1.0)
    n = 3000
    compiled = np.array([tr.snapshots[-1].n_edges for tr in iter_replicas(params, edge_graph(), n)])
    python = np.empty(n)
    for r in range(n):
        g = edge_graph()
        rng = replicate_rng(123, r)
        clock = 0.0
        while True:
            snapshot_edges = g.edge_count
            clock, _ = step(g, params, clock, rng)
            if clock > 1.0:
                python[r] = snapshot_edges
                break
    se = math.hypot(compiled.std(ddof=1), python.std(ddof=1)) / math.sqrt(n)
    assert abs(compiled.mean() - python.mean()) <= 4 * se
