"""Compiled primitives on the flat-array graph layout.

A graph with n vertices and m edges is held in int64 arrays:

    meta  [n, m]
    deg   per-vertex degree
    head  first half-edge of each vertex's incidence list, -1 if none
    ends  ends[2s], ends[2s+1] are the endpoints of edge slot s
    nxt, prv  doubly linked incidence lists over half-edges

Half-edge h belongs to vertex ends[h] and points at ends[h ^ 1]. Edges
occupy slots 0..m-1; deletion moves the last slot into the hole, so a
uniform slot is a uniform edge. Vertex ids are 0-based here.

None of these functions allocate. Callers guarantee room for one more
vertex and for m + n edges before each event, which covers any single
duplication or deletion.
"""

import numpy as np
from numba import njit

N_V = 0
N_E = 1

RUN_OK = 0
RUN_TRUNCATED = 1
RUN_NEED_ROOM = 2


@njit(cache=True, nogil=True)
def _link(head, nxt, prv, v, h):
    first = head[v]
    nxt[h] = first
    prv[h] = -1
    if first != -1:
        prv[first] = h
    head[v] = h


@njit(cache=True, nogil=True)
def _unlink(head, ends, nxt, prv, h):
    a = prv[h]
    b = nxt[h]
    if a != -1:
        nxt[a] = b
    else:
        head[ends[h]] = b
    if b != -1:
        prv[b] = a


@njit(cache=True, nogil=True)
def _move_half(head, ends, nxt, prv, src, dst):
    ends[dst] = ends[src]
    a = prv[src]
    b = nxt[src]
    nxt[dst] = b
    prv[dst] = a
    if a != -1:
        nxt[a] = dst
    else:
        head[ends[dst]] = dst
    if b != -1:
        prv[b] = dst


@njit(cache=True, nogil=True)
def add_vertex(meta, deg, head):
    v = meta[N_V]
    deg[v] = 0
    head[v] = -1
    meta[N_V] = v + 1
    return v


@njit(cache=True, nogil=True)
def add_edge(meta, deg, head, ends, nxt, prv, u, v):
    s = meta[N_E]
    ends[2 * s] = u
    ends[2 * s + 1] = v
    _link(head, nxt, prv, u, 2 * s)
    _link(head, nxt, prv, v, 2 * s + 1)
    deg[u] += 1
    deg[v] += 1
    meta[N_E] = s + 1


@njit(cache=True, nogil=True)
def remove_edge(meta, deg, head, ends, nxt, prv, s):
    h = 2 * s
    deg[ends[h]] -= 1
    deg[ends[h + 1]] -= 1
    _unlink(head, ends, nxt, prv, h)
    _unlink(head, ends, nxt, prv, h + 1)
    last = meta[N_E] - 1
    if s != last:
        _move_half(head, ends, nxt, prv, 2 * last, h)
        _move_half(head, ends, nxt, prv, 2 * last + 1, h + 1)
    meta[N_E] = last


@njit(cache=True, nogil=True)
def find_slot(deg, head, ends, nxt, u, v):
    """Edge slot of {u, v}, or -1."""
    if deg[v] < deg[u]:
        u, v = v, u
    h = head[u]
    while h != -1:
        if ends[h ^ 1] == v:
            return h >> 1
        h = nxt[h]
    return -1


@njit(cache=True, nogil=True)
def neighbours(deg, head, ends, nxt, v):
    """Neighbours of v in incidence-list order."""
    out = np.empty(deg[v], dtype=np.int64)
    h = head[v]
    i = 0
    while h != -1:
        out[i] = ends[h ^ 1]
        i += 1
        h = nxt[h]
    return out


@njit(cache=True, nogil=True)
def duplicate_masked(meta, deg, head, ends, nxt, prv, parent, mask):
    """Copy `parent`; mask[j] selects the j-th neighbour in incidence-list order."""
    child = add_vertex(meta, deg, head)
    h = head[parent]
    j = 0
    while h != -1:
        if mask[j]:
            add_edge(meta, deg, head, ends, nxt, prv, child, ends[h ^ 1])
        j += 1
        h = nxt[h]
    return child


@njit(cache=True, nogil=True)
def advance(rng, meta, deg, head, ends, nxt, prv, clock, t_end, p, delta, max_vertices):
    """Run the duplication/deletion chain from `clock` towards `t_end`.

    The pending holding time at t_end is discarded, which is exact because
    holding times are exponential. Returns (clock, events, status); with
    RUN_NEED_ROOM the caller must enlarge the arrays and call again.
    """
    events = 0
    vcap = deg.shape[0]
    ecap = ends.shape[0] // 2
    while True:
        n = meta[N_V]
        m = meta[N_E]
        if n >= max_vertices:
            return clock, events, RUN_TRUNCATED
        if n + 1 > vcap or m + n > ecap:
            return clock, events, RUN_NEED_ROOM
        rate_dup = n + 1.0
        total = rate_dup + delta * m
        wait = rng.exponential(1.0 / total)
        if clock + wait > t_end:
            return t_end, events, RUN_OK
        clock += wait
        events += 1
        if rng.random() * total < rate_dup:
            parent = rng.integers(0, n)
            child = add_vertex(meta, deg, head)
            h = head[parent]
            while h != -1:
                if rng.random() < p:
                    add_edge(meta, deg, head, ends, nxt, prv, child, ends[h ^ 1])
                h = nxt[h]
        else:
            remove_edge(meta, deg, head, ends, nxt, prv, rng.integers(0, m))


@njit(cache=True, nogil=True)
def z_path(rng, z, b, d, p, times, cap_at, out):
    """Birth-death chain with binomial disasters, observed at `times`.

    Writes Z at each observation time into `out`. Once Z reaches `cap_at`
    (if positive) the path is frozen and True is returned.
    """
    clock = 0.0
    i = 0
    n_times = times.shape[0]
    capped = False
    while i < n_times:
        if z == 0:
            break
        if cap_at > 0 and z >= cap_at:
            capped = True
            break
        total = (b + d) * z + 1.0
        nxt_t = clock + rng.exponential(1.0 / total)
        while i < n_times and times[i] < nxt_t:
            out[i] = z
            i += 1
        if i == n_times:
            break
        clock = nxt_t
        u = rng.random() * total
        if u < b * z:
            z += 1
        elif u < (b + d) * z:
            z -= 1
        else:
            z = rng.binomial(z, p)
    while i < n_times:
        out[i] = z
        i += 1
    return capped


@njit(cache=True, nogil=True)
def flow(p, delta, x0, s):
    """Solution of x' = p x (1 - x) - delta x after time s."""
    if x0 == 0.0 or s == 0.0:
        return x0
    a = p - delta
    if abs(a) < 1e-12:
        # first-order expansion in a of the general closed form
        return x0 / (1.0 - a * s + p * x0 * s * (1.0 - 0.5 * a * s))
    if a > 0.0:
        return x0 / (np.exp(-a * s) - p * x0 * np.expm1(-a * s) / a)
    return x0 * np.exp(a * s) / (1.0 + p * x0 * np.expm1(a * s) / a)


@njit(cache=True, nogil=True)
def pdmp_path(rng, p, delta, x, times, out):
    """PDMP observed at `times`; rate-1 jumps x -> p x between flows."""
    clock = 0.0
    i = 0
    n_times = times.shape[0]
    while i < n_times:
        nxt_t = clock + rng.exponential(1.0)
        while i < n_times and times[i] < nxt_t:
            out[i] = flow(p, delta, x, times[i] - clock)
            i += 1
        x = p * flow(p, delta, x, nxt_t - clock)
        clock = nxt_t
