"""Dynamic simple undirected graph with duplication and edge deletion.

Vertex ids are 1-based and append-only. Storage is a set of flat int64
arrays (see `_kernels`) so the compiled simulator can mutate the graph in
place; this module is the checked, user-facing layer over them.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

import numpy as np

from . import _kernels as K


class GraphError(ValueError):
    """Operation violates a graph precondition."""


class EdgeListError(GraphError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class EdgeRef:
    """Unordered edge; stored with u < v."""

    u: int
    v: int

    def __post_init__(self):
        if self.u == self.v:
            raise GraphError(f"edge endpoints must differ, got {self.u}")
        if self.u > self.v:
            a, b = self.v, self.u
            object.__setattr__(self, "u", a)
            object.__setattr__(self, "v", b)

    def __iter__(self):
        yield self.u
        yield self.v


class Graph:
    def __init__(self, n_vertices: int = 0):
        if n_vertices < 0:
            raise GraphError("vertex count must be nonnegative")
        self.meta = np.zeros(2, dtype=np.int64)
        self._alloc(max(n_vertices + 1, 8), 16)
        for _ in range(n_vertices):
            self.add_vertex()

    def _alloc(self, vcap: int, ecap: int) -> None:
        self.deg = np.zeros(vcap, dtype=np.int64)
        self.head = np.full(vcap, -1, dtype=np.int64)
        self.ends = np.zeros(2 * ecap, dtype=np.int64)
        self.nxt = np.full(2 * ecap, -1, dtype=np.int64)
        self.prv = np.full(2 * ecap, -1, dtype=np.int64)

    def reserve(self, vcap: int, ecap: int) -> None:
        """Grow storage to hold at least vcap vertices and ecap edges."""
        if vcap <= self.deg.shape[0] and 2 * ecap <= self.ends.shape[0]:
            return
        old = (self.deg, self.head, self.ends, self.nxt, self.prv)
        self._alloc(max(vcap, self.deg.shape[0]), max(ecap, self.ends.shape[0] // 2))
        for new, prev in zip((self.deg, self.head, self.ends, self.nxt, self.prv), old):
            new[: prev.shape[0]] = prev

    def ensure_room(self) -> None:
        """Room for one more vertex and m + n edges, enough for any single event."""
        n, m = self.vertex_count, self.edge_count
        if n + 1 > self.deg.shape[0] or m + n > self.ends.shape[0] // 2:
            self.reserve(2 * (n + 1), 2 * (m + n) + 16)

    # -- construction -----------------------------------------------------

    @classmethod
    def from_edges(cls, n_vertices: int, edges) -> "Graph":
        g = cls(n_vertices)
        for u, v in edges:
            g.add_edge(u, v)
        return g

    def add_vertex(self) -> int:
        self.ensure_room()
        K.add_vertex(self.meta, self.deg, self.head)
        return self.vertex_count

    def add_edge(self, u: int, v: int) -> None:
        self._check_vertex(u)
        self._check_vertex(v)
        if u == v:
            raise GraphError(f"self-loop at vertex {u}")
        if self.has_edge(u, v):
            raise GraphError(f"duplicate edge {u}-{v}")
        self.ensure_room()
        K.add_edge(self.meta, self.deg, self.head, self.ends, self.nxt, self.prv, u - 1, v - 1)

    def copy(self) -> "Graph":
        g = Graph.__new__(Graph)
        g.meta = self.meta.copy()
        for name in ("deg", "head", "ends", "nxt", "prv"):
            setattr(g, name, getattr(self, name).copy())
        return g

    def load(self, other: "Graph") -> None:
        """Overwrite this graph with `other`, reusing storage where it fits."""
        n, m = other.vertex_count, other.edge_count
        self.reserve(n + 1, m + n)
        self.meta[:] = other.meta
        self.deg[:n] = other.deg[:n]
        self.head[:n] = other.head[:n]
        self.ends[: 2 * m] = other.ends[: 2 * m]
        self.nxt[: 2 * m] = other.nxt[: 2 * m]
        self.prv[: 2 * m] = other.prv[: 2 * m]

    # -- queries ----------------------------------------------------------

    @property
    def vertex_count(self) -> int:
        return int(self.meta[K.N_V])

    @property
    def edge_count(self) -> int:
        return int(self.meta[K.N_E])

    @property
    def eu(self) -> np.ndarray:
        """First endpoint (0-based) of each edge slot."""
        return self.ends[0 : 2 * self.edge_count : 2]

    @property
    def ev(self) -> np.ndarray:
        return self.ends[1 : 2 * self.edge_count : 2]

    def _check_vertex(self, v) -> None:
        if not (isinstance(v, (int, np.integer)) and 1 <= v <= self.vertex_count):
            raise GraphError(f"no vertex {v!r} (graph has {self.vertex_count})")

    def degree(self, v: int) -> int:
        self._check_vertex(v)
        return int(self.deg[v - 1])

    def degrees(self) -> np.ndarray:
        """Degrees of vertices 1..n as a fresh array (index 0 is vertex 1)."""
        return self.deg[: self.vertex_count].copy()

    def _neighbour_array(self, i: int) -> np.ndarray:
        return K.neighbours(self.deg, self.head, self.ends, self.nxt, i)

    def neighbors(self, v: int) -> set[int]:
        self._check_vertex(v)
        return {int(w) + 1 for w in self._neighbour_array(v - 1)}

    def has_edge(self, u: int, v: int) -> bool:
        self._check_vertex(u)
        self._check_vertex(v)
        if u == v:
            return False
        return K.find_slot(self.deg, self.head, self.ends, self.nxt, u - 1, v - 1) >= 0

    def edges(self) -> Iterator[EdgeRef]:
        for u, v in zip(self.eu.tolist(), self.ev.tolist()):
            yield EdgeRef(u + 1, v + 1)

    def adjacency(self) -> list[set[int]]:
        """Neighbour sets, index i holding the neighbours of vertex i+1 (1-based ids)."""
        return [self.neighbors(v) for v in range(1, self.vertex_count + 1)]

    def edge_set(self) -> set[tuple[int, int]]:
        return {(e.u, e.v) for e in self.edges()}

    def check_invariants(self) -> None:
        """Recompute everything from the edge slots and compare with the caches."""
        n, m = self.vertex_count, self.edge_count
        adj = [set() for _ in range(n)]
        for slot in range(m):
            u, v = int(self.ends[2 * slot]), int(self.ends[2 * slot + 1])
            if u == v:
                raise AssertionError(f"self-loop in slot {slot}")
            if not (0 <= u < n and 0 <= v < n):
                raise AssertionError(f"slot {slot} names a missing vertex")
            if v in adj[u]:
                raise AssertionError(f"multi-edge {u + 1}-{v + 1}")
            adj[u].add(v)
            adj[v].add(u)
        for i in range(n):
            seen = []
            prev, h = -1, int(self.head[i])
            while h != -1:
                if not 0 <= h < 2 * m or int(self.ends[h]) != i or int(self.prv[h]) != prev:
                    raise AssertionError(f"incidence list of vertex {i + 1} is corrupt")
                seen.append(int(self.ends[h ^ 1]))
                if len(seen) > m:
                    raise AssertionError(f"incidence list of vertex {i + 1} loops")
                prev, h = h, int(self.nxt[h])
            if self.deg[i] != len(adj[i]) or len(seen) != len(adj[i]) or set(seen) != adj[i]:
                raise AssertionError(f"adjacency of vertex {i + 1} out of sync")
        if 2 * m != int(self.deg[:n].sum()):
            raise AssertionError("edge count differs from half the degree sum")

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.vertex_count == other.vertex_count and self.edge_set() == other.edge_set()

    def __repr__(self) -> str:
        return f"Graph(vertices={self.vertex_count}, edges={self.edge_count})"


def add_duplicate(g: Graph, parent: int, p: float, rng: np.random.Generator) -> int:
    """Add a p-copy of `parent` and return its id.

    Each edge of the parent is copied to the new vertex independently with
    probability p. The new vertex is never linked to the parent.
    """
    g._check_vertex(parent)
    if not 0.0 <= p <= 1.0:
        raise GraphError(f"p must lie in [0, 1], got {p}")
    g.ensure_room()
    mask = rng.random(g.degree(parent)) < p
    K.duplicate_masked(g.meta, g.deg, g.head, g.ends, g.nxt, g.prv, parent - 1, mask)
    return g.vertex_count


def delete_edge(g: Graph, e) -> None:
    u, v = e
    g._check_vertex(u)
    g._check_vertex(v)
    slot = K.find_slot(g.deg, g.head, g.ends, g.nxt, u - 1, v - 1) if u != v else -1
    if slot < 0:
        raise GraphError(f"no edge {u}-{v}")
    K.remove_edge(g.meta, g.deg, g.head, g.ends, g.nxt, g.prv, slot)


def sample_uniform_edge(g: Graph, rng: np.random.Generator) -> EdgeRef:
    m = g.edge_count
    if m == 0:
        raise GraphError("cannot sample from an empty edge set")
    slot = int(rng.integers(m))
    return EdgeRef(int(g.ends[2 * slot]) + 1, int(g.ends[2 * slot + 1]) + 1)


# -- builtin initial graphs ---------------------------------------------------

def edge_graph() -> Graph:
    return Graph.from_edges(2, [(1, 2)])


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(1, n)])


def star_graph(leaves: int) -> Graph:
    """Star with centre 1 and `leaves` leaves."""
    return Graph.from_edges(leaves + 1, [(1, i) for i in range(2, leaves + 2)])


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise GraphError("cycle needs at least 3 vertices")
    return Graph.from_edges(n, [(i, i % n + 1) for i in range(1, n + 1)])


_BUILTIN = re.compile(r"^(edge|triangle|path(\d+)|star-(\d+)|complete-(\d+)|cycle-(\d+))$")


def builtin_graph(name: str) -> Graph:
    """Named initial graphs: edge, triangle, pathN, star-K, complete-K, cycle-K."""
    match = _BUILTIN.match(name)
    if match is None:
        raise GraphError(f"unknown builtin graph {name!r}")
    if name == "edge":
        return edge_graph()
    if name == "triangle":
        return complete_graph(3)
    kind, size = name.rstrip("0123456789").rstrip("-"), int(re.sub(r"\D", "", name))
    if size < 1:
        raise GraphError(f"builtin {name!r} needs a positive size")
    return {"path": path_graph, "star": star_graph, "complete": complete_graph,
            "cycle": cycle_graph}[kind](size)


# -- edge-list text format ------------------------------------------------------

def parse_edge_list(text: str) -> Graph:
    """Parse "u v" lines (1-based). A "vertices N" header declares isolated vertices."""
    declared = 0
    pairs: list[tuple[int, int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if fields[0] == "vertices":
            if len(fields) != 2 or not fields[1].isdigit():
                raise EdgeListError("malformed vertices header", lineno)
            declared = max(declared, int(fields[1]))
            continue
        if len(fields) != 2:
            raise EdgeListError(f"expected 'u v', got {line!r}", lineno)
        try:
            u, v = int(fields[0]), int(fields[1])
        except ValueError:
            raise EdgeListError(f"non-integer vertex id in {line!r}", lineno) from None
        if u < 1 or v < 1:
            raise EdgeListError(f"vertex ids are 1-based, got {line!r}", lineno)
        if u == v:
            raise EdgeListError(f"self-loop at vertex {u}", lineno)
        pairs.append((u, v, lineno))
    n = max([declared] + [max(u, v) for u, v, _ in pairs])
    g = Graph(n)
    for u, v, lineno in pairs:
        if g.has_edge(u, v):
            raise EdgeListError(f"duplicate edge {u}-{v}", lineno)
        g.add_edge(u, v)
    return g


def format_edge_list(g: Graph) -> str:
    lines = [f"vertices {g.vertex_count}"]
    lines += [f"{e.u} {e.v}" for e in sorted(g.edges(), key=lambda e: (e.u, e.v))]
    return "\n".join(lines) + "\n"


def read_edge_list(path) -> Graph:
    return parse_edge_list(Path(path).read_text(encoding="utf-8"))


def write_edge_list(g: Graph, path) -> None:
    Path(path).write_text(format_edge_list(g), encoding="utf-8", newline="\n")
