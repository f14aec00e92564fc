"""Graph families and all-pairs hop distances.

Vertices are always ``0..n-1``. Grid vertex ``(i, j)`` with ``0 <= i < s`` and
``0 <= j < t`` carries the label ``i * t + j``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

import numpy as np

from .errors import DisconnectedGraphError, InvalidParameterError

__all__ = [
    "Graph",
    "DistanceMatrix",
    "build_path",
    "build_cycle",
    "build_grid",
    "build_complete",
    "build_custom",
    "graph_from_descriptor",
    "read_graph_file",
    "all_pairs_distances",
    "sphere",
]


@dataclass(frozen=True)
class Graph:
    """A finite, simple, connected, undirected graph.

    ``family`` is one of ``path``, ``cycle``, ``grid``, ``complete`` or
    ``custom``; ``params`` holds the family parameters (``(n,)`` or ``(s, t)``).
    Construct through the ``build_*`` functions, which enforce connectivity.
    """

    n: int
    edges: frozenset[tuple[int, int]]
    family: str = "custom"
    params: tuple[int, ...] = ()
    _adjacency: tuple[tuple[int, ...], ...] = field(default=(), repr=False, compare=False)

    @property
    def family_tag(self) -> str:
        if self.family == "grid":
            return "grid({},{})".format(*self.params)
        return self.family

    @property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        return self._adjacency

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def grid_label(self, i: int, j: int) -> int:
        if self.family != "grid":
            raise InvalidParameterError("grid coordinates only apply to grid graphs")
        s, t = self.params
        if not (0 <= i < s and 0 <= j < t):
            raise InvalidParameterError(f"grid coordinate ({i},{j}) out of range for {s}x{t}")
        return i * t + j

    def grid_coords(self, v: int) -> tuple[int, int]:
        if self.family != "grid":
            raise InvalidParameterError("grid coordinates only apply to grid graphs")
        return divmod(v, self.params[1])

    def descriptor(self) -> dict:
        """JSON-friendly description from which the graph can be rebuilt."""
        if self.family == "grid":
            return {"family": "grid", "s": self.params[0], "t": self.params[1]}
        if self.family in ("path", "cycle", "complete"):
            return {"family": self.family, "n": self.n}
        return {"family": "custom", "n": self.n, "edges": [list(e) for e in sorted(self.edges)]}


def _make_graph(n: int, edge_list: Iterable[tuple[int, int]], family: str, params: tuple[int, ...]) -> Graph:
    if n < 1:
        raise InvalidParameterError(f"vertex count must be positive, got {n}")
    edges = set()
    for u, v in edge_list:
        u, v = int(u), int(v)
        if not (0 <= u < n and 0 <= v < n):
            raise InvalidParameterError(f"edge ({u},{v}) out of range for n={n}")
        if u == v:
            raise InvalidParameterError(f"self-loop at vertex {u}")
        edges.add((min(u, v), max(u, v)))
    neighbours: list[list[int]] = [[] for _ in range(n)]
    for u, v in sorted(edges):
        neighbours[u].append(v)
        neighbours[v].append(u)

    seen = [False] * n
    seen[0] = True
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for w in neighbours[u]:
            if not seen[w]:
                seen[w] = True
                queue.append(w)
    if not all(seen):
        missing = seen.index(False)
        raise DisconnectedGraphError(f"graph is disconnected (vertex {missing} unreachable from 0)")

    return Graph(n, frozenset(edges), family, params, tuple(tuple(sorted(a)) for a in neighbours))


def build_path(n: int) -> Graph:
    if n < 1:
        raise InvalidParameterError(f"path needs n >= 1, got {n}")
    return _make_graph(n, ((i, i + 1) for i in range(n - 1)), "path", (n,))


def build_cycle(n: int) -> Graph:
    if n < 3:
        raise InvalidParameterError(f"cycle needs n >= 3, got {n}")
    return _make_graph(n, ((i, (i + 1) % n) for i in range(n)), "cycle", (n,))


def build_grid(s: int, t: int) -> Graph:
    """Cartesian product of paths on ``s`` and ``t`` vertices."""
    if s < 2 or t < 2:
        raise InvalidParameterError(f"grid needs s, t >= 2, got ({s},{t})")
    edges = []
    for i in range(s):
        for j in range(t):
            v = i * t + j
            if j + 1 < t:
                edges.append((v, v + 1))
            if i + 1 < s:
                edges.append((v, v + t))
    return _make_graph(s * t, edges, "grid", (s, t))


def build_complete(n: int) -> Graph:
    if n < 1:
        raise InvalidParameterError(f"complete graph needs n >= 1, got {n}")
    return _make_graph(n, ((u, v) for u in range(n) for v in range(u + 1, n)), "complete", (n,))


def build_custom(n: int, edge_list: Iterable[tuple[int, int]]) -> Graph:
    return _make_graph(n, edge_list, "custom", ())


def graph_from_descriptor(desc: dict) -> Graph:
    family = desc.get("family")
    try:
        if family == "path":
            return build_path(int(desc["n"]))
        if family == "cycle":
            return build_cycle(int(desc["n"]))
        if family == "grid":
            return build_grid(int(desc["s"]), int(desc["t"]))
        if family == "complete":
            return build_complete(int(desc["n"]))
        if family == "custom":
            return build_custom(int(desc["n"]), [tuple(e) for e in desc["edges"]])
    except KeyError as exc:
        raise InvalidParameterError(f"graph descriptor missing field {exc}") from None
    raise InvalidParameterError(f"unknown graph family {family!r}")


def read_graph_file(path: str | Path) -> Graph:
    """Read ``n`` on the first line, then one ``u v`` edge per line."""
    lines = [ln.split() for ln in Path(path).read_text().splitlines()]
    lines = [ln for ln in lines if ln and not ln[0].startswith("#")]
    if not lines:
        raise InvalidParameterError(f"{path}: empty graph file")
    try:
        n = int(lines[0][0])
        edges = [(int(a), int(b)) for a, b in lines[1:]]
    except ValueError as exc:
        raise InvalidParameterError(f"{path}: malformed graph file ({exc})") from None
    return build_custom(n, edges)


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    graph: Graph
    d: np.ndarray = field(repr=False)
    diameter: int

    @property
    def n(self) -> int:
        return self.graph.n


def all_pairs_distances(g: Graph) -> DistanceMatrix:
    """Hop distances by one BFS per vertex."""
    n = g.n
    adj = g.adjacency
    rows = []
    for src in range(n):
        row = [-1] * n
        row[src] = 0
        queue = deque([src])
        while queue:
            u = queue.popleft()
            nxt = row[u] + 1
            for w in adj[u]:
                if row[w] < 0:
                    row[w] = nxt
                    queue.append(w)
        rows.append(row)
    d = np.array(rows, dtype=np.int64).reshape(n, n)
    d.setflags(write=False)
    return DistanceMatrix(g, d, int(d.max()))


def sphere(dm: DistanceMatrix, v: int, j: int) -> frozenset[int]:
    """Vertices at distance exactly ``j`` from ``v``."""
    if not 0 <= v < dm.n:
        raise InvalidParameterError(f"vertex {v} out of range for n={dm.n}")
    if j < 0:
        raise InvalidParameterError(f"sphere radius must be non-negative, got {j}")
    return frozenset(np.flatnonzero(dm.d[v] == j).tolist())
