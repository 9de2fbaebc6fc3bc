"""Immutable rooted graphs with BFS layering and hyperbolic metric primitives.

Distances are exact integers and Gromov products exact half-integers, so the
metric layer involves no floating point at all.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import total_ordering

import numpy as np

from .errors import DisconnectedGraph, GraphTooLarge, MalformedEdge

FOUR_POINT_CAP = 300
SLIM_CAP = 64
GEODESIC_ENUM_CAP = 20000


@total_ordering
@dataclass(frozen=True)
class HalfInteger:
    """Exact half-integer stored as twice its value."""

    twice_value: int

    @property
    def value(self) -> float:
        return self.twice_value / 2.0

    def __float__(self) -> float:
        return self.twice_value / 2.0

    def _twice(self, other):
        if isinstance(other, HalfInteger):
            return other.twice_value
        return 2.0 * other

    def __eq__(self, other):
        return self.twice_value == self._twice(other)

    def __lt__(self, other):
        return self.twice_value < self._twice(other)

    def __repr__(self):
        if self.twice_value % 2 == 0:
            return str(self.twice_value // 2)
        return f"{self.twice_value}/2"


@dataclass(frozen=True)
class DistanceRow:
    source: int
    dist: tuple[int, ...]


@dataclass(frozen=True)
class Graph:
    """Simple connected graph rooted at `root`, layered by BFS depth.

    adjacency[v] is sorted ascending; layers[t] lists the nodes at depth t,
    ascending. Instances are immutable and safe to share across workers.
    """

    node_count: int
    adjacency: tuple[tuple[int, ...], ...]
    root: int
    depth: tuple[int, ...]
    layers: tuple[tuple[int, ...], ...]

    @property
    def max_depth(self) -> int:
        return len(self.layers) - 1

    def edge_list(self) -> list[tuple[int, int]]:
        """Sorted list of (u, v) with u < v."""
        return [(u, v) for u in range(self.node_count) for v in self.adjacency[u] if u < v]


def _bfs(adjacency, source, n):
    dist = [-1] * n
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        du = dist[u]
        for w in adjacency[u]:
            if dist[w] < 0:
                dist[w] = du + 1
                queue.append(w)
    return dist


def build_graph(edges, root) -> Graph:
    """Assemble a Graph from an iterable of index pairs.

    Duplicate edges collapse; self-loops and negative indices raise
    MalformedEdge, unreachable nodes raise DisconnectedGraph.
    """
    edges = list(edges)
    if not isinstance(root, int) or root < 0:
        raise MalformedEdge(f"root {root!r} is not a non-negative integer")
    top = root
    for e in edges:
        u, v = e
        if not isinstance(u, int) or not isinstance(v, int) or u < 0 or v < 0:
            raise MalformedEdge(f"edge {e!r} has a non-integer or negative endpoint")
        if u == v:
            raise MalformedEdge(f"self-loop at node {u}")
        top = max(top, u, v)
    n = top + 1
    neighbor_sets = [set() for _ in range(n)]
    for u, v in edges:
        neighbor_sets[u].add(v)
        neighbor_sets[v].add(u)
    adjacency = tuple(tuple(sorted(s)) for s in neighbor_sets)

    dist = _bfs(adjacency, root, n)
    missing = [v for v in range(n) if dist[v] < 0]
    if missing:
        raise DisconnectedGraph(
            f"{len(missing)} node(s) unreachable from root {root}, e.g. node {missing[0]}"
        )
    layers = [[] for _ in range(max(dist) + 1)]
    for v in range(n):
        layers[dist[v]].append(v)
    return Graph(
        node_count=n,
        adjacency=adjacency,
        root=root,
        depth=tuple(dist),
        layers=tuple(tuple(layer) for layer in layers),
    )


def distances_from(g: Graph, source: int) -> DistanceRow:
    """Exact BFS distances from `source` to every node."""
    if not 0 <= source < g.node_count:
        raise IndexError(f"source {source} out of range")
    return DistanceRow(source=source, dist=tuple(_bfs(g.adjacency, source, g.node_count)))


def gromov_product(g: Graph, y: int, z: int, base: int) -> HalfInteger:
    """(y,z)_base = (d(base,y) + d(base,z) - d(y,z)) / 2, exactly."""
    db = _bfs(g.adjacency, base, g.node_count)
    dy = _bfs(g.adjacency, y, g.node_count)
    return HalfInteger(db[y] + db[z] - dy[z])


def distance_matrix(g: Graph) -> np.ndarray:
    """All-pairs distances as an int32 matrix (one BFS per node)."""
    n = g.node_count
    out = np.empty((n, n), dtype=np.int32)
    for s in range(n):
        out[s] = _bfs(g.adjacency, s, n)
    return out


def four_point_delta(g: Graph, cap: int = FOUR_POINT_CAP) -> HalfInteger:
    """Max over quadruples of (largest pair-sum - second largest) / 2.

    O(n^2) distance table plus an O(n^4) scan, so refuses graphs above `cap`.
    """
    n = g.node_count
    if n > cap:
        raise GraphTooLarge(f"{n} nodes exceeds four-point cap {cap}")
    if n < 4:
        return HalfInteger(0)
    d = distance_matrix(g)
    best = 0
    for x in range(n):
        dx = d[x]
        for y in range(x + 1, n):
            dy = d[y]
            s1 = dx[y] + d          # d(x,y) + d(z,w)
            s2 = dx[:, None] + dy[None, :]  # d(x,z) + d(y,w)
            s3 = dy[:, None] + dx[None, :]  # d(y,z) + d(x,w)
            m1 = np.maximum(np.maximum(s1, s2), s3)
            m3 = np.minimum(np.minimum(s1, s2), s3)
            gap = 2 * m1 - (s1 + s2 + s3 - m3)  # m1 - median
            top = int(gap.max())
            if top > best:
                best = top
    return HalfInteger(best)


def _enumerate_geodesics(adjacency, dist_from_u, u, v, limit):
    """All geodesic node-paths u -> v, via the BFS predecessor DAG."""
    paths = []
    stack = [(v, (v,))]
    while stack:
        node, suffix = stack.pop()
        if node == u:
            paths.append(suffix)
            if len(paths) > limit:
                raise GraphTooLarge(
                    f"more than {limit} geodesics between {u} and {v}"
                )
            continue
        target = dist_from_u[node] - 1
        for w in adjacency[node]:
            if dist_from_u[w] == target:
                stack.append((w, (w,) + suffix))
    return paths


def slim_delta_exact(g: Graph, cap: int = SLIM_CAP, geodesic_limit: int = GEODESIC_ENUM_CAP) -> float:
    """Minimal delta for which every geodesic triangle is delta-slim.

    Enumerates every geodesic between every pair and every side choice, so it
    is exponential in the worst case; guarded by `cap` on the node count.
    """
    n = g.node_count
    if n > cap:
        raise GraphTooLarge(f"{n} nodes exceeds slim-triangle cap {cap}")
    if n < 3:
        return 0.0
    d = distance_matrix(g)
    dist_rows = [list(d[s]) for s in range(n)]

    geos = {}
    far = {}  # (u,v) -> per-node max over geodesics of dist(node, geodesic)
    for u in range(n):
        for v in range(u + 1, n):
            paths = _enumerate_geodesics(g.adjacency, dist_rows[u], u, v, geodesic_limit)
            geos[(u, v)] = paths
            worst = np.zeros(n, dtype=np.int32)
            for path in paths:
                np.maximum(worst, d[:, list(path)].min(axis=1), out=worst)
            far[(u, v)] = worst

    def pair(a, b):
        return (a, b) if a < b else (b, a)

    # For a side [a,b] opposite vertex c, independent geodesic choices for the
    # other two sides let max over choices of min(d(p, [c,a]), d(p, [c,b]))
    # factor into min(far[(c,a)][p], far[(c,b)][p]).
    best = 0
    for x in range(n):
        for y in range(x + 1, n):
            for z in range(y + 1, n):
                for a, b, c in ((y, z, x), (x, z, y), (x, y, z)):
                    reach = np.minimum(far[pair(c, a)], far[pair(c, b)])
                    for path in geos[pair(a, b)]:
                        val = int(reach[list(path)].max())
                        if val > best:
                            best = val
    return float(best)


GRAPH_FORMAT = "hypertraffic-graph-v1"


def graph_to_json_dict(g: Graph, family=None) -> dict:
    doc = {
        "format": GRAPH_FORMAT,
        "root": g.root,
        "node_count": g.node_count,
        "edges": [[u, v] for u, v in g.edge_list()],
    }
    if family is not None:
        doc["family"] = family
    return doc


def graph_from_json_dict(doc: dict) -> tuple[Graph, dict | None]:
    """Rebuild a Graph from its JSON form; depths and layers are recomputed."""
    if doc.get("format") != GRAPH_FORMAT:
        raise MalformedEdge(f"unsupported graph format {doc.get('format')!r}")
    edges = [(int(u), int(v)) for u, v in doc["edges"]]
    g = build_graph(edges, int(doc["root"]))
    if int(doc["node_count"]) != g.node_count:
        raise MalformedEdge(
            f"file claims {doc['node_count']} nodes but edges imply {g.node_count}"
        )
    return g, doc.get("family")
