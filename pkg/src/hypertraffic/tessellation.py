"""Half-edge construction of balls in the regular (p, q) hyperbolic tessellation.

The complex is grown as a combinatorial disk: faces are always created as
complete p-gons, the outer boundary is a single cycle, and a vertex leaves the
boundary exactly when its wheel of q faces is complete. Twins are implicit:
half-edge h pairs with h ^ 1.

Face attachment is forced by the structure: when a face is glued onto a run of
boundary edges, the run must extend through every vertex that already has q
edges (no further edge can be created there), and must stop at vertices that
do not (their angular gap still receives more faces). This makes the result
independent of processing order; we saturate the lowest-numbered eligible
vertex first so the construction is also deterministic step by step.
"""

from __future__ import annotations

from collections import deque

from .errors import NotHyperbolic, SizeOverflow

DEFAULT_NODE_CAP = 1 << 24


class TessellationMap:
    """Mutable half-edge map used while growing the tessellation ball."""

    def __init__(self, p: int, q: int):
        self.p = p
        self.q = q
        self.org = []     # half-edge -> origin vertex
        self.nxt = []     # next half-edge around its face (outer cycle if face -1)
        self.prv = []
        self.face = []    # face id, -1 for the outer boundary
        self.degree = []  # vertex -> current edge count
        self.bnd_in = []  # vertex -> boundary half-edge pointing into it, -1 if interior
        self.face_count = 0

    @property
    def vertex_count(self):
        return len(self.degree)

    def _new_vertex(self):
        self.degree.append(0)
        self.bnd_in.append(-1)
        return len(self.degree) - 1

    def _new_edge(self, u, v):
        h = len(self.org)
        self.org += [u, v]
        self.nxt += [-1, -1]
        self.prv += [-1, -1]
        self.face += [-1, -1]
        self.degree[u] += 1
        self.degree[v] += 1
        return h

    def _link(self, a, b):
        self.nxt[a] = b
        self.prv[b] = a

    def _head(self, h):
        return self.org[h ^ 1]

    def bootstrap(self):
        """Create the first p-gon; vertex 0 is the root."""
        p = self.p
        for _ in range(p):
            self._new_vertex()
        for i in range(p):
            self._new_edge(i, (i + 1) % p)
        for i in range(p):
            inner = 2 * i
            self._link(inner, 2 * ((i + 1) % p))
            self.face[inner] = 0
            outer = 2 * i + 1  # runs (i+1) -> i
            self._link(outer, 2 * ((i - 1) % p) + 1)
            self.bnd_in[i] = outer
        self.face_count = 1

    def close_face(self, h0):
        """Glue one complete p-gon onto the outer side of boundary edge h0."""
        p, q = self.p, self.q
        run = [h0]
        while len(run) < p:
            if self.degree[self._head(run[-1])] < q:
                break
            run.append(self.nxt[run[-1]])
        if len(run) < p:
            while len(run) < p:
                if self.degree[self.org[run[0]]] < q:
                    break
                run.insert(0, self.prv[run[0]])
        length = len(run)
        fid = self.face_count
        self.face_count += 1
        for h in run:
            assert self.face[h] == -1
            self.face[h] = fid

        if length == p:
            # face closes entirely along existing boundary edges
            assert self.org[run[0]] == self._head(run[-1])
            assert self.nxt[run[-1]] == run[0]
            for h in run:
                self.bnd_in[self._head(h)] = -1
            return

        a = self.org[run[0]]
        b = self._head(run[-1])
        h_prev = self.prv[run[0]]
        h_next = self.nxt[run[-1]]

        chain = []
        prev_v = b
        for _ in range(p - length - 1):
            w = self._new_vertex()
            chain.append(self._new_edge(prev_v, w))
            prev_v = w
        chain.append(self._new_edge(prev_v, a))

        self._link(run[-1], chain[0])
        for g1, g2 in zip(chain, chain[1:]):
            self._link(g1, g2)
        self._link(chain[-1], run[0])
        for g in chain:
            self.face[g] = fid

        outer = [g ^ 1 for g in reversed(chain)]
        self._link(h_prev, outer[0])
        for o1, o2 in zip(outer, outer[1:]):
            self._link(o1, o2)
        self._link(outer[-1], h_next)

        for h in run[:-1]:
            self.bnd_in[self._head(h)] = -1  # wheel completed in passing
        for o in outer:
            self.bnd_in[self._head(o)] = o

    def saturate(self, v):
        """Close faces around v until its wheel of q faces is complete."""
        while self.bnd_in[v] != -1:
            self.close_face(self.bnd_in[v])

    def adjacency(self):
        adj = [[] for _ in range(self.vertex_count)]
        for h in range(0, len(self.org), 2):
            u, v = self.org[h], self.org[h + 1]
            adj[u].append(v)
            adj[v].append(u)
        return adj

    def vertex_depths(self):
        adj = self.adjacency()
        dist = [-1] * self.vertex_count
        dist[0] = 0
        queue = deque([0])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return dist

    def audit(self):
        """Structural invariants of the half-edge disk; cheap, O(V + E)."""
        n_half = len(self.org)
        assert n_half % 2 == 0
        edge_count = n_half // 2

        # every face is a closed p-cycle; the outer boundary splits into cycles
        seen = [False] * n_half
        inner_faces = 0
        for h in range(n_half):
            if seen[h]:
                continue
            cycle = [h]
            seen[h] = True
            cur = self.nxt[h]
            while cur != h:
                assert not seen[cur]
                seen[cur] = True
                cycle.append(cur)
                cur = self.nxt[cur]
            fids = {self.face[x] for x in cycle}
            assert len(fids) == 1
            fid = fids.pop()
            if fid >= 0:
                assert len(cycle) == self.p
                inner_faces += 1
            for x in cycle:
                assert self.prv[self.nxt[x]] == self.nxt[self.prv[x]] == x
                assert self.org[self.nxt[x]] == self._head(x)
        assert inner_faces == self.face_count

        # rim vertices appear exactly once on the boundary; degrees within cap
        rim_heads = [self._head(h) for h in range(n_half) if self.face[h] == -1]
        rim_set = set(rim_heads)
        assert len(rim_heads) == len(rim_set)
        for v in range(self.vertex_count):
            assert 0 < self.degree[v] <= self.q
            if self.bnd_in[v] == -1:
                assert self.degree[v] == self.q
                assert v not in rim_set
            else:
                h = self.bnd_in[v]
                assert self.face[h] == -1 and self._head(h) == v

        # rotating around any vertex visits each incident edge exactly once
        at_vertex = [[] for _ in range(self.vertex_count)]
        for h in range(n_half):
            at_vertex[self._head(h)].append(h)
        for v, incoming in enumerate(at_vertex):
            assert len(incoming) == self.degree[v]
            orbit = {incoming[0]}
            cur = self.nxt[incoming[0]] ^ 1
            while cur != incoming[0]:
                assert cur not in orbit
                orbit.add(cur)
                cur = self.nxt[cur] ^ 1
            assert len(orbit) == self.degree[v]

        # Euler characteristic of a disk
        assert self.vertex_count - edge_count + self.face_count == 1


def check_hyperbolic(p: int, q: int):
    if p < 3 or q < 3:
        raise NotHyperbolic(f"need p >= 3 and q >= 3, got ({p}, {q})")
    if (p - 2) * (q - 2) <= 4:
        raise NotHyperbolic(f"({p}-2)({q}-2) = {(p - 2) * (q - 2)} is not > 4")


def build_ball(p: int, q: int, depth: int, node_cap: int = DEFAULT_NODE_CAP, audit: bool = True):
    """Edges of the radius-`depth` ball around a root vertex, BFS-relabeled.

    Returns (edges, node_count); the root is vertex 0. Saturates every vertex
    closer than `depth` to the root, then truncates to the ball.
    """
    check_hyperbolic(p, q)
    if depth == 0:
        return [], 1
    tmap = TessellationMap(p, q)
    tmap.bootstrap()
    while True:
        depths = tmap.vertex_depths()
        pending = [
            v
            for v in range(tmap.vertex_count)
            if depths[v] < depth and tmap.bnd_in[v] != -1
        ]
        if not pending:
            break
        for v in pending:
            tmap.saturate(v)
            if tmap.vertex_count > node_cap:
                raise SizeOverflow(
                    f"tessellation ({p},{q}) depth {depth} exceeds node cap {node_cap}"
                )
    if audit:
        tmap.audit()

    depths = tmap.vertex_depths()
    adj = tmap.adjacency()
    keep = [v for v in range(tmap.vertex_count) if depths[v] <= depth]

    relabel = {0: 0}
    order = deque([0])
    while order:
        u = order.popleft()
        for w in sorted(adj[u]):
            if depths[w] <= depth and w not in relabel:
                relabel[w] = len(relabel)
                order.append(w)
    assert len(relabel) == len(keep)

    edges = set()
    for u in keep:
        for w in adj[u]:
            if depths[w] <= depth:
                nu, nw = relabel[u], relabel[w]
                if nu < nw:
                    edges.add((nu, nw))
    return sorted(edges), len(keep)
