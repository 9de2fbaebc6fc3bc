"""Geodesic traffic between boundary spheres: totals, ball traffic, loads.

All pair sums are ordered and include the diagonal. Geometry (distances,
geodesic counts, minimum depth over geodesics) is computed once per source by
a vectorized BFS; rates enter only through a per-distance lookup table, so a
single integer census over (distance, h) pairs serves every rate function.

Determinism: sources are processed in fixed chunks of CHUNK_SIZE and partial
results are folded in ascending chunk order with compensated accumulation, so
results are bit-identical for any worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import EmptyBoundary, InvalidRate, SigmaOverflow
from .graphs import DistanceRow, Graph

CHUNK_SIZE = 64
_SIGMA_LIMIT = 2.0**53


@dataclass(frozen=True)
class ExponentialRate:
    """R(d) = beta^-d, computed as exp(-d ln beta)."""

    beta: float

    def __post_init__(self):
        if not self.beta > 1.0:
            raise InvalidRate(f"beta must be > 1, got {self.beta}")

    def eval(self, d: int) -> float:
        return math.exp(-d * math.log(self.beta))

    def descriptor(self) -> dict:
        return {"variant": "exponential", "beta": self.beta}


@dataclass(frozen=True)
class PolynomialRate:
    """R(d) = (1+d)^-alpha; the polynomially-decaying control."""

    alpha: float

    def __post_init__(self):
        if not self.alpha > 0.0:
            raise InvalidRate(f"alpha must be > 0, got {self.alpha}")

    def eval(self, d: int) -> float:
        return (1.0 + d) ** -self.alpha

    def descriptor(self) -> dict:
        return {"variant": "polynomial", "alpha": self.alpha}


@dataclass(frozen=True)
class TableRate:
    """R(d) = values[d], zero beyond the table; must be non-increasing."""

    values: tuple

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if any(v < 0.0 for v in vals):
            raise InvalidRate("table rates must be non-negative")
        if any(b > a for a, b in zip(vals, vals[1:])):
            raise InvalidRate("table rates must be non-increasing")

    def eval(self, d: int) -> float:
        return self.values[d] if d < len(self.values) else 0.0

    def descriptor(self) -> dict:
        return {"variant": "table", "values": list(self.values)}


def rate_eval(f, d: int) -> float:
    if d < 0:
        raise ValueError(f"distance must be >= 0, got {d}")
    return f.eval(d)


def rate_table(f, max_d: int) -> np.ndarray:
    return np.array([rate_eval(f, d) for d in range(max_d + 1)], dtype=np.float64)


@dataclass(frozen=True)
class GeodesicField:
    """Per-source geodesic data: distances, path counts, min depth on paths.

    sigma values are exact Python integers; mindepth[v] is the smallest root
    depth seen on any geodesic from source to v, endpoints included.
    """

    source: int
    dist: DistanceRow
    sigma: tuple
    mindepth: tuple


def geodesic_field(g: Graph, source: int) -> GeodesicField:
    if not 0 <= source < g.node_count:
        raise IndexError(f"source {source} out of range")
    n = g.node_count
    dist = [-1] * n
    sigma = [0] * n
    md = [0] * n
    dist[source] = 0
    sigma[source] = 1
    md[source] = g.depth[source]
    order = [source]
    head = 0
    while head < len(order):
        v = order[head]
        head += 1
        for w in g.adjacency[v]:
            if dist[w] < 0:
                dist[w] = dist[v] + 1
                md[w] = g.depth[w]
                order.append(w)
    for v in order[1:]:
        target = dist[v] - 1
        best = md[v]
        s = 0
        for u in g.adjacency[v]:
            if dist[u] == target:
                s += sigma[u]
                if md[u] < best:
                    best = md[u]
        sigma[v] = s
        md[v] = best
    return GeodesicField(
        source=source,
        dist=DistanceRow(source=source, dist=tuple(dist)),
        sigma=tuple(sigma),
        mindepth=tuple(md),
    )


def pair_h(field: GeodesicField, y: int) -> int:
    """Minimal root depth over all geodesics from field.source to y."""
    return field.mindepth[y]


# ---------------------------------------------------------------------------
# vectorized per-source passes


class _Arrays:
    """CSR adjacency plus depth vector, shared read-only across workers."""

    def __init__(self, g: Graph):
        self.n = g.node_count
        degrees = np.array([len(a) for a in g.adjacency], dtype=np.int64)
        self.indptr = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(degrees, out=self.indptr[1:])
        self.indices = np.fromiter(
            (w for adj in g.adjacency for w in adj),
            dtype=np.int64,
            count=int(self.indptr[-1]),
        )
        self.depth = np.array(g.depth, dtype=np.int64)


def _gather(arrs: _Arrays, nodes: np.ndarray):
    """Flattened (source, neighbor) edge pairs out of a node subset."""
    starts = arrs.indptr[nodes]
    lens = arrs.indptr[nodes + 1] - starts
    total = int(lens.sum())
    if total == 0:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty
    offs = np.repeat(np.cumsum(lens) - lens, lens)
    pos = np.arange(total, dtype=np.int64) - offs + np.repeat(starts, lens)
    return np.repeat(nodes, lens), arrs.indices[pos]


def _source_pass(arrs: _Arrays, s: int, targets: np.ndarray = None,
                 need_sigma: bool = True):
    """BFS from s with optional geodesic counting and min-depth propagation.

    Returns (dist, sigma, mindepth, frontiers). The walk stops once every
    target has been leveled (targets' sigma and mindepth are final when their
    level completes), which also keeps sigma within exact float64 range on
    graphs much larger than the traffic depth; an overflow check guards the
    rest.
    """
    n = arrs.n
    dist = np.full(n, -1, dtype=np.int64)
    sigma = np.zeros(n, dtype=np.float64)
    md = np.zeros(n, dtype=np.int64)
    dist[s] = 0
    sigma[s] = 1.0
    md[s] = arrs.depth[s]
    remaining = -1
    if targets is not None:
        remaining = int(targets.size) - int(np.count_nonzero(targets == s))
    frontier = np.array([s], dtype=np.int64)
    frontiers = [frontier]
    level = 0
    while remaining != 0:
        srcs, nbrs = _gather(arrs, frontier)
        if nbrs.size == 0:
            break
        fresh = nbrs[dist[nbrs] == -1]
        if fresh.size == 0:
            break
        new_nodes = np.unique(fresh)
        dist[new_nodes] = level + 1
        md[new_nodes] = arrs.depth[new_nodes]
        into = dist[nbrs] == level + 1
        tgt = nbrs[into]
        src = srcs[into]
        if need_sigma:
            sigma += np.bincount(tgt, weights=sigma[src], minlength=n)
            if float(sigma[new_nodes].max()) >= _SIGMA_LIMIT:
                raise SigmaOverflow(
                    "geodesic counts exceed exact float64 range; "
                    "use geodesic_field() for exact big-integer counts"
                )
        np.minimum.at(md, tgt, md[src])
        if targets is not None:
            remaining -= int(np.count_nonzero(dist[targets] == level + 1))
        frontier = new_nodes
        frontiers.append(frontier)
        level += 1
    return dist, sigma, md, frontiers


def _chunks(items, size=CHUNK_SIZE):
    return [items[i : i + size] for i in range(0, len(items), size)]


def _run_chunks(fn, chunks, threads):
    if threads <= 1:
        return [fn(c) for c in chunks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, chunks))


def boundary_nodes(g: Graph, n: int) -> tuple:
    if n < 0 or n > g.max_depth:
        raise EmptyBoundary(
            f"no nodes at depth {n}; graph has max depth {g.max_depth}"
        )
    return g.layers[n]


def pair_census(g: Graph, n: int, threads: int = 1) -> np.ndarray:
    """Integer counts of ordered boundary pairs by (distance, h).

    Shape (2n+1, n+1); rate-independent, so one census serves every beta.
    """
    boundary = np.array(boundary_nodes(g, n), dtype=np.int64)
    arrs = _Arrays(g)
    width = n + 1
    size = (2 * n + 1) * width

    def work(chunk):
        local = np.zeros(size, dtype=np.int64)
        for s in chunk:
            dist, _, md, _ = _source_pass(
                arrs, int(s), targets=boundary, need_sigma=False
            )
            flat = dist[boundary] * width + md[boundary]
            local += np.bincount(flat, minlength=size)
        return local

    total = np.zeros(size, dtype=np.int64)
    for part in _run_chunks(work, _chunks(list(boundary)), threads):
        total += part
    return total.reshape(2 * n + 1, width)


@dataclass(frozen=True)
class TrafficReport:
    """Traffic totals at depth n: T, the prefix vector T_r, and the per-h
    histogram (pair counts and rate mass); node_loads filled in separately."""

    n: int
    rate: object
    T: float
    T_r: tuple
    h_counts: tuple
    h_mass: tuple
    node_loads: tuple = None

    def ratio(self, r: int) -> float:
        return self.T_r[r] / self.T

    def core_radius_for(self, epsilons) -> dict:
        return {eps: core_radius(self, eps) for eps in epsilons}

    def rate_descriptor(self) -> dict:
        return self.rate.descriptor()


def traffic_totals(g: Graph, f, n: int, threads: int = 1,
                   census: np.ndarray = None) -> TrafficReport:
    """T and T_r over ordered boundary pairs, diagonal included.

    A pair's full rate lands in T_r as soon as its minimum-depth geodesic
    enters B(root, r). Sums use math.fsum in a fixed (h, d) term order, so
    T_r[n] == T exactly and results do not depend on worker count.
    """
    if census is None:
        census = pair_census(g, n, threads=threads)
    rates = rate_table(f, census.shape[0] - 1)

    h_counts = []
    h_mass = []
    terms = []  # ordered by (h, then d); prefixes give T_r
    t_r = []
    for h in range(n + 1):
        col = census[:, h]
        (nz,) = col.nonzero()
        h_counts.append(int(col.sum()))
        cell_terms = [float(col[d]) * rates[d] for d in nz]
        h_mass.append(math.fsum(cell_terms))
        terms.extend(cell_terms)
        t_r.append(math.fsum(terms))
    total = t_r[-1]
    return TrafficReport(
        n=n,
        rate=f,
        T=total,
        T_r=tuple(t_r),
        h_counts=tuple(h_counts),
        h_mass=tuple(h_mass),
    )


def node_loads(g: Graph, f, n: int, threads: int = 1,
               include_endpoints: bool = False) -> tuple:
    """Per-node relay load with equal splitting across geodesics.

    load(v) = sum over ordered boundary pairs (x, y), x != y, v not an
    endpoint, of rate(d(x,y)) * sigma_xy(v) / sigma_xy; computed by one
    Brandes-style dependency pass per source with per-target rate weights.
    """
    boundary = np.array(boundary_nodes(g, n), dtype=np.int64)
    arrs = _Arrays(g)
    rates = rate_table(f, 2 * n)
    nn = arrs.n

    def work(chunk):
        acc = np.zeros(nn)
        comp = np.zeros(nn)
        for s in chunk:
            s = int(s)
            dist, sigma, _, frontiers = _source_pass(arrs, s, targets=boundary)
            weight = np.zeros(nn)
            weight[boundary] = rates[dist[boundary]]
            weight[s] = 0.0
            delta = np.zeros(nn)
            coef = np.zeros(nn)
            for level in range(len(frontiers) - 1, 0, -1):
                nodes = frontiers[level]
                coef[nodes] = (weight[nodes] + delta[nodes]) / sigma[nodes]
                below = frontiers[level - 1]
                srcs, nbrs = _gather(arrs, below)
                vals = np.where(dist[nbrs] == level, coef[nbrs], 0.0)
                sums = np.bincount(srcs, weights=vals, minlength=nn)
                delta[below] = sigma[below] * sums[below]
            delta[s] = 0.0
            if include_endpoints:
                delta[s] = math.fsum(weight[boundary])
                delta[boundary] += weight[boundary]
            # Kahan step, elementwise
            y = delta - comp
            t = acc + y
            comp = (t - acc) - y
            acc = t
        return acc, comp

    total = np.zeros(nn)
    carry = np.zeros(nn)
    for part_acc, part_comp in _run_chunks(work, _chunks(list(boundary)), threads):
        for part in (part_acc, -part_comp):
            y = part - carry
            t = total + y
            carry = (t - total) - y
            total = t
    return tuple(float(x) for x in total)


def core_radius(report: TrafficReport, epsilon: float) -> int:
    """Minimal r with T_r / T >= 1 - epsilon."""
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must be in (0,1), got {epsilon}")
    threshold = 1.0 - epsilon
    for r in range(report.n + 1):
        if report.T_r[r] / report.T >= threshold:
            return r
    return report.n
