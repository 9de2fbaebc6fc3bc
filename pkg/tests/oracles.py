"""Independent brute-force oracles used to pin engine results.

Everything here recomputes from first principles (no shared code paths with
the engine beyond the Graph container): Floyd-Warshall distances, explicit
enumeration of every geodesic path, and traffic/load accumulation path by
path with equal splitting.
"""

import math


def floyd_warshall(g):
    n = g.node_count
    inf = float("inf")
    d = [[inf] * n for _ in range(n)]
    for v in range(n):
        d[v][v] = 0
    for u in range(n):
        for w in g.adjacency[u]:
            d[u][w] = 1
    for k in range(n):
        dk = d[k]
        for i in range(n):
            dik = d[i][k]
            if dik == inf:
                continue
            row = d[i]
            for j in range(n):
                alt = dik + dk[j]
                if alt < row[j]:
                    row[j] = alt
    return d


def bfs_dist(g, source):
    dist = [-1] * g.node_count
    dist[source] = 0
    queue = [source]
    head = 0
    while head < len(queue):
        u = queue[head]
        head += 1
        for w in g.adjacency[u]:
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def all_geodesics(g, x, y):
    """Every geodesic node-path from x to y, as tuples."""
    dist = bfs_dist(g, x)
    paths = []
    stack = [(y, (y,))]
    while stack:
        node, suffix = stack.pop()
        if node == x:
            paths.append(suffix)
            continue
        for w in g.adjacency[node]:
            if dist[w] == dist[node] - 1:
                stack.append((w, (w,) + suffix))
    return paths


def brute_traffic(g, rate, n):
    """(T, T_r, loads) by enumerating all geodesics for all ordered pairs."""
    boundary = g.layers[n]
    loads = [0.0] * g.node_count
    t_terms = []
    mass_by_h = [[] for _ in range(n + 1)]
    for x in boundary:
        dist = bfs_dist(g, x)
        for y in boundary:
            paths = all_geodesics(g, x, y)
            w = rate.eval(dist[y])
            t_terms.append(w)
            h = min(min(g.depth[v] for v in p) for p in paths)
            mass_by_h[h].append(w)
            if x != y:
                share = w / len(paths)
                for p in paths:
                    for v in p[1:-1]:
                        loads[v] += share
    total = math.fsum(t_terms)
    t_r = [
        math.fsum(t for h in range(r + 1) for t in mass_by_h[h])
        for r in range(n + 1)
    ]
    return total, t_r, loads


def brute_pair_h(g, x, y):
    return min(min(g.depth[v] for v in p) for p in all_geodesics(g, x, y))
