"""Deterministic graph family constructors: k-ary trees, (p,q) tessellation
balls, square-grid controls, and edge-list ingestion."""

from __future__ import annotations

from dataclasses import dataclass

from . import tessellation
from .errors import EvenSide, ParseError, SizeOverflow
from .graphs import Graph, build_graph

DEFAULT_NODE_CAP = 1 << 24


@dataclass(frozen=True)
class FamilySpec:
    """Parameters naming one generated graph family.

    variant is one of "tree" (k, root_degree), "tessellation" (p, q),
    "grid" (side) or "edge_list" (source path); depth is the truncation
    radius for tree/tessellation and ignored by grid and edge_list.
    """

    variant: str
    depth: int = 0
    k: int | None = None
    root_degree: int | None = None
    p: int | None = None
    q: int | None = None
    side: int | None = None
    source: str | None = None

    def descriptor(self) -> dict:
        out = {"variant": self.variant}
        for key in ("k", "root_degree", "p", "q", "side", "source"):
            val = getattr(self, key)
            if val is not None:
                out[key] = val
        if self.variant in ("tree", "tessellation"):
            out["depth"] = self.depth
        return out


def gen_kary_tree(k: int, depth: int, root_degree: int | None = None,
                  node_cap: int = DEFAULT_NODE_CAP) -> Graph:
    """Rooted tree: root has `root_degree` children (default k), every other
    internal node has k children, leaves at distance `depth`.

    Nodes are numbered in BFS order, so layer t occupies a contiguous range.
    """
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    if depth < 0:
        raise ValueError(f"depth must be >= 0, got {depth}")
    if root_degree is None:
        root_degree = k
    if root_degree < 1:
        raise ValueError(f"root_degree must be >= 1, got {root_degree}")

    total = 1
    width = root_degree
    for _ in range(depth):
        total += width
        if total > node_cap:
            raise SizeOverflow(
                f"tree k={k} depth={depth} exceeds node cap {node_cap}"
            )
        width *= k
    if depth == 0:
        return build_graph([], 0)

    edges = []
    next_id = 1
    frontier = [0]
    for level in range(depth):
        children_per = root_degree if level == 0 else k
        new_frontier = []
        for parent in frontier:
            for _ in range(children_per):
                edges.append((parent, next_id))
                new_frontier.append(next_id)
                next_id += 1
        frontier = new_frontier
    return build_graph(edges, 0)


def gen_tessellation(p: int, q: int, depth: int,
                     node_cap: int = DEFAULT_NODE_CAP) -> Graph:
    """Ball of radius `depth` in the tessellation by p-gons with vertex
    degree q; requires (p-2)(q-2) > 4."""
    if depth < 0:
        raise ValueError(f"depth must be >= 0, got {depth}")
    edges, _ = tessellation.build_ball(p, q, depth, node_cap=node_cap)
    return build_graph(edges, 0)


def gen_grid(side: int) -> Graph:
    """side x side square lattice with 4-neighbor adjacency, rooted at the
    center; side must be odd so the center exists."""
    if side < 1:
        raise ValueError(f"side must be >= 1, got {side}")
    if side % 2 == 0:
        raise EvenSide(f"side must be odd, got {side}")
    if side == 1:
        return build_graph([], 0)
    edges = []
    for i in range(side):
        for j in range(side):
            v = i * side + j
            if j + 1 < side:
                edges.append((v, v + 1))
            if i + 1 < side:
                edges.append((v, v + side))
    return build_graph(edges, (side * side) // 2)


def load_edge_list(text: str) -> Graph:
    """Parse whitespace-separated "u v" pairs; '#' starts a comment, and a
    "# root R" comment sets the root (default 0)."""
    root = 0
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line.startswith("#"):
            tokens = line[1:].split()
            if len(tokens) == 2 and tokens[0] == "root":
                try:
                    root = int(tokens[1])
                except ValueError:
                    raise ParseError(f"bad root directive {line!r}", lineno) from None
            continue
        if "#" in line:
            line = line[: line.index("#")]
        tokens = line.split()
        if not tokens:
            continue
        if len(tokens) % 2 != 0:
            raise ParseError(f"odd token count in {raw!r}", lineno)
        try:
            values = [int(t) for t in tokens]
        except ValueError:
            raise ParseError(f"non-integer token in {raw!r}", lineno) from None
        edges.extend(zip(values[0::2], values[1::2]))
    return build_graph(edges, root)


def family_graph(spec: FamilySpec, depth: int | None = None,
                 node_cap: int = DEFAULT_NODE_CAP) -> Graph:
    """Instantiate a FamilySpec, optionally overriding its depth."""
    d = spec.depth if depth is None else depth
    if spec.variant == "tree":
        return gen_kary_tree(spec.k, d, spec.root_degree, node_cap=node_cap)
    if spec.variant == "tessellation":
        return gen_tessellation(spec.p, spec.q, d, node_cap=node_cap)
    if spec.variant == "grid":
        return gen_grid(spec.side)
    if spec.variant == "edge_list":
        with open(spec.source, encoding="utf-8") as fh:
            return load_edge_list(fh.read())
    raise ValueError(f"unknown family variant {spec.variant!r}")
