"""Weighted multigraphs, rooted graphs, balls, wired quotients, and
domination witnesses.

Graphs are immutable after construction. Vertex ids are dense integers
0..n-1. Parallel edges and loops are first-class and never merged; weight
aggregation happens only inside the linear-algebra layer.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Weight = float  # any positive real-valued number type (int, float, Fraction)


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class WeightedMultigraph:
    """Finite multigraph with positive edge weights; u == v is a loop."""

    vertex_count: int
    edges: tuple[tuple[int, int, Weight], ...]

    def walk_degree(self, x: int) -> Weight:
        """Total incident weight at x, loops counted once."""
        total = 0
        for u, v, w in self.edges:
            if u == x or v == x:
                total += w
        return total

    def laplacian_diagonal(self, x: int) -> Weight:
        """Sum of non-loop incident weights at x."""
        total = 0
        for u, v, w in self.edges:
            if u == x or v == x:
                if u != v:
                    total += w
        return total

    def adjacency_lists(self) -> list[list[int]]:
        """Neighbor lists (loops ignored) for traversals."""
        adj: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for u, v, _ in self.edges:
            if u != v:
                adj[u].append(v)
                adj[v].append(u)
        return adj


@dataclass(frozen=True)
class RootedGraph:
    graph: WeightedMultigraph
    root: int

    def __post_init__(self):
        if not 0 <= self.root < self.graph.vertex_count:
            raise GraphError(f"root {self.root} out of range")


@dataclass(frozen=True)
class DegreeReport:
    """Per-vertex non-loop degree (Laplacian diagonal) and full walk degree."""

    laplacian_diagonal: list
    walk_degree: list


@dataclass(frozen=True)
class DominationWitness:
    """Root-preserving weight-increasing embedding of `small` into `large`."""

    small: RootedGraph
    large: RootedGraph
    vertex_map: tuple[int, ...]
    edge_map: tuple[int, ...]


def build_graph(vertex_count: int, edges: Iterable[Sequence]) -> WeightedMultigraph:
    """Validate and freeze a weighted multigraph.

    Rejects non-positive or non-finite weights and out-of-range endpoints.
    Multiplicity and loops are preserved exactly as given.
    """
    if vertex_count < 1:
        raise GraphError("vertex_count must be >= 1")
    frozen = []
    for e in edges:
        u, v, w = e
        if not (0 <= u < vertex_count and 0 <= v < vertex_count):
            raise GraphError(f"edge ({u},{v}) endpoint out of range")
        if isinstance(w, float) and not math.isfinite(w):
            raise GraphError(f"edge ({u},{v}) has non-finite weight {w}")
        if not w > 0:
            raise GraphError(f"edge ({u},{v}) has non-positive weight {w}")
        frozen.append((int(u), int(v), w))
    return WeightedMultigraph(vertex_count, tuple(frozen))


def degree_report(g: WeightedMultigraph) -> DegreeReport:
    lap = [0] * g.vertex_count
    walk = [0] * g.vertex_count
    for u, v, w in g.edges:
        if u == v:
            walk[u] += w
        else:
            lap[u] += w
            lap[v] += w
            walk[u] += w
            walk[v] += w
    return DegreeReport(lap, walk)


def distances_from(g: WeightedMultigraph, source: int) -> list:
    """Hop distances from source (every edge counts 1); None if unreachable."""
    dist: list = [None] * g.vertex_count
    dist[source] = 0
    adj = g.adjacency_lists()
    q = deque([source])
    while q:
        x = q.popleft()
        for y in adj[x]:
            if dist[y] is None:
                dist[y] = dist[x] + 1
                q.append(y)
    return dist


def is_connected(g: WeightedMultigraph) -> bool:
    return all(d is not None for d in distances_from(g, 0))


def ball_with_map(g: RootedGraph, radius: int) -> tuple[RootedGraph, list[int]]:
    """Ball plus the list of original ids, ordered by (distance, id).

    The ordering makes ball(r) vertices a prefix of ball(r+1) vertices, so
    nested balls are literally nested as labeled graphs.
    """
    if radius < 0:
        raise GraphError("radius must be >= 0")
    dist = distances_from(g.graph, g.root)
    keep = [x for x in range(g.graph.vertex_count) if dist[x] is not None and dist[x] <= radius]
    keep.sort(key=lambda x: (dist[x], x))
    new_id = {x: i for i, x in enumerate(keep)}
    edges = [
        (new_id[u], new_id[v], w)
        for u, v, w in g.graph.edges
        if u in new_id and v in new_id
    ]
    sub = WeightedMultigraph(len(keep), tuple(edges))
    return RootedGraph(sub, new_id[g.root]), keep


def ball(g: RootedGraph, radius: int) -> RootedGraph:
    """Induced subgraph on vertices within hop distance `radius` of the root."""
    return ball_with_map(g, radius)[0]


def wired_quotient(g: RootedGraph, radius: int, s) -> tuple[RootedGraph, int]:
    """Collapse everything outside the radius-`radius` ball to one vertex z.

    Edges crossing the boundary are redirected to z with their weight kept;
    additionally every ball vertex gets an edge of conductance s to z
    (omitted when s == 0). Returns (quotient rooted at the original root, z).
    """
    if s < 0:
        raise GraphError("s must be >= 0")
    dist = distances_from(g.graph, g.root)
    inside = [x for x in range(g.graph.vertex_count) if dist[x] is not None and dist[x] <= radius]
    inside.sort(key=lambda x: (dist[x], x))
    outside_exists = len(inside) < g.graph.vertex_count
    if not outside_exists and s == 0:
        raise GraphError(
            "ball exhausts the graph and s = 0: no boundary vertex and no "
            "killing, resistance to infinity is undefined"
        )
    new_id = {x: i for i, x in enumerate(inside)}
    z = len(inside)
    edges = []
    for u, v, w in g.graph.edges:
        iu, iv = u in new_id, v in new_id
        if iu and iv:
            edges.append((new_id[u], new_id[v], w))
        elif iu:
            edges.append((new_id[u], z, w))
        elif iv:
            edges.append((new_id[v], z, w))
        # edges entirely outside vanish into z (would be loops at z)
    if s != 0:
        for x in inside:
            edges.append((new_id[x], z, s))
    quotient = WeightedMultigraph(z + 1, tuple(edges))
    return RootedGraph(quotient, new_id[g.root]), z


def domination_failure(w: DominationWitness) -> str | None:
    """First violated witness condition, or None if the witness verifies."""
    gs, gl = w.small.graph, w.large.graph
    if len(w.vertex_map) != gs.vertex_count:
        return "vertex_map does not cover the small graph"
    if len(w.edge_map) != len(gs.edges):
        return "edge_map does not cover the small graph's edges"
    for x, y in enumerate(w.vertex_map):
        if not 0 <= y < gl.vertex_count:
            return f"vertex_map sends {x} out of range"
    if len(set(w.vertex_map)) != len(w.vertex_map):
        return "vertex_map is not injective"
    if len(set(w.edge_map)) != len(w.edge_map):
        return "edge_map is not injective"
    if w.vertex_map[w.small.root] != w.large.root:
        return "vertex_map does not send root to root"
    for i, j in enumerate(w.edge_map):
        if not 0 <= j < len(gl.edges):
            return f"edge_map sends edge {i} out of range"
        u, v, ws = gs.edges[i]
        a, b, wl = gl.edges[j]
        if {w.vertex_map[u], w.vertex_map[v]} != {a, b}:
            return f"edge {i} endpoints do not match under vertex_map"
        if ws > wl:
            return f"edge {i} weight {ws} exceeds image weight {wl}"
    return None


def verify_domination(w: DominationWitness) -> bool:
    """Pure check of all witness invariants; no search is performed."""
    return domination_failure(w) is None


def identity_witness(g: RootedGraph) -> DominationWitness:
    n = g.graph.vertex_count
    m = len(g.graph.edges)
    return DominationWitness(g, g, tuple(range(n)), tuple(range(m)))


# Text graph files: header `graph <vertex_count> <edge_count> root=<id>`,
# then one `u v w` line per edge. 17 significant digits round-trip floats
# bit-exactly.

def format_weight(w) -> str:
    if isinstance(w, int):
        return str(w)
    if isinstance(w, Fraction):
        return str(w) if w.denominator != 1 else str(w.numerator)
    return repr(float(w))


def parse_weight(text: str):
    if "/" in text:
        return Fraction(text)
    try:
        return int(text)
    except ValueError:
        return float(text)


def write_graph_file(path, g: RootedGraph) -> None:
    lines = [f"graph {g.graph.vertex_count} {len(g.graph.edges)} root={g.root}"]
    for u, v, w in g.graph.edges:
        lines.append(f"{u} {v} {format_weight(w)}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_graph_file(path) -> RootedGraph:
    with open(path) as fh:
        tokens = fh.read().split("\n")
    header = tokens[0].split()
    if len(header) != 4 or header[0] != "graph" or not header[3].startswith("root="):
        raise GraphError(f"bad graph file header: {tokens[0]!r}")
    n, m = int(header[1]), int(header[2])
    root = int(header[3][len("root="):])
    edges = []
    for line in tokens[1:]:
        line = line.strip()
        if not line:
            continue
        u, v, w = line.split()
        edges.append((int(u), int(v), parse_weight(w)))
    if len(edges) != m:
        raise GraphError(f"expected {m} edges, found {len(edges)}")
    return RootedGraph(build_graph(n, edges), root)
