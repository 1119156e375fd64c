"""Finite graph families used by convergence experiments and tests."""

from __future__ import annotations

import networkx as nx
import numpy as np

from .graphs import WeightedMultigraph, build_graph, is_connected


def path_graph(n: int, weight=1) -> WeightedMultigraph:
    return build_graph(n, [(i, i + 1, weight) for i in range(n - 1)])


def cycle_graph(n: int, weight=1) -> WeightedMultigraph:
    edges = [(i, (i + 1) % n, weight) for i in range(n)]
    return build_graph(n, edges)


def complete_graph(n: int, weight=1) -> WeightedMultigraph:
    edges = [(i, j, weight) for i in range(n) for j in range(i + 1, n)]
    return build_graph(n, edges)


def star_graph(leaves: int, weight=1) -> WeightedMultigraph:
    return build_graph(leaves + 1, [(0, i + 1, weight) for i in range(leaves)])


def torus_graph(n: int, weight=1) -> WeightedMultigraph:
    """n x n square lattice with wraparound in both directions."""
    def vid(i, j):
        return (i % n) * n + (j % n)

    edges = []
    for i in range(n):
        for j in range(n):
            edges.append((vid(i, j), vid(i + 1, j), weight))
            edges.append((vid(i, j), vid(i, j + 1), weight))
    return build_graph(n * n, edges)


def random_regular_graph(d: int, n: int, seed: int) -> WeightedMultigraph:
    """Connected random d-regular simple graph (resamples until connected)."""
    for attempt in range(64):
        g = nx.random_regular_graph(d, n, seed=seed + 1_000_003 * attempt)
        if nx.is_connected(g):
            return build_graph(n, [(u, v, 1) for u, v in sorted(g.edges())])
    raise RuntimeError("could not sample a connected regular graph")


def random_connected_multigraph(
    rng: np.random.Generator,
    max_vertices: int = 7,
    max_edges: int = 12,
    max_weight: int = 5,
    allow_loops: bool = True,
) -> WeightedMultigraph:
    """Small random connected multigraph with integer weights.

    Loops and parallel edges are included deliberately; a random spanning
    tree guarantees connectivity before extra edges are thrown in.
    """
    n = int(rng.integers(1, max_vertices + 1))
    edges = []
    order = rng.permutation(n)
    for i in range(1, n):
        u = int(order[int(rng.integers(0, i))])
        v = int(order[i])
        edges.append((u, v, int(rng.integers(1, max_weight + 1))))
    extra = int(rng.integers(0, max(1, max_edges - len(edges)) + 1))
    for _ in range(extra):
        u = int(rng.integers(0, n))
        if allow_loops and rng.random() < 0.15:
            v = u
        else:
            v = int(rng.integers(0, n))
            if u == v and not allow_loops:
                continue
        edges.append((u, v, int(rng.integers(1, max_weight + 1))))
    g = build_graph(n, edges)
    assert is_connected(g)
    return g
