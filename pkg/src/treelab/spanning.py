"""Spanning-tree counting: matrix-tree via the reduced Laplacian, plus a
brute-force subset enumerator used as ground truth on small inputs."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .graphs import GraphError, WeightedMultigraph, is_connected
from .linalg import det_exact, laplacian_of, logdet_spd, reduced_laplacian_exact
from .numeric import log_fraction


class DisconnectedGraphError(GraphError):
    pass


EXACT_DIMENSION_LIMIT = 400


@dataclass(frozen=True)
class TreeCount:
    """Weighted spanning-tree sum: exact value when available, log always."""

    exact: object | None  # int or Fraction
    log_value: float


def tau(g: WeightedMultigraph, exact: bool | None = None) -> TreeCount:
    """Matrix-tree count: determinant of the Laplacian with vertex 0 deleted.

    exact=None computes the exact value whenever the dimension allows it;
    exact=True insists (and errors beyond EXACT_DIMENSION_LIMIT);
    exact=False returns only the log via the float factorization.
    Loops never contribute. Disconnected input is an error since tau = 0
    would poison every downstream log.
    """
    n = g.vertex_count
    if n < 1:
        raise GraphError("graph must have at least one vertex")
    if not is_connected(g):
        raise DisconnectedGraphError("tau of a disconnected graph is 0")
    if n == 1:
        return TreeCount(1, 0.0)
    if exact is True and n - 1 > EXACT_DIMENSION_LIMIT:
        raise GraphError(
            f"exact tau limited to reduced dimension {EXACT_DIMENSION_LIMIT}"
        )
    want_exact = exact if exact is not None else (n - 1 <= EXACT_DIMENSION_LIMIT)
    if want_exact:
        value = det_exact(reduced_laplacian_exact(g, drop=0))
        if isinstance(value, Fraction) and value.denominator == 1:
            value = value.numerator
        if value <= 0:
            raise GraphError("reduced Laplacian determinant not positive")
        return TreeCount(value, log_fraction(value))
    return TreeCount(None, logdet_spd(_reduced_laplacian_sparse(g)))


def _reduced_laplacian_sparse(g: WeightedMultigraph):
    lap = laplacian_of(g)
    from .linalg import SparseSymmetric

    reduced = SparseSymmetric(g.vertex_count - 1)
    for i, j, v in zip(lap.rows, lap.cols, lap.vals):
        if i == 0 or j == 0:
            continue
        reduced.add(i - 1, j - 1, float(v))
    return reduced


BRUTEFORCE_EDGE_LIMIT = 24


def tau_bruteforce(g: WeightedMultigraph):
    """Sum over all spanning edge subsets of the product of weights.

    Enumerates every (n-1)-subset of edges and keeps the acyclic spanning
    ones; parallel edges count as distinct trees. Refuses more than
    BRUTEFORCE_EDGE_LIMIT edges.
    """
    m = len(g.edges)
    if m > BRUTEFORCE_EDGE_LIMIT:
        raise GraphError(f"brute force limited to {BRUTEFORCE_EDGE_LIMIT} edges")
    n = g.vertex_count
    if n == 1:
        return 1
    total = 0
    non_loop = [(i, e) for i, e in enumerate(g.edges) if e[0] != e[1]]
    for subset in combinations(non_loop, n - 1):
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        acyclic = True
        weight = 1
        for _, (u, v, w) in subset:
            ru, rv = find(u), find(v)
            if ru == rv:
                acyclic = False
                break
            parent[ru] = rv
            weight *= w
        if acyclic:
            total += weight
    if isinstance(total, Fraction) and total.denominator == 1:
        total = total.numerator
    return total
