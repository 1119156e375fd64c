"""Network random walk: exact return probabilities and the Abel-regularized
entropy series.

The walk convention: every incident edge weight counts once in the walk
degree, and a loop of weight w at x induces a self-transition of
probability w / walk_degree(x). With D = diag(walk_degree) this keeps
D(I - P) equal to the loop-blind Laplacian, so loops change the walk (and
the series term) without changing any spanning-tree count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import scipy.sparse

from .graphs import GraphError, RootedGraph, degree_report
from .numeric import NEG_INF, pairwise_sum, richardson_extrapolate

EXACT_K_LIMIT = 64
EXACT_SIZE_LIMIT = 4000

DEFAULT_ABEL_GRID = tuple(1.0 - 2.0**-j for j in range(3, 13))
# Exponent ladder for Richardson in x = 1 - c. Repeated integers absorb
# x**m * log(x) terms; the half-integers cover 1-dimensional recurrence.
DEFAULT_EXPONENTS = (0.5, 1.0, 1.0, 1.5, 2.0, 2.0, 2.5, 3.0, 3.0)


@dataclass(frozen=True)
class ReturnSeries:
    """Return probabilities p_1..p_K at the root, with exactness bookkeeping.

    probabilities[k-1] is p_k; entries are Fractions on the exact path and
    floats otherwise. exactness_radius is 2r when the series was computed
    from a radius-r ball with true walk degrees (the walk cannot feel
    anything beyond the ball within 2r steps); None means the graph was
    complete, so every k is exact. spectral_radius_bound is an upper bound
    on the walk's spectral radius, used for provable tail bounds.
    """

    probabilities: tuple
    root_walk_degree: object
    exactness_radius: int | None
    spectral_radius_bound: float = 1.0


@dataclass
class SeriesEntropyTerm:
    """log(walk degree) minus the Abel limit of sum c^k p_k / k."""

    value: object  # float or the -inf sentinel
    abel_values: list[tuple[float, float]]
    tail_bound: object  # float or "unknown"
    uncertainty: float
    inconclusive: bool = False
    diverged: bool = False
    used_points: list[float] = field(default_factory=list)
    extrap_gap: float = 0.0


def _exact_eligible(g, walk_degrees, K) -> bool:
    if K > EXACT_K_LIMIT or g.vertex_count > EXACT_SIZE_LIMIT:
        return False
    rational = lambda x: isinstance(x, (int, Fraction))
    return all(rational(w) for _, _, w in g.edges) and all(
        rational(d) for d in walk_degrees
    )


def return_probs(
    g: RootedGraph,
    K: int,
    walk_degrees=None,
    exact: bool | None = None,
    exact_radius: int | None = None,
    spectral_radius_bound: float = 1.0,
) -> ReturnSeries:
    """p_k = (P^k)(root, root) for k = 1..K by repeated operator application.

    walk_degrees supplies the true walk degrees when g is a ball of a larger
    graph: transitions are then taken with the true denominators and mass
    that exits the ball is dropped, which leaves every p_k with k <= 2r
    exact. Without it the graph is treated as complete.
    """
    if K < 1:
        raise GraphError("K must be >= 1")
    graph = g.graph
    n = graph.vertex_count
    if walk_degrees is None:
        walk_degrees = degree_report(graph).walk_degree
        if exact_radius is None:
            exact_radius = None  # complete graph: exact for every k
    else:
        if len(walk_degrees) != n:
            raise GraphError("walk_degrees length mismatch")
        if exact_radius is None:
            raise GraphError("a ball with true degrees needs exact_radius")
    local = degree_report(graph).walk_degree
    for x in range(n):
        if walk_degrees[x] <= 0:
            raise GraphError(f"vertex {x} has no incident weight")
        if float(local[x]) > float(walk_degrees[x]) * (1 + 1e-12):
            raise GraphError(f"true walk degree at {x} below the ball degree")
    if exact_radius is not None and K > 2 * exact_radius:
        raise GraphError(
            f"K={K} exceeds the exactness horizon 2r={2 * exact_radius} of the ball"
        )
    use_exact = exact if exact is not None else _exact_eligible(graph, walk_degrees, K)
    root = g.root
    if use_exact:
        probs = _return_probs_exact(graph, root, walk_degrees, K)
    else:
        probs = _return_probs_float(graph, root, walk_degrees, K)
    for k, p in enumerate(probs, start=1):
        if not -1e-9 <= float(p) <= 1 + 1e-9:
            raise AssertionError(f"p_{k} = {p} outside [0, 1]")
    return ReturnSeries(
        tuple(probs),
        walk_degrees[root],
        2 * exact_radius if exact_radius is not None else None,
        spectral_radius_bound,
    )


def _return_probs_exact(graph, root, walk_degrees, K):
    trans: list[list[tuple[int, Fraction]]] = [[] for _ in range(graph.vertex_count)]
    for u, v, w in graph.edges:
        if u == v:
            trans[u].append((u, Fraction(w) / Fraction(walk_degrees[u])))
        else:
            trans[u].append((v, Fraction(w) / Fraction(walk_degrees[u])))
            trans[v].append((u, Fraction(w) / Fraction(walk_degrees[v])))
    vec = {root: Fraction(1)}
    probs = []
    for _ in range(K):
        nxt: dict[int, Fraction] = {}
        for x, mass in vec.items():
            for y, p in trans[x]:
                nxt[y] = nxt.get(y, Fraction(0)) + mass * p
        vec = nxt
        probs.append(vec.get(root, Fraction(0)))
    return probs


def _return_probs_float(graph, root, walk_degrees, K):
    n = graph.vertex_count
    deg = np.array([float(d) for d in walk_degrees])
    rows, cols, vals = [], [], []
    for u, v, w in graph.edges:
        if u == v:
            rows.append(u)
            cols.append(u)
            vals.append(float(w) / deg[u])
        else:
            rows.append(v)
            cols.append(u)
            vals.append(float(w) / deg[u])
            rows.append(u)
            cols.append(v)
            vals.append(float(w) / deg[v])
    # pt[y, x] = P(x -> y); mass leaving the ball simply vanishes
    pt = scipy.sparse.coo_matrix((vals, (rows, cols)), shape=(n, n)).tocsr()
    vec = np.zeros(n)
    vec[root] = 1.0
    probs = []
    for _ in range(K):
        vec = pt @ vec
        probs.append(float(vec[root]))
    return probs


def provable_tail_bound(rs: ReturnSeries, c: float) -> float:
    """Bound on sum_{k>K} c^k p_k / k from p_k <= rho^k."""
    K = len(rs.probabilities)
    q = c * rs.spectral_radius_bound
    if q >= 1.0:
        return math.inf
    return q ** (K + 1) / ((K + 1) * (1.0 - q))


def _empirical_tail_estimate(probs_float, c: float) -> float:
    """Conservative tail estimate continuing the recent level of p_k flat."""
    K = len(probs_float)
    window = probs_float[-min(K, max(8, K // 4)) :]
    level = max(window) if window else 0.0
    if level == 0.0:
        return 0.0
    if c >= 1.0:
        return math.inf
    return level * c ** (K + 1) / ((1.0 - c) * (K + 1))


def truncated_values(rs: ReturnSeries, ks) -> list[float]:
    """log(walk degree) - sum_{k<=K} p_k/k for each horizon K in ks."""
    probs = [float(p) for p in rs.probabilities]
    out = []
    logd = math.log(float(rs.root_walk_degree))
    partial = 0.0
    ks_sorted = sorted(ks)
    it = iter(ks_sorted)
    want = next(it, None)
    for k, p in enumerate(probs, start=1):
        partial += p / k
        if want is not None and k == want:
            out.append(logd - partial)
            want = next(it, None)
    if want is not None:
        raise GraphError("requested truncation beyond the computed series")
    return out


def series_entropy_term(
    rs: ReturnSeries,
    abel_grid=None,
    exponents=None,
    tail_tol: float = 1e-8,
    extrap_tol: float = 1e-3,
    horizon_tol: float = 0.05,
    refinement_drop: float = 0.30,
) -> SeriesEntropyTerm:
    """Abel-regularized series term with Richardson extrapolation in 1-c.

    Divergence is declared (value = -inf sentinel) when either detector
    fires: the horizon mass sum_{K/2<k<=K} p_k/k stays macroscopic, or the
    Abel partials keep growing by more than refinement_drop per grid
    refinement for three consecutive refinements. Both are heuristics; a
    recurrent-but-summable series passes them.
    """
    if abel_grid is None:
        abel_grid = DEFAULT_ABEL_GRID
    if exponents is None:
        exponents = DEFAULT_EXPONENTS
    grid = list(abel_grid)
    if any(not 0.0 < c < 1.0 for c in grid) or any(
        grid[i] >= grid[i + 1] for i in range(len(grid) - 1)
    ):
        raise GraphError("abel_grid must be strictly increasing inside (0, 1)")
    probs = [float(p) for p in rs.probabilities]
    K = len(probs)
    logd = math.log(float(rs.root_walk_degree))

    ks = np.arange(1, K + 1)
    terms = np.array(probs) / ks
    abel_values = []
    for c in grid:
        weights = np.power(c, ks)
        abel_values.append((c, float(pairwise_sum((weights * terms).tolist()))))

    half = K // 2
    horizon_mass = float(np.sum(terms[half:]))
    diverged = horizon_mass > horizon_tol
    drops = [abel_values[i + 1][1] - abel_values[i][1] for i in range(len(grid) - 1)]
    run = 0
    for d in drops:
        run = run + 1 if d > refinement_drop else 0
        if run >= 3:
            diverged = True
            break
    if diverged:
        return SeriesEntropyTerm(
            value=NEG_INF,
            abel_values=abel_values,
            tail_bound="unknown",
            uncertainty=math.inf,
            diverged=True,
        )

    usable, bounds = [], []
    for c, s in abel_values:
        bound = provable_tail_bound(rs, c)
        est = min(bound, _empirical_tail_estimate(probs, c))
        if est <= tail_tol:
            usable.append((c, s))
            bounds.append(bound)
    if len(usable) < 3:
        return SeriesEntropyTerm(
            value=logd - abel_values[-1][1],
            abel_values=abel_values,
            tail_bound="unknown",
            uncertainty=math.inf,
            inconclusive=True,
            used_points=[c for c, _ in usable],
        )
    xs = [1.0 - c for c, _ in usable]
    ys = [s for _, s in usable]
    limit, gap, _ = richardson_extrapolate(xs, ys, exponents)
    worst_bound = max(bounds)
    tail_bound = worst_bound if worst_bound <= tail_tol else "unknown"
    uncertainty = gap + (worst_bound if math.isfinite(worst_bound) else tail_tol)
    return SeriesEntropyTerm(
        value=logd - limit,
        abel_values=abel_values,
        tail_bound=tail_bound,
        uncertainty=uncertainty,
        inconclusive=gap > extrap_tol,
        used_points=[c for c, _ in usable],
        extrap_gap=gap,
    )
