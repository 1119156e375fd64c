"""Rooted-graph distributions: uniform-root finite graphs, deterministic
ball generators for fixed infinite graphs, Monte Carlo samplers, and
witnessed domination couplings.

Fixed generators with a root-preserving symmetry expose lumped carriers
for walk/resistance/spectral computations: orbits of the root-stabilizer
are merged, conductances summed. Voltages and occupation probabilities are
constant on orbits, and the root's orbit is always a singleton, so every
root-local quantity (return probability, resistance, spectral mass at the
root) is exactly preserved while ball sizes drop from exponential to
linear. The literal `ball` operation still returns the honest ball.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import scipy.sparse

from .graphs import (
    DominationWitness,
    GraphError,
    RootedGraph,
    WeightedMultigraph,
    build_graph,
    degree_report,
)

RADIUS_CAP = 2**14


def _key_int(part) -> int:
    if isinstance(part, str):
        return int.from_bytes(hashlib.blake2s(part.encode(), digest_size=8).digest(), "big")
    part = int(part)
    return 2 * part if part >= 0 else -2 * part - 1


def derive_rng(seed: int, *key) -> np.random.Generator:
    """Deterministic stream for (seed, key...) via SeedSequence entropy."""
    entropy = [_key_int(seed)] + [_key_int(p) for p in key]
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))


@dataclass
class WalkBall:
    """Finite carrier for root-local computations on a (possibly lumped) ball.

    walk_degrees / lap_diags are the carrier network's true degrees,
    including weight on edges that leave the ball (those edges themselves
    are absent, so transition mass using the true denominators exits and
    never returns within the exactness horizon 2 * radius).
    vertex_multiplicity[u] counts original vertices represented by u
    (None means all ones); the root always represents exactly itself.
    """

    graph: RootedGraph
    walk_degrees: list
    lap_diags: list
    radius: int
    complete: bool = False
    vertex_multiplicity: list | None = None
    spectral_radius_bound: float = 1.0

    def multiplicity(self) -> np.ndarray:
        if self.vertex_multiplicity is None:
            return np.ones(self.graph.graph.vertex_count)
        return np.asarray([float(m) for m in self.vertex_multiplicity])


@dataclass
class WiredSystem:
    """Grounded SPD system whose solution at the root is the resistance."""

    matrix: scipy.sparse.csr_matrix
    root: int
    exact: bool = False  # full finite graph: no exhaustion error at all


def grounded_matrix(wb: WalkBall, s) -> scipy.sparse.csr_matrix:
    """Wired Laplacian of the ball with boundary folded to ground, plus the
    killing term: diag = true non-loop degree + s * multiplicity."""
    g = wb.graph.graph
    n = g.vertex_count
    mult = wb.multiplicity()
    rows, cols, vals = [], [], []
    for u, v, w in g.edges:
        if u == v:
            continue
        rows.append(u)
        cols.append(v)
        vals.append(-float(w))
        rows.append(v)
        cols.append(u)
        vals.append(-float(w))
    for u in range(n):
        rows.append(u)
        cols.append(u)
        vals.append(float(wb.lap_diags[u]) + float(s) * mult[u])
    m = scipy.sparse.coo_matrix((vals, (rows, cols)), shape=(n, n))
    return m.tocsr()


def spectral_sparse(wb: WalkBall) -> scipy.sparse.csr_matrix:
    """Wired Laplacian in the orthonormal orbit basis 1_A / sqrt(|A|).

    Equals the honest ball's wired Laplacian restricted to the invariant
    subspace; the root's spectral masses are unchanged because the root
    vector lies in that subspace.
    """
    g = wb.graph.graph
    n = g.vertex_count
    mult = wb.multiplicity()
    inv_sqrt = 1.0 / np.sqrt(mult)
    rows, cols, vals = [], [], []
    for u, v, w in g.edges:
        if u == v:
            continue
        value = -float(w) * inv_sqrt[u] * inv_sqrt[v]
        rows.append(u)
        cols.append(v)
        vals.append(value)
        rows.append(v)
        cols.append(u)
        vals.append(value)
    for u in range(n):
        rows.append(u)
        cols.append(u)
        vals.append(float(wb.lap_diags[u]) / mult[u])
    return scipy.sparse.coo_matrix((vals, (rows, cols)), shape=(n, n)).tocsr()


def moments_from_walk_ball(wb: WalkBall, kmax: int) -> list[float]:
    """(Delta^j)(root, root) for j = 1..kmax; exact for kmax <= radius."""
    m = spectral_sparse(wb)
    v = np.zeros(m.shape[0])
    v[wb.graph.root] = 1.0
    out = []
    for _ in range(kmax):
        v = m @ v
        out.append(float(v[wb.graph.root]))
    return out


class RootedDistribution:
    """Base: a source of rooted balls. Subclasses fill in the carriers."""

    kind: str = "fixed_generator"
    transitive: bool = False
    seed: int = 0
    spectral_radius_bound: float = 1.0

    def descriptor(self) -> dict:
        raise NotImplementedError

    def evaluation_plan(self, samples: int) -> tuple[list[tuple[int, float]], bool]:
        """(index, weight) pairs to average over, and a Monte Carlo flag."""
        if self.kind == "fixed_generator":
            return [(0, 1.0)], False
        return [(i, 1.0 / samples) for i in range(samples)], True

    def walk_ball(self, radius: int, index: int = 0) -> WalkBall:
        raise NotImplementedError

    def wired_system(self, s, radius: int, index: int = 0) -> WiredSystem:
        wb = self.walk_ball(radius, index)
        return WiredSystem(grounded_matrix(wb, s), wb.graph.root, exact=wb.complete)

    def spectral_matrix(self, radius: int, index: int = 0) -> tuple[np.ndarray, int]:
        wb = self.walk_ball(radius, index)
        return spectral_sparse(wb).toarray(), wb.graph.root

    def laplacian_moments(self, kmax: int, index: int = 0) -> list[float]:
        return moments_from_walk_ball(self.walk_ball(kmax + 1, index), kmax)

    def max_wired_radius(self) -> int:
        return RADIUS_CAP

    def max_walk_radius(self) -> int:
        return RADIUS_CAP

    def min_resistance_s(self) -> float:
        return 1e-7

    def default_series_K(self) -> int:
        return 512

    def series_exponents(self) -> tuple:
        from .walk import DEFAULT_EXPONENTS

        return DEFAULT_EXPONENTS

    def expected_root_lap_diag(self) -> float | None:
        return None


# ---------------------------------------------------------------------------
# finite graphs with a uniform root


class FiniteUniformRoot(RootedDistribution):
    kind = "finite_uniform_root"

    def __init__(self, graph: WeightedMultigraph, seed: int = 0, transitive: bool = False,
                 enumerate_limit: int = 256):
        if graph.vertex_count < 1:
            raise GraphError("empty graph")
        self.graph = graph
        self.seed = seed
        self.transitive = transitive
        self.enumerate_limit = enumerate_limit
        report = degree_report(graph)
        self._walk = report.walk_degree
        self._lap = report.laplacian_diagonal

    def descriptor(self) -> dict:
        return {
            "family": "finite_uniform_root",
            "vertices": self.graph.vertex_count,
            "edges": len(self.graph.edges),
            "seed": self.seed,
        }

    def evaluation_plan(self, samples: int):
        n = self.graph.vertex_count
        if self.transitive:
            return [(0, 1.0)], False
        if n <= self.enumerate_limit:
            return [(r, 1.0 / n) for r in range(n)], False
        rng = derive_rng(self.seed, "roots")
        roots = rng.integers(0, n, size=samples)
        return [(int(r), 1.0 / samples) for r in roots], True

    def walk_ball(self, radius: int, index: int = 0) -> WalkBall:
        rooted = RootedGraph(self.graph, index)
        return WalkBall(rooted, list(self._walk), list(self._lap), radius, complete=True)

    def expected_root_lap_diag(self) -> float:
        return float(sum(float(d) for d in self._lap) / self.graph.vertex_count)

    def scale_weights(self, factor) -> "FiniteUniformRoot":
        scaled = build_graph(
            self.graph.vertex_count,
            [(u, v, w * factor) for u, v, w in self.graph.edges],
        )
        return FiniteUniformRoot(scaled, self.seed, self.transitive, self.enumerate_limit)


def uniform_root(g: WeightedMultigraph, seed: int = 0, transitive: bool = False) -> FiniteUniformRoot:
    return FiniteUniformRoot(g, seed=seed, transitive=transitive)


# ---------------------------------------------------------------------------
# the integer line


class LineZ(RootedDistribution):
    """Nearest-neighbor graph of the integers, rooted at 0."""

    transitive = True

    def __init__(self, weight_scale=1):
        if not weight_scale > 0:
            raise GraphError("weight scale must be positive")
        self.weight_scale = weight_scale

    def descriptor(self) -> dict:
        return {"family": "Z", "weight_scale": float(self.weight_scale)}

    @staticmethod
    def label(x: int) -> int:
        # 0, +1, -1, +2, -2, ... keeps nested balls literally nested
        if x == 0:
            return 0
        return 2 * x - 1 if x > 0 else -2 * x

    def ball(self, radius: int) -> RootedGraph:
        c = self.weight_scale
        edges = []
        for x in range(-radius, radius):
            edges.append((self.label(x), self.label(x + 1), c))
        return RootedGraph(build_graph(2 * radius + 1, edges), 0)

    def walk_ball(self, radius: int, index: int = 0) -> WalkBall:
        rooted = self.ball(radius)
        n = rooted.graph.vertex_count
        deg = [2 * self.weight_scale] * n
        return WalkBall(rooted, deg, list(deg), radius)

    def default_series_K(self) -> int:
        return 20000

    def series_exponents(self) -> tuple:
        # one-dimensional recurrence: half-integer powers of 1 - c, no logs
        return (0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5)

    def expected_root_lap_diag(self) -> float:
        return 2.0 * float(self.weight_scale)

    def closed_form_resistance(self, s: float) -> float:
        c = float(self.weight_scale)
        return 1.0 / math.sqrt(s * s + 4.0 * c * s)

    def scale_weights(self, factor) -> "LineZ":
        return LineZ(self.weight_scale * factor)


# ---------------------------------------------------------------------------
# the square lattice


class LatticeZ2(RootedDistribution):
    """Square lattice rooted at the origin; carriers use the 8-fold
    root symmetry (orbits {(±x, ±y), (±y, ±x)} merged)."""

    transitive = True

    def __init__(self):
        self._orbit_cache: dict[int, tuple] = {}

    def descriptor(self) -> dict:
        return {"family": "Z2"}

    def ball(self, radius: int) -> RootedGraph:
        pts = [
            (x, y)
            for x in range(-radius, radius + 1)
            for y in range(-(radius - abs(x)), radius - abs(x) + 1)
        ]
        pts.sort(key=lambda p: (abs(p[0]) + abs(p[1]), p[0], p[1]))
        index = {p: i for i, p in enumerate(pts)}
        edges = []
        for (x, y) in pts:
            for (nx_, ny_) in ((x + 1, y), (x, y + 1)):
                if (nx_, ny_) in index:
                    edges.append((index[(x, y)], index[(nx_, ny_)], 1))
        return RootedGraph(build_graph(len(pts), edges), index[(0, 0)])

    def ball_vertex_index(self, radius: int) -> dict:
        """(x, y) -> vertex id in ball(radius), matching ball()'s labels."""
        pts = [
            (x, y)
            for x in range(-radius, radius + 1)
            for y in range(-(radius - abs(x)), radius - abs(x) + 1)
        ]
        pts.sort(key=lambda p: (abs(p[0]) + abs(p[1]), p[0], p[1]))
        return {p: i for i, p in enumerate(pts)}

    def _orbits(self, radius: int):
        if radius in self._orbit_cache:
            return self._orbit_cache[radius]
        r = radius
        xs = np.arange(-r, r + 1)
        counts = 2 * (r - np.abs(xs)) + 1
        X = np.repeat(xs, counts)
        Y = np.concatenate([np.arange(-(r - abs(int(x))), r - abs(int(x)) + 1) for x in xs])
        A = np.maximum(np.abs(X), np.abs(Y))
        B = np.minimum(np.abs(X), np.abs(Y))
        codes = A * (r + 2) + B
        rep_codes = np.unique(codes)
        orbit_of = np.searchsorted(rep_codes, codes)
        n_orb = rep_codes.size
        rep_a = rep_codes // (r + 2)
        rep_b = rep_codes % (r + 2)
        mult = np.where(rep_a == 0, 1, np.where((rep_b == 0) | (rep_a == rep_b), 4, 8))

        rows_list, cols_list = [], []
        for dx, dy in ((1, 0), (0, 1)):
            NX, NY = X + dx, Y + dy
            mask = (np.abs(NX) + np.abs(NY)) <= r
            na = np.maximum(np.abs(NX[mask]), np.abs(NY[mask]))
            nb = np.minimum(np.abs(NX[mask]), np.abs(NY[mask]))
            rows_list.append(orbit_of[mask])
            cols_list.append(np.searchsorted(rep_codes, na * (r + 2) + nb))
        rows = np.concatenate(rows_list)
        cols = np.concatenate(cols_list)
        if np.any(rows == cols):
            raise AssertionError("orbit-internal edge; lumping invalid")
        m = scipy.sparse.coo_matrix(
            (np.ones(rows.size), (rows, cols)), shape=(n_orb, n_orb)
        ).tocsr()
        total = m + m.T
        upper = scipy.sparse.triu(total).tocoo()
        edges = tuple(
            (int(i), int(j), int(w)) for i, j, w in zip(upper.row, upper.col, upper.data)
        )
        root = int(np.searchsorted(rep_codes, 0))
        result = (edges, n_orb, mult.astype(int).tolist(), root)
        if radius <= 256:
            self._orbit_cache[radius] = result
        return result

    def walk_ball(self, radius: int, index: int = 0) -> WalkBall:
        edges, n_orb, mult, root = self._orbits(radius)
        g = RootedGraph(WeightedMultigraph(n_orb, edges), root)
        deg = [4 * m for m in mult]
        return WalkBall(g, deg, list(deg), radius, vertex_multiplicity=mult)

    def default_series_K(self) -> int:
        return 2048

    def series_exponents(self) -> tuple:
        # two-dimensional recurrence: x log x terms, handled by repeats
        return (1.0, 1.0, 2.0, 2.0, 3.0, 3.0)

    def max_wired_radius(self) -> int:
        return 1024

    def min_resistance_s(self) -> float:
        return 3e-5

    def expected_root_lap_diag(self) -> float:
        return 4.0


# ---------------------------------------------------------------------------
# regular trees


class RegularTree(RootedDistribution):
    """Infinite d-regular tree; carriers collapse distance shells to a
    weighted path (shell-to-shell conductance d(d-1)^l)."""

    transitive = True

    def __init__(self, d: int, weight_scale=1):
        if d < 3:
            raise GraphError("regular_tree needs degree >= 3")
        if not weight_scale > 0:
            raise GraphError("weight scale must be positive")
        self.d = d
        self.weight_scale = weight_scale
        self.spectral_radius_bound = 2.0 * math.sqrt(d - 1) / d

    def descriptor(self) -> dict:
        return {"family": "regular_tree", "d": self.d,
                "weight_scale": float(self.weight_scale)}

    def ball(self, radius: int) -> RootedGraph:
        d, ws = self.d, self.weight_scale
        size = 1
        level = 1
        sizes = [1]
        for _ in range(radius):
            level *= d - 1
            sizes.append(level * d // (d - 1))
        total = sum(sizes)
        if total > 5_000_000:
            raise GraphError("explicit tree ball too large; use the lumped carriers")
        edges = []
        next_id = 1
        frontier = [0]
        for depth in range(radius):
            children_per = d if depth == 0 else d - 1
            new_frontier = []
            for v in frontier:
                for _ in range(children_per):
                    edges.append((v, next_id, ws))
                    new_frontier.append(next_id)
                    next_id += 1
            frontier = new_frontier
        return RootedGraph(build_graph(next_id, edges), 0)

    def shell_sizes(self, radius: int) -> list[int]:
        d = self.d
        sizes = [1]
        for ell in range(1, radius + 1):
            sizes.append(d * (d - 1) ** (ell - 1))
        return sizes

    def walk_ball(self, radius: int, index: int = 0) -> WalkBall:
        d, ws = self.d, self.weight_scale
        sizes = self.shell_sizes(radius)
        edges = [(ell, ell + 1, d * (d - 1) ** ell * ws) for ell in range(radius)]
        g = RootedGraph(build_graph(radius + 1, edges), 0)
        deg = [d * ws] + [sizes[ell] * d * ws for ell in range(1, radius + 1)]
        return WalkBall(
            g,
            deg,
            list(deg),
            radius,
            vertex_multiplicity=sizes,
            spectral_radius_bound=self.spectral_radius_bound,
        )

    def max_wired_radius(self) -> int:
        return min(RADIUS_CAP, int(250 / math.log10(self.d - 1)))

    def max_walk_radius(self) -> int:
        return self.max_wired_radius()

    def default_series_K(self) -> int:
        return 512

    def series_exponents(self) -> tuple:
        # transient walk: the Abel sum is analytic at c = 1
        return (1.0, 2.0, 3.0, 4.0, 5.0)

    def expected_root_lap_diag(self) -> float:
        return float(self.d) * float(self.weight_scale)

    def scale_weights(self, factor) -> "RegularTree":
        return RegularTree(self.d, self.weight_scale * factor)


class AttachedTree(RootedDistribution):
    """Fixed rooted graph: root o of degree 1, neighbor a of degree 2, then
    b carrying a regular tree of degree d; optionally a unit loop at o.

    Shells of the tree are collapsed exactly as for RegularTree. This is
    the measure pair where an added loop lowers the entropy despite the
    loopier graph dominating.
    """

    transitive = False

    def __init__(self, d: int = 20, loop: bool = False):
        if d < 3:
            raise GraphError("attached tree needs degree >= 3")
        self.d = d
        self.loop = loop

    def descriptor(self) -> dict:
        return {"family": "attached_tree", "d": self.d, "loop": self.loop}

    def walk_ball(self, radius: int, index: int = 0) -> WalkBall:
        d = self.d
        if radius < 2:
            raise GraphError("attached-tree carriers need radius >= 2")
        shells = radius - 2  # tree shells at distance 3.. from o
        edges = [(0, 1, 1), (1, 2, 1)]
        mult = [1, 1, 1]
        for j in range(shells):
            edges.append((2 + j, 3 + j, d * (d - 1) ** j))
            mult.append(d * (d - 1) ** j)
        if self.loop:
            edges.append((0, 0, 1))
        g = RootedGraph(build_graph(3 + shells, edges), 0)
        lap = [1, 2, d + 1] + [mult[3 + j] * d for j in range(shells)]
        walk = list(lap)
        if self.loop:
            walk[0] = 2
        return WalkBall(g, walk, lap, radius, vertex_multiplicity=mult)

    def true_ball(self, radius: int) -> RootedGraph:
        """Honest (un-lumped) ball, loop edge appended last."""
        d = self.d
        edges = []
        next_id = 1
        if radius >= 1:
            edges.append((0, 1, 1))
            next_id = 2
        frontier = []
        if radius >= 2:
            edges.append((1, 2, 1))
            next_id = 3
            frontier = [2]
        for depth in range(2, radius):
            children_per = d if depth == 2 else d - 1
            new_frontier = []
            for v in frontier:
                for _ in range(children_per):
                    edges.append((v, next_id, 1))
                    new_frontier.append(next_id)
                    next_id += 1
            frontier = new_frontier
        if self.loop:
            edges.append((0, 0, 1))
        return RootedGraph(build_graph(next_id, edges), 0)

    def max_wired_radius(self) -> int:
        return min(RADIUS_CAP, int(250 / math.log10(self.d - 1)) + 2)

    def max_walk_radius(self) -> int:
        return self.max_wired_radius()

    def default_series_K(self) -> int:
        return 256

    def series_exponents(self) -> tuple:
        return (1.0, 2.0, 3.0, 4.0, 5.0)

    def expected_root_lap_diag(self) -> float:
        return 1.0


def lattice_generator(family: str, d: int | None = None, weights=None) -> RootedDistribution:
    """Deterministic nested-ball generator for Z, Z2, or regular_tree(d)."""
    scale = 1 if weights is None else weights
    if family == "Z":
        return LineZ(weight_scale=scale)
    if family == "Z2":
        if weights is not None and weights != 1:
            raise GraphError("weighted Z2 generator not supported")
        return LatticeZ2()
    if family == "regular_tree":
        if d is None:
            raise GraphError("regular_tree needs d")
        return RegularTree(d, weight_scale=scale)
    raise GraphError(f"unknown lattice family {family!r}")


# ---------------------------------------------------------------------------
# Poisson Galton-Watson sampler


class PGWSampler(RootedDistribution):
    """Trees where every vertex gets an independent Poisson(mean) number of
    children. `survival_attempted` rejects samples whose ball at the working
    radius has died out (finite-depth rejection: approximate conditioning).
    """

    kind = "sampler"

    def __init__(self, mean: float, conditioning: str = "none", seed: int = 0,
                 max_vertices: int = 2_000_000, max_attempts: int = 200):
        if not mean > 0:
            raise GraphError("offspring mean must be positive")
        if conditioning not in ("none", "survival_attempted"):
            raise GraphError(f"unknown conditioning {conditioning!r}")
        self.mean = mean
        self.conditioning = conditioning
        self.seed = seed
        self.max_vertices = max_vertices
        self.max_attempts = max_attempts
        self.attempt_log: dict[tuple[int, int], int] = {}

    def descriptor(self) -> dict:
        return {
            "family": "pgw",
            "mean": self.mean,
            "conditioning": self.conditioning,
            "seed": self.seed,
        }

    def _grow(self, radius: int, index: int, attempt: int):
        """Offspring counts per level; level arrays depend only on the level
        below, so balls of increasing radius are literally nested."""
        level_sizes = [1]
        offspring: list[np.ndarray] = []
        for level in range(radius + 1):
            rng = derive_rng(self.seed, "pgw", index, attempt, level)
            counts = rng.poisson(self.mean, size=level_sizes[-1])
            offspring.append(counts)
            nxt = int(counts.sum())
            level_sizes.append(nxt)
            if sum(level_sizes) > self.max_vertices:
                raise GraphError("sampled ball exceeds the vertex cap")
            if nxt == 0:
                # extinct: deeper levels are empty
                for _ in range(level + 1, radius + 1):
                    offspring.append(np.zeros(0, dtype=counts.dtype))
                break
        return offspring

    def walk_ball(self, radius: int, index: int = 0) -> WalkBall:
        attempts = 1
        offspring = self._grow(radius, index, 0)
        if self.conditioning == "survival_attempted":
            while sum(int(c.sum()) for c in offspring[:radius]) + 1 <= 0 or (
                len(offspring) <= radius or offspring[radius - 1].sum() == 0
                if radius >= 1
                else False
            ):
                if attempts >= self.max_attempts:
                    raise GraphError(
                        f"no surviving sample in {attempts} attempts "
                        f"(mean {self.mean}, radius {radius})"
                    )
                offspring = self._grow(radius, index, attempts)
                attempts += 1
        self.attempt_log[(index, radius)] = attempts

        edges = []
        next_id = 1
        frontier = [0]
        survived_levels = 0
        for level in range(radius):
            counts = offspring[level] if level < len(offspring) else np.zeros(0)
            new_frontier = []
            for pos, v in enumerate(frontier):
                k = int(counts[pos]) if pos < counts.size else 0
                for _ in range(k):
                    edges.append((v, next_id, 1))
                    new_frontier.append(next_id)
                    next_id += 1
            if new_frontier:
                survived_levels = level + 1
            frontier = new_frontier
            if not frontier:
                break
        n = next_id
        g = RootedGraph(build_graph(n, edges) if edges else build_graph(1, []), 0)
        # true degrees: parent edge plus offspring count (boundary level uses
        # the already-drawn counts for its would-be children)
        deg = [0.0] * n
        vid = 0
        frontier = [0]
        for level in range(radius + 1):
            counts = offspring[level] if level < len(offspring) else np.zeros(0)
            new_frontier = []
            for pos, v in enumerate(frontier):
                k = int(counts[pos]) if pos < counts.size else 0
                deg[v] = (0 if v == 0 else 1) + k
                if level < radius:
                    for _ in range(k):
                        vid += 1
                        new_frontier.append(vid)
            frontier = new_frontier
            if not frontier:
                break
        deg = [max(d, 1e-300) if i > 0 or d > 0 else d for i, d in enumerate(deg)]
        if deg[0] == 0:
            # isolated root (immediate extinction): give it a harmless degree
            deg[0] = 1.0
        complete = survived_levels < radius  # died out before the horizon
        return WalkBall(g, deg, list(deg), radius, complete=complete)

    def survival_rejection_rate(self, radius: int, tries: int) -> float:
        """Fraction of unconditioned samples extinct by `radius`."""
        dead = 0
        for i in range(tries):
            offspring = self._grow(radius, _key_int("rate") + i, 0)
            if len(offspring) <= radius - 1 or (
                radius >= 1 and (offspring[radius - 1].size == 0 or offspring[radius - 1].sum() == 0)
            ):
                dead += 1
        return dead / tries

    def expected_root_lap_diag(self) -> float:
        return float(self.mean)


def pgw_sampler(mean: float, conditioning: str = "none", seed: int = 0) -> PGWSampler:
    return PGWSampler(mean, conditioning, seed)


# ---------------------------------------------------------------------------
# the heavy-tailed line


X_EXPONENT_CAP = 700  # exp(-X) stays a positive normal float


class HeavyTailZ(RootedDistribution):
    """Integer line with unit weights on (2n, 2n+1) and i.i.d. weights
    exp(-X_n) on (2n-1, 2n), where P[X >= m] = 1 / sqrt(m) for m >= 1.

    X = floor(1 / U^2) with U uniform on (0, 1] realizes the law exactly.
    Weights cap the exponent at X_EXPONENT_CAP so they stay positive
    floats; X itself is kept exact for tail statistics.
    """

    kind = "sampler"

    def __init__(self, seed: int = 0):
        self.seed = seed

    def descriptor(self) -> dict:
        return {"family": "heavy_tail_Z", "seed": self.seed}

    def x_value(self, index: int, n: int) -> int:
        rng = derive_rng(self.seed, "X", index, n)
        u = 1.0 - rng.random()  # uniform on (0, 1]
        return max(1, math.floor(1.0 / (u * u)))

    def x_samples(self, count: int, stream: int = 0) -> np.ndarray:
        rng = derive_rng(self.seed, "xbatch", stream)
        u = 1.0 - rng.random(count)
        return np.maximum(1, np.floor(1.0 / (u * u))).astype(np.int64)

    def _edge_weight(self, index: int, j: int) -> float:
        # edge (j, j+1): even j is a unit edge, odd j carries exp(-X_n)
        if j % 2 == 0:
            return 1.0
        n = (j + 1) // 2
        return math.exp(-min(self.x_value(index, n), X_EXPONENT_CAP))

    def walk_ball(self, radius: int, index: int = 0) -> WalkBall:
        label = LineZ.label
        edges = []
        weight_at: dict[int, float] = {}
        for j in range(-radius - 1, radius + 1):
            weight_at[j] = self._edge_weight(index, j)
        for x in range(-radius, radius):
            edges.append((label(x), label(x + 1), weight_at[x]))
        n = 2 * radius + 1
        deg = [0.0] * n
        for x in range(-radius, radius + 1):
            deg[label(x)] = weight_at[x - 1] + weight_at[x]
        g = RootedGraph(build_graph(n, edges), 0)
        return WalkBall(g, deg, list(deg), radius)

    def default_series_K(self) -> int:
        return 1024


def heavy_tail_Z(seed: int = 0) -> HeavyTailZ:
    return HeavyTailZ(seed)


# ---------------------------------------------------------------------------
# witnessed couplings


@dataclass
class CoupledPair:
    """Two distributions with a per-sample domination witness generator.

    witness(radius, index) produces a DominationWitness embedding the low
    ball into the high ball; every produced witness must verify.
    """

    dist_high: RootedDistribution
    dist_low: RootedDistribution
    witness: object  # callable (radius, index=0) -> DominationWitness
    strict: bool = True
    label: str = ""


def _identity_witness_pair(low: RootedGraph, high: RootedGraph) -> DominationWitness:
    n = low.graph.vertex_count
    m = len(low.graph.edges)
    return DominationWitness(low, high, tuple(range(n)), tuple(range(m)))


def coupled_weight_scaling(base: RootedDistribution, factor) -> CoupledPair:
    """dist_high scales every weight of `base` by factor > 1; identity witness."""
    if not factor > 1:
        raise GraphError("scaling factor must exceed 1")
    high = base.scale_weights(factor)

    def witness(radius: int, index: int = 0) -> DominationWitness:
        low_ball = _ball_of(base, radius, index)
        high_ball = _ball_of(high, radius, index)
        return _identity_witness_pair(low_ball, high_ball)

    return CoupledPair(high, base, witness, strict=True,
                       label=f"weight_scaling(x{factor})")


def _ball_of(dist: RootedDistribution, radius: int, index: int = 0) -> RootedGraph:
    if hasattr(dist, "ball"):
        return dist.ball(radius)
    if hasattr(dist, "true_ball"):
        return dist.true_ball(radius)
    if isinstance(dist, FiniteUniformRoot):
        return RootedGraph(dist.graph, index)
    raise GraphError("distribution has no ball construction")


def loop_counterexample_pair(d: int = 20) -> CoupledPair:
    """The fixed-graph pair where the loopier measure dominates yet has the
    smaller entropy; witness is the identity embedding on every ball."""
    low = AttachedTree(d, loop=False)
    high = AttachedTree(d, loop=True)

    def witness(radius: int, index: int = 0) -> DominationWitness:
        return _identity_witness_pair(low.true_ball(radius), high.true_ball(radius))

    return CoupledPair(high, low, witness, strict=True, label=f"loop_at_root(d={d})")


def witness_line_in_lattice(radius: int) -> DominationWitness:
    """Embed the radius-r path ball of Z onto the x-axis of the Z2 ball."""
    line = LineZ()
    lattice = LatticeZ2()
    small = line.ball(radius)
    large = lattice.ball(radius)
    idx = lattice.ball_vertex_index(radius)
    vmap = [0] * small.graph.vertex_count
    for x in range(-radius, radius + 1):
        vmap[LineZ.label(x)] = idx[(x, 0)]
    edge_lookup = {}
    for j, (u, v, _) in enumerate(large.graph.edges):
        edge_lookup[(u, v)] = j
        edge_lookup[(v, u)] = j
    emap = []
    for (u, v, _) in small.graph.edges:
        emap.append(edge_lookup[(vmap[u], vmap[v])])
    return DominationWitness(small, large, tuple(vmap), tuple(emap))


def witness_line_in_tree(d: int, radius: int) -> DominationWitness:
    """Embed the Z ball as a two-sided spine through the root of the d-tree."""
    line = LineZ()
    tree = RegularTree(d)
    small = line.ball(radius)
    large = tree.ball(radius)
    # tree labels are BFS order; child k of the root is 1 + k, child k of
    # vertex v at depth >= 1 is found by walking the construction order
    children: dict[int, list[int]] = {}
    for (u, v, _) in large.graph.edges:
        children.setdefault(u, []).append(v)
    plus_spine = [0]
    minus_spine = [0]
    node = 0
    for _ in range(radius):
        node = children[node][0]
        plus_spine.append(node)
    node = 0
    for depth in range(radius):
        node = children[node][1 if depth == 0 else 0]
        minus_spine.append(node)
    vmap = [0] * small.graph.vertex_count
    for x in range(0, radius + 1):
        vmap[LineZ.label(x)] = plus_spine[x]
    for x in range(1, radius + 1):
        vmap[LineZ.label(-x)] = minus_spine[x]
    edge_lookup = {}
    for j, (u, v, _) in enumerate(large.graph.edges):
        edge_lookup[(u, v)] = j
        edge_lookup[(v, u)] = j
    emap = [edge_lookup[(vmap[u], vmap[v])] for (u, v, _) in small.graph.edges]
    return DominationWitness(small, large, tuple(vmap), tuple(emap))


def witness_tree_in_tree(d_small: int, d_large: int, radius: int) -> DominationWitness:
    """Embed the d_small-regular tree ball into the d_large one, matching
    children in construction order."""
    if d_small > d_large:
        raise GraphError("small tree degree exceeds large tree degree")
    small = RegularTree(d_small).ball(radius)
    large = RegularTree(d_large).ball(radius)
    small_children: dict[int, list[int]] = {}
    for (u, v, _) in small.graph.edges:
        small_children.setdefault(u, []).append(v)
    large_children: dict[int, list[int]] = {}
    for (u, v, _) in large.graph.edges:
        large_children.setdefault(u, []).append(v)
    vmap = [0] * small.graph.vertex_count
    stack = [0]
    while stack:
        v = stack.pop()
        for k, child in enumerate(small_children.get(v, [])):
            vmap[child] = large_children[vmap[v]][k]
            stack.append(child)
    edge_lookup = {}
    for j, (u, v, _) in enumerate(large.graph.edges):
        edge_lookup[(u, v)] = j
        edge_lookup[(v, u)] = j
    emap = [edge_lookup[(vmap[u], vmap[v])] for (u, v, _) in small.graph.edges]
    return DominationWitness(small, large, tuple(vmap), tuple(emap))


def generator_coupled_pairs() -> list[CoupledPair]:
    """Strictly ordered generator couplings used for entropy-dominance tests."""
    pairs = []
    pairs.append(coupled_weight_scaling(LineZ(), 2))
    pairs.append(coupled_weight_scaling(RegularTree(3), 2))

    line, lattice = LineZ(), LatticeZ2()
    pairs.append(
        CoupledPair(lattice, line,
                    lambda radius, index=0: witness_line_in_lattice(radius),
                    strict=True, label="Z_in_Z2")
    )
    tree3 = RegularTree(3)
    pairs.append(
        CoupledPair(tree3, line,
                    lambda radius, index=0: witness_line_in_tree(3, radius),
                    strict=True, label="Z_in_tree3")
    )
    pairs.append(
        CoupledPair(RegularTree(4), tree3,
                    lambda radius, index=0: witness_tree_in_tree(3, 4, radius),
                    strict=True, label="tree3_in_tree4")
    )
    return pairs
