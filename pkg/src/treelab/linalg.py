"""Exact and floating-point linear algebra for graph Laplacians.

Exact path: fraction-free (Bareiss) elimination over big integers for
integer matrices, exact Fraction elimination otherwise. Float path:
Cholesky/LU log-determinants, a Jacobi-preconditioned conjugate-gradient
solver, and dense symmetric eigendecompositions restricted to a
distinguished vertex.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import scipy.linalg
import scipy.sparse
import scipy.sparse.linalg

from .graphs import WeightedMultigraph
from .numeric import pairwise_sum


class NotPositiveDefiniteError(ValueError):
    def __init__(self, pivot_index: int):
        self.pivot_index = pivot_index
        super().__init__(f"matrix is not positive definite (pivot {pivot_index} <= 0)")


class SolverConvergenceError(RuntimeError):
    def __init__(self, iterations: int, residual: float):
        self.iterations = iterations
        self.residual = residual
        super().__init__(
            f"conjugate gradients did not converge in {iterations} iterations "
            f"(residual {residual:.3e})"
        )


@dataclass(frozen=True)
class DenseMatrixExact:
    """Square matrix with arbitrary-precision rational entries."""

    dimension: int
    entries: tuple  # tuple of row tuples, int or Fraction entries


@dataclass
class SparseSymmetric:
    """Symmetric matrix stored as upper-triangular COO (row <= col)."""

    dimension: int
    rows: list[int] = field(default_factory=list)
    cols: list[int] = field(default_factory=list)
    vals: list = field(default_factory=list)

    def add(self, i: int, j: int, v) -> None:
        if v == 0:
            return
        if i > j:
            i, j = j, i
        self.rows.append(i)
        self.cols.append(j)
        self.vals.append(v)

    def to_scipy(self) -> scipy.sparse.csr_matrix:
        """Full symmetric CSR in float64 (duplicate entries are summed)."""
        n = self.dimension
        r, c, v = [], [], []
        for i, j, w in zip(self.rows, self.cols, self.vals):
            r.append(i)
            c.append(j)
            v.append(float(w))
            if i != j:
                r.append(j)
                c.append(i)
                v.append(float(w))
        m = scipy.sparse.coo_matrix((v, (r, c)), shape=(n, n))
        return m.tocsr()

    def to_dense(self) -> np.ndarray:
        return self.to_scipy().toarray()

    def to_exact_dict(self) -> dict:
        """Exact {(i, j): value} map with i <= j, duplicates summed."""
        acc: dict = {}
        for i, j, w in zip(self.rows, self.cols, self.vals):
            acc[(i, j)] = acc.get((i, j), 0) + w
        return acc


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues with the spectral weights of one distinguished vertex.

    masses_at_vector[i] is the squared component of the distinguished
    indicator vector in the i-th eigenspace, degenerate eigenvalues merged.
    """

    eigenvalues: list[float]
    masses_at_vector: list[float]


def laplacian_of(g: WeightedMultigraph) -> SparseSymmetric:
    """Graph Laplacian: off-diagonal -w(x,y) totals, diagonal non-loop degree.

    Loops contribute nothing. Entry types follow the weight types, so the
    exact pipeline sees exact entries.
    """
    n = g.vertex_count
    offdiag: dict = {}
    diag = [0] * n
    for u, v, w in g.edges:
        if u == v:
            continue
        key = (u, v) if u < v else (v, u)
        offdiag[key] = offdiag.get(key, 0) + w
        diag[u] += w
        diag[v] += w
    m = SparseSymmetric(n)
    for x in range(n):
        if diag[x] != 0:
            m.add(x, x, diag[x])
    for (u, v), w in sorted(offdiag.items()):
        m.add(u, v, -w)
    return m


def reduced_laplacian_exact(g: WeightedMultigraph, drop: int = 0) -> DenseMatrixExact:
    """Dense exact Laplacian with row/column `drop` deleted."""
    n = g.vertex_count
    lap = laplacian_of(g).to_exact_dict()
    keep = [x for x in range(n) if x != drop]
    idx = {x: i for i, x in enumerate(keep)}
    rows = [[0] * (n - 1) for _ in range(n - 1)]
    for (i, j), w in lap.items():
        if i in idx and j in idx:
            rows[idx[i]][idx[j]] = w
            if i != j:
                rows[idx[j]][idx[i]] = w
    return DenseMatrixExact(n - 1, tuple(tuple(r) for r in rows))


def _det_bareiss_int(rows: list[list[int]]) -> int:
    """Fraction-free Bareiss elimination; exact over big integers."""
    n = len(rows)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if rows[k][k] == 0:
            for r in range(k + 1, n):
                if rows[r][k] != 0:
                    rows[k], rows[r] = rows[r], rows[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = rows[k][k]
        for i in range(k + 1, n):
            rik = rows[i][k]
            row_i = rows[i]
            row_k = rows[k]
            for j in range(k + 1, n):
                row_i[j] = (pivot * row_i[j] - rik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * rows[n - 1][n - 1]


def _det_fraction(rows: list[list[Fraction]]) -> Fraction:
    """Plain exact Gaussian elimination over Fractions."""
    n = len(rows)
    det = Fraction(1)
    for k in range(n):
        pivot_row = None
        for r in range(k, n):
            if rows[r][k] != 0:
                pivot_row = r
                break
        if pivot_row is None:
            return Fraction(0)
        if pivot_row != k:
            rows[k], rows[pivot_row] = rows[pivot_row], rows[k]
            det = -det
        pivot = rows[k][k]
        det *= pivot
        for i in range(k + 1, n):
            if rows[i][k] != 0:
                factor = rows[i][k] / pivot
                row_i = rows[i]
                row_k = rows[k]
                for j in range(k, n):
                    row_i[j] -= factor * row_k[j]
    return det


def det_exact(m: DenseMatrixExact):
    """Exact determinant; int for integral input, Fraction otherwise."""
    if m.dimension == 0:
        return 1
    integral = all(
        isinstance(v, int) or (isinstance(v, Fraction) and v.denominator == 1)
        for row in m.entries
        for v in row
    )
    if integral:
        rows = [[int(v) for v in row] for row in m.entries]
        return _det_bareiss_int(rows)
    rows = [[Fraction(v) for v in row] for row in m.entries]
    return _det_fraction(rows)


def _find_bad_pivot(dense: np.ndarray) -> int:
    """Index of the first non-positive LDL^T pivot (diagnostic path)."""
    a = dense.copy()
    n = a.shape[0]
    for k in range(n):
        if a[k, k] <= 0:
            return k
        a[k + 1:, k + 1:] -= np.outer(a[k + 1:, k], a[k + 1:, k]) / a[k, k]
    return n - 1


DENSE_LOGDET_CUTOFF = 1200


def logdet_spd(m: SparseSymmetric) -> float:
    """log-determinant of an SPD matrix via factorization pivots.

    Dense Cholesky below DENSE_LOGDET_CUTOFF, symmetric-mode sparse LU
    above. Raises NotPositiveDefiniteError with the pivot index otherwise.
    """
    n = m.dimension
    if n == 0:
        return 0.0
    if n <= DENSE_LOGDET_CUTOFF:
        dense = m.to_dense()
        try:
            chol = scipy.linalg.cholesky(dense, lower=True, check_finite=False)
        except scipy.linalg.LinAlgError:
            raise NotPositiveDefiniteError(_find_bad_pivot(dense)) from None
        return 2.0 * pairwise_sum(np.log(np.diag(chol)).tolist())
    a = m.to_scipy().tocsc()
    lu = scipy.sparse.linalg.splu(
        a,
        diag_pivot_thresh=0.0,
        permc_spec="MMD_AT_PLUS_A",
        options={"SymmetricMode": True},
    )
    pivots = lu.U.diagonal()
    bad = np.nonzero(pivots <= 0)[0]
    if bad.size:
        raise NotPositiveDefiniteError(int(bad[0]))
    return pairwise_sum(np.log(pivots).tolist())


def solve_spd(
    m: SparseSymmetric | scipy.sparse.spmatrix,
    rhs: np.ndarray,
    tol: float,
) -> np.ndarray:
    """Jacobi-preconditioned conjugate gradients for SPD systems.

    Deterministic given inputs; stops when ||m x - rhs|| <= tol * ||rhs||.
    Raises SolverConvergenceError after 10 * dimension iterations.
    """
    a = m.to_scipy() if isinstance(m, SparseSymmetric) else m.tocsr()
    n = a.shape[0]
    b = np.asarray(rhs, dtype=float)
    target = tol * float(np.linalg.norm(b))
    x = np.zeros(n)
    r = b.copy()
    res = float(np.linalg.norm(r))
    if res <= target:
        return x
    inv_diag = 1.0 / a.diagonal()
    z = inv_diag * r
    p = z.copy()
    rz = float(r @ z)
    cap = 10 * n
    for it in range(1, cap + 1):
        ap = a @ p
        alpha = rz / float(p @ ap)
        x += alpha * p
        r -= alpha * ap
        res = float(np.linalg.norm(r))
        if res <= target:
            # guard against drift between the recurrence and true residual
            true_res = float(np.linalg.norm(b - a @ x))
            if true_res <= target:
                return x
            r = b - a @ x
            res = true_res
        z = inv_diag * r
        rz_new = float(r @ z)
        beta = rz_new / rz
        p = z + beta * p
        rz = rz_new
    raise SolverConvergenceError(cap, res)


EIG_DIMENSION_LIMIT = 4096


def eig_small(
    m: SparseSymmetric | np.ndarray,
    distinguished: int,
    group_tol: float = 1e-9,
) -> EigenDecomposition:
    """Full symmetric eigendecomposition with root-vector spectral weights.

    Eigenvalues within group_tol * spread of each other are merged and
    their squared root-vector components summed (the per-eigenvector split
    inside a degenerate eigenspace is basis-dependent; the sum is not).
    """
    dense = m.to_dense() if isinstance(m, SparseSymmetric) else np.asarray(m, dtype=float)
    n = dense.shape[0]
    if n > EIG_DIMENSION_LIMIT:
        raise ValueError(f"dense eigensolve limited to dimension {EIG_DIMENSION_LIMIT}")
    if not 0 <= distinguished < n:
        raise ValueError("distinguished vertex out of range")
    eigvals, eigvecs = np.linalg.eigh(dense)
    weights = eigvecs[distinguished, :] ** 2
    spread = max(abs(float(eigvals[0])), abs(float(eigvals[-1])), 1e-300)
    merge_gap = group_tol * spread
    out_vals: list[float] = []
    out_mass: list[float] = []
    i = 0
    while i < n:
        j = i
        while j + 1 < n and eigvals[j + 1] - eigvals[j] <= merge_gap:
            j += 1
        block = weights[i : j + 1]
        mass = float(np.sum(block))
        if mass > 0.0:
            val = float(np.dot(eigvals[i : j + 1], block) / mass)
        else:
            val = float(np.mean(eigvals[i : j + 1]))
        out_vals.append(val)
        out_mass.append(mass)
        i = j + 1
    total = math.fsum(out_mass)
    if abs(total - 1.0) > 1e-12:
        raise AssertionError(f"spectral masses sum to {total}, not 1")
    return EigenDecomposition(out_vals, out_mass)
