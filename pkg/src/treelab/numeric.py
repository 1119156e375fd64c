"""Shared numeric utilities: the -inf sentinel, stable summation,
logs of huge rationals, adaptive quadrature, and Richardson extrapolation."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Sequence


class NegativeInfinity:
    """Tagged sentinel for a divergent (-inf) value.

    Distinct from float('-inf'): arithmetic is forbidden, only comparisons
    and serialization are supported, so a divergence can never silently
    enter a numeric pipeline.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "-inf"

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("treelab.NEG_INF")

    def __lt__(self, other):
        return other is not self  # strictly below every real

    def __le__(self, other):
        return True

    def __gt__(self, other):
        return False

    def __ge__(self, other):
        return other is self

    def _forbidden(self, *args):
        raise TypeError("arithmetic with the -inf sentinel is not allowed")

    __add__ = __radd__ = __sub__ = __rsub__ = _forbidden
    __mul__ = __rmul__ = _forbidden
    __truediv__ = __rtruediv__ = _forbidden
    __neg__ = _forbidden


NEG_INF = NegativeInfinity()


def is_neg_inf(x) -> bool:
    return x is NEG_INF


def pairwise_sum(values: Sequence[float]) -> float:
    """Sum by pairwise recursion; order-stable and accurate to ~1e-15 rel."""
    n = len(values)
    if n == 0:
        return 0.0
    if n == 1:
        return float(values[0])
    if n <= 8:
        acc = 0.0
        for v in values:
            acc += v
        return acc
    mid = n // 2
    return pairwise_sum(values[:mid]) + pairwise_sum(values[mid:])


def log_big_int(n: int) -> float:
    """Natural log of a positive integer of any size."""
    if n <= 0:
        raise ValueError("log_big_int needs a positive integer")
    shift = max(0, n.bit_length() - 53)
    return math.log(n >> shift) + shift * math.log(2.0)


def log_fraction(x) -> float:
    """Natural log of a positive int/Fraction/float without overflow."""
    if isinstance(x, Fraction):
        return log_big_int(x.numerator) - log_big_int(x.denominator)
    if isinstance(x, int):
        return log_big_int(x)
    return math.log(x)


def adaptive_simpson(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float,
    max_depth: int = 48,
) -> tuple[float, float]:
    """Adaptive Simpson quadrature of f on [a, b].

    Returns (integral, error_estimate). The local acceptance test is the
    classic |S_fine - S_coarse|/15 criterion with tolerance split between
    halves.
    """
    fa, fb = f(a), f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)

    def rec(a, fa, m, fm, b, fb, whole, tol, depth):
        lm = 0.5 * (a + m)
        rm = 0.5 * (m + b)
        flm, frm = f(lm), f(rm)
        left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
        right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
        delta = left + right - whole
        if depth >= max_depth or abs(delta) <= 15.0 * tol:
            return left + right + delta / 15.0, abs(delta) / 15.0
        lv, le = rec(a, fa, lm, flm, m, fm, left, tol / 2.0, depth + 1)
        rv, re = rec(m, fm, rm, frm, b, fb, right, tol / 2.0, depth + 1)
        return lv + rv, le + re

    return rec(a, fa, m, fm, b, fb, whole, tol, 0)


def richardson_extrapolate(
    xs: Sequence[float],
    ys: Sequence[float],
    exponents: Sequence[float],
) -> tuple[float, float, list[list[float]]]:
    """Eliminate x**alpha terms successively from y(x) = y0 + sum a_i x**alpha_i.

    xs must be decreasing toward 0 on a (near-)geometric grid. Each stage
    combines consecutive entries; on an exactly geometric grid the surviving
    power terms keep constant coefficients, so a repeated exponent soaks up
    an x**alpha * log(x) term. Returns (extrapolated value, gap between the
    last two stages, the full tableau).
    """
    n = len(xs)
    if n < 2:
        raise ValueError("need at least two points to extrapolate")
    table = [list(ys)]
    stages = min(len(exponents), n - 1)
    for m in range(stages):
        alpha = exponents[m]
        prev = table[-1]
        cur = []
        for i in range(len(prev) - 1):
            wi, wj = xs[i] ** alpha, xs[i + 1] ** alpha
            cur.append((prev[i + 1] * wi - prev[i] * wj) / (wi - wj))
        table.append(cur)
    value = table[-1][-1]
    if len(table) >= 2 and table[-2]:
        gap = abs(value - table[-2][-1])
    else:
        gap = abs(value - ys[-1])
    return value, gap, table
