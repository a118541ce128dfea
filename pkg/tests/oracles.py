"""Independent reference implementations for cross-checking.

Everything here deliberately uses a different algorithm from the
package: dense Gaussian elimination instead of star-mesh reduction,
O(n^2) double loops instead of tree-accelerated pair scans, float
linear solves instead of exact back-substitution.  Slow and obvious on
purpose.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np


def dense_laplacian(n: int, edges: dict[tuple[int, int], Fraction]):
    lap = [[Fraction(0)] * n for _ in range(n)]
    for (i, j), c in edges.items():
        lap[i][i] += c
        lap[j][j] += c
        lap[i][j] -= c
        lap[j][i] -= c
    return lap


def schur_reduce_dense(
    n: int, edges: dict[tuple[int, int], Fraction], boundary: tuple[int, ...]
) -> dict[tuple[int, int], Fraction]:
    """Eliminate interior rows of the Laplacian by dense exact Gaussian
    elimination; read conductances off the resulting boundary block.

    Returns edges keyed by positions in `boundary`.
    """
    lap = dense_laplacian(n, edges)
    interior = [v for v in range(n) if v not in boundary]
    order = list(interior) + list(boundary)
    a = [[lap[r][c] for c in order] for r in order]
    k = len(interior)
    for p in range(k):
        piv = a[p][p]
        assert piv != 0, "interior vertex with no connection"
        for r in range(p + 1, len(order)):
            if a[r][p] == 0:
                continue
            f = a[r][p] / piv
            for c in range(p, len(order)):
                a[r][c] -= f * a[p][c]
    out: dict[tuple[int, int], Fraction] = {}
    for bi in range(len(boundary)):
        for bj in range(bi + 1, len(boundary)):
            c = -a[k + bi][k + bj]
            if c != 0:
                out[(bi, bj)] = c
    return out


def solve_dense(
    lap: list[list[Fraction]],
    rhs: list[Fraction],
    fixed: dict[int, Fraction],
) -> list[Fraction]:
    """Exact dense solve of L u = rhs with Dirichlet values `fixed`."""
    n = len(lap)
    free = [v for v in range(n) if v not in fixed]
    idx = {v: i for i, v in enumerate(free)}
    a = [[lap[r][c] for c in free] for r in free]
    b = []
    for r in free:
        acc = rhs[r]
        for v, val in fixed.items():
            acc -= lap[r][v] * val
        b.append(acc)
    m = len(free)
    for p in range(m):
        # partial pivot (exact arithmetic still needs a nonzero pivot)
        piv_row = next(r for r in range(p, m) if a[r][p] != 0)
        if piv_row != p:
            a[p], a[piv_row] = a[piv_row], a[p]
            b[p], b[piv_row] = b[piv_row], b[p]
        for r in range(p + 1, m):
            if a[r][p] == 0:
                continue
            f = a[r][p] / a[p][p]
            for c in range(p, m):
                a[r][c] -= f * a[p][c]
            b[r] -= f * b[p]
    x = [Fraction(0)] * m
    for p in range(m - 1, -1, -1):
        acc = b[p]
        for c in range(p + 1, m):
            acc -= a[p][c] * x[c]
        x[p] = acc / a[p][p]
    out = [Fraction(0)] * n
    for v, val in fixed.items():
        out[v] = val
    for v in free:
        out[v] = x[idx[v]]
    return out


def effective_resistance_dense(
    n: int, edges: dict[tuple[int, int], Fraction], a: int, b: int
) -> Fraction:
    """Voltage at `a` when unit current enters at `a`, exits at `b`."""
    lap = dense_laplacian(n, edges)
    rhs = [Fraction(0)] * n
    rhs[a] = Fraction(1)
    u = solve_dense(lap, rhs, {b: Fraction(0)})
    return u[a]


def exit_time_float(
    n: int, edges: dict[tuple[int, int], Fraction], absorbing: set[int], start: int
) -> float:
    """Expected steps to hit `absorbing` from `start`, dense float solve
    of (L E)(v) = deg(v) on free vertices."""
    lap = np.zeros((n, n))
    deg = np.zeros(n)
    for (i, j), c in edges.items():
        w = float(c)
        lap[i, i] += w
        lap[j, j] += w
        lap[i, j] -= w
        lap[j, i] -= w
        deg[i] += w
        deg[j] += w
    free = [v for v in range(n) if v not in absorbing]
    sol = np.linalg.solve(lap[np.ix_(free, free)], deg[free])
    out = np.zeros(n)
    out[free] = sol
    return float(out[start])


def ball_volumes_brute(pts: np.ndarray, w: np.ndarray, r: float) -> np.ndarray:
    """V(x,r) per point: total weight within the open ball, double loop."""
    n = len(pts)
    vols = w.astype(float).copy()
    for i in range(n):
        for j in range(i + 1, n):
            d2 = float((pts[i, 0] - pts[j, 0]) ** 2 + (pts[i, 1] - pts[j, 1]) ** 2)
            if d2 < r * r:
                vols[i] += w[j]
                vols[j] += w[i]
    return vols


def oscillation_brute(
    pts: np.ndarray, w: np.ndarray, vals: np.ndarray, r: float
) -> float:
    """Double integral of (u(x)-u(y))^2 over open-ball pairs."""
    total = 0.0
    n = len(pts)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            d2 = float((pts[i, 0] - pts[j, 0]) ** 2 + (pts[i, 1] - pts[j, 1]) ** 2)
            if d2 < r * r:
                total += float(w[i]) * float(w[j]) * float(vals[i] - vals[j]) ** 2
    return total


def besov_raw_brute(pts: np.ndarray, w: np.ndarray, vals: np.ndarray, r: float) -> float:
    """Volume-normalized mean-square oscillation, the slow way."""
    vols = ball_volumes_brute(pts, w, r)
    total = 0.0
    n = len(pts)
    for i in range(n):
        inner = 0.0
        for j in range(n):
            if i == j:
                continue
            d2 = float((pts[i, 0] - pts[j, 0]) ** 2 + (pts[i, 1] - pts[j, 1]) ** 2)
            if d2 < r * r:
                inner += float(w[j]) * float(vals[i] - vals[j]) ** 2
        total += float(w[i]) * inner / float(vols[i])
    return total
