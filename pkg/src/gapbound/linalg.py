"""Exact dense linear algebra over Q (lists of rows of mpq)."""
from __future__ import annotations

from math import gcd

from gmpy2 import mpq

from .algebra import lcm_of_denominators


def rref(rows) -> tuple:
    """Reduced row echelon form; returns ``(matrix, pivot_columns)``."""
    m = [[mpq(v) for v in row] for row in rows]
    if not m:
        return m, []
    n_rows, n_cols = len(m), len(m[0])
    pivots = []
    r = 0
    for col in range(n_cols):
        if r == n_rows:
            break
        piv = next((i for i in range(r, n_rows) if m[i][col]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][col]
        m[r] = [v * inv for v in m[r]]
        for i in range(n_rows):
            if i != r and m[i][col]:
                factor = m[i][col]
                m[i] = [a - factor * b for a, b in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
    return m, pivots


def nullspace_vector(rows, n_cols: int) -> tuple:
    """A deterministic primitive integer kernel vector.

    The last free column is set to 1 and every other free column to 0;
    denominators are then cleared and the content removed, which leaves
    the chosen free coordinate positive.
    """
    m, pivots = rref(rows) if rows else ([], [])
    free = [c for c in range(n_cols) if c not in pivots]
    if not free:
        raise ValueError("matrix has trivial kernel")
    chosen = free[-1]
    sol = [mpq(0)] * n_cols
    sol[chosen] = mpq(1)
    for r, col in enumerate(pivots):
        sol[col] = -m[r][chosen]
    scale = lcm_of_denominators(sol)
    ints = [int(v * scale) for v in sol]
    content = 0
    for v in ints:
        content = gcd(content, v)
    return tuple(v // content for v in ints)


def mat_vec(rows, vec) -> list:
    return [sum((mpq(a) * b for a, b in zip(row, vec)), mpq(0)) for row in rows]


def determinant(rows) -> mpq:
    """Bareiss fraction-free elimination; every division is exact."""
    m = [[mpq(v) for v in row] for row in rows]
    n = len(m)
    if n == 0:
        return mpq(1)
    sign = 1
    prev = mpq(1)
    for k in range(n - 1):
        if not m[k][k]:
            swap = next((i for i in range(k + 1, n) if m[i][k]), None)
            if swap is None:
                return mpq(0)
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]
