"""Exact linear algebra over the rationals.

Matrices are lists of rows of ``Fraction``. Nothing here mutates its inputs.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

Matrix = List[List[Fraction]]


def to_matrix(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(v) for v in row] for row in rows]


def rref(rows: Sequence[Sequence[Fraction]]) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form and the list of pivot columns."""
    m = [list(map(Fraction, row)) for row in rows]
    if not m:
        return m, []
    n_rows, n_cols = len(m), len(m[0])
    pivots: List[int] = []
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        piv = next((i for i in range(r, n_rows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(n_rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    return len(rref(rows)[1])


def kernel(rows: Sequence[Sequence[Fraction]], n_cols: Optional[int] = None) -> Matrix:
    """Basis of the right null space {v : A v = 0}.

    ``n_cols`` is needed when ``rows`` is empty (the whole space is the kernel).
    """
    if not rows:
        if n_cols is None:
            raise ValueError("n_cols required for an empty matrix")
        return [[Fraction(int(i == j)) for j in range(n_cols)] for i in range(n_cols)]
    n_cols = len(rows[0])
    red, pivots = rref(rows)
    free = [c for c in range(n_cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n_cols
        v[f] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -red[i][f]
        basis.append(v)
    return basis


def transpose(rows: Sequence[Sequence[Fraction]]) -> Matrix:
    return [list(col) for col in zip(*rows)]


def solve(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> Optional[List[Fraction]]:
    """One solution of A x = b (free variables set to zero), or None if inconsistent."""
    if not rows:
        raise ValueError("empty system")
    n_cols = len(rows[0])
    aug = [list(row) + [Fraction(b)] for row, b in zip(rows, rhs)]
    red, pivots = rref(aug)
    if n_cols in pivots:
        return None
    x = [Fraction(0)] * n_cols
    for i, pc in enumerate(pivots):
        x[pc] = red[i][n_cols]
    return x


def mat_vec(rows: Sequence[Sequence[Fraction]], v: Sequence[Fraction]) -> List[Fraction]:
    return [sum((a * b for a, b in zip(row, v)), Fraction(0)) for row in rows]


def inverse(rows: Sequence[Sequence[Fraction]]) -> Matrix:
    n = len(rows)
    if any(len(row) != n for row in rows):
        raise ValueError("inverse of a non-square matrix")
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(rows)]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red]


def span_dim(vectors: Sequence[Sequence[Fraction]]) -> int:
    return rank(vectors) if vectors else 0
