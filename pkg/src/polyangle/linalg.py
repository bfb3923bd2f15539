"""Exact row reduction over the rationals."""

from __future__ import annotations

from fractions import Fraction


def row_echelon(rows):
    """Reduced row echelon form of a rational matrix.

    Returns ``(rref_rows, pivot_columns)``.  The input is not modified.
    """
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return [], []
    n_cols = len(m[0])
    pivots = []
    r = 0
    for c in range(n_cols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                fac = m[i][c]
                m[i] = [a - fac * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows) -> int:
    return len(row_echelon(rows)[1])


def nullspace(rows, n_cols=None):
    """Basis of ``{x : rows @ x = 0}`` as a list of Fraction vectors."""
    if not rows:
        return [[Fraction(int(i == j)) for j in range(n_cols)] for i in range(n_cols)]
    n_cols = len(rows[0])
    rref, pivots = row_echelon(rows)
    free = [c for c in range(n_cols) if c not in pivots]
    basis = []
    for fc in free:
        x = [Fraction(0)] * n_cols
        x[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            x[pc] = -rref[r][fc]
        basis.append(x)
    return basis


def affine_rank(points) -> int:
    """Dimension of the affine hull of a nonempty point list."""
    pts = [tuple(p) for p in points]
    if not pts:
        raise ValueError("affine rank of an empty point set is undefined")
    p0 = pts[0]
    diffs = [[Fraction(a) - Fraction(b) for a, b in zip(p, p0)] for p in pts[1:]]
    return rank(diffs) if diffs else 0


def solve(rows, rhs):
    """A solution of ``rows @ x = rhs`` or ``None`` if inconsistent."""
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    n_cols = len(rows[0])
    rref, pivots = row_echelon(aug)
    if n_cols in pivots:
        return None
    x = [Fraction(0)] * n_cols
    for r, pc in enumerate(pivots):
        x[pc] = rref[r][-1]
    return x
