"""Dense exact linear algebra over Q on lists of lists of Fractions.

Small matrices only: everything here is plain Gaussian elimination.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list  # list[list[Fraction]]


def zeros(rows: int, cols: int) -> Matrix:
    return [[Fraction(0)] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    m = zeros(n, n)
    for i in range(n):
        m[i][i] = Fraction(1)
    return m


def as_matrix(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]


def shape(a: Matrix, cols: int | None = None) -> tuple[int, int]:
    if not a:
        return 0, (cols or 0)
    return len(a), len(a[0])


def transpose(a: Matrix, cols: int = 0) -> Matrix:
    if not a:
        return [[] for _ in range(cols)] if cols else []
    return [list(col) for col in zip(*a)]


def matmul(a: Matrix, b: Matrix, inner: int | None = None, cols: int | None = None) -> Matrix:
    """Product ``a @ b``.  ``inner``/``cols`` disambiguate empty shapes."""
    n = len(a)
    k = len(a[0]) if a else (inner or 0)
    m = len(b[0]) if b else (cols or 0)
    if b and len(b) != k:
        raise ValueError(f"shape mismatch {n}x{k} @ {len(b)}x{m}")
    out = zeros(n, m)
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for t in range(k):
            x = ai[t]
            if x:
                bt = b[t]
                for j in range(m):
                    if bt[j]:
                        oi[j] += x * bt[j]
    return out


def add(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def scale(a: Matrix, c) -> Matrix:
    return [[x * c for x in row] for row in a]


def is_zero(a: Matrix) -> bool:
    return all(not x for row in a for x in row)


def row_echelon(a: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = [list(row) for row in a]
    rows = len(m)
    cols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(a: Matrix) -> int:
    return len(row_echelon(a)[1]) if a and a[0] else 0


def det(a: Matrix) -> Fraction:
    n = len(a)
    if n == 0:
        return Fraction(1)
    if any(len(row) != n for row in a):
        raise ValueError("determinant of a non-square matrix")
    m = [list(row) for row in a]
    d = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            d = -d
        d *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] / m[c][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return d


def is_invertible(a: Matrix) -> bool:
    n = len(a)
    if n == 0:
        return True
    if any(len(row) != n for row in a):
        return False
    return det(a) != 0


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    aug = [list(row) + e for row, e in zip(a, identity(n))]
    red, pivots = row_echelon(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in red]


def solve(a: Matrix, b: Sequence) -> list[Fraction] | None:
    """One solution ``x`` of ``a x = b`` or ``None`` if inconsistent."""
    rows = len(a)
    cols = len(a[0]) if a else 0
    aug = [list(a[i]) + [Fraction(b[i])] for i in range(rows)]
    red, pivots = row_echelon(aug)
    if cols in pivots:
        return None
    x = [Fraction(0)] * cols
    for r, c in enumerate(pivots):
        x[c] = red[r][cols]
    return x


def congruence_diagonalize(s: Matrix) -> tuple[Matrix, Matrix]:
    """Return ``(P, D)`` with ``P s P^T = D`` diagonal, for symmetric ``s``.

    A zero pivot with a nonzero off-diagonal partner ``j`` is repaired by
    replacing the pair ``(e_i, e_j)`` by ``(e_i + e_j, e_i - e_j)``.
    Diagonal entries are not normalized.
    """
    n = len(s)
    g = [list(row) for row in s]
    p = identity(n)

    def congruence(rowop):
        # apply the row operation to P and the congruence to g
        nonlocal g, p
        p = rowop(p)
        g = transpose(rowop(transpose(rowop(g), n)), n)

    for i in range(n):
        if not g[i][i]:
            j = next((j for j in range(i + 1, n) if g[j][j]), None)
            if j is not None:
                def swap(m, i=i, j=j):
                    m = [list(r) for r in m]
                    m[i], m[j] = m[j], m[i]
                    return m
                congruence(swap)
            else:
                j = next((j for j in range(i + 1, n) if g[i][j]), None)
                if j is None:
                    continue
                def pair(m, i=i, j=j):
                    m = [list(r) for r in m]
                    ri, rj = m[i], m[j]
                    m[i] = [x + y for x, y in zip(ri, rj)]
                    m[j] = [x - y for x, y in zip(ri, rj)]
                    return m
                congruence(pair)
        for k in range(i + 1, n):
            if g[k][i]:
                f = g[k][i] / g[i][i]
                def elim(m, i=i, k=k, f=f):
                    m = [list(r) for r in m]
                    m[k] = [x - f * y for x, y in zip(m[k], m[i])]
                    return m
                congruence(elim)
    return p, g


def symplectic_reduce(s: Matrix) -> tuple[Matrix, Matrix]:
    """Return ``(P, G)`` with ``P s P^T = G`` block diagonal, for skew ``s``.

    Each 2x2 block is ``[[0, -lam], [lam, 0]]`` with ``lam`` not normalized.
    Raises ``ValueError`` if ``s`` is degenerate.
    """
    n = len(s)
    if n % 2:
        raise ValueError("a nondegenerate skew form has even rank")
    g = [list(row) for row in s]
    p = identity(n)

    def congruence(rowop):
        nonlocal g, p
        p = rowop(p)
        g = transpose(rowop(transpose(rowop(g), n)), n)

    def swap_rows(i, j):
        def op(m):
            m = [list(r) for r in m]
            m[i], m[j] = m[j], m[i]
            return m
        return op

    for i in range(0, n, 2):
        hit = next(((a, b) for a in range(i, n) for b in range(i, n) if g[a][b]), None)
        if hit is None:
            raise ValueError("skew form is degenerate")
        a, b = hit
        if b == i:
            a, b = b, a
        if a != i:
            congruence(swap_rows(i, a))
            if b == i:
                b = a
        if b != i + 1:
            congruence(swap_rows(i + 1, b))
        # g[i][i+1] = -lam, g[i+1][i] = lam
        for k in range(i + 2, n):
            alpha = -g[k][i + 1] / g[i][i + 1] if g[k][i + 1] else Fraction(0)
            beta = -g[k][i] / g[i + 1][i] if g[k][i] else Fraction(0)
            if alpha or beta:
                def clear(m, k=k, alpha=alpha, beta=beta):
                    m = [list(r) for r in m]
                    m[k] = [x + alpha * y + beta * z for x, y, z in zip(m[k], m[i], m[i + 1])]
                    return m
                congruence(clear)
    return p, g
