from __future__ import annotations

from fractions import Fraction

import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from mapsphere import linalg

entries = st.integers(-4, 4)


def square(n):
    return st.lists(st.lists(entries, min_size=n, max_size=n), min_size=n, max_size=n)


@st.composite
def matrices(draw):
    n = draw(st.integers(1, 5))
    return draw(square(n))


@st.composite
def symmetric(draw):
    n = draw(st.integers(1, 5))
    m = draw(square(n))
    return [[m[i][j] + m[j][i] for j in range(n)] for i in range(n)]


@given(matrices())
def test_det_and_rank_match_sympy(m):
    assert linalg.det(linalg.as_matrix(m)) == sympy.Matrix(m).det()
    assert linalg.rank(linalg.as_matrix(m)) == sympy.Matrix(m).rank()


@given(matrices())
def test_inverse(m):
    a = linalg.as_matrix(m)
    if linalg.is_invertible(a):
        assert linalg.matmul(a, linalg.inverse(a)) == linalg.identity(len(a))


@given(matrices(), st.lists(entries, min_size=5, max_size=5))
def test_solve(m, b):
    a = linalg.as_matrix(m)
    rhs = [Fraction(x) for x in b[:len(a)]]
    x = linalg.solve(a, rhs)
    consistent = sympy.Matrix(m).rank() == sympy.Matrix(m).row_join(sympy.Matrix(rhs)).rank()
    assert (x is not None) == consistent
    if x is not None:
        assert [sum(r * v for r, v in zip(row, x)) for row in a] == rhs


@given(symmetric())
@settings(max_examples=80)
def test_congruence_diagonalize(s):
    a = linalg.as_matrix(s)
    p, d = linalg.congruence_diagonalize(a)
    assert linalg.matmul(linalg.matmul(p, a), linalg.transpose(p)) == d
    assert all(d[i][j] == 0 for i in range(len(d)) for j in range(len(d)) if i != j)
    assert linalg.is_invertible(p)


def test_zero_pivot_pair_trick():
    p, d = linalg.congruence_diagonalize(linalg.as_matrix([[0, 1], [1, 0]]))
    assert d == [[2, 0], [0, -2]]


@given(st.integers(1, 3).flatmap(lambda k: st.lists(st.lists(entries, min_size=2 * k, max_size=2 * k),
                                                       min_size=2 * k, max_size=2 * k)))
@settings(max_examples=80)
def test_symplectic_reduce(m):
    n = len(m)
    s = linalg.as_matrix([[m[i][j] - m[j][i] for j in range(n)] for i in range(n)])
    if linalg.det(s) == 0:
        return
    p, g = linalg.symplectic_reduce(s)
    assert linalg.matmul(linalg.matmul(p, s), linalg.transpose(p)) == g
    for i in range(n):
        for j in range(n):
            if i // 2 != j // 2 or i == j:
                assert g[i][j] == 0
    for i in range(0, n, 2):
        assert g[i][i + 1] == -g[i + 1][i] != 0
