from fractions import Fraction
from itertools import product

import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.matrices.normalforms import hermite_normal_form

from hermquat.lattice import det, hnf, inverse, row_in_lattice, short_vectors, solve_integer

small = st.integers(-9, 9)
matrices = st.lists(st.lists(small, min_size=3, max_size=3), min_size=3, max_size=5)


@given(matrices)
@settings(max_examples=80, deadline=None)
def test_hnf_same_lattice(rows):
    H = hnf(rows)
    for r in rows:
        assert row_in_lattice(H, r)
    for r in H:
        assert solve_integer(rows, r) is not None


@given(matrices)
@settings(max_examples=80, deadline=None)
def test_hnf_shape(rows):
    H = hnf(rows)
    pivots = [next(c for c, t in enumerate(r) if t) for r in H]
    assert pivots == sorted(set(pivots))
    for i, (r, p) in enumerate(zip(H, pivots)):
        assert r[p] > 0
        for k in range(i):
            assert 0 <= H[k][p] < r[p]


def test_hnf_against_sympy_full_rank():
    cases = [[[2, 3, 1], [4, -1, 7], [0, 5, 5]], [[6, 0, 0], [0, 4, 0], [3, 2, 1]], [[1, 1, 0], [1, -1, 0], [0, 0, 9]]]
    for rows in cases:
        H = hnf(rows)
        assert len(H) == 3
        # sympy works with column lattices; both bases must span the same lattice
        S = hermite_normal_form(sympy.Matrix(rows).T)
        cols = [[int(S[i, j]) for i in range(3)] for j in range(S.cols)]
        assert abs(sympy.Matrix(H).det()) == abs(S.det())
        assert all(row_in_lattice(H, c) for c in cols)
        assert all(solve_integer(cols, r) is not None for r in H)


def test_hnf_drops_dependent_rows():
    assert hnf([[2, 4], [1, 2], [3, 6]]) == [[1, 2]]
    assert hnf([[0, 0]]) == []


def test_inverse_and_det():
    M = [[2, 1, 0], [1, 3, 1], [0, 1, 4]]
    inv = inverse(M)
    for i, j in product(range(3), repeat=2):
        assert sum(M[i][k] * inv[k][j] for k in range(3)) == (i == j)
    assert det(M) == Fraction(18)


def test_solve_integer_none_when_off_lattice():
    assert solve_integer([[2, 0], [0, 2]], [1, 0]) is None
    assert solve_integer([[2, 1], [0, 3]], [4, 5]) == [2, 1]


@given(st.integers(1, 40))
@settings(max_examples=20, deadline=None)
def test_short_vectors_matches_box(bound):
    G = [[2, 1, 0], [1, 4, 1], [0, 1, 6]]
    got = {x: v for x, v in short_vectors(G, bound)}
    want = {}
    for x in product(range(-6, 7), repeat=3):
        v = sum(x[i] * G[i][j] * x[j] for i in range(3) for j in range(3))
        if v <= bound:
            want[x] = v
    assert got == want
