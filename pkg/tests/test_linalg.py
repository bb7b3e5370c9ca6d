from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

import oracles
from endocert.linalg import (EchelonBasis, FpMatrix, NoSolution, det_int, det_mod, inverse_mod,
                             is_prime, mat_mul, mat_mul_mod, nullspace_mod, nullspace_q, rank_mod,
                             rank_q, rref_mod, smith_normal_form, solve_linear_q)

PRIMES = st.sampled_from([2, 3, 5, 7])


def int_matrix(rows, cols, lo=-9, hi=9):
    return st.lists(st.lists(st.integers(lo, hi), min_size=cols, max_size=cols),
                    min_size=rows, max_size=rows)


@st.composite
def matrix_shapes(draw, max_rows=5, max_cols=5, lo=-9, hi=9):
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    return draw(int_matrix(r, c, lo, hi))


def test_is_prime_small():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


@given(matrix_shapes(), PRIMES)
def test_nullspace_mod_is_kernel(M, p):
    ncols = len(M[0])
    ker = nullspace_mod(M, ncols, p)
    for v in ker:
        assert all(sum(a * b for a, b in zip(row, v)) % p == 0 for row in M)
    assert len(ker) + oracles.rank_fp(M, p) == ncols
    assert rank_mod(M, p) == oracles.rank_fp(M, p)


@given(matrix_shapes(), PRIMES)
def test_rref_is_reduced(M, p):
    red, piv = rref_mod(M, p, len(M[0]))
    for i, c in enumerate(piv):
        assert red[i][c] == 1
        assert all(red[j][c] == 0 for j in range(len(red)) if j != i)
    assert piv == sorted(piv)


@given(st.integers(1, 4).flatmap(lambda n: int_matrix(n, n)), PRIMES)
def test_inverse_and_det_mod(M, p):
    n = len(M)
    d = det_mod(M, p)
    assert (d != 0) == (oracles.rank_fp(M, p) == n)
    if d:
        inv = inverse_mod(M, p)
        assert mat_mul_mod(M, inv, p) == [[int(i == j) for j in range(n)] for i in range(n)]
    else:
        with pytest.raises(ZeroDivisionError):
            inverse_mod(M, p)


@given(st.integers(1, 5).flatmap(lambda n: int_matrix(n, n, -20, 20)))
def test_det_int_matches_fraction_elimination(M):
    assert det_int(M) == oracles.det_bareiss(M)


@given(matrix_shapes(4, 4))
def test_smith_form_certificate_and_minors(M):
    snf = smith_normal_form(M)
    assert mat_mul(mat_mul(snf.U, M), snf.V) == [list(r) for r in snf.D]
    assert abs(det_int(snf.U)) == 1 and abs(det_int(snf.V)) == 1
    d = list(snf.invariant_factors)
    for a, b in zip(d, d[1:]):
        assert (b == 0) or (a != 0 and b % a == 0)
    assert d == oracles.smith_invariants_by_minors(M)


def test_smith_known_example():
    # gcd of k x k minors: 2, 12, 144
    assert smith_normal_form([[2, 4, 4], [-6, 6, 12], [10, -4, -16]]).invariant_factors == (2, 6, 12)


@given(matrix_shapes(4, 5))
def test_rational_nullspace_and_rank(M):
    ncols = len(M[0])
    ker = nullspace_q(M, ncols)
    for v in ker:
        assert all(sum(Fraction(a) * b for a, b in zip(row, v)) == 0 for row in M)
    assert rank_q(M, ncols) == oracles.rank_q(M)
    assert len(ker) == ncols - oracles.rank_q(M)


@given(matrix_shapes(4, 4), st.lists(st.integers(-5, 5), min_size=4, max_size=4))
def test_solve_linear_q(M, x0):
    x0 = x0[:len(M[0])]
    b = [sum(a * x for a, x in zip(row, x0)) for row in M]
    x = solve_linear_q(M, b)
    assert [sum(Fraction(a) * xi for a, xi in zip(row, x)) for row in M] == b


def test_solve_linear_q_inconsistent():
    with pytest.raises(NoSolution):
        solve_linear_q([[1, 1], [2, 2]], [1, 3])


@given(st.lists(st.lists(st.integers(0, 4), min_size=4, max_size=4), max_size=6))
def test_echelon_basis_span(vectors):
    p = 5
    E = EchelonBasis(p, 4)
    for v in vectors:
        E.add(v)
    assert len(E) == (oracles.rank_fp(vectors, p) if vectors else 0)
    for v in vectors:
        assert E.contains(v)


def test_fpmatrix_basics():
    A = FpMatrix(3, [[1, 2], [0, 1]])
    I = FpMatrix.identity(2, 3)
    assert (A @ I).rows == A.rows
    assert A.apply([1, 1]) == (0, 1)
    assert [list(r) for r in A.transpose().rows] == [[1, 0], [2, 1]]
