from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from ratcoop.qlinalg import (ChainComplex, EchelonBasis, GradedVectorSpace, QMatrix, format_fraction,
                             format_vector, homology_dims, homology_representatives, kernel_image,
                             rank, rref, solve)

small = st.integers(-3, 3)


def dense(rows, cols):
    return st.lists(st.lists(small, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


@given(st.integers(1, 5).flatmap(lambda r: st.integers(1, 5).flatmap(lambda c: dense(r, c))))
def test_rank_matches_sympy(data):
    M = QMatrix.from_dense(data)
    assert rank(M) == sympy.Matrix(data).rank()


@given(st.integers(1, 5).flatmap(lambda r: st.integers(1, 5).flatmap(lambda c: dense(r, c))))
def test_kernel_image(data):
    M = QMatrix.from_dense(data)
    ker, img = kernel_image(M)
    assert len(ker) + len(img) == M.cols
    for v in ker:
        assert M.apply(v) == {}
    assert len(EchelonBasis(img)) == len(img)


@given(dense(4, 4), st.lists(small, min_size=4, max_size=4))
def test_solve_roundtrip(data, x):
    M = QMatrix.from_dense(data)
    xv = {i: Fraction(c) for i, c in enumerate(x) if c}
    b = M.apply(xv)
    sol = solve(M, b)
    assert sol is not None and M.apply(sol) == b


def test_solve_inconsistent():
    M = QMatrix.from_dense([[1, 1], [2, 2]])
    assert solve(M, {0: Fraction(1), 1: Fraction(3)}) is None


def test_rref_pivots():
    rows, piv = rref([{0: Fraction(2), 1: Fraction(4)}, {0: Fraction(1), 1: Fraction(2)}, {1: Fraction(1)}])
    assert len(rows) == 2 and len(piv) == 2


def test_matrix_algebra():
    A = QMatrix.from_dense([[1, 2], [3, 4]])
    assert (A @ QMatrix.identity(2)) == A
    assert (A - A).is_zero()
    assert A.transpose().to_dense()[0][1] == 3
    with pytest.raises(IndexError):
        QMatrix(1, 1, {(1, 0): 1})


def test_graded_space_rejects_duplicates():
    with pytest.raises(ValueError):
        GradedVectorSpace((("a", 0), ("a", 1)))


def test_circle_homology():
    # cellular S^1: one 0-cell, one 1-cell with zero boundary
    S = GradedVectorSpace((("p", 0), ("e", 1)))
    assert homology_dims(ChainComplex(S)) == {0: 1, 1: 1}


def test_interval_homology():
    S = GradedVectorSpace((("a", 0), ("b", 0), ("e", 1)))
    d = QMatrix(3, 3, {(0, 2): -1, (1, 2): 1})
    C = ChainComplex(S, d)
    assert homology_dims(C) == {0: 1}
    assert len(homology_representatives(C, 0)) == 1


def test_chain_complex_validation():
    S = GradedVectorSpace((("a", 0), ("b", 1), ("c", 2)))
    with pytest.raises(ValueError):
        ChainComplex(S, QMatrix(3, 3, {(0, 2): 1}))
    with pytest.raises(ValueError):
        ChainComplex(S, QMatrix(3, 3, {(0, 1): 1, (1, 2): 1}))


def test_formatting():
    assert format_fraction(Fraction(-3, 4)) == "-3/4"
    assert format_vector({0: Fraction(1), 1: Fraction(-1, 2)}, ["a", "b"]) in ("a - 1/2*b", "a-1/2*b")
    assert format_vector({}, ["a"]) == "0"
