import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from factories import random_abelian_dgl
from ratcoop.forms_oracle import (OracleError, PolyForms, abelian_mc_homotopy, apl_forms, form_d, form_mul,
                                  mc_simplices_abelian, stable_abelian_mc_homotopy)
from ratcoop.freelie import FreeGradedLie
from ratcoop.linfty import LInftyAlgebra, mc_homotopy_groups
from ratcoop.qlinalg import ChainComplex, GradedVectorSpace, QMatrix, homology_dims


def cohomology(A):
    """H^* of a CDGA, reusing the chain-complex code with degrees negated."""
    n = len(A)
    space = GradedVectorSpace(tuple((l, -d) for l, d in zip(A.labels, A.degrees)))
    d = QMatrix(n, n, {(r, c): x for c, out in A.differential.items() for r, x in out.items()})
    return {-k: v for k, v in homology_dims(ChainComplex(space, d)).items()}


def test_point():
    A = apl_forms(0, 3)
    assert A.labels == ("1",) and A.degrees == (0,)


def test_interval_basis():
    A = apl_forms(1, 2)
    assert set(A.labels) == {"1", "t1", "t1^2", "dt1", "t1*dt1"}
    assert A.differential[A.index("t1")] == {A.index("dt1"): 1}
    assert A.differential[A.index("t1^2")] == {A.index("t1*dt1"): 2}


@pytest.mark.parametrize("n,cap", [(1, 1), (1, 3), (2, 1), (2, 2), (2, 3)])
def test_simplex_is_acyclic(n, cap):
    A = apl_forms(n, cap)
    assert A.problems() == []
    assert cohomology(A) == {0: 1}


def test_forms_algebra():
    t = {((1, 0), ()): Fraction(1)}
    ds = {((0, 0), (2,)): Fraction(1)}
    assert form_d(form_d(t)) == {}
    dt = form_d(t)
    assert form_mul(dt, dt) == {}
    assert form_mul(dt, ds) == {k: -v for k, v in form_mul(ds, dt).items()}


@pytest.mark.parametrize("cap", [1, 2, 3])
def test_simplicial_identities(cap):
    P2, P1 = PolyForms(2, cap), PolyForms(1, cap)
    for i in range(3):
        for j in range(i + 1, 3):
            assert P1.face(i) @ P2.face(j) == P1.face(j - 1) @ P2.face(i)
    # d_i s_j
    P0 = PolyForms(0, cap)
    for j in range(2):
        for i in range(3):
            lhs = P2.face(i) @ P1.degeneracy(j)
            if i in (j, j + 1):
                assert lhs == QMatrix.identity(len(P1))
            elif i < j:
                assert lhs == P0.degeneracy(j - 1) @ P1.face(i)
            else:
                assert lhs == P0.degeneracy(j) @ P1.face(i - 1)


@pytest.mark.parametrize("n", [1, 2])
def test_faces_are_chain_maps(n):
    P, Q = PolyForms(n, 2), PolyForms(n - 1, 2)
    A, B = P.cdga, Q.cdga
    for i in range(n + 1):
        f = P.face(i)
        for j in range(len(P)):
            v = {j: Fraction(1)}
            assert f.apply(A.d(v)) == B.d(f.apply(v))


def test_oracle_domain():
    with pytest.raises(OracleError):
        PolyForms(3, 2)
    L = LInftyAlgebra.from_free_lie(FreeGradedLie.on({"a": -1}, 2))
    with pytest.raises(OracleError):
        mc_simplices_abelian(L, 1)


def test_zero_algebra():
    Z = LInftyAlgebra(GradedVectorSpace(()), {})
    assert mc_simplices_abelian(Z, 2).dim == 0
    r = abelian_mc_homotopy(Z)
    assert (r.pi0, r.pi1) == (0, 0)


def test_one_degree_zero_generator():
    L = LInftyAlgebra(GradedVectorSpace((("w", 0),)), {})
    mc1 = mc_simplices_abelian(L, 1, cap=2)
    assert mc1.dim > 0
    r = stable_abelian_mc_homotopy(L)
    assert (r.pi0, r.pi1) == (0, 1)


@settings(max_examples=8)
@given(st.integers(0, 10_000))
def test_matches_homology(seed):
    L = random_abelian_dgl(random.Random(seed), max_dim=6)
    h = mc_homotopy_groups(L).homology
    r = stable_abelian_mc_homotopy(L)
    assert (r.pi0, r.pi1) == (h.get(-1, 0), h.get(0, 0))
