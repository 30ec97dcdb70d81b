import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from oracles import bch_words, dgl_axiom_failures, element_words
from ratcoop.freelie import FreeGradedLie, LieAlgebraError
from ratcoop.linfty import (LInftyAlgebra, MaurerCartanError, bch, check_all, check_generalized_jacobi,
                            is_maurer_cartan, koszul_sort, mc_curvature, mc_homotopy_groups,
                            recheck_after_edit, single_entry_mutations, twist)
from ratcoop.qlinalg import GradedVectorSpace


F = Fraction


def free(spec, cap=3):
    return LInftyAlgebra.from_free_lie(FreeGradedLie.on(spec, cap))


def test_koszul_sort_signs():
    degs = [1, 1, 2]
    # swapping two odd elements: antisymmetric sign * Koszul sign = +1
    assert koszul_sort((1, 0), degs) == ((0, 1), 1)
    assert koszul_sort((2, 0), degs) == ((0, 2), -1)


@pytest.mark.parametrize("spec", [{"a": 1}, {"a": 2, "b": 3}, {"a": 0, "b": 1}, {"a": 1, "b": 1, "c": 2}])
def test_free_lie_algebras_pass(spec):
    assert all(r.ok for r in check_all(free(spec)))


def test_dgl_from_free_dgl_cp2():
    # L(u, v), |u| = 1, |v| = 3, dv = 1/2 [u,u]: a Quillen model of CP^2
    L = FreeGradedLie.on({"u": 1, "v": 3}, 4)
    A = LInftyAlgebra.from_free_dgl(L, {"v": F(1) / 2 * L.parse("[u,u]")})
    assert all(r.ok for r in check_all(A))
    h = mc_homotopy_groups(A).homology
    assert h[1] == 1 and h[4] == 1   # pi_2 and pi_5 of CP^2
    assert 2 not in h and 3 not in h
    with pytest.raises(LieAlgebraError):
        LInftyAlgebra.from_free_dgl(L, {"v": L.parse("u")})


def test_dgl_oracle_agrees_on_free_dgl():
    L = FreeGradedLie.on({"u": 1, "v": 3}, 4)
    A = LInftyAlgebra.from_free_dgl(L, {"v": F(1) / 2 * L.parse("[u,u]")})
    d = {i: out for (i,), out in A.table.get(1, {}).items()}
    assert dgl_axiom_failures(list(A.degrees), d, A.table[2], weights=A.weights, cap=A.nilpotency_cap) == []


def test_corrupted_bracket_reports_tuple():
    A = free({"a": 1, "b": 1}, 3)
    key = (A.space.index("a"), A.space.index("b"))
    bad = A.with_entry(key, {A.space.index("[a,b]"): F(2)})
    rep = check_generalized_jacobi(bad, 3)
    assert not rep.ok
    assert any("a" in v.inputs for v in rep.violations)


def test_degree_and_skew_violations():
    S = GradedVectorSpace((("x", 0), ("y", 0), ("z", 1)))
    A = LInftyAlgebra(S, {2: {(0, 0): {1: 1}, (0, 1): {2: 1}}})
    kinds = {v.kind for v in check_generalized_jacobi(A, 2).violations}
    assert {"skew", "degree"} <= kinds


def test_mutations_of_small_algebras_caught_or_valid():
    A = free({"a": 1, "b": 2}, 3)
    for key, r, M in single_entry_mutations(A):
        if all(rep.ok for rep in check_all(M, max_violations=1)):
            assert dgl_axiom_failures(list(M.degrees), {}, M.table.get(2, {}),
                                      weights=M.weights, cap=M.nilpotency_cap) == []


def _cp2():
    L = FreeGradedLie.on({"u": 1, "v": 3}, 4)
    return LInftyAlgebra.from_free_dgl(L, {"v": F(1) / 2 * L.parse("[u,u]")})


@pytest.mark.parametrize("make", [lambda: free({"a": 1, "b": 2}, 4), lambda: free({"a": 0, "b": 1}, 3),
                                  lambda: free({"a": 1, "b": 1, "c": 2}, 3), _cp2],
                         ids=["L(a1,b2)", "L(a0,b1)", "L(a1,b1,c2)", "cp2-dgl"])
def test_recheck_after_edit_agrees_with_full_check(make):
    A = make()
    assert all(r.ok for r in check_all(A))
    n = 0
    for key, r, M in single_entry_mutations(A):
        local = [rep.ok for rep in recheck_after_edit(M, key)]
        full = [rep.ok for rep in check_all(M)]
        assert local == full, (key, r)
        n += 1
    assert n > 20


def test_with_entry_leaves_original_alone():
    A = free({"a": 1, "b": 1}, 3)
    before = {k: dict(v) for k, v in A.table[2].items()}
    key = (A.space.index("a"), A.space.index("b"))
    M = A.with_entry(key, {})
    assert A.table[2] == before and key not in M.table[2]
    assert M.free_source() is None and A.free_source() is not None


# Maurer-Cartan

def dgl_with_mc():
    # L(x), |x| = -1, dx = -1/2 [x,x]: tau = x is Maurer-Cartan
    L = FreeGradedLie.on({"x": -1}, 3)
    return L, LInftyAlgebra.from_free_dgl(L, {"x": F(-1, 2) * L.parse("[x,x]")})


def test_mc_element_and_twist():
    L, A = dgl_with_mc()
    tau = A.from_lie_element(L.gen("x"))
    ok, res = is_maurer_cartan(A, tau)
    assert ok and not res
    T = twist(A, tau)
    assert all(r.ok for r in check_all(T))
    with pytest.raises(MaurerCartanError):
        twist(A, {i: 2 * c for i, c in tau.items()})


def curvature_oracle(l1, l2, z):
    # l1(z) + 1/2 l2(z, z) computed from dense tables
    out = {}
    for i, a in z.items():
        for r, c in l1.get(i, {}).items():
            out[r] = out.get(r, 0) + a * c
    for (i, a), (j, b) in itertools.product(z.items(), repeat=2):
        key = (min(i, j), max(i, j))  # l2 is symmetric on odd inputs
        for r, c in l2.get(key, {}).items():
            out[r] = out.get(r, 0) + Fraction(1, 2) * a * b * c
    return {r: c for r, c in out.items() if c}


@settings(max_examples=30)
@given(st.lists(st.integers(-2, 2), min_size=3, max_size=3))
def test_curvature_matches_oracle(cs):
    S = GradedVectorSpace((("a", -1), ("b", -1), ("c", -1), ("p", -2), ("q", -2)))
    A = LInftyAlgebra(S, {1: {(0,): {3: 1}, (2,): {4: 1}},
                          2: {(0, 1): {3: 1}, (1, 1): {4: 2}, (0, 2): {4: -1}}})
    z = {i: F(c) for i, c in enumerate(cs) if c}
    l1 = {i: out for (i,), out in A.table[1].items()}
    assert mc_curvature(A, z) == curvature_oracle(l1, A.table[2], z)


def test_twisting_abelian_shifts_nothing():
    S = GradedVectorSpace((("z", -1), ("w", 0)))
    A = LInftyAlgebra(S, {})
    assert mc_homotopy_groups(A).homology == {-1: 1, 0: 1}
    assert mc_homotopy_groups(A, {0: F(3)}).homology == {-1: 1, 0: 1}


def test_twist_changes_homology():
    # l2(z, w) = w' kills the pair after twisting by z
    S = GradedVectorSpace((("z", -1), ("w", 0), ("w'", -1)))
    A = LInftyAlgebra(S, {2: {(0, 1): {2: 1}}})
    assert mc_homotopy_groups(A).homology == {-1: 2, 0: 1}
    assert mc_homotopy_groups(A, {0: F(1)}).homology == {-1: 1}


# BCH

def degree_zero_pair(cap):
    L = FreeGradedLie.on({"x": 0, "y": 0}, cap)
    return L, L.gen("x"), L.gen("y")


def to_words(e):
    return {tuple(w): c for w, c in element_words(e).items()}


def test_bch_matches_tensor_oracle_class4():
    L, x, y = degree_zero_pair(4)
    got = to_words(bch(x, y, 4))
    want = bch_words({("x",): F(1)}, {("y",): F(1)}, 4)
    assert got == {w: c for w, c in want.items() if w}


@settings(max_examples=15)
@given(st.lists(st.integers(-2, 2), min_size=6, max_size=6))
def test_bch_associative_class4(cs):
    L, x, y = degree_zero_pair(4)
    z = cs[0] * x + cs[1] * y + cs[2] * L.parse("[x,y]")
    a = cs[3] * x + y
    b = x + cs[4] * y + cs[5] * L.parse("[x,[x,y]]")
    assert bch(bch(a, b, 4), z, 4) == bch(a, bch(b, z, 4), 4)


def test_bch_inverse_and_errors():
    L, x, y = degree_zero_pair(4)
    assert not bch(x, -x, 4)
    assert bch(x, L.zero(), 4) == x
    with pytest.raises(LieAlgebraError):
        bch(x, y, 3)
    M = FreeGradedLie.on({"a": 1}, 2)
    with pytest.raises(LieAlgebraError):
        bch(M.gen("a"), M.gen("a"), 2)
