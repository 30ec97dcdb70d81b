import itertools
from fractions import Fraction

import pytest

from oracles import antipodal_degree, reynolds_rank_oracle
from ratcoop.equivariant import ActionError, FiniteGroup, GroupAction, check_equivariance, swap_action
from ratcoop.freelie import FreeGradedLie, free_product
from ratcoop.linfty import LInftyAlgebra, check_all
from ratcoop.mapmodel import (CDGA, CDGAError, TensorLie, cohomology_sphere_cdga, ground_field_cdga,
                              hofixed_homotopy_groups, tensor_model)
from ratcoop.qlinalg import GradedVectorSpace
from ratcoop.syntax import ParseError


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_sphere_action_is_antipodal_degree(n):
    A = cohomology_sphere_cdga(n)
    s = A.action.matrices[A.action.group.element("s1")]
    x = A.index("x")
    assert s.apply({x: Fraction(1)}) == {x: Fraction(antipodal_degree(n - 1))}
    assert A.problems() == []


def test_cdga_validation():
    with pytest.raises(CDGAError):
        CDGA.from_table([("1", 0), ("a", 1)], "1", {("a", "a"): {"1": 1}})  # wrong degree
    with pytest.raises(CDGAError):
        CDGA.from_table([("1", 0), ("a", 0), ("b", 1)], "1", d={"a": {"b": 1}, "b": {"a": 1}})
    A = CDGA.from_table([("1", 0), ("a", 1), ("b", 2)], "1", {("a", "a"): {}}, d={"a": {"b": 1}})
    assert not A.has_zero_differential()
    with pytest.raises(ActionError):
        cohomology_sphere_cdga(2, FiniteGroup.symmetric(3))


def small_product(cap=3, degs=(1, 2)):
    L = FreeGradedLie.on({"u": degs[0], "v": degs[1]}, cap)
    P = free_product([L, L], ["1", "2"])
    return L, P, swap_action(P, L.names, ["1", "2"])


@pytest.mark.parametrize("n", [1, 2, 3])
def test_tensor_model_jacobi_and_equivariance(n):
    L, P, act = small_product(cap=2)
    A = cohomology_sphere_cdga(n, act.group)
    LP = LInftyAlgebra.from_free_lie(P)
    tm = tensor_model(A, LP, act.on_linfty(LP))
    assert all(r.ok for r in check_all(tm.algebra))
    assert check_equivariance(tm.action, tm.algebra).ok


def test_tensor_model_with_differential_passes_jacobi():
    A = CDGA.from_table([("1", 0), ("a", 1), ("b", 2)], "1", d={"a": {"b": 1}})
    L = FreeGradedLie.on({"u": 1, "v": 3}, 3)
    D = LInftyAlgebra.from_free_dgl(L, {"v": Fraction(1, 2) * L.parse("[u,u]")})
    assert all(r.ok for r in check_all(tensor_model(A, D).algebra))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_lazy_bracket_matches_materialized(n):
    L, P, act = small_product(cap=3)
    A = cohomology_sphere_cdga(n, act.group)
    T = TensorLie(A, P, act)
    LP = LInftyAlgebra.from_free_lie(P)
    tm = tensor_model(A, LP)
    basis = [t for t in P.basis() if P.weight_of(t) == 1]

    def as_vector(e):
        v = {}
        for a, xi in e.parts.items():
            for t, c in xi.terms.items():
                v[tm.index(A.labels[a], P.format_tree(t))] = c
        return v

    for (a, s), (b, t) in itertools.product(itertools.product(A.labels, basis), repeat=2):
        e = T.pure(a, P.element({s: 1}))
        f = T.pure(b, P.element({t: 1}))
        assert as_vector(T.bracket(e, f)) == tm.algebra.ell(as_vector(e), as_vector(f))


def test_parse_and_format():
    L, P, act = small_product(degs=(4, 6))
    A = cohomology_sphere_cdga(3, act.group)
    T = TensorLie(A, P, act)
    e = T.parse("x@[u1,u2] + 1@(v1+v2)")
    assert str(e) == "x⊗[u1,u2] + 1⊗(v1+v2)"
    assert e.format(pretty=True) == "x⊗[u₁,u₂] + 1⊗(v₁+v₂)"
    assert T.is_invariant(e) and e.degree() == 6
    assert not T.is_invariant(T.parse("1@u1"))
    with pytest.raises(ParseError):
        T.parse("y@u1")
    with pytest.raises(ParseError):
        T.parse("u1")


def test_hofixed_table_n3_matches_reynolds_oracle():
    L, P, act = small_product(cap=3, degs=(4, 6))
    A = cohomology_sphere_cdga(3, act.group)
    rep = hofixed_homotopy_groups(A, P, act, (0, 12))
    assert rep.dims == reynolds_rank_oracle(3, 3, range(0, 13))
    assert rep.complete
    assert set(rep.bases[6]) == {"1⊗(v1+v2)", "x⊗[u1,u2]"}


def test_hofixed_with_differential_uses_homology():
    # A = Q{1, a, b}, da = b (acyclic above degree 0), trivial action; L = Q{z} abelian
    G = FiniteGroup.symmetric(2)
    A = CDGA.from_table([("1", 0), ("a", 1), ("b", 2)], "1", d={"a": {"b": 1}})
    A = A.with_action(GroupAction.trivial(G, A.space))
    Z = LInftyAlgebra(GradedVectorSpace((("z", 0),)), {})
    rep = hofixed_homotopy_groups(A, Z, GroupAction.trivial(G, Z.space))
    assert rep.route == "homology of invariants"
    assert rep.dims == {0: 1}


def test_ground_field():
    Q = ground_field_cdga(FiniteGroup.symmetric(2))
    assert Q.labels == ("1",) and Q.action is not None
