"""Finite group actions on graded spaces and L-infinity algebras.

Groups are given extensionally by an element list and a multiplication
table. Actions are degree-0 rational matrices, one per group element. The
Reynolds operator ``P = (1/|G|) sum_g g`` projects onto invariants.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .freelie import FreeGradedLie, LieElement, extend_morphism
from .linfty import LInftyAlgebra
from .qlinalg import (ChainComplex, EchelonBasis, GradedVectorSpace, QMatrix, Vector,
                      format_vector, homology_dims, homology_representatives, iadd,
                      kernel_image, rank, solve, vadd)


class ActionError(ValueError):
    pass


@dataclass(frozen=True)
class FiniteGroup:
    name: str
    elements: tuple
    table: dict = field(hash=False)
    generators: dict = field(default_factory=dict, hash=False)

    def __post_init__(self):
        els = self.elements
        for a in els:
            for b in els:
                if self.table.get((a, b)) not in els:
                    raise ActionError(f"multiplication table incomplete at ({a}, {b})")
        ids = [e for e in els if all(self.table[(e, g)] == g == self.table[(g, e)] for g in els)]
        if len(ids) != 1:
            raise ActionError("group has no unique identity")
        for a, b, c in itertools.product(els, repeat=3):
            if self.table[(self.table[(a, b)], c)] != self.table[(a, self.table[(b, c)])]:
                raise ActionError("multiplication is not associative")
        object.__setattr__(self, "_identity", ids[0])
        for g in els:
            if not any(self.table[(g, h)] == ids[0] for h in els):
                raise ActionError(f"{g} has no inverse")

    @property
    def identity(self) -> str:
        return self.__dict__["_identity"]

    @property
    def order(self) -> int:
        return len(self.elements)

    def mul(self, a: str, b: str) -> str:
        return self.table[(a, b)]

    def inverse(self, g: str) -> str:
        return next(h for h in self.elements if self.table[(g, h)] == self.identity)

    def element(self, name: str) -> str:
        """Element by label or generator alias."""
        if name in self.generators:
            return self.generators[name]
        if name in self.elements:
            return name
        raise ActionError(f"{name!r} is not an element of {self.name}")

    @classmethod
    def symmetric(cls, r: int, name: str | None = None) -> "FiniteGroup":
        """Sigma_r on one-line permutation labels; ``s1..s{r-1}`` alias adjacent swaps."""
        perms = list(itertools.permutations(range(1, r + 1)))
        label = {p: "".join(map(str, p)) for p in perms}
        table = {}
        for p, q in itertools.product(perms, repeat=2):
            # (p*q)(i) = p(q(i))
            table[(label[p], label[q])] = label[tuple(p[q[i] - 1] for i in range(r))]
        gens = {}
        for i in range(1, r):
            s = list(range(1, r + 1))
            s[i - 1], s[i] = s[i], s[i - 1]
            gens[f"s{i}"] = label[tuple(s)]
        return cls(name or f"S{r}", tuple(label[p] for p in perms), table, gens)

    @classmethod
    def cyclic(cls, r: int, name: str | None = None) -> "FiniteGroup":
        els = tuple(f"g{i}" for i in range(r))
        table = {(f"g{i}", f"g{j}"): f"g{(i + j) % r}" for i in range(r) for j in range(r)}
        return cls(name or f"C{r}", els, table, {"g": "g1"} if r > 1 else {})

    def words(self, gens: Sequence[str]) -> dict[str, tuple[str, ...]]:
        """Shortest word in ``gens`` for every element reachable from the identity."""
        out = {self.identity: ()}
        queue = deque([self.identity])
        while queue:
            g = queue.popleft()
            for s in gens:
                h = self.mul(g, s)
                if h not in out:
                    out[h] = out[g] + (s,)
                    queue.append(h)
        return out


@dataclass(frozen=True, eq=False)
class GroupAction:
    """Linear action of ``group`` on ``space``: one degree-0 matrix per element."""

    group: FiniteGroup
    space: GradedVectorSpace
    matrices: dict

    def __post_init__(self):
        n = len(self.space)
        for g in self.group.elements:
            m = self.matrices.get(g)
            if m is None:
                raise ActionError(f"no matrix for group element {g}")
            if (m.rows, m.cols) != (n, n):
                raise ActionError(f"matrix for {g} has wrong shape")
            degs = self.space.degrees
            for (r, c) in m.entries:
                if degs[r] != degs[c]:
                    raise ActionError(f"{g} does not preserve degree")

    @classmethod
    def from_generators(cls, group: FiniteGroup, space: GradedVectorSpace,
                        gen_matrices: Mapping[str, QMatrix]) -> "GroupAction":
        """Extend matrices given on generating elements through the group's words."""
        gens = {group.element(s): m for s, m in gen_matrices.items()}
        words = group.words(list(gens))
        if len(words) != group.order:
            raise ActionError("given elements do not generate the group")
        n = len(space)
        mats = {}
        for g, w in words.items():
            m = QMatrix.identity(n)
            for s in w:
                m = m @ gens[s]
            mats[g] = m
        act = cls(group, space, mats)
        problems = act.homomorphism_problems()
        if problems:
            raise ActionError("; ".join(problems))
        return act

    @classmethod
    def trivial(cls, group: FiniteGroup, space: GradedVectorSpace) -> "GroupAction":
        return cls(group, space, {g: QMatrix.identity(len(space)) for g in group.elements})

    def homomorphism_problems(self) -> list[str]:
        out = []
        G = self.group
        if self.matrices[G.identity] != QMatrix.identity(len(self.space)):
            out.append("identity does not act as the identity")
        for a, b in itertools.product(G.elements, repeat=2):
            if self.matrices[a] @ self.matrices[b] != self.matrices[G.mul(a, b)]:
                out.append(f"rho({a}) rho({b}) != rho({G.mul(a, b)})")
        return out

    def act(self, g: str, v: Vector) -> Vector:
        return self.matrices[self.group.element(g)].apply(v)

    def reynolds(self) -> QMatrix:
        total = QMatrix.zeros(len(self.space), len(self.space))
        for m in self.matrices.values():
            total = total + m
        return total.scaled(Fraction(1, self.group.order))


# free Lie algebras

@dataclass(frozen=True, eq=False)
class FreeLieAction:
    """Action on a free Lie algebra given by generator images, extended by brackets."""

    group: FiniteGroup
    algebra: FreeGradedLie
    morphisms: dict  # element -> LieMorphism

    def act(self, g: str, e: LieElement) -> LieElement:
        return self.morphisms[self.group.element(g)].apply(e)

    def basis_action(self) -> GroupAction:
        """Matrices on the canonical basis of the (truncated) algebra."""
        L = self.algebra
        basis = L.basis()
        index = {t: i for i, t in enumerate(basis)}
        space = GradedVectorSpace(tuple((L.format_tree(t), L.degree_of(t)) for t in basis))
        mats = {}
        for g, m in self.morphisms.items():
            entries = {}
            for j, t in enumerate(basis):
                for s, c in m.image_of_tree(t).terms.items():
                    entries[(index[s], j)] = c
            mats[g] = QMatrix(len(basis), len(basis), entries)
        return GroupAction(self.group, space, mats)

    def on_linfty(self, A: LInftyAlgebra) -> GroupAction:
        """Matrices on the basis of ``LInftyAlgebra.from_free_lie(algebra)``."""
        src = A.free_source()
        if src is None or src[0] != self.algebra:
            raise ActionError("algebra was not built from this free Lie algebra")
        act = self.basis_action()
        return GroupAction(self.group, A.space, act.matrices)


def free_lie_action(group: FiniteGroup, L: FreeGradedLie,
                    gen_images: Mapping[str, Mapping[str, LieElement]]) -> FreeLieAction:
    """Action on ``L`` from linear generator images for some group generators.

    ``gen_images[s][name]`` is the image of generator ``name`` under group
    element ``s``; unspecified generators are fixed.
    """
    base = {}
    for s, imgs in gen_images.items():
        g = group.element(s)
        full = {n: imgs.get(n, L.gen(n)) for n in L.names}
        bad = [n for n, e in full.items() if e.weight() > 1]
        if bad:
            raise ActionError(f"images of {bad} are not linear in the generators")
        base[g] = full
    words = group.words(list(base))
    if len(words) != group.order:
        raise ActionError("given elements do not generate the group")
    morphisms = {}
    for g, w in words.items():
        imgs = {n: L.gen(n) for n in L.names}
        for s in reversed(w):
            m = extend_morphism(L, L, base[s])
            imgs = {n: m.apply(e) for n, e in imgs.items()}
        morphisms[g] = extend_morphism(L, L, imgs)
    act = FreeLieAction(group, L, morphisms)
    # homomorphism check on generators
    for a, b in itertools.product(group.elements, repeat=2):
        ab = group.mul(a, b)
        for x in L.gens():
            if act.act(a, act.act(b, x)) != act.act(ab, x):
                raise ActionError(f"generator images do not define an action ({a}, {b})")
    return act


def swap_action(product: FreeGradedLie, base_names: Sequence[str], tags: Sequence[str],
                group: FiniteGroup | None = None) -> FreeLieAction:
    """Sigma_r permuting the tagged copies of a free product ``L * ... * L``."""
    r = len(tags)
    group = group or FiniteGroup.symmetric(r)
    gen_images = {}
    for i in range(1, r):
        s = f"s{i}"
        imgs = {}
        for n in base_names:
            a, b = f"{n}{tags[i - 1]}", f"{n}{tags[i]}"
            imgs[a] = product.gen(b)
            imgs[b] = product.gen(a)
        gen_images[s] = imgs
    return free_lie_action(group, product, gen_images)


# equivariance and invariants

@dataclass
class EquivarianceReport:
    problems: list = field(default_factory=list)
    checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.problems


def check_equivariance(act: GroupAction, L: LInftyAlgebra, max_problems: int | None = None) -> EquivarianceReport:
    """g . l_k(x_1..x_k) == l_k(g x_1, ..., g x_k) on all sorted basis tuples."""
    rep = EquivarianceReport()
    if act.space.basis != L.space.basis:
        rep.problems.append("action and algebra have different bases")
        return rep
    rep.problems.extend(act.homomorphism_problems())
    cap, wts = L.nilpotency_cap, L.weights
    cols = {g: m.columns() for g, m in act.matrices.items()}
    for k in sorted(L.table):
        for xs in itertools.combinations_with_replacement(range(len(L)), k):
            if cap is not None and sum(wts[i] for i in xs) > cap:
                continue
            base = L.ell_basis(xs)
            for g in act.group.elements:
                if g == act.group.identity:
                    continue
                rep.checked += 1
                lhs = act.matrices[g].apply(base)
                rhs = L.ell(*[cols[g][i] for i in xs])
                diff = vadd(lhs, rhs, -1)
                if diff:
                    rep.problems.append(
                        f"{g}: l_{k}({', '.join(L.labels[i] for i in xs)}) off by {L.format(diff)}")
                    if max_problems is not None and len(rep.problems) >= max_problems:
                        return rep
    return rep


def invariant_subspace(act: GroupAction) -> list[Vector]:
    """Echelon basis of the image of the Reynolds projector (homogeneous vectors)."""
    _, image = kernel_image(act.reynolds())
    return image


def invariant_dims(act: GroupAction) -> dict[int, int]:
    degs = act.space.degrees
    out: dict[int, int] = {}
    for v in invariant_subspace(act):
        d = degs[min(v)]
        out[d] = out.get(d, 0) + 1
    return dict(sorted(out.items()))


@dataclass(frozen=True, eq=False)
class InvariantSubalgebra:
    algebra: LInftyAlgebra
    inclusion: list  # basis vectors of the ambient algebra


def invariant_subalgebra(act: GroupAction, L: LInftyAlgebra) -> InvariantSubalgebra:
    """``L^G`` as an L-infinity algebra on the echelon basis of invariants."""
    vecs = invariant_subspace(act)
    ech = EchelonBasis()
    pivots = []
    for v in vecs:
        ech.add(v)
        pivots.append(min(v))
    pos = {p: i for i, p in enumerate(pivots)}
    degs, wts = L.degrees, L.weights
    labels = []
    for v in vecs:
        lab = format_vector(v, L.labels)
        labels.append(lab if len(v) == 1 or lab.startswith("(") else f"({lab})")
    space = GradedVectorSpace(tuple((lab, degs[min(v)]) for lab, v in zip(labels, vecs)))
    weights = tuple(min(wts[i] for i in v) for v in vecs)

    def coords(w: Vector) -> Vector:
        c = ech.coordinates(w)
        return {pos[p]: x for p, x in c.items()}

    brackets: dict = {}
    cap = L.nilpotency_cap
    for k in sorted(L.table):
        tk = {}
        for xs in itertools.combinations_with_replacement(range(len(vecs)), k):
            if cap is not None and sum(weights[i] for i in xs) > cap:
                continue
            out = L.ell(*[vecs[i] for i in xs])
            if out:
                tk[xs] = coords(out)
        if tk:
            brackets[k] = tk
    sub = LInftyAlgebra(space, brackets, weights, L.nilpotency_cap, L.arity_cap)
    return InvariantSubalgebra(sub, vecs)


def invariants(act: GroupAction, obj=None):
    """Invariants of ``act``: a vector basis, or a sub-L-infinity algebra when given one."""
    if obj is None or isinstance(obj, GradedVectorSpace):
        return invariant_subspace(act)
    if isinstance(obj, LInftyAlgebra):
        return invariant_subalgebra(act, obj)
    raise TypeError(f"cannot take invariants of {type(obj).__name__}")


# homology

def is_chain_map(act: GroupAction, c: ChainComplex) -> list[str]:
    d = c.differential
    return [f"{g} does not commute with d" for g, m in act.matrices.items() if d @ m != m @ d]


def homology_action_matrix(act: GroupAction, c: ChainComplex, degree: int, g: str) -> QMatrix:
    """Matrix of g on H_degree in the basis of :func:`homology_representatives`."""
    reps = homology_representatives(c, degree)
    up = c.space.indices_in_degree(degree + 1)
    bounds = [c.differential.apply({i: Fraction(1)}) for i in up]
    cols = reps + [b for b in bounds if b]
    n = len(c.space)
    M = QMatrix.from_columns(cols, n)
    entries = {}
    for j, z in enumerate(reps):
        x = solve(M, act.act(g, z))
        if x is None:
            raise ActionError("group element does not preserve cycles")
        for i, coef in x.items():
            if i < len(reps):
                entries[(i, j)] = coef
    return QMatrix(len(reps), len(reps), entries)


def homology_invariant_dims(act: GroupAction, c: ChainComplex) -> dict[int, int]:
    """dim (H_k(C))^G for every degree with nonzero homology."""
    out = {}
    for d in c.degrees():
        reps = homology_representatives(c, d)
        if not reps:
            continue
        P = QMatrix.zeros(len(reps), len(reps))
        for g in act.group.elements:
            P = P + homology_action_matrix(act, c, d, g)
        r = rank(P)
        if r:
            out[d] = r
    return out


def invariant_complex(act: GroupAction, c: ChainComplex) -> ChainComplex:
    vecs = invariant_subspace(act)
    ech = EchelonBasis()
    pivots = []
    for v in vecs:
        ech.add(v)
        pivots.append(min(v))
    pos = {p: i for i, p in enumerate(pivots)}
    degs = c.space.degrees
    space = GradedVectorSpace(tuple((f"v{i}", degs[min(v)]) for i, v in enumerate(vecs)))
    entries = {}
    for j, v in enumerate(vecs):
        for p, x in ech.coordinates(c.differential.apply(v)).items():
            entries[(pos[p], j)] = x
    return ChainComplex(space, QMatrix(len(vecs), len(vecs), entries))


@dataclass
class HomologyComparison:
    invariants_then_homology: dict
    homology_then_invariants: dict

    @property
    def ok(self) -> bool:
        return self.invariants_then_homology == self.homology_then_invariants


def invariants_commute_with_homology(act: GroupAction, c: ChainComplex) -> HomologyComparison:
    """Compare dim H_*(C^G) with dim H_*(C)^G degree by degree."""
    if act.space.basis != c.space.basis:
        raise ActionError("action and complex have different bases")
    problems = is_chain_map(act, c)
    if problems:
        raise ActionError("differential is not equivariant: " + "; ".join(problems))
    lhs = homology_dims(invariant_complex(act, c))
    rhs = homology_invariant_dims(act, c)
    return HomologyComparison(lhs, rhs)
