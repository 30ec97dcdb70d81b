"""CDGAs, tensor models ``A (x) L`` and invariant dimension tables.

Degrees in a CDGA are cohomological. In ``A (x) L`` a cohomological degree
``p`` counts as homological ``-p``, so ``deg(a (x) xi) = deg(xi) - |a|``.

Tensor signs: for ``l_k`` on ``a_1 (x) xi_1, ..., a_k (x) xi_k`` the ``a``'s
are moved to the front past the ``xi``'s (Koszul) and ``l_k`` then passes the
product ``a_1...a_k``, contributing ``(-1)^((k-2) sum|a_i|)``. For k = 2 this
is ``[a (x) xi, b (x) zeta] = (-1)^(|xi||b|) ab (x) [xi, zeta]``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .equivariant import ActionError, FiniteGroup, FreeLieAction, GroupAction, invariant_complex
from .freelie import FreeGradedLie, LieAlgebraError, LieElement
from .linfty import LInftyAlgebra
from .qlinalg import (EchelonBasis, GradedVectorSpace, QMatrix, Vector, format_fraction,
                      homology_dims, iadd, kernel_image, rank, vadd, vec)

TENSOR = "⊗"


class CDGAError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class CDGA:
    """Finite CDGA on a labelled basis with cohomological degrees.

    ``products[(i, j)]`` and ``differential[i]`` are sparse vectors. Products
    involving the unit are implicit. ``action`` is an optional group action by
    CDGA automorphisms.
    """

    space: GradedVectorSpace
    unit: int
    products: dict
    differential: dict = field(default_factory=dict)
    action: GroupAction | None = None
    name: str = "A"

    @classmethod
    def from_table(cls, basis: Sequence[tuple[str, int]], unit: str,
                   mul: Mapping[tuple[str, str], Mapping[str, object]] = (),
                   d: Mapping[str, Mapping[str, object]] = (),
                   name: str = "A", check: bool = True) -> "CDGA":
        """Build from label tables; the opposite order of each product is filled
        in by graded commutativity."""
        space = GradedVectorSpace(tuple(basis))
        idx = space.index
        degs = space.degrees
        u = idx(unit)
        if degs[u] != 0:
            raise CDGAError("unit must have degree 0")
        prods: dict = {}
        problems = []
        for (a, b), out in dict(mul).items():
            i, j = idx(a), idx(b)
            v = vec({idx(c): q for c, q in out.items()})
            for key, val in (((i, j), v), ((j, i), {k: (-1 if degs[i] * degs[j] % 2 else 1) * c for k, c in v.items()})):
                if key in prods and prods[key] != val:
                    problems.append(f"inconsistent products for ({space.labels[key[0]]}, {space.labels[key[1]]})")
                prods[key] = val
        for i in range(len(space)):
            for key in ((u, i), (i, u)):
                if key in prods and prods[key] != {i: Fraction(1)}:
                    problems.append(f"unit product with {space.labels[i]} is not the identity")
                prods[key] = {i: Fraction(1)}
        diff = {idx(a): vec({idx(c): q for c, q in out.items()}) for a, out in dict(d).items()}
        A = cls(space, u, {k: v for k, v in prods.items() if v},
                {k: v for k, v in diff.items() if v}, None, name)
        if check:
            problems += A.problems()
        if problems:
            raise CDGAError("; ".join(problems))
        return A

    def __len__(self) -> int:
        return len(self.space)

    @property
    def labels(self) -> tuple[str, ...]:
        return self.space.labels

    @property
    def degrees(self) -> tuple[int, ...]:
        return self.space.degrees

    def index(self, label: str) -> int:
        return self.space.index(label)

    def has_zero_differential(self) -> bool:
        return not self.differential

    def with_action(self, action: GroupAction) -> "CDGA":
        A = CDGA(self.space, self.unit, self.products, self.differential, action, self.name)
        problems = action_problems(action, A)
        if problems:
            raise ActionError("; ".join(problems))
        return A

    def mul(self, u: Vector, v: Vector) -> Vector:
        out: Vector = {}
        for (i, a), (j, b) in itertools.product(u.items(), v.items()):
            p = self.products.get((i, j))
            if p:
                iadd(out, p, a * b)
        return out

    def d(self, v: Vector) -> Vector:
        out: Vector = {}
        for i, a in v.items():
            dv = self.differential.get(i)
            if dv:
                iadd(out, dv, a)
        return out

    def basis_vector(self, label: str) -> Vector:
        return {self.index(label): Fraction(1)}

    def problems(self) -> list[str]:
        """Degree, associativity, Leibniz and d^2 = 0 checks on basis elements."""
        out = []
        degs, labels = self.degrees, self.labels
        n = len(self)
        for (i, j), v in self.products.items():
            if any(degs[k] != degs[i] + degs[j] for k in v):
                out.append(f"{labels[i]}*{labels[j]} has the wrong degree")
        for i, v in self.differential.items():
            if any(degs[k] != degs[i] + 1 for k in v):
                out.append(f"d({labels[i]}) has the wrong degree")
        for i in range(n):
            if self.d(self.d({i: Fraction(1)})):
                out.append(f"d^2({labels[i]}) != 0")
        for i, j, k in itertools.product(range(n), repeat=3):
            e = lambda t: {t: Fraction(1)}
            if self.mul(self.mul(e(i), e(j)), e(k)) != self.mul(e(i), self.mul(e(j), e(k))):
                out.append(f"associativity fails on ({labels[i]}, {labels[j]}, {labels[k]})")
        for i, j in itertools.product(range(n), repeat=2):
            a, b = {i: Fraction(1)}, {j: Fraction(1)}
            lhs = self.d(self.mul(a, b))
            rhs = vadd(self.mul(self.d(a), b), self.mul(a, self.d(b)), -1 if degs[i] % 2 else 1)
            if lhs != rhs:
                out.append(f"Leibniz fails on ({labels[i]}, {labels[j]})")
        return out


def action_problems(act: GroupAction, A: CDGA) -> list[str]:
    """Group elements that fail to act by CDGA automorphisms."""
    out = act.homomorphism_problems()
    n = len(A)
    for g, m in act.matrices.items():
        cols = m.columns()
        if m.apply({A.unit: Fraction(1)}) != {A.unit: Fraction(1)}:
            out.append(f"{g} does not fix the unit")
        for i, j in itertools.product(range(n), repeat=2):
            if m.apply(A.mul({i: Fraction(1)}, {j: Fraction(1)})) != A.mul(cols[i], cols[j]):
                out.append(f"{g} is not multiplicative on ({A.labels[i]}, {A.labels[j]})")
        for i in range(n):
            if m.apply(A.d({i: Fraction(1)})) != A.d(cols[i]):
                out.append(f"{g} does not commute with d on {A.labels[i]}")
    return out


def ground_field_cdga(group: FiniteGroup | None = None) -> CDGA:
    A = CDGA.from_table([("1", 0)], "1", name="Q")
    if group is not None:
        A = A.with_action(GroupAction.trivial(group, A.space))
    return A


def cohomology_sphere_cdga(n: int, group: FiniteGroup | None = None) -> CDGA:
    """``H^*(S^{n-1})`` on ``{1, x}`` with the antipodal action ``s1 . x = (-1)^n x``.

    For ``n >= 2`` the product is ``x^2 = 0``. For ``n = 1`` the sphere is two
    points, so ``x`` (the difference of the two point classes) satisfies
    ``x^2 = 1``.
    """
    if n < 1:
        raise CDGAError("n must be >= 1")
    mul = {("x", "x"): {"1": 1}} if n == 1 else {}
    A = CDGA.from_table([("1", 0), ("x", n - 1)], "1", mul, name=f"H*(S{n - 1})")
    group = group or FiniteGroup.symmetric(2)
    s = group.element("s1") if "s1" in group.generators else None
    if s is None or group.order != 2:
        raise ActionError("the antipodal action needs a group of order 2")
    sign = Fraction((-1) ** n)
    mats = {group.identity: QMatrix.identity(2), s: QMatrix(2, 2, {(0, 0): Fraction(1), (1, 1): sign})}
    return A.with_action(GroupAction(group, A.space, mats))


# tensor models

def _tensor_sign(a_degs: Sequence[int], xi_degs: Sequence[int]) -> int:
    k = len(a_degs)
    s = (k - 2) * sum(a_degs)
    for i in range(k):
        for j in range(i + 1, k):
            s += xi_degs[i] * a_degs[j]
    return -1 if s % 2 else 1


@dataclass(frozen=True, eq=False)
class TensorModel:
    """``A (x) L`` as an L-infinity algebra, with the diagonal action if both sides carry one."""

    A: CDGA
    L: LInftyAlgebra
    algebra: LInftyAlgebra
    pairs: tuple
    action: GroupAction | None = None

    def index(self, a: str, xi: str) -> int:
        return self.algebra.space.index(f"{a}{TENSOR}{xi}")


def tensor_space(A: CDGA, L_space: GradedVectorSpace) -> tuple[GradedVectorSpace, tuple]:
    pairs = tuple((a, j) for j in range(len(L_space)) for a in range(len(A)))
    space = GradedVectorSpace(tuple(
        (f"{A.labels[a]}{TENSOR}{L_space.labels[j]}", L_space.degrees[j] - A.degrees[a]) for a, j in pairs))
    return space, pairs


def tensor_matrices(A_act: GroupAction, L_act: GroupAction, pairs) -> dict:
    pos = {p: i for i, p in enumerate(pairs)}
    if set(A_act.group.elements) != set(L_act.group.elements):
        raise ActionError("A and L are acted on by different groups")
    mats = {}
    for g in A_act.group.elements:
        ma, ml = A_act.matrices[g], L_act.matrices[g]
        entries = {}
        for (ra, ca), x in ma.entries.items():
            for (rl, cl), y in ml.entries.items():
                entries[(pos[(ra, rl)], pos[(ca, cl)])] = x * y
        mats[g] = QMatrix(len(pairs), len(pairs), entries)
    return mats


def tensor_model(A: CDGA, L: LInftyAlgebra, l_action: GroupAction | None = None) -> TensorModel:
    """Materialize ``A (x) L`` with all brackets and the diagonal action."""
    space, pairs = tensor_space(A, L.space)
    pos = {p: i for i, p in enumerate(pairs)}
    adeg, ldeg = A.degrees, L.degrees
    brackets: dict = {}
    l1: dict = {}
    for a, j in pairs:
        out: Vector = {}
        for b, c in A.differential.get(a, {}).items():
            iadd(out, {pos[(b, j)]: c})
        for m, c in L.ell_basis((j,)).items():
            iadd(out, {pos[(a, m)]: -c if adeg[a] % 2 else c})
        if out:
            l1[(pos[(a, j)],)] = out
    if l1:
        brackets[1] = l1
    for k, tk in L.table.items():
        if k < 2:
            continue
        bk = {}
        for key, value in tk.items():
            for avec in itertools.product(range(len(A)), repeat=k):
                prod: Vector = {avec[0]: Fraction(1)}
                for a in avec[1:]:
                    prod = A.mul(prod, {a: Fraction(1)})
                    if not prod:
                        break
                if not prod:
                    continue
                s = _tensor_sign([adeg[a] for a in avec], [ldeg[j] for j in key])
                out = {}
                for b, x in prod.items():
                    for m, y in value.items():
                        out[pos[(b, m)]] = s * x * y
                bk[tuple(pos[(a, j)] for a, j in zip(avec, key))] = out
        if bk:
            brackets[k] = bk
    weights = tuple(L.weights[j] for _, j in pairs)
    alg = LInftyAlgebra(space, brackets, weights, L.nilpotency_cap, L.arity_cap)
    action = None
    if A.action is not None and l_action is not None:
        action = GroupAction(A.action.group, space, tensor_matrices(A.action, l_action, pairs))
    return TensorModel(A, L, alg, pairs, action)


# lazily evaluated A (x) L for a free Lie algebra L

@dataclass(frozen=True, eq=False)
class TensorElement:
    """``sum_a a (x) xi_a`` with ``xi_a`` in a free graded Lie algebra."""

    model: "TensorLie"
    parts: dict  # A basis index -> LieElement
    cut: bool = False  # some bracket left the weight cap

    def __post_init__(self):
        cut = self.cut or any(e.truncated for e in self.parts.values())
        object.__setattr__(self, "cut", cut)
        object.__setattr__(self, "parts", {a: e for a, e in self.parts.items() if e})

    def _combine(self, other: "TensorElement", s) -> "TensorElement":
        if other.model is not self.model:
            raise LieAlgebraError("elements of different tensor models")
        out = dict(self.parts)
        for a, e in other.parts.items():
            out[a] = out[a] + s * e if a in out else s * e
        return TensorElement(self.model, out, self.cut or other.cut)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return TensorElement(self.model, {a: -e for a, e in self.parts.items()}, self.cut)

    def __rmul__(self, scalar):
        return TensorElement(self.model, {a: scalar * e for a, e in self.parts.items()}, self.cut)

    def __eq__(self, other) -> bool:
        return isinstance(other, TensorElement) and other.model is self.model and other.parts == self.parts

    def __hash__(self):
        return hash(tuple(sorted((a, hash(e)) for a, e in self.parts.items())))

    def __bool__(self) -> bool:
        return bool(self.parts)

    @property
    def truncated(self) -> bool:
        return self.cut

    def degrees(self) -> set[int]:
        A = self.model.A
        return {d - A.degrees[a] for a, e in self.parts.items() for d in e.degrees()}

    def degree(self) -> int | None:
        ds = self.degrees()
        if not ds:
            return None
        if len(ds) > 1:
            raise LieAlgebraError(f"{self} is not homogeneous")
        return ds.pop()

    def component(self, a: str) -> LieElement:
        """Coefficient of the basis class ``a`` (pairing against its dual)."""
        return self.parts.get(self.model.A.index(a), self.model.L.zero())

    def bracket(self, other: "TensorElement") -> "TensorElement":
        return self.model.bracket(self, other)

    def format(self, pretty: bool = False) -> str:
        return self.model.format(self, pretty)

    def __str__(self):
        return self.format()

    __repr__ = __str__


@dataclass(frozen=True, eq=False)
class TensorLie:
    """``A (x) L`` for a CDGA ``A`` with zero differential and a free ``L``, evaluated lazily."""

    A: CDGA
    L: FreeGradedLie
    l_action: FreeLieAction | None = None

    def __post_init__(self):
        if not self.A.has_zero_differential():
            raise CDGAError("TensorLie needs a CDGA with zero differential")

    def zero(self) -> TensorElement:
        return TensorElement(self, {})

    def pure(self, a: str, xi: LieElement) -> TensorElement:
        if xi.owner != self.L:
            raise LieAlgebraError("tensor factor is not in this Lie algebra")
        return TensorElement(self, {self.A.index(a): xi})

    def bracket(self, e: TensorElement, f: TensorElement) -> TensorElement:
        A, L = self.A, self.L
        out: dict = {}
        cut = e.cut or f.cut
        for a, xi in e.parts.items():
            halves = _split_parity(xi)
            for b, zeta in f.parts.items():
                prod = A.mul({a: Fraction(1)}, {b: Fraction(1)})
                if not prod:
                    continue
                for parity, part in halves.items():
                    s = -1 if parity * A.degrees[b] % 2 else 1
                    br = L.bracket(part, zeta)
                    cut = cut or br.truncated
                    if not br:
                        continue
                    for c, x in prod.items():
                        term = (s * x) * br
                        out[c] = out[c] + term if c in out else term
        return TensorElement(self, out, cut)

    def act(self, g: str, e: TensorElement) -> TensorElement:
        if self.A.action is None or self.l_action is None:
            raise ActionError("tensor model has no group action")
        m = self.A.action.matrices[self.A.action.group.element(g)]
        out: dict = {}
        for a, xi in e.parts.items():
            gxi = self.l_action.act(g, xi)
            for b, c in m.apply({a: Fraction(1)}).items():
                out[b] = out[b] + c * gxi if b in out else c * gxi
        return TensorElement(self, out, e.cut)

    def is_invariant(self, e: TensorElement) -> bool:
        G = self.A.action.group
        return all(self.act(g, e) == e for g in G.elements)

    def parse(self, text: str, line: int = 1, column: int = 1) -> TensorElement:
        """Parse ``"x@[u1,u2] + 1@(v1+v2)"``."""
        from .syntax import ParseError, evaluate, parse_expression
        node = parse_expression(text, line, column)

        def name(n, col):
            raise ParseError(f"bare Lie element {n!r}; write a@xi", line, col)

        def tensor(a, sub):
            if a not in self.A.labels:
                raise ParseError(f"unknown CDGA basis element {a!r}", line, column)
            return self.pure(a, sub)

        def lie(n, col):
            if n not in self.L.names:
                raise ParseError(f"unknown generator {n!r}", line, col)
            return self.L.gen(n)

        def fold(node):
            kind = node[0]
            if kind == "tensor":
                return tensor(node[1], evaluate(node[2], name=lie, bracket=self.L.bracket, zero=self.L.zero))
            if kind == "sum":
                acc = self.zero()
                for coef, sub in node[1]:
                    acc = acc + coef * fold(sub)
                return acc
            if kind == "bracket":
                return self.bracket(fold(node[1]), fold(node[2]))
            if kind == "name":
                return name(node[1], node[2])
            raise ParseError("bare scalar not allowed here", line, column)

        return fold(node)

    def format(self, e: TensorElement, pretty: bool = False) -> str:
        """Components by descending A-degree, e.g. ``x⊗[u1,u2] + 1⊗(v1+v2)``."""
        if not e:
            return "0"
        A = self.A
        order = sorted(e.parts, key=lambda a: (-A.degrees[a], a))
        pieces = []
        for a in order:
            xi = e.parts[a]
            lab = A.labels[a]
            if len(xi.terms) == 1:
                (t, c), = xi.terms.items()
                body = self.L.format_tree(t)
                if abs(c) != 1:
                    body = f"{format_fraction(abs(c))}*{body}"
                pieces.append(("-" if c < 0 else "+", f"{lab}{TENSOR}{body}"))
            else:
                inner = compact(str(xi))
                pieces.append(("+", f"{lab}{TENSOR}({inner})"))
        s = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
        for sign, body in pieces[1:]:
            s += f" {sign} {body}"
        return subscript(s) if pretty else s


def _split_parity(xi: LieElement) -> dict[int, LieElement]:
    L = xi.owner
    out: dict = {}
    for t, c in xi.terms.items():
        out.setdefault(L.degree_of(t) % 2, {})[t] = c
    return {p: LieElement(L, terms, xi.truncated) for p, terms in out.items()}


def compact(s: str) -> str:
    """Drop spaces around binary +/- : ``v1 + v2`` -> ``v1+v2``."""
    return s.replace(" + ", "+").replace(" - ", "-")


_SUB = str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉")


def subscript(s: str) -> str:
    """Render digits that end a generator name as subscripts (``u1`` -> ``u₁``)."""
    out = []
    for i, ch in enumerate(s):
        if ch.isdigit() and i > 0 and (s[i - 1].isalpha() or (s[i - 1] in "₀₁₂₃₄₅₆₇₈₉" and _after_name(s, i))):
            out.append(ch.translate(_SUB))
        else:
            out.append(ch)
    return "".join(out)


def _after_name(s: str, i: int) -> bool:
    j = i - 1
    while j >= 0 and s[j].isdigit():
        j -= 1
    return j >= 0 and s[j].isalpha()


# invariant dimension tables

@dataclass
class HofixedReport:
    """Degree -> dim of ``(A (x) L)^G`` (or of its homology when differentials are present)."""

    dims: dict
    route: str
    complete: bool
    bases: dict = field(default_factory=dict)
    note: str = ""

    @property
    def pi(self) -> dict:
        return {d + 1: n for d, n in self.dims.items()}


def _l_side(L, l_action):
    if isinstance(L, FreeGradedLie):
        if not isinstance(l_action, FreeLieAction):
            raise ActionError("a free Lie algebra needs a FreeLieAction")
        act = l_action.basis_action()
        return act.space, act, None
    if isinstance(l_action, FreeLieAction):
        l_action = l_action.on_linfty(L)
    return L.space, l_action, L


def hofixed_homotopy_groups(A: CDGA, L, l_action, degrees: tuple[int, int] | None = None) -> HofixedReport:
    """Invariant dimensions of ``A (x) L`` per degree, the closed formula for ``pi_*`` of the
    homotopy fixed points when both differentials vanish.

    ``L`` is a :class:`FreeGradedLie` (with a :class:`FreeLieAction`) or an
    :class:`LInftyAlgebra` (with a :class:`GroupAction`). With a nonzero
    differential the homology of the invariant subcomplex is returned instead.
    """
    if A.action is None:
        raise ActionError("CDGA carries no group action")
    space, l_act, linf = _l_side(L, l_action)
    lo, hi = degrees if degrees is not None else (None, None)
    zero_d = A.has_zero_differential() and (linf is None or not linf.table.get(1))
    max_a = max(A.degrees)
    if isinstance(L, FreeGradedLie):
        complete = hi is None or L.is_complete_through(hi + max_a)
    else:
        complete = True
    note = "" if complete else f"weight cap {L.weight_cap} does not reach degree {hi}; dims are lower bounds"

    def in_range(d):
        return (lo is None or d >= lo) and (hi is None or d <= hi)

    if zero_d:
        tspace, pairs = tensor_space(A, space)
        mats = tensor_matrices(A.action, l_act, pairs)
        G = A.action.group
        dims, bases = {}, {}
        by_deg: dict = {}
        for i, d in enumerate(tspace.degrees):
            if in_range(d):
                by_deg.setdefault(d, []).append(i)
        for d in sorted(by_deg):
            idx = by_deg[d]
            P = QMatrix.zeros(len(idx), len(idx))
            for g in G.elements:
                P = P + mats[g].submatrix(idx, idx)
            _, image = kernel_image(P)
            if image:
                dims[d] = len(image)
                labels = [tspace.labels[i] for i in idx]
                bases[d] = [format_tensor_vector(v, labels) for v in image]
        return HofixedReport(dims, "invariants", complete, bases, note)

    if linf is None:
        raise CDGAError("a nonzero CDGA differential needs L as an LInftyAlgebra")
    tm = tensor_model(A, linf, l_act)
    h = homology_dims(invariant_complex(tm.action, tm.algebra.chain_complex()))
    dims = {d: n for d, n in h.items() if in_range(d)}
    return HofixedReport(dims, "homology of invariants", complete, {},
                         (note + "; " if note else "") + "nonzero differential: homology of the invariant subcomplex")


def format_tensor_vector(v: Vector, labels: Sequence[str]) -> str:
    """Group a vector over ``a⊗xi`` labels by ``a``: ``x⊗[u1,u2] + 1⊗(v1+v2)``."""
    groups: dict = {}
    for i in sorted(v):
        a, xi = labels[i].split(TENSOR, 1)
        groups.setdefault(a, []).append((xi, v[i]))
    parts = []
    for a, terms in groups.items():
        if len(terms) == 1 and abs(terms[0][1]) == 1:
            parts.append(("-" if terms[0][1] < 0 else "+", f"{a}{TENSOR}{terms[0][0]}"))
            continue
        inner = ""
        for k, (xi, c) in enumerate(terms):
            mag = "" if abs(c) == 1 else f"{format_fraction(abs(c))}*"
            sign = "-" if c < 0 else ("+" if k else "")
            inner += f"{sign}{mag}{xi}"
        parts.append(("+", f"{a}{TENSOR}({inner})"))
    s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        s += f" {sign} {body}"
    return s
