"""Polynomial forms on standard simplices and Maurer-Cartan simplices of abelian algebras.

Forms on the n-simplex are written in affine coordinates ``t1..tn`` (``t0 =
1 - sum t_i`` is eliminated). A monomial ``t^e dt_S`` has weight ``|e| + |S|``;
the de Rham differential preserves weight, and the truncation keeps weights
``<= cap``. As a quotient this is a CDGA with cohomology ``Q`` in degree 0.
Face and degeneracy pullbacks never raise polynomial degree, so they act on the
truncated pieces as chain maps (multiplicative whenever the product stays
below the cap).

For abelian ``L`` the Maurer-Cartan condition on ``L (x) Omega_n`` is linear,
so ``MC_*(L)`` is a simplicial vector space and its homotopy groups are the
homology of the normalized (Moore) complex.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from .linfty import LInftyAlgebra
from .mapmodel import CDGA, tensor_model
from .qlinalg import EchelonBasis, QMatrix, Vector, iadd, kernel_image, rank

MAX_SIMPLEX_DIM = 2

Mono = tuple  # (exponents tuple, sorted tuple of dt indices 1..n)
Form = dict   # Mono -> Fraction


class OracleError(ValueError):
    pass


def _merge_sign(a: tuple, b: tuple) -> tuple[tuple, int] | None:
    if set(a) & set(b):
        return None
    sign = 1
    for x in a:
        for y in b:
            if x > y:
                sign = -sign
    return tuple(sorted(a + b)), sign


def form_mul(f: Form, g: Form) -> Form:
    out: Form = {}
    for (ea, sa), ca in f.items():
        for (eb, sb), cb in g.items():
            m = _merge_sign(sa, sb)
            if m is None:
                continue
            s, sign = m
            key = (tuple(x + y for x, y in zip(ea, eb)), s)
            out[key] = out.get(key, 0) + sign * ca * cb
    return {k: v for k, v in out.items() if v}


def form_d(f: Form) -> Form:
    out: Form = {}
    for (e, s), c in f.items():
        for i, k in enumerate(e):
            var = i + 1
            if k == 0 or var in s:
                continue
            sign = -1 if sum(1 for x in s if x < var) % 2 else 1
            e2 = e[:i] + (k - 1,) + e[i + 1:]
            key = (e2, tuple(sorted(s + (var,))))
            out[key] = out.get(key, 0) + sign * k * c
    return {k: v for k, v in out.items() if v}


def weight(m: Mono) -> int:
    return sum(m[0]) + len(m[1])


def _affine(n: int, const, coeffs: dict) -> Form:
    """Form for ``const + sum coeffs[j] * t_j`` on an n-simplex."""
    zero = (0,) * n
    f: Form = {}
    if const:
        f[(zero, ())] = Fraction(const)
    for j, c in coeffs.items():
        e = tuple(1 if k == j - 1 else 0 for k in range(n))
        f[(e, ())] = f.get((e, ()), 0) + Fraction(c)
    return {k: v for k, v in f.items() if v}


def pullback(f: Form, substitution: list[Form], target_dim: int) -> Form:
    """Substitute ``t_i -> substitution[i-1]`` (0-forms on the target simplex)."""
    one = {((0,) * target_dim, ()): Fraction(1)}
    dsub = [form_d(s) for s in substitution]
    out: Form = {}
    for (e, s), c in f.items():
        term = dict(one)
        for i, k in enumerate(e):
            for _ in range(k):
                term = form_mul(term, substitution[i])
        for j in s:
            term = form_mul(term, dsub[j - 1])
        for key, v in term.items():
            out[key] = out.get(key, 0) + c * v
    return {k: v for k, v in out.items() if v}


def face_substitution(n: int, i: int) -> list[Form]:
    """Pullback along the i-th coface Delta^{n-1} -> Delta^n."""
    m = n - 1
    sub = []
    for j in range(1, n + 1):
        if i == 0:
            sub.append(_affine(m, 1, {k: -1 for k in range(1, m + 1)}) if j == 1 else _affine(m, 0, {j - 1: 1}))
        elif j < i:
            sub.append(_affine(m, 0, {j: 1}))
        elif j == i:
            sub.append({})
        else:
            sub.append(_affine(m, 0, {j - 1: 1}))
    return sub


def degeneracy_substitution(n: int, i: int) -> list[Form]:
    """Pullback along the i-th codegeneracy Delta^{n+1} -> Delta^n."""
    m = n + 1
    sub = []
    for j in range(1, n + 1):
        if i == 0 or j > i:
            sub.append(_affine(m, 0, {j + 1: 1}))
        elif j < i:
            sub.append(_affine(m, 0, {j: 1}))
        else:
            sub.append(_affine(m, 0, {j: 1, j + 1: 1}))
    return sub


def _label(m: Mono) -> str:
    e, s = m
    parts = []
    for i, k in enumerate(e):
        if k == 1:
            parts.append(f"t{i + 1}")
        elif k > 1:
            parts.append(f"t{i + 1}^{k}")
    parts += [f"dt{j}" for j in s]
    return "*".join(parts) or "1"


@dataclass(frozen=True, eq=False)
class PolyForms:
    """Forms of weight ``<= cap`` on the n-simplex."""

    n: int
    cap: int
    basis: tuple = field(init=False)

    def __post_init__(self):
        if self.n < 0 or self.n > MAX_SIMPLEX_DIM:
            raise OracleError(f"simplex dimension {self.n} outside the supported range 0..{MAX_SIMPLEX_DIM}")
        if self.cap < 1:
            raise OracleError("cap must be >= 1")
        monos = []
        for s_len in range(self.n + 1):
            for s in itertools.combinations(range(1, self.n + 1), s_len):
                for total in range(0, self.cap - s_len + 1):
                    for e in _compositions(total, self.n):
                        monos.append((e, s))
        monos.sort(key=lambda m: (len(m[1]), weight(m), tuple(-x for x in m[0]), m[1]))
        object.__setattr__(self, "basis", tuple(monos))

    @cached_property
    def index(self) -> dict:
        return {m: i for i, m in enumerate(self.basis)}

    def __len__(self) -> int:
        return len(self.basis)

    def vector(self, f: Form) -> Vector:
        out = {}
        for m, c in f.items():
            if weight(m) > self.cap:
                raise OracleError(f"form {_label(m)} exceeds the weight cap")
            out[self.index[m]] = Fraction(c)
        return out

    def form(self, v: Vector) -> Form:
        return {self.basis[i]: c for i, c in v.items()}

    @cached_property
    def cdga(self) -> CDGA:
        """The truncation as a CDGA (products above the cap are dropped)."""
        prods, diff = {}, {}
        labels = [_label(m) for m in self.basis]
        for i, a in enumerate(self.basis):
            for j in range(i, len(self.basis)):
                p = form_mul({a: Fraction(1)}, {self.basis[j]: Fraction(1)})
                p = {labels[self.index[m]]: c for m, c in p.items() if weight(m) <= self.cap}
                if p:
                    prods[(labels[i], labels[j])] = p
            dv = form_d({a: Fraction(1)})
            if dv:
                diff[labels[i]] = {labels[self.index[m]]: c for m, c in dv.items()}
        return CDGA.from_table([(l, len(m[1])) for l, m in zip(labels, self.basis)], "1",
                               prods, diff, name=f"Omega_{self.n}", check=False)

    def _map(self, substitution, target: "PolyForms") -> QMatrix:
        entries = {}
        for j, m in enumerate(self.basis):
            img = pullback({m: Fraction(1)}, substitution, target.n)
            for k, c in target.vector(img).items():
                entries[(k, j)] = c
        return QMatrix(len(target), len(self), entries)

    def face(self, i: int) -> QMatrix:
        """d_i : Omega_n -> Omega_{n-1} on the truncations."""
        if not 0 <= i <= self.n or self.n == 0:
            raise OracleError(f"no face d_{i} on the {self.n}-simplex")
        return self._map(face_substitution(self.n, i), PolyForms(self.n - 1, self.cap))

    def degeneracy(self, i: int) -> QMatrix:
        """s_i : Omega_n -> Omega_{n+1}; only defined while n + 1 is supported."""
        if not 0 <= i <= self.n:
            raise OracleError(f"no degeneracy s_{i} on the {self.n}-simplex")
        return self._map(degeneracy_substitution(self.n, i), PolyForms(self.n + 1, self.cap))


def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def apl_forms(n: int, poly_cap: int) -> CDGA:
    """Truncated polynomial de Rham forms on the n-simplex as a CDGA."""
    return PolyForms(n, poly_cap).cdga


# Maurer-Cartan simplices of abelian algebras

def _require_abelian(L: LInftyAlgebra):
    if not L.is_abelian():
        raise OracleError("the forms oracle handles abelian L only (all l_k, k >= 2, zero)")


@dataclass(frozen=True, eq=False)
class MCSimplices:
    """Basis of MC(L (x) Omega_n) for abelian L: the degree -1 cycles."""

    L: LInftyAlgebra
    forms: PolyForms
    vectors: list  # over the basis of tensor_model(forms.cdga, L)

    @property
    def dim(self) -> int:
        return len(self.vectors)


def mc_simplices_abelian(L: LInftyAlgebra, n: int, cap: int = 2) -> MCSimplices:
    _require_abelian(L)
    P = PolyForms(n, cap)
    tm = tensor_model(P.cdga, L)
    space = tm.algebra.space
    idx = space.indices_in_degree(-1)
    down = space.indices_in_degree(-2)
    D = tm.algebra.differential().submatrix(down, idx)
    ker, _ = kernel_image(D)
    vecs = [{idx[i]: c for i, c in v.items()} for v in ker]
    return MCSimplices(L, P, vecs)


def _lift_face(L: LInftyAlgebra, forms: PolyForms, i: int) -> QMatrix:
    """id_L (x) d_i on tensor-model coordinates (pairs ordered (a, xi), xi major)."""
    f = forms.face(i)
    na, nb, nl = len(forms), f.rows, len(L)
    entries = {}
    for (r, c), x in f.entries.items():
        for j in range(nl):
            entries[(j * nb + r, j * na + c)] = x
    return QMatrix(nl * nb, nl * na, entries)


def _restrict(vectors: list, m: QMatrix) -> list:
    return [m.apply(v) for v in vectors]


def _kernel_combos(vectors: list, maps: list[QMatrix]) -> list:
    """Vectors in span(vectors) killed by every map in ``maps``."""
    if not maps:
        return list(vectors)
    rows = sum(m.rows for m in maps)
    entries = {}
    for j, v in enumerate(vectors):
        off = 0
        for m in maps:
            for r, c in m.apply(v).items():
                entries[(off + r, j)] = c
            off += m.rows
    K, _ = kernel_image(QMatrix(rows, len(vectors), entries))
    out = []
    for coeffs in K:
        acc: Vector = {}
        for j, c in coeffs.items():
            iadd(acc, vectors[j], c)
        out.append(acc)
    return out


def _rank(vectors: list) -> int:
    return len(EchelonBasis(v for v in vectors if v))


@dataclass
class AbelianMCHomotopy:
    pi0: int
    pi1: int
    cap: int
    levels: dict  # n -> dim MC_n


def abelian_mc_homotopy(L: LInftyAlgebra, cap: int = 2) -> AbelianMCHomotopy:
    """dim pi_0 and dim pi_1 of MC_*(L) from levels 0, 1, 2 of the Moore complex."""
    mc = {n: mc_simplices_abelian(L, n, cap) for n in range(3)}
    d = {n: {i: _lift_face(L, mc[n].forms, i) for i in range(n + 1)} for n in (1, 2)}
    n1 = _kernel_combos(mc[1].vectors, [d[1][1]])
    pi0 = mc[0].dim - _rank(_restrict(n1, d[1][0]))
    loops = _kernel_combos(n1, [d[1][0]])
    n2 = _kernel_combos(mc[2].vectors, [d[2][1], d[2][2]])
    pi1 = len(loops) - _rank(_restrict(n2, d[2][0]))
    return AbelianMCHomotopy(pi0, pi1, cap, {n: mc[n].dim for n in mc})


def stable_abelian_mc_homotopy(L: LInftyAlgebra, cap: int = 2, max_cap: int = 5) -> AbelianMCHomotopy:
    """Raise the cap until two consecutive caps agree; error if that never happens."""
    prev = abelian_mc_homotopy(L, cap)
    for c in range(cap + 1, max_cap + 1):
        cur = abelian_mc_homotopy(L, c)
        if (cur.pi0, cur.pi1) == (prev.pi0, prev.pi1):
            return cur
        prev = cur
    raise OracleError(f"pi_0/pi_1 did not stabilize up to cap {max_cap}")
