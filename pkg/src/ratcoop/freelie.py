"""Free graded Lie (super)algebras over Q, truncated at a bracket-weight cap.

Basis monomials are binary trees: an ``int`` is a generator index and a pair
``(left, right)`` is the bracket ``[left, right]``. The canonical basis is the
graded Lyndon-Shirshov basis: the standard bracketing of every Lyndon word,
plus the square ``[w, w]`` of every Lyndon word ``w`` of odd degree.

Brackets are computed through the commutator embedding into the tensor
algebra, ``[a, b] = ab - (-1)^{|a||b|} ba``, followed by a triangular
decomposition: the expansion of a basis monomial has its own word as the
lexicographically smallest word (coefficient 1, or 2 for squares).

Sign convention: swapping adjacent homogeneous symbols ``a, b`` introduces
``(-1)^(|a||b|)``; the bracket is graded antisymmetric,
``[a, b] = -(-1)^(|a||b|) [b, a]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .qlinalg import as_fraction, format_fraction, iadd
from .syntax import ParseError, evaluate, parse_expression

DEFAULT_WEIGHT_CAP = 6

Tree = int | tuple  # generator index or (left, right)


def lyndon_words(k: int, n: int) -> list[tuple[int, ...]]:
    """All Lyndon words of length <= n over letters 0..k-1 (Duval), in lex order."""
    if k == 0 or n == 0:
        return []
    out = []
    w = [-1]
    while w:
        w[-1] += 1
        out.append(tuple(w))
        m = len(w)
        while len(w) < n:
            w.append(w[len(w) - m])
        while w and w[-1] == k - 1:
            w.pop()
    return out


def standard_factorization(w: tuple[int, ...]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Split a Lyndon word as ``u v`` with ``v`` its longest proper Lyndon suffix."""
    for i in range(1, len(w)):
        if _is_lyndon(w[i:]):
            return w[:i], w[i:]
    raise ValueError(f"{w} has no standard factorization")


def _is_lyndon(w: tuple[int, ...]) -> bool:
    return all(w < w[i:] for i in range(1, len(w)))


def tree_word(t: Tree) -> tuple[int, ...]:
    if isinstance(t, int):
        return (t,)
    return tree_word(t[0]) + tree_word(t[1])


class LieAlgebraError(ValueError):
    pass


@dataclass(frozen=True)
class FreeGradedLie:
    """Free graded Lie algebra on named generators, truncated at ``weight_cap``."""

    generators: tuple = ()
    weight_cap: int = DEFAULT_WEIGHT_CAP
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        gens = tuple((str(n), int(d)) for n, d in self.generators)
        names = [n for n, _ in gens]
        if len(set(names)) != len(names):
            raise LieAlgebraError(f"duplicate generator names: {names}")
        if self.weight_cap < 1:
            raise LieAlgebraError("weight_cap must be >= 1")
        object.__setattr__(self, "generators", gens)

    @classmethod
    def on(cls, spec: Mapping[str, int] | Sequence, weight_cap: int = DEFAULT_WEIGHT_CAP) -> "FreeGradedLie":
        items = spec.items() if isinstance(spec, Mapping) else spec
        return cls(tuple(items), weight_cap)

    # generators and monomials

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.generators)

    @property
    def gen_degrees(self) -> tuple[int, ...]:
        return tuple(d for _, d in self.generators)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise LieAlgebraError(f"unknown generator {name!r}") from None

    def gen(self, name: str) -> "LieElement":
        return LieElement(self, {self.index(name): Fraction(1)})

    def gens(self) -> list["LieElement"]:
        return [LieElement(self, {i: Fraction(1)}) for i in range(len(self.generators))]

    def zero(self) -> "LieElement":
        return LieElement(self, {})

    def element(self, terms: Mapping[Tree, object]) -> "LieElement":
        return LieElement(self, {t: as_fraction(c) for t, c in terms.items()})

    def degree_of(self, t: Tree) -> int:
        degs = self.gen_degrees
        return sum(degs[i] for i in tree_word(t))

    @staticmethod
    def weight_of(t: Tree) -> int:
        return len(tree_word(t))

    def with_cap(self, weight_cap: int) -> "FreeGradedLie":
        return FreeGradedLie(self.generators, weight_cap)

    # basis

    def basis(self, max_weight: int | None = None) -> list[Tree]:
        """Canonical basis monomials of weight <= max_weight (default: the cap)."""
        n = self.weight_cap if max_weight is None else min(max_weight, self.weight_cap)
        key = ("basis", n)
        if key not in self._cache:
            out = []
            degs = self.gen_degrees
            for w in lyndon_words(len(degs), n):
                t = self._lyndon_tree(w)
                out.append(t)
                if 2 * len(w) <= n and sum(degs[i] for i in w) % 2:
                    out.append((t, t))
            out.sort(key=_sort_key)
            self._cache[key] = out
        return list(self._cache[key])

    def _lyndon_tree(self, w: tuple[int, ...]) -> Tree:
        if len(w) == 1:
            return w[0]
        u, v = standard_factorization(w)
        return (self._lyndon_tree(u), self._lyndon_tree(v))

    def basis_by_degree(self, max_weight: int | None = None) -> dict[int, list[Tree]]:
        out: dict[int, list[Tree]] = {}
        for t in self.basis(max_weight):
            out.setdefault(self.degree_of(t), []).append(t)
        return dict(sorted(out.items()))

    def graded_dims(self, max_weight: int | None = None) -> dict[int, int]:
        return {d: len(ts) for d, ts in self.basis_by_degree(max_weight).items()}

    def is_complete_through(self, degree: int) -> bool:
        """True when every basis monomial of degree <= ``degree`` fits under the cap."""
        degs = [d for d in self.gen_degrees]
        if not degs:
            return True
        if min(degs) <= 0:
            return False
        return (self.weight_cap + 1) * min(degs) > degree

    # tensor embedding

    def expand(self, t: Tree) -> dict[tuple[int, ...], Fraction]:
        """Image of a bracket monomial in the tensor algebra."""
        key = ("expand", t)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        if isinstance(t, int):
            out = {(t,): Fraction(1)}
        else:
            out = self.commutator(self.expand(t[0]), self.expand(t[1]),
                                  self.degree_of(t[0]), self.degree_of(t[1]))
        self._cache[key] = out
        return out

    @staticmethod
    def commutator(a: dict, b: dict, da: int, db: int) -> dict:
        out: dict = {}
        eps = -1 if (da * db) % 2 else 1
        for wa, ca in a.items():
            for wb, cb in b.items():
                c = ca * cb
                out[wa + wb] = out.get(wa + wb, 0) + c
                out[wb + wa] = out.get(wb + wa, 0) - eps * c
        return {w: c for w, c in out.items() if c}

    def _leads(self, weight: int) -> dict[tuple[int, ...], tuple[Tree, Fraction]]:
        """Leading word -> (basis monomial, coefficient) for monomials of one weight."""
        key = ("leads", weight)
        if key not in self._cache:
            leads = {}
            for t in self.basis(weight):
                if self.weight_of(t) != weight:
                    continue
                e = self.expand(t)
                w = tree_word(t)
                if min(e) != w:
                    raise AssertionError(f"basis monomial {self.format_tree(t)} is not triangular")
                leads[w] = (t, e[w])
            self._cache[key] = leads
        return self._cache[key]

    def decompose(self, poly: Mapping[tuple[int, ...], Fraction]) -> dict[Tree, Fraction]:
        """Coordinates of a Lie polynomial (given in tensor words) in the canonical basis.

        Words longer than the weight cap are ignored. Raises if ``poly`` is not
        in the image of the free Lie algebra.
        """
        rest = {w: c for w, c in poly.items() if c and len(w) <= self.weight_cap}
        out: dict[Tree, Fraction] = {}
        while rest:
            w = min(rest)
            hit = self._leads(len(w)).get(w)
            if hit is None:
                raise LieAlgebraError("tensor polynomial is not a Lie element")
            t, lead = hit
            c = rest[w] / lead
            out[t] = c
            iadd(rest, self.expand(t), -c)
        return out

    # bracket

    def bracket_basis(self, s: Tree, t: Tree) -> dict[Tree, Fraction] | None:
        """``[s, t]`` in canonical coordinates, or None when it exceeds the cap."""
        if self.weight_of(s) + self.weight_of(t) > self.weight_cap:
            return None
        key = ("br", s, t)
        hit = self._cache.get(key)
        if hit is None:
            poly = self.commutator(self.expand(s), self.expand(t), self.degree_of(s), self.degree_of(t))
            hit = self.decompose(poly)
            self._cache[key] = hit
        return hit

    def bracket(self, a: "LieElement", b: "LieElement") -> "LieElement":
        if a.owner != self or b.owner != self:
            raise LieAlgebraError("bracket of elements from different algebras")
        out: dict = {}
        truncated = a.truncated or b.truncated
        for s, cs in a.terms.items():
            for t, ct in b.terms.items():
                r = self.bracket_basis(s, t)
                if r is None:
                    truncated = True
                    continue
                iadd(out, r, cs * ct)
        return LieElement(self, out, truncated)

    # text

    def format_tree(self, t: Tree) -> str:
        if isinstance(t, int):
            return self.names[t]
        return f"[{self.format_tree(t[0])},{self.format_tree(t[1])}]"

    def format(self, terms: Mapping[Tree, Fraction]) -> str:
        if not terms:
            return "0"
        parts = []
        for t in sorted(terms, key=_sort_key):
            c = terms[t]
            a = abs(c)
            body = self.format_tree(t) if a == 1 else f"{format_fraction(a)}*{self.format_tree(t)}"
            parts.append(("-" if c < 0 else "+", body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    def parse(self, text: str, line: int = 1, column: int = 1) -> "LieElement":
        """Parse ``"[u1,[u1,u2]] - 1/2*v1"`` into canonical form."""
        node = parse_expression(text, line, column)

        def name(n, col):
            if n not in self.names:
                raise ParseError(f"unknown generator {n!r}", line, col)
            return self.gen(n)

        return evaluate(node, name=name, bracket=self.bracket, zero=self.zero)


def _sort_key(t: Tree):
    w = tree_word(t)
    return (len(w), w)


@dataclass(frozen=True, eq=False)
class LieElement:
    """Rational combination of canonical monomials of ``owner``."""

    owner: FreeGradedLie
    terms: dict = field(default_factory=dict)
    truncated: bool = False

    def __post_init__(self):
        cap = self.owner.weight_cap
        clean = {}
        truncated = self.truncated
        for t, c in self.terms.items():
            c = as_fraction(c)
            if not c:
                continue
            if FreeGradedLie.weight_of(t) > cap:
                truncated = True
                continue
            clean[t] = c
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "truncated", truncated)

    def _check(self, other: "LieElement"):
        if not isinstance(other, LieElement) or other.owner != self.owner:
            raise LieAlgebraError("elements belong to different algebras")

    def __add__(self, other: "LieElement") -> "LieElement":
        self._check(other)
        out = dict(self.terms)
        iadd(out, other.terms)
        return LieElement(self.owner, out, self.truncated or other.truncated)

    def __sub__(self, other: "LieElement") -> "LieElement":
        return self + (-1) * other

    def __neg__(self) -> "LieElement":
        return (-1) * self

    def __rmul__(self, scalar) -> "LieElement":
        s = as_fraction(scalar)
        return LieElement(self.owner, {t: s * c for t, c in self.terms.items()}, self.truncated)

    __mul__ = __rmul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, LieElement):
            return NotImplemented
        return self.owner == other.owner and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def bracket(self, other: "LieElement") -> "LieElement":
        return self.owner.bracket(self, other)

    def degrees(self) -> set[int]:
        return {self.owner.degree_of(t) for t in self.terms}

    def degree(self) -> int | None:
        """Degree of a homogeneous element; None for zero."""
        ds = self.degrees()
        if not ds:
            return None
        if len(ds) > 1:
            raise LieAlgebraError(f"element {self} is not homogeneous")
        return ds.pop()

    def weight(self) -> int:
        return max((FreeGradedLie.weight_of(t) for t in self.terms), default=0)

    def expand(self) -> dict:
        out: dict = {}
        for t, c in self.terms.items():
            iadd(out, self.owner.expand(t), c)
        return out

    def __str__(self) -> str:
        return self.owner.format(self.terms)

    __repr__ = __str__


def canonical_form(L: FreeGradedLie, expression: str | Iterable) -> LieElement:
    """Canonical form of a raw bracket expression.

    ``expression`` is either text accepted by :meth:`FreeGradedLie.parse` or a
    nested structure of generator names, e.g. ``[["a", "b"], "c"]``.
    """
    if isinstance(expression, str):
        return L.parse(expression)
    return _eval_nested(L, expression)


def _eval_nested(L: FreeGradedLie, e) -> LieElement:
    if isinstance(e, str):
        return L.gen(e)
    if isinstance(e, LieElement):
        return e
    a, b = e
    return L.bracket(_eval_nested(L, a), _eval_nested(L, b))


def free_product(algebras: Sequence[FreeGradedLie], tags: Sequence[str],
                 weight_cap: int | None = None) -> FreeGradedLie:
    """Free product of free algebras: free on the tagged disjoint union of generators."""
    if len(algebras) != len(tags):
        raise LieAlgebraError("need one tag per factor")
    gens = []
    for L, tag in zip(algebras, tags):
        gens.extend((f"{n}{tag}", d) for n, d in L.generators)
    names = [n for n, _ in gens]
    if len(set(names)) != len(names):
        clash = sorted({n for n in names if names.count(n) > 1})
        raise LieAlgebraError(f"generator names collide after tagging: {clash}")
    cap = weight_cap if weight_cap is not None else max((L.weight_cap for L in algebras), default=DEFAULT_WEIGHT_CAP)
    return FreeGradedLie(tuple(gens), cap)


def inclusion(L: FreeGradedLie, product: FreeGradedLie, tag: str) -> "LieMorphism":
    """Inclusion of a factor into a free product built with ``tag``."""
    return extend_morphism(L, product, {n: product.gen(f"{n}{tag}") for n in L.names})


def lcs_quotient(L: FreeGradedLie, N: int) -> FreeGradedLie:
    """``L / Gamma^{N+1} L``: brackets of total weight > N vanish."""
    if N < 1:
        raise LieAlgebraError("nilpotency class must be >= 1")
    return L.with_cap(min(N, L.weight_cap))


def project(e: LieElement, Q: FreeGradedLie) -> LieElement:
    """Image of ``e`` in a truncation ``Q`` of its algebra."""
    if Q.generators != e.owner.generators:
        raise LieAlgebraError("target is not a truncation of the source")
    return LieElement(Q, dict(e.terms))


@dataclass(frozen=True, eq=False)
class LieMorphism:
    """Morphism out of a free Lie algebra, determined by generator images.

    ``target`` is anything with ``bracket(a, b)`` and ``zero()``: another
    :class:`FreeGradedLie` or a tensor model.
    """

    source: FreeGradedLie
    target: object
    images: dict
    _memo: dict = field(default_factory=dict, repr=False)

    def image_of_tree(self, t: Tree):
        hit = self._memo.get(t)
        if hit is None:
            if isinstance(t, int):
                hit = self.images[self.source.names[t]]
            else:
                hit = self.target.bracket(self.image_of_tree(t[0]), self.image_of_tree(t[1]))
            self._memo[t] = hit
        return hit

    def apply(self, e: LieElement):
        if e.owner != self.source:
            raise LieAlgebraError("element is not in the source algebra")
        acc = self.target.zero()
        for t, c in e.terms.items():
            acc = acc + c * self.image_of_tree(t)
        return acc

    __call__ = apply


def extend_morphism(source: FreeGradedLie, target, images: Mapping[str, object]) -> LieMorphism:
    """Extend generator images to a bracket-preserving map; images must match degrees."""
    missing = [n for n in source.names if n not in images]
    if missing:
        raise LieAlgebraError(f"missing images for generators {missing}")
    extra = [n for n in images if n not in source.names]
    if extra:
        raise LieAlgebraError(f"images given for unknown generators {extra}")
    bad = []
    for n, d in source.generators:
        img = images[n]
        deg = img.degree()
        if deg is not None and deg != d:
            bad.append(f"{n} (degree {d}) -> {img} (degree {deg})")
    if bad:
        raise LieAlgebraError("degree mismatch: " + "; ".join(bad))
    return LieMorphism(source, target, dict(images))


def apply(m: LieMorphism, e: LieElement):
    return m.apply(e)
