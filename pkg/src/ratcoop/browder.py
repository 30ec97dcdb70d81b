"""Arity-2 coalgebra data of n-fold suspensions and the Browder cooperation.

A datum assigns to each generator ``g`` of a free Lie model ``L`` of
``Sigma^n X`` an element of ``H^*(S^{n-1}) (x) (L * L)``. Since the source is
free and the cooperation comes from a map of spaces, it extends uniquely to a
Lie morphism ``Delta_2``. The cooperation ``kappa_n(e)`` is the coefficient of
``x``, the class dual to the fundamental class (pairing ``<x; lambda> = +1``).

Every datum is normalized so that its ``1``-component is the pinch map
``g -> g1 + g2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .equivariant import FiniteGroup, swap_action
from .freelie import FreeGradedLie, LieAlgebraError, LieElement, extend_morphism, free_product
from .mapmodel import TensorElement, TensorLie, cohomology_sphere_cdga

TAGS = ("1", "2")
TOP = "x"


class DatumError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class CoalgebraDatum:
    n: int
    source: FreeGradedLie
    model: TensorLie
    images: dict  # generator name -> TensorElement
    note: str = ""
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def target(self) -> FreeGradedLie:
        return self.model.L

    def pinch(self, name: str) -> LieElement:
        P = self.target
        return P.gen(f"{name}{TAGS[0]}") + P.gen(f"{name}{TAGS[1]}")

    def image_text(self, name: str, pretty: bool = False) -> str:
        return self.images[name].format(pretty)

    def signature(self) -> tuple:
        """Content used for equality: fold, source generators, target cap, image texts."""
        return (self.n, self.source.generators, self.target.weight_cap,
                tuple(sorted((g, str(e)) for g, e in self.images.items())))

    def __eq__(self, other) -> bool:
        return isinstance(other, CoalgebraDatum) and self.signature() == other.signature()

    def __hash__(self):
        return hash(self.signature())


def target_model(n: int, source: FreeGradedLie, target_cap: int | None = None) -> TensorLie:
    """``H^*(S^{n-1}) (x) (L * L)`` with the Sigma_2 action."""
    cap = target_cap if target_cap is not None else source.weight_cap
    P = free_product([source, source], TAGS, weight_cap=cap)
    act = swap_action(P, source.names, TAGS, FiniteGroup.symmetric(2))
    A = cohomology_sphere_cdga(n, act.group)
    return TensorLie(A, P, act)


def make_datum(n: int, source: FreeGradedLie, images: Mapping[str, object], note: str = "",
               target_cap: int | None = None) -> CoalgebraDatum:
    """Datum from generator images given as :class:`TensorElement` or text like ``x@[u1,u2] + 1@(v1+v2)``."""
    if n < 1:
        raise DatumError("n must be >= 1")
    model = target_model(n, source, target_cap)
    imgs = {}
    for name, img in images.items():
        if name not in source.names:
            raise DatumError(f"image given for unknown generator {name!r}")
        imgs[name] = model.parse(img) if isinstance(img, str) else img
    return CoalgebraDatum(n, source, model, imgs, note)


# validation

@dataclass
class ValidationReport:
    problems: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems


def validate(datum: CoalgebraDatum) -> ValidationReport:
    """Degrees, Sigma_2-invariance and pinch normalization of every generator image."""
    rep = ValidationReport()
    model = datum.model
    for name, deg in datum.source.generators:
        img = datum.images.get(name)
        if img is None:
            rep.problems.append(f"{name}: no image")
            continue
        if img.model is not model:
            rep.problems.append(f"{name}: image lives in a different model")
            continue
        try:
            d = img.degree()
        except LieAlgebraError:
            rep.problems.append(f"{name}: image {img} is not homogeneous")
            d = deg
        if d is not None and d != deg:
            rep.problems.append(f"{name}: image {img} has degree {d}, expected {deg}")
        if not model.is_invariant(img):
            rep.problems.append(f"{name}: image {img} is not Sigma_2-invariant")
        if img.component("1") != datum.pinch(name):
            rep.problems.append(
                f"{name}: unit component {img.component('1')} is not the pinch {datum.pinch(name)}")
    return rep


def _morphism(datum: CoalgebraDatum):
    m = datum._cache.get("morphism")
    if m is None:
        rep = validate(datum)
        if not rep.ok:
            raise DatumError("invalid datum: " + "; ".join(rep.problems))
        m = extend_morphism(datum.source, datum.model, datum.images)
        datum._cache["morphism"] = m
    return m


def delta2(datum: CoalgebraDatum, e: LieElement) -> TensorElement:
    """Bracket-preserving extension of the generator images."""
    return _morphism(datum).apply(e)


def kappa(datum: CoalgebraDatum, e: LieElement) -> LieElement:
    """``kappa_n(e)``: the ``x``-coefficient of ``Delta_2(e)``."""
    return delta2(datum, e).component(TOP)


def topological_degree(lie_degree: int) -> int:
    """A Lie model class of degree k lives in pi_{k+1}."""
    return lie_degree + 1


# obstruction

def _fold_phrase(k: int) -> str:
    article = "an" if str(k).startswith("8") or k in (11, 18) else "a"
    return f"{article} {k}-fold suspension"


@dataclass
class ObstructionReport:
    n: int
    degrees: tuple
    scanned: int
    witnesses: list  # (element text, kappa text)
    truncated: bool
    weight_cap: int

    @property
    def obstructed(self) -> bool:
        return bool(self.witnesses)

    @property
    def verdict(self) -> str:
        if self.obstructed:
            return f"not {_fold_phrase(self.n + 1)}"
        return "no obstruction found (inconclusive)"


def obstruction_report(datum: CoalgebraDatum, degrees: tuple[int, int],
                       max_weight: int | None = None) -> ObstructionReport:
    """Scan canonical basis monomials with Lie degree in ``degrees`` for nonzero kappa."""
    L = datum.source
    lo, hi = degrees
    cap = max_weight if max_weight is not None else L.weight_cap
    witnesses, scanned, cut = [], 0, False
    for t in L.basis(cap):
        d = L.degree_of(t)
        if not lo <= d <= hi:
            continue
        scanned += 1
        img = delta2(datum, L.element({t: 1}))
        cut = cut or img.truncated
        k = img.component(TOP)
        if k:
            witnesses.append((L.format_tree(t), str(k)))
    return ObstructionReport(datum.n, (lo, hi), scanned, witnesses, cut, cap)


# builders

def wedge_pinch_datum(L: FreeGradedLie, n: int, note: str = "") -> CoalgebraDatum:
    """Pure pinch datum ``g -> 1 (x) (g1 + g2)``."""
    model = target_model(n, L)
    imgs = {g: model.pure("1", model.L.gen(f"{g}1") + model.L.gen(f"{g}2")) for g in L.names}
    return CoalgebraDatum(n, L, model, imgs, note or "pinch datum of a wedge of spheres")


def sphere_datum(n: int, weight_cap: int = 4, name: str = "u") -> CoalgebraDatum:
    """``S^n`` as an n-fold suspension of ``S^0``: ``u -> 1 (x) (u1+u2) + x (x) [u1,u2]``, |u| = n-1."""
    L = FreeGradedLie.on({name: n - 1}, weight_cap)
    model = target_model(n, L)
    P = model.L
    a, b = P.gen(f"{name}1"), P.gen(f"{name}2")
    img = model.pure("1", a + b) + model.pure(TOP, P.bracket(a, b))
    return CoalgebraDatum(n, L, model, {name: img}, f"S^{n} = Sigma^{n} S^0")


def from_product_model(n: int, model: FreeGradedLie, images: Mapping[str, object],
                       partners: Mapping[str, str], sphere_cell: str = TOP,
                       note: str = "", target_cap: int | None = None) -> CoalgebraDatum:
    """Adjoint datum from a Lie model of ``S^{n-1} x Y``.

    ``model`` has a generator ``sphere_cell`` for the top cell of ``S^{n-1}``,
    base generators for the cells of ``Y`` and, for base generators listed in
    ``partners``, product-cell generators ``x x g``. ``images`` maps every
    generator into ``L * L`` (text or element). Base generators must map to
    their pinch; the sphere cell maps to 0; a partner's image becomes the
    ``x``-component of ``Delta_2(g)``.
    """
    missing = [g for g in model.names if g not in images]
    if missing:
        raise DatumError(f"missing cell images for {missing}")
    if sphere_cell not in model.names:
        raise DatumError(f"model has no sphere cell {sphere_cell!r}")
    special = {sphere_cell, *partners.values()}
    base = [(g, d) for g, d in model.generators if g not in special]
    source = FreeGradedLie(tuple(base), model.weight_cap)
    tmodel = target_model(n, source, target_cap)
    P = tmodel.L

    def as_elem(v):
        if v is None or (isinstance(v, str) and v.strip() == "0"):
            return P.zero()
        return P.parse(v) if isinstance(v, str) else v

    if as_elem(images[sphere_cell]):
        raise DatumError(f"sphere cell {sphere_cell} must map to 0")
    deg = dict(model.generators)
    out = {}
    for g, d in base:
        img = as_elem(images[g])
        want = P.gen(f"{g}1") + P.gen(f"{g}2")
        if img != want:
            raise DatumError(f"base cell {g} must map to its pinch {want}, got {img}")
        total = tmodel.pure("1", img)
        p = partners.get(g)
        if p is not None:
            if deg[p] != d + n - 1:
                raise DatumError(f"product cell {p} has degree {deg[p]}, expected {d + n - 1}")
            total = total + tmodel.pure(TOP, as_elem(images[p]))
        out[g] = total
    return CoalgebraDatum(n, source, tmodel, out, note or "adjoint of a product-cell model")


SIGMA3_CP2_CELLS = (("x", 1), ("u", 4), ("v", 6), ("a", 6), ("b", 8))
SIGMA3_CP2_IMAGES = {"x": "0", "a": "0", "u": "u1+u2", "v": "v1+v2", "b": "[u1,u2]"}
SIGMA3_CP2_PARTNERS = {"u": "a", "v": "b"}


def sigma3_cp2_datum(weight_cap: int = 6) -> CoalgebraDatum:
    """The datum of ``Sigma^3 CP^2`` from its product-cell model."""
    model = FreeGradedLie(SIGMA3_CP2_CELLS, weight_cap)
    return from_product_model(3, model, SIGMA3_CP2_IMAGES, SIGMA3_CP2_PARTNERS,
                              note="Sigma^3 CP^2 via L(x,u,v,a,b) -> L(u1,v1,u2,v2)")
