"""Independent oracles used by the test-suite.

Nothing here imports the package's bracket or elimination code: words are
plain tuples of generator names, ranks come from sympy.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import factorial

import sympy


def commutator(a: dict, b: dict, da: int, db: int) -> dict:
    out: dict = {}
    sign = (-1) ** (da * db)
    for (wa, ca), (wb, cb) in itertools.product(a.items(), b.items()):
        out[wa + wb] = out.get(wa + wb, 0) + ca * cb
        out[wb + wa] = out.get(wb + wa, 0) - sign * ca * cb
    return {w: c for w, c in out.items() if c}


def expand_nested(expr, degrees: dict) -> tuple[dict, int]:
    """Expand a nested ``[a, b]`` structure of generator names into tensor words."""
    if isinstance(expr, str):
        return {(expr,): Fraction(1)}, degrees[expr]
    a, da = expand_nested(expr[0], degrees)
    b, db = expand_nested(expr[1], degrees)
    return commutator(a, b, da, db), da + db


def tree_to_nested(L, t):
    """Package tree -> nested names; only reads generator names."""
    if isinstance(t, int):
        return L.names[t]
    return [tree_to_nested(L, t[0]), tree_to_nested(L, t[1])]


def element_words(e) -> dict:
    """Tensor expansion of a package LieElement using only the oracle's commutator."""
    degs = dict(e.owner.generators)
    out: dict = {}
    for t, c in e.terms.items():
        poly, _ = expand_nested(tree_to_nested(e.owner, t), degs)
        for w, x in poly.items():
            out[w] = out.get(w, 0) + c * x
    return {w: c for w, c in out.items() if c}


def rank_of(polys: list[dict]) -> int:
    if not polys:
        return 0
    words = sorted({w for p in polys for w in p})
    if not words:
        return 0
    idx = {w: i for i, w in enumerate(words)}
    M = sympy.zeros(len(polys), len(words))
    for r, p in enumerate(polys):
        for w, c in p.items():
            M[r, idx[w]] = sympy.Rational(c.numerator, c.denominator) if isinstance(c, Fraction) else c
    return M.rank()


def lie_spanning_sets(degrees: dict, max_weight: int) -> dict:
    """Spanning sets of the weight-k part of the free Lie algebra, by brute force.

    Weight k is spanned by all brackets [a, b] with a of weight i and b of
    weight k - i taken from earlier spanning sets.
    Returns {weight: [(poly, degree), ...]}.
    """
    span = {1: [({(g,): Fraction(1)}, d) for g, d in degrees.items()]}
    for k in range(2, max_weight + 1):
        items = []
        for i in range(1, k):
            for (a, da), (b, db) in itertools.product(span[i], span[k - i]):
                c = commutator(a, b, da, db)
                if c:
                    items.append((c, da + db))
        span[k] = items
    return span


def lie_dims(degrees: dict, max_weight: int) -> dict:
    """{(weight, degree): dim} of the free graded Lie algebra by tensor-word rank."""
    span = lie_spanning_sets(degrees, max_weight)
    out = {}
    for k, items in span.items():
        by_deg: dict = {}
        for p, d in items:
            by_deg.setdefault(d, []).append(p)
        for d, ps in by_deg.items():
            r = rank_of(ps)
            if r:
                out[(k, d)] = r
    return out


# truncated tensor algebra series for the BCH oracle

def tmul(a: dict, b: dict, cap: int) -> dict:
    out: dict = {}
    for (wa, ca), (wb, cb) in itertools.product(a.items(), b.items()):
        if len(wa) + len(wb) <= cap:
            out[wa + wb] = out.get(wa + wb, 0) + ca * cb
    return {w: c for w, c in out.items() if c}


def texp(a: dict, cap: int) -> dict:
    out = {(): Fraction(1)}
    power = {(): Fraction(1)}
    for k in range(1, cap + 1):
        power = tmul(power, a, cap)
        for w, c in power.items():
            out[w] = out.get(w, 0) + c / factorial(k)
    return {w: c for w, c in out.items() if c}


def tlog(a: dict, cap: int) -> dict:
    z = {w: c for w, c in a.items() if w != ()}
    assert a.get((), 0) == 1
    out: dict = {}
    power = {(): Fraction(1)}
    for k in range(1, cap + 1):
        power = tmul(power, z, cap)
        for w, c in power.items():
            out[w] = out.get(w, 0) + Fraction((-1) ** (k + 1), k) * c
    return {w: c for w, c in out.items() if c}


def bch_words(x: dict, y: dict, cap: int) -> dict:
    return tlog(tmul(texp(x, cap), texp(y, cap), cap), cap)


# simplicial antipodal degree

def antipodal_degree(m: int) -> int:
    """Degree of the antipodal map of S^m, via the boundary of the cross-polytope.

    Vertices are +-e_i (i = 0..m); facets choose one sign per axis. The
    fundamental cycle is found as the kernel of the top boundary map and the
    antipodal map is applied to it directly.
    """
    axes = range(m + 1)
    facets = [tuple((i, s) for i, s in zip(axes, signs))
              for signs in itertools.product((1, -1), repeat=m + 1)]
    if m == 0:
        # S^0 = two points; reduced H_0 spanned by p - q.
        p, q = ((0, 1),), ((0, -1),)
        cycle = {p: 1, q: -1}
        image = {q: 1, p: -1}
        return 1 if image == cycle else -1
    ridges = sorted({f[:j] + f[j + 1:] for f in facets for j in range(m + 1)})
    ridx = {r: i for i, r in enumerate(ridges)}
    B = sympy.zeros(len(ridges), len(facets))
    for c, f in enumerate(facets):
        for j in range(m + 1):
            B[ridx[f[:j] + f[j + 1:]], c] += (-1) ** j
    null = B.nullspace()
    assert len(null) == 1
    z = null[0]
    fidx = {f: i for i, f in enumerate(facets)}
    image = sympy.zeros(len(facets), 1)
    for c, f in enumerate(facets):
        g = tuple((i, -s) for i, s in f)  # antipode keeps the vertex order
        image[fidx[g]] += z[c]
    ratio = [image[i] / z[i] for i in range(len(facets)) if z[i] != 0]
    assert len(set(ratio)) == 1
    return int(ratio[0])


# DGL axioms straight from a structure-constant table

def dgl_axiom_failures(degrees: list, d: dict, l2: dict, max_weight_of=None, weights=None, cap=None) -> list:
    """Check a DGL given by ``d[i] = {r: c}`` and ``l2[(i, j)] = {r: c}`` for i <= j.

    Brackets for i > j come from graded antisymmetry. Returns a list of failure
    descriptions: degree, antisymmetry, d^2, Leibniz, Jacobi. When ``weights``
    and ``cap`` are given, identities whose inputs exceed the cap are skipped
    (the algebra is only nilpotent-truncated there).
    """
    n = len(degrees)
    fails = []

    def sgn(e):
        return -1 if e % 2 else 1

    table = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i <= j:
                table[i][j] = dict(l2.get((i, j), {}))
            else:
                table[i][j] = {r: -sgn(degrees[i] * degrees[j]) * c for r, c in l2.get((j, i), {}).items()}

    def br(i, j):
        return table[i][j]

    def br_vec(u, v):
        out = {}
        for i, a in u.items():
            for j, b in v.items():
                for r, c in br(i, j).items():
                    out[r] = out.get(r, 0) + a * b * c
        return {r: c for r, c in out.items() if c}

    def d_vec(u):
        out = {}
        for i, a in u.items():
            for r, c in d.get(i, {}).items():
                out[r] = out.get(r, 0) + a * c
        return {r: c for r, c in out.items() if c}

    def add(u, v, s=1):
        out = dict(u)
        for r, c in v.items():
            out[r] = out.get(r, 0) + s * c
        return {r: c for r, c in out.items() if c}

    def ok_weight(*xs):
        return weights is None or sum(weights[x] for x in xs) <= cap

    e = lambda i: {i: 1}
    for (i, j), out in l2.items():
        if any(degrees[r] != degrees[i] + degrees[j] for r in out):
            fails.append(("degree", (i, j)))
        if i == j and degrees[i] % 2 == 0 and out:
            fails.append(("antisymmetry", (i, j)))
    for i, out in d.items():
        if any(degrees[r] != degrees[i] - 1 for r in out):
            fails.append(("degree", (i,)))
    for i in range(n):
        if d_vec(d_vec(e(i))):
            fails.append(("d^2", (i,)))
    for i in range(n):
        for j in range(n):
            if not ok_weight(i, j):
                continue
            lhs = d_vec(br_vec(e(i), e(j)))
            rhs = add(br_vec(d_vec(e(i)), e(j)), br_vec(e(i), d_vec(e(j))), sgn(degrees[i]))
            if add(lhs, rhs, -1):
                fails.append(("leibniz", (i, j)))
    w = weights if weights is not None else [0] * n
    wmin = min(w, default=0)
    for i in range(n):
        if not ok_weight(i) or (weights is not None and w[i] + 2 * wmin > cap):
            continue
        for j in range(n):
            if weights is not None and w[i] + w[j] + wmin > cap:
                continue
            for k in range(n):
                if not ok_weight(i, j, k):
                    continue
                lhs = br_vec(e(i), br_vec(e(j), e(k)))
                rhs = add(br_vec(br_vec(e(i), e(j)), e(k)),
                          br_vec(e(j), br_vec(e(i), e(k))), sgn(degrees[i] * degrees[j]))
                if add(lhs, rhs, -1):
                    fails.append(("jacobi", (i, j, k)))
    return fails


def reynolds_rank_oracle(n, cap, degrees):
    """dim (H(S^{n-1}) (x) (L*L))^{S_2} per degree via tensor words and sympy.

    Invariants in a sector a (x) P_m are the image of v -> v + eps_a * swap(v),
    where swap exchanges tags in tensor words and eps_a = (-1)^n on x.
    The package is used only to enumerate basis trees of the free product.
    """
    from ratcoop.freelie import FreeGradedLie, free_product

    L = FreeGradedLie.on({"u": 4, "v": 6}, cap)
    P = free_product([L, L], ["1", "2"])
    by_deg = P.basis_by_degree()
    swap = {"u1": "u2", "u2": "u1", "v1": "v2", "v2": "v1"}
    out = {}
    for d in degrees:
        total = 0
        for a_deg, eps in ((0, 1), (n - 1, (-1) ** n)):
            words = [element_words(P.element({t: 1})) for t in by_deg.get(d + a_deg, [])]
            if not words:
                continue
            imgs = []
            for w in words:
                sw = {tuple(swap[g] for g in k): c for k, c in w.items()}
                img = dict(w)
                for k, c in sw.items():
                    img[k] = img.get(k, 0) + eps * c
                imgs.append({k: c for k, c in img.items() if c})
            keys = sorted({k for p in imgs for k in p})
            if not keys:
                continue
            M = sympy.Matrix(len(imgs), len(keys),
                             lambda i, j: sympy.Rational(str(imgs[i].get(keys[j], 0))))
            total += M.rank()
        if total:
            out[d] = total
    return out
