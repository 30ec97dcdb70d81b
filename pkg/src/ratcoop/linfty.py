"""Finite L-infinity algebras, Maurer-Cartan elements, twisting and BCH.

Grading is homological: ``l_k`` has degree ``k - 2`` and Maurer-Cartan
elements live in degree -1. A Lie model generator of degree ``k`` stands for
a class in ``pi_{k+1}``.

Brackets are stored on sorted basis-index tuples and extended to arbitrary
tuples by graded antisymmetry: swapping adjacent inputs ``a, b`` multiplies
by ``-(-1)^(|a||b|)``.
"""

from __future__ import annotations

import copy
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Mapping, Sequence

from .freelie import FreeGradedLie, LieAlgebraError, LieElement
from .qlinalg import (ChainComplex, GradedVectorSpace, QMatrix, Vector, as_fraction,
                      format_vector, homology_dims, iadd, vadd, vec)

DEFAULT_ARITY_CAP = 3


def koszul_sort(idx: Sequence[int], degrees: Sequence[int]) -> tuple[tuple[int, ...], int]:
    """Sort ``idx`` by insertion; return the sorted tuple and the antisymmetric Koszul sign."""
    items = list(idx)
    sign = 1
    for i in range(1, len(items)):
        j = i
        while j > 0 and items[j - 1] > items[j]:
            a, b = items[j - 1], items[j]
            sign = -sign if (degrees[a] * degrees[b]) % 2 == 0 else sign
            items[j - 1], items[j] = b, a
            j -= 1
    return tuple(items), sign


def shuffle_sign(chosen: Sequence[int], xs: Sequence[int], degrees: Sequence[int]) -> int:
    """chi(sigma) for the unshuffle moving positions ``chosen`` to the front."""
    chosen_set = set(chosen)
    sign = 1
    for q in chosen:
        for p in range(q):
            if p not in chosen_set:
                # x_q jumps over x_p
                if (degrees[xs[p]] * degrees[xs[q]]) % 2 == 0:
                    sign = -sign
    return sign


@dataclass(frozen=True, eq=False)
class LInftyAlgebra:
    """Finite-dimensional L-infinity algebra given by structure constants.

    ``brackets[k]`` maps index tuples (any order) to sparse output vectors.
    ``weights`` is the filtration weight of each basis vector; brackets whose
    inputs have total weight above ``nilpotency_cap`` must vanish.
    """

    space: GradedVectorSpace
    brackets: dict = field(default_factory=dict)
    weights: tuple | None = None
    nilpotency_cap: int | None = None
    arity_cap: int = DEFAULT_ARITY_CAP
    table: dict = field(init=False, repr=False)
    skew_conflicts: list = field(init=False, repr=False)

    def __post_init__(self):
        n = len(self.space)
        weights = tuple(self.weights) if self.weights is not None else (0,) * n
        if len(weights) != n:
            raise ValueError("one filtration weight per basis element required")
        object.__setattr__(self, "weights", weights)
        degrees = self.space.degrees
        table: dict = {}
        conflicts = []
        for k, entries in self.brackets.items():
            if k < 1:
                raise ValueError("bracket arity must be >= 1")
            if k > self.arity_cap:
                raise ValueError(f"bracket arity {k} exceeds arity cap {self.arity_cap}")
            tk = table.setdefault(k, {})
            for key, out in entries.items():
                key = tuple(key)
                if len(key) != k or not all(0 <= i < n for i in key):
                    raise ValueError(f"bad index tuple {key} for arity {k}")
                for i in out:
                    if not 0 <= i < n:
                        raise ValueError(f"output index {i} out of range")
                out = vec(out)
                skey, sign = koszul_sort(key, degrees)
                value = {i: sign * c for i, c in out.items()}
                if skey in tk:
                    if tk[skey] != value:
                        conflicts.append((key, vadd(tk[skey], value, -1)))
                    continue
                if value:
                    tk[skey] = value
        for k, tk in table.items():
            for key, value in list(tk.items()):
                if value and _forced_zero(key, degrees):
                    conflicts.append((key, value))
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "skew_conflicts", conflicts)

    # basic data

    def __len__(self) -> int:
        return len(self.space)

    @property
    def degrees(self) -> tuple[int, ...]:
        return self.space.degrees

    @property
    def labels(self) -> tuple[str, ...]:
        return self.space.labels

    def format(self, v: Vector) -> str:
        return format_vector(v, self.labels)

    def basis_vector(self, label_or_index) -> Vector:
        i = label_or_index if isinstance(label_or_index, int) else self.space.index(label_or_index)
        return {i: Fraction(1)}

    def vector(self, coeffs: Mapping[str, object]) -> Vector:
        return vec({self.space.index(l): c for l, c in coeffs.items()})

    def degree_of(self, v: Vector) -> int | None:
        ds = {self.degrees[i] for i in v}
        if not ds:
            return None
        if len(ds) > 1:
            raise ValueError(f"{self.format(v)} is not homogeneous")
        return ds.pop()

    # evaluation

    def ell_basis(self, idx: Sequence[int]) -> Vector:
        k = len(idx)
        tk = self.table.get(k)
        if not tk:
            return {}
        key, sign = koszul_sort(idx, self.degrees)
        out = tk.get(key)
        if not out:
            return {}
        return out if sign == 1 else {i: -c for i, c in out.items()}

    def ell(self, *vectors: Vector) -> Vector:
        """Multilinear evaluation of ``l_k`` on sparse vectors."""
        k = len(vectors)
        out: Vector = {}
        if not self.table.get(k):
            return out
        for combo in itertools.product(*(v.items() for v in vectors)):
            c = Fraction(1)
            for _, x in combo:
                c *= x
            iadd(out, self.ell_basis([i for i, _ in combo]), c)
        return out

    def differential(self) -> QMatrix:
        n = len(self)
        entries = {}
        for (i,), out in self.table.get(1, {}).items():
            for r, c in out.items():
                entries[(r, i)] = c
        return QMatrix(n, n, entries)

    def chain_complex(self) -> ChainComplex:
        return ChainComplex(self.space, self.differential())

    def is_abelian(self) -> bool:
        return not any(self.table.get(k) for k in self.table if k >= 2)

    def with_entry(self, key: tuple[int, ...], value: Vector) -> "LInftyAlgebra":
        """Copy with the bracket on one ordered tuple replaced (other orderings untouched)."""
        k = len(key)
        if k > self.arity_cap or not all(0 <= i < len(self) for i in (*key, *value)):
            raise ValueError(f"bad entry {key} -> {value}")
        skey, sign = koszul_sort(key, self.degrees)
        out = {i: sign * Fraction(c) for i, c in value.items() if c}
        table = dict(self.table)
        tk = dict(table.get(k, {}))
        tk.pop(skey, None)
        if out:
            tk[skey] = out
        table[k] = tk
        conflicts = [(kk, r) for kk, r in self.skew_conflicts if tuple(sorted(kk)) != skey]
        if out and _forced_zero(skey, self.degrees):
            conflicts.append((skey, out))
        new = copy.copy(self)
        new.__dict__.pop("_free", None)  # no longer the free algebra
        object.__setattr__(new, "brackets", table)
        object.__setattr__(new, "table", table)
        object.__setattr__(new, "skew_conflicts", conflicts)
        return new

    # constructors

    @classmethod
    def from_free_lie(cls, L: FreeGradedLie, arity_cap: int = DEFAULT_ARITY_CAP) -> "LInftyAlgebra":
        """The truncated free Lie algebra as an L-infinity algebra with only ``l_2``."""
        basis = L.basis()
        index = {t: i for i, t in enumerate(basis)}
        space = GradedVectorSpace(tuple((L.format_tree(t), L.degree_of(t)) for t in basis))
        l2 = {}
        for i, s in enumerate(basis):
            for j in range(i, len(basis)):
                r = L.bracket_basis(s, basis[j])
                if r:
                    l2[(i, j)] = {index[t]: c for t, c in r.items()}
        weights = tuple(L.weight_of(t) for t in basis)
        alg = cls(space, {2: l2}, weights, L.weight_cap, max(arity_cap, 2))
        object.__setattr__(alg, "_free", (L, index))
        return alg

    @classmethod
    def from_free_dgl(cls, L: FreeGradedLie, d: Mapping[str, LieElement],
                      arity_cap: int = DEFAULT_ARITY_CAP) -> "LInftyAlgebra":
        """Truncated free DGL: ``d`` on generators, extended as a degree -1 derivation.

        ``d^2 = 0`` is not assumed; check it with arity 1 of the Jacobi suite.
        """
        base = cls.from_free_lie(L, arity_cap)
        _, index = base.free_source()
        gen_d = {}
        for n, deg in L.generators:
            img = d.get(n, L.zero())
            if img and img.degree() != deg - 1:
                raise LieAlgebraError(f"d({n}) = {img} does not have degree {deg - 1}")
            gen_d[L.index(n)] = img
        memo: dict = {}

        def dtree(t):
            if t not in memo:
                if isinstance(t, int):
                    memo[t] = gen_d[t]
                else:
                    s, u = t
                    sign = -1 if L.degree_of(s) % 2 else 1
                    a = L.element({s: 1})
                    b = L.element({u: 1})
                    memo[t] = L.bracket(dtree(s), b) + sign * L.bracket(a, dtree(u))
            return memo[t]

        l1 = {}
        for t, i in index.items():
            out = dtree(t)
            if out:
                l1[(i,)] = {index[s]: c for s, c in out.terms.items()}
        brackets = {1: l1, 2: base.table.get(2, {})}
        alg = cls(base.space, brackets, base.weights, base.nilpotency_cap, base.arity_cap)
        object.__setattr__(alg, "_free", (L, index))
        return alg

    def free_source(self):
        """(FreeGradedLie, tree -> index) when built by :meth:`from_free_lie`."""
        return self.__dict__.get("_free")

    def from_lie_element(self, e: LieElement) -> Vector:
        src = self.free_source()
        if src is None or src[0] != e.owner:
            raise LieAlgebraError("algebra was not built from this free Lie algebra")
        _, index = src
        return {index[t]: c for t, c in e.terms.items()}


def _forced_zero(key: tuple[int, ...], degrees) -> bool:
    """Graded antisymmetry forces l_k to vanish on a repeated even input."""
    for a, b in zip(key, key[1:]):
        if a == b and degrees[a] % 2 == 0:
            return True
    return False


@dataclass
class Violation:
    kind: str          # "degree" | "filtration" | "skew" | "jacobi"
    arity: int
    inputs: tuple
    residual: str

    def __str__(self):
        return f"{self.kind} (n={self.arity}) on ({', '.join(self.inputs)}): {self.residual}"


@dataclass
class JacobiReport:
    arity: int
    checked: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def check_generalized_jacobi(L: LInftyAlgebra, n: int, max_violations: int | None = None) -> JacobiReport:
    """Evaluate the n-th generalized Jacobi identity on every sorted basis tuple.

    Also checks that ``l_n`` has degree n-2, respects the filtration and is
    graded antisymmetric. Violations are data, not errors.
    """
    if n > L.arity_cap:
        raise ValueError(f"arity {n} exceeds arity cap {L.arity_cap}")
    rep = JacobiReport(n)
    degs, wts, cap, labels = L.degrees, L.weights, L.nilpotency_cap, L.labels

    def full():
        return max_violations is not None and len(rep.violations) >= max_violations

    def add(kind, key, residual):
        rep.violations.append(Violation(kind, n, tuple(labels[i] for i in key), residual))

    for key, residual in L.skew_conflicts:
        if len(key) == n:
            add("skew", key, L.format(residual))
            if full():
                return rep
    for key, out in sorted(L.table.get(n, {}).items()):
        want = sum(degs[i] for i in key) + n - 2
        bad = {i: c for i, c in out.items() if degs[i] != want}
        if bad:
            add("degree", key, f"output {L.format(bad)} not in degree {want}")
        w = sum(wts[i] for i in key)
        low = {i: c for i, c in out.items() if wts[i] < w or (cap is not None and w > cap)}
        if low:
            add("filtration", key, f"output {L.format(low)} below filtration weight {w}")
        if full():
            return rep

    order = sorted(range(len(L)), key=lambda i: (wts[i], i))
    for xs in itertools.combinations_with_replacement(order, n):
        if cap is not None and sum(wts[i] for i in xs) > cap:
            continue
        xs = tuple(sorted(xs))
        rep.checked += 1
        total = jacobiator(L, xs)
        if total:
            add("jacobi", xs, L.format(total))
            if full():
                return rep
    return rep


def jacobiator(L: LInftyAlgebra, xs: Sequence[int]) -> Vector:
    """Left side of the n-th generalized Jacobi identity on basis inputs ``xs``."""
    n = len(xs)
    degs = L.degrees
    total: Vector = {}
    for i in range(1, n + 1):
        j = n + 1 - i
        if i > L.arity_cap or j > L.arity_cap or not L.table.get(i) or not L.table.get(j):
            continue
        outer_sign = -1 if (i * (j - 1)) % 2 else 1
        for chosen in itertools.combinations(range(n), i):
            inner = L.ell_basis([xs[p] for p in chosen])
            if not inner:
                continue
            rest = [xs[p] for p in range(n) if p not in chosen]
            s = outer_sign * shuffle_sign(chosen, xs, degs)
            for e, c in inner.items():
                iadd(total, L.ell_basis([e] + rest), s * c)
    return total


def check_all(L: LInftyAlgebra, max_violations: int | None = None) -> list[JacobiReport]:
    return [check_generalized_jacobi(L, n, max_violations) for n in range(1, L.arity_cap + 1)]


def _entry_checks(L: LInftyAlgebra, rep: JacobiReport, key: tuple[int, ...]) -> None:
    degs, wts, cap, labels = L.degrees, L.weights, L.nilpotency_cap, L.labels
    n = len(key)

    def add(kind, residual):
        rep.violations.append(Violation(kind, n, tuple(labels[i] for i in key), residual))

    for k, residual in L.skew_conflicts:
        if tuple(sorted(k)) == key:
            add("skew", L.format(residual))
    out = L.table.get(n, {}).get(key, {})
    want = sum(degs[i] for i in key) + n - 2
    bad = {i: c for i, c in out.items() if degs[i] != want}
    if bad:
        add("degree", f"output {L.format(bad)} not in degree {want}")
    w = sum(wts[i] for i in key)
    low = {i: c for i, c in out.items() if wts[i] < w or (cap is not None and w > cap)}
    if low:
        add("filtration", f"output {L.format(low)} below filtration weight {w}")


def recheck_after_edit(L: LInftyAlgebra, key: tuple[int, int],
                       max_violations: int | None = None) -> list[JacobiReport]:
    """Re-run the checks an edit of the ``l_2`` entry at ``key`` can affect.

    Assumes the algebra passed :func:`check_all` before the edit. A Jacobiator
    reads the entry either as an inner bracket (both inputs among the tuple) or
    as the outer ``l_2`` applied to an inner output; every other tuple keeps its
    old, zero, value.
    """
    a, b = sorted(key)
    degs, wts, cap, labels = L.degrees, L.weights, L.nilpotency_cap, L.labels
    reports = []
    for n in range(1, L.arity_cap + 1):
        rep = JacobiReport(n)
        reports.append(rep)
        if n == 2:
            _entry_checks(L, rep, (a, b))
        if n < 2:
            continue
        tuples = {tuple(sorted((a, b) + rest))
                  for rest in itertools.combinations_with_replacement(range(len(L)), n - 2)}
        for p, q in ((a, b), (b, a)):
            for inner_key, out in L.table.get(n - 1, {}).items():
                if q in out:
                    tuples.add(tuple(sorted(inner_key + (p,))))
        for xs in sorted(tuples):
            if max_violations is not None and len(rep.violations) >= max_violations:
                break
            if cap is not None and sum(wts[i] for i in xs) > cap:
                continue
            rep.checked += 1
            total = jacobiator(L, xs)
            if total:
                rep.violations.append(Violation("jacobi", n, tuple(labels[i] for i in xs), L.format(total)))
    return reports


def single_entry_mutations(L: LInftyAlgebra, arity: int = 2, degree_compatible: bool = True):
    """Yield ``(key, output, mutant)``: copies with one structure constant of ``l_arity`` raised by 1.

    ``key`` runs over sorted index tuples, ``output`` over basis indices (only
    those of the bracket's degree when ``degree_compatible``).
    """
    degs = L.degrees
    n = len(L)
    table = L.table.get(arity, {})
    for key in itertools.combinations_with_replacement(range(n), arity):
        want = sum(degs[i] for i in key) + arity - 2
        for r in range(n):
            if degree_compatible and degs[r] != want:
                continue
            out = dict(table.get(key, {}))
            out[r] = out.get(r, 0) + 1
            yield key, r, L.with_entry(key, {i: c for i, c in out.items() if c})


# Maurer-Cartan theory

class MaurerCartanError(ValueError):
    pass


def mc_curvature(L: LInftyAlgebra, z: Vector) -> Vector:
    """sum_k l_k(z, ..., z) / k!  (finite: stops at the arity cap)."""
    out: Vector = {}
    for k in range(1, L.arity_cap + 1):
        if L.table.get(k):
            iadd(out, L.ell(*([z] * k)), Fraction(1, factorial(k)))
    return out


def is_maurer_cartan(L: LInftyAlgebra, z: Vector) -> tuple[bool, Vector]:
    if z and L.degree_of(z) != -1:
        raise MaurerCartanError(f"{L.format(z)} is not of degree -1")
    residual = mc_curvature(L, z)
    return not residual, residual


def twist(L: LInftyAlgebra, tau: Vector) -> LInftyAlgebra:
    """``L^tau``: l_k^tau(x) = sum_j l_{k+j}(tau, ..., tau, x) / j!."""
    ok, residual = is_maurer_cartan(L, tau)
    if not ok:
        raise MaurerCartanError(f"not a Maurer-Cartan element: curvature {L.format(residual)}")
    if not tau:
        return L
    keys_by_arity = {k: list(t) for k, t in L.table.items()}
    brackets: dict = {}
    for k in range(1, L.arity_cap + 1):
        candidates = set(keys_by_arity.get(k, []))
        for m in range(k + 1, L.arity_cap + 1):
            for key in keys_by_arity.get(m, []):
                candidates.update(itertools.combinations(key, k))
        tk = {}
        for x in sorted(candidates):
            out: Vector = {}
            for j in range(0, L.arity_cap - k + 1):
                if not L.table.get(k + j):
                    continue
                args = [tau] * j + [{i: Fraction(1)} for i in x]
                iadd(out, L.ell(*args), Fraction(1, factorial(j)))
            if out:
                tk[x] = out
        if tk:
            brackets[k] = tk
    return LInftyAlgebra(L.space, brackets, L.weights, L.nilpotency_cap, L.arity_cap)


@dataclass
class HomotopyTable:
    """Degree -> dim H_degree(L^tau); ``pi[k] = homology[k - 1]``."""

    homology: dict
    twisted: bool = False

    @property
    def pi(self) -> dict:
        return {d + 1: h for d, h in self.homology.items()}


def mc_homotopy_groups(L: LInftyAlgebra, tau: Vector | None = None) -> HomotopyTable:
    """Dimensions of pi_{k+1}(MC(L), tau) = H_k(L^tau)."""
    twisted = twist(L, tau) if tau else L
    return HomotopyTable(homology_dims(twisted.chain_complex()), bool(tau))


# Baker-Campbell-Hausdorff

def _dynkin_words(class_cap: int) -> dict[tuple[int, ...], Fraction]:
    """Coefficients of right-normed bracket words in 0 (=x), 1 (=y), Dynkin form."""
    out: dict = {}
    for n in range(1, class_cap + 1):
        pairs = [(r, s) for r in range(class_cap + 1) for s in range(class_cap + 1) if 0 < r + s <= class_cap]
        for seq in itertools.product(pairs, repeat=n):
            total = sum(r + s for r, s in seq)
            if total > class_cap:
                continue
            denom = total
            for r, s in seq:
                denom *= factorial(r) * factorial(s)
            coef = Fraction((-1) ** (n - 1), n * denom)
            word = tuple(itertools.chain.from_iterable([0] * r + [1] * s for r, s in seq))
            out[word] = out.get(word, 0) + coef
    return {w: c for w, c in out.items() if c}


def _right_normed(word, letters, bracket):
    acc = letters[word[-1]]
    for a in reversed(word[:-1]):
        acc = bracket(letters[a], acc)
    return acc


def bch(x: LieElement, y: LieElement, class_cap: int) -> LieElement:
    """log(exp x exp y) in Dynkin form, truncated at bracket length ``class_cap``.

    ``x`` and ``y`` must have degree 0 in a free Lie algebra nilpotent of class
    at most ``class_cap`` (its weight cap).
    """
    L = x.owner
    if y.owner != L:
        raise LieAlgebraError("bch of elements from different algebras")
    if L.weight_cap > class_cap:
        raise LieAlgebraError(
            f"algebra has nilpotency class {L.weight_cap} > class_cap {class_cap}; truncate it first")
    for e in (x, y):
        if e and e.degrees() != {0}:
            raise LieAlgebraError(f"bch needs degree-0 inputs, got {e}")
    letters = (x, y)
    acc = L.zero()
    for word, c in sorted(_dynkin_words(class_cap).items()):
        acc = acc + c * _right_normed(word, letters, L.bracket)
    return acc
