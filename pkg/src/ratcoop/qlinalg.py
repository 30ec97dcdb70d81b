"""Exact rational linear algebra and homology of finite chain complexes.

Vectors are sparse ``dict[int, Fraction]`` maps with no stored zeros.
Everything here is exact; there is no floating point anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Vector = dict  # dict[int, Fraction]


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floating point coefficients are not allowed")
    return Fraction(value)


def vec(items: Mapping | Iterable = ()) -> Vector:
    """Build a sparse vector, dropping zero entries."""
    pairs = items.items() if isinstance(items, Mapping) else items
    out: Vector = {}
    for k, c in pairs:
        c = as_fraction(c)
        if c:
            out[k] = out.get(k, 0) + c
            if not out[k]:
                del out[k]
    return out


def vadd(u: Vector, v: Vector, scale=1) -> Vector:
    """Return ``u + scale * v``."""
    out = dict(u)
    if not scale:
        return out
    for k, c in v.items():
        s = out.get(k, 0) + scale * c
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def vscale(v: Vector, scale) -> Vector:
    if not scale:
        return {}
    return {k: scale * c for k, c in v.items()}


def iadd(acc: Vector, v: Vector, scale=1) -> None:
    """In-place ``acc += scale * v``."""
    if not scale:
        return
    for k, c in v.items():
        s = acc.get(k, 0) + scale * c
        if s:
            acc[k] = s
        else:
            acc.pop(k, None)


@dataclass(frozen=True)
class QMatrix:
    """Sparse rational matrix in triplet form."""

    rows: int
    cols: int
    entries: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (r, c), x in self.entries.items():
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise IndexError(f"entry ({r}, {c}) outside {self.rows}x{self.cols}")
            x = as_fraction(x)
            if x:
                clean[(r, c)] = x
        object.__setattr__(self, "entries", clean)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "QMatrix":
        return cls(rows, cols, {})

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls(n, n, {(i, i): Fraction(1) for i in range(n)})

    @classmethod
    def from_dense(cls, data: Sequence[Sequence]) -> "QMatrix":
        rows = len(data)
        cols = len(data[0]) if rows else 0
        return cls(rows, cols, {(i, j): x for i, row in enumerate(data)
                                for j, x in enumerate(row) if x})

    @classmethod
    def from_columns(cls, columns: Sequence[Vector], rows: int) -> "QMatrix":
        return cls(rows, len(columns), {(r, j): x for j, col in enumerate(columns)
                                        for r, x in col.items()})

    def to_dense(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (r, c), x in self.entries.items():
            out[r][c] = x
        return out

    def column(self, j: int) -> Vector:
        return {r: x for (r, c), x in self.entries.items() if c == j}

    def columns(self) -> list[Vector]:
        cols: list[Vector] = [{} for _ in range(self.cols)]
        for (r, c), x in self.entries.items():
            cols[c][r] = x
        return cols

    def row_vectors(self) -> list[Vector]:
        rows: list[Vector] = [{} for _ in range(self.rows)]
        for (r, c), x in self.entries.items():
            rows[r][c] = x
        return rows

    def transpose(self) -> "QMatrix":
        return QMatrix(self.cols, self.rows, {(c, r): x for (r, c), x in self.entries.items()})

    def apply(self, v: Vector) -> Vector:
        out: Vector = {}
        cols = self._col_cache()
        for j, a in v.items():
            iadd(out, cols.get(j, {}), a)
        return out

    def _col_cache(self) -> dict:
        cache = self.__dict__.get("_cols")
        if cache is None:
            cache = {}
            for (r, c), x in self.entries.items():
                cache.setdefault(c, {})[r] = x
            object.__setattr__(self, "_cols", cache)
        return cache

    def __matmul__(self, other: "QMatrix") -> "QMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        out: dict = {}
        for j, col in other._col_cache().items():
            for r, x in self.apply(col).items():
                out[(r, j)] = x
        return QMatrix(self.rows, other.cols, out)

    def __add__(self, other: "QMatrix") -> "QMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        out = dict(self.entries)
        for k, x in other.entries.items():
            out[k] = out.get(k, 0) + x
        return QMatrix(self.rows, self.cols, out)

    def __sub__(self, other: "QMatrix") -> "QMatrix":
        return self + other.scaled(-1)

    def scaled(self, s) -> "QMatrix":
        s = as_fraction(s)
        return QMatrix(self.rows, self.cols, {k: s * x for k, x in self.entries.items()})

    def is_zero(self) -> bool:
        return not self.entries

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "QMatrix":
        rmap = {r: i for i, r in enumerate(rows)}
        cmap = {c: j for j, c in enumerate(cols)}
        return QMatrix(len(rows), len(cols), {(rmap[r], cmap[c]): x
                                              for (r, c), x in self.entries.items()
                                              if r in rmap and c in cmap})

    def __eq__(self, other) -> bool:
        if not isinstance(other, QMatrix):
            return NotImplemented
        return (self.rows, self.cols, self.entries) == (other.rows, other.cols, other.entries)

    def __hash__(self):
        return hash((self.rows, self.cols, frozenset(self.entries.items())))


def rref(vectors: Iterable[Vector]) -> tuple[list[Vector], list[int]]:
    """Reduced row echelon form of a list of sparse row vectors.

    Pivots are taken in increasing column order, so the output only depends
    on the row space. Returns the nonzero reduced rows and their pivot columns,
    both sorted by pivot.
    """
    basis: dict[int, Vector] = {}
    for v in vectors:
        v = reduce_against(dict(v), basis)
        if not v:
            continue
        p = min(v)
        inv = 1 / v[p]
        v = {k: x * inv for k, x in v.items()}
        for q, row in basis.items():
            c = row.get(p)
            if c:
                basis[q] = vadd(row, v, -c)
        basis[p] = v
    pivots = sorted(basis)
    return [basis[p] for p in pivots], pivots


def reduce_against(v: Vector, basis: Mapping[int, Vector]) -> Vector:
    """Reduce ``v`` modulo rows in reduced echelon form keyed by pivot."""
    for p, row in basis.items():
        c = v.get(p)
        if c:
            iadd(v, row, -c)
    return v


class EchelonBasis:
    """Incrementally grown reduced echelon basis of a subspace."""

    def __init__(self, vectors: Iterable[Vector] = ()):
        self.rows: dict[int, Vector] = {}
        for v in vectors:
            self.add(v)

    def __len__(self) -> int:
        return len(self.rows)

    def reduce(self, v: Vector) -> Vector:
        return reduce_against(dict(v), self.rows)

    def contains(self, v: Vector) -> bool:
        return not self.reduce(v)

    def add(self, v: Vector) -> bool:
        """Add ``v``; returns False when it was already in the span."""
        v = self.reduce(v)
        if not v:
            return False
        p = min(v)
        inv = 1 / v[p]
        v = {k: x * inv for k, x in v.items()}
        for q, row in self.rows.items():
            c = row.get(p)
            if c:
                self.rows[q] = vadd(row, v, -c)
        self.rows[p] = v
        return True

    def coordinates(self, v: Vector) -> Vector:
        """Coordinates of ``v`` in the echelon rows (keyed by pivot column)."""
        coords = {p: v[p] for p in self.rows if v.get(p)}
        if vadd(v, combine(self.rows, coords), -1):
            raise ValueError("vector is not in the span")
        return coords

    def basis(self) -> list[Vector]:
        return [self.rows[p] for p in sorted(self.rows)]


def combine(vectors: Mapping[int, Vector] | Sequence[Vector], coeffs: Mapping[int, Fraction]) -> Vector:
    out: Vector = {}
    for i, c in coeffs.items():
        iadd(out, vectors[i], c)
    return out


def rank(m: QMatrix) -> int:
    return len(rref(m.row_vectors())[0])


def kernel_image(m: QMatrix) -> tuple[list[Vector], list[Vector]]:
    """Exact bases of the kernel (in the domain) and image (in the codomain).

    The image basis is the reduced echelon basis of the column space, so for
    example a symmetrizer returns ``e0 + e1`` rather than ``e0/2 + e1/2``.
    """
    reduced, pivots = rref(m.row_vectors())
    pivot_set = set(pivots)
    kernel = []
    for free in range(m.cols):
        if free in pivot_set:
            continue
        v = {free: Fraction(1)}
        for row, p in zip(reduced, pivots):
            c = row.get(free)
            if c:
                v[p] = -c
        kernel.append(v)
    image, _ = rref(m.columns())
    return kernel, image


def solve(m: QMatrix, b: Vector) -> Vector | None:
    """One solution ``x`` of ``m x = b`` or None when inconsistent."""
    aug = [dict(r) for r in m.row_vectors()]
    for r, x in b.items():
        aug[r][m.cols] = x
    reduced, pivots = rref(aug)
    if pivots and pivots[-1] == m.cols:
        return None
    return {p: row[m.cols] for row, p in zip(reduced, pivots) if row.get(m.cols)}


@dataclass(frozen=True)
class GradedVectorSpace:
    """Ordered basis of (label, degree) pairs."""

    basis: tuple = ()

    def __post_init__(self):
        basis = tuple((str(l), int(d)) for l, d in self.basis)
        labels = [l for l, _ in basis]
        if len(set(labels)) != len(labels):
            dup = sorted({l for l in labels if labels.count(l) > 1})
            raise ValueError(f"duplicate basis labels: {dup}")
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "_labels", tuple(labels))
        object.__setattr__(self, "_degrees", tuple(d for _, d in basis))
        object.__setattr__(self, "_index", {l: i for i, l in enumerate(labels)})

    def __len__(self) -> int:
        return len(self.basis)

    @property
    def labels(self) -> tuple[str, ...]:
        return self._labels

    @property
    def degrees(self) -> tuple[int, ...]:
        return self._degrees

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise ValueError(f"{label!r} is not a basis label") from None

    def indices_in_degree(self, degree: int) -> list[int]:
        return [i for i, (_, d) in enumerate(self.basis) if d == degree]

    def dims(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for _, d in self.basis:
            out[d] = out.get(d, 0) + 1
        return dict(sorted(out.items()))

    def dim(self, degree: int | None = None) -> int:
        if degree is None:
            return len(self.basis)
        return sum(1 for _, d in self.basis if d == degree)


class ChainComplex:
    """Finite chain complex with a degree -1 differential.

    ``differential`` is one square matrix on the whole basis; it must only
    have entries from degree k to degree k-1 and must square to zero.
    """

    def __init__(self, space: GradedVectorSpace, differential: QMatrix | None = None):
        n = len(space)
        if differential is None:
            differential = QMatrix.zeros(n, n)
        if (differential.rows, differential.cols) != (n, n):
            raise ValueError("differential must be square on the basis")
        deg = space.degrees
        for (r, c) in differential.entries:
            if deg[r] != deg[c] - 1:
                raise ValueError(
                    f"differential entry {space.labels[c]} -> {space.labels[r]} "
                    f"does not lower degree by 1")
        if not (differential @ differential).is_zero():
            raise ValueError("differential does not square to zero")
        self.space = space
        self.differential = differential

    def block(self, degree: int) -> QMatrix:
        """The map C_degree -> C_{degree-1}."""
        src = self.space.indices_in_degree(degree)
        dst = self.space.indices_in_degree(degree - 1)
        return self.differential.submatrix(dst, src)

    def degrees(self) -> list[int]:
        return sorted(set(self.space.degrees))


def _embed(v: Vector, index: Sequence[int]) -> Vector:
    return {index[i]: x for i, x in v.items()}


def homology_representatives(c: ChainComplex, degree: int) -> list[Vector]:
    """Cycles (in the full basis of ``c``) whose classes form a basis of H_degree."""
    src = c.space.indices_in_degree(degree)
    if not src:
        return []
    kernel, _ = kernel_image(c.block(degree))
    up = c.space.indices_in_degree(degree + 1)
    _, image = kernel_image(c.block(degree + 1)) if up else ([], [])
    ech = EchelonBasis(image)
    reps = []
    for z in kernel:
        if ech.add(z):
            reps.append(_embed(z, src))
    return reps


def homology(c: ChainComplex, degree: int) -> GradedVectorSpace:
    """Basis of H_degree(c); the zero space outside the support of ``c``."""
    reps = homology_representatives(c, degree)
    return GradedVectorSpace(tuple((f"H{degree}[{i}]", degree) for i in range(len(reps))))


def homology_dims(c: ChainComplex) -> dict[int, int]:
    """Betti numbers per degree via rank-nullity, skipping zero entries."""
    ranks = {d: rank(c.block(d)) for d in c.degrees()}
    out = {}
    for d in c.degrees():
        h = c.space.dim(d) - ranks[d] - ranks.get(d + 1, 0)
        if h:
            out[d] = h
    return out


def format_fraction(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def format_vector(v: Vector, labels: Sequence[str]) -> str:
    if not v:
        return "0"
    parts = []
    for i in sorted(v):
        c = v[i]
        sign = "-" if c < 0 else "+"
        a = abs(c)
        term = labels[i] if a == 1 else f"{format_fraction(a)}*{labels[i]}"
        parts.append((sign, term))
    s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, term in parts[1:]:
        s += f" {sign} {term}"
    return s
