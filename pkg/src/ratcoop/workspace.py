"""Line-oriented workspace files.

See ``docs/workspace-grammar.md`` for the grammar. Parsing resolves names in
declaration order; syntax and name errors raise :class:`ParseError` with a
line and column, while semantic problems (bad CDGA tables, actions that are
not homomorphisms, inconsistent cell data) raise :class:`WorkspaceError`.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from fractions import Fraction

from .browder import CoalgebraDatum, DatumError, from_product_model, make_datum, target_model
from .equivariant import ActionError, FiniteGroup, FreeLieAction, GroupAction, free_lie_action
from .freelie import FreeGradedLie, LieAlgebraError, free_product
from .linfty import DEFAULT_ARITY_CAP, LInftyAlgebra
from .mapmodel import CDGA, CDGAError, cohomology_sphere_cdga
from .qlinalg import GradedVectorSpace, QMatrix
from .syntax import ParseError, evaluate, parse_expression

DEFAULT_WEIGHT_CAP = 6
ENV_WEIGHT = "RATCOOP_WEIGHT_CAP"
ENV_ARITY = "RATCOOP_ARITY_CAP"

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_']*$")


class WorkspaceError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


def default_caps() -> dict:
    """Built-in defaults, overridable through the environment (for CI)."""
    caps = {"weight_cap": DEFAULT_WEIGHT_CAP, "arity_cap": DEFAULT_ARITY_CAP}
    for key, env in (("weight_cap", ENV_WEIGHT), ("arity_cap", ENV_ARITY)):
        raw = os.environ.get(env)
        if raw:
            try:
                caps[key] = int(raw)
            except ValueError:
                raise WorkspaceError(f"environment variable {env}={raw!r} is not an integer") from None
    return caps


@dataclass
class FreeDecl:
    algebra: FreeGradedLie
    d: dict = field(default_factory=dict)
    line: int = 0
    d_lines: dict = field(default_factory=dict)

    def linfty(self, arity_cap: int) -> LInftyAlgebra:
        if self.d:
            return LInftyAlgebra.from_free_dgl(self.algebra, self.d, arity_cap)
        return LInftyAlgebra.from_free_lie(self.algebra, arity_cap)


@dataclass
class LinftyDecl:
    space: GradedVectorSpace
    brackets: dict = field(default_factory=dict)
    line: int = 0

    def linfty(self, arity_cap: int) -> LInftyAlgebra:
        top = max(self.brackets, default=0)
        return LInftyAlgebra(self.space, self.brackets, None, None, max(arity_cap, top))


@dataclass
class CdgaDecl:
    basis: list
    unit: str
    mul: dict = field(default_factory=dict)
    d: dict = field(default_factory=dict)
    line: int = 0
    built: CDGA | None = None


@dataclass
class Job:
    command: str
    params: dict
    line: int


@dataclass
class Workspace:
    caps: dict
    objects: dict = field(default_factory=dict)   # name -> decl / CDGA / datum
    kinds: dict = field(default_factory=dict)     # name -> kind
    groups: dict = field(default_factory=dict)
    actions: dict = field(default_factory=dict)   # (group, target) -> action object
    data: dict = field(default_factory=dict)
    jobs: list = field(default_factory=list)
    text: str = ""

    def names_of(self, kind: str) -> list[str]:
        return [n for n, k in self.kinds.items() if k == kind]

    def algebra(self, name: str) -> LInftyAlgebra:
        decl = self.objects[name]
        return decl.linfty(self.caps["arity_cap"])

    def cdga(self, name: str) -> CDGA:
        return self.objects[name]


class _Vec:
    """Sparse vector wrapper so the expression evaluator can do linear algebra."""

    def __init__(self, d=None):
        self.d = {k: v for k, v in (d or {}).items() if v}

    def __add__(self, other):
        out = dict(self.d)
        for k, v in other.d.items():
            out[k] = out.get(k, 0) + v
        return _Vec(out)

    def __rmul__(self, c):
        return _Vec({k: c * v for k, v in self.d.items()})


def linear_expression(text: str, labels, line: int, column: int) -> dict:
    """Linear combination of basis labels -> {index: Fraction}."""
    if text.strip() == "0":
        return {}
    node = parse_expression(text, line, column)
    index = {l: i for i, l in enumerate(labels)}

    def name(n, col):
        if n not in index:
            raise ParseError(f"unknown basis element {n!r}", line, col)
        return _Vec({index[n]: Fraction(1)})

    def bracket(a, b):
        raise ParseError("brackets are not allowed in a linear expression", line, column)

    return evaluate(node, name=name, bracket=bracket, zero=_Vec,
                    one=lambda: name("1", column) if "1" in index else _fail(line, column)).d


def _fail(line, column):
    raise ParseError("bare scalar not allowed here", line, column)


class _LineParser:
    def __init__(self, ws: Workspace, overrides: dict):
        self.ws = ws
        self.overrides = overrides
        self.pending_cells: dict = {}

    # helpers

    def err(self, msg, lineno, col):
        raise ParseError(msg, lineno, col)

    def col(self, raw: str, token: str, start: int = 0) -> int:
        i = raw.find(token, start)
        return i + 1 if i >= 0 else 1

    def need(self, name: str, kinds: tuple, lineno: int, raw: str, start: int = 0):
        if name not in self.ws.kinds:
            self.err(f"{name!r} is not declared", lineno, self.col(raw, name, start))
        if self.ws.kinds[name] not in kinds:
            self.err(f"{name!r} is a {self.ws.kinds[name]}, expected {' or '.join(kinds)}",
                     lineno, self.col(raw, name, start))

    def declare(self, name: str, kind: str, obj, lineno: int, raw: str):
        if not _NAME.match(name):
            self.err(f"bad name {name!r}", lineno, self.col(raw, name))
        if name in self.ws.kinds:
            self.err(f"{name!r} is already declared", lineno, self.col(raw, name, raw.find(" ")))
        self.ws.kinds[name] = kind
        self.ws.objects[name] = obj

    def int_of(self, tok: str, lineno: int, raw: str, start: int = 0) -> int:
        try:
            return int(tok)
        except ValueError:
            self.err(f"expected an integer, found {tok!r}", lineno, self.col(raw, tok, start))

    def pairs(self, toks, lineno, raw, start=0) -> list[tuple[str, int]]:
        out = []
        pos = start
        for t in toks:
            pos = raw.find(t, pos)
            if ":" not in t:
                self.err(f"expected name:degree, found {t!r}", lineno, pos + 1)
            n, d = t.split(":", 1)
            if not _NAME.match(n) and not re.match(r"\d+$", n):
                self.err(f"bad basis name {n!r}", lineno, pos + 1)
            try:
                out.append((n, int(d)))
            except ValueError:
                self.err(f"degree {d!r} is not an integer", lineno, pos + len(n) + 2)
            pos += len(t)
        return out

    def keyvals(self, toks, lineno, raw, start=0) -> dict:
        out = {}
        pos = start
        for t in toks:
            pos = raw.find(t, pos)
            if "=" not in t:
                self.err(f"expected key=value, found {t!r}", lineno, pos + 1)
            k, v = t.split("=", 1)
            out[k] = (v, pos + len(k) + 2)
            pos += len(t)
        return out

    def cap(self, key: str) -> int:
        return self.overrides.get(key) or self.ws.caps[key]

    # dispatcher

    def line(self, lineno: int, raw: str):
        text = raw.split("#", 1)[0].rstrip()
        if not text.strip():
            return
        toks = text.split()
        head = toks[0]
        handler = getattr(self, "do_" + head.replace("-", "_"), None)
        if handler is None:
            self.err(f"unknown statement {head!r}", lineno, self.col(raw, head))
        handler(lineno, raw, text, toks)

    def do_set(self, lineno, raw, text, toks):
        if len(toks) != 3 or toks[1] not in ("weight_cap", "arity_cap"):
            self.err("expected 'set weight_cap N' or 'set arity_cap N'", lineno, 1)
        if self.ws.kinds:
            self.err("'set' lines must come before any declaration", lineno, 1)
        v = self.int_of(toks[2], lineno, raw, 4)
        if v < 1:
            self.err("caps must be >= 1", lineno, self.col(raw, toks[2], 4))
        if toks[1] not in self.overrides or self.overrides[toks[1]] is None:
            self.ws.caps[toks[1]] = v

    def do_free(self, lineno, raw, text, toks):
        if len(toks) < 2:
            self.err("expected 'free NAME g:deg ...'", lineno, 1)
        gens = self.pairs(toks[2:], lineno, raw, len(toks[0]) + len(toks[1]) + 1)
        try:
            L = FreeGradedLie(tuple(gens), self.cap("weight_cap"))
        except LieAlgebraError as e:
            self.err(str(e), lineno, 1)
        self.declare(toks[1], "free", FreeDecl(L, line=lineno), lineno, raw)

    def do_product(self, lineno, raw, text, toks):
        m = re.match(r"product\s+(\S+)\s*=\s*(.+?)\s+tags\s+(.+)$", text)
        if not m:
            self.err("expected 'product NAME = A * B tags t1 t2'", lineno, 1)
        name, factors, tags = m.group(1), [f.strip() for f in m.group(2).split("*")], m.group(3).split()
        for f in factors:
            self.need(f, ("free",), lineno, raw, m.start(2))
        if len(tags) != len(factors):
            self.err(f"{len(factors)} factors but {len(tags)} tags", lineno, m.start(3) + 1)
        algs = [self.ws.objects[f].algebra for f in factors]
        if any(self.ws.objects[f].d for f in factors):
            self.err("free products of DGLs are not supported", lineno, m.start(2) + 1)
        try:
            P = free_product(algs, tags, self.cap("weight_cap"))
        except LieAlgebraError as e:
            self.err(str(e), lineno, m.start(3) + 1)
        self.declare(name, "free", FreeDecl(P, line=lineno), lineno, raw)

    def do_d(self, lineno, raw, text, toks):
        m = re.match(r"d\s+(\S+)\s+(\S+)\s*=\s*(.*)$", text)
        if not m:
            self.err("expected 'd NAME element = expression'", lineno, 1)
        name, g, expr = m.groups()
        self.need(name, ("free", "cdga"), lineno, raw, 1)
        col = m.start(3) + 1
        obj = self.ws.objects[name]
        if self.ws.kinds[name] == "free":
            L = obj.algebra
            if g not in L.names:
                self.err(f"unknown generator {g!r}", lineno, m.start(2) + 1)
            obj.d[g] = L.parse(expr, lineno, col)
            obj.d_lines[g] = lineno
        else:
            labels = [b for b, _ in obj.basis]
            if g not in labels:
                self.err(f"unknown basis element {g!r}", lineno, m.start(2) + 1)
            obj.d[g] = {labels[i]: c for i, c in linear_expression(expr, labels, lineno, col).items()}

    def do_linfty(self, lineno, raw, text, toks):
        if len(toks) < 3 or toks[2] != "basis":
            self.err("expected 'linfty NAME basis a:deg ...'", lineno, 1)
        basis = self.pairs(toks[3:], lineno, raw, text.find("basis") + 5)
        try:
            space = GradedVectorSpace(tuple(basis))
        except ValueError as e:
            self.err(str(e), lineno, text.find("basis") + 7)
        self.declare(toks[1], "linfty", LinftyDecl(space, line=lineno), lineno, raw)

    def do_bracket(self, lineno, raw, text, toks):
        m = re.match(r"bracket\s+(\S+)\s*\(([^)]*)\)\s*=\s*(.*)$", text)
        if not m:
            self.err("expected 'bracket NAME (a,b,...) = expression'", lineno, 1)
        name = m.group(1)
        self.need(name, ("linfty",), lineno, raw, 1)
        decl = self.ws.objects[name]
        labels = decl.space.labels
        args = [a.strip() for a in m.group(2).split(",")]
        idx = []
        for a in args:
            if a not in labels:
                self.err(f"unknown basis element {a!r}", lineno, self.col(raw, a, m.start(2)))
            idx.append(labels.index(a))
        k = len(idx)
        if k > self.cap("arity_cap"):
            self.err(f"arity {k} exceeds arity cap {self.cap('arity_cap')}", lineno, m.start(2) + 1)
        out = linear_expression(m.group(3), labels, lineno, m.start(3) + 1)
        want = sum(decl.space.degrees[i] for i in idx) + k - 2
        for i in out:
            if decl.space.degrees[i] != want:
                raise WorkspaceError(f"l_{k}{tuple(args)} must have degree {want}, "
                                     f"but {labels[i]} has degree {decl.space.degrees[i]}", lineno)
        tk = decl.brackets.setdefault(k, {})
        tk[tuple(idx)] = out

    def do_cdga(self, lineno, raw, text, toks):
        kv = {}
        rest = toks[2:]
        if rest and rest[0].startswith("unit="):
            kv["unit"] = rest[0][5:]
            rest = rest[1:]
        if not rest or rest[0] != "basis" or "unit" not in kv:
            self.err("expected 'cdga NAME unit=LABEL basis a:deg ...'", lineno, 1)
        basis = self.pairs(rest[1:], lineno, raw, text.find("basis") + 5)
        if kv["unit"] not in [b for b, _ in basis]:
            self.err(f"unit {kv['unit']!r} is not a basis element", lineno, self.col(raw, "unit="))
        self.declare(toks[1], "cdga", CdgaDecl(basis, kv["unit"], line=lineno), lineno, raw)

    def do_mul(self, lineno, raw, text, toks):
        m = re.match(r"mul\s+(\S+)\s+(\S+)\s+(\S+)\s*=\s*(.*)$", text)
        if not m:
            self.err("expected 'mul NAME a b = expression'", lineno, 1)
        name, a, b, expr = m.groups()
        self.need(name, ("cdga",), lineno, raw, 1)
        decl = self.ws.objects[name]
        if not isinstance(decl, CdgaDecl):
            self.err(f"{name!r} is a built-in CDGA and cannot be edited", lineno, m.start(1) + 1)
        labels = [x for x, _ in decl.basis]
        for tok, start in ((a, m.start(2)), (b, m.start(3))):
            if tok not in labels:
                self.err(f"unknown basis element {tok!r}", lineno, start + 1)
        out = linear_expression(expr, labels, lineno, m.start(4) + 1)
        decl.mul[(a, b)] = {labels[i]: c for i, c in out.items()}

    def do_group(self, lineno, raw, text, toks):
        if len(toks) != 4 or toks[2] not in ("symmetric", "cyclic"):
            self.err("expected 'group NAME symmetric|cyclic r'", lineno, 1)
        r = self.int_of(toks[3], lineno, raw, len(" ".join(toks[:3])))
        if not 1 <= r <= 5:
            self.err("group size parameter must be between 1 and 5", lineno, self.col(raw, toks[3], 6))
        G = (FiniteGroup.symmetric if toks[2] == "symmetric" else FiniteGroup.cyclic)(r, toks[1])
        self.declare(toks[1], "group", G, lineno, raw)
        self.ws.groups[toks[1]] = G

    def _group(self, name, lineno, raw, start=0) -> FiniteGroup:
        self.need(name, ("group",), lineno, raw, start)
        return self.ws.groups[name]

    def do_sphere(self, lineno, raw, text, toks):
        if len(toks) < 3:
            self.err("expected 'sphere NAME n [group=G]'", lineno, 1)
        n = self.int_of(toks[2], lineno, raw, len(toks[0]) + len(toks[1]) + 1)
        kv = self.keyvals(toks[3:], lineno, raw, len(" ".join(toks[:3])))
        if "group" in kv:
            G = self._group(kv["group"][0], lineno, raw, kv["group"][1] - 1)
        else:
            G = self.ws.groups.get("S2")
            if G is None:
                G = FiniteGroup.symmetric(2, "S2")
                self.ws.groups["S2"] = G
                self.ws.kinds["S2"] = "group"
                self.ws.objects["S2"] = G
        try:
            A = cohomology_sphere_cdga(n, G)
        except (CDGAError, ActionError) as e:
            raise WorkspaceError(str(e), lineno) from None
        self.declare(toks[1], "cdga", A, lineno, raw)
        self.ws.actions[(G.name, toks[1])] = A.action

    def do_act(self, lineno, raw, text, toks):
        m = re.match(r"act\s+(\S+)\s+on\s+(\S+)\s+(\S+)\s*:\s*(.*)$", text)
        if not m:
            self.err("expected 'act GROUP on TARGET element: a -> expr, ...'", lineno, 1)
        gname, target, elem, body = m.groups()
        G = self._group(gname, lineno, raw, m.start(1))
        self.need(target, ("free", "linfty", "cdga"), lineno, raw, m.start(2))
        try:
            g = G.element(elem)
        except ActionError as e:
            self.err(str(e), lineno, m.start(3) + 1)
        store = self.ws.actions.setdefault((gname, target), {"_pending": {}, "line": lineno})
        if not isinstance(store, dict):
            self.err(f"{target!r} already carries a built-in action of {gname}", lineno, m.start(2) + 1)
        images = store["_pending"].setdefault(g, {})
        kind = self.ws.kinds[target]
        obj = self.ws.objects[target]
        offset = m.start(4)
        for piece, start in _split_top(body, offset):
            mm = re.match(r"\s*(\S+)\s*->\s*(.*)$", piece)
            if not mm:
                self.err("expected 'name -> expression'", lineno, start + 1)
            src, expr = mm.group(1), mm.group(2)
            ecol = start + mm.start(2) + 1
            if kind == "free":
                if src not in obj.algebra.names:
                    self.err(f"unknown generator {src!r}", lineno, start + mm.start(1) + 1)
                images[src] = obj.algebra.parse(expr, lineno, ecol)
            else:
                labels = obj.space.labels if kind == "linfty" else (
                    [b for b, _ in obj.basis] if isinstance(obj, CdgaDecl) else list(obj.labels))
                if src not in labels:
                    self.err(f"unknown basis element {src!r}", lineno, start + mm.start(1) + 1)
                images[src] = linear_expression(expr, labels, lineno, ecol)

    def do_datum(self, lineno, raw, text, toks):
        if len(toks) < 2:
            self.err("expected 'datum NAME n=N source=L'", lineno, 1)
        kv = self.keyvals(toks[2:], lineno, raw, len(toks[0]) + len(toks[1]) + 1)
        for key in ("n", "source"):
            if key not in kv:
                self.err(f"missing {key}=", lineno, len(text) + 1)
        src, scol = kv["source"]
        self.need(src, ("free",), lineno, raw, scol - 1)
        n = self.int_of(kv["n"][0], lineno, raw, kv["n"][1] - 1)
        tcap = self.int_of(kv["target_cap"][0], lineno, raw) if "target_cap" in kv else None
        L = self.ws.objects[src].algebra
        if n < 1:
            self.err("n must be >= 1", lineno, kv["n"][1])
        self.declare(toks[1], "datum", {"n": n, "source": L, "model": target_model(n, L, tcap),
                                        "images": {}, "line": lineno, "cap": tcap}, lineno, raw)

    def do_image(self, lineno, raw, text, toks):
        m = re.match(r"image\s+(\S+)\s+(\S+)\s*=\s*(.*)$", text)
        if not m:
            self.err("expected 'image DATUM g = expression'", lineno, 1)
        name, g, expr = m.groups()
        self.need(name, ("datum",), lineno, raw, m.start(1))
        spec = self.ws.objects[name]
        if "images" not in spec or "cells" in spec:
            self.err(f"{name!r} is a product-model datum; use 'cell'", lineno, 1)
        if g not in spec["source"].names:
            self.err(f"unknown generator {g!r}", lineno, m.start(2) + 1)
        spec["images"][g] = spec["model"].parse(expr, lineno, m.start(3) + 1)

    def do_productmodel(self, lineno, raw, text, toks):
        m = re.match(r"productmodel\s+(\S+)\s+(.*?)\bcells\s+(.*?)(?:\s+sphere=(\S+))?(?:\s+partners\s+(.*?))?\s*$", text)
        if not m:
            self.err("expected 'productmodel NAME n=N cells c:deg ... sphere=x partners g:p ...'", lineno, 1)
        kv = self.keyvals(m.group(2).split(), lineno, raw, m.start(2))
        if "n" not in kv:
            self.err("missing n=", lineno, m.start(2) + 1)
        n = self.int_of(kv["n"][0], lineno, raw, kv["n"][1] - 1)
        tcap = self.int_of(kv["target_cap"][0], lineno, raw) if "target_cap" in kv else None
        cells = self.pairs(m.group(3).split(), lineno, raw, m.start(3))
        sphere = m.group(4) or "x"
        partners = {}
        for t in (m.group(5) or "").split():
            if ":" not in t:
                self.err(f"expected base:partner, found {t!r}", lineno, self.col(raw, t, m.start(5)))
            a, b = t.split(":", 1)
            partners[a] = b
        names = [c for c, _ in cells]
        for nm in [sphere, *partners, *partners.values()]:
            if nm not in names:
                self.err(f"{nm!r} is not a cell", lineno, self.col(raw, nm, m.start(3)))
        model = FreeGradedLie(tuple(cells), self.cap("weight_cap"))
        special = {sphere, *partners.values()}
        base = FreeGradedLie(tuple(c for c in cells if c[0] not in special), model.weight_cap)
        tmodel = target_model(n, base, tcap)
        self.declare(toks[1], "datum", {"n": n, "cells": model, "sphere": sphere, "partners": partners,
                                        "target": tmodel.L, "images": {}, "line": lineno, "cap": tcap},
                     lineno, raw)

    def do_cell(self, lineno, raw, text, toks):
        m = re.match(r"cell\s+(\S+)\s+(\S+)\s*->\s*(.*)$", text)
        if not m:
            self.err("expected 'cell DATUM c -> expression'", lineno, 1)
        name, c, expr = m.groups()
        self.need(name, ("datum",), lineno, raw, m.start(1))
        spec = self.ws.objects[name]
        if "cells" not in spec:
            self.err(f"{name!r} is not a product-model datum; use 'image'", lineno, 1)
        if c not in spec["cells"].names:
            self.err(f"unknown cell {c!r}", lineno, m.start(2) + 1)
        P = spec["target"]
        spec["images"][c] = P.zero() if expr.strip() == "0" else P.parse(expr, lineno, m.start(3) + 1)

    def do_job(self, lineno, raw, text, toks):
        if len(toks) < 2:
            self.err("expected 'job COMMAND key=value ...'", lineno, 1)
        kv = self.keyvals(toks[2:], lineno, raw, len(toks[0]) + len(toks[1]) + 1)
        self.ws.jobs.append(Job(toks[1], {k: v for k, (v, _) in kv.items()}, lineno))

    # finalize

    def finish(self):
        ws = self.ws
        for name in ws.names_of("free"):
            decl = ws.objects[name]
            degs = dict(decl.algebra.generators)
            for g, img in decl.d.items():
                try:
                    bad = img and img.degree() != degs[g] - 1
                except LieAlgebraError as e:
                    raise WorkspaceError(f"d {name} {g}: {e}", decl.line) from None
                if bad:
                    raise WorkspaceError(f"d({g}) = {img} does not have degree {degs[g] - 1}",
                                         decl.d_lines.get(g, decl.line))
        for name in ws.names_of("cdga"):
            decl = ws.objects[name]
            if isinstance(decl, CdgaDecl):
                try:
                    ws.objects[name] = CDGA.from_table(decl.basis, decl.unit, decl.mul, decl.d, name=name)
                except CDGAError as e:
                    raise WorkspaceError(f"CDGA {name}: {e}", decl.line) from None
        for (gname, target), store in list(ws.actions.items()):
            if not isinstance(store, dict):
                continue
            G = ws.groups[gname]
            kind = ws.kinds[target]
            obj = ws.objects[target]
            try:
                if kind == "free":
                    act = free_lie_action(G, obj.algebra, store["_pending"])
                else:
                    space = obj.space
                    mats = {}
                    for g, imgs in store["_pending"].items():
                        n = len(space)
                        entries = {}
                        for j, lab in enumerate(space.labels):
                            col = imgs.get(lab, {j: Fraction(1)})
                            for i, c in col.items():
                                entries[(i, j)] = c
                        mats[g] = QMatrix(n, n, entries)
                    act = GroupAction.from_generators(G, space, mats)
                    if kind == "cdga":
                        ws.objects[target] = obj.with_action(act)
            except (ActionError, LieAlgebraError) as e:
                raise WorkspaceError(f"action of {gname} on {target}: {e}", store["line"]) from None
            ws.actions[(gname, target)] = act
        for name in ws.names_of("datum"):
            spec = ws.objects[name]
            try:
                if "cells" in spec:
                    d = from_product_model(spec["n"], spec["cells"], spec["images"], spec["partners"],
                                           spec["sphere"], target_cap=spec["cap"])
                else:
                    d = CoalgebraDatum(spec["n"], spec["source"], spec["model"], spec["images"])
            except (DatumError, LieAlgebraError) as e:
                raise WorkspaceError(f"datum {name}: {e}", spec["line"]) from None
            ws.data[name] = d
            ws.objects[name] = d


def _split_top(body: str, offset: int):
    """Split on commas outside brackets/parentheses; yield (piece, absolute start)."""
    depth, start = 0, 0
    for i, ch in enumerate(body):
        if ch in "[(":
            depth += 1
        elif ch in "])":
            depth -= 1
        elif ch == "," and depth == 0:
            yield body[start:i], offset + start
            start = i + 1
    yield body[start:], offset + start


def parse_workspace(text: str, weight_cap: int | None = None, arity_cap: int | None = None) -> Workspace:
    """Parse a workspace; explicit caps override ``set`` lines, which override the defaults."""
    caps = default_caps()
    overrides = {"weight_cap": weight_cap, "arity_cap": arity_cap}
    for k, v in overrides.items():
        if v is not None:
            caps[k] = v
    ws = Workspace(caps, text=text)
    p = _LineParser(ws, {k: v for k, v in overrides.items() if v is not None})
    for lineno, raw in enumerate(text.splitlines(), start=1):
        p.line(lineno, raw)
    p.finish()
    return ws
