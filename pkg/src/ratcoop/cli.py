"""``ratcoop`` command-line interface.

Exit codes: 0 success, 1 validation failure, 2 parse/usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import browder as br
from .equivariant import FreeLieAction, check_equivariance, invariant_dims, invariant_subspace
from .freelie import LieAlgebraError
from .linfty import MaurerCartanError, check_all, mc_homotopy_groups
from .mapmodel import compact, hofixed_homotopy_groups, subscript
from .qlinalg import format_vector
from .syntax import ParseError
from .workspace import FreeDecl, Workspace, WorkspaceError, linear_expression, parse_workspace

DEMOS = {
    "sigma3-cp2": """\
# Sigma^3 CP^2 as a 3-fold suspension.
# Product-cell model L(x,u,v,a,b) of S^2 x Sigma^3 CP^2 with a = x*u, b = x*v,
# mapped to L(u1,v1,u2,v2); the images of a and b give the x-components.
set weight_cap 6
set arity_cap 3
productmodel D n=3 cells x:1 u:4 v:6 a:6 b:8 sphere=x partners u:a v:b
cell D x -> 0
cell D a -> 0
cell D u -> u1+u2
cell D v -> v1+v2
cell D b -> [u1,u2]
job browder datum=D
job obstruct datum=D degrees=0..20
""",
    "wedge-s5-s7": """\
# S^5 v S^7 = Sigma^3 (S^2 v S^4) with the pinch datum; kappa_3 should vanish
# because the wedge is even a 5-fold suspension.
set weight_cap 4
set arity_cap 3
free L u:4 v:6
datum D n=3 source=L
image D u = 1@(u1+u2)
image D v = 1@(v1+v2)
job browder datum=D
job obstruct datum=D degrees=0..20
""",
}


class UsageError(ValueError):
    pass


@dataclass
class Result:
    command: str
    text: list = field(default_factory=list)
    data: dict = field(default_factory=dict)
    status: int = 0


def _sub(n: int) -> str:
    return str(n).translate(str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉"))


def _range(text: str) -> tuple[int, int]:
    try:
        lo, hi = text.split("..")
        return int(lo), int(hi)
    except ValueError:
        raise UsageError(f"bad degree range {text!r}; expected a..b") from None


def _pick(ws: Workspace, kind: str, name: str | None, what: str) -> str:
    names = ws.names_of(kind)
    if name is not None:
        if name not in names:
            raise UsageError(f"no {what} named {name!r}")
        return name
    if len(names) != 1:
        raise UsageError(f"workspace has {len(names)} {what}s; choose one by name")
    return names[0]


# commands

def cmd_check_jacobi(ws: Workspace, algebra: str | None = None) -> Result:
    res = Result("check-jacobi")
    names = [algebra] if algebra else ws.names_of("free") + ws.names_of("linfty")
    if algebra and ws.kinds.get(algebra) not in ("free", "linfty"):
        raise UsageError(f"no algebra named {algebra!r}")
    out = {}
    for name in names:
        L = ws.algebra(name)
        reports = check_all(L)
        ok = all(r.ok for r in reports)
        if not ok:
            res.status = 1
        entry = {"ok": ok, "dimension": len(L), "arities": {}}
        parts = []
        for r in reports:
            entry["arities"][str(r.arity)] = {
                "checked": r.checked,
                "violations": [{"kind": v.kind, "inputs": list(v.inputs), "residual": v.residual}
                               for v in r.violations]}
            parts.append(f"n={r.arity} {'ok' if r.ok else 'FAIL'} ({r.checked} tuples)")
        res.text.append(f"check-jacobi {name} (dim {len(L)}): " + ", ".join(parts))
        for r in reports:
            for v in r.violations[:10]:
                res.text.append(f"  violation: {v}")
            if len(r.violations) > 10:
                res.text.append(f"  ({len(r.violations) - 10} more violations at n={r.arity})")
        out[name] = entry
    res.data = {"algebras": out, "ok": res.status == 0}
    return res


def _action_for(ws: Workspace, gname: str, target: str):
    act = ws.actions.get((gname, target))
    if isinstance(act, FreeLieAction):
        return act.basis_action(), act
    return act, act


def cmd_invariants(ws: Workspace, group: str) -> Result:
    res = Result("invariants")
    if group not in ws.groups:
        raise UsageError(f"no group named {group!r}")
    targets = [t for (g, t) in ws.actions if g == group]
    if not targets:
        raise UsageError(f"group {group!r} does not act on anything")
    out = {}
    for t in targets:
        act, raw = _action_for(ws, group, t)
        entry = {}
        if ws.kinds[t] == "linfty":
            rep = check_equivariance(act, ws.algebra(t))
            entry["equivariant"] = rep.ok
            if not rep.ok:
                res.status = 1
                res.text.append(f"action of {group} on {t} is not compatible with the brackets:")
                res.text.extend(f"  {p}" for p in rep.problems[:10])
        dims = invariant_dims(act)
        vecs = invariant_subspace(act)
        by_deg: dict = {}
        for v in vecs:
            by_deg.setdefault(act.space.degrees[min(v)], []).append(compact(format_vector(v, act.space.labels)))
        entry["dims"] = {str(d): n for d, n in dims.items()}
        entry["bases"] = {str(d): b for d, b in sorted(by_deg.items())}
        res.text.append(f"invariants of {t} under {group} (order {ws.groups[group].order}):")
        if not dims:
            res.text.append("  none")
        for d, n in dims.items():
            shown = by_deg[d][:4]
            more = f" (+{len(by_deg[d]) - 4} more)" if len(by_deg[d]) > 4 else ""
            res.text.append(f"  degree {d}: {n}  [{', '.join(subscript(s) for s in shown)}]{more}")
        out[t] = entry
    res.data = {"group": group, "targets": out}
    return res


def _element_vector(ws: Workspace, name: str, text: str):
    decl = ws.objects[name]
    L = ws.algebra(name)
    if isinstance(decl, FreeDecl):
        return L, L.from_lie_element(decl.algebra.parse(text))
    return L, linear_expression(text, L.labels, 1, 1)


def cmd_homotopy_groups(ws: Workspace, algebra: str | None = None, twist: str | None = None) -> Result:
    res = Result("homotopy-groups")
    name = algebra or _pick_algebra(ws)
    if ws.kinds.get(name) not in ("free", "linfty"):
        raise UsageError(f"no algebra named {name!r}")
    decl = ws.objects[name]
    if twist is None and isinstance(decl, FreeDecl) and not decl.d:
        homology = decl.algebra.graded_dims()
    else:
        L = ws.algebra(name)
        tau = None
        if twist is not None:
            L, tau = _element_vector(ws, name, twist)
        try:
            homology = mc_homotopy_groups(L, tau).homology
        except MaurerCartanError as e:
            res.status = 1
            res.text.append(f"twist rejected: {e}")
            res.data = {"algebra": name, "error": str(e)}
            return res
    # a degree is exact when the free algebra is complete one degree above it
    exact = {d: not isinstance(decl, FreeDecl) or decl.algebra.is_complete_through(d + 1)
             for d in homology}
    res.text.append(f"homotopy groups of MC({name})" + (f" at tau = {twist}" if twist else "") + ":")
    if not homology:
        res.text.append("  all zero")
    for d, n in sorted(homology.items()):
        res.text.append(f"  degree {d} (pi_{d + 1}): {n}" + ("" if exact[d] else "  (beyond weight cap)"))
    res.data = {"algebra": name, "twist": twist,
                "homology": {str(d): n for d, n in sorted(homology.items())},
                "pi": {str(d + 1): n for d, n in sorted(homology.items())},
                "beyond_cap": [d for d in sorted(homology) if not exact[d]]}
    return res


def _pick_algebra(ws: Workspace) -> str:
    names = ws.names_of("free") + ws.names_of("linfty")
    if len(names) != 1:
        raise UsageError(f"workspace has {len(names)} algebras; choose one with --algebra")
    return names[0]


def cmd_hofixed(ws: Workspace, cdga: str | None = None, algebra: str | None = None,
                degrees: tuple[int, int] | None = None) -> Result:
    res = Result("hofixed")
    candidates = [(g, t) for (g, t) in ws.actions if ws.kinds[t] == "cdga" and (cdga is None or t == cdga)]
    if len(candidates) != 1:
        raise UsageError("need exactly one CDGA with a group action (use --cdga)")
    gname, aname = candidates[0]
    algs = [t for (g, t) in ws.actions if g == gname and ws.kinds[t] in ("free", "linfty")
            and (algebra is None or t == algebra)]
    if len(algs) != 1:
        raise UsageError(f"need exactly one algebra acted on by {gname} (use --algebra)")
    lname = algs[0]
    A = ws.cdga(aname)
    act = ws.actions[(gname, lname)]
    decl = ws.objects[lname]
    if isinstance(decl, FreeDecl) and not decl.d:
        L = decl.algebra
    else:
        L = ws.algebra(lname)
        if isinstance(act, FreeLieAction):
            act = act.on_linfty(L)
    rep = hofixed_homotopy_groups(A, L, act, degrees)
    rng = f"degrees {degrees[0]}..{degrees[1]}" if degrees else "all degrees"
    res.text.append(f"({aname} ⊗ {lname})^{gname}, {rng}: {rep.route}")
    # only the binary case has a homotopy-group reading
    homotopy = ws.groups[gname].order <= 2
    if rep.note:
        res.text.append(f"  note: {rep.note}")
    if not homotopy:
        res.text.append("  note: raw invariant dimensions (no homotopy-group reading for groups of order > 2)")
    for d, n in rep.dims.items():
        basis = rep.bases.get(d, [])
        shown = ", ".join(subscript(b) for b in basis[:4]) + (f" (+{len(basis) - 4} more)" if len(basis) > 4 else "")
        label = f"degree {d} (pi_{d + 1})" if homotopy else f"degree {d}"
        res.text.append(f"  {label}: {n}" + (f"  [{shown}]" if basis else ""))
    res.data = {"cdga": aname, "algebra": lname, "group": gname, "route": rep.route,
                "complete": rep.complete, "note": rep.note, "homotopy_reading": homotopy,
                "dims": {str(d): n for d, n in rep.dims.items()},
                "bases": {str(d): b for d, b in rep.bases.items()}}
    return res


def _datum(ws: Workspace, name: str | None) -> tuple[str, br.CoalgebraDatum]:
    name = _pick(ws, "datum", name, "datum")
    return name, ws.data[name]


def _describe(name: str, D: br.CoalgebraDatum) -> str:
    gens = ", ".join(D.source.names)
    degs = ", ".join(f"|{g}| = {d}" for g, d in D.source.generators)
    return f"datum {name}: n = {D.n}, source L({gens}) with {degs}; target H*(S^{D.n - 1}) ⊗ (L∗L)"


def cmd_browder(ws: Workspace, datum: str | None = None, element: str | None = None) -> Result:
    res = Result("browder")
    name, D = _datum(ws, datum)
    rep = br.validate(D)
    res.text.append(_describe(name, D))
    if not rep.ok:
        res.status = 1
        res.text.append("invalid datum:")
        res.text.extend(f"  {p}" for p in rep.problems)
        res.data = {"datum": name, "valid": False, "problems": rep.problems}
        return res
    k = f"κ{_sub(D.n)}"
    elems = [(g, D.source.gen(g)) for g in D.source.names]
    if element is not None:
        elems.append((element, D.source.parse(element)))
    deltas, kappas = {}, {}
    for label, e in elems:
        deltas[label] = br.delta2(D, e)
        kappas[label] = br.kappa(D, e)
    for label, _ in elems:
        res.text.append(f"Δ₂({subscript(label)}) = {deltas[label].format(pretty=True)}")
    for label, _ in elems:
        res.text.append(f"{k}({subscript(label)}) = {subscript(str(kappas[label]))}")
    res.data = {"datum": name, "n": D.n, "valid": True,
                "delta2": {l: str(deltas[l]) for l, _ in elems},
                "kappa": {l: str(kappas[l]) for l, _ in elems},
                "kappa_lie_degree": {l: kappas[l].degree() for l, _ in elems}}
    return res


def cmd_obstruct(ws: Workspace, degrees: tuple[int, int], datum: str | None = None,
                 max_weight: int | None = None) -> Result:
    res = Result("obstruct")
    name, D = _datum(ws, datum)
    rep = br.validate(D)
    if not rep.ok:
        res.status = 1
        res.text.append(f"invalid datum {name}:")
        res.text.extend(f"  {p}" for p in rep.problems)
        res.data = {"datum": name, "valid": False, "problems": rep.problems}
        return res
    r = br.obstruction_report(D, degrees, max_weight)
    k = f"κ{_sub(D.n)}"
    res.text.append(f"obstruction scan of {name}: degrees {degrees[0]}..{degrees[1]}, "
                    f"weight <= {r.weight_cap}, {r.scanned} basis monomials")
    for e, v in r.witnesses[:5]:
        res.text.append(f"  witness {k}({subscript(e)}) = {subscript(v)}")
    if len(r.witnesses) > 5:
        res.text.append(f"  ({len(r.witnesses) - 5} more witnesses)")
    if r.truncated:
        res.text.append("  note: some images were truncated at the target weight cap")
    res.text.append(f"verdict: {r.verdict}")
    res.data = {"datum": name, "n": D.n, "degrees": list(degrees), "weight_cap": r.weight_cap,
                "scanned": r.scanned, "obstructed": r.obstructed, "verdict": r.verdict,
                "truncated": r.truncated,
                "witnesses": [{"element": e, "kappa": v} for e, v in r.witnesses]}
    return res


def run_job(ws: Workspace, job) -> Result:
    p = dict(job.params)
    c = job.command
    try:
        if c == "check-jacobi":
            return cmd_check_jacobi(ws, p.get("algebra"))
        if c == "invariants":
            return cmd_invariants(ws, p["group"])
        if c == "homotopy-groups":
            return cmd_homotopy_groups(ws, p.get("algebra"), p.get("twist"))
        if c == "hofixed":
            return cmd_hofixed(ws, p.get("cdga"), p.get("algebra"),
                               _range(p["degrees"]) if "degrees" in p else None)
        if c == "browder":
            return cmd_browder(ws, p.get("datum"), p.get("element"))
        if c == "obstruct":
            return cmd_obstruct(ws, _range(p["degrees"]), p.get("datum"),
                                int(p["max_weight"]) if "max_weight" in p else None)
    except KeyError as e:
        raise ParseError(f"job {c} needs parameter {e.args[0]}", job.line, 1) from None
    except UsageError as e:
        raise ParseError(str(e), job.line, 1) from None
    raise ParseError(f"unknown job command {c!r}", job.line, 5)


def run_jobs(ws: Workspace) -> list[Result]:
    return [run_job(ws, j) for j in ws.jobs]


# output

def _caps_line(ws: Workspace) -> str:
    return f"caps: weight_cap={ws.caps['weight_cap']}, arity_cap={ws.caps['arity_cap']}"


def render(ws: Workspace, results: list[Result], as_json: bool) -> str:
    if as_json:
        payload = {"caps": dict(sorted(ws.caps.items())),
                   "results": [{"command": r.command, "status": r.status, **r.data} for r in results]}
        return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False, default=_json_default) + "\n"
    lines = []
    for r in results:
        lines.extend(r.text)
    lines.append(_caps_line(ws))
    return "\n".join(lines) + "\n"


def _json_default(o):
    if isinstance(o, Fraction):
        return f"{o.numerator}/{o.denominator}" if o.denominator != 1 else str(o.numerator)
    raise TypeError(type(o).__name__)


# argument parsing

def _common(p: argparse.ArgumentParser, suppress: bool):
    d = argparse.SUPPRESS if suppress else None
    p.add_argument("--json", action="store_true", default=argparse.SUPPRESS if suppress else False,
                   help="machine-readable output")
    p.add_argument("--weight-cap", type=int, default=d, help="bracket weight cap (overrides the file)")
    p.add_argument("--arity-cap", type=int, default=d, help="L-infinity arity cap (overrides the file)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ratcoop", description="Exact rational homotopy cooperation toolkit")
    _common(parser, False)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_, file=True):
        p = sub.add_parser(name, help=help_)
        _common(p, True)
        if file:
            p.add_argument("file", help="workspace file ('-' for stdin)")
        return p

    p = add("check-jacobi", "verify the generalized Jacobi identities")
    p.add_argument("--algebra")
    p = add("invariants", "graded dimensions of invariants")
    p.add_argument("--group", required=True)
    p = add("homotopy-groups", "dimensions of pi_* of MC(L), optionally twisted")
    p.add_argument("--algebra")
    p.add_argument("--twist")
    p = add("hofixed", "invariant dimensions of A (x) L")
    p.add_argument("--cdga")
    p.add_argument("--algebra")
    p.add_argument("--degrees")
    p = add("browder", "Delta_2 and kappa values of a coalgebra datum")
    p.add_argument("--datum")
    p.add_argument("--element")
    p = add("obstruct", "suspension obstruction scan")
    p.add_argument("--datum")
    p.add_argument("--degrees", required=True)
    p.add_argument("--max-weight", type=int)
    add("run", "execute the job lines of a workspace")
    p = add("demo", "built-in worked examples", file=False)
    p.add_argument("name", choices=sorted(DEMOS))
    p.add_argument("--export", metavar="FILE", help="write the demo workspace to FILE")
    return parser


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def execute(args: argparse.Namespace) -> tuple[str, int]:
    if args.command == "demo":
        text = DEMOS[args.name]
        if args.export:
            Path(args.export).write_text(text, encoding="utf-8")
    else:
        text = _read(args.file)
    ws = parse_workspace(text, args.weight_cap, args.arity_cap)
    c = args.command
    if c in ("demo", "run"):
        results = run_jobs(ws)
    elif c == "check-jacobi":
        results = [cmd_check_jacobi(ws, args.algebra)]
    elif c == "invariants":
        results = [cmd_invariants(ws, args.group)]
    elif c == "homotopy-groups":
        results = [cmd_homotopy_groups(ws, args.algebra, args.twist)]
    elif c == "hofixed":
        results = [cmd_hofixed(ws, args.cdga, args.algebra, _range(args.degrees) if args.degrees else None)]
    elif c == "browder":
        results = [cmd_browder(ws, args.datum, args.element)]
    elif c == "obstruct":
        results = [cmd_obstruct(ws, _range(args.degrees), args.datum, args.max_weight)]
    else:  # pragma: no cover
        raise UsageError(c)
    status = max((r.status for r in results), default=0)
    return render(ws, results, args.json), status


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        out, status = execute(args)
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return 2
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (WorkspaceError, LieAlgebraError) as e:
        print(f"validation error: {e}", file=sys.stderr)
        return 1
    sys.stdout.write(out)
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
