"""Invariant dimensions of H^*(S^{n-1}) (x) (L * L) under Sigma_2 for L = L(u, v).

For each n prints the table next to an independent Reynolds-projector rank
computed with sympy on tensor words.

    python3 scripts/hofixed_table.py [--n 3] [--max-degree 12] [--degrees 4 6]
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

from oracles import reynolds_rank_oracle  # noqa: E402
from ratcoop.browder import target_model  # noqa: E402
from ratcoop.freelie import FreeGradedLie  # noqa: E402
from ratcoop.mapmodel import hofixed_homotopy_groups, subscript  # noqa: E402


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[3])
    ap.add_argument("--max-degree", type=int, default=12)
    ap.add_argument("--degrees", type=int, nargs=2, default=[4, 6], metavar=("DEG_U", "DEG_V"))
    args = ap.parse_args()
    du, dv = args.degrees
    if (du, dv) != (4, 6):
        print("note: the Reynolds oracle is wired for |u| = 4, |v| = 6; skipping the comparison")
    bad = 0
    for n in args.n:
        cap = max(1, (args.max_degree + n - 1) // min(du, dv))
        L = FreeGradedLie.on({"u": du, "v": dv}, cap)
        T = target_model(n, L)
        rep = hofixed_homotopy_groups(T.A, T.L, T.l_action, (0, args.max_degree))
        oracle = reynolds_rank_oracle(n, cap, range(0, args.max_degree + 1)) if (du, dv) == (4, 6) else None
        print(f"== n = {n}, weight cap {cap}, complete: {rep.complete}")
        for d in range(0, args.max_degree + 1):
            got = rep.dims.get(d, 0)
            want = oracle.get(d, 0) if oracle is not None else None
            if not got and not want:
                continue
            flag = "" if want is None or want == got else "  MISMATCH"
            bad += bool(flag)
            basis = ", ".join(subscript(b) for b in rep.bases.get(d, [])[:3])
            print(f"  degree {d:3d}: {got:3d}  oracle {want}{flag}   [{basis}{', ...' if got > 3 else ''}]")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
