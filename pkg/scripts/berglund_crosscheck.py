"""pi_0 and pi_1 of MC(L (x) Omega_n) by direct computation vs H_{-1}, H_0 of L.

Random abelian DGLs of dimension <= 8; the forms oracle solves the linear MC
equation on simplices of dimension <= 2 and reads pi_0, pi_1 off the Moore
complex.

    python3 scripts/berglund_crosscheck.py [--samples 50] [--max-dim 8] [--seed 0]
"""

import argparse
import random
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

from factories import random_abelian_dgl  # noqa: E402
from ratcoop.forms_oracle import stable_abelian_mc_homotopy  # noqa: E402
from ratcoop.linfty import mc_homotopy_groups  # noqa: E402


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=50)
    ap.add_argument("--max-dim", type=int, default=8)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    bad = 0
    for i in range(args.samples):
        L = random_abelian_dgl(random.Random(args.seed + i), max_dim=args.max_dim)
        r = stable_abelian_mc_homotopy(L)
        h = mc_homotopy_groups(L).homology
        want = (h.get(-1, 0), h.get(0, 0))
        ok = (r.pi0, r.pi1) == want
        bad += not ok
        print(f"seed {args.seed + i:4d}  dim {len(L)}  degrees {list(L.degrees)}  "
              f"forms (pi0, pi1) = ({r.pi0}, {r.pi1}) at cap {r.cap}  homology {want}  {'ok' if ok else 'MISMATCH'}")
    print(f"{args.samples - bad}/{args.samples} agree")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
