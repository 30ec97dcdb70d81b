"""Exhaustive single-entry mutation sweep of the generalized Jacobi checker.

For every free graded Lie algebra on 1-3 generators of degrees 0..4, truncated
at weight 4, every structure constant of l_2 with a degree-compatible output
is raised by one. A mutant the checker accepts is handed to an independent
DGL-axiom oracle; the sweep fails if the oracle finds a violation the checker
missed. By default each mutant is re-checked only on the tuples the edited
entry can reach (about 15 s); ``--full`` reruns every identity (a few minutes).

    python3 scripts/mutation_sweep.py [--max-generators 3] [--weight 4] [--full]
"""

import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

from sweeps import mutation_sweep  # noqa: E402


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-generators", type=int, default=3)
    ap.add_argument("--weight", type=int, default=4)
    ap.add_argument("--full", action="store_true", help="re-run every identity on every mutant")
    args = ap.parse_args()
    t0 = time.time()
    s = mutation_sweep(args.max_generators, args.weight, full=args.full)
    print(f"algebras {s['algebras']} (failing {len(s['failed_algebras'])}), mutants {s['mutants']}, "
          f"caught {s['caught']}, accepted and valid per oracle {s['valid']}, missed {len(s['missed'])} "
          f"({time.time() - t0:.1f} s)")
    for m in s["missed"][:20]:
        print("  missed:", m)
    return 1 if s["missed"] or s["failed_algebras"] else 0


if __name__ == "__main__":
    sys.exit(main())
