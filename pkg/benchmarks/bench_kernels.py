"""Compare the compiled and pure-Python tree kernels.

    python benchmarks/bench_kernels.py [--heights 4 5 6 7] [--repeat 3]

Each row is the best of ``--repeat`` runs on a seeded pseudo-generic tree
with doubling level widths.  Both backends must return identical results;
the script exits non-zero if they do not.
"""
import argparse
import sys
import timeit

import numpy as np

from suslinbench import _kernels_py
from suslinbench.leveled_tree import build_pseudo_generic

try:
    from suslinbench import _kernels as compiled
except ImportError:
    compiled = None


def cases(tree):
    level, parent, rank, _ = tree.arrays
    anc = _kernels_py.ancestor_table(level, parent, tree.height)
    cmp = _kernels_py.lex_matrix(level, rank, anc)
    limit = 10**9
    return {
        "ancestor_table": lambda k: k.ancestor_table(level, parent, tree.height),
        "lex_matrix": lambda k: k.lex_matrix(level, rank, anc),
        "order_violations": lambda k: k.order_violations(cmp, limit),
        "meet_violations": lambda k: k.meet_violations(cmp, level, anc, limit),
    }


def same(a, b):
    if isinstance(a, np.ndarray):
        return np.array_equal(a, b)
    return [tuple(v) for v in a] == [tuple(v) for v in b]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--heights", type=int, nargs="+", default=[4, 5, 6, 7])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    if compiled is None:
        print("compiled kernels are not built; only the Python backend is timed")
    backends = [("python", _kernels_py)] + ([("cython", compiled)] if compiled else [])
    print(f"{'height':>6} {'nodes':>6} {'kernel':<17}" + "".join(f"{name + ' ms':>12}" for name, _ in backends)
          + (f"{'speedup':>9}" if compiled else ""))
    mismatches = 0
    for h in args.heights:
        tree = build_pseudo_generic(h, seed=args.seed)
        for name, fn in cases(tree).items():
            results = [fn(mod) for _, mod in backends]
            if len(results) == 2 and not same(*results):
                mismatches += 1
            times = [min(timeit.repeat(lambda: fn(mod), number=1, repeat=args.repeat)) * 1e3
                     for _, mod in backends]
            row = f"{h:>6} {len(tree):>6} {name:<17}" + "".join(f"{t:>12.3f}" for t in times)
            if len(times) == 2:
                row += f"{times[0] / max(times[1], 1e-9):>8.1f}x"
            print(row)
    if mismatches:
        print(f"{mismatches} kernel results differ between backends")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
