"""Compare the compiled kernels with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N] [--json]

Each row times one kernel call on both backends (best of N) and checks that
the two return the same result.
"""

import argparse
import json
import sys
import timeit

import numpy as np

from csckit import _kernels, quatrep
from csckit._kernels import python as py


def _gens(kind):
    r = quatrep.preset(kind)
    return [r.assignment[g].as_tuple() for g in r.presentation.generators]


def cases():
    taus = np.linspace(0.0, 100.0, 200_000)
    ico = _gens("icosahedral")
    return [
        ("hj_chain_counts(200)", lambda m: m.hj_chain_counts(200), None),
        ("hj_chain_counts_box(6, 8)", lambda m: m.hj_chain_counts_box(6, 8), None),
        ("quat_closure(icosahedral)", lambda m: m.quat_closure(ico, 1000, 1e-9), lambda a, b: np.allclose(a, b)),
        (
            "laurent_eval(3 terms, 2e5 points)",
            lambda m: m.laurent_eval([0.5, -0.25, 0.125], [1, -1, -2], 2.0, taus),
            lambda a, b: np.allclose(a, b, rtol=1e-13),
        ),
    ]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", action="store_true", help="emit machine-readable results")
    args = ap.parse_args(argv)

    if _kernels.compiled is None:
        print("compiled extension not built; nothing to compare", file=sys.stderr)
        return 1

    rows = []
    for name, call, same in cases():
        c_out, p_out = call(_kernels.compiled), call(py)
        agree = same(c_out, p_out) if same else c_out == p_out
        t_c = min(timeit.repeat(lambda: call(_kernels.compiled), number=1, repeat=args.repeat))
        t_p = min(timeit.repeat(lambda: call(py), number=1, repeat=args.repeat))
        rows.append({"kernel": name, "cython_s": t_c, "python_s": t_p, "speedup": t_p / t_c, "agree": bool(agree)})

    if args.json:
        print(json.dumps(rows, indent=2))
    else:
        print(f"{'kernel':36s} {'cython':>10s} {'python':>10s} {'speedup':>8s}  agree")
        for r in rows:
            print(
                f"{r['kernel']:36s} {r['cython_s'] * 1e3:8.2f}ms {r['python_s'] * 1e3:8.2f}ms"
                f" {r['speedup']:7.1f}x  {r['agree']}"
            )
    return 0 if all(r["agree"] for r in rows) else 2


if __name__ == "__main__":
    sys.exit(main())
