"""Compare the compiled and pure-Python word kernels.

    python benchmarks/bench_kernels.py [--preset ra3] [--length 8] [--radius 5]
"""

from __future__ import annotations

import argparse
import itertools
import time

from coxrep import _slow
from coxrep.geometry import build_form
from coxrep.presets import load_preset

try:
    from coxrep import _fast
except ImportError:
    _fast = None


def _time(fn, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--preset", default="ra3")
    ap.add_argument("--length", type=int, default=8, help="reduce every word of this length")
    ap.add_argument("--radius", type=int, default=5, help="ball used for the lengths matrix")
    args = ap.parse_args()

    p = load_preset(args.preset)
    g = p.group()
    b = build_form(p.matrix).b
    words = list(itertools.product(range(p.matrix.rank), repeat=args.length))
    ball = [x.word for x in g.enumerate_ball(args.radius).elements]
    tol = 1e-9

    impls = {"python": _slow}
    if _fast is not None:
        impls["cython"] = _fast
    else:
        print("compiled extension not built; timing the fallback only")

    print(f"preset {args.preset}: {len(words)} words of length {args.length}, ball of {len(ball)} elements")
    print(f"{'kernel':<16}{'backend':<10}{'seconds':>10}")
    timings = {}
    for name, mod in impls.items():
        nf = _time(lambda: [mod.normal_form(w, b, tol) for w in words])
        lm = _time(lambda: mod.lengths_matrix(ball, b, tol), repeat=1)
        timings[name] = (nf, lm)
        print(f"{'normal_form':<16}{name:<10}{nf:>10.4f}")
        print(f"{'lengths_matrix':<16}{name:<10}{lm:>10.4f}")
    if len(timings) == 2:
        (pn, pl), (cn, cl) = timings["python"], timings["cython"]
        print(f"speed-up: normal_form x{pn / cn:.1f}, lengths_matrix x{pl / cl:.1f}")


if __name__ == "__main__":
    main()
