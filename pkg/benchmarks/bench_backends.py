"""Compare the compiled and the pure-Python solver backends.

Each workload runs in a fresh interpreter with URSA_NUMBA set, once to warm
the compilation cache and then ``--repeat`` times; the best time is kept.

    python benchmarks/bench_backends.py [--repeat 3] [--quick]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
from pathlib import Path

CORPUS = Path(__file__).resolve().parent.parent / "corpus"

WORKER = r"""
import json, random, sys, time
from ursa.sat import BACKEND, Solver
from ursa.driver import run_text

kind, arg = sys.argv[1], sys.argv[2]
start = time.perf_counter()
if kind == "ursa":
    name, width = arg.split(":")
    session, _ = run_text(open(name).read(), int(width))
    detail = sum(r.count for r in session.reports)
else:
    rng = random.Random(1)
    nv = int(arg)
    detail = 0
    for _ in range(20):
        clauses = [[rng.choice((1, -1)) * v for v in rng.sample(range(1, nv + 1), 3)]
                   for _ in range(int(4.26 * nv))]
        detail += Solver(nv, clauses).solve()
print(json.dumps({"backend": BACKEND, "seconds": time.perf_counter() - start, "detail": detail}))
"""

WORKLOADS = [
    ("queens-1 N=8, all solutions", "ursa", f"{CORPUS / 'queens1.ursa'}:5"),
    ("tribonacci inversion", "ursa", f"{CORPUS / 'tribonacci.ursa'}:32"),
    ("random 3-SAT, 20 x 120 vars", "random", "120"),
]
QUICK = [WORKLOADS[1], ("random 3-SAT, 20 x 60 vars", "random", "60")]


def run(kind: str, arg: str, numba: bool) -> dict:
    env = dict(os.environ, URSA_NUMBA="1" if numba else "0")
    proc = subprocess.run([sys.executable, "-c", WORKER, kind, arg], env=env,
                          capture_output=True, text=True, check=True)
    return json.loads(proc.stdout.strip().splitlines()[-1])


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="smaller workloads")
    args = ap.parse_args()
    print(f"{'workload':32} {'numba':>9} {'python':>9} {'speedup':>8}")
    for label, kind, arg in QUICK if args.quick else WORKLOADS:
        best = {}
        for numba in (True, False):
            run(kind, arg, numba)  # warm-up (fills the numba cache)
            results = [run(kind, arg, numba) for _ in range(args.repeat)]
            assert len({r["detail"] for r in results}) == 1
            best[numba] = min(r["seconds"] for r in results)
            detail = results[0]["detail"]
        print(f"{label:32} {best[True]:8.2f}s {best[False]:8.2f}s {best[False] / best[True]:7.1f}x"
              f"   ({detail})")


if __name__ == "__main__":
    main()
