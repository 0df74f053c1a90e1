"""Compare the compiled and pure-Python dancing-links kernels.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--json out.json]
"""

import argparse
import json
import time

from reptile.exact_cover import KERNELS, count_cached, enumerate_all, solve_first
from reptile.grid import SHAPES
from reptile.placements import build_instance

CASES = [
    ("count", "domino", 4),
    ("count", "domino", 5),
    ("count", "J", 6),
    ("solve", "stair", 5),
    ("solve", "J", 4),
    ("solve", "F", 8),
    ("solve", "J", 12),
]


def run_case(kind, name, k, kernel):
    inst = build_instance(SHAPES[name], k)
    t0 = time.perf_counter()
    if kind == "count":
        result = enumerate_all(inst, kernel=kernel)
    else:
        result = solve_first(inst, kernel=kernel).status.value
    return result, time.perf_counter() - t0


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=1)
    ap.add_argument("--json", help="write the timing table here")
    ap.add_argument("--quick", action="store_true", help="only the first three cases")
    args = ap.parse_args(argv)

    kernels = sorted(KERNELS)
    rows = []
    print(f"{'case':18} " + " ".join(f"{k:>10}" for k in kernels) + "   speedup  result")
    for kind, name, k in CASES[:3] if args.quick else CASES:
        times = {}
        results = set()
        for kern in kernels:
            best = None
            for _ in range(args.repeat):
                res, dt = run_case(kind, name, k, kern)
                results.add(res)
                best = dt if best is None else min(best, dt)
            times[kern] = best
        if len(results) != 1:
            raise SystemExit(f"kernels disagree on {kind} {name} k={k}: {results}")
        speed = times["python"] / times["cython"] if "cython" in times else 1.0
        label = f"{kind} {name} k={k}"
        print(f"{label:18} " + " ".join(f"{times[k]:10.3f}" for k in kernels)
              + f"   {speed:6.1f}x  {results.pop()}")
        rows.append({"case": label, "seconds": times, "speedup": speed})
    inst = build_instance(SHAPES["J"], 6)
    t0 = time.perf_counter()
    n = count_cached(inst)
    print(f"{'cached J k=6':18} {time.perf_counter() - t0:10.3f}   (pure Python memo counter) {n}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=1)


if __name__ == "__main__":
    main()
