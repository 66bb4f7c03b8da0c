"""Compare the compiled and pure-Python Close-by-One kernels.

    python benchmarks/bench_cbo.py [--repeat 3] [--threads 1]

Both backends are run on the same random interval and attribute-set
structures; the outputs are checked to be identical before timing is
reported.
"""

import argparse
import statistics
import time

from patproj.cbo import BACKEND, close_by_one
from patproj.oracle import random_instance

CASES = [
    ("intervals", dict(objects=40, arity=3, values=6)),
    ("intervals", dict(objects=80, arity=4, values=5)),
    ("sets", dict(objects=60, attributes=12, density=0.5)),
    ("sets", dict(objects=150, attributes=16, density=0.4)),
]


def timed(ps, backend, threads, repeat):
    runs = []
    result = None
    for _ in range(repeat):
        t = time.perf_counter()
        result = close_by_one(ps, threads=threads, backend=backend)
        runs.append(time.perf_counter() - t)
    return statistics.median(runs), result


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    if BACKEND != "native":
        print("compiled kernels not built; only the python backend is available")
    header = f"{'case':<42} {'concepts':>9} {'python s':>10} {'native s':>10} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for kind, params in CASES:
        ps = random_instance(args.seed, kind, **params)
        label = kind + " " + " ".join(f"{k}={v}" for k, v in params.items())
        py_t, py_res = timed(ps, "python", args.threads, args.repeat)
        if BACKEND == "native":
            nat_t, nat_res = timed(ps, "native", args.threads, args.repeat)
            same = [(c.extent, c.intent) for c in nat_res] == [(c.extent, c.intent) for c in py_res]
            if not same:
                raise SystemExit(f"backends disagree on {label}")
            print(f"{label:<42} {len(py_res):>9} {py_t:>10.4f} {nat_t:>10.4f} {py_t / nat_t:>7.1f}x")
        else:
            print(f"{label:<42} {len(py_res):>9} {py_t:>10.4f} {'-':>10} {'-':>8}")


if __name__ == "__main__":
    main()
