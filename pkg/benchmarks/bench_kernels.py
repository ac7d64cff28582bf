#!/usr/bin/env python3
"""Benchmark the compiled elimination kernels against the pure-Python twin.

Microbenchmarks time rref and matmul on random matrices mod 32003; the
end-to-end benchmark classifies the five-vertex staircase example through
both backends in subprocesses (the backend is chosen at import time).

Usage:
    python3 benchmarks/bench_kernels.py [--sizes 40 80 160] [--repeat 3]
    python3 benchmarks/bench_kernels.py --end-to-end
"""

import argparse
import os
import random
import subprocess
import sys
import time
from array import array

from koszulity import _kernels_py

try:
    from koszulity import _kernels
except ImportError:
    _kernels = None

P = 32003

EXAMPLE = """\
field 32003
vertices 1 2 3 4 5
arrow a1 : 1 -> 2
arrow a2 : 2 -> 3
arrow a3 : 2 -> 3
arrow a4 : 3 -> 4
arrow a5 : 3 -> 4
arrow a6 : 3 -> 4
arrow a7 : 4 -> 5
relation a1*a2 - a1*a3
relation a4*a7 - a5*a7
relation a5*a7 - a6*a7
relation a2*a4
relation a3*a6
"""


def random_flat(rng, n):
    return array("q", (rng.randrange(P) for _ in range(n)))


def time_call(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_micro(sizes, repeat):
    backends = [("python", _kernels_py)]
    if _kernels is not None:
        backends.append(("compiled", _kernels))
    rng = random.Random(0)
    print(f"{'kernel':<10} {'size':>6} " + " ".join(f"{name:>12}" for name, _ in backends) + f" {'speedup':>9}")
    for n in sizes:
        base = random_flat(rng, n * n)
        times = {}
        for name, impl in backends:
            def run_rref(impl=impl):
                buf = array("q", base)
                impl.rref_inplace(buf, n, n, P)

            times[name] = time_call(run_rref, repeat)
        speed = times["python"] / times.get("compiled", times["python"])
        print(f"{'rref':<10} {n:>4}x{n:<3} " + " ".join(f"{times[name] * 1e3:>10.2f}ms" for name, _ in backends) + f" {speed:>8.1f}x")
        a = random_flat(rng, n * n)
        b = random_flat(rng, n * n)
        for name, impl in backends:
            def run_mm(impl=impl):
                out = array("q", bytes(8 * n * n))
                impl.matmul_mod(out, a, b, n, n, n, P)

            times[name] = time_call(run_mm, repeat)
        speed = times["python"] / times.get("compiled", times["python"])
        print(f"{'matmul':<10} {n:>4}x{n:<3} " + " ".join(f"{times[name] * 1e3:>10.2f}ms" for name, _ in backends) + f" {speed:>8.1f}x")


def bench_end_to_end(repeat):
    import tempfile

    with tempfile.NamedTemporaryFile("w", suffix=".txt", delete=False) as handle:
        handle.write(EXAMPLE)
        path = handle.name
    try:
        for backend in ("python", "compiled"):
            if backend == "compiled" and _kernels is None:
                print("compiled backend unavailable (extension not built)")
                continue
            env = dict(os.environ, KOSZULITY_BACKEND=backend)
            cmd = [sys.executable, "-m", "koszulity.cli", "classify", path,
                   "--max-hdeg", "10", "--max-ideg", "20", "--format", "json"]
            best = float("inf")
            for _ in range(repeat):
                t0 = time.perf_counter()
                subprocess.run(cmd, env=env, check=True, capture_output=True)
                best = min(best, time.perf_counter() - t0)
            print(f"classify example ({backend:>8}): {best * 1e3:8.1f} ms (incl. interpreter start)")
    finally:
        os.unlink(path)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", type=int, nargs="+", default=[40, 80, 160])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--end-to-end", action="store_true")
    args = parser.parse_args()
    if args.end_to_end:
        bench_end_to_end(args.repeat)
    else:
        bench_micro(args.sizes, args.repeat)


if __name__ == "__main__":
    main()
