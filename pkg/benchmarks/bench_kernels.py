"""Benchmark the compiled kernels against the pure-Python reference.

Runs the hot entry points on realistic sizes, checks that both backends
produce bit-identical outputs, and prints a timing table.

    python benchmarks/bench_kernels.py [--quick]
"""

import argparse
import time

import numpy as np

from symest._backend import available_backends
from symest.dynamics import iterate, simulate_symbolic
from symest.samplers import RngStream
from symest.symbolic import cells_from_bits, refine_cells


def timeit(fn, repeats=3):
    best = float("inf")
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def bench_case(name, runners, check=None):
    times = {}
    outputs = {}
    for backend, fn in runners.items():
        times[backend], outputs[backend] = timeit(fn)
    names = sorted(times)
    line = f"{name:34s}"
    for backend in names:
        line += f"  {backend}: {times[backend]*1e3:10.2f} ms"
    if len(names) == 2:
        line += f"  speedup: x{times['python'] / times['compiled']:.0f}"
        if check is not None:
            assert check(outputs["python"], outputs["compiled"]), \
                f"{name}: backends disagree"
            line += "  [outputs identical]"
    print(line)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--quick", action="store_true",
                        help="smaller sweep counts")
    args = parser.parse_args()
    backends = available_backends()
    print("backends:", ", ".join(sorted(backends)))
    if len(backends) < 2:
        print("note: compiled kernels unavailable; timing python only")

    n = 600
    sweeps = 500 if args.quick else 2000
    bits = simulate_symbolic(-1.71, 0.8, n)
    data = cells_from_bits(bits)
    lo, hi = data.support_arrays()
    bits_u8 = np.ascontiguousarray(bits, dtype=np.uint8)
    candidate = iterate(-1.71, 0.8, n).full() + 2e-4

    def profile_runner(kernels):
        def run():
            per = np.zeros(n + 1, dtype=np.int64)
            reps = 50 if args.quick else 200
            for _ in range(reps):
                total = kernels.strength_profile(-1.70995, candidate,
                                                 bits_u8, per)
            return total, per.copy()
        return run

    bench_case(f"strength_profile (n={n})",
               {b: profile_runner(k) for b, k in backends.items()},
               check=lambda a, c: a[0] == c[0] and np.array_equal(a[1], c[1]))

    def sweep_runner(kernels):
        def run():
            rng = RngStream(1, 0)
            y = (lo + 0.5 * (hi - lo)).copy()
            reps = 100 if args.quick else 400
            for _ in range(reps):
                kernels.gibbs_sweep(y, -1.71, 5e5, lo, hi, rng.generator)
            return y.copy()
        return run

    bench_case(f"gibbs_sweep (n={n})",
               {b: sweep_runner(k) for b, k in backends.items()},
               check=lambda a, c: np.array_equal(a, c))

    def chain_runner(kernels):
        def run():
            rng = RngStream(2, 0)
            y = (lo + 0.5 * (hi - lo)).copy()
            sums = np.zeros_like(y)
            return kernels.run_strength_chain(
                -1.70995, 5e5, bits_u8, lo, hi, y, sums,
                sweeps // 5, sweeps, 1, rng.generator, False)
        return run

    bench_case(f"run_strength_chain ({sweeps} sweeps)",
               {b: chain_runner(k) for b, k in backends.items()},
               check=lambda a, c: a[0] == c[0] and np.array_equal(a[2], c[2]))

    sites = 200
    orbit = iterate(-1.71, 0.8, sites).full()
    pcells = refine_cells(orbit, 5e-5, data)
    plo, phi = pcells.support_arrays()
    psweeps = 1000 if args.quick else 5000

    def polish_runner(kernels):
        def run():
            rng = RngStream(3, 0)
            y = orbit.copy()
            return kernels.run_polish(y, -1.70995, 0.5e16, 1e-8, plo, phi,
                                      -1.71132, -1.70859, psweeps,
                                      psweeps // 10, 100, rng.generator)
        return run

    bench_case(f"run_polish ({sites} sites, {psweeps} sweeps)",
               {b: polish_runner(k) for b, k in backends.items()},
               check=lambda a, c: a[0] == c[0] and a[1] == c[1]
               and np.array_equal(a[2], c[2]))


if __name__ == "__main__":
    main()
