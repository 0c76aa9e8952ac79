"""Benchmark the numba kernels against the pure-numpy fallback.

Run:  python benchmarks/bench_backends.py [--repeats N]

The Dykstra feasibility loop dominates the cost of every tempered-negativity
solve, so that is where the backends differ most.
"""

import argparse
import time

import numpy as np

from pptq import _kernels_numpy

try:
    from pptq import _kernels_numba
    BACKENDS = {"numpy": _kernels_numpy, "numba": _kernels_numba}
except ImportError:
    print("numba not installed, benchmarking the numpy fallback only")
    BACKENDS = {"numpy": _kernels_numpy}


def make_state(d_a, d_b, seed):
    rng = np.random.default_rng(seed)
    n = d_a * d_b
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    m = g @ g.conj().T
    m /= np.real(np.trace(m))
    # blend in a maximally entangled component so the probe has work to do
    r = min(d_a, d_b)
    vec = np.zeros(n, dtype=np.complex128)
    for i in range(r):
        vec[i * d_b + i] = 1.0
    vec /= np.sqrt(r)
    return np.ascontiguousarray(0.5 * m + 0.5 * np.outer(vec, vec.conj()))


def bench_pt(kern, rho, d_a, d_b, repeats):
    kern.pt_matrix(rho, d_a, d_b)  # warm up / compile
    t0 = time.perf_counter()
    for _ in range(repeats):
        kern.pt_matrix(rho, d_a, d_b)
    return (time.perf_counter() - t0) / repeats


def bench_dykstra(kern, rho, d_a, d_b, t, iters, repeats):
    x0 = np.eye(rho.shape[0], dtype=np.complex128)
    kern.dykstra_diag(x0, rho, d_a, d_b, t, 10, 1e-8, 10, 30)  # warm up
    t0 = time.perf_counter()
    for _ in range(repeats):
        kern.dykstra_diag(x0, rho, d_a, d_b, t, iters, 0.0, 10, 10 ** 9)
    return (time.perf_counter() - t0) / repeats


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    cases = [(2, 2), (3, 3), (4, 4)]
    iters = 500

    print(f"{'kernel':<28}{'backend':<10}{'time':>12}")
    print("-" * 50)
    baselines = {}
    for d_a, d_b in cases:
        rho = make_state(d_a, d_b, 1)
        for name, kern in BACKENDS.items():
            dt = bench_pt(kern, rho, d_a, d_b, max(args.repeats * 200, 1000))
            label = f"pt {d_a}x{d_b}"
            extra = ""
            if name == "numpy":
                baselines[label] = dt
            elif label in baselines:
                extra = f"  ({baselines[label] / dt:.1f}x)"
            print(f"{label:<28}{name:<10}{dt * 1e6:>9.1f} us{extra}")

    for d_a, d_b in cases:
        rho = make_state(d_a, d_b, 1)
        t_probe = 1.05  # forces the loop to run the full budget
        for name, kern in BACKENDS.items():
            dt = bench_dykstra(kern, rho, d_a, d_b, t_probe, iters,
                               args.repeats)
            label = f"dykstra {iters}it {d_a}x{d_b}"
            extra = ""
            if name == "numpy":
                baselines[label] = dt
            elif label in baselines:
                extra = f"  ({baselines[label] / dt:.1f}x)"
            print(f"{label:<28}{name:<10}{dt * 1e3:>9.1f} ms{extra}")


if __name__ == "__main__":
    main()
