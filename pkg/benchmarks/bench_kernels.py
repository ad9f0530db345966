"""Benchmark the statevector kernels: numba-jitted vs pure numpy.

Usage: python benchmarks/bench_kernels.py [--qubits N] [--repeats K]

Prints per-kernel timings for both backends and the speedup.  The jitted
functions are warmed up first so compilation is not measured.
"""

import argparse
import time

import numpy as np

from lcplearn import kernels


def random_state(num_qubits, seed=0):
    rng = np.random.default_rng(seed)
    amps = rng.normal(size=1 << num_qubits) + 1j * rng.normal(size=1 << num_qubits)
    return (amps / np.linalg.norm(amps)).astype(np.complex128)


def time_kernel(fn, args_factory, repeats):
    best = float("inf")
    for _ in range(repeats):
        args = args_factory()
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--qubits", type=int, default=20)
    parser.add_argument("--repeats", type=int, default=7)
    args = parser.parse_args()

    if not kernels.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")

    m = args.qubits
    rng = np.random.default_rng(1)
    u2, _ = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
    u4, _ = np.linalg.qr(rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)))
    signs = rng.choice([-1.0, 1.0], size=1 << m)
    base = random_state(m)

    cases = [
        ("single-qubit", kernels.apply_single_numpy, kernels.apply_single_numba,
         lambda: (base.copy(), m // 2, u2)),
        ("two-qubit", kernels.apply_two_numpy, kernels.apply_two_numba,
         lambda: (base.copy(), m - 1, m // 2, u4)),
        ("sign-diagonal", kernels.apply_signs_numpy, kernels.apply_signs_numba,
         lambda: (base.copy(), signs)),
    ]

    # warm up the jitted versions outside the timed region
    for _, _, jitted, factory in cases:
        jitted(*factory())

    print(f"statevector kernels, {m} qubits ({1 << m} amplitudes), best of {args.repeats}")
    print(f"{'kernel':<16}{'numpy':>12}{'numba':>12}{'speedup':>10}")
    for name, plain, jitted, factory in cases:
        t_numpy = time_kernel(plain, factory, args.repeats)
        t_numba = time_kernel(jitted, factory, args.repeats)
        print(f"{name:<16}{t_numpy * 1e3:>10.2f}ms{t_numba * 1e3:>10.2f}ms{t_numpy / t_numba:>9.1f}x")


if __name__ == "__main__":
    main()
