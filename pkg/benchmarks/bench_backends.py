"""Time the numba and numpy kernels on spectrum enumeration and axiom checks.

    python benchmarks/bench_backends.py [--repeat 3]
"""
import argparse
import time

from predual import kernels
from predual.axioms import AXIOMS, find_violation
from predual.catalog import boolean, chain
from predual.exemplars import gen_structure
from predual.spectrum import enumerate_spectrum


def workloads():
    big = [gen_structure(n, seed, prec="transitive") for n in (16, 18, 20) for seed in range(3)]
    small = [gen_structure(7, seed, prec="arbitrary") for seed in range(300)]
    fixed = [chain(20), boolean(4)]

    def spectra(structures):
        return lambda: [enumerate_spectrum(S) for S in structures]

    def axioms(structures):
        return lambda: [find_violation(S, name) for S in structures for name in AXIOMS]

    return {
        "spectrum, n in 16..20": spectra(big + fixed),
        "spectrum, 300 x n=7": spectra(small),
        "axioms, n in 16..20": axioms(big + fixed),
        "axioms, 300 x n=7": axioms(small),
    }


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    backends = [b for b in kernels.BACKENDS if b != "numba" or kernels.HAVE_NUMBA]
    if len(backends) < len(kernels.BACKENDS):
        print("numba not importable; timing numpy only")
    jobs = workloads()
    times = {}
    for backend in backends:
        with kernels.use_backend(backend):
            for name, fn in jobs.items():
                fn()  # compile / warm caches
                times[backend, name] = best_of(fn, args.repeat)
    width = max(map(len, jobs))
    print(f"{'workload':<{width}}  " + "  ".join(f"{b:>9}" for b in backends) + ("    speedup" if len(backends) == 2 else ""))
    for name in jobs:
        row = [times[b, name] for b in backends]
        line = f"{name:<{width}}  " + "  ".join(f"{t * 1e3:7.1f}ms" for t in row)
        if len(row) == 2:
            line += f"  {row[1] / row[0]:8.1f}x"
        print(line)


if __name__ == "__main__":
    main()
