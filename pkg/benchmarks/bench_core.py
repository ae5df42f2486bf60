"""Compiled versus pure-Python numeric kernels.

    python benchmarks/bench_core.py [--cells 4096] [--M 30] [--repeat 5]

Times ``log_sum`` (kernel of a many-cell step function) and ``series_coeffs``
(exponential-vector series) under both backends and checks they agree.
"""

import argparse
import timeit

import numpy as np

from swnfock import _pycore

try:
    from swnfock import _core
except ImportError:
    _core = None


def best(func, repeat):
    return min(timeit.repeat(func, number=1, repeat=repeat))


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--cells", type=int, default=4096)
    parser.add_argument("--M", type=int, default=30)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)

    rng = np.random.default_rng(0)
    w = 0.2 * rng.random(args.cells) * np.exp(2j * np.pi * rng.random(args.cells))
    vol = np.full(args.cells, 8.0 / args.cells)

    backends = {"python": _pycore}
    if _core is not None:
        backends["cython"] = _core
    else:
        print("compiled extension not built; timing the Python backend only")

    cases = {
        f"log_sum ({args.cells} cells)": lambda mod: mod.log_sum(w, vol),
        f"series_coeffs ({args.cells} cells, M={args.M})": lambda mod: mod.series_coeffs(w, vol, 1.0, args.M),
    }
    print(f"{'case':<36}{'backend':>8}{'best [ms]':>12}{'speedup':>10}")
    for label, case in cases.items():
        results = {name: case(mod) for name, mod in backends.items()}
        times = {name: best(lambda mod=mod: case(mod), args.repeat) for name, mod in backends.items()}
        for name, t in times.items():
            print(f"{label:<36}{name:>8}{1e3 * t:>12.3f}{times['python'] / t:>9.1f}x")
        if "cython" in results:
            a = np.atleast_1d(np.asarray(results["cython"], dtype=complex))
            b = np.atleast_1d(np.asarray(results["python"], dtype=complex))
            diff = float(np.max(np.abs(a - b) / np.maximum(np.abs(b), 1e-300)))
            print(f"{'':<36}{'max rel diff':>20} {diff:.1e}")


if __name__ == "__main__":
    main()
