"""Timing of the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Each kernel is run on both backends with identical inputs; the table shows
the best-of-repeat wall time and the max deviation between the two outputs.
"""
import argparse
import timeit

import numpy as np

from hamming_harmonic.kernels import compiled_backend, python_backend


def cases(rng):
    f = rng.random(257)
    ks = rng.integers(0, 257, 257).astype(np.int64)
    q, N = 3, 8
    a = (rng.random(q**N) + 1j * rng.random(q**N)).astype(np.complex128)
    b = (rng.random(q**N) + 1j * rng.random(q**N)).astype(np.complex128)
    yield "sphere_family m=2 N=256", "sphere_family", (2, 256, f)
    yield "sphere_family m=4 N=64", "sphere_family", (4, 64, f[:65].copy())
    yield "kraw_float_table m=3 N=256", "kraw_float_table", (3, 256)
    yield "transition_rows m=2 N=256", "transition_rows", (2, 256, ks)
    yield "dense_convolve q=3 N=8", "dense_convolve", (a, b, q, N)


def _first(out):
    return out[0] if isinstance(out, tuple) else out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if compiled_backend is None:
        print("compiled backend not built; run: python3 setup.py build_ext --inplace")
        return 1
    rng = np.random.default_rng(0)
    print(f"{'kernel':32s} {'python (ms)':>12s} {'cython (ms)':>12s} {'speedup':>8s} {'max dev':>10s}")
    for label, name, inputs in cases(rng):
        py_fn, c_fn = getattr(python_backend, name), getattr(compiled_backend, name)
        t_py = min(timeit.repeat(lambda: py_fn(*inputs), number=1, repeat=args.repeat))
        t_c = min(timeit.repeat(lambda: c_fn(*inputs), number=1, repeat=args.repeat))
        dev = float(np.max(np.abs(np.asarray(_first(py_fn(*inputs))) - np.asarray(_first(c_fn(*inputs))))))
        print(f"{label:32s} {1e3 * t_py:12.3f} {1e3 * t_c:12.3f} {t_py / t_c:8.2f} {dev:10.2e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
