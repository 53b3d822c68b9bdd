import os
import subprocess
import sys

import numpy as np
import pytest

from hamming_harmonic import kernels
from hamming_harmonic.kernels import compiled_backend, python_backend

needs_compiled = pytest.mark.skipif(compiled_backend is None, reason="extension not built")


@needs_compiled
@pytest.mark.parametrize("m,N", [(1, 1), (1, 12), (2, 40), (4, 9), (7, 30)])
def test_sphere_family_parity(m, N):
    f = np.random.default_rng(N).random(N + 1)
    a = python_backend.sphere_family(m, N, f)
    b = compiled_backend.sphere_family(m, N, f)
    assert np.max(np.abs(a - b)) < 1e-12


@needs_compiled
@pytest.mark.parametrize("m,N", [(1, 5), (2, 64), (3, 128)])
def test_kraw_table_parity(m, N):
    va, ea = python_backend.kraw_float_table(m, N)
    vb, eb = compiled_backend.kraw_float_table(m, N)
    assert np.max(np.abs(va - vb)) < 1e-12
    v1, _ = python_backend.kraw_float_entry(m, N, N // 2, N // 3)
    v2, _ = compiled_backend.kraw_float_entry(m, N, N // 2, N // 3)
    assert abs(v1 - v2) < 1e-12


@needs_compiled
def test_transition_rows_parity():
    ks = np.array([0, 3, 10, 7, 1, 0, 2, 9, 4, 5, 6], dtype=np.int64)
    a = python_backend.transition_rows(2, 10, ks)
    b = compiled_backend.transition_rows(2, 10, ks)
    assert np.max(np.abs(a - b)) < 1e-12
    assert np.allclose(b.sum(axis=1), 1.0)


@needs_compiled
def test_dense_convolve_parity():
    rng = np.random.default_rng(0)
    q, N = 3, 4
    f = rng.random(q**N) + 1j * rng.random(q**N)
    g = rng.random(q**N) + 0j
    a = python_backend.dense_convolve(f, g, q, N)
    b = compiled_backend.dense_convolve(f, g, q, N)
    assert np.max(np.abs(a - b)) < 1e-12


def test_pure_fallback_selected_by_env():
    env = dict(os.environ, HAMMING_HARMONIC_PURE="1")
    out = subprocess.run([sys.executable, "-c", "from hamming_harmonic import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_active_backend_reported():
    assert kernels.BACKEND in ("cython", "python")
    if compiled_backend is not None and not os.environ.get("HAMMING_HARMONIC_PURE"):
        assert kernels.BACKEND == "cython"
