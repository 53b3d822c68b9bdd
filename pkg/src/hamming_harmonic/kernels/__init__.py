"""Hot kernels: compiled Cython core with a pure numpy fallback.

The compiled module is used when it imports; set ``HAMMING_HARMONIC_PURE=1``
to force the fallback.  ``BACKEND`` names the active implementation.
"""
import os

from . import _pykernels as python_backend

compiled_backend = None
if not os.environ.get("HAMMING_HARMONIC_PURE"):
    try:
        from . import _ckernels as compiled_backend
    except ImportError:  # extension not built
        compiled_backend = None

_active = compiled_backend if compiled_backend is not None else python_backend
BACKEND = "cython" if compiled_backend is not None else "python"

dense_convolve = _active.dense_convolve
kraw_float_entry = _active.kraw_float_entry
kraw_float_table = _active.kraw_float_table
sphere_family = _active.sphere_family
transition_rows = _active.transition_rows

__all__ = [
    "BACKEND",
    "compiled_backend",
    "python_backend",
    "dense_convolve",
    "kraw_float_entry",
    "kraw_float_table",
    "sphere_family",
    "transition_rows",
]
