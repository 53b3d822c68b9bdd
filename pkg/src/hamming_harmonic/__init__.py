"""Radial harmonic analysis on Z_{m+1}^N with the Hamming metric.

Subpackages: ``group_core`` (dense reference objects), ``krawtchouk``
(exact and float Krawtchouk values), ``radial_ops`` (radial fast paths for
sphere averages, Cesaro means and maximal operators), ``bounds_lab``
(numerical certificates) and ``cli``.
"""
try:
    from importlib.metadata import version as _version

    __version__ = _version("artifact")
except Exception:  # running from a source tree without installation
    __version__ = "0+unknown"
