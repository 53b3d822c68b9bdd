"""Oracle-side operator evaluation.

Every operator id is evaluated from a table ``avg[k, x] = (sigma_k * f)(x)``
produced by the dense sphere-sum recursion.  Nothing here touches Krawtchouk
values or the radial fast path; Cesaro weights for integer orders come from
ordinary binomials, complex orders from log-gamma.
"""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
from scipy.special import gammaln, loggamma

from ..group_core import GroupFunction, GroupParams, sphere_averages_dense


def _local_ks(params: GroupParams):
    m, N = params.m, params.N
    return [k for k in range(N + 1) if (m + 1) * k <= m * N]


def _distant_offsets(params: GroupParams):
    m, N = params.m, params.N
    return [d for d in range(N + 1) if (m + 1) * d <= N]


def _abs(x: np.ndarray) -> np.ndarray:
    if x.dtype == object:
        return np.array([abs(v) for v in x], dtype=object)
    return np.abs(x)


def _pointwise_max(rows):
    out = rows[0]
    for r in rows[1:]:
        out = np.maximum(out, r) if out.dtype != object else np.array(
            [max(a, b) for a, b in zip(out, r)], dtype=object)
    return out


def cesaro_weight(lam, j: int):
    """A_j^lam, computed independently of the running-product form."""
    if isinstance(lam, (int, Fraction)) and Fraction(lam).denominator == 1 and lam < 0:
        t = -int(lam) - 1  # A_j^{-t-1} = (-1)^j C(t, j)
        return Fraction((-1) ** j * math.comb(t, j)) if j <= t else Fraction(0)
    if isinstance(lam, (int, Fraction)):
        out = Fraction(1)
        for i in range(1, j + 1):
            out *= (Fraction(lam) + i) / i
        return out
    lam = complex(lam)
    return complex(np.exp(loggamma(lam + j + 1) - loggamma(lam + 1) - gammaln(j + 1)))


def dense_sphere_table(f: GroupFunction) -> np.ndarray:
    return sphere_averages_dense(f)


def dense_operator(op_id: str, params: GroupParams, avg: np.ndarray) -> np.ndarray:
    """Apply ``op_id`` pointwise given ``avg[k] = sigma_k * f``.

    For exact tables the square functions are returned squared so they stay
    rational.
    """
    parts = op_id.split(":")
    name = parts[0]
    N = params.N
    exact = avg.dtype == object
    loc = _local_ks(params)
    dist = _distant_offsets(params)
    if name == "M":
        return _pointwise_max([_abs(avg[k]) for k in range(N + 1)])
    if name == "ML":
        return _pointwise_max([_abs(avg[k]) for k in loc])
    if name == "MD":
        return _pointwise_max([_abs(avg[N - d]) for d in dist])
    if name in ("MSL", "MSD"):
        seq = [avg[k] for k in loc] if name == "MSL" else [avg[N - d] for d in dist]
        rows = []
        running = seq[0] * 0
        for n, row in enumerate(seq):
            running = running + row
            rows.append(_abs(running * (Fraction(1, n + 1) if exact else 1.0 / (n + 1))))
        return _pointwise_max(rows)
    if name in ("Sstar", "Tstar"):
        alpha = Fraction(parts[1])
        beta = Fraction(parts[2]) if len(parts) == 3 else Fraction(0)
        seq = [avg[k] for k in loc] if name == "Sstar" else [avg[N - d] for d in dist]
        integer_order = beta == 0 and alpha.denominator == 1
        if integer_order:
            lam = alpha
        else:
            lam = complex(float(alpha), float(beta))
            seq = [np.asarray(s, dtype=np.complex128) for s in seq]
        rows = []
        for n in range(len(seq)):
            acc = seq[0] * 0
            for k in range(n + 1):
                wgt = cesaro_weight(lam, n - k)
                acc = acc + (wgt if exact or not integer_order else float(wgt)) * seq[k]
            if integer_order:
                scale = Fraction(n + 1) ** (int(lam) + 1)
                rows.append(_abs(acc / (scale if exact else float(scale))))
            else:
                scale = abs(complex(n + 1) ** (complex(lam) + 1))
                rows.append(np.abs(acc) / scale)
        return _pointwise_max(rows)
    if name in ("Rt", "RtD"):
        t = int(parts[1])
        seq = [avg[k] for k in loc] if name == "Rt" else [avg[N - d] for d in dist]
        total = seq[0] * 0
        for k in range(len(seq)):
            diff = seq[0] * 0
            for j in range(min(t, k) + 1):
                diff = diff + (-1) ** j * math.comb(t, j) * seq[k - j]
            w = (k + 1) ** (2 * t - 1)
            total = total + w * (diff * diff if exact else np.abs(diff) ** 2)
        return total if exact else np.sqrt(total)
    raise ValueError(f"unknown operator id {op_id!r}")
