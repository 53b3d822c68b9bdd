"""Pure numpy implementations of the hot kernels.

These are the reference fallbacks for ``_ckernels``; both modules expose the
same four functions with the same signatures.
"""
import math

import numpy as np
from scipy.special import gammaln

EPS = np.finfo(float).eps


def dense_convolve(f, g, q, N):
    """out[x] = sum_y f[x - y] g[y] over Z_q^N, complex128 in and out."""
    size = q**N
    idx = np.arange(size, dtype=np.int64)
    digits = np.empty((size, N), dtype=np.int64)
    for i in range(N):
        idx, digits[:, i] = np.divmod(idx, q)
    powers = q ** np.arange(N, dtype=np.int64)
    out = np.zeros(size, dtype=np.complex128)
    for y in np.flatnonzero(g):
        shifted = ((digits - digits[y]) % q) @ powers
        out += f[shifted] * g[y]
    return out


def _ratio(j, r, k, m, N):
    return (r - j) * (k - j) / (m * (j + 1.0) * (j + 1.0 + N - r - k))


def kraw_float_entry(m, N, k, r):
    """(value, error_estimate) of the normalized Krawtchouk value kappa_k(r).

    Summands are scaled by the dominant magnitude a_n so every scaled term
    lies in [0, 1]; the alternating sum of those is taken with fsum.
    """
    if r > k:
        r, k = k, r
    lo = max(0, r + k - N)
    hi = r
    n = lo
    while n < hi and _ratio(n, r, k, m, N) > 1.0:
        n += 1
    terms = {n: 1.0}
    t = 1.0
    for j in range(n, hi):
        t *= _ratio(j, r, k, m, N)
        terms[j + 1] = t
    t = 1.0
    for j in range(n - 1, lo - 1, -1):
        t /= _ratio(j, r, k, m, N)
        terms[j] = t
    lg = (
        math.lgamma(r + 1) - math.lgamma(n + 1) - math.lgamma(r - n + 1)
        + math.lgamma(N - r + 1) - math.lgamma(k - n + 1) - math.lgamma(N - r - k + n + 1)
        - math.lgamma(N + 1) + math.lgamma(k + 1) + math.lgamma(N - k + 1)
    )
    a_n = math.exp(lg - n * math.log(m))
    s = math.fsum(((-1) ** (j - n)) * tj for j, tj in terms.items())
    value = ((-1) ** n) * a_n * s
    spread = sum(tj * (abs(j - n) + 1) for j, tj in terms.items())
    lg_mag = 4 * (math.lgamma(N + 1) + n * math.log(m) + 1.0)
    err = 4 * EPS * a_n * spread + abs(value) * lg_mag * EPS
    return value, err


def kraw_float_table(m, N):
    """(values, errors): (N+1, N+1) arrays with entry [r, k] = kappa_k(r)."""
    vals = np.empty((N + 1, N + 1))
    errs = np.empty((N + 1, N + 1))
    for r in range(N + 1):
        for k in range(r, N + 1):
            v, e = kraw_float_entry(m, N, k, r)
            vals[r, k] = vals[k, r] = v
            errs[r, k] = errs[k, r] = e
    return vals, errs


def _binomial_smoothing(m, N, f):
    """G[h, u] = sum_i Bin(i; h, 1/m) f[u - i] for u = 0..N."""
    p = 1.0 / m
    G = np.zeros((N + 1, N + 1))
    G[0] = f
    for h in range(N):
        G[h + 1] = (1.0 - p) * G[h]
        G[h + 1, 1:] += p * G[h, :-1]
    return G


def _log_comb(a, b):
    return gammaln(a + 1.0) - gammaln(b + 1.0) - gammaln(a - b + 1.0)


def _hyp_block(N, k):
    """(N+1, N+1) array H[s, h] = P(overlap h | |x| = s, |y| = k)."""
    s = np.arange(N + 1)[:, None].astype(float)
    h = np.arange(N + 1)[None, :].astype(float)
    valid = (h <= s) & (h <= k) & (h >= s + k - N)
    with np.errstate(invalid="ignore"):
        lg = _log_comb(s, h) + _log_comb(N - s, k - h) - _log_comb(float(N), float(k))
    return np.where(valid, np.exp(np.where(valid, lg, 0.0)), 0.0)


def sphere_family(m, N, f):
    """out[k, s] = (sigma_k * f)(x) for |x| = s, f a real radial profile.

    For |x| = s and y uniform on the k-sphere the overlap of supports is
    hypergeometric and each overlapping coordinate cancels with probability
    1/m, so every weight is a nonnegative probability.
    """
    f = np.asarray(f, dtype=float)
    G = _binomial_smoothing(m, N, f)
    out = np.zeros((N + 1, N + 1))
    s = np.arange(N + 1)[:, None]
    h = np.arange(N + 1)[None, :]
    for k in range(N + 1):
        H = _hyp_block(N, k)
        u = np.clip(s + k - h, 0, N)
        out[k] = np.sum(H * G[h, u], axis=1)
    return out


def _binomial_table(m, N):
    p = 1.0 / m
    B = np.zeros((N + 1, N + 1))
    B[0, 0] = 1.0
    for h in range(N):
        B[h + 1] = (1.0 - p) * B[h]
        B[h + 1, 1:] += p * B[h, :-1]
    return B


def transition_rows(m, N, ks):
    """L[s, r] = P(|x - y| = r) for |x| = s and y uniform on sphere ks[s]."""
    B = _binomial_table(m, N)
    L = np.zeros((N + 1, N + 1))
    cache = {}
    for s in range(N + 1):
        k = int(ks[s])
        if k not in cache:
            cache[k] = _hyp_block(N, k)
        H = cache[k][s]
        for hh in np.flatnonzero(H):
            base = s + k - hh  # r = base - i, i ~ Bin(hh, 1/m)
            i = np.arange(hh + 1)
            L[s, base - i] += H[hh] * B[hh, : hh + 1]
    return L
