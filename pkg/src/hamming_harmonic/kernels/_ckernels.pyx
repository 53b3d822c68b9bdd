# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the kernels in ``_pykernels``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport lgamma, exp, log, fabs, floor

cnp.import_array()

cdef double EPS = 2.220446049250313e-16


def dense_convolve(const cnp.complex128_t[::1] f, const cnp.complex128_t[::1] g, long q, long N):
    cdef long size = 1
    cdef long i
    for i in range(N):
        size *= q
    out_arr = np.zeros(size, dtype=np.complex128)
    cdef cnp.complex128_t[::1] out = out_arr
    cdef long[::1] ydig = np.zeros(N, dtype=np.int64)
    cdef long[::1] xdig = np.zeros(N, dtype=np.int64)
    cdef long[::1] powers = np.ones(N, dtype=np.int64)
    for i in range(1, N):
        powers[i] = powers[i - 1] * q
    cdef long x, y, idx, t, d
    cdef cnp.complex128_t gy
    for y in range(size):
        gy = g[y]
        if gy.real == 0 and gy.imag == 0:
            continue
        t = y
        for i in range(N):
            ydig[i] = t % q
            t //= q
        for i in range(N):
            xdig[i] = 0
        for x in range(size):
            idx = 0
            for i in range(N):
                d = xdig[i] - ydig[i]
                if d < 0:
                    d += q
                idx += d * powers[i]
            out[x] = out[x] + f[idx] * gy
            # increment little-endian digit counter
            i = 0
            while i < N:
                xdig[i] += 1
                if xdig[i] < q:
                    break
                xdig[i] = 0
                i += 1
    return out_arr


cdef inline double _ratio(long j, long r, long k, long m, long N) nogil:
    return (r - j) * <double>(k - j) / (m * (j + 1.0) * (j + 1.0 + N - r - k))


cdef inline double _log_comb(double a, double b) nogil:
    return lgamma(a + 1.0) - lgamma(b + 1.0) - lgamma(a - b + 1.0)


cdef void _kraw_entry(long m, long N, long k, long r, double* value, double* err) nogil:
    cdef long lo, hi, n, j, tmp
    cdef double t, a_n, s, c, y, tt, spread, lg_mag, sign
    if r > k:
        tmp = r
        r = k
        k = tmp
    lo = r + k - N
    if lo < 0:
        lo = 0
    hi = r
    n = lo
    while n < hi and _ratio(n, r, k, m, N) > 1.0:
        n += 1
    # Neumaier-compensated alternating sum of a_j / a_n
    s = 1.0
    c = 0.0
    spread = 1.0
    t = 1.0
    sign = 1.0
    for j in range(n, hi):
        t *= _ratio(j, r, k, m, N)
        sign = -sign
        y = sign * t
        tt = s + y
        if fabs(s) >= fabs(y):
            c += (s - tt) + y
        else:
            c += (y - tt) + s
        s = tt
        spread += t * (j + 1 - n + 1)
    t = 1.0
    sign = 1.0
    j = n - 1
    while j >= lo:
        t /= _ratio(j, r, k, m, N)
        sign = -sign
        y = sign * t
        tt = s + y
        if fabs(s) >= fabs(y):
            c += (s - tt) + y
        else:
            c += (y - tt) + s
        s = tt
        spread += t * (n - j + 1)
        j -= 1
    s = s + c
    a_n = exp(_log_comb(r, n) + _log_comb(N - r, k - n) - _log_comb(N, k) - n * log(<double>m))
    if n % 2 == 1:
        value[0] = -a_n * s
    else:
        value[0] = a_n * s
    lg_mag = 4.0 * (lgamma(N + 1.0) + n * log(<double>m) + 1.0)
    err[0] = 4.0 * EPS * a_n * spread + fabs(value[0]) * lg_mag * EPS


def kraw_float_entry(long m, long N, long k, long r):
    cdef double v, e
    _kraw_entry(m, N, k, r, &v, &e)
    return v, e


def kraw_float_table(long m, long N):
    vals_arr = np.empty((N + 1, N + 1))
    errs_arr = np.empty((N + 1, N + 1))
    cdef double[:, ::1] vals = vals_arr
    cdef double[:, ::1] errs = errs_arr
    cdef long r, k
    cdef double v, e
    with nogil:
        for r in range(N + 1):
            for k in range(r, N + 1):
                _kraw_entry(m, N, k, r, &v, &e)
                vals[r, k] = v
                vals[k, r] = v
                errs[r, k] = e
                errs[k, r] = e
    return vals_arr, errs_arr


cdef void _hyp_row(long N, long s, long k, double* H, long* lo_out, long* hi_out) nogil:
    """H[h] for h in [lo, hi], built outward from the mode by ratios."""
    cdef long lo = s + k - N
    if lo < 0:
        lo = 0
    cdef long hi = s if s < k else k
    cdef long mode = <long>floor((s + 1.0) * (k + 1.0) / (N + 2.0))
    if mode < lo:
        mode = lo
    if mode > hi:
        mode = hi
    cdef long h
    H[mode] = exp(_log_comb(s, mode) + _log_comb(N - s, k - mode) - _log_comb(N, k))
    for h in range(mode, hi):
        H[h + 1] = H[h] * (s - h) * <double>(k - h) / ((h + 1.0) * (N - s - k + h + 1.0))
    h = mode - 1
    while h >= lo:
        H[h] = H[h + 1] * (h + 1.0) * (N - s - k + h + 1.0) / ((s - h) * <double>(k - h))
        h -= 1
    lo_out[0] = lo
    hi_out[0] = hi


def sphere_family(long m, long N, f_in):
    cdef const double[::1] f = np.ascontiguousarray(f_in, dtype=np.float64)
    G_arr = np.zeros((N + 1, N + 1))
    cdef double[:, ::1] G = G_arr
    out_arr = np.zeros((N + 1, N + 1))
    cdef double[:, ::1] out = out_arr
    H_arr = np.zeros(N + 1)
    cdef double[::1] H = H_arr
    cdef double p = 1.0 / m
    cdef long h, u, k, s, lo, hi
    cdef double acc
    with nogil:
        for u in range(N + 1):
            G[0, u] = f[u]
        for h in range(N):
            G[h + 1, 0] = (1.0 - p) * G[h, 0]
            for u in range(1, N + 1):
                G[h + 1, u] = (1.0 - p) * G[h, u] + p * G[h, u - 1]
        for k in range(N + 1):
            for s in range(N + 1):
                _hyp_row(N, s, k, &H[0], &lo, &hi)
                acc = 0.0
                for h in range(lo, hi + 1):
                    acc += H[h] * G[h, s + k - h]
                out[k, s] = acc
    return out_arr


def transition_rows(long m, long N, ks_in):
    cdef const long[::1] ks = np.ascontiguousarray(ks_in, dtype=np.int64)
    B_arr = np.zeros((N + 1, N + 1))
    cdef double[:, ::1] B = B_arr
    L_arr = np.zeros((N + 1, N + 1))
    cdef double[:, ::1] L = L_arr
    H_arr = np.zeros(N + 1)
    cdef double[::1] H = H_arr
    cdef double p = 1.0 / m
    cdef long h, i, s, k, lo, hi, base
    with nogil:
        B[0, 0] = 1.0
        for h in range(N):
            B[h + 1, 0] = (1.0 - p) * B[h, 0]
            for i in range(1, N + 1):
                B[h + 1, i] = (1.0 - p) * B[h, i] + p * B[h, i - 1]
        for s in range(N + 1):
            k = ks[s]
            _hyp_row(N, s, k, &H[0], &lo, &hi)
            for h in range(lo, hi + 1):
                base = s + k - h
                for i in range(h + 1):
                    L[s, base - i] += H[h] * B[h, i]
    return L_arr
