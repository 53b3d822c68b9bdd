"""Normalized Krawtchouk polynomials on Z_{m+1}^N.

kappa_k^N(r) is the eigenvalue of the sphere average ``f -> f * sigma_k`` on
characters of weight r:

    kappa_k^N(r) = sum_j (-1)^j C(N,k)^{-1} C(r,j) C(N-r,k-j) m^{-j},

j running over max(0, r+k-N) .. min(r,k).  The exact path is ground truth;
the float path factors out the dominant summand before summing.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

import numpy as np

from .group_core import GroupParams
from . import kernels

DEFAULT_EXACT_CAP = 256


class ExactCapError(ValueError):
    """Raised when an exact table is requested beyond the exact cap."""


class PrecisionLossError(ArithmeticError):
    """Raised when the float path cannot certify its tolerance."""


def _mN(params):
    if isinstance(params, GroupParams):
        return params.m, params.N
    return params


def kraw_sum(params, k: int, r: int) -> Fraction:
    """Exact value of the alternating sum; zero if any of r, k, N is negative."""
    m, N = _mN(params)
    if r < 0 or k < 0 or N < 0:
        return Fraction(0)
    if r > N or k > N:
        raise ValueError(f"need r, k <= N, got r={r}, k={k}, N={N}")
    top = min(r, k)
    num = 0
    for j in range(max(0, r + k - N), top + 1):
        term = math.comb(r, j) * math.comb(N - r, k - j) * m ** (top - j)
        num += -term if j % 2 else term
    return Fraction(num, math.comb(N, k) * m**top)


def kraw_float(params, k: int, r: int, tol: float = 1e-9) -> float:
    """Float value of kappa_k^N(r), cancellation-safe up to N in the thousands.

    Raises PrecisionLossError if the internal error estimate exceeds ``tol``
    both absolutely and relative to the result.
    """
    m, N = _mN(params)
    if not (0 <= r <= N and 0 <= k <= N):
        raise ValueError(f"need 0 <= r, k <= N, got r={r}, k={k}, N={N}")
    value, err = kernels.kraw_float_entry(m, N, k, r)
    if err > tol and err > tol * abs(value):
        raise PrecisionLossError(
            f"kappa_{k}^{N}({r}) for m={m}: error estimate {err:.3g} exceeds {tol:g}"
        )
    return value


@lru_cache(maxsize=64)
def _exact_numerators(m: int, N: int):
    """Row r holds the coefficients of (m - z)^r (1 + z)^(N - r).

    kappa_k(r) = coeff_k / (m^r C(N, k)).  Each row follows from the previous
    one by an exact division by (1 + z) and a multiplication by (m - z).
    """
    poly = [math.comb(N, k) for k in range(N + 1)]
    rows = [tuple(poly)]
    for _ in range(N):
        quo = [0] * N
        acc = 0
        for i in range(N):
            acc = poly[i] - acc
            quo[i] = acc
        poly = [m * quo[0]] + [m * quo[i] - quo[i - 1] for i in range(1, N)] + [-quo[N - 1]]
        rows.append(tuple(poly))
    return tuple(rows)


@dataclass(frozen=True)
class KrawtchoukTable:
    """(N+1) x (N+1) matrix with entry [r, k] = kappa_k^N(r)."""

    params: GroupParams
    values: np.ndarray
    exact: bool

    def value(self, r: int, k: int):
        return self.values[r, k]

    def row(self, k: int) -> np.ndarray:
        return self.values[k]


@lru_cache(maxsize=64)
def _exact_table(m: int, N: int) -> np.ndarray:
    nums = _exact_numerators(m, N)
    dens = [math.comb(N, k) for k in range(N + 1)]
    vals = np.empty((N + 1, N + 1), dtype=object)
    for r in range(N + 1):
        mr = m**r
        for k in range(N + 1):
            vals[r, k] = Fraction(nums[r][k], mr * dens[k])
    vals.setflags(write=False)
    return vals


@lru_cache(maxsize=64)
def _float_table(m: int, N: int) -> np.ndarray:
    vals, _ = kernels.kraw_float_table(m, N)
    vals.setflags(write=False)
    return vals


def krawtchouk_table(params: GroupParams, exact: bool = True,
                     exact_cap: int = DEFAULT_EXACT_CAP) -> KrawtchoukTable:
    if exact:
        if params.N > exact_cap:
            raise ExactCapError(
                f"exact Krawtchouk table for N={params.N} exceeds exact cap {exact_cap}; "
                "use float precision"
            )
        return KrawtchoukTable(params, _exact_table(params.m, params.N), True)
    return KrawtchoukTable(params, _float_table(params.m, params.N), False)


def log_abs_kraw(params, k: int, r: int) -> float:
    """ln |kappa_k^N(r)| from the exact integer numerator; -inf at zeros."""
    m, N = _mN(params)
    num = _exact_numerators(m, N)[r][k]
    if num == 0:
        return -math.inf
    return math.log(abs(num)) - math.log(m**r * math.comb(N, k))


def literal_difference(params, t: int, k: int, r: int) -> Fraction:
    """sum_{j <= t} (-1)^j C(t, j) kappa_{k-j}(r), with kappa of a negative index zero."""
    m, N = _mN(params)
    total = Fraction(0)
    for j in range(t + 1):
        if k - j < 0:
            break
        term = math.comb(t, j) * kraw_sum((m, N), k - j, r)
        total += -term if j % 2 else term
    return total


def diff_multiplier(params, t: int, k: int, r: int) -> Fraction:
    """Eigenvalue of the t-th backward difference of P^k on weight-r characters.

    Closed form (-1/c_m)^t C(N-t, r-t)/C(N, r) kappa^{N-t}_{k-t}(r-t), valid
    for 0 <= t <= k; zero when r < t.
    """
    m, N = _mN(params)
    if t < 0 or t > k:
        raise ValueError(f"difference order t={t} must satisfy 0 <= t <= k={k}")
    if r < t:
        return Fraction(0)
    factor = Fraction(-(m + 1), m) ** t * Fraction(math.comb(N - t, r - t), math.comb(N, r))
    return factor * kraw_sum((m, N - t), k - t, r - t)


@dataclass(frozen=True)
class SummandAnalysis:
    """Dominant-summand structure of kappa_k^N(r) for r <= k.

    ``a[i]`` is the magnitude a_{ell + i}.  ``J`` is the real crossover of the
    summand ratio through 1 (None when no root lies in (ell - 1, r)), and
    ``root`` records which branch C +/- sqrt(C^2 + A) produced it.
    ``A`` and ``C`` are None for m = 1, where the crossover equation is linear.
    """

    m: int
    N: int
    r: int
    k: int
    ell: int
    a: tuple
    n: int
    J: Optional[float]
    root: Optional[str]
    A: Optional[Fraction]
    C: Optional[Fraction]

    def a_at(self, j: int) -> Fraction:
        return self.a[j - self.ell]

    @property
    def a_n(self) -> Fraction:
        return self.a_at(self.n)

    @property
    def value(self) -> Fraction:
        return sum(((-1) ** (self.ell + i)) * x for i, x in enumerate(self.a))


def summand_ratio(m: int, N: int, r: int, k: int, j) -> Fraction:
    """R(j) = a_{j+1} / a_j."""
    return Fraction((r - j) * (k - j), m * (j + 1) * (j + 1 + N - r - k))


def _crossover_constants(m, N, r, k):
    if m == 1:
        return None, None
    A = Fraction(r * k - N * m, m - 1) + Fraction(r * m + k * m - m, m - 1)
    C = Fraction(r + k, 2) - Fraction(m, m - 1) - Fraction(N * m, 2 * (m - 1))
    return A, C


def _sqrt_le(x: Fraction, y: Fraction) -> bool:
    """sqrt(x) <= y for x >= 0, decided exactly."""
    return y >= 0 and x <= y * y


def ceil_equals(n: int, A: Fraction, C: Fraction) -> bool:
    """Exact test of n == ceil(C + sqrt(C^2 + A))."""
    disc = C * C + A
    le_n = _sqrt_le(disc, n - C)  # J <= n
    gt_prev = not _sqrt_le(disc, n - 1 - C)  # J > n - 1
    return le_n and gt_prev


def summand_analysis(params, r: int, k: int) -> SummandAnalysis:
    m, N = _mN(params)
    if not (0 <= r <= k <= N):
        raise ValueError(f"need 0 <= r <= k <= N, got r={r}, k={k}, N={N}")
    ell = max(0, r + k - N)
    den = math.comb(N, k)
    a = tuple(
        Fraction(math.comb(r, j) * math.comb(N - r, k - j), den * m**j) for j in range(ell, r + 1)
    )
    best = max(a)
    n = ell + a.index(best)

    A, C = _crossover_constants(m, N, r, k)
    J = root = None
    lo, hi = ell - 1, r
    if A is not None:
        disc = C * C + A
        if disc >= 0:
            sq = math.sqrt(disc)
            for name, cand in (("+", float(C) + sq), ("-", float(C) - sq)):
                if lo < cand < hi:
                    J, root = cand, name
                    break
    else:
        # m = 1: (j+1)(j+1+N-r-k) = (r-j)(k-j) is linear in j
        coef = 2 + N - r - k + r + k
        J = (r * k - (1 + N - r - k)) / coef
        root = "linear"
        if not lo < J < hi:
            J = root = None
    return SummandAnalysis(m, N, r, k, ell, a, n, J, root, A, C)


def check_unimodal(sa: SummandAnalysis) -> bool:
    """a strictly increases up to n and never increases after it."""
    a = sa.a
    i_n = sa.n - sa.ell
    inc = all(a[i] < a[i + 1] for i in range(i_n))
    dec = all(a[i] >= a[i + 1] for i in range(i_n, len(a) - 1))
    return inc and dec


def decay_exponent(params, r: int, k: int, exact_cap: int = DEFAULT_EXACT_CAP) -> float:
    """d(r, k, N) = -N ln|kappa_k^N(r)| / (r k); +inf where kappa vanishes."""
    m, N = _mN(params)
    if not (1 <= r <= N and 1 <= k <= N):
        raise ValueError(f"need 1 <= r, k <= N, got r={r}, k={k}, N={N}")
    if N <= exact_cap:
        lg = log_abs_kraw((m, N), k, r)
    else:
        v = kraw_float((m, N), k, r)
        lg = math.log(abs(v)) if v != 0 else -math.inf
    if lg == -math.inf:
        return math.inf
    return -N * lg / (r * k)


def decay_min(params, exact_cap: int = DEFAULT_EXACT_CAP):
    """(d_min, argmin_r, argmin_k) over 1 <= r <= k <= N."""
    m, N = _mN(params)
    best = (math.inf, 0, 0)
    if N <= exact_cap:
        nums = _exact_numerators(m, N)
        logden_k = [math.log(math.comb(N, k)) for k in range(N + 1)]
        logm = math.log(m)
        for r in range(1, N + 1):
            row = nums[r]
            for k in range(r, N + 1):
                num = row[k]
                if num == 0:
                    continue
                lg = math.log(abs(num)) - r * logm - logden_k[k]
                d = -N * lg / (r * k)
                if d < best[0]:
                    best = (d, r, k)
    else:
        table = _float_table(m, N)
        for r in range(1, N + 1):
            for k in range(r, N + 1):
                v = abs(table[r, k])
                if v == 0:
                    continue
                d = -N * math.log(v) / (r * k)
                if d < best[0]:
                    best = (d, r, k)
    return best


@dataclass
class DominantReport:
    m: int
    N: int
    pairs: int
    violations: list
    unimodal_failures: list
    ceil_failures: list
    eps_min: float
    eps_witness: Optional[tuple]
    case3_failures: list
    case3_pairs: int

    @property
    def ok(self) -> bool:
        return not (self.violations or self.unimodal_failures or self.ceil_failures
                    or self.case3_failures)


def dominant_bound_check(params, exact_cap: int = DEFAULT_EXACT_CAP) -> DominantReport:
    """Exhaustive exact check of the dominant-summand bound for one (m, N).

    Over all 0 <= r <= k <= N: |kappa| <= a_n, unimodality, and n = ceil(J);
    the minimum of n N / (r k) over pairs with n > 0 and r k >= 2 N m; and
    for n = 0, r >= 1: a_0 <= ((N - r)/N)^k and a_0 <= exp(-r k / N).
    """
    m, N = _mN(params)
    if N > exact_cap:
        raise ExactCapError(f"N={N} exceeds exact cap {exact_cap}")
    table = _exact_table(m, N)
    violations, unimodal, ceil_fail, case3 = [], [], [], []
    eps_min, eps_w = math.inf, None
    pairs = case3_pairs = 0
    for r in range(N + 1):
        for k in range(r, N + 1):
            pairs += 1
            sa = summand_analysis((m, N), r, k)
            kappa = table[r, k]
            if abs(kappa) > sa.a_n:
                violations.append((m, N, r, k))
            if not check_unimodal(sa):
                unimodal.append((m, N, r, k))
            if sa.n > 0 and sa.A is not None and not ceil_equals(sa.n, sa.A, sa.C):
                ceil_fail.append((m, N, r, k))
            if sa.n > 0 and r * k >= 2 * N * m:
                ratio = sa.n * N / (r * k)
                if ratio < eps_min:
                    eps_min, eps_w = ratio, (r, k)
            if sa.n == 0 and r >= 1:
                case3_pairs += 1
                a0 = sa.a_at(0)
                rational_ok = a0 <= Fraction(N - r, N) ** k
                exp_ok = math.log(a0) <= -r * k / N if a0 > 0 else True
                if not (rational_ok and exp_ok):
                    case3.append((m, N, r, k))
    return DominantReport(m, N, pairs, violations, unimodal, ceil_fail, eps_min, eps_w,
                          case3, case3_pairs)
