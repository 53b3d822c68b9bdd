"""Radial operator calculus on Z_{m+1}^N.

A radial function is stored as its profile: ``vals[r]`` is its value on the
sphere of radius r.  Convolution operators with radial kernels act
diagonally on characters, with eigenvalue depending only on the character
weight, so every operator here costs polynomially in N.

Two evaluation routes exist for the sphere averages P^k f = f * sigma_k:

* the multiplier route (exact with rational profiles), and
* a spatial route whose weights are all probabilities (float, stable even
  when profile values span hundreds of orders of magnitude).
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Optional, Union

import numpy as np
from scipy import integrate
from scipy.special import gammaln

from . import kernels
from .group_core import GroupParams, sphere_size, sphere_sizes
from .krawtchouk import DEFAULT_EXACT_CAP, krawtchouk_table

Scalar = Union[Fraction, float, complex]


def _is_exact_array(vals) -> bool:
    return np.asarray(vals).dtype == object


@lru_cache(maxsize=128)
def _log_pi(m: int, N: int) -> np.ndarray:
    r = np.arange(N + 1, dtype=float)
    out = gammaln(N + 1.0) - gammaln(r + 1.0) - gammaln(N - r + 1.0) + r * math.log(m) - N * math.log(m + 1)
    out.setflags(write=False)
    return out


def sphere_probabilities(params: GroupParams, exact: bool = False) -> np.ndarray:
    """pi_r = |S_r| / (m+1)^N, the uniform measure's mass on each sphere."""
    if exact:
        total = params.size
        return np.array([Fraction(s, total) for s in sphere_sizes(params)], dtype=object)
    return np.exp(_log_pi(params.m, params.N))


def _float_sizes(params: GroupParams) -> np.ndarray:
    return np.array([float(s) for s in sphere_sizes(params)])


@dataclass(frozen=True)
class RadialProfile:
    """Values of a radial function on each sphere, index r = 0..N."""

    params: GroupParams
    vals: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.vals)
        if vals.shape != (self.params.N + 1,):
            raise ValueError(f"profile needs {self.params.N + 1} entries, got shape {vals.shape}")
        vals = vals.copy()
        vals.setflags(write=False)
        object.__setattr__(self, "vals", vals)

    @property
    def exact(self) -> bool:
        return _is_exact_array(self.vals)

    @property
    def kind(self) -> str:
        if self.exact:
            return "exact"
        return "complex" if np.iscomplexobj(self.vals) else "float"

    def mass(self):
        """L^1 mass sum_r vals[r] |S_r| (counting measure)."""
        if self.exact:
            return sum(v * s for v, s in zip(self.vals, sphere_sizes(self.params)))
        return np.sum(self.vals * _float_sizes(self.params))

    def is_nonnegative(self) -> bool:
        if self.exact:
            return all(v >= 0 for v in self.vals)
        return bool(np.all(np.real(self.vals) >= 0) and np.all(np.imag(self.vals) == 0))

    def as_float(self) -> "RadialProfile":
        if not self.exact:
            return self
        return RadialProfile(self.params, np.array([float(v) for v in self.vals]))

    def lp_norm(self, p: float) -> float:
        """L^p norm for the uniform probability measure on the group."""
        pi = sphere_probabilities(self.params)
        a = np.abs(np.asarray(self.as_float().vals, dtype=np.complex128))
        if math.isinf(p):
            return float(np.max(a))
        return float(np.sum(pi * a**p) ** (1.0 / p))

    def __add__(self, other: "RadialProfile") -> "RadialProfile":
        return RadialProfile(self.params, self.vals + other.vals)

    def __sub__(self, other: "RadialProfile") -> "RadialProfile":
        return RadialProfile(self.params, self.vals - other.vals)

    def scale(self, c) -> "RadialProfile":
        return RadialProfile(self.params, self.vals * c)


@dataclass(frozen=True)
class Multiplier:
    """Eigenvalues of a radial convolution operator, index = character weight."""

    params: GroupParams
    eig: np.ndarray

    def __post_init__(self):
        eig = np.asarray(self.eig).copy()
        eig.setflags(write=False)
        object.__setattr__(self, "eig", eig)

    def __mul__(self, other: "Multiplier") -> "Multiplier":
        return Multiplier(self.params, self.eig * other.eig)


def _zeros(params: GroupParams, exact: bool) -> np.ndarray:
    if exact:
        return np.array([Fraction(0)] * (params.N + 1), dtype=object)
    return np.zeros(params.N + 1)


def sigma_profile(params: GroupParams, r: int, exact: bool = True) -> RadialProfile:
    """L^1-normalized sphere indicator; the zero profile for r < 0."""
    if r > params.N:
        raise ValueError(f"radius {r} exceeds N={params.N}")
    vals = _zeros(params, exact)
    if r >= 0:
        size = sphere_size(params, r)
        vals[r] = Fraction(1, size) if exact else 1.0 / size
    return RadialProfile(params, vals)


def delta_profile(params: GroupParams, exact: bool = True) -> RadialProfile:
    return sigma_profile(params, 0, exact)


def constant_profile(params: GroupParams, c=1, exact: bool = True) -> RadialProfile:
    if exact:
        return RadialProfile(params, np.array([Fraction(c)] * (params.N + 1), dtype=object))
    return RadialProfile(params, np.full(params.N + 1, float(c)))


def ball_profile(params: GroupParams, rho: int, exact: bool = True) -> RadialProfile:
    """Indicator of the Hamming ball of radius rho (unnormalized)."""
    one, zero = (Fraction(1), Fraction(0)) if exact else (1.0, 0.0)
    vals = [one if r <= rho else zero for r in range(params.N + 1)]
    return RadialProfile(params, np.array(vals, dtype=object if exact else float))


def _table(params: GroupParams, exact: bool, exact_cap: int = DEFAULT_EXACT_CAP) -> np.ndarray:
    return krawtchouk_table(params, exact=exact, exact_cap=exact_cap).values


def function_multiplier(f: RadialProfile) -> Multiplier:
    """e[s] = sum_x f(x) xi^{S.x} for |S| = s, i.e. sum_r f_r |S_r| kappa_s(r)."""
    params = f.params
    exact = f.exact
    K = _table(params, exact)
    if exact:
        masses = np.array([v * s for v, s in zip(f.vals, sphere_sizes(params))], dtype=object)
    else:
        masses = f.vals * _float_sizes(params)
    return Multiplier(params, K.dot(masses))


def kernel_multiplier(kernel: RadialProfile) -> Multiplier:
    """Multiplier of the operator g -> g * kernel; eig[0] is the kernel's mass."""
    return function_multiplier(kernel)


def profile_from_multiplier(mult: Multiplier) -> RadialProfile:
    """Inverse of :func:`function_multiplier`: f_r = sum_s pi_s kappa_s(r) e_s."""
    params = mult.params
    exact = _is_exact_array(mult.eig)
    K = _table(params, exact)
    pi = sphere_probabilities(params, exact=exact)
    return RadialProfile(params, K.dot(pi * mult.eig))


def apply_radial(kernel: RadialProfile, f: RadialProfile) -> RadialProfile:
    """kernel * f through the pointwise product of multipliers."""
    if (kernel.params.m, kernel.params.N) != (f.params.m, f.params.N):
        raise ValueError("profiles live on different groups")
    if kernel.exact != f.exact:
        kernel, f = kernel.as_float(), f.as_float()
    return profile_from_multiplier(kernel_multiplier(kernel) * function_multiplier(f))


def noise_profile(params: GroupParams, p) -> RadialProfile:
    """Noise measure: each coordinate stays put w.p. 1-p, else moves to one of
    the m other symbols; vals[r] = (p/m)^r (1-p)^(N-r)."""
    exact = isinstance(p, (Rational, int))
    if exact:
        p = Fraction(p)
    if not 0 <= p <= params.c_m:
        raise ValueError(f"noise parameter p={p} outside [0, c_m={params.c_m}]")
    m, N = params.m, params.N
    if exact:
        vals = [(p / m) ** r * (1 - p) ** (N - r) for r in range(N + 1)]
        return RadialProfile(params, np.array(vals, dtype=object))
    r = np.arange(N + 1)
    return RadialProfile(params, (p / m) ** r * (1.0 - p) ** (N - r))


def noise_multiplier(params: GroupParams, p) -> Multiplier:
    """Closed-form eigenvalues (1 - p/c_m)^s of the noise operator."""
    if isinstance(p, (Rational, int)):
        base = 1 - Fraction(p) / params.c_m
        return Multiplier(params, np.array([base**s for s in range(params.N + 1)], dtype=object))
    base = 1.0 - p / float(params.c_m)
    return Multiplier(params, base ** np.arange(params.N + 1))


def semigroup_multiplier(params: GroupParams, t: float) -> Multiplier:
    """Eigenvalues e^{-t s} of the noise semigroup at time t."""
    return Multiplier(params, np.exp(-t * np.arange(params.N + 1)))


def b_weights(m: int, k: int) -> list:
    """b_k(d) = m^{-k} C(k, d) (m-1)^{k-d}: law of a sum of k Bernoulli(1/m)."""
    if k < 0 or m < 1:
        raise ValueError(f"need k >= 0 and m >= 1, got m={m}, k={k}")
    return [Fraction(math.comb(k, d) * (m - 1) ** (k - d), m**k) for d in range(k + 1)]


def binom_weight(N: int, p, l: int):
    """B(N, p, l) = C(N, l) p^l (1-p)^(N-l)."""
    if not 0 <= l <= N:
        raise ValueError(f"need 0 <= l <= N, got l={l}, N={N}")
    return math.comb(N, l) * p**l * (1 - p) ** (N - l)


def partial_integral_row(N: int, P) -> list:
    """[int_0^P B(N, p, l) dp for l = 0..N], exact for rational P.

    Uses int_0^P B(N, p, l) dp = P(Bin(N+1, P) >= l+1) / (N+1).
    """
    P = Fraction(P)
    if not 0 < P <= 1:
        raise ValueError(f"need 0 < P <= 1, got {P}")
    num, den = P.numerator, P.denominator
    # C(N+1, j) num^j (den-num)^(N+1-j), common denominator den^(N+1)
    terms = [math.comb(N + 1, j) * num**j * (den - num) ** (N + 1 - j) for j in range(N + 2)]
    scale = den ** (N + 1) * (N + 1)
    out = [Fraction(0)] * (N + 1)
    tail = 0
    for l in range(N, -1, -1):
        tail += terms[l + 1]
        out[l] = Fraction(tail, scale)
    return out


def binom_partial_integral(N: int, l: int, P, exact_cap: int = DEFAULT_EXACT_CAP):
    """int_0^P B(N, p, l) dp: exact rational for rational P and N <= exact_cap,
    adaptive quadrature (abs tol 1e-12) otherwise."""
    if not 0 <= l <= N:
        raise ValueError(f"need 0 <= l <= N, got l={l}, N={N}")
    if isinstance(P, (Rational, int)) and N <= exact_cap:
        return partial_integral_row(N, P)[l]
    return binom_partial_integral_quad(N, l, float(P))


def binom_partial_integral_quad(N: int, l: int, P: float) -> float:
    logc = math.lgamma(N + 1) - math.lgamma(l + 1) - math.lgamma(N - l + 1)

    def integrand(p):
        if p <= 0.0:
            return 1.0 if l == 0 else 0.0
        if p >= 1.0:
            return 1.0 if l == N else 0.0
        return math.exp(logc + l * math.log(p) + (N - l) * math.log1p(-p))

    peak = l / N
    points = [peak] if 0 < peak < P else None
    val, _ = integrate.quad(integrand, 0.0, P, epsabs=1e-12, epsrel=1e-12, points=points, limit=200)
    return val


@dataclass(frozen=True)
class NuMeasure:
    """Density (c_m/P) T e^{-T} on (0, T_P) plus an atom at T_P = -ln(1 - P/c_m)."""

    c_m: Fraction
    P: Fraction
    T_P: float
    atom_weight: float

    def density(self, T: float) -> float:
        if 0.0 < T < self.T_P:
            return float(self.c_m / self.P) * T * math.exp(-T)
        return 0.0

    def total_mass(self) -> float:
        """Mass by quadrature of the density plus the analytic atom."""
        ratio = float(self.c_m / self.P)
        cont, _ = integrate.quad(lambda T: ratio * T * math.exp(-T), 0.0, self.T_P,
                                 epsabs=1e-13, epsrel=1e-13, limit=200)
        return cont + self.atom_weight

    def total_mass_closed(self) -> float:
        ratio = float(self.c_m / self.P)
        if math.isinf(self.T_P):
            return ratio
        a = self.T_P
        return ratio * (1.0 - (1.0 + a) * math.exp(-a)) + self.atom_weight


def nu_P(params: GroupParams, P) -> NuMeasure:
    P = Fraction(P) if isinstance(P, (Rational, int)) else Fraction(P).limit_denominator(10**12)
    c = params.c_m
    if not 0 < P <= c:
        raise ValueError(f"need 0 < P <= c_m = {c}, got {P}")
    if P == c:
        return NuMeasure(c, P, math.inf, 0.0)
    T_P = -math.log1p(-float(P / c))
    return NuMeasure(c, P, T_P, float(c / P - 1) * T_P)


def cesaro_coeffs(lam, n: int) -> list:
    """A_0^lam .. A_n^lam with A_j = (lam+1)...(lam+j)/j!."""
    if n < 0:
        raise ValueError("n must be >= 0")
    exact = isinstance(lam, (Rational, int))
    one = Fraction(1) if exact else complex(1.0)
    lam = Fraction(lam) if exact else complex(lam)
    out = [one]
    for j in range(1, n + 1):
        out.append(out[-1] * (lam + j) / j)
    return out


@dataclass(frozen=True)
class CesaroParams:
    lam: object
    n: int
    family: str = "local"

    def cutoff(self, params: GroupParams) -> int:
        if self.family == "local":
            return params.local_cutoff
        if self.family == "distant":
            return params.distant_cutoff
        raise ValueError(f"unknown family {self.family!r}")


def sphere_family(f: RadialProfile, method: Optional[str] = None) -> np.ndarray:
    """Array ``out[k, s] = (P^k f)(s)`` for k, s = 0..N.

    ``method``: "multiplier" (default for exact profiles, required there) or
    "spatial" (default for floats).
    """
    params = f.params
    m, N = params.m, params.N
    if method is None:
        method = "multiplier" if f.exact else "spatial"
    if method == "multiplier":
        exact = f.exact
        K = _table(params, exact)
        e = function_multiplier(f).eig
        pi = sphere_probabilities(params, exact=exact)
        return (K * (pi * e)[None, :]).dot(K.T)
    if method != "spatial":
        raise ValueError(f"unknown method {method!r}")
    vals = np.asarray(f.as_float().vals)
    if np.iscomplexobj(vals):
        return kernels.sphere_family(m, N, vals.real) + 1j * kernels.sphere_family(m, N, vals.imag)
    return kernels.sphere_family(m, N, vals)


def _family_rows(fam: np.ndarray, params: GroupParams, family: str) -> np.ndarray:
    """Rows of the Cesaro input sequence: P^k (local) or Q^k = P^{N-k} (distant)."""
    if family == "local":
        return fam[: params.local_cutoff + 1]
    if family == "distant":
        return fam[::-1][: params.distant_cutoff + 1]
    raise ValueError(f"unknown family {family!r}")


def cesaro_family(lam, f: RadialProfile, family: str = "local", fam=None) -> np.ndarray:
    """Rows n = 0..cutoff of the Cesaro sums sum_{k<=n} A_{n-k}^lam X^k f."""
    params = f.params
    if fam is None:
        fam = sphere_family(f)
    rows = _family_rows(fam, params, family)
    n_max = rows.shape[0] - 1
    A = cesaro_coeffs(lam, n_max)
    exact = _is_exact_array(rows) and isinstance(lam, (Rational, int))
    if not exact:
        rows = np.asarray(rows, dtype=np.complex128 if not isinstance(lam, (Rational, int)) or np.iscomplexobj(rows) else float)
        A = np.array(A, dtype=np.complex128 if isinstance(A[0], complex) else float)
        if np.iscomplexobj(A) and np.all(A.imag == 0) and not np.iscomplexobj(rows):
            A = A.real
    T = np.zeros((n_max + 1, n_max + 1), dtype=object if exact else np.asarray(A).dtype)
    if exact:
        T[...] = Fraction(0)
    for n in range(n_max + 1):
        for k in range(n + 1):
            T[n, k] = A[n - k]
    return T.dot(rows)


def cesaro_apply(cp: CesaroParams, f: RadialProfile) -> RadialProfile:
    cut = cp.cutoff(f.params)
    if not 0 <= cp.n <= cut:
        raise ValueError(f"n={cp.n} outside the {cp.family} range 0..{cut}")
    return RadialProfile(f.params, cesaro_family(cp.lam, f, cp.family)[cp.n])


@dataclass(frozen=True)
class MaximalResult:
    profile: RadialProfile
    argmax: tuple


def _abs(arr: np.ndarray) -> np.ndarray:
    if arr.dtype == object:
        return np.vectorize(abs, otypes=[object])(arr)
    return np.abs(arr)


def _sup(rows: np.ndarray, params: GroupParams, offset: int = 0, step: int = 1) -> MaximalResult:
    mags = _abs(rows)
    idx = np.argmax(mags, axis=0) if mags.dtype != object else np.array(
        [max(range(mags.shape[0]), key=lambda i: (mags[i, s], -i)) for s in range(mags.shape[1])]
    )
    vals = mags[idx, np.arange(mags.shape[1])]
    return MaximalResult(RadialProfile(params, vals), tuple(offset + step * int(i) for i in idx))


def _lambda_norms(lam, n_max: int, exact: bool):
    """|(n+1)^{lam+1}| = (n+1)^{Re(lam)+1}."""
    if exact:
        a = Fraction(lam)
        if a.denominator == 1:
            e = int(a) + 1
            return np.array([Fraction(n + 1) ** e for n in range(n_max + 1)], dtype=object)
    alpha = complex(lam).real
    return (np.arange(n_max + 1) + 1.0) ** (alpha + 1.0)


def parse_op_id(op_id: str):
    """Split an operator id into (name, parameter).

    Names: M, ML, MD, MSL, MSD, Sstar:alpha:beta, Tstar:alpha:beta, Rt:t, RtD:t.
    Real rational alpha with beta = 0 yields an exact Fraction lambda.
    """
    parts = op_id.split(":")
    name = parts[0]
    if name in ("M", "ML", "MD", "MSL", "MSD"):
        if len(parts) != 1:
            raise ValueError(f"operator {name} takes no parameters: {op_id!r}")
        return name, None
    if name in ("Sstar", "Tstar"):
        if len(parts) not in (2, 3):
            raise ValueError(f"expected {name}:alpha[:beta], got {op_id!r}")
        alpha = Fraction(parts[1])
        beta = Fraction(parts[2]) if len(parts) == 3 else Fraction(0)
        lam = alpha if beta == 0 else complex(float(alpha), float(beta))
        return name, lam
    if name in ("Rt", "RtD"):
        if len(parts) != 2 or int(parts[1]) < 1:
            raise ValueError(f"expected {name}:t with t >= 1, got {op_id!r}")
        return name, int(parts[1])
    raise ValueError(f"unknown operator id {op_id!r}")


def maximal(op_id: str, f: RadialProfile, fam=None) -> MaximalResult:
    """Pointwise supremum of the indicated family of absolute values."""
    params = f.params
    name, lam = parse_op_id(op_id)
    if fam is None:
        fam = sphere_family(f)
    N, Lc, Dc = params.N, params.local_cutoff, params.distant_cutoff
    exact = _is_exact_array(fam)
    if name == "M":
        return _sup(fam, params)
    if name == "ML":
        return _sup(fam[: Lc + 1], params)
    if name == "MD":
        return _sup(fam[::-1][: Dc + 1], params, offset=N, step=-1)
    if name in ("MSL", "MSD"):
        rows = fam[: Lc + 1] if name == "MSL" else fam[::-1][: Dc + 1]
        csum = np.cumsum(rows, axis=0)
        if exact:
            inv = np.array([Fraction(1, n + 1) for n in range(rows.shape[0])], dtype=object)
        else:
            inv = 1.0 / (np.arange(rows.shape[0]) + 1.0)
        return _sup(csum * inv[:, None], params)
    if name in ("Sstar", "Tstar"):
        family = "local" if name == "Sstar" else "distant"
        if exact and not isinstance(lam, (Rational, int)):
            fam = np.asarray(fam, dtype=float)
            exact = False
        rows = cesaro_family(lam, f, family, fam=fam)
        norms = _lambda_norms(lam, rows.shape[0] - 1, exact and isinstance(lam, (Rational, int)))
        if norms.dtype == object and rows.dtype == object:
            return _sup(rows / norms[:, None], params)
        return _sup(np.asarray(rows, dtype=np.complex128) / norms[:, None].astype(float), params)
    raise ValueError(f"{op_id!r} is not a maximal operator")


def difference_rows(t: int, f: RadialProfile, family: str = "local", fam=None) -> np.ndarray:
    """Rows k = 0..cutoff of Delta^t X^k f (X = P local, Q distant)."""
    return cesaro_family(-t - 1, f, family, fam=fam)


def square_function_sq(t: int, family: str, f: RadialProfile, fam=None) -> RadialProfile:
    """sum_k (k+1)^{2t-1} |Delta^t X^k f|^2 over the family's k-range."""
    if t < 1:
        raise ValueError("t must be >= 1")
    rows = difference_rows(t, f, family, fam=fam)
    weights = [(k + 1) ** (2 * t - 1) for k in range(rows.shape[0])]
    if rows.dtype == object:
        mags = _abs(rows)
        vals = [sum(w * mags[k, s] ** 2 for k, w in enumerate(weights)) for s in range(rows.shape[1])]
        return RadialProfile(f.params, np.array(vals, dtype=object))
    w = np.array(weights, dtype=float)
    return RadialProfile(f.params, np.sum(w[:, None] * np.abs(rows) ** 2, axis=0))


def square_function(t: int, family: str, f: RadialProfile, fam=None) -> RadialProfile:
    sq = square_function_sq(t, family, f, fam=fam).as_float()
    return RadialProfile(f.params, np.sqrt(np.asarray(sq.vals, dtype=float)))


def difference_multipliers(params: GroupParams, t: int, family: str = "local",
                           exact: bool = False) -> np.ndarray:
    """D[k, r] = eigenvalue of Delta^t X^k on weight-r characters, k over the family range."""
    K = _table(params, exact)
    cut = params.local_cutoff if family == "local" else params.distant_cutoff
    rows = K if family == "local" else K[::-1]
    out = []
    for k in range(cut + 1):
        acc = rows[k] * 0
        for j in range(min(t, k) + 1):
            c = math.comb(t, j) * (-1) ** j
            acc = acc + rows[k - j] * c
        out.append(acc)
    return np.array(out, dtype=object if exact else float)


def square_function_l2_sq(t: int, family: str, f: RadialProfile) -> float:
    """||R_t f||_2^2 (uniform probability measure) computed on the multiplier side."""
    params = f.params
    D = difference_multipliers(params, t, family)
    w = (np.arange(D.shape[0]) + 1.0) ** (2 * t - 1)
    per_r = np.sum(w[:, None] * D**2, axis=0)
    e = np.asarray(function_multiplier(f.as_float()).eig, dtype=np.complex128)
    pi = sphere_probabilities(params)
    # E|g|^2 = sum_r pi_r |e_r|^2 / (m+1)^N for radial g with multiplier e
    return float(np.sum(pi * np.abs(e) ** 2 * per_r) / params.size)


OP_IDS = ("M", "ML", "MD", "MSL", "MSD", "Sstar:alpha:beta", "Tstar:alpha:beta", "Rt:t", "RtD:t")


def evaluate(op_id: str, f: RadialProfile) -> RadialProfile:
    """Evaluate any registered operator id on a radial profile."""
    name, param = parse_op_id(op_id)
    if name in ("Rt", "RtD"):
        return square_function(param, "local" if name == "Rt" else "distant", f)
    return maximal(op_id, f).profile


class ProfileFormatError(ValueError):
    """Malformed profile CSV; ``row`` is the 1-based line number (header = 1)."""

    def __init__(self, message: str, row: int):
        super().__init__(f"row {row}: {message}")
        self.row = row


def write_profile_csv(f: RadialProfile, path) -> None:
    """Columns (r, num, den) for exact profiles, (r, value) or (r, re, im) otherwise."""
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        if f.exact:
            out.writerow(["r", "num", "den"])
            for r, v in enumerate(f.vals):
                v = Fraction(v)
                out.writerow([r, v.numerator, v.denominator])
        elif np.iscomplexobj(f.vals):
            out.writerow(["r", "re", "im"])
            for r, v in enumerate(f.vals):
                out.writerow([r, repr(float(v.real)), repr(float(v.imag))])
        else:
            out.writerow(["r", "value"])
            for r, v in enumerate(f.vals):
                out.writerow([r, repr(float(v))])


def read_profile_csv(path, params: GroupParams) -> RadialProfile:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ProfileFormatError("empty file", 1)
    header, body = [h.strip() for h in rows[0]], rows[1:]
    kinds = {("r", "num", "den"): "exact", ("r", "value"): "float", ("r", "re", "im"): "complex"}
    kind = kinds.get(tuple(header))
    if kind is None:
        raise ProfileFormatError(f"unrecognized header {header}", 1)
    N = params.N
    vals = [None] * (N + 1)
    for line, row in enumerate(body, start=2):
        if len(row) != len(header):
            raise ProfileFormatError(f"expected {len(header)} fields, got {len(row)}", line)
        try:
            r = int(row[0])
            if kind == "exact":
                v = Fraction(int(row[1]), int(row[2]))
            elif kind == "float":
                v = float(row[1])
            else:
                v = complex(float(row[1]), float(row[2]))
        except (ValueError, ZeroDivisionError) as exc:
            raise ProfileFormatError(str(exc), line) from None
        if not 0 <= r <= N:
            raise ProfileFormatError(f"radius {r} outside 0..{N}", line)
        if vals[r] is not None:
            raise ProfileFormatError(f"radius {r} repeated", line)
        vals[r] = v
    missing = [r for r, v in enumerate(vals) if v is None]
    if missing:
        raise ProfileFormatError(f"missing radii {missing}", len(rows) + 1)
    dtype = {"exact": object, "float": float, "complex": np.complex128}[kind]
    return RadialProfile(params, np.array(vals, dtype=dtype))
