"""Exact group arithmetic on Z_{m+1}^N and the dense brute-force oracle.

Elements are encoded as base-(m+1) little-endian integers: digit ``i``
contributes ``x(i) * (m+1)**i``.  Everything dense in this module costs at
least ``(m+1)**N`` work and is guarded by ``GroupParams.oracle_cap``.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Union

import numpy as np

DEFAULT_ORACLE_CAP = 10**5


class OracleCapError(ValueError):
    """Raised when a dense operation would exceed the configured element cap."""


@dataclass(frozen=True)
class GroupParams:
    """The group Z_{m+1}^N: alphabet size ``m + 1`` and dimension ``N``."""

    m: int
    N: int
    oracle_cap: int = field(default=DEFAULT_ORACLE_CAP, compare=False)

    def __post_init__(self):
        if self.m < 1 or self.N < 1:
            raise ValueError(f"need m >= 1 and N >= 1, got m={self.m}, N={self.N}")

    @property
    def q(self) -> int:
        return self.m + 1

    @property
    def c_m(self) -> Fraction:
        return Fraction(self.m, self.m + 1)

    @property
    def size(self) -> int:
        return (self.m + 1) ** self.N

    @property
    def local_cutoff(self) -> int:
        """floor(c_m N): the largest local radius."""
        return (self.m * self.N) // (self.m + 1)

    @property
    def distant_cutoff(self) -> int:
        """floor(N / (m+1)): the largest distant offset."""
        return self.N // (self.m + 1)

    def check_oracle(self) -> None:
        if self.size > self.oracle_cap:
            raise OracleCapError(
                f"(m+1)^N = {self.size} exceeds oracle cap {self.oracle_cap} "
                f"(m={self.m}, N={self.N})"
            )


@dataclass(frozen=True)
class GroupPoint:
    digits: tuple

    def __post_init__(self):
        object.__setattr__(self, "digits", tuple(int(d) for d in self.digits))

    def validate(self, params: GroupParams) -> None:
        if len(self.digits) != params.N or any(d < 0 or d > params.m for d in self.digits):
            raise ValueError(f"{self.digits} is not a point of Z_{params.q}^{params.N}")

    def add(self, other: "GroupPoint", params: GroupParams) -> "GroupPoint":
        return GroupPoint(tuple((a + b) % params.q for a, b in zip(self.digits, other.digits)))


def hamming_weight(x: Union[GroupPoint, Sequence[int]]) -> int:
    digits = x.digits if isinstance(x, GroupPoint) else x
    return sum(1 for d in digits if d != 0)


def encode(digits: Sequence[int], q: int) -> int:
    idx = 0
    for i, d in enumerate(digits):
        idx += int(d) * q**i
    return idx


def decode(index: int, params: GroupParams) -> GroupPoint:
    digits = []
    for _ in range(params.N):
        index, d = divmod(index, params.q)
        digits.append(d)
    return GroupPoint(tuple(digits))


def sphere_size(params: GroupParams, r: int) -> int:
    """|S_r| = C(N, r) m^r; empty for r < 0."""
    if r < 0:
        return 0
    if r > params.N:
        raise ValueError(f"radius {r} out of range 0..{params.N}")
    return math.comb(params.N, r) * params.m**r


def sphere_sizes(params: GroupParams) -> list:
    return [sphere_size(params, r) for r in range(params.N + 1)]


@lru_cache(maxsize=32)
def _digit_table(q: int, N: int) -> np.ndarray:
    idx = np.arange(q**N, dtype=np.int64)
    digits = np.empty((q**N, N), dtype=np.int64)
    for i in range(N):
        idx, digits[:, i] = np.divmod(idx, q)
    digits.setflags(write=False)
    return digits


def digit_table(params: GroupParams) -> np.ndarray:
    """(size, N) array of digits of every element, in index order."""
    params.check_oracle()
    return _digit_table(params.q, params.N)


def weight_table(params: GroupParams) -> np.ndarray:
    return np.count_nonzero(digit_table(params), axis=1)


def _powers(params: GroupParams) -> np.ndarray:
    return params.q ** np.arange(params.N, dtype=np.int64)


def negation_index(params: GroupParams) -> np.ndarray:
    """Index of -x for every x."""
    return ((-digit_table(params)) % params.q) @ _powers(params)


@dataclass(frozen=True)
class GroupFunction:
    """A dense table f: Z_{m+1}^N -> C indexed by the little-endian encoding.

    ``values`` is a numpy array; dtype ``object`` holds exact ``Fraction`` values.
    """

    params: GroupParams
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values)
        if vals.ndim != 1 or vals.shape[0] != self.params.size:
            raise ValueError(
                f"expected {self.params.size} values for m={self.params.m}, N={self.params.N}, "
                f"got shape {vals.shape}"
            )
        vals = vals.copy()
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def exact(self) -> bool:
        return self.values.dtype == object

    def __getitem__(self, x):
        if isinstance(x, GroupPoint):
            x = encode(x.digits, self.params.q)
        return self.values[x]


def delta(params: GroupParams, exact: bool = True) -> GroupFunction:
    params.check_oracle()
    if exact:
        vals = np.full(params.size, Fraction(0), dtype=object)
        vals[0] = Fraction(1)
    else:
        vals = np.zeros(params.size)
        vals[0] = 1.0
    return GroupFunction(params, vals)


def sigma_dense(params: GroupParams, r: int, exact: bool = True) -> GroupFunction:
    """Dense L^1-normalized indicator of the r-sphere (zero for r < 0)."""
    w = weight_table(params)
    if exact:
        vals = np.full(params.size, Fraction(0), dtype=object)
        if r >= 0:
            vals[w == r] = Fraction(1, sphere_size(params, r))
    else:
        vals = np.zeros(params.size)
        if r >= 0:
            vals[w == r] = 1.0 / sphere_size(params, r)
    return GroupFunction(params, vals)


def character(params: GroupParams, S: Union[GroupPoint, Sequence[int]]) -> GroupFunction:
    """L^2-normalized character chi_S(x) = (m+1)^{-N/2} xi^{S.x}."""
    s = np.asarray(S.digits if isinstance(S, GroupPoint) else S, dtype=np.int64)
    phase = (digit_table(params) @ s) % params.q
    vals = np.exp(2j * np.pi * phase / params.q) / params.q ** (params.N / 2)
    return GroupFunction(params, vals)


def _check_pair(f: GroupFunction, g: GroupFunction) -> GroupParams:
    if (f.params.m, f.params.N) != (g.params.m, g.params.N):
        raise ValueError("group functions live on different groups")
    f.params.check_oracle()
    return f.params


def convolve_dense(f: GroupFunction, g: GroupFunction) -> GroupFunction:
    """(f*g)(x) = sum_y f(x - y) g(y), counting measure.

    Exact when both inputs hold Fractions; otherwise complex floats through the
    compiled kernel (or its numpy fallback).
    """
    params = _check_pair(f, g)
    if f.exact and g.exact:
        digits = digit_table(params)
        powers = _powers(params)
        out = np.full(params.size, Fraction(0), dtype=object)
        # iterate over the sparser argument; convolution is commutative
        a, b = (f, g) if np.count_nonzero(f.values != 0) >= np.count_nonzero(g.values != 0) else (g, f)
        for y in np.flatnonzero(b.values != 0):
            shifted = ((digits - digits[y]) % params.q) @ powers
            out = out + a.values[shifted] * b.values[y]
        return GroupFunction(params, out)

    from .kernels import dense_convolve

    fv = np.asarray(f.values, dtype=np.complex128)
    gv = np.asarray(g.values, dtype=np.complex128)
    if np.count_nonzero(fv) < np.count_nonzero(gv):
        fv, gv = gv, fv
    return GroupFunction(params, dense_convolve(fv, gv, params.q, params.N))


def fourier_scale(params: GroupParams):
    """(m+1)^{N/2}: multiplier = fourier_scale * fourier coefficient.

    With this factor the transform of sigma_r at a frequency of weight s is
    exactly the Krawtchouk value kappa_s(r).
    """
    return params.q ** (params.N / 2)


def fourier_dense(f: GroupFunction, method: str = "fft") -> GroupFunction:
    """hat f(S) = <f, chi_S> = sum_x f(x) conj(chi_S(x)), float path.

    ``method="direct"`` sums the character table explicitly (small groups);
    ``"fft"`` uses an N-dimensional FFT over the (m+1)^N grid.
    """
    params = f.params
    params.check_oracle()
    vals = np.asarray(f.values, dtype=np.complex128)
    if method == "fft":
        shape = (params.q,) * params.N
        # C-order axis j holds digit N-1-j; fftn treats all axes alike
        out = np.fft.fftn(vals.reshape(shape)).reshape(-1) / fourier_scale(params)
    elif method == "direct":
        digits = digit_table(params)
        phase = (digits @ digits.T) % params.q
        out = np.exp(-2j * np.pi * phase / params.q) @ vals / fourier_scale(params)
    else:
        raise ValueError(f"unknown method {method!r}")
    return GroupFunction(params, out)


def inverse_fourier_dense(fhat: GroupFunction) -> GroupFunction:
    """f(x) = sum_S hat f(S) chi_S(x)."""
    params = fhat.params
    params.check_oracle()
    shape = (params.q,) * params.N
    vals = np.asarray(fhat.values, dtype=np.complex128).reshape(shape)
    out = np.fft.ifftn(vals).reshape(-1) * fourier_scale(params)
    return GroupFunction(params, out)


def sphere_averages_dense(f: GroupFunction, normalize: bool = True) -> np.ndarray:
    """All sphere averages (sigma_r * f) for r = 0..N, shape (N+1, size).

    With ``normalize=False`` the raw sphere sums are returned instead; for
    integer-valued float input below 2**53 those sums are exact.

    Builds the unnormalized sphere sums coordinate by coordinate: the sphere
    generating function factors as prod_i (delta + z * 1_{y(i) != 0}).  Exact
    for Fraction input.  Independent of any Fourier or Krawtchouk machinery.
    """
    params = f.params
    params.check_oracle()
    N, q = params.N, params.q
    shape = (q,) * N
    dtype = object if f.exact else np.result_type(f.values.dtype, np.float64)
    state = np.zeros((N + 1,) + shape, dtype=dtype)
    if f.exact:
        state[...] = Fraction(0)
    state[0] = np.asarray(f.values, dtype=dtype).reshape(shape)
    for i in range(N):
        axis = 1 + i
        top = i + 1  # degrees above i+1 are still zero
        # sum over the q-1 nonzero shifts along this axis = axis total - self
        low = state[:top]
        shifted = low.sum(axis=axis, keepdims=True) - low
        state[1 : top + 1] = state[1 : top + 1] + shifted
    out = state.reshape(N + 1, -1)
    if not normalize:
        return out
    if f.exact:
        sizes = [Fraction(1, s) for s in sphere_sizes(params)]
        return np.array([out[r] * sizes[r] for r in range(N + 1)], dtype=object)
    sizes = np.array([float(s) for s in sphere_sizes(params)])
    return out / sizes[:, None]


@dataclass(frozen=True)
class NonRadialReport:
    """Returned by :func:`radialize` when ``f`` is not constant on some sphere."""

    radius: int
    max_deviation: float

    def __bool__(self):
        return False


def radialize(f: GroupFunction, tol: float = 1e-12):
    """Profile of ``f`` if it is constant on every sphere, else a NonRadialReport.

    Exact input is compared exactly; float input within ``tol`` times the
    largest magnitude of ``f``.
    """
    from .radial_ops import RadialProfile

    params = f.params
    w = weight_table(params)
    vals = f.values
    scale = float(np.max(np.abs(vals.astype(np.complex128)))) if vals.size else 0.0
    profile = []
    first_bad, worst = None, 0.0
    for r in range(params.N + 1):
        shell = vals[w == r]
        ref = shell[0]
        if f.exact:
            dev = max(abs(v - ref) for v in shell)
            bad = dev != 0
            dev = float(dev)
        else:
            dev = float(np.max(np.abs(shell - ref)))
            bad = dev > tol * max(scale, 1e-300)
        if bad:
            worst = max(worst, dev)
            if first_bad is None:
                first_bad = r
        profile.append(ref)
    if first_bad is not None:
        return NonRadialReport(first_bad, worst)
    if f.exact:
        return RadialProfile(params, np.array(profile, dtype=object))
    arr = np.array(profile)
    if np.iscomplexobj(arr) and np.all(arr.imag == 0):
        arr = arr.real
    return RadialProfile(params, arr)


def write_function_csv(f: GroupFunction, path) -> None:
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        if f.exact:
            out.writerow(["index", "num", "den"])
            for i, v in enumerate(f.values):
                v = Fraction(v)
                out.writerow([i, v.numerator, v.denominator])
        else:
            out.writerow(["index", "re", "im"])
            for i, v in enumerate(np.asarray(f.values, dtype=np.complex128)):
                out.writerow([i, repr(float(v.real)), repr(float(v.imag))])


def read_function_csv(path, params: GroupParams) -> GroupFunction:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    if len(body) != params.size:
        raise ValueError(f"{path}: expected {params.size} rows, found {len(body)}")
    if header == ["index", "num", "den"]:
        vals = np.empty(params.size, dtype=object)
        for row in body:
            vals[int(row[0])] = Fraction(int(row[1]), int(row[2]))
    elif header == ["index", "re", "im"]:
        vals = np.empty(params.size, dtype=np.complex128)
        for row in body:
            vals[int(row[0])] = complex(float(row[1]), float(row[2]))
    else:
        raise ValueError(f"{path}: unrecognized header {header}")
    return GroupFunction(params, vals)
