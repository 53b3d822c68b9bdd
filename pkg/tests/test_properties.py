"""Hypothesis checks of the structural invariants."""
import math
from fractions import Fraction

import numpy as np
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from hamming_harmonic import radial_ops as ro
from hamming_harmonic.group_core import (
    GroupFunction,
    GroupParams,
    convolve_dense,
    fourier_dense,
    radialize,
    sphere_sizes,
    weight_table,
)
from hamming_harmonic.krawtchouk import (
    check_unimodal,
    diff_multiplier,
    kraw_sum,
    literal_difference,
    summand_analysis,
)

SETTINGS = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@st.composite
def dense_group(draw, cap=10**4):
    m = draw(st.integers(1, 6))
    n_max = 1
    while (m + 1) ** (n_max + 1) <= cap:
        n_max += 1
    return GroupParams(m, draw(st.integers(1, min(n_max, 8))))


@st.composite
def small_dense_group(draw):
    return draw(dense_group(cap=128))


@st.composite
def exact_group(draw, n_max=40):
    return GroupParams(draw(st.integers(1, 5)), draw(st.integers(1, n_max)))


@st.composite
def radial(draw, params=None, exact=False):
    params = params or draw(exact_group(24))
    if exact:
        vals = draw(st.lists(st.integers(-20, 20), min_size=params.N + 1, max_size=params.N + 1))
        return ro.RadialProfile(params, np.array([Fraction(v) for v in vals], dtype=object))
    vals = draw(st.lists(st.floats(0, 1, allow_nan=False), min_size=params.N + 1, max_size=params.N + 1))
    return ro.RadialProfile(params, np.array(vals))


@SETTINGS
@given(dense_group())
def test_sphere_sizes_partition_group(params):
    assert sum(sphere_sizes(params)) == params.size


@SETTINGS
@given(small_dense_group(), st.integers(0, 2**32 - 1))
def test_convolution_commutative_associative(params, seed):
    rng = np.random.default_rng(seed)

    def rand():
        return GroupFunction(params, np.array([Fraction(int(a), int(b)) for a, b in
                                               zip(rng.integers(-5, 6, params.size), rng.integers(1, 4, params.size))],
                                              dtype=object))

    f, g, h = rand(), rand(), rand()
    assert list(convolve_dense(f, g).values) == list(convolve_dense(g, f).values)
    lhs = convolve_dense(convolve_dense(f, g), h).values
    rhs = convolve_dense(f, convolve_dense(g, h)).values
    assert list(lhs) == list(rhs)


@SETTINGS
@given(dense_group(), st.integers(0, 2**32 - 1))
def test_parseval(params, seed):
    rng = np.random.default_rng(seed)
    for _ in range(20):
        f = rng.normal(size=params.size) + 1j * rng.normal(size=params.size)
        fh = np.asarray(fourier_dense(GroupFunction(params, f)).values)
        a, b = np.sum(np.abs(f) ** 2), np.sum(np.abs(fh) ** 2)
        assert abs(a - b) <= 1e-10 * a


@SETTINGS
@given(small_dense_group(), st.data())
def test_radial_closed_under_convolution(params, data):
    w = weight_table(params)
    f = data.draw(radial(params, exact=True))
    g = data.draw(radial(params, exact=True))
    conv = convolve_dense(GroupFunction(params, f.vals[w]), GroupFunction(params, g.vals[w]))
    prof = radialize(conv)
    assert prof
    # and the radial fast path reproduces it
    assert list(prof.vals) == list(ro.apply_radial(f, g).vals)


@SETTINGS
@given(exact_group(), st.data())
def test_krawtchouk_symmetry_and_boundary(params, data):
    k = data.draw(st.integers(0, params.N))
    r = data.draw(st.integers(0, params.N))
    assert kraw_sum(params, k, r) == kraw_sum(params, r, k)
    assert kraw_sum(params, k, 0) == kraw_sum(params, 0, r) == 1


@SETTINGS
@given(exact_group(), st.data())
def test_krawtchouk_derivative_identity(params, data):
    m, N = params.m, params.N
    k = data.draw(st.integers(1, N))
    r = data.draw(st.integers(1, N))
    lhs = kraw_sum(params, k, r) - kraw_sum(params, k - 1, r)
    rhs = (-1 / params.c_m) * Fraction(math.comb(N - 1, r - 1), math.comb(N, r)) * kraw_sum((m, N - 1), k - 1, r - 1)
    assert lhs == rhs


@SETTINGS
@given(exact_group(), st.data())
def test_higher_difference_closed_form(params, data):
    t = data.draw(st.integers(0, min(4, params.N)))
    k = data.draw(st.integers(t, params.N))
    r = data.draw(st.integers(0, params.N))
    assert diff_multiplier(params, t, k, r) == literal_difference(params, t, k, r)


@SETTINGS
@given(exact_group(60), st.data())
def test_summand_unimodal_and_dominant(params, data):
    r = data.draw(st.integers(0, params.N))
    k = data.draw(st.integers(r, params.N))
    sa = summand_analysis(params, r, k)
    assert check_unimodal(sa)
    assert abs(kraw_sum(params, k, r)) <= sa.a_n
    if sa.J is not None:
        for i in range(len(sa.a) - 1):
            j = sa.ell + i
            if j <= sa.J:
                assert sa.a[i + 1] >= sa.a[i]
            if j >= sa.J:
                assert sa.a[i + 1] <= sa.a[i]
    if r * k >= 2 * params.N * params.m and params.m > 1:
        assert sa.A > 0


@SETTINGS
@given(radial())
def test_positive_kernels_preserve_positivity(f):
    params = f.params
    fam = ro.sphere_family(f)
    assert np.all(fam >= -1e-12)
    mu = ro.apply_radial(ro.noise_profile(params, params.c_m / 3).as_float(), f)
    assert np.all(np.asarray(mu.vals) >= -1e-12)
    for lam in (0, Fraction(1, 2), 2):
        rows = ro.cesaro_family(lam, f, "local", fam=fam)
        assert np.all(np.asarray(rows, dtype=float) >= -1e-12)


@SETTINGS
@given(radial())
def test_sphere_averages_contract(f):
    params = f.params
    fam = ro.sphere_family(f)
    for p in (1, 2, math.inf):
        base = f.lp_norm(p)
        for k in range(params.N + 1):
            # Q^k = P^{N-k}, so all rows cover both families
            assert ro.RadialProfile(params, fam[k]).lp_norm(p) <= base * (1 + 1e-12) + 1e-300


@SETTINGS
@given(st.floats(0, 5), st.floats(0, 5), exact_group())
def test_semigroup_law(t, s, params):
    a = ro.semigroup_multiplier(params, t) * ro.semigroup_multiplier(params, s)
    b = ro.semigroup_multiplier(params, t + s)
    assert np.max(np.abs(a.eig - b.eig)) <= 1e-12


@SETTINGS
@given(exact_group(30), st.data())
def test_distant_difference_magnitude(params, data):
    m, N = params.m, params.N
    cut = params.distant_cutoff
    t = data.draw(st.integers(1, 3))
    D = ro.difference_multipliers(params, t, "distant", exact=True)
    for k in range(t, cut + 1):
        for r in range(N + 1):
            if r < t:
                assert D[k, r] == 0
                continue
            want = (1 / params.c_m) ** t * Fraction(math.comb(N - t, r - t), math.comb(N, r)) \
                * abs(kraw_sum((m, N - t), r - t, N - k))
            assert abs(D[k, r]) == want


@SETTINGS
@given(radial(GroupParams(2, 12), exact=True) | radial(GroupParams(3, 9), exact=True))
def test_split_bound_exact(f):
    M = ro.maximal("M", f).profile.vals
    ML = ro.maximal("ML", f).profile.vals
    MD = ro.maximal("MD", f).profile.vals
    assert all(a <= b + c for a, b, c in zip(M, ML, MD))
    assert all(max(b, c) <= a for a, b, c in zip(M, ML, MD))
