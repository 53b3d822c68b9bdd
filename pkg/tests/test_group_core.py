import itertools
from fractions import Fraction

import numpy as np
import pytest

from hamming_harmonic.group_core import (
    GroupFunction,
    GroupParams,
    GroupPoint,
    NonRadialReport,
    OracleCapError,
    character,
    convolve_dense,
    decode,
    delta,
    encode,
    fourier_dense,
    fourier_scale,
    hamming_weight,
    inverse_fourier_dense,
    radialize,
    read_function_csv,
    sigma_dense,
    sphere_averages_dense,
    sphere_size,
    sphere_sizes,
    weight_table,
    write_function_csv,
)
from hamming_harmonic.krawtchouk import kraw_sum
from hamming_harmonic.radial_ops import noise_profile


def brute_sphere_size(m, N, r):
    return sum(1 for x in itertools.product(range(m + 1), repeat=N) if sum(d != 0 for d in x) == r)


def test_hamming_weight_examples():
    assert hamming_weight((1, 0, 2)) == 2
    assert hamming_weight((0, 0, 0, 0)) == 0
    assert hamming_weight(GroupPoint((1, 1, 1, 1))) == 4


@pytest.mark.parametrize("m,N,r,want", [(2, 3, 0, 1), (2, 3, 2, 12), (3, 4, 4, 81)])
def test_sphere_size_examples(m, N, r, want):
    assert sphere_size(GroupParams(m, N), r) == want == brute_sphere_size(m, N, r)


def test_sphere_sizes_sum_to_group_order():
    for m, N in [(1, 7), (2, 5), (4, 3)]:
        p = GroupParams(m, N)
        assert sum(sphere_sizes(p)) == p.size


def test_encode_decode_roundtrip(small):
    for i in range(small.size):
        assert encode(decode(i, small).digits, small.q) == i
    assert encode((1, 0, 0), 3) == 1  # little-endian


def test_weight_table_matches_digits(small):
    w = weight_table(small)
    for i in range(small.size):
        assert w[i] == hamming_weight(decode(i, small))


def test_sigma_convolution_at_origin():
    p = GroupParams(2, 2)
    s1 = sigma_dense(p, 1)
    conv = convolve_dense(s1, s1)
    assert conv[0] == Fraction(1, 4)


def test_delta_is_convolution_identity(small):
    f = GroupFunction(small, np.array([Fraction(i % 5) for i in range(small.size)], dtype=object))
    assert list(convolve_dense(f, delta(small)).values) == list(f.values)


def test_character_transform_is_point_mass(small):
    S = (1, 2, 0)
    fh = fourier_dense(character(small, S))
    idx = encode(S, small.q)
    assert abs(fh[idx] - 1) < 1e-12
    others = np.delete(np.asarray(fh.values), idx)
    assert np.max(np.abs(others)) < 1e-12


def test_delta_transform_is_flat(small):
    fh = np.asarray(fourier_dense(delta(small, exact=False)).values)
    assert np.allclose(fh, small.q ** (-small.N / 2), atol=1e-14)


@pytest.mark.parametrize("m,N", [(1, 4), (2, 3), (2, 4), (3, 3)])
def test_sigma_transform_is_krawtchouk(m, N):
    p = GroupParams(m, N)
    w = weight_table(p)
    for r in range(N + 1):
        fh = np.asarray(fourier_dense(sigma_dense(p, r, exact=False)).values) * fourier_scale(p)
        want = np.array([float(kraw_sum(p, s, r)) for s in w])
        assert np.max(np.abs(fh - want)) < 1e-12


def test_fft_and_direct_transform_agree(small):
    rng = np.random.default_rng(1)
    f = GroupFunction(small, rng.random(small.size) + 1j * rng.random(small.size))
    a = np.asarray(fourier_dense(f, "fft").values)
    b = np.asarray(fourier_dense(f, "direct").values)
    assert np.max(np.abs(a - b)) < 1e-12
    back = np.asarray(inverse_fourier_dense(fourier_dense(f)).values)
    assert np.max(np.abs(back - f.values)) < 1e-12


def test_radialize_examples(small):
    prof = radialize(sigma_dense(small, 2))
    assert prof.vals[2] == Fraction(1, 12)
    assert all(v == 0 for i, v in enumerate(prof.vals) if i != 2)
    rep = radialize(character(small, (1, 0, 0)))
    assert isinstance(rep, NonRadialReport) and not rep


def test_radialize_noise_measure(small):
    p = Fraction(1, 3)
    w = weight_table(small)
    dense = GroupFunction(small, np.array([(p / 2) ** r * (1 - p) ** (3 - r) for r in w], dtype=object))
    assert list(radialize(dense).vals) == list(noise_profile(small, p).vals)


def test_sphere_averages_dense_exact_vs_convolution():
    p = GroupParams(2, 3)
    rng = np.random.default_rng(3)
    f = GroupFunction(p, np.array([Fraction(int(v)) for v in rng.integers(0, 9, p.size)], dtype=object))
    avg = sphere_averages_dense(f)
    for r in range(p.N + 1):
        assert list(avg[r]) == list(convolve_dense(f, sigma_dense(p, r)).values)


def test_oracle_cap_enforced():
    p = GroupParams(9, 6, oracle_cap=10**5)
    with pytest.raises(OracleCapError):
        delta(p)


def test_function_csv_roundtrip(tmp_path, small):
    f = GroupFunction(small, np.array([Fraction(i, 7) for i in range(small.size)], dtype=object))
    path = tmp_path / "f.csv"
    write_function_csv(f, path)
    g = read_function_csv(path, small)
    assert list(g.values) == list(f.values)


def test_group_params_validation():
    with pytest.raises(ValueError):
        GroupParams(0, 3)
    p = GroupParams(3, 8)
    assert p.c_m == Fraction(3, 4)
    assert p.local_cutoff == 6 and p.distant_cutoff == 2
