import math
from fractions import Fraction

import numpy as np
import pytest

from hamming_harmonic import radial_ops as ro
from hamming_harmonic.bounds_lab import (
    CertificateReport,
    default_grid,
    lower_plateau_stat,
    norm_search,
    plateau_stat,
    verify_bigkchoice,
    verify_blbound,
    verify_decay,
    verify_dominant,
    verify_ns,
    verify_oracle,
    verify_reparam,
    verify_sphere_transfer,
    verify_square_sum,
    verify_weak11,
)
from hamming_harmonic.bounds_lab.certificates import (
    bigkchoice_constant,
    blbound_constant,
    square_sum_per_r,
    transfer_coefficients,
    weak11_value,
)
from hamming_harmonic.bounds_lab.norms import radial_ascent, radial_ratio
from hamming_harmonic.bounds_lab.report import csv_text, fmt
from hamming_harmonic.group_core import GroupParams


def test_plateau_statistics():
    assert plateau_stat([1, 2, 3]) == 1.5
    assert plateau_stat([0, 0, 0]) == 1.0
    assert plateau_stat([4, 1, 1, 1]) == 4.0
    assert lower_plateau_stat([4, 2, 1]) == 2.0


def test_fmt_and_csv_are_stable():
    assert fmt(Fraction(3, 8)) == "3/8"
    assert fmt(0.1) == "0.1"
    assert fmt(True) == "true" and fmt(None) == ""
    text = csv_text(["a", "b"], [{"a": 1, "b": Fraction(1, 2)}])
    assert text == "a,b\n1,1/2\n"


def test_report_verdict_and_repro():
    rep = CertificateReport("x", {}, ["m"])
    assert rep.passed and rep.verdict == "pass"
    rep.fail("bad", "hamming-harmonic verify decay --m 2 --n 8", m=2)
    assert not rep.passed
    assert "repro: hamming-harmonic verify decay" in rep.summary_line()


def test_decay_small_grid():
    rep = verify_decay([2, 3], [4, 8, 16])
    assert rep.passed
    for row in rep.rows:
        assert 0 < row["d_min"] <= math.log(row["m"]) + 1e-12
    m2n4 = next(r for r in rep.rows if r["m"] == 2 and r["N"] == 4)
    assert m2n4["d_min"] <= math.log(8)


def test_dominant_small_grid():
    rep = verify_dominant([2], range(2, 13))
    assert rep.passed
    assert all(row["violations"] == 0 for row in rep.rows)


def test_square_sum_vanishes_below_t():
    P = GroupParams(2, 16)
    for t in (1, 2):
        for family in ("local", "distant"):
            vals = square_sum_per_r(P, t, family)
            assert all(v == 0 for v in vals[:t])


def test_square_sum_small_grid():
    rep = verify_square_sum(1, "local", [2], [8, 16, 32])
    assert rep.passed
    assert all(row["zero_below_t"] for row in rep.rows)
    rep = verify_square_sum(1, "distant", [2], [8, 16, 32])
    assert all(row["tail_slope"] is None or row["tail_slope"] < 0 for row in rep.rows)


def test_reparam_match():
    rep = verify_reparam(2, 6)
    assert rep.passed
    assert all(row["sup_diff"] <= 1e-8 for row in rep.rows)
    assert all(abs(row["nu_mass"] - 1) <= 1e-10 for row in rep.rows)


def test_bigkchoice_l0_floor():
    for N in (8, 32):
        c, l, L, c0 = bigkchoice_constant(N, (2 * N) // 3)
        assert c > 0
        assert c0 >= (1 - math.exp(-1)) * N / (N + 1) - 1e-15
    rep = verify_bigkchoice([2], [8, 16])
    assert rep.passed


def test_blbound_example_and_grid():
    assert ro.b_weights(2, 2)[1] * 1 == Fraction(1, 2)
    c, d, j = blbound_constant(2, 16, one_sided=False)
    assert c > 0
    rep = verify_blbound([2, 3], [8, 16])
    assert rep.passed


def test_transfer_coefficients_match_direct_sum():
    m, N = 2, 8
    ratio, L, d = transfer_coefficients(m, N)
    direct = min(sum(ro.b_weights(m, l)[dd] for l in range(dd, LL + 1))
                 for LL in range((m * N) // (m + 1) + 1) for dd in range(LL // m + 1))
    assert ratio == direct > 0
    # L = 0: both sides are sigma_N
    assert sum(ro.b_weights(m, 0)) == 1
    rep = verify_sphere_transfer([2], [8, 16])
    assert rep.passed


def test_ns_small():
    rep = verify_ns([2], [8, 16], alphas=(Fraction(1, 2),), betas=(0,), ts=(1,), batch=3)
    assert rep.passed
    assert all(math.isfinite(float(row["constant"])) for row in rep.rows)


def test_weak11_uniform_witness():
    P = GroupParams(2, 6)
    u = ro.constant_profile(P, Fraction(1, P.size))
    for op in ("MSL", "MSD"):
        g = np.asarray(ro.maximal(op, u).profile.vals, dtype=float)
        assert weak11_value(P, g, u) <= 1
    rep = verify_weak11("MSL", [2], [8, 16], batch=3)
    assert rep.passed
    with pytest.raises(ValueError):
        verify_weak11("M", [2], [8])


def test_norm_ratio_constant_and_ascent():
    P = GroupParams(2, 12)
    assert radial_ratio(P, np.ones(13), 2.0) == pytest.approx(1.0, abs=1e-14)
    ball = np.where(np.arange(13) <= 6, 1.0, 0.0)
    start = radial_ratio(P, ball, 2.0)
    best, f, _ = radial_ascent(P, ball, 2.0)
    assert best >= start
    assert radial_ratio(P, f, 2.0) == pytest.approx(best, rel=1e-12)


def test_norm_search_small_deterministic():
    a = norm_search("M", 2.0, [2], [4, 8], seed=3, iters=20, restarts=1)
    b = norm_search("M", 2.0, [2], [4, 8], seed=3, iters=20, restarts=1)
    assert a.to_csv() == b.to_csv()
    for row in a.rows:
        assert row["test_best"] <= row["ascent_best"] <= row["best"]


def test_oracle_small_grid():
    rep = verify_oracle([(1, 3), (2, 3), (3, 2)])
    assert rep.passed
    assert rep.measured["worst_float_err"] <= 1e-10


def test_default_grid_respects_cap():
    grid = default_grid(10**4)
    assert all((m + 1) ** N <= 10**4 for m, N in grid)
    assert (2, 8) in grid and (1, 13) in grid
    assert default_grid(100, [2]) == [(2, 1), (2, 2), (2, 3), (2, 4)]
