import math
from fractions import Fraction

import numpy as np
import pytest

from hamming_harmonic.group_core import GroupParams
from hamming_harmonic.krawtchouk import (
    ExactCapError,
    PrecisionLossError,
    check_unimodal,
    decay_exponent,
    decay_min,
    diff_multiplier,
    dominant_bound_check,
    kraw_float,
    kraw_sum,
    krawtchouk_table,
    literal_difference,
    log_abs_kraw,
    summand_analysis,
)


def p(m, N):
    return GroupParams(m, N)


@pytest.mark.parametrize("k,r,want", [(1, 2, Fraction(1, 4)), (2, 2, Fraction(-1, 8)), (2, 1, Fraction(1, 4))])
def test_kraw_sum_examples(k, r, want):
    assert kraw_sum(p(2, 4), k, r) == want


def test_kraw_first_row_is_linear():
    for m in (1, 2, 3):
        for N in (3, 7):
            c = Fraction(m, m + 1)
            for r in range(N + 1):
                assert kraw_sum(p(m, N), 1, r) == 1 - Fraction(r) / (c * N)


def test_kraw_negative_arguments_vanish():
    assert kraw_sum((2, 4), -1, 2) == 0
    assert kraw_sum((2, 4), 2, -1) == 0
    assert kraw_sum((2, -1), 0, 0) == 0


def test_kraw_top_row_closed_form():
    for m in (2, 3, 4):
        N = 9
        for r in range(N + 1):
            assert kraw_sum(p(m, N), N, r) == Fraction(-1, m) ** r


def test_kraw_float_agrees_with_exact():
    for m in (2, 3, 4):
        for N in (1, 8, 33, 64):
            K = krawtchouk_table(p(m, N)).values
            F = krawtchouk_table(p(m, N), exact=False).values
            err = np.max(np.abs(F - K.astype(float)))
            assert err <= 1e-12, (m, N, err)


def test_kraw_float_large_n_stays_finite():
    v = kraw_float(p(2, 4096), 2048, 1000)
    assert math.isfinite(v) and abs(v) < 1


def test_kraw_float_reports_precision_loss():
    with pytest.raises(PrecisionLossError):
        kraw_float(p(2, 64), 30, 30, tol=0.0)


def test_exact_cap():
    with pytest.raises(ExactCapError):
        krawtchouk_table(p(2, 300))


def test_diff_multiplier_examples():
    P = p(2, 4)
    assert diff_multiplier(P, 1, 2, 2) == Fraction(-3, 8) == literal_difference(P, 1, 2, 2)
    assert diff_multiplier(P, 0, 3, 1) == kraw_sum(P, 3, 1)
    assert diff_multiplier(P, 2, 3, 1) == 0
    with pytest.raises(ValueError):
        diff_multiplier(P, 3, 2, 2)


def test_summand_analysis_example():
    sa = summand_analysis(p(2, 4), 2, 2)
    assert sa.ell == 0 and sa.a == (Fraction(1, 6), Fraction(1, 3), Fraction(1, 24)) and sa.n == 1
    assert abs(sa.value) == Fraction(1, 8) <= sa.a_n
    assert sa.value == kraw_sum(p(2, 4), 2, 2)
    assert check_unimodal(sa)


def test_summand_lower_index():
    sa = summand_analysis(p(2, 6), 4, 5)
    assert sa.ell == 4 + 5 - 6


def test_decay_exponent_examples():
    assert decay_exponent(p(2, 4), 2, 2) == pytest.approx(math.log(8), abs=1e-15)
    for m in (2, 3):
        N = 10
        assert decay_exponent(p(m, N), N, N) == pytest.approx(math.log(m), abs=1e-12)
    d, r, k = decay_min(p(2, 4))
    assert 0 < d <= math.log(8)


def test_decay_exponent_zero_is_infinite():
    # kappa_1^N(r) vanishes at r = c_m N
    assert decay_exponent(p(2, 3), 2, 1) == math.inf
    assert log_abs_kraw(p(2, 3), 1, 2) == -math.inf


def test_dominant_check_small():
    rep = dominant_bound_check(p(2, 4))
    assert rep.ok and rep.violations == []
    # (r, k) = (2, 2) has n = 1 but rk < 2Nm, so the minimum witness is elsewhere
    assert rep.eps_witness != (2, 2)
