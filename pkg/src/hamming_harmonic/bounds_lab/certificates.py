"""Certificate drivers: grid sweeps that measure the constants of each bound.

Every driver returns a :class:`CertificateReport`.  Pass criteria are
positivity, finiteness and an N-plateau; measured constants are reported,
never compared to invented reference values.
"""
from __future__ import annotations

import math
import time
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy import integrate

from .. import radial_ops as ro
from ..group_core import (
    GroupFunction,
    GroupParams,
    convolve_dense,
    fourier_dense,
    radialize,
    sigma_dense,
    sphere_averages_dense,
    sphere_sizes,
    weight_table,
)
from ..krawtchouk import (
    decay_min,
    dominant_bound_check,
    krawtchouk_table,
)
from .dense_ops import dense_operator
from .report import DEFAULT_PLATEAU, CertificateReport, lower_plateau_stat, plateau_stat

DECAY_DROP = 0.9
REPARAM_TOL = 1e-8
MASS_TOL = 1e-10


def _rng(seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, *key]))


def _repro(suite: str, m: int, N: int, extra: str = "") -> str:
    return f"hamming-harmonic verify {suite} --m {m} --n {N}{extra}"


def _small_instance(m: int, cap: int = 2000) -> GroupParams:
    """Largest N >= 2 with (m+1)^N <= cap, for dense cross-validation."""
    N = 2
    while (m + 1) ** (N + 1) <= cap:
        N += 1
    return GroupParams(m, N)


def _densify(f: ro.RadialProfile) -> GroupFunction:
    w = weight_table(f.params)
    vals = f.vals[w]
    return GroupFunction(f.params, np.asarray(vals, dtype=object if f.exact else np.complex128))


def _kraw_crosscheck(params: GroupParams) -> float:
    """max |dense Fourier of sigma_k (radialized, rescaled) - kappa row k|."""
    K = krawtchouk_table(params, exact=False).values
    scale = params.size ** 0.5
    worst = 0.0
    for k in range(params.N + 1):
        fh = fourier_dense(sigma_dense(params, k, exact=False))
        prof = radialize(GroupFunction(params, fh.values * scale), tol=1e-9)
        worst = max(worst, float(np.max(np.abs(np.asarray(prof.vals) - K[k]))))
    return worst


# ---------------------------------------------------------------- decay

def verify_decay(ms: Sequence[int], Ns: Sequence[int], floor: float = 0.0,
                 crosscheck: bool = True) -> CertificateReport:
    start = time.perf_counter()
    rep = CertificateReport(
        "decay", {"m": list(ms), "N": list(Ns)},
        ["m", "N", "d_min", "argmin_r", "argmin_k", "ln_m"],
    )
    for m in ms:
        seq = []
        for N in Ns:
            d, r, k = decay_min((m, N))
            seq.append(d)
            rep.rows.append({"m": m, "N": N, "d_min": d, "argmin_r": r, "argmin_k": k,
                             "ln_m": math.log(m)})
            if not d > floor:
                rep.fail("d_min not above floor", _repro("decay", m, N), m=m, N=N, d_min=d)
            if m > 1 and d > math.log(m) * (1 + 1e-12):
                rep.fail("d_min exceeds ln m", _repro("decay", m, N), m=m, N=N, d_min=d)
        if len(seq) > 1 and seq[-1] < DECAY_DROP * min(seq[:-1]):
            rep.fail("d_min still dropping at the largest N", _repro("decay", m, Ns[-1]),
                     m=m, last=seq[-1], earlier_min=min(seq[:-1]))
        rep.measured[f"d_min_last[m={m}]"] = seq[-1] if seq else math.nan
    if crosscheck:
        for m in ms:
            err = _kraw_crosscheck(_small_instance(m))
            rep.measured[f"oracle_err[m={m}]"] = err
            if err > 1e-10:
                rep.fail("Krawtchouk table disagrees with dense Fourier", m=m, err=err)
    rep.runtime = time.perf_counter() - start
    return rep


# ---------------------------------------------------------------- dominant summand

def verify_dominant(ms: Sequence[int], Ns: Sequence[int],
                    threshold: float = DEFAULT_PLATEAU) -> CertificateReport:
    start = time.perf_counter()
    rep = CertificateReport(
        "dominant", {"m": list(ms), "N": list(Ns)},
        ["m", "N", "pairs", "violations", "unimodal_failures", "ceil_failures",
         "eps_min", "eps_r", "eps_k", "case3_pairs", "case3_failures"],
    )
    for m in ms:
        eps_seq = []
        for N in Ns:
            dr = dominant_bound_check((m, N))
            w = dr.eps_witness or (None, None)
            rep.rows.append({
                "m": m, "N": N, "pairs": dr.pairs, "violations": len(dr.violations),
                "unimodal_failures": len(dr.unimodal_failures),
                "ceil_failures": len(dr.ceil_failures),
                "eps_min": dr.eps_min if math.isfinite(dr.eps_min) else None,
                "eps_r": w[0], "eps_k": w[1], "case3_pairs": dr.case3_pairs,
                "case3_failures": len(dr.case3_failures),
            })
            for kind, items in (("|kappa| > a_n", dr.violations),
                                ("unimodality", dr.unimodal_failures),
                                ("n != ceil(J)", dr.ceil_failures),
                                ("a_0 > exp(-rk/N)", dr.case3_failures)):
                for (mm, NN, r, k) in items[:5]:
                    rep.fail(kind, _repro("dominant", mm, NN), m=mm, N=NN, r=r, k=k)
            if math.isfinite(dr.eps_min):
                if not dr.eps_min > 0:
                    rep.fail("peak ratio not positive", _repro("dominant", m, N), m=m, N=N)
                eps_seq.append(dr.eps_min)
        if eps_seq:
            stat = lower_plateau_stat(eps_seq)
            rep.measured[f"eps_min[m={m}]"] = min(eps_seq)
            rep.measured[f"eps_plateau[m={m}]"] = stat
            if stat > threshold:
                rep.fail("peak ratio not N-stable", m=m, stat=stat)
    rep.runtime = time.perf_counter() - start
    return rep


# ---------------------------------------------------------------- square sums

def square_sum_per_r(params: GroupParams, t: int, family: str = "local") -> np.ndarray:
    """sum_{k=t}^{cutoff} (k+1)^{2t-1} |multiplier of Delta^t X^k at weight r|^2, per r.

    Uses the closed form of the t-th difference, so entries with r < t are 0
    by construction and no cancellation occurs.
    """
    m, N = params.m, params.N
    if t > N:
        return np.zeros(N + 1)
    K = krawtchouk_table(GroupParams(m, N - t), exact=False).values
    cut = params.local_cutoff if family == "local" else params.distant_cutoff
    inv_c = (m + 1) / m
    out = np.zeros(N + 1)
    ks = np.arange(t, cut + 1)
    if ks.size == 0:
        return out
    w = (ks + 1.0) ** (2 * t - 1)
    for r in range(t, N + 1):
        ratio = 1.0
        for i in range(t):
            ratio *= (r - i) / (N - i)
        if family == "local":
            kap = K[r - t, ks - t]
        else:
            kap = K[r - t, N - ks]
        out[r] = inv_c ** (2 * t) * ratio**2 * float(np.sum(w * kap**2))
    return out


def _square_sum_crosscheck(params: GroupParams, t: int, family: str) -> float:
    """Closed-form square sums vs sums of literal exact differences."""
    K = krawtchouk_table(params, exact=True).values
    N = params.N
    cut = params.local_cutoff if family == "local" else params.distant_cutoff
    per_r = square_sum_per_r(params, t, family)
    worst = 0.0
    for r in range(N + 1):
        total = Fraction(0)
        for k in range(t, cut + 1):
            if family == "local":
                d = sum((-1) ** j * math.comb(t, j) * K[r, k - j] for j in range(t + 1))
            else:
                d = sum((-1) ** j * math.comb(t, j) * K[r, N - k + j] for j in range(t + 1))
            total += (k + 1) ** (2 * t - 1) * d * d
        worst = max(worst, abs(float(total) - per_r[r]) / max(1.0, abs(float(total))))
    return worst


def _loglinear_slope(r: np.ndarray, y: np.ndarray) -> float:
    mask = y > 0
    if mask.sum() < 2:
        return -math.inf
    return float(np.polyfit(r[mask], np.log(y[mask]), 1)[0])


def verify_square_sum(t: int, family: str, ms: Sequence[int], Ns: Sequence[int],
                      threshold: float = DEFAULT_PLATEAU,
                      crosscheck: bool = True) -> CertificateReport:
    start = time.perf_counter()
    lemma = f"square_sum_{family}_t{t}"
    rep = CertificateReport(
        lemma, {"t": t, "family": family, "m": list(ms), "N": list(Ns)},
        ["m", "N", "t", "family", "sup_r", "argmax_r", "tail_slope", "zero_below_t"],
    )
    for m in ms:
        sups = []
        for N in Ns:
            params = GroupParams(m, N)
            per_r = square_sum_per_r(params, t, family)
            zero = bool(np.all(per_r[: min(t, N + 1)] == 0))
            slope = _loglinear_slope(np.arange(N + 1)[t:], per_r[t:]) if family == "distant" else None
            sup = float(np.max(per_r))
            sups.append(sup)
            rep.rows.append({"m": m, "N": N, "t": t, "family": family, "sup_r": sup,
                             "argmax_r": int(np.argmax(per_r)), "tail_slope": slope,
                             "zero_below_t": zero})
            if not zero:
                rep.fail("per-r sum nonzero below t", _repro("square-sum", m, N, f" --t {t}"), m=m, N=N)
            if not math.isfinite(sup):
                rep.fail("square sum not finite", _repro("square-sum", m, N, f" --t {t}"), m=m, N=N)
            if slope is not None and not slope < 0:
                rep.fail("distant per-r sums do not decay", _repro("square-sum", m, N, f" --t {t}"),
                         m=m, N=N, slope=slope)
        stat = plateau_stat(sups)
        rep.measured[f"plateau[m={m}]"] = stat
        rep.measured[f"sup[m={m}]"] = max(sups)
        if stat > threshold:
            rep.fail("square sums not N-stable", m=m, stat=stat)
    if crosscheck:
        for m in ms:
            params = GroupParams(m, 12)
            err = _square_sum_crosscheck(params, t, family)
            rep.measured[f"closed_form_err[m={m}]"] = err
            if err > 1e-10:
                rep.fail("closed-form multipliers disagree with literal differences", m=m, err=err)
            # Plancherel side vs spatial side on a dense-cap instance
            small = _small_instance(m, cap=800)
            f = ro.RadialProfile(small, _rng(0, m, small.N).random(small.N + 1))
            spatial = ro.square_function(t, family, f)
            pi = ro.sphere_probabilities(small)
            lhs = float(np.sum(pi * np.asarray(spatial.vals) ** 2))
            rhs = ro.square_function_l2_sq(t, family, f)
            err2 = abs(lhs - rhs) / max(1.0, abs(lhs))
            rep.measured[f"plancherel_err[m={m}]"] = err2
            if err2 > 1e-9:
                rep.fail("Plancherel and spatial square functions disagree", m=m, err=err2)
    rep.runtime = time.perf_counter() - start
    return rep


# ---------------------------------------------------------------- reparameterization

def noise_average_left(params: GroupParams, P) -> np.ndarray:
    """(1/P) int_0^P noise_profile(p) dp, exact for rational P."""
    P = Fraction(P)
    row = ro.partial_integral_row(params.N, P)
    m, N = params.m, params.N
    return np.array([row[r] / (P * math.comb(N, r) * m**r) for r in range(N + 1)], dtype=object)


def noise_average_left_quad(params: GroupParams, P: float) -> np.ndarray:
    m, N = params.m, params.N
    out = []
    for r in range(N + 1):
        val, _ = integrate.quad(lambda p: (p / m) ** r * (1 - p) ** (N - r), 0.0, P,
                                epsabs=1e-13, epsrel=1e-13)
        out.append(val / P)
    return np.array(out)


def semigroup_average_right(params: GroupParams, P) -> np.ndarray:
    """int ((1/T) int_0^T mu_t dt) d nu_P(T) by nested quadrature, atom added analytically."""
    nu = ro.nu_P(params, P)
    c = float(params.c_m)
    m, N = params.m, params.N
    ratio = float(nu.c_m / nu.P)

    def mu(t, r):
        p = c * -math.expm1(-t)
        return (p / m) ** r * (1 - p) ** (N - r)

    def G(T, r):
        return integrate.quad(mu, 0.0, T, args=(r,), epsabs=1e-13, epsrel=1e-13)[0]

    out = []
    for r in range(N + 1):
        # density (c/P) T e^{-T} times (1/T) G(T)
        cont, _ = integrate.quad(lambda T: ratio * math.exp(-T) * G(T, r), 0.0, nu.T_P,
                                 epsabs=1e-12, epsrel=1e-12, limit=200)
        atom = 0.0
        if math.isfinite(nu.T_P):
            atom = nu.atom_weight * G(nu.T_P, r) / nu.T_P
        out.append(cont + atom)
    return np.array(out)


def verify_reparam(m: int = 2, N: int = 6, Ps: Sequence | None = None,
                   tol: float = REPARAM_TOL) -> CertificateReport:
    start = time.perf_counter()
    params = GroupParams(m, N)
    c = params.c_m
    if Ps is None:
        Ps = [c / 4, c / 2]
    rep = CertificateReport(
        "reparam", {"m": m, "N": N, "P": [str(P) for P in Ps]},
        ["m", "N", "P", "T_P", "nu_mass", "nu_mass_closed", "sup_diff", "quad_left_diff"],
    )
    for P in Ps:
        nu = ro.nu_P(params, P)
        mass = nu.total_mass()
        left = np.array([float(v) for v in noise_average_left(params, P)])
        left_q = noise_average_left_quad(params, float(P))
        right = semigroup_average_right(params, P)
        diff = float(np.max(np.abs(left - right)))
        qdiff = float(np.max(np.abs(left - left_q)))
        rep.rows.append({"m": m, "N": N, "P": Fraction(P), "T_P": nu.T_P, "nu_mass": mass,
                         "nu_mass_closed": nu.total_mass_closed(), "sup_diff": diff,
                         "quad_left_diff": qdiff})
        where = dict(m=m, N=N, P=str(P))
        if abs(mass - 1.0) > MASS_TOL:
            rep.fail("nu_P mass differs from 1", **where, mass=mass)
        if diff > tol:
            rep.fail("reparameterized profiles differ", _repro("reparam", m, N), **where, diff=diff)
        if qdiff > tol:
            rep.fail("exact and quadrature left sides differ", **where, diff=qdiff)
        rep.measured[f"sup_diff[P={P}]"] = diff
    # P -> 0: both sides approach the identity kernel
    P0 = c / 10**6
    left0 = np.array([float(v) for v in noise_average_left(params, P0)])
    right0 = semigroup_average_right(params, P0)
    delta = np.zeros(N + 1)
    delta[0] = 1.0
    small = max(float(np.max(np.abs(left0 - delta))), float(np.max(np.abs(right0 - delta))))
    rep.measured["small_P_dist_to_delta"] = small
    if small > 1e-5:
        rep.fail("small-P averages not close to delta", P=str(P0), dist=small)
    rep.runtime = time.perf_counter() - start
    return rep


# ---------------------------------------------------------------- big-K choice

def bigkchoice_constant(N: int, L_max: int):
    """(c*, l, L, c0_min): min over 0 <= l <= L <= L_max of (L+1)/P(L) * int_0^{P(L)} B(N,p,l) dp,
    with P(0) = 1/N and P(L) = L/N; c0_min is the minimum over the l = 0 terms."""
    best = None
    c0 = None
    for L in range(L_max + 1):
        P = Fraction(1, N) if L == 0 else Fraction(L, N)
        row = ro.partial_integral_row(N, P)
        scale = (L + 1) / P
        for l in range(L + 1):
            v = scale * row[l]
            if best is None or v < best[0]:
                best = (v, l, L)
            if l == 0 and (c0 is None or v < c0):
                c0 = v
    return best[0], best[1], best[2], c0


def verify_bigkchoice(ms: Sequence[int], Ns: Sequence[int],
                      threshold: float = DEFAULT_PLATEAU) -> CertificateReport:
    start = time.perf_counter()
    rep = CertificateReport(
        "bigkchoice", {"m": list(ms), "N": list(Ns)},
        ["m", "N", "c_star", "argmin_l", "argmin_L", "c0_min", "c0_floor"],
    )
    floor = 1 - math.exp(-1)
    for m in ms:
        seq = []
        for N in Ns:
            L_max = (m * N) // (m + 1)
            c_star, l, L, c0 = bigkchoice_constant(N, L_max)
            c0_floor = floor * N / (N + 1)
            seq.append(float(c_star))
            rep.rows.append({"m": m, "N": N, "c_star": float(c_star), "argmin_l": l,
                             "argmin_L": L, "c0_min": float(c0), "c0_floor": c0_floor})
            if not c_star > 0:
                rep.fail("constant not positive", _repro("bigkchoice", m, N), m=m, N=N)
            if float(c0) < c0_floor:
                rep.fail("l = 0 terms below (1 - 1/e) N/(N+1)", _repro("bigkchoice", m, N), m=m, N=N)
        stat = lower_plateau_stat(seq)
        rep.measured[f"c_star_min[m={m}]"] = min(seq)
        rep.measured[f"plateau[m={m}]"] = stat
        if stat > threshold:
            rep.fail("constant not N-stable", m=m, stat=stat)
    # exact rows against adaptive quadrature
    N = Ns[0]
    row = ro.partial_integral_row(N, Fraction(1, 3))
    err = max(abs(float(row[l]) - ro.binom_partial_integral_quad(N, l, 1 / 3)) for l in range(N + 1))
    rep.measured["quad_err"] = err
    if err > 1e-12:
        rep.fail("exact partial integrals disagree with quadrature", N=N, err=err)
    rep.runtime = time.perf_counter() - start
    return rep


# ---------------------------------------------------------------- b_l(d) lower bound

def _log_b(m: int, j: int, d: int) -> float:
    return (math.lgamma(j + 1) - math.lgamma(d + 1) - math.lgamma(j - d + 1)
            + (j - d) * math.log(m - 1) - j * math.log(m)) if m > 1 else (0.0 if j == d else -math.inf)


def blbound_constant(m: int, N: int, one_sided: bool = False):
    """(c*, d, j): min of b_j(d) sqrt(d) over 1 <= d <= N/m and j within sqrt(d) of m d."""
    best = (math.inf, None, None)
    for d in range(1, N // m + 1):
        lo = m * d - math.isqrt(d)
        hi = m * d if one_sided else m * d + math.isqrt(d)
        for j in range(max(lo, d), hi + 1):
            if (j - m * d) ** 2 > d:
                continue
            v = math.exp(_log_b(m, j, d)) * math.sqrt(d)
            if v < best[0]:
                best = (v, d, j)
    return best


def verify_blbound(ms: Sequence[int], Ns: Sequence[int],
                   threshold: float = DEFAULT_PLATEAU) -> CertificateReport:
    start = time.perf_counter()
    rep = CertificateReport(
        "blbound", {"m": list(ms), "N": list(Ns)},
        ["m", "N", "window", "c_star", "argmin_d", "argmin_j"],
    )
    for m in ms:
        for window in ("two_sided", "one_sided"):
            seq = []
            for N in Ns:
                c, d, j = blbound_constant(m, N, one_sided=(window == "one_sided"))
                seq.append(c)
                rep.rows.append({"m": m, "N": N, "window": window, "c_star": c,
                                 "argmin_d": d, "argmin_j": j})
                if not (c > 0 and math.isfinite(c)):
                    rep.fail("constant not positive", _repro("blbound", m, N), m=m, N=N, window=window)
            stat = lower_plateau_stat(seq)
            rep.measured[f"c_star_min[m={m},{window}]"] = min(seq)
            rep.measured[f"plateau[m={m},{window}]"] = stat
            if stat > threshold:
                rep.fail("constant not N-stable", m=m, window=window, stat=stat)
        # closed form vs the dense oracle: sigma_k * sigma_N = sum_d b_k(d) sigma_{N-d}
        small = _small_instance(m, cap=800)
        sN = sigma_dense(small, small.N)
        for k in range(small.N + 1):
            prof = radialize(convolve_dense(sigma_dense(small, k), sN))
            sizes = sphere_sizes(small)
            b = ro.b_weights(m, k)
            expect = [Fraction(0)] * (small.N + 1)
            for d, bd in enumerate(b):
                expect[small.N - d] = bd / sizes[small.N - d]
            if list(prof.vals) != expect:
                rep.fail("b_k(d) disagrees with dense sigma_k * sigma_N", m=m, N=small.N, k=k)
    rep.runtime = time.perf_counter() - start
    return rep


# ---------------------------------------------------------------- sphere transfer

def transfer_coefficients(m: int, N: int):
    """(ratio, L, d): min over L <= floor(c_m N), d <= floor(L/m) of sum_{l=d}^L b_l(d)."""
    L_max = (m * N) // (m + 1)
    coeff = [Fraction(0)] * (L_max + 1)
    best = (None, None, None)
    for L in range(L_max + 1):
        b = ro.b_weights(m, L)
        for d in range(L + 1):
            coeff[d] += b[d]
        for d in range(L // m + 1):
            if best[0] is None or coeff[d] < best[0]:
                best = (coeff[d], L, d)
    return best


def _transfer_fast_path(params: GroupParams, L: int) -> list:
    """Masses of sum_{l<=L} sigma_l * sigma_N on the spheres N-d, via multipliers."""
    sN = ro.sigma_profile(params, params.N)
    total = None
    for l in range(L + 1):
        prof = ro.apply_radial(ro.sigma_profile(params, l), sN)
        total = prof if total is None else total + prof
    sizes = sphere_sizes(params)
    N = params.N
    return [total.vals[N - d] * sizes[N - d] for d in range(N + 1)]


def verify_sphere_transfer(ms: Sequence[int], Ns: Sequence[int],
                           threshold: float = DEFAULT_PLATEAU) -> CertificateReport:
    start = time.perf_counter()
    rep = CertificateReport(
        "transfer", {"m": list(ms), "N": list(Ns)},
        ["m", "N", "min_ratio", "argmin_L", "argmin_d"],
    )
    for m in ms:
        seq = []
        for N in Ns:
            ratio, L, d = transfer_coefficients(m, N)
            seq.append(float(ratio))
            rep.rows.append({"m": m, "N": N, "min_ratio": float(ratio), "argmin_L": L, "argmin_d": d})
            if not ratio > 0:
                rep.fail("ratio not positive", _repro("transfer", m, N), m=m, N=N)
        stat = lower_plateau_stat(seq)
        rep.measured[f"min_ratio[m={m}]"] = min(seq)
        rep.measured[f"plateau[m={m}]"] = stat
        if stat > threshold:
            rep.fail("ratio not N-stable", m=m, stat=stat)
        # coefficient reading checked against the fast path and the dense oracle
        for params in (GroupParams(m, 10), _small_instance(m, cap=800)):
            N = params.N
            for L in range(params.local_cutoff + 1):
                masses = _transfer_fast_path(params, L)
                expect = [sum((ro.b_weights(m, l)[d] for l in range(d, L + 1)), Fraction(0))
                          for d in range(N + 1)]
                if masses != expect:
                    rep.fail("right-side coefficients disagree with fast path", m=m, N=N, L=L)
        small = _small_instance(m, cap=800)
        N, L = small.N, small.local_cutoff
        dense = None
        sN = sigma_dense(small, N)
        for l in range(L + 1):
            c = convolve_dense(sigma_dense(small, l), sN)
            dense = c.values if dense is None else dense + c.values
        prof = radialize(GroupFunction(small, dense))
        if not prof:
            rep.fail("dense transfer kernel is not radial", m=m, N=N)
            continue
        sizes = sphere_sizes(small)
        masses = _transfer_fast_path(small, L)
        if [prof.vals[N - d] * sizes[N - d] for d in range(N + 1)] != masses:
            rep.fail("dense oracle disagrees with fast path", m=m, N=N, L=L)
    rep.runtime = time.perf_counter() - start
    return rep


# ---------------------------------------------------------------- pointwise lemmas

def _smax(lam, fam, f, family="local"):
    op = "Sstar" if family == "local" else "Tstar"
    if isinstance(lam, complex):
        op_id = f"{op}:{lam.real!r}:{lam.imag!r}"
    else:
        op_id = f"{op}:{lam}"
    return np.asarray(ro.maximal(op_id, f, fam=fam).profile.vals, dtype=float)


def _ratio_max(num: np.ndarray, den: np.ndarray) -> float:
    num = np.maximum(num, 0.0)
    mask = num > 0
    if not mask.any():
        return 0.0
    with np.errstate(divide="ignore"):
        return float(np.max(num[mask] / den[mask]))


def ns_constants(f: ro.RadialProfile, alphas, betas, ts) -> dict:
    """Smallest constants making each pointwise inequality hold for one f."""
    fam = ro.sphere_family(f)
    out = {}
    s0 = _smax(0, fam, f)
    for a in alphas:
        for b in betas:
            lhs = _smax(complex(float(a), float(b)) if b else a, fam, f)
            out[f"L1[a={a},b={b}]"] = _ratio_max(lhs, math.exp(2 * b * b) * s0)
    for t in ts:
        rhs = sum(_smax(-j, fam, f) for j in range(1, t + 2))
        for b in betas:
            lhs = _smax(complex(float(-t), float(b)) if b else -t, fam, f)
            out[f"L2[t={t},b={b}]"] = _ratio_max(lhs, math.exp(3 * b * b) * rhs)
    for t in ts:
        if t < 1:
            continue
        lhs = _smax(-t, fam, f) - 2 * _smax(1 - t, fam, f)
        R = np.asarray(ro.square_function(t, "local", f, fam=fam).vals)
        out[f"L3[t={t}]"] = _ratio_max(lhs, R)
    return out


def verify_ns(ms: Sequence[int], Ns: Sequence[int], alphas=(Fraction(1, 2), 1), betas=(0, 1),
              ts=(0, 1, 2), batch: int = 8, seed: int = 0,
              threshold: float = DEFAULT_PLATEAU) -> CertificateReport:
    start = time.perf_counter()
    rep = CertificateReport(
        "ns", {"m": list(ms), "N": list(Ns), "alpha": [str(a) for a in alphas],
               "beta": list(betas), "t": list(ts), "batch": batch},
        ["m", "N", "lemma", "constant", "delta_constant"], seed=seed,
    )
    for m in ms:
        seqs = {}
        for N in Ns:
            params = GroupParams(m, N)
            rng = _rng(seed, m, N)
            delta_c = ns_constants(ro.delta_profile(params, exact=False), alphas, betas, ts)
            best = dict(delta_c)
            for _ in range(batch):
                f = ro.RadialProfile(params, rng.random(N + 1))
                for key, val in ns_constants(f, alphas, betas, ts).items():
                    best[key] = max(best[key], val)
            for key in sorted(best):
                rep.rows.append({"m": m, "N": N, "lemma": key, "constant": best[key],
                                 "delta_constant": delta_c[key]})
                seqs.setdefault(key, []).append(best[key])
                if not math.isfinite(best[key]):
                    rep.fail("constant not finite", _repro("ns", m, N), m=m, N=N, lemma=key)
        for key, seq in seqs.items():
            positive = [v for v in seq if v > 0]
            stat = plateau_stat(positive) if positive else 1.0
            rep.measured[f"{key}[m={m}]"] = max(seq)
            if stat > threshold:
                rep.fail("constant not N-stable", m=m, lemma=key, stat=stat)
    # radial fast path vs dense oracle on one instance
    for m in ms:
        small = _small_instance(m, cap=800)
        f = ro.RadialProfile(small, _rng(seed, m, 0).random(small.N + 1))
        avg = sphere_averages_dense(_densify(f))
        reps = [int(np.flatnonzero(weight_table(small) == s)[0]) for s in range(small.N + 1)]
        for op in ("Sstar:1/2:1", "Sstar:-2:1", "Sstar:-1", "Sstar:0"):
            dense = np.asarray(dense_operator(op, small, avg), dtype=float)[reps]
            fast = np.asarray(ro.evaluate(op, f).vals, dtype=float)
            err = float(np.max(np.abs(dense - fast)))
            if err > 1e-10:
                rep.fail("fast path disagrees with dense oracle", m=m, N=small.N, op=op, err=err)
    rep.runtime = time.perf_counter() - start
    return rep


# ---------------------------------------------------------------- weak (1,1)

def weak11_value(params: GroupParams, g: np.ndarray, f: ro.RadialProfile) -> float:
    """sup_lam lam |{g > lam}| / ||f||_1, using exact sphere cardinalities.

    The supremum is approached from below at each attained value v:
    v * |{g >= v}|.  Both sides are divided by (m+1)^N for floating range.
    """
    pi = ro.sphere_probabilities(params)
    fvals = np.asarray(f.as_float().vals, dtype=float)
    norm1 = float(np.sum(pi * np.abs(fvals)))
    best = 0.0
    for v in np.unique(g):
        if v <= 0:
            continue
        best = max(best, float(v) * math.fsum(pi[g >= v]))
    return best / norm1


def verify_weak11(op_id: str, ms: Sequence[int], Ns: Sequence[int], batch: int = 8,
                  seed: int = 0, threshold: float = DEFAULT_PLATEAU) -> CertificateReport:
    if op_id not in ("MSL", "MSD"):
        raise ValueError("weak-(1,1) witnesses are defined for MSL and MSD")
    start = time.perf_counter()
    rep = CertificateReport(
        f"weak11_{op_id}", {"op": op_id, "m": list(ms), "N": list(Ns), "batch": batch},
        ["m", "N", "op", "delta_witness", "batch_witness", "uniform_witness"], seed=seed,
        notes="witnesses are lower bounds for the weak-(1,1) norm",
    )
    for m in ms:
        seq, dseq = [], []
        for N in Ns:
            params = GroupParams(m, N)
            rng = _rng(seed, m, N)
            d = ro.delta_profile(params, exact=False)
            dw = weak11_value(params, np.asarray(ro.evaluate(op_id, d).vals, dtype=float), d)
            u = ro.constant_profile(params, 1, exact=False)
            uw = weak11_value(params, np.asarray(ro.evaluate(op_id, u).vals, dtype=float), u)
            best = dw
            for _ in range(batch):
                f = ro.RadialProfile(params, rng.random(N + 1))
                g = np.asarray(ro.evaluate(op_id, f).vals, dtype=float)
                best = max(best, weak11_value(params, g, f))
            seq.append(best)
            dseq.append(dw)
            rep.rows.append({"m": m, "N": N, "op": op_id, "delta_witness": dw,
                             "batch_witness": best, "uniform_witness": uw})
            if not (math.isfinite(best) and best > 0):
                rep.fail("witness not finite and positive", _repro("weak11", m, N), m=m, N=N)
            if uw > 1 + 1e-12:
                rep.fail("uniform witness exceeds 1", m=m, N=N, value=uw)
        for label, s in (("batch", seq), ("delta", dseq)):
            stat = plateau_stat(s)
            rep.measured[f"{label}_max[m={m}]"] = max(s)
            rep.measured[f"{label}_plateau[m={m}]"] = stat
            if stat > threshold:
                rep.fail("witness not N-stable", m=m, which=label, stat=stat)
        # counting on the dense group for one instance
        small = _small_instance(m, cap=800)
        f = ro.RadialProfile(small, _rng(seed, m, 0).random(small.N + 1))
        avg = sphere_averages_dense(_densify(f))
        gd = np.real(dense_operator(op_id, small, avg))
        fd = np.real(_densify(f).values)
        levels = [gd[weight_table(small) == s][0] for s in range(small.N + 1)]
        best_dense = max(float(v) * int(np.count_nonzero(gd >= v * (1 - 1e-12)))
                         for v in levels if v > 0)
        radial = weak11_value(small, np.asarray(ro.evaluate(op_id, f).vals, dtype=float), f)
        dense_val = best_dense / float(np.sum(fd))
        if abs(dense_val - radial) > 1e-9 * max(1.0, radial):
            rep.fail("dense witness disagrees with radial witness", m=m, N=small.N,
                     dense=dense_val, radial=radial)
    rep.runtime = time.perf_counter() - start
    return rep
