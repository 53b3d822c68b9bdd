"""Fast radial path vs dense oracle, for every operator id.

For each (m, N) inside the oracle cap two random radial inputs are drawn:

* an integer-valued one, whose dense sphere sums are exact in float64, so
  the exact multiplier route can be compared with zero tolerance, and
* a uniform [0, 1) one, compared through the float spatial route.
"""
from __future__ import annotations

import math
import time
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .. import radial_ops as ro
from ..group_core import (
    DEFAULT_ORACLE_CAP,
    GroupFunction,
    GroupParams,
    sphere_averages_dense,
    sphere_sizes,
    weight_table,
)
from .dense_ops import dense_operator
from .report import CertificateReport

ORACLE_OPS = (
    "M", "ML", "MD", "MSL", "MSD",
    "Sstar:0", "Sstar:-1", "Sstar:-2", "Sstar:-3", "Sstar:1", "Sstar:1/2", "Sstar:1/2:1", "Sstar:-2:1",
    "Tstar:0", "Tstar:-2", "Tstar:1/2", "Tstar:1/2:1",
    "Rt:1", "Rt:2", "RtD:1", "RtD:2",
)
FLOAT_TOL = 1e-10
INT_MAX = 1000


def default_grid(cap: int = DEFAULT_ORACLE_CAP, m_values: Iterable[int] | None = None):
    """(m, N) pairs with (m+1)^N <= cap.

    Without ``m_values``: every pair with N >= 2, plus m <= 9 and a log-spaced
    sample of larger alphabets for N = 1.
    """
    out = []
    if m_values is not None:
        for m in m_values:
            N = 1
            while (m + 1) ** N <= cap:
                out.append((m, N))
                N += 1
        return out
    for N in range(1, 64):
        if 2**N > cap:
            break
        m_max = 1
        while (m_max + 2) ** N <= cap:
            m_max += 1
        if N >= 2:
            ms = range(1, m_max + 1)
        else:
            ms = sorted({*range(1, min(9, m_max) + 1),
                         *(int(v) for v in np.unique(np.geomspace(10, m_max, 6).astype(int))), m_max})
        out.extend((m, N) for m in ms)
    return sorted(out, key=lambda t: (t[1], t[0]))


def _is_exact_op(op_id: str) -> bool:
    parts = op_id.split(":")
    if parts[0] in ("Sstar", "Tstar"):
        beta = Fraction(parts[2]) if len(parts) == 3 else 0
        return beta == 0 and Fraction(parts[1]).denominator == 1
    return True


def _representatives(params: GroupParams) -> list:
    w = weight_table(params)
    return [int(np.flatnonzero(w == s)[0]) for s in range(params.N + 1)]


def _radial_or_none(params: GroupParams, table: np.ndarray, exact: bool):
    """Per-radius values of each row, or None if some row is not radial."""
    w = weight_table(params)
    reps = _representatives(params)
    rep_vals = table[:, reps]
    spread = table - rep_vals[:, w]
    if exact:
        return rep_vals if not np.any(spread != 0) else None
    scale = max(1.0, float(np.max(np.abs(table))))
    return rep_vals if float(np.max(np.abs(spread))) <= 1e-12 * scale else None


def _fast(op_id: str, f: ro.RadialProfile) -> np.ndarray:
    name, param = ro.parse_op_id(op_id)
    if name in ("Rt", "RtD"):
        family = "local" if name == "Rt" else "distant"
        if f.exact:
            return np.asarray(ro.square_function_sq(param, family, f).vals)
        return np.asarray(ro.square_function(param, family, f).vals)
    return np.asarray(ro.maximal(op_id, f).profile.vals)


def check_instance(params: GroupParams, seed: int, ops: Sequence[str] = ORACLE_OPS):
    """Rows (m, N, op, route, max_err, ok) for one group."""
    rng = np.random.default_rng(np.random.SeedSequence([seed, params.m, params.N]))
    N = params.N
    w = weight_table(params)
    rows = []

    # exact route
    ints = rng.integers(0, INT_MAX, N + 1)
    f_exact = ro.RadialProfile(params, np.array([Fraction(int(v)) for v in ints], dtype=object))
    sums = sphere_averages_dense(GroupFunction(params, ints[w].astype(float)), normalize=False)
    rep_sums = _radial_or_none(params, sums, exact=True)
    sizes = sphere_sizes(params)
    if rep_sums is None:
        rows.append((params.m, N, "family", "exact", math.inf, False))
    else:
        table = np.array([[Fraction(int(rep_sums[k, s]), sizes[k]) for s in range(N + 1)]
                          for k in range(N + 1)], dtype=object)
        fam = ro.sphere_family(f_exact)
        ok = bool(np.all(fam == table))
        rows.append((params.m, N, "family", "exact", 0.0 if ok else math.inf, ok))
        for op in ops:
            if not _is_exact_op(op):
                continue
            dense = dense_operator(op, params, table)
            fast = _fast(op, f_exact)
            ok = all(a == b for a, b in zip(dense, fast))
            err = 0.0 if ok else float(np.max(np.abs(np.asarray(dense, float) - np.asarray(fast, float))))
            rows.append((params.m, N, op, "exact", err, ok))

    # float route
    x = rng.random(N + 1)
    f_float = ro.RadialProfile(params, x)
    avg = sphere_averages_dense(GroupFunction(params, x[w]))
    avg = np.real(avg)
    reps = _representatives(params)
    fam = ro.sphere_family(f_float)
    err = float(np.max(np.abs(avg[:, reps] - fam)))
    rows.append((params.m, N, "family", "float", err, err <= FLOAT_TOL))
    for op in ops:
        dense_full = dense_operator(op, params, avg)
        prof = _radial_or_none(params, np.asarray(dense_full, dtype=float)[None, :], exact=False)
        fast = np.asarray(_fast(op, f_float), dtype=float)
        if prof is None:
            rows.append((params.m, N, op, "float", math.inf, False))
            continue
        err = float(np.max(np.abs(prof[0] - fast)))
        rows.append((params.m, N, op, "float", err, err <= FLOAT_TOL))
    return rows


def verify_oracle(grid: Sequence[tuple] | None = None, seed: int = 0,
                  cap: int = DEFAULT_ORACLE_CAP, ops: Sequence[str] = ORACLE_OPS) -> CertificateReport:
    start = time.perf_counter()
    if grid is None:
        grid = default_grid(cap)
    rep = CertificateReport(
        "oracle", {"instances": len(grid), "cap": cap, "ops": list(ops)},
        ["m", "N", "op", "route", "max_err", "ok"], seed=seed,
    )
    worst = 0.0
    for m, N in grid:
        params = GroupParams(m, N, oracle_cap=cap)
        params.check_oracle()
        for (mm, NN, op, route, err, ok) in check_instance(params, seed, ops):
            rep.rows.append({"m": mm, "N": NN, "op": op, "route": route, "max_err": err, "ok": ok})
            if route == "float":
                worst = max(worst, err)
            if not ok:
                rep.fail("fast path disagrees with dense oracle",
                         f"hamming-harmonic verify oracle --m {mm} --n {NN}",
                         m=mm, N=NN, op=op, route=route, err=err)
    rep.measured["instances"] = len(grid)
    rep.measured["worst_float_err"] = worst
    rep.runtime = time.perf_counter() - start
    return rep
