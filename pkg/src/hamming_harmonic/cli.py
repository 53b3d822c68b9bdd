"""Command-line front end: ``verify``, ``eval`` and ``table``.

Exit codes: 0 all certificates pass, 1 some certificate fails, 2 usage or
configuration error.  Outputs land in ``<out>/<suite>/<name>.csv`` with a
gnuplot script beside each CSV and ``<out>/manifest.json`` describing the run.
"""
from __future__ import annotations

import argparse
import json
import os
import re
import sys
import time
from fractions import Fraction

from filelock import FileLock, Timeout

from . import radial_ops as ro
from .group_core import DEFAULT_ORACLE_CAP, GroupParams
from .krawtchouk import DEFAULT_EXACT_CAP, krawtchouk_table, summand_analysis
from .bounds_lab import (
    default_grid,
    norm_search,
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
from .bounds_lab.report import csv_text

SUITES = ("oracle", "decay", "dominant", "square-sum", "reparam", "bigkchoice", "blbound",
          "transfer", "ns", "weak11", "norms")
POW2 = [8, 16, 32, 64, 128, 256]

# suite -> (default m values, default N values)
DEFAULT_GRIDS = {
    "decay": ([2, 3, 4], [16, 32, 64, 128, 256]),
    "dominant": ([2, 3], list(range(2, 41))),
    "square-sum": ([2, 3, 4], POW2),
    "reparam": ([2], [6]),
    "bigkchoice": ([2, 3, 4], POW2),
    "blbound": ([2, 3, 4], POW2),
    "transfer": ([2, 3, 4], POW2),
    "ns": ([2, 3], [8, 16, 32]),
    "weak11": ([2, 3], POW2),
    "norms": ([2, 3], POW2),
}

# columns plotted against N, one curve per m
PLOT_Y = {
    "decay": "d_min", "dominant": "eps_min", "square_sum": "sup_r", "bigkchoice": "c_star",
    "blbound": "c_star", "transfer": "min_ratio", "weak11": "batch_witness",
    "norms": "best",
}


class UsageError(Exception):
    pass


def parse_int_list(text: str) -> list:
    """``a..b[:step]``, ``a..b:*f`` (geometric), or comma lists of those."""
    out = []
    for part in text.split(","):
        part = part.strip()
        m = re.fullmatch(r"(-?\d+)\.\.(-?\d+)(?::(\*?)(\d+))?", part)
        if m:
            a, b = int(m.group(1)), int(m.group(2))
            geometric, step = m.group(3) == "*", int(m.group(4) or (2 if m.group(3) else 1))
            if step < 1 or (geometric and (step < 2 or a < 1)):
                raise UsageError(f"bad step in {part!r}")
            v = a
            while v <= b:
                out.append(v)
                v = v * step if geometric else v + step
        elif re.fullmatch(r"-?\d+", part):
            out.append(int(part))
        else:
            raise UsageError(f"cannot parse integer list {text!r}")
    if not out:
        raise UsageError(f"empty list {text!r}")
    return out


def parse_float_list(text: str) -> list:
    try:
        return [float(Fraction(p.strip())) for p in text.split(",")]
    except ValueError:
        raise UsageError(f"cannot parse number list {text!r}") from None


def parse_thresholds(items) -> dict:
    out = {}
    for item in items or []:
        if "=" not in item:
            raise UsageError(f"--threshold expects suite=value, got {item!r}")
        k, v = item.split("=", 1)
        if k not in SUITES:
            raise UsageError(f"unknown suite in --threshold: {k!r}")
        try:
            out[k] = float(v)
        except ValueError:
            raise UsageError(f"bad threshold value {v!r}") from None
    return out


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--m", help="alphabet parameters, e.g. 2,3 or 2..4")
    common.add_argument("--n", help="dimensions: list or range a..b[:step] / a..b:*2")
    common.add_argument("--precision", choices=("exact", "float"), default=None)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--oracle-cap", type=int, default=DEFAULT_ORACLE_CAP)
    common.add_argument("--out", default="results")
    common.add_argument("--threshold", action="append", metavar="SUITE=V")
    common.add_argument("--t", help="difference orders, e.g. 1,2")
    common.add_argument("--p-exponent", help="L^p exponents for norm search, e.g. 1.5,2")
    common.add_argument("--alpha", help="real parts for pointwise lemmas")
    common.add_argument("--beta", help="imaginary parts for pointwise lemmas")
    common.add_argument("--k", type=int)
    common.add_argument("--r", type=int)
    common.add_argument("--svg", action="store_true", help="also write SVG charts (needs matplotlib)")
    common.add_argument("--dry-run", action="store_true")

    p = argparse.ArgumentParser(prog="hamming-harmonic", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", parents=[common], help="run certificate suites")
    v.add_argument("suite", help="one of: " + ", ".join(SUITES + ("all",)))
    e = sub.add_parser("eval", parents=[common], help="evaluate an operator on a profile")
    e.add_argument("op_id")
    e.add_argument("--input", default="delta", help="delta | uniform | ball:RHO | path to profile CSV")
    t = sub.add_parser("table", parents=[common], help="emit exact tables")
    t.add_argument("kind", choices=("krawtchouk", "bweights", "summand"))
    return p


def _grid(args, suite):
    ms, Ns = DEFAULT_GRIDS.get(suite, ([2], [8]))
    if args.m:
        ms = parse_int_list(args.m)
    if args.n:
        Ns = parse_int_list(args.n)
    if any(m < 1 for m in ms) or any(N < 1 for N in Ns):
        raise UsageError("m and N must be >= 1")
    return ms, Ns


def _version() -> str:
    try:
        from importlib.metadata import version
        return version("artifact")
    except Exception:  # not installed as a distribution
        return "0+unknown"


def _plot_script(report, csv_name: str) -> str | None:
    key = next((k for k in PLOT_Y if report.lemma_id.startswith(k)), None)
    if key is None or not report.rows or "N" not in report.columns:
        return None
    y = PLOT_Y[key]
    if y not in report.columns:
        return None
    xi = report.columns.index("N") + 1
    yi = report.columns.index(y) + 1
    mi = report.columns.index("m") + 1
    ms = sorted({row["m"] for row in report.rows})
    curves = ", ".join(
        f"'{csv_name}' using (${mi}=={m} ? ${xi} : 1/0):{yi} with linespoints title 'm={m}'"
        for m in ms)
    return "\n".join([
        "set datafile separator ','",
        "set key autotitle columnhead",
        "set logscale x 2",
        "set xlabel 'N'",
        f"set ylabel '{y}'",
        f"set title '{report.lemma_id}'",
        "set terminal svg size 640,400",
        f"set output '{report.lemma_id}.svg'",
        f"plot {curves}",
        "",
    ])


def _write_svg(report, path: str) -> None:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    key = next((k for k in PLOT_Y if report.lemma_id.startswith(k)), None)
    if key is None or PLOT_Y[key] not in report.columns:
        return
    y = PLOT_Y[key]
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    for m in sorted({row["m"] for row in report.rows}):
        pts = [(row["N"], row[y]) for row in report.rows if row["m"] == m and row[y] is not None]
        if pts:
            xs, ys = zip(*pts)
            ax.plot(xs, [float(v) for v in ys], marker="o", label=f"m={m}")
    ax.set_xscale("log", base=2)
    ax.set_xlabel("N")
    ax.set_ylabel(y)
    ax.set_title(report.lemma_id)
    ax.legend()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def _run_suite(suite, args, thresholds):
    """Return a list of reports for one suite, or a grid description on dry runs."""
    if suite == "oracle":
        cap = args.oracle_cap
        if args.m and args.n:
            ms, Ns = parse_int_list(args.m), parse_int_list(args.n)
            grid = [(m, N) for m in ms for N in Ns if (m + 1) ** N <= cap]
        elif args.m:
            grid = default_grid(cap, parse_int_list(args.m))
        else:
            grid = default_grid(cap)
        if args.dry_run:
            return {"suite": suite, "instances": len(grid),
                    "m_max": max(m for m, _ in grid), "N_max": max(N for _, N in grid)}
        return [verify_oracle(grid, seed=args.seed, cap=cap)]
    ms, Ns = _grid(args, suite)
    th = thresholds.get(suite)
    kw = {} if th is None else {"threshold": th}
    if args.dry_run:
        return {"suite": suite, "m": ms, "N": Ns}
    if suite == "decay":
        return [verify_decay(ms, Ns)]
    if suite == "dominant":
        return [verify_dominant(ms, Ns, **kw)]
    if suite == "square-sum":
        ts = parse_int_list(args.t) if args.t else [1, 2]
        return [verify_square_sum(t, fam, ms, Ns, **kw) for t in ts for fam in ("local", "distant")]
    if suite == "reparam":
        reps = [verify_reparam(m, N) for m in ms for N in Ns]
        if len(reps) > 1:
            for rep, (m, N) in zip(reps, [(m, N) for m in ms for N in Ns]):
                rep.lemma_id = f"reparam_m{m}_N{N}"
        return reps
    if suite == "bigkchoice":
        return [verify_bigkchoice(ms, Ns, **kw)]
    if suite == "blbound":
        return [verify_blbound(ms, Ns, **kw)]
    if suite == "transfer":
        return [verify_sphere_transfer(ms, Ns, **kw)]
    if suite == "ns":
        alphas = [Fraction(a) for a in args.alpha.split(",")] if args.alpha else [Fraction(1, 2), Fraction(1)]
        betas = parse_float_list(args.beta) if args.beta else [0, 1]
        ts = parse_int_list(args.t) if args.t else [0, 1, 2]
        return [verify_ns(ms, Ns, alphas=alphas, betas=betas, ts=ts, seed=args.seed, **kw)]
    if suite == "weak11":
        return [verify_weak11(op, ms, Ns, seed=args.seed, **kw) for op in ("MSL", "MSD")]
    if suite == "norms":
        ps = parse_float_list(args.p_exponent) if args.p_exponent else [1.5, 2.0]
        if any(p <= 1 for p in ps):
            raise UsageError("--p-exponent values must exceed 1")
        return [norm_search("M", p, ms, Ns, seed=args.seed, **kw) for p in ps]
    raise UsageError(f"unknown suite {suite!r}")


def _manifest(args, out, entries, wall):
    cfg = {k: v for k, v in vars(args).items() if k != "func"}
    return {"config": cfg, "version": _version(), "wall_time_s": wall, "outputs": entries}


def cmd_verify(args) -> int:
    suites = SUITES if args.suite == "all" else (args.suite,)
    if args.suite != "all" and args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES)} or all")
    thresholds = parse_thresholds(args.threshold)
    if args.dry_run:
        for s in suites:
            print(json.dumps(_run_suite(s, args, thresholds)))
        return 0
    os.makedirs(args.out, exist_ok=True)
    start = time.perf_counter()
    entries = []
    failed = False
    with _locked(args.out):
        for s in suites:
            for rep in _run_suite(s, args, thresholds):
                d = os.path.join(args.out, s)
                path = rep.write_csv(d)
                script = _plot_script(rep, os.path.basename(path))
                if script:
                    with open(os.path.join(d, f"{rep.lemma_id}.plt"), "w") as fh:
                        fh.write(script)
                if args.svg:
                    _write_svg(rep, os.path.join(d, f"{rep.lemma_id}.svg"))
                print(rep.summary_line())
                failed |= not rep.passed
                entries.append({"suite": s, "lemma": rep.lemma_id, "csv": os.path.relpath(path, args.out),
                                "verdict": rep.verdict, "runtime_s": rep.runtime,
                                "measured": {k: str(v) for k, v in rep.measured.items()},
                                "failures": rep.failures[:20], "seed": rep.seed, "notes": rep.notes})
        _write_manifest(args, entries, time.perf_counter() - start)
    return 1 if failed else 0


def _locked(out):
    lock = FileLock(os.path.join(out, ".lock"), timeout=0)
    try:
        lock.acquire()
    except Timeout:
        raise UsageError(f"output directory {out!r} is in use by another run") from None
    return _Release(lock)


class _Release:
    def __init__(self, lock):
        self.lock = lock

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.lock.release()
        return False


def _write_manifest(args, entries, wall):
    path = os.path.join(args.out, "manifest.json")
    with open(path, "w") as fh:
        json.dump(_manifest(args, args.out, entries, wall), fh, indent=2, sort_keys=True, default=str)
        fh.write("\n")


def _single_params(args) -> GroupParams:
    if not args.m or not args.n:
        raise UsageError("--m and --n are required")
    ms, Ns = parse_int_list(args.m), parse_int_list(args.n)
    if len(ms) != 1 or len(Ns) != 1:
        raise UsageError("this command takes a single --m and --n")
    if ms[0] < 1 or Ns[0] < 1:
        raise UsageError("m and N must be >= 1")
    return GroupParams(ms[0], Ns[0], oracle_cap=args.oracle_cap)


def _input_profile(args, params: GroupParams) -> ro.RadialProfile:
    exact = args.precision != "float"
    source = args.input
    if source == "delta":
        return ro.delta_profile(params, exact=exact)
    if source == "uniform":
        return ro.constant_profile(params, 1, exact=exact)
    if source.startswith("ball:"):
        try:
            rho = int(source[5:])
        except ValueError:
            raise UsageError(f"bad ball radius in {source!r}") from None
        return ro.ball_profile(params, rho, exact=exact)
    if not os.path.exists(source):
        raise UsageError(f"input {source!r} is neither a builtin nor an existing file")
    try:
        f = ro.read_profile_csv(source, params)
    except ro.ProfileFormatError as exc:
        raise UsageError(f"{source}: {exc}") from None
    return f if exact or not f.exact else f.as_float()


def cmd_eval(args) -> int:
    params = _single_params(args)
    try:
        ro.parse_op_id(args.op_id)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.dry_run:
        print(json.dumps({"op": args.op_id, "m": params.m, "N": params.N, "input": args.input}))
        return 0
    f = _input_profile(args, params)
    if f.exact and params.N > DEFAULT_EXACT_CAP:
        raise UsageError(f"N={params.N} exceeds the exact cap {DEFAULT_EXACT_CAP}; use --precision float")
    out = ro.evaluate(args.op_id, f)
    os.makedirs(os.path.join(args.out, "eval"), exist_ok=True)
    name = re.sub(r"[^A-Za-z0-9_.-]", "_", args.op_id)
    path = os.path.join(args.out, "eval", f"{name}.csv")
    start = time.perf_counter()
    with _locked(args.out):
        ro.write_profile_csv(out, path)
        _write_manifest(args, [{"command": "eval", "csv": os.path.relpath(path, args.out)}],
                        time.perf_counter() - start)
    print(path)
    return 0


def cmd_table(args) -> int:
    exact = args.precision != "float"
    if args.kind == "bweights":
        if not args.m or args.k is None:
            raise UsageError("table bweights needs --m and --k")
        rows = []
        for m in parse_int_list(args.m):
            for d, b in enumerate(ro.b_weights(m, args.k)):
                rows.append({"m": m, "k": args.k, "d": d, "num": b.numerator, "den": b.denominator}
                            if exact else {"m": m, "k": args.k, "d": d, "value": float(b)})
        cols = ["m", "k", "d"] + (["num", "den"] if exact else ["value"])
    elif args.kind == "krawtchouk":
        params = _single_params(args)
        if exact and params.N > DEFAULT_EXACT_CAP:
            raise UsageError(f"N={params.N} exceeds the exact cap {DEFAULT_EXACT_CAP}; use --precision float")
        if args.dry_run:
            print(json.dumps({"table": "krawtchouk", "m": params.m, "N": params.N}))
            return 0
        K = krawtchouk_table(params, exact=exact).values
        rows = []
        for r in range(params.N + 1):
            for k in range(params.N + 1):
                v = K[r, k]
                row = {"m": params.m, "N": params.N, "r": r, "k": k}
                row.update({"num": v.numerator, "den": v.denominator} if exact else {"value": float(v)})
                rows.append(row)
        cols = ["m", "N", "r", "k"] + (["num", "den"] if exact else ["value"])
    else:
        params = _single_params(args)
        if args.r is None or args.k is None:
            raise UsageError("table summand needs --r and --k")
        r, k = args.r, args.k
        if not 0 <= r <= k <= params.N:
            raise UsageError("need 0 <= r <= k <= N")
        sa = summand_analysis(params, r, k)
        rows = [{"m": params.m, "N": params.N, "r": r, "k": k, "ell": sa.ell, "n": sa.n,
                 "J": sa.J, "A": sa.A, "C": sa.C, "j": sa.ell + i, "a_j": a}
                for i, a in enumerate(sa.a)]
        cols = ["m", "N", "r", "k", "ell", "n", "J", "A", "C", "j", "a_j"]
    if args.dry_run:
        print(json.dumps({"table": args.kind, "rows": len(rows)}))
        return 0
    text = csv_text(cols, rows)
    os.makedirs(os.path.join(args.out, "table"), exist_ok=True)
    path = os.path.join(args.out, "table", f"{args.kind}.csv")
    with _locked(args.out):
        with open(path, "w", newline="") as fh:
            fh.write(text)
    sys.stdout.write(text)
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse usage errors exit with 2 already
        return int(exc.code or 0)
    try:
        if args.command == "verify":
            return cmd_verify(args)
        if args.command == "eval":
            return cmd_eval(args)
        return cmd_table(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
