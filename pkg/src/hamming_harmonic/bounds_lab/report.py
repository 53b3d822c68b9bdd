"""Certificate reports, the plateau statistic and deterministic CSV output."""
from __future__ import annotations

import csv
import io
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from statistics import median
from typing import Iterable, Sequence

DEFAULT_PLATEAU = 3.0


def plateau_stat(values: Sequence[float]) -> float:
    """max / median of a nonnegative sequence.

    inf for negative, nan or infinite entries, or a zero median under a
    positive maximum; an all-zero sequence counts as flat (1.0).
    """
    vals = [float(v) for v in values]
    if not vals or any(not v >= 0 or math.isinf(v) for v in vals):
        return math.inf
    med, top = median(vals), max(vals)
    if med == 0:
        return 1.0 if top == 0 else math.inf
    return top / med


def lower_plateau_stat(values: Sequence[float]) -> float:
    """Plateau statistic of the reciprocals, i.e. median / min.

    A lower-bound constant that drifts to zero with N blows this up even
    though max/median of the raw values would stay small.
    """
    vals = [float(v) for v in values]
    if not vals or any(not v > 0 for v in vals):
        return math.inf
    return plateau_stat([1.0 / v for v in vals])


def fmt(value) -> str:
    """CSV cell text: num/den for rationals, shortest round-trip for floats."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, complex):
        return f"{value.real!r}{value.imag:+}j"
    if isinstance(value, float):
        return repr(value)
    if hasattr(value, "item"):  # numpy scalar
        return fmt(value.item())
    return str(value)


def csv_text(columns: Sequence[str], rows: Iterable[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([fmt(row.get(c)) for c in columns])
    return buf.getvalue()


@dataclass
class CertificateReport:
    """Outcome of one certificate run.

    ``rows`` feed the CSV; ``failures`` hold reproducible counterexamples,
    each with the CLI call that re-runs the failing grid point.
    """

    lemma_id: str
    grid: dict
    columns: list
    rows: list = field(default_factory=list)
    measured: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)
    runtime: float = 0.0
    seed: int | None = None
    notes: str = ""

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def fail(self, reason: str, repro: str = "", **where) -> None:
        self.failures.append({"reason": reason, "where": where, "repro": repro})

    def to_csv(self) -> str:
        return csv_text(self.columns, self.rows)

    def write_csv(self, directory, name: str | None = None) -> str:
        os.makedirs(directory, exist_ok=True)
        path = os.path.join(directory, f"{name or self.lemma_id}.csv")
        with open(path, "w", newline="") as fh:
            fh.write(self.to_csv())
        return path

    def summary_line(self) -> str:
        parts = [f"{self.lemma_id}: {self.verdict.upper()}"]
        for key, val in self.measured.items():
            parts.append(f"{key}={fmt(val) if not isinstance(val, float) else format(val, '.6g')}")
        if self.failures:
            first = self.failures[0]
            parts.append(f"first failure: {first['reason']} {first['where']}")
            if first["repro"]:
                parts.append(f"repro: {first['repro']}")
        return "  ".join(parts)
