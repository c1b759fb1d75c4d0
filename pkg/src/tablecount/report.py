"""Exact-versus-estimate comparisons and convergence tables."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction

from .asymptotics import SemiregularSpec, delta_from_count, estimate
from .errors import GuardExceeded
from .exact import ALL, EntryAlphabet, TableCounter
from .margins import MarginPair


@dataclass(frozen=True)
class ComparisonRow:
    label: str
    S: int
    exact_log: float
    estimate_log: float
    abs_log_error: float
    predicted_order: float
    skipped: bool = False

    @property
    def error_ratio(self) -> float:
        return self.abs_log_error / self.predicted_order if self.predicted_order else math.inf

    def to_dict(self) -> dict:
        d = asdict(self)
        d["error_ratio"] = None if self.skipped else self.error_ratio
        return d


def exact_alphabet(formula: str, alphabet: EntryAlphabet | None) -> EntryAlphabet:
    """Which class of tables a formula estimates."""
    if formula in ("01", "zero_one"):
        return EntryAlphabet.zero_one()
    if formula == "restricted":
        return alphabet or ALL
    return ALL


def compare_estimate(margins: MarginPair, formula: str = "main", *,
                     alphabet: EntryAlphabet | None = None, delta: float = 0.0,
                     label: str | None = None, **guards) -> ComparisonRow:
    count = TableCounter(margins, exact_alphabet(formula, alphabet), **guards).count()
    if count == 0:
        raise ValueError("exact count is zero; log comparison undefined")
    est = estimate(formula, margins, alphabet=alphabet, delta=delta)
    exact_log = math.log(count)
    return ComparisonRow(
        label=label or f"{margins.m}x{margins.n}",
        S=margins.total,
        exact_log=exact_log,
        estimate_log=est.log_value,
        abs_log_error=abs(exact_log - est.log_value),
        predicted_order=est.error_order,
    )


def regular_family(s: int, t: int, size: int) -> MarginPair | None:
    """``size`` rows of sum ``s`` and ``size*s/t`` columns of sum ``t``."""
    cols = Fraction(size * s, t)
    if cols.denominator != 1:
        return None
    n = int(cols)
    return MarginPair((s,) * size, (t,) * n, size * s)


def convergence_report(s: int, t: int, sizes, formula: str = "main", **guards) -> list[ComparisonRow]:
    rows = []
    for size in sizes:
        mp = regular_family(s, t, size)
        label = f"regular({s},{t})@{size}"
        if mp is None:
            rows.append(ComparisonRow(label, 0, math.nan, math.nan, math.nan, math.nan, skipped=True))
            continue
        try:
            rows.append(compare_estimate(mp, formula, label=label, **guards))
        except GuardExceeded:
            rows.append(ComparisonRow(label, mp.total, math.nan, math.nan, math.nan, math.nan, skipped=True))
    return rows


def delta_sequence(s: int, t: int, sizes) -> list[tuple[int, float, float]]:
    """``(size, delta, limit)`` for semiregular tables of each size."""
    out = []
    for size in sizes:
        mp = regular_family(s, t, size)
        spec = SemiregularSpec(mp.m, s, mp.n, t)
        d, lim = delta_from_count(spec, math.log(TableCounter(mp).count()))
        out.append((size, d, lim))
    return out
