"""Margin vectors, falling-factorial power sums, scaled central moments and
regime classification.

All quantities that feed identities are kept exact (``int`` or
``fractions.Fraction``); only diagnostics such as the sparsity ratio are
floats.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from .errors import EmptyMargin, NegativeEntry, SumMismatch, UnsupportedOrder, ZeroTotal


@dataclass(frozen=True)
class MarginPair:
    rows: tuple[int, ...]
    cols: tuple[int, ...]
    total: int

    @property
    def m(self) -> int:
        return len(self.rows)

    @property
    def n(self) -> int:
        return len(self.cols)

    @property
    def s_max(self) -> int:
        return max(self.rows)

    @property
    def t_max(self) -> int:
        return max(self.cols)

    def transpose(self) -> "MarginPair":
        return MarginPair(self.cols, self.rows, self.total)

    def is_semiregular(self) -> bool:
        return len(set(self.rows)) == 1 and len(set(self.cols)) == 1

    def to_dict(self) -> dict:
        return {"rows": list(self.rows), "cols": list(self.cols)}


def validate_margins(rows: Iterable[int], cols: Iterable[int]) -> MarginPair:
    """Check and freeze a pair of margin vectors.

    An all-zero pair is allowed (it describes the single all-zero table).
    """
    rows = tuple(int(x) for x in rows)
    cols = tuple(int(x) for x in cols)
    if not rows:
        raise EmptyMargin("rows")
    if not cols:
        raise EmptyMargin("cols")
    for side, vec in (("rows", rows), ("cols", cols)):
        for i, x in enumerate(vec):
            if x < 0:
                raise NegativeEntry(side, i)
    sr, sc = sum(rows), sum(cols)
    if sr != sc:
        raise SumMismatch(sr, sc)
    return MarginPair(rows, cols, sr)


def load_margins(path: str | Path) -> MarginPair:
    """Read ``{"rows": [...], "cols": [...]}`` from a JSON file."""
    with open(path) as fh:
        data = json.load(fh)
    return validate_margins(data["rows"], data["cols"])


def parse_int_list(text: str) -> list[int]:
    return [int(tok) for tok in text.replace(" ", "").split(",") if tok != ""]


def falling_factorial(x: int, k: int) -> int:
    """``x (x-1) ... (x-k+1)``; the empty product for ``k == 0`` is 1."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    out = 1
    for i in range(k):
        out *= x - i
    return out


def power_sums(margins: MarginPair, k: int) -> tuple[int, int]:
    """Return ``(S_k, T_k)``, sums of the k-th falling factorials of the margins."""
    if k not in (1, 2, 3, 4):
        raise UnsupportedOrder(k)
    return (sum(falling_factorial(x, k) for x in margins.rows),
            sum(falling_factorial(x, k) for x in margins.cols))


def _scaled_moment(vec: Sequence[int], total: int, cells: int, k: int) -> Fraction:
    mean = Fraction(total, len(vec))
    dev = sum((x - mean) ** k for x in vec)
    return Fraction(cells, total * (cells + total)) * dev


@dataclass(frozen=True)
class MomentSummary:
    s_max: int
    t_max: int
    S2: int
    S3: int
    T2: int
    T3: int
    mu2: Fraction
    mu3: Fraction
    nu2: Fraction
    nu3: Fraction
    sparsity_ratio: float


def sparsity_ratio(margins: MarginPair) -> float:
    """``s*t / S^(2/3)``; below 1 roughly means the sparse regime applies."""
    return margins.s_max * margins.t_max / margins.total ** (2.0 / 3.0)


def central_moments(margins: MarginPair) -> MomentSummary:
    S = margins.total
    if S == 0:
        raise ZeroTotal("central_moments")
    mn = margins.m * margins.n
    S2, T2 = power_sums(margins, 2)
    S3, T3 = power_sums(margins, 3)
    return MomentSummary(
        s_max=margins.s_max,
        t_max=margins.t_max,
        S2=S2, S3=S3, T2=T2, T3=T3,
        mu2=_scaled_moment(margins.rows, S, mn, 2),
        mu3=_scaled_moment(margins.rows, S, mn, 3),
        nu2=_scaled_moment(margins.cols, S, mn, 2),
        nu3=_scaled_moment(margins.cols, S, mn, 3),
        sparsity_ratio=sparsity_ratio(margins),
    )


@dataclass(frozen=True)
class RegimeReport:
    substantial: bool
    N2: int
    N3: int
    delta_cap: int
    sparsity_ratio: float


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def entry_two_threshold(S: int, S2: int, T2: int) -> int:
    """High-probability cap on the number of entries equal to 2."""
    p = S2 * T2
    # p < S^(7/4)  <=>  p^4 < S^7, compared exactly
    if p ** 4 < S ** 7:
        return 22
    logS = math.log(S)
    if 5600 * p < S * S * logS:
        return math.ceil(logS)
    return _ceil_div(5600 * p, S * S)


def entry_three_threshold(S: int, S3: int, T3: int) -> int:
    """High-probability cap on the number of entries equal to 3."""
    return max(math.ceil(math.log(S)), _ceil_div(230000 * S3 * T3, S ** 3))


def is_substantial(margins: MarginPair, S2: int, T2: int) -> bool:
    S = margins.total
    s, t = margins.s_max, margins.t_max
    st = s * t
    # "st = o(S^(2/3))" is read as st <= S^(2/3) for a single instance
    if st < 1 or st ** 3 > S ** 2:
        return False
    log2 = math.log(S) ** 2
    if S2 < s * log2 or T2 < t * log2:
        return False
    # S2*T2 >= (st)^(3/2) * S  <=>  (S2*T2)^2 >= (st)^3 * S^2
    return (S2 * T2) ** 2 >= st ** 3 * S * S


def classify_regime(margins: MarginPair) -> RegimeReport:
    S = margins.total
    if S < 2:
        raise ZeroTotal("classify_regime (needs S >= 2)")
    S2, T2 = power_sums(margins, 2)
    S3, T3 = power_sums(margins, 3)
    return RegimeReport(
        substantial=is_substantial(margins, S2, T2),
        N2=entry_two_threshold(S, S2, T2),
        N3=entry_three_threshold(S, S3, T3),
        delta_cap=min(margins.s_max, margins.t_max),
        sparsity_ratio=sparsity_ratio(margins),
    )
