"""Exact counting and uniform sampling of tables with prescribed margins.

Two independent routes are provided:

* :func:`count_bruteforce` walks every table row by row.  It is slow and
  only meant as an oracle.
* :class:`TableCounter` runs a column-by-column dynamic program whose
  state is the sorted multiset of residual row sums.  Rows with equal
  residual are exchangeable, so a transition only decides *how many* rows
  of each residual value receive each entry value, weighted by a
  multinomial coefficient.

Counts are Python ints and never rounded.
"""

from __future__ import annotations

import itertools
import math
import os
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import EmptyClass, MemoryGuardExceeded, OutOfRange, SizeGuardExceeded
from .margins import MarginPair, validate_margins

GUARD_ENV = "TABLECOUNT_GUARD_OVERRIDE"

BRUTEFORCE_MAX_CELLS = 16
BRUTEFORCE_MAX_TOTAL = 12
DP_MAX_STATES = 10**7


def guards_lifted(override: bool = False) -> bool:
    return override or os.environ.get(GUARD_ENV, "") == "1"


@dataclass(frozen=True)
class EntryAlphabet:
    """Set of values a table entry may take.

    ``members is None`` means every nonnegative integer.  Zero must always
    be allowed (otherwise empty rows could not be filled).
    """

    kind: str
    members: frozenset | None = None

    def __post_init__(self):
        if self.members is not None and 0 not in self.members:
            raise ValueError("entry alphabet must contain 0")

    @classmethod
    def all_nonnegative(cls) -> "EntryAlphabet":
        return cls("all-nonnegative")

    @classmethod
    def zero_one(cls) -> "EntryAlphabet":
        return cls("zero-one", frozenset({0, 1}))

    @classmethod
    def zero_to_three(cls) -> "EntryAlphabet":
        return cls("zero-to-three", frozenset({0, 1, 2, 3}))

    @classmethod
    def finite(cls, values: Iterable[int]) -> "EntryAlphabet":
        vals = frozenset(int(v) for v in values)
        if any(v < 0 for v in vals):
            raise ValueError("entry alphabet values must be nonnegative")
        if vals == {0, 1}:
            return cls.zero_one()
        if vals == {0, 1, 2, 3}:
            return cls.zero_to_three()
        return cls("finite-set", vals)

    @classmethod
    def parse(cls, text: str | None) -> "EntryAlphabet":
        """``None``/``"all"`` or a comma list such as ``"0,1,3"``."""
        if text is None or text.strip().lower() in ("all", "", "n", "nonnegative"):
            return cls.all_nonnegative()
        return cls.finite(int(tok) for tok in text.split(",") if tok.strip())

    def allows(self, v: int) -> bool:
        return v >= 0 and (self.members is None or v in self.members)

    def values_upto(self, cap: int) -> list[int]:
        if self.members is None:
            return list(range(cap + 1))
        return sorted(v for v in self.members if v <= cap)

    def max_upto(self, cap: int) -> int:
        return self.values_upto(cap)[-1]

    @property
    def chi2(self) -> int:
        return int(self.allows(2))

    @property
    def chi3(self) -> int:
        return int(self.allows(3))

    def __str__(self):
        if self.members is None:
            return "all"
        return ",".join(str(v) for v in sorted(self.members))


ALL = EntryAlphabet.all_nonnegative()


@dataclass(frozen=True)
class TableMatrix:
    entries: tuple[tuple[int, ...], ...]
    margins: MarginPair

    def __post_init__(self):
        rows = tuple(sum(r) for r in self.entries)
        cols = tuple(sum(c) for c in zip(*self.entries)) if self.entries else ()
        if rows != self.margins.rows or cols != self.margins.cols:
            raise ValueError("entries do not match the stated margins")

    @classmethod
    def from_entries(cls, entries) -> "TableMatrix":
        rows = tuple(tuple(int(x) for x in r) for r in np.asarray(entries).tolist())
        if any(x < 0 for r in rows for x in r):
            raise ValueError("table entries must be nonnegative")
        margins = validate_margins([sum(r) for r in rows], [sum(c) for c in zip(*rows)])
        return cls(rows, margins)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.int64)

    def transpose(self) -> "TableMatrix":
        return TableMatrix(tuple(zip(*self.entries)), self.margins.transpose())

    def to_dict(self) -> dict:
        return {"entries": [list(r) for r in self.entries]}


def _row_fillings(total: int, caps: Sequence[int], alphabet: EntryAlphabet) -> Iterator[tuple[int, ...]]:
    """All ways to write ``total`` as entries bounded by ``caps``."""
    n = len(caps)
    suffix = [0] * (n + 1)
    for j in range(n - 1, -1, -1):
        suffix[j] = suffix[j + 1] + alphabet.max_upto(caps[j])
    out = [0] * n

    def rec(j, left):
        if j == n:
            if left == 0:
                yield tuple(out)
            return
        if left > suffix[j]:
            return
        for v in alphabet.values_upto(min(caps[j], left)):
            out[j] = v
            yield from rec(j + 1, left - v)
        out[j] = 0

    yield from rec(0, total)


def enumerate_tables(margins: MarginPair, alphabet: EntryAlphabet = ALL) -> Iterator[TableMatrix]:
    """Yield every table with the given margins, row by row."""
    m = margins.m
    resid = list(margins.cols)
    chosen: list[tuple[int, ...]] = []

    def rec(i):
        if i == m:
            if not any(resid):
                yield TableMatrix(tuple(chosen), margins)
            return
        for row in _row_fillings(margins.rows[i], resid, alphabet):
            for j, v in enumerate(row):
                resid[j] -= v
            chosen.append(row)
            yield from rec(i + 1)
            chosen.pop()
            for j, v in enumerate(row):
                resid[j] += v

    yield from rec(0)


def count_bruteforce(margins: MarginPair, alphabet: EntryAlphabet = ALL, *,
                     override: bool = False,
                     max_cells: int = BRUTEFORCE_MAX_CELLS,
                     max_total: int = BRUTEFORCE_MAX_TOTAL) -> int:
    if not guards_lifted(override) and (margins.m * margins.n > max_cells or margins.total > max_total):
        raise SizeGuardExceeded(
            f"brute force limited to {max_cells} cells and S <= {max_total} "
            f"(got {margins.m}x{margins.n}, S={margins.total})")
    return sum(1 for _ in enumerate_tables(margins, alphabet))


def _groups(state: tuple[int, ...]) -> list[tuple[int, int]]:
    return [(r, len(list(g))) for r, g in itertools.groupby(state)]


class TableCounter:
    """Memoized column-by-column counter for ``M(s, t, J)``.

    The memo is keyed on ``(sorted residual rows, column index)``; columns
    are processed in descending order so the index determines the multiset
    of remaining columns.
    """

    def __init__(self, margins: MarginPair, alphabet: EntryAlphabet = ALL, *,
                 max_states: int = DP_MAX_STATES, override: bool = False):
        self.margins = margins
        self.alphabet = alphabet
        self.max_states = max_states
        self._override = override
        # fewer rows means a smaller residual state
        self._transposed = margins.m > margins.n
        work = margins.transpose() if self._transposed else margins
        self._rows = work.rows
        self._order = sorted(range(work.n), key=lambda j: -work.cols[j])
        self._cols = tuple(work.cols[j] for j in self._order)
        # largest amount a single row can still absorb from columns j..n-1
        cap = [0] * (len(self._cols) + 1)
        for j in range(len(self._cols) - 1, -1, -1):
            cap[j] = cap[j + 1] + alphabet.max_upto(self._cols[j])
        self._row_cap = cap
        self._memo: dict = {}
        self._count: int | None = None

    @property
    def states_visited(self) -> int:
        return len(self._memo)

    def count(self) -> int:
        if self._count is None:
            start = tuple(sorted(self._rows, reverse=True))
            self._count = self._f(start, 0)
        return self._count

    def _splits(self, r: int, c: int, budget: int):
        """Ways to give ``c`` rows of residual ``r`` entries; yields (split, used, multinomial)."""
        vals = self.alphabet.values_upto(min(r, budget))
        split: list[tuple[int, int]] = []

        def rec(vi, rows_left, left, weight):
            if rows_left == 0:
                yield tuple(split), budget - left, weight
                return
            if vi == len(vals):
                return
            v = vals[vi]
            if vi == len(vals) - 1:
                k_range = [rows_left]
            else:
                k_range = range(rows_left, -1, -1)
            for k in k_range:
                if v * k > left:
                    continue
                if k:
                    split.append((v, k))
                yield from rec(vi + 1, rows_left - k, left - v * k, weight * math.comb(rows_left, k))
                if k:
                    split.pop()

        yield from rec(0, c, budget, 1)

    def _transitions(self, state: tuple[int, ...], t: int):
        """Yield (multinomial weight, per-group split, next state) for one column of sum ``t``."""
        groups = _groups(state)
        room = [0] * (len(groups) + 1)
        for g in range(len(groups) - 1, -1, -1):
            r, c = groups[g]
            room[g] = room[g + 1] + c * self.alphabet.max_upto(min(r, t))

        def rec(gi, budget):
            if budget > room[gi]:
                return
            if gi == len(groups):
                yield 1, ()
                return
            r, c = groups[gi]
            for split, used, w in self._splits(r, c, budget):
                for w2, rest in rec(gi + 1, budget - used):
                    yield w * w2, (split,) + rest

        for w, splits in rec(0, t):
            nxt: list[int] = []
            for (r, _), split in zip(groups, splits):
                for v, k in split:
                    nxt.extend([r - v] * k)
            nxt.sort(reverse=True)
            yield w, splits, tuple(nxt)

    def _f(self, state: tuple[int, ...], j: int) -> int:
        if j == len(self._cols):
            return int(not any(state))
        if state and state[0] > self._row_cap[j]:
            return 0
        key = (state, j)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        total = 0
        for w, _, nxt in self._transitions(state, self._cols[j]):
            sub = self._f(nxt, j + 1)
            if sub:
                total += w * sub
        self._memo[key] = total
        if len(self._memo) > self.max_states and not guards_lifted(self._override):
            raise MemoryGuardExceeded(len(self._memo), self.max_states)
        return total

    def sample(self, rng: random.Random) -> TableMatrix:
        """Draw one table uniformly at random from the class."""
        if self.count() == 0:
            raise EmptyClass(f"no tables with margins {self.margins.rows} / {self.margins.cols}")
        resid = list(self._rows)
        m, n = len(self._rows), len(self._cols)
        out = [[0] * n for _ in range(m)]
        for j, t in enumerate(self._cols):
            state = tuple(sorted(resid, reverse=True))
            pick = rng.randrange(self._f(state, j))
            chosen = None
            for w, splits, nxt in self._transitions(state, t):
                weight = w * self._f(nxt, j + 1)
                if pick < weight:
                    chosen = splits
                    break
                pick -= weight
            assert chosen is not None
            members = {r: [i for i in range(m) if resid[i] == r] for r, _ in _groups(state)}
            for (r, _), split in zip(_groups(state), chosen):
                vals = [v for v, k in split for _ in range(k)]
                rng.shuffle(vals)
                for i, v in zip(members[r], vals):
                    out[i][self._order[j]] = v
                    resid[i] -= v
        table = TableMatrix(tuple(tuple(r) for r in out),
                            self.margins.transpose() if self._transposed else self.margins)
        return table.transpose() if self._transposed else table


def count_exact(margins: MarginPair, alphabet: EntryAlphabet = ALL, **guards) -> int:
    return TableCounter(margins, alphabet, **guards).count()


def sample_uniform(margins: MarginPair, alphabet: EntryAlphabet = ALL, seed: int = 0) -> TableMatrix:
    return TableCounter(margins, alphabet).sample(random.Random(seed))


def _compositions(total: int, parts: int) -> int:
    """Number of weak compositions of ``total`` into ``parts`` ordered parts."""
    if parts == 0:
        return int(total == 0)
    return math.comb(total + parts - 1, total)


def row_sum_distribution(m: int, n: int, S: int, k: int) -> Fraction:
    """Probability that a given row of a uniform random m x n table with
    entry total ``S`` (no margin constraint) has sum ``k``."""
    if m < 1 or n < 1 or S < 0 or not 0 <= k <= S:
        raise OutOfRange(f"need m, n >= 1 and 0 <= k <= S (got m={m}, n={n}, S={S}, k={k})")
    return Fraction(_compositions(k, n) * _compositions(S - k, (m - 1) * n),
                    _compositions(S, m * n))


def expected_moments(m: int, n: int, S: int) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    """Expected scaled central moments ``(E mu2, E nu2, E mu3, E nu3)`` of a
    uniform random m x n table with entry total ``S``."""
    mn = m * n
    e_mu2 = Fraction(n * (m - 1), mn + 1)
    e_nu2 = Fraction(m * (n - 1), mn + 1)
    e_mu3 = Fraction(n * (m - 1) * (m - 2) * (mn + 2 * S), m * (mn + 1) * (mn + 2))
    e_nu3 = Fraction(m * (n - 1) * (n - 2) * (mn + 2 * S), n * (mn + 1) * (mn + 2))
    return e_mu2, e_nu2, e_mu3, e_nu3
