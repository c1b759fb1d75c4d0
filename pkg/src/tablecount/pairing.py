"""The pairing (configuration) model for tables with given margins.

Row points ``0..S-1`` are grouped consecutively into cells of sizes
``s_1..s_m`` in input order, and column points likewise into cells of sizes
``t_1..t_n``.  A pairing is a bijection from row points to column points,
stored as its image tuple.  The table induced by a pairing counts the
pairs joining each (row cell, column cell); each table with entries
``q_ij`` arises from exactly ``prod s_i! prod t_j! / prod q_ij!`` pairings.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator

import numpy as np

from .errors import SizeGuardExceeded, UndefinedMoment, ZeroTotal
from .exact import ALL, TableMatrix, enumerate_tables, guards_lifted
from .margins import MarginPair, falling_factorial, power_sums

PAIRING_MAX_TOTAL = 8


def point_cells(sizes) -> np.ndarray:
    return np.repeat(np.arange(len(sizes)), sizes)


@dataclass(frozen=True)
class Pairing:
    margins: MarginPair
    image: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.image) != list(range(self.margins.total)):
            raise ValueError("pairing image must be a permutation of the column points")

    @property
    def row_cells(self) -> np.ndarray:
        return point_cells(self.margins.rows)

    @property
    def col_cells(self) -> np.ndarray:
        return point_cells(self.margins.cols)

    @property
    def pairs(self) -> list[tuple[int, int]]:
        return list(enumerate(self.image))

    def to_dict(self) -> dict:
        return {"image": list(self.image)}


def _check_guard(margins: MarginPair, override: bool, max_total: int):
    if margins.total > max_total and not guards_lifted(override):
        raise SizeGuardExceeded(f"pairing enumeration limited to S <= {max_total} (got {margins.total})")


def enumerate_pairings(margins: MarginPair, *, override: bool = False,
                       max_total: int = PAIRING_MAX_TOTAL) -> Iterator[Pairing]:
    _check_guard(margins, override, max_total)
    for perm in itertools.permutations(range(margins.total)):
        yield Pairing(margins, perm)


def random_pairing(margins: MarginPair, seed: int) -> Pairing:
    if margins.total < 1:
        raise ZeroTotal("random_pairing")
    perm = np.random.default_rng(seed).permutation(margins.total)
    return Pairing(margins, tuple(int(x) for x in perm))


def pairing_to_matrix(p: Pairing) -> TableMatrix:
    m, n = p.margins.m, p.margins.n
    q = np.zeros((m, n), dtype=np.int64)
    np.add.at(q, (p.row_cells, p.col_cells[list(p.image)]), 1)
    return TableMatrix(tuple(tuple(int(x) for x in r) for r in q), p.margins)


def multiplicity_vector(entries) -> dict[int, int]:
    """``{r: a_r}`` for r >= 2, where a_r counts entries equal to r."""
    return dict(sorted(Counter(int(x) for x in np.ravel(entries) if x >= 2).items()))


def weight_of(avec: dict[int, int]) -> int:
    w = 1
    for r, a in avec.items():
        w *= math.factorial(r) ** a
    return w


def multiplicity_and_weight(p: Pairing) -> tuple[dict[int, int], int]:
    avec = multiplicity_vector(pairing_to_matrix(p).entries)
    return avec, weight_of(avec)


def _pairing_tables(margins: MarginPair, override: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """Distinct induced tables (flattened) and how many pairings give each."""
    _check_guard(margins, override, PAIRING_MAX_TOTAL)
    S, m, n = margins.total, margins.m, margins.n
    if S == 0:
        return np.zeros((1, m * n), dtype=np.int64), np.ones(1, dtype=np.int64)
    perms = np.array(list(itertools.permutations(range(S))), dtype=np.int64)
    codes = point_cells(margins.rows)[None, :] * n + point_cells(margins.cols)[perms]
    flat = (np.arange(len(perms))[:, None] * (m * n) + codes).ravel()
    tables = np.bincount(flat, minlength=len(perms) * m * n).reshape(len(perms), m * n)
    return np.unique(tables, axis=0, return_counts=True)


def _margin_factorials(margins: MarginPair) -> int:
    out = 1
    for x in margins.rows + margins.cols:
        out *= math.factorial(x)
    return out


def verify_weight_identity(margins: MarginPair, class_predicate: Callable[[dict], bool], *,
                           override: bool = False) -> tuple[int, Fraction]:
    """Count tables whose multiplicity vector satisfies the predicate in two ways.

    ``lhs`` enumerates tables directly; ``rhs`` sums pairing weights over all
    ``S!`` pairings and divides by ``prod s_i! prod t_j!``.  The two agree.
    """
    _check_guard(margins, override, PAIRING_MAX_TOTAL)
    lhs = sum(1 for q in enumerate_tables(margins, ALL)
              if class_predicate(multiplicity_vector(q.entries)))
    tables, counts = _pairing_tables(margins, override)
    total = 0
    for table, c in zip(tables, counts):
        avec = multiplicity_vector(table)
        if class_predicate(avec):
            total += int(c) * weight_of(avec)
    return lhs, Fraction(total, _margin_factorials(margins))


def pairing_class_sizes(margins: MarginPair, *, override: bool = False) -> Counter:
    """Number of pairings with ``d`` double and ``h`` triple pairs and no
    class of multiplicity above 3, keyed by ``(d, h)``."""
    out: Counter = Counter()
    for table, c in zip(*_pairing_tables(margins, override)):
        if table.max(initial=0) <= 3:
            out[int((table == 2).sum()), int((table == 3).sum())] += int(c)
    return out


@dataclass(frozen=True)
class DoubletMoments:
    """Expected numbers ``b_r`` of r-sets of doublets (unordered pairs of
    parallel pairs) in a uniform random pairing.

    ``None`` marks an order whose falling-factorial denominator vanishes.
    ``truncated[r]`` is set where only the rational main term is kept.
    """

    b: tuple
    truncated: tuple
    total: int

    def get(self, r: int) -> Fraction:
        value = self.b[r]
        if value is None:
            raise UndefinedMoment(r, self.total)
        return value


def _second_factor(x2: int, x3: int) -> int:
    return x2 * x2 - 4 * x3 - 2 * x2


def doublet_moments(margins: MarginPair) -> DoubletMoments:
    S = margins.total
    S2, T2 = power_sums(margins, 2)
    S3, T3 = power_sums(margins, 3)
    f2, f3, f4 = (falling_factorial(S, k) for k in (2, 3, 4))
    b1 = Fraction(S2 * T2, 2 * f2) if f2 else None
    b2 = (Fraction(S3 * T3, 2 * f3) + Fraction(_second_factor(S2, S3) * _second_factor(T2, T3), 8 * f4)
          if f4 else None)
    b3 = Fraction(S3 * T3, 6 * f3) if f3 else None
    return DoubletMoments(b=(Fraction(1), b1, b2, b3, Fraction(0)),
                          truncated=(False, False, False, True, True), total=S)


@dataclass(frozen=True)
class ClassProbabilities:
    """Main terms of the probabilities of exactly 0..3 doublets."""

    p: tuple
    truncated: tuple = (True, True, True, True)


def class_probabilities(margins: MarginPair) -> ClassProbabilities:
    S = margins.total
    if S < 4:
        raise UndefinedMoment(4, S)
    S2, T2 = power_sums(margins, 2)
    S3, T3 = power_sums(margins, 3)
    one = Fraction(S2 * T2, 2 * falling_factorial(S, 2))
    three = Fraction(S3 * T3, falling_factorial(S, 3))
    two = Fraction(_second_factor(S2, S3) * _second_factor(T2, T3), 8 * falling_factorial(S, 4))
    return ClassProbabilities(p=(
        1 - one + three / 3 + two,
        one - three / 2 - 2 * two,
        two,
        three / 6,
    ))


def doublet_distribution(margins: MarginPair, *, override: bool = False) -> Counter:
    """Exact number of pairings with each doublet count (exhaustive)."""
    tables, counts = _pairing_tables(margins, override)
    doublets = (tables * (tables - 1) // 2).sum(axis=1)
    out: Counter = Counter()
    for d, c in zip(doublets, counts):
        out[int(d)] += int(c)
    return out


def exhaustive_doublet_moments(margins: MarginPair, rmax: int = 4, *,
                               override: bool = False) -> list[Fraction]:
    """Exact ``E[C(D, r)]`` for ``r = 0..rmax`` where D is the doublet count."""
    dist = doublet_distribution(margins, override=override)
    total = sum(dist.values())
    return [Fraction(sum(c * math.comb(d, r) for d, c in dist.items()), total)
            for r in range(rmax + 1)]


def exhaustive_class_probabilities(margins: MarginPair, kmax: int = 3, *,
                                   override: bool = False) -> list[Fraction]:
    dist = doublet_distribution(margins, override=override)
    total = sum(dist.values())
    return [Fraction(dist.get(k, 0), total) for k in range(kmax + 1)]


def bonferroni_partial_sums(b, k: int) -> list:
    """Partial sums of ``sum_{r>=k} (-1)^(r+k) C(r, k) b_r``."""
    out, acc = [], 0
    for r in range(k, len(b)):
        acc += (-1) ** (r + k) * math.comb(r, k) * b[r]
        out.append(acc)
    return out


def no_parallel_fraction(margins: MarginPair, samples: int, seed: int,
                         chunk: int = 20000) -> tuple[float, float]:
    """Monte Carlo fraction of uniform pairings with every class simple.

    Returns ``(fraction, standard error)``.
    """
    if margins.total < 1:
        raise ZeroTotal("no_parallel_fraction")
    rng = np.random.default_rng(seed)
    S, n = margins.total, margins.n
    rc, cc = point_cells(margins.rows), point_cells(margins.cols)
    hits = 0
    done = 0
    while done < samples:
        k = min(chunk, samples - done)
        perms = rng.permuted(np.tile(np.arange(S), (k, 1)), axis=1)
        codes = np.sort(rc[None, :] * n + cc[perms], axis=1)
        hits += int((~(np.diff(codes, axis=1) == 0).any(axis=1)).sum())
        done += k
    p = hits / samples
    return p, math.sqrt(p * (1 - p) / samples)
