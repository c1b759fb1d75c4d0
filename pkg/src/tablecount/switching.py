"""D-switchings on tables, their counting bounds, and two generic tools
used alongside them: a falling-product inequality and bracketing bounds for
sums of sequences defined by ratio recurrences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple, Sequence

import numpy as np

from .errors import HypothesisViolated, NotApplicable, SpecShapeMismatch
from .exact import TableMatrix
from .margins import falling_factorial

Cell = tuple[int, int]


@dataclass(frozen=True)
class SwitchingSite:
    """Ordered positions ``(i_0, j_0), ..., (i_D, j_D)`` of a D-switching."""

    D: int
    positions: tuple[Cell, ...]

    def __post_init__(self):
        if self.D < 2:
            raise ValueError("D-switchings need D >= 2")
        pos = tuple((int(i), int(j)) for i, j in self.positions)
        object.__setattr__(self, "positions", pos)
        if len(pos) != self.D + 1:
            raise ValueError(f"a {self.D}-switching needs {self.D + 1} positions")
        if len({i for i, _ in pos}) != len(pos) or len({j for _, j in pos}) != len(pos):
            raise ValueError("switching rows and columns must be pairwise distinct")

    def to_dict(self) -> dict:
        return {"D": self.D, "positions": [list(p) for p in self.positions]}


def _forward_problem(q: np.ndarray, site: SwitchingSite) -> str | None:
    D = site.D
    (i0, j0), rest = site.positions[0], site.positions[1:]
    if q[i0, j0] != D:
        return f"entry ({i0},{j0}) is {q[i0, j0]}, not {D}"
    for i, j in rest:
        if q[i, j] in (0, D + 1):
            return f"entry ({i},{j}) is {q[i, j]}"
        if q[i, j0] != 0:
            return f"entry ({i},{j0}) is not 0"
        if q[i0, j] != 0:
            return f"entry ({i0},{j}) is not 0"
    return None


def _reverse_problem(r: np.ndarray, site: SwitchingSite) -> str | None:
    D = site.D
    (i0, j0), rest = site.positions[0], site.positions[1:]
    if r[i0, j0] != 0:
        return f"entry ({i0},{j0}) is {r[i0, j0]}, not 0"
    for i, j in rest:
        if r[i, j] == D:
            return f"entry ({i},{j}) equals {D}"
        if r[i, j0] != 1:
            return f"entry ({i},{j0}) is not 1"
        if r[i0, j] != 1:
            return f"entry ({i0},{j}) is not 1"
    return None


def _rebuild(a: np.ndarray, like: TableMatrix) -> TableMatrix:
    return TableMatrix(tuple(tuple(int(x) for x in row) for row in a), like.margins)


def apply_switching(Q: TableMatrix, site: SwitchingSite) -> TableMatrix:
    q = Q.array
    problem = _forward_problem(q, site)
    if problem:
        raise NotApplicable(problem)
    (i0, j0), rest = site.positions[0], site.positions[1:]
    q[i0, j0] = 0
    for i, j in rest:
        q[i0, j] = 1
        q[i, j0] = 1
        q[i, j] -= 1
    return _rebuild(q, Q)


def apply_reverse_switching(R: TableMatrix, site: SwitchingSite) -> TableMatrix:
    r = R.array
    problem = _reverse_problem(r, site)
    if problem:
        raise NotApplicable(problem)
    (i0, j0), rest = site.positions[0], site.positions[1:]
    r[i0, j0] = site.D
    for i, j in rest:
        r[i0, j] = 0
        r[i, j0] = 0
        r[i, j] += 1
    return _rebuild(r, R)


def _ordered_matchings(cands: list[Cell], D: int) -> Iterator[tuple[Cell, ...]]:
    """Ordered D-tuples of candidate cells with distinct rows and columns."""
    chosen: list[Cell] = []
    rows: set[int] = set()
    cols: set[int] = set()

    def rec():
        if len(chosen) == D:
            yield tuple(chosen)
            return
        for i, j in cands:
            if i in rows or j in cols:
                continue
            chosen.append((i, j))
            rows.add(i)
            cols.add(j)
            yield from rec()
            chosen.pop()
            rows.discard(i)
            cols.discard(j)

    yield from rec()


def enumerate_switchings(Q: TableMatrix, D: int, restricted: bool = False) -> Iterator[SwitchingSite]:
    """All forward D-switching sites of ``Q`` as ordered tuples.

    With ``restricted`` the switched cells must all hold 1, so no new 2s or
    3s appear.
    """
    q = Q.array
    m, n = q.shape
    for i0, j0 in zip(*np.nonzero(q == D)):
        i0, j0 = int(i0), int(j0)
        rows = [i for i in range(m) if i != i0 and q[i, j0] == 0]
        cols = [j for j in range(n) if j != j0 and q[i0, j] == 0]
        cands = [(i, j) for i in rows for j in cols
                 if q[i, j] not in (0, D + 1) and (not restricted or q[i, j] == 1)]
        for rest in _ordered_matchings(cands, D):
            yield SwitchingSite(D, ((i0, j0),) + rest)


def enumerate_reverse_switchings(R: TableMatrix, D: int) -> Iterator[SwitchingSite]:
    r = R.array
    m, n = r.shape
    for i0, j0 in zip(*np.nonzero(r == 0)):
        i0, j0 = int(i0), int(j0)
        rows = [i for i in range(m) if i != i0 and r[i, j0] == 1]
        cols = [j for j in range(n) if j != j0 and r[i0, j] == 1]
        cands = [(i, j) for i in rows for j in cols if r[i, j] != D]
        for rest in _ordered_matchings(cands, D):
            yield SwitchingSite(D, ((i0, j0),) + rest)


def count_switchings(Q: TableMatrix, D: int, restricted: bool = False) -> int:
    return sum(1 for _ in enumerate_switchings(Q, D, restricted))


def count_reverse_switchings(R: TableMatrix, D: int) -> int:
    return sum(1 for _ in enumerate_reverse_switchings(R, D))


def switching_bounds(Q: TableMatrix, D: int) -> tuple[int, int]:
    """``(J * max(K - 2st, 0)^D, S_D * T_D)``: a lower bound on the forward
    switchings and an upper bound on the reverse switchings of ``Q``."""
    q = Q.array
    J = int((q == D).sum())
    K = int(((q > 0) & (q <= D)).sum())
    st = Q.margins.s_max * Q.margins.t_max
    lower = J * max(K - 2 * st, 0) ** D
    SD = sum(falling_factorial(x, D) for x in Q.margins.rows)
    TD = sum(falling_factorial(x, D) for x in Q.margins.cols)
    return lower, SD * TD


def entry_histogram(Q: TableMatrix) -> dict[int, int]:
    vals, counts = np.unique(Q.array, return_counts=True)
    return {int(v): int(c) for v, c in zip(vals, counts)}


def useful_inequality_check(n, q, k: int) -> tuple[float, float, bool]:
    """Compare ``n (n-q) ... (n-(k-1)q)`` with ``(n/e)^k``.

    Both sides are evaluated in log space and returned exponentiated.  If
    ``n < k q`` the inequality is not claimed and :class:`HypothesisViolated`
    carries the two sides.
    """
    if k < 1 or n <= 0 or q <= 0:
        raise ValueError("need k >= 1 and n, q > 0")
    factors = [n - i * q for i in range(k)]
    rhs_log = k * (math.log(n) - 1.0)
    if any(f <= 0 for f in factors):
        lhs_log = -math.inf
        lhs = float(math.prod(factors))
    else:
        lhs_log = math.fsum(math.log(f) for f in factors)
        lhs = math.exp(lhs_log) if lhs_log < 700 else math.inf
    rhs = math.exp(rhs_log) if rhs_log < 700 else math.inf
    holds = lhs_log >= rhs_log
    # relative slack so that boundary cases like n = k q survive rounding
    if n < k * q * (1 - 1e-12):
        raise HypothesisViolated(f"n={n} < k*q={k * q}", lhs=lhs, rhs=rhs)
    return lhs, rhs, holds


@dataclass
class BoundSpec:
    """Inputs to the summation bracketing bounds.

    ``A``, ``B`` and ``delta`` hold ``A(1..N)``, ``B(1..N)``, ``delta_1..N``;
    ``gamma`` holds ``gamma_0..gamma_K``.  ``variant`` is ``"lemma6"``
    (ratio with a perturbation factor ``1 + delta_i``) or ``"lemma7"``
    (no perturbation, constant ``c_hat``).
    """

    N: int
    A: Sequence[float]
    B: Sequence[float]
    variant: str = "lemma6"
    K: int = 0
    delta: Sequence[float] = field(default_factory=list)
    gamma: Sequence[float] = field(default_factory=list)
    c: float = 6.0
    c_hat: float = 0.1

    def check_shape(self):
        if self.variant not in ("lemma6", "lemma7"):
            raise SpecShapeMismatch(f"unknown variant {self.variant!r}")
        if len(self.A) != self.N or len(self.B) != self.N:
            raise SpecShapeMismatch("A and B must have N entries")
        if self.variant == "lemma6":
            if len(self.delta) != self.N:
                raise SpecShapeMismatch("delta must have N entries")
            if len(self.gamma) != self.K + 1:
                raise SpecShapeMismatch("gamma must have K+1 entries")


class SummationBounds(NamedTuple):
    sigma: float
    sigma1: float
    sigma2: float
    hypotheses_ok: bool


def ratio_sequence(spec: BoundSpec) -> list[float]:
    """``n_0..n_N`` from ``n_0 = 1`` and the variant's ratio recurrence.

    A vanishing ratio factor zeroes every later term.
    """
    out = [1.0]
    cur = 1.0
    for i in range(1, spec.N + 1):
        a, b = spec.A[i - 1], spec.B[i - 1]
        damp = 1.0 - (i - 1) * b
        if a == 0 or (spec.variant == "lemma7" and damp == 0):
            cur = 0.0
        else:
            cur *= a / i * damp
            if spec.variant == "lemma6":
                cur *= 1.0 + spec.delta[i - 1]
        out.append(cur)
    return out


def _lemma6_hypotheses(spec: BoundSpec) -> bool:
    N, K, c = spec.N, spec.K, spec.c
    A1, A2 = min(spec.A), max(spec.A)
    if N < 2 or not 0 <= K <= N or c <= 2 * math.e:
        return False
    if A1 < 0 or not A2 * c < N - K + 1:
        return False
    if max(abs(b) for b in spec.B) * N >= 1:
        return False
    if any(g < 0 for g in spec.gamma):
        return False
    acc = 0.0
    for i in range(1, N + 1):
        acc += abs(spec.delta[i - 1])
        cap = sum(g * falling_factorial(i, j) for j, g in enumerate(spec.gamma))
        if not acc <= cap < 0.2:
            return False
    return True


def _lemma7_hypotheses(spec: BoundSpec) -> bool:
    N, ch = spec.N, spec.c_hat
    if N < 2 or not 0 < ch < 1 / 3:
        return False
    for i, (a, b) in enumerate(zip(spec.A, spec.B), start=1):
        if a < 0 or 1 - (i - 1) * b < 0:
            return False
    C = [a * b for a, b in zip(spec.A, spec.B)]
    return max(spec.A) / N <= ch and max(abs(min(C)), abs(max(C))) <= ch


def summation_bounds(spec: BoundSpec) -> SummationBounds:
    """Evaluate ``sum n_i`` and its closed-form lower/upper brackets."""
    spec.check_shape()
    sigma = math.fsum(ratio_sequence(spec))
    A1, A2 = min(spec.A), max(spec.A)
    if spec.variant == "lemma6":
        B1, B2 = min(spec.B), max(spec.B)
        tail = 0.25 * (2 * math.e / spec.c) ** spec.N
        g1 = sum(g * (3 * A1) ** j for j, g in enumerate(spec.gamma))
        g2 = sum(g * (3 * A2) ** j for j, g in enumerate(spec.gamma))
        sigma1 = math.exp(A1 - 0.5 * A1 * A1 * B2 - 4 * g1) - tail
        sigma2 = math.exp(A2 - 0.5 * A2 * A2 * B1 + 0.5 * A2 ** 3 * B1 * B1 + 4 * g2) + tail
        ok = _lemma6_hypotheses(spec)
    else:
        C = [a * b for a, b in zip(spec.A, spec.B)]
        C1, C2 = min(C), max(C)
        tail = (2 * math.e * spec.c_hat) ** spec.N
        sigma1 = math.exp(A1 - 0.5 * A1 * C2) - tail
        sigma2 = math.exp(A2 - 0.5 * A2 * C1 + 0.5 * A2 * C1 * C1) + tail
        ok = _lemma7_hypotheses(spec)
    return SummationBounds(sigma, sigma1, sigma2, ok)
