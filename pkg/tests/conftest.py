"""Shared oracles and helpers.

The oracles here deliberately avoid the package's own enumeration code so
that they can be used to check it.
"""

import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import strategies as st

from tablecount.margins import validate_margins
from tablecount.switching import BoundSpec

ACCEPTANCE_LINES = []


def weak_compositions(total, parts):
    """All tuples of ``parts`` nonnegative ints summing to ``total`` (stars and bars)."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for bars in itertools.combinations(range(total + parts - 1), parts - 1):
        prev, out = -1, []
        for b in bars + (total + parts - 1,):
            out.append(b - prev - 1)
            prev = b
        yield tuple(out)


def positive_compositions(total):
    """All compositions of ``total`` into positive parts, any length."""
    if total == 0:
        yield ()
        return
    for cuts in range(total):
        for pos in itertools.combinations(range(1, total), cuts):
            edges = (0,) + pos + (total,)
            yield tuple(b - a for a, b in zip(edges, edges[1:]))


def grid_count(rows, cols, allowed=None):
    """Count grids by trying every assignment of values to every cell."""
    m, n = len(rows), len(cols)
    top = max(list(rows) + list(cols) + [0])
    values = [v for v in range(top + 1) if allowed is None or v in allowed]
    hits = 0
    for cells in itertools.product(values, repeat=m * n):
        grid = [cells[i * n:(i + 1) * n] for i in range(m)]
        if all(sum(r) == s for r, s in zip(grid, rows)) and \
                all(sum(grid[i][j] for i in range(m)) == cols[j] for j in range(n)):
            hits += 1
    return hits


def scaled_moment(vec, other_len, k):
    """The scaled central moment of ``vec`` straight from its definition."""
    m, S = len(vec), sum(vec)
    mn = m * other_len
    return Fraction(mn, S * (mn + S)) * sum((Fraction(x) - Fraction(S, m)) ** k for x in vec)


def exhaustive_moment_averages(m, n, S):
    acc = [Fraction(0)] * 4
    count = 0
    for cells in weak_compositions(S, m * n):
        rows = [sum(cells[i * n:(i + 1) * n]) for i in range(m)]
        cols = [sum(cells[i * n + j] for i in range(m)) for j in range(n)]
        vals = (scaled_moment(rows, n, 2), scaled_moment(cols, m, 2),
                scaled_moment(rows, n, 3), scaled_moment(cols, m, 3))
        acc = [a + v for a, v in zip(acc, vals)]
        count += 1
    return tuple(a / count for a in acc)


@st.composite
def margin_pairs(draw, max_len=8, max_entry=6, min_total=1):
    rows = draw(st.lists(st.integers(0, max_entry), min_size=1, max_size=max_len))
    total = sum(rows)
    n = draw(st.integers(1, max_len))
    cuts = sorted(draw(st.lists(st.integers(0, total), min_size=n - 1, max_size=n - 1)))
    edges = [0] + cuts + [total]
    cols = [b - a for a, b in zip(edges, edges[1:])]
    if total < min_total:
        rows[0] += min_total - total
        cols[0] += min_total - total
    return validate_margins(rows, cols)


def record_acceptance(number, name, passed, detail=""):
    line = f"criterion {number:>2} {'PASS' if passed else 'FAIL'}  {name}"
    if detail:
        line += f"  [{detail}]"
    ACCEPTANCE_LINES.append((number, line))
    print(line)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(line)


@pytest.fixture
def no_guard_env(monkeypatch):
    monkeypatch.delenv("TABLECOUNT_GUARD_OVERRIDE", raising=False)


def brute_force_sites(q, D, reverse=False):
    """Every ordered tuple of D+1 cells with distinct rows and columns that
    passes the switching conditions, found by exhaustive search."""
    m, n = len(q), len(q[0])
    out = []
    for rows in itertools.permutations(range(m), D + 1):
        for cols in itertools.permutations(range(n), D + 1):
            (i0, j0), rest = (rows[0], cols[0]), list(zip(rows[1:], cols[1:]))
            if reverse:
                ok = q[i0][j0] == 0 and all(
                    q[i][j] != D and q[i][j0] == 1 and q[i0][j] == 1 for i, j in rest)
            else:
                ok = q[i0][j0] == D and all(
                    q[i][j] not in (0, D + 1) and q[i][j0] == 0 and q[i0][j] == 0 for i, j in rest)
            if ok:
                out.append(tuple(zip(rows, cols)))
    return out


def random_switch_matrix(rng, D, size=(4, 7)):
    """A sparse random table with at least one entry equal to D."""
    m, n = rng.integers(size[0], size[1] + 1, size=2)
    q = rng.choice([0, 1, 2, 3, 4], size=(m, n), p=[0.55, 0.3, 0.08, 0.05, 0.02])
    q[rng.integers(m), rng.integers(n)] = D
    return q


def random_lemma6_spec(rng):
    N = int(rng.integers(2, 31))
    K = int(rng.integers(0, min(3, N) + 1))
    c = float(rng.uniform(2 * math.e + 0.01, 20))
    A = list(rng.uniform(0, 1, N) * (N - K + 1) / c * 0.999)
    B = list(rng.uniform(-1, 1, N) * 0.999 / N)
    gamma = [float(rng.uniform(0, 1)) * 0.19 / (K + 1) / max(1, math.perm(N, j)) for j in range(K + 1)]
    delta, acc = [], 0.0
    for i in range(1, N + 1):
        cap = sum(g * math.perm(i, j) for j, g in enumerate(gamma))
        d = float(rng.uniform(0, 1)) * max(cap - acc, 0.0) * 0.999
        acc += d
        delta.append(d if rng.uniform() < 0.5 else -d)
    return BoundSpec(N=N, A=A, B=B, variant="lemma6", K=K, delta=delta, gamma=gamma, c=c)


def random_lemma7_spec(rng):
    N = int(rng.integers(2, 41))
    c_hat = float(rng.uniform(0.01, 0.333))
    A = list(rng.uniform(0.001, 1, N) * c_hat * N)
    B = [float(rng.uniform(-1, 1)) * c_hat / a for a in A]
    return BoundSpec(N=N, A=A, B=B, variant="lemma7", c_hat=c_hat)


def random_bound_matrix(rng, D):
    """A very sparse table (a partial permutation plus a few extra units, one
    cell raised to D) for which the switching lower bound is often nonzero."""
    m, n = rng.integers(10, 21, size=2)
    q = np.zeros((m, n), dtype=np.int64)
    r = min(m, n)
    q[rng.permutation(m)[:r], rng.permutation(n)[:r]] = 1
    extra = int(rng.integers(0, 4))
    np.add.at(q, (rng.integers(0, m, extra), rng.integers(0, n, extra)), 1)
    nz = np.argwhere(q > 0)
    i, j = nz[rng.integers(len(nz))]
    q[i, j] = D
    return q
