"""The twelve acceptance criteria, each at its stated tolerance.

Every test records a PASS/FAIL line; the lines are repeated in an
"acceptance criteria" section at the end of the pytest run.
"""

import itertools
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from tablecount.asymptotics import (SemiregularSpec, delta_from_count, estimate_01,
                                    estimate_main, estimate_restricted)
from tablecount.exact import (ALL, EntryAlphabet, TableMatrix, count_bruteforce, count_exact,
                              expected_moments)
from tablecount.margins import power_sums, validate_margins
from tablecount.pairing import (class_probabilities, doublet_moments,
                                exhaustive_doublet_moments, no_parallel_fraction,
                                verify_weight_identity)
from tablecount.switching import (BoundSpec, apply_reverse_switching, apply_switching,
                                  count_reverse_switchings, count_switchings,
                                  entry_histogram, enumerate_switchings, summation_bounds,
                                  switching_bounds, useful_inequality_check)

from conftest import (exhaustive_moment_averages, positive_compositions, random_lemma6_spec,
                      random_lemma7_spec, random_bound_matrix, random_switch_matrix,
                      record_acceptance)

ALPHABETS = {"all": ALL, "{0,1}": EntryAlphabet.zero_one(),
             "{0,1,2,3}": EntryAlphabet.zero_to_three(), "{0,1,3}": EntryAlphabet.finite([0, 1, 3])}


def margin_pairs_upto(max_total):
    """Every pair of positive compositions with equal total, plus the empty table."""
    yield validate_margins([0], [0])
    for S in range(1, max_total + 1):
        comps = list(positive_compositions(S))
        for rows in comps:
            for cols in comps:
                yield validate_margins(rows, cols)


def test_criterion_01_oracle_equivalence():
    start = time.perf_counter()
    vectors = [v for m in (1, 2, 3) for v in itertools.product(range(4), repeat=m)]
    checked, bad = 0, []
    for rows in vectors:
        for cols in vectors:
            if sum(rows) != sum(cols) or sum(rows) > 6:
                continue
            margins = validate_margins(rows, cols)
            for name, alpha in ALPHABETS.items():
                if count_exact(margins, alpha) != count_bruteforce(margins, alpha):
                    bad.append((rows, cols, name))
                checked += 1
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 60
    record_acceptance(1, "oracle equivalence", ok, f"{checked} (margins, alphabet) cases, {elapsed:.1f}s")
    assert not bad, bad[:5]
    assert elapsed < 60


def test_criterion_02_weight_identity():
    start = time.perf_counter()
    bad, checked = [], 0
    for margins in margin_pairs_upto(5):
        _, rhs_all = verify_weight_identity(margins, lambda a: True)
        _, rhs_01 = verify_weight_identity(margins, lambda a: not a)
        if rhs_all != count_exact(margins, ALL) or rhs_01 != count_exact(margins, EntryAlphabet.zero_one()):
            bad.append(margins)
        checked += 1
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 120
    record_acceptance(2, "weight identity", ok, f"{checked} margin pairs, {elapsed:.1f}s")
    assert not bad, bad[:5]
    assert elapsed < 120


def test_criterion_03_doublet_b1():
    bad, checked = [], 0
    for margins in margin_pairs_upto(6):
        if margins.total < 2:
            continue
        if doublet_moments(margins).get(1) != exhaustive_doublet_moments(margins, rmax=1)[1]:
            bad.append(margins)
        checked += 1
    record_acceptance(3, "doublet moment b1", not bad, f"{checked} margin pairs, exact rationals")
    assert not bad, bad[:5]


def test_criterion_04_main_over_01_identity():
    rng = np.random.default_rng(4)
    worst = 0.0
    for _ in range(1000):
        m, n = rng.integers(1, 41, size=2)
        rows = rng.integers(0, 9, size=m)
        S = int(rows.sum())
        if S == 0:
            rows[0], S = 1, 1
        cols = np.bincount(rng.integers(0, n, size=S), minlength=n)
        margins = validate_margins(rows.tolist(), cols.tolist())
        S2, T2 = power_sums(margins, 2)
        want = Fraction(S2 * T2, S**2) + Fraction(S2 * T2, S**3)
        got = estimate_main(margins).log_value - estimate_01(margins).log_value
        err = abs(got - float(want)) / float(want) if want else abs(got)
        worst = max(worst, err)
    ok = worst <= 1e-12
    record_acceptance(4, "main minus 0-1 identity", ok, f"worst relative error {worst:.2e}")
    assert ok


def test_criterion_05_convergence():
    start = time.perf_counter()
    errs, ratios = [], []
    for n in (4, 8, 16):
        margins = validate_margins([2] * n, [2] * n)
        err = abs(math.log(count_exact(margins)) - estimate_main(margins).log_value)
        errs.append(err)
        ratios.append(err / (64 / margins.total**2))
    elapsed = time.perf_counter() - start
    decreasing = errs[0] > errs[1] > errs[2]
    bounded = max(ratios) / min(ratios) <= 10
    ok = decreasing and bounded and elapsed < 300
    record_acceptance(5, "convergence of the main formula", ok,
                      "errors " + ", ".join(f"{e:.3g}" for e in errs)
                      + "; ratios " + ", ".join(f"{r:.3g}" for r in ratios))
    assert decreasing and bounded and elapsed < 300


def test_criterion_06_delta():
    deltas = {}
    for size in (8, 12, 16):
        spec = SemiregularSpec(size, 2, size, 2)
        deltas[size], limit = delta_from_count(spec, math.log(count_exact(spec.margins())))
    in_range = all(0 < d < 2 for d in deltas.values())
    closer = abs(deltas[16] - 5 / 6) < abs(deltas[8] - 5 / 6)
    ok = in_range and closer and limit == pytest.approx(5 / 6)
    record_acceptance(6, "Delta in (0,2), moving toward 5/6", ok,
                      ", ".join(f"Delta({k})={v:.4f}" for k, v in deltas.items()))
    assert ok


def rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


def test_criterion_07_restricted():
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(300):
        m, n = rng.integers(1, 20, size=2)
        rows = rng.integers(1, 7, size=m)
        cols = np.bincount(rng.integers(0, n, size=int(rows.sum())), minlength=n)
        margins = validate_margins(rows.tolist(), cols.tolist())
        worst = max(worst,
                    rel(estimate_restricted(margins, ALPHABETS["{0,1,2,3}"]).log_value,
                        estimate_main(margins).log_value),
                    rel(estimate_restricted(margins, ALPHABETS["{0,1}"]).log_value,
                        estimate_01(margins).log_value))
    margins = validate_margins([2] * 8, [2] * 8)
    exact = math.log(count_exact(margins, ALPHABETS["{0,1,3}"]))
    right = abs(estimate_restricted(margins, ALPHABETS["{0,1,3}"]).log_value - exact)
    wrong = abs(estimate_restricted(margins, ALPHABETS["{0,1,2,3}"]).log_value - exact)
    ok = worst <= 1e-12 and right <= wrong
    record_acceptance(7, "restricted-alphabet consistency", ok,
                      f"reduction error {worst:.1e}; J={{0,1,3}} log error {right:.4f} vs {wrong:.4f}")
    assert ok


def test_criterion_08_expected_moments():
    start = time.perf_counter()
    cases = [(2, 2, 3), (2, 3, 4), (3, 2, 4)]
    bad = [c for c in cases if expected_moments(*c) != exhaustive_moment_averages(*c)]
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 30
    record_acceptance(8, "expected-moment identities", ok, f"{len(cases)} cases, {elapsed:.2f}s")
    assert ok, bad


def test_criterion_09_switching():
    rng = np.random.default_rng(9)
    applied, bad = 0, []
    while applied < 10_000:
        D = int(rng.integers(2, 4))
        Q = TableMatrix.from_entries(random_switch_matrix(rng, D))
        restricted = bool(rng.integers(0, 2))
        sites = list(itertools.islice(enumerate_switchings(Q, D, restricted), 200))
        if not sites:
            continue
        before = entry_histogram(Q)
        for idx in rng.choice(len(sites), size=min(5, len(sites)), replace=False):
            site = sites[idx]
            R = apply_switching(Q, site)
            after = entry_histogram(R)
            drop = before.get(D, 0) - after.get(D, 0)
            above = lambda h: sum(c for v, c in h.items() if v > D)
            good = (R.margins == Q.margins and 1 <= drop <= D + 1 and above(before) == above(after)
                    and apply_reverse_switching(R, site) == Q)
            if restricted:
                delta = {v: after.get(v, 0) - before.get(v, 0) for v in set(before) | set(after)}
                good &= {v: d for v, d in delta.items() if d} == {D: -1, 1: D, 0: 1 - D}
            if not good:
                bad.append((Q.entries, site))
            applied += 1
    bound_bad, nonzero = [], 0
    for _ in range(100):
        D = int(rng.integers(2, 4))
        Q = TableMatrix.from_entries(random_bound_matrix(rng, D))
        lower, upper = switching_bounds(Q, D)
        nonzero += lower > 0
        if count_switchings(Q, D) < lower or count_reverse_switchings(Q, D) > upper:
            bound_bad.append(Q.entries)
    ok = not bad and not bound_bad
    record_acceptance(9, "switching invariants", ok,
                      f"{applied} applications; 100 bound checks ({nonzero} with nonzero lower bound)")
    assert ok


def test_criterion_10_summation_bounds():
    rng = np.random.default_rng(10)
    counts, bad = {}, []
    for maker in (random_lemma6_spec, random_lemma7_spec):
        ok_count = 0
        while ok_count < 500:
            spec = maker(rng)
            res = summation_bounds(spec)
            if not res.hypotheses_ok:
                continue
            ok_count += 1
            if not res.sigma1 <= res.sigma <= res.sigma2:
                bad.append(spec)
        counts[maker.__name__] = ok_count
    A, N, ch = 3.0, 60, 0.1
    series = summation_bounds(BoundSpec(N=N, A=[A] * N, B=[0.0] * N, variant="lemma7", c_hat=ch))
    exp_ok = (series.hypotheses_ok and series.sigma1 <= series.sigma <= series.sigma2
              and series.sigma1 <= math.exp(A) <= series.sigma2
              and abs(series.sigma - math.exp(A)) <= (2 * math.e * ch) ** N + 1e-12 * math.exp(A))
    ok = not bad and exp_ok
    record_acceptance(10, "summation bracketing", ok,
                      f"500 lemma6 + 500 lemma7 specs; series sum {series.sigma:.12f} vs e^3 {math.exp(A):.12f}")
    assert ok


def test_criterion_11_monte_carlo_p0():
    start = time.perf_counter()
    margins = validate_margins([2] * 20, [2] * 20)
    frac, se = no_parallel_fraction(margins, samples=100_000, seed=0)
    p0 = float(class_probabilities(margins).p[0])
    elapsed = time.perf_counter() - start
    z = abs(frac - p0) / se
    ok = z <= 4 and elapsed < 60
    record_acceptance(11, "Monte Carlo p0", ok,
                      f"empirical {frac:.5f} (se {se:.5f}) vs formula {p0:.5f}: {z:.1f} se apart; "
                      f"dropped term order 64/S^2 = {64 / 40**2:.3f}; {elapsed:.1f}s")
    assert ok


def test_criterion_12_lemma5_grid():
    failures, checked = [], 0
    for n in range(1, 21):
        for tenths in range(1, 21):
            q = tenths / 10
            for k in range(1, (10 * n) // tenths + 1):
                lhs, rhs, holds = useful_inequality_check(n, q, k)
                checked += 1
                if not holds:
                    failures.append((n, q, k, lhs, rhs))
    record_acceptance(12, "falling-product inequality grid", not failures, f"{checked} (n, q, k) points")
    assert not failures, failures[:5]
