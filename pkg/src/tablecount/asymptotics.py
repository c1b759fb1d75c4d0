"""Closed-form asymptotic estimates of table counts, evaluated in log space.

Every estimator returns a :class:`LogEstimate`.  Estimators never refuse
inputs outside the sparse regime; they evaluate the formula and record
which applicability heuristics hold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import AlphabetMissingZeroOne, InconsistentSemiregular, ZeroTotal
from .exact import EntryAlphabet
from .margins import MarginPair, central_moments, power_sums

FORMULAS = ("main", "zero_one", "semiregular", "moment_form", "near_regular",
            "restricted", "canfield_mckay")

_EXACT_LOG_LIMIT = 256
_log_fact_cache: list[float] = [0.0, 0.0]


def log_factorial(x: int) -> float:
    """Natural log of ``x!``.

    Small arguments go through the exact integer factorial, larger ones
    through ``math.lgamma`` (relative accuracy ~1e-16).
    """
    if x < 0:
        raise ValueError("log_factorial needs x >= 0")
    if x < _EXACT_LOG_LIMIT:
        if x >= len(_log_fact_cache):
            # append-only; concurrent writers compute identical values
            for k in range(len(_log_fact_cache), _EXACT_LOG_LIMIT):
                _log_fact_cache.append(math.log(math.factorial(k)))
        return _log_fact_cache[x]
    return math.lgamma(x + 1.0)


def log_binomial(a: int, b: int) -> float:
    return log_factorial(a) - log_factorial(b) - log_factorial(a - b)


def error_order(margins: MarginPair) -> float:
    """The relative-error order ``s^3 t^3 / S^2`` of the sparse formulas."""
    return (margins.s_max * margins.t_max) ** 3 / margins.total ** 2


@dataclass(frozen=True)
class LogEstimate:
    log_prefactor: float
    log_correction: float
    error_order: float
    formula_id: str
    applicability: dict = field(default_factory=dict)

    @property
    def log_value(self) -> float:
        return self.log_prefactor + self.log_correction

    @property
    def log10_value(self) -> float:
        return self.log_value / math.log(10.0)

    def decimal(self, digits: int = 6) -> str:
        """Render ``exp(log_value)`` as ``"d.ddddde+XX"`` without overflow."""
        l10 = self.log10_value
        exp10 = math.floor(l10)
        mant = 10.0 ** (l10 - exp10)
        if round(mant, digits - 1) >= 10.0:
            mant, exp10 = mant / 10.0, exp10 + 1
        return f"{mant:.{digits - 1}f}e{exp10:+d}"

    def to_dict(self) -> dict:
        return {
            "formula": self.formula_id,
            "log_value": self.log_value,
            "log10_value": self.log10_value,
            "decimal": self.decimal(),
            "error_order": self.error_order,
            "applicability": dict(self.applicability),
        }


def _applicability(margins: MarginPair) -> dict:
    mom = central_moments(margins)
    S = margins.total
    return {
        "sparse": mom.sparsity_ratio <= 1.0,
        "near_regular": float((1 + mom.mu2) * (1 + mom.nu2)) <= S ** (1.0 / 3.0),
        "semiregular": margins.is_semiregular(),
    }


def _log_multinomial_prefactor(margins: MarginPair) -> float:
    """ln( S! / (prod s_i! prod t_j!) )"""
    return (log_factorial(margins.total)
            - sum(log_factorial(x) for x in margins.rows)
            - sum(log_factorial(x) for x in margins.cols))


def _power_sum_exponent(margins: MarginPair, chi2: int, chi3: int) -> float:
    S = margins.total
    S2, T2 = power_sums(margins, 2)
    S3, T3 = power_sums(margins, 3)
    p = S2 * T2
    c2 = Fraction(2 * chi2 - 1, 2)
    c3 = chi3 - chi2 + Fraction(1, 3)
    expo = (c2 * Fraction(p, S**2) + c2 * Fraction(p, S**3) + c3 * Fraction(S3 * T3, S**3)
            - Fraction(p * (S2 + T2), 4 * S**4)
            - Fraction(S2 * S2 * T3 + S3 * T2 * T2, 2 * S**4)
            + Fraction(p * p, 2 * S**5))
    return float(expo)


def _require_total(margins: MarginPair, name: str):
    if margins.total < 1:
        raise ZeroTotal(name)


def estimate_restricted(margins: MarginPair, alphabet: EntryAlphabet) -> LogEstimate:
    """Estimate of the number of tables whose entries lie in ``alphabet``.

    Only membership of 2 and 3 in the alphabet enters the formula.
    """
    if not (alphabet.allows(0) and alphabet.allows(1)):
        raise AlphabetMissingZeroOne(f"alphabet {alphabet} must contain 0 and 1")
    return _restricted(margins, alphabet.chi2, alphabet.chi3, "restricted")


def _restricted(margins: MarginPair, chi2: int, chi3: int, formula_id: str) -> LogEstimate:
    _require_total(margins, formula_id)
    return LogEstimate(
        log_prefactor=_log_multinomial_prefactor(margins),
        log_correction=_power_sum_exponent(margins, chi2, chi3),
        error_order=error_order(margins),
        formula_id=formula_id,
        applicability=_applicability(margins),
    )


def estimate_01(margins: MarginPair) -> LogEstimate:
    """Estimate of the number of 0-1 tables."""
    return _restricted(margins, 0, 0, "zero_one")


def estimate_main(margins: MarginPair) -> LogEstimate:
    """Estimate of the number of nonnegative integer tables."""
    return _restricted(margins, 1, 1, "main")


def main_over_zero_one(margins: MarginPair) -> Fraction:
    """Exact log-ratio ``S2 T2 / S^2 + S2 T2 / S^3`` between the integer and
    0-1 estimates."""
    S = margins.total
    S2, T2 = power_sums(margins, 2)
    return Fraction(S2 * T2, S**2) + Fraction(S2 * T2, S**3)


@dataclass(frozen=True)
class SemiregularSpec:
    m: int
    s: int
    n: int
    t: int

    def __post_init__(self):
        if min(self.m, self.n) < 1 or min(self.s, self.t) < 0:
            raise ValueError("semiregular spec needs m, n >= 1 and s, t >= 0")
        if self.m * self.s != self.n * self.t:
            raise InconsistentSemiregular(self.m, self.s, self.n, self.t)

    @property
    def total(self) -> int:
        return self.m * self.s

    @property
    def lam(self) -> Fraction:
        return Fraction(self.s, self.n)

    def margins(self) -> MarginPair:
        return MarginPair((self.s,) * self.m, (self.t,) * self.n, self.total)

    def hypothesis_value(self) -> float:
        """Left side of the density hypothesis of the dense semiregular formula."""
        lam = float(self.lam)
        m, n = self.m, self.n
        return (1 + 2 * lam) ** 2 / (4 * lam * (1 + lam)) * (1 + 5 * m / (6 * n) + 5 * n / (6 * m))

    def hypothesis_holds(self, a: float = 0.49) -> bool:
        return self.lam > 0 and self.hypothesis_value() <= a * math.log(self.n)


def estimate_semiregular(spec: SemiregularSpec) -> LogEstimate:
    m, s, n, t = spec.m, spec.s, spec.n, spec.t
    S = spec.total
    if S < 1:
        raise ZeroTotal("estimate_semiregular")
    u = (s - 1) * (t - 1)
    corr = Fraction(u, 2) - Fraction(u * (2 * s * t - s - t - 10), 12 * S)
    mp = spec.margins()
    return LogEstimate(
        log_prefactor=log_factorial(S) - m * log_factorial(s) - n * log_factorial(t),
        log_correction=float(corr),
        error_order=error_order(mp),
        formula_id="semiregular",
        applicability=_applicability(mp),
    )


def _log_binomial_products(margins: MarginPair) -> tuple[float, float, float]:
    """(ln prod_i C(n+s_i-1, s_i), ln prod_j C(m+t_j-1, t_j), ln C(mn+S-1, S))"""
    m, n, S = margins.m, margins.n, margins.total
    rows = sum(log_binomial(n + x - 1, x) for x in margins.rows)
    cols = sum(log_binomial(m + x - 1, x) for x in margins.cols)
    return rows, cols, log_binomial(m * n + S - 1, S)


def estimate_moment_form(margins: MarginPair) -> LogEstimate:
    _require_total(margins, "estimate_moment_form")
    m, n, S = margins.m, margins.n, margins.total
    mom = central_moments(margins)
    mu2, mu3, nu2, nu3 = mom.mu2, mom.mu3, mom.nu2, mom.nu3
    expo = ((1 - mu2) * (1 - nu2) * (Fraction(1, 2) + (3 - mu2 * nu2) / (4 * S))
            - (1 - mu2) * (3 + mu2 - 2 * mu2 * nu2) / (4 * n)
            - (1 - nu2) * (3 + nu2 - 2 * mu2 * nu2) / (4 * m)
            + (1 - 3 * mu2**2 + 2 * mu3) * (1 - 3 * nu2**2 + 2 * nu3) / (12 * S))
    rows, cols, total = _log_binomial_products(margins)
    return LogEstimate(rows + cols - total, float(expo), error_order(margins),
                       "moment_form", _applicability(margins))


def estimate_near_regular(margins: MarginPair) -> LogEstimate:
    _require_total(margins, "estimate_near_regular")
    d = decompose_MP1P2E(margins)
    # same association order as Decomposition.total, so the two agree bitwise
    return LogEstimate(d.log_M + d.log_P1 + d.log_P2, d.log_E, error_order(margins),
                       "near_regular", _applicability(margins))


@dataclass(frozen=True)
class Decomposition:
    """``ln M + ln P1 + ln P2 + ln E`` where M counts all tables of total S,
    P1 and P2 are the probabilities of the row and column margins under the
    uniform distribution on those tables, and E corrects for their
    dependence."""

    log_M: float
    log_P1: float
    log_P2: float
    log_E: float

    @property
    def total(self) -> float:
        return self.log_M + self.log_P1 + self.log_P2 + self.log_E


def decompose_MP1P2E(margins: MarginPair) -> Decomposition:
    _require_total(margins, "decompose_MP1P2E")
    mom = central_moments(margins)
    rows, cols, total = _log_binomial_products(margins)
    return Decomposition(
        log_M=total,
        log_P1=rows - total,
        log_P2=cols - total,
        log_E=float(Fraction(1, 2) * (1 - mom.mu2) * (1 - mom.nu2)),
    )


def cm_estimate(spec: SemiregularSpec, delta: float = 0.0) -> LogEstimate:
    """Dense semiregular formula with its residual exponent supplied."""
    m, s, n, t = spec.m, spec.s, spec.n, spec.t
    S = spec.total
    if S < 1:
        raise ZeroTotal("cm_estimate")
    prefactor = (m * log_binomial(n + s - 1, s) + n * log_binomial(m + t - 1, t)
                 - log_binomial(m * n + S - 1, S))
    corr = ((m - 1) / 2 * math.log((m + 1) / m) + (n - 1) / 2 * math.log((n + 1) / n)
            - 0.5 + delta / (m + n))
    mp = spec.margins()
    app = _applicability(mp)
    app["cm_hypothesis"] = spec.hypothesis_holds()
    return LogEstimate(prefactor, corr, error_order(mp), "canfield_mckay", app)


def delta_from_count(spec: SemiregularSpec, log_count: float) -> tuple[float, float]:
    """Invert the dense semiregular formula for its residual exponent.

    Returns ``(delta, 5(s+t)/(6st))``; the second value is the sparse-range
    limit of delta.
    """
    base = cm_estimate(spec, 0.0)
    delta = (spec.m + spec.n) * ((log_count - base.log_prefactor) - base.log_correction)
    s, t = spec.s, spec.t
    limit = 5 * (s + t) / (6 * s * t) if s and t else math.inf
    return delta, limit


def estimate(formula: str, margins: MarginPair | None = None, *,
             spec: SemiregularSpec | None = None,
             alphabet: EntryAlphabet | None = None,
             delta: float = 0.0) -> LogEstimate:
    """Dispatch by short formula name (``main``, ``01``, ``moments`` ...)."""
    aliases = {"01": "zero_one", "moments": "moment_form", "nearreg": "near_regular",
               "cm": "canfield_mckay"}
    formula = aliases.get(formula, formula)
    if formula in ("semiregular", "canfield_mckay"):
        if spec is None:
            if margins is None or not margins.is_semiregular():
                raise ValueError(f"formula {formula} needs a SemiregularSpec or semiregular margins")
            spec = SemiregularSpec(margins.m, margins.rows[0], margins.n, margins.cols[0])
        return estimate_semiregular(spec) if formula == "semiregular" else cm_estimate(spec, delta)
    if margins is None:
        raise ValueError(f"formula {formula} needs margins")
    if formula == "main":
        return estimate_main(margins)
    if formula == "zero_one":
        return estimate_01(margins)
    if formula == "moment_form":
        return estimate_moment_form(margins)
    if formula == "near_regular":
        return estimate_near_regular(margins)
    if formula == "restricted":
        return estimate_restricted(margins, alphabet or EntryAlphabet.all_nonnegative())
    raise ValueError(f"unknown formula {formula!r}")
