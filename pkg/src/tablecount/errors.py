"""Exception hierarchy shared by all tablecount modules."""


class TableCountError(Exception):
    """Base class for every error raised by the library."""


class MarginError(TableCountError, ValueError):
    pass


class SumMismatch(MarginError):
    def __init__(self, row_total, col_total):
        self.row_total = row_total
        self.col_total = col_total
        super().__init__(f"row sum {row_total} != column sum {col_total}")


class NegativeEntry(MarginError):
    def __init__(self, side, index):
        self.side = side
        self.index = index
        super().__init__(f"negative entry in {side} at index {index}")


class EmptyMargin(MarginError):
    def __init__(self, side):
        self.side = side
        super().__init__(f"{side} margin is empty")


class ZeroTotal(MarginError):
    def __init__(self, what="operation"):
        super().__init__(f"{what} requires a positive total S")


class UnsupportedOrder(TableCountError, ValueError):
    def __init__(self, k):
        self.k = k
        super().__init__(f"power sums are only defined here for k in 1..4, got {k}")


class OutOfRange(TableCountError, ValueError):
    pass


class GuardExceeded(TableCountError):
    """A size guard refused a computation that would be too expensive.

    Guards are lifted by passing ``override=True`` or by setting the
    environment variable ``TABLECOUNT_GUARD_OVERRIDE=1``.
    """


class SizeGuardExceeded(GuardExceeded):
    pass


class MemoryGuardExceeded(GuardExceeded):
    def __init__(self, states, limit):
        self.states = states
        self.limit = limit
        super().__init__(f"DP memo grew to {states} states (limit {limit})")


class EmptyClass(TableCountError, ValueError):
    pass


class InconsistentSemiregular(TableCountError, ValueError):
    def __init__(self, m, s, n, t):
        super().__init__(f"semiregular spec needs m*s == n*t, got {m}*{s} != {n}*{t}")


class AlphabetMissingZeroOne(TableCountError, ValueError):
    pass


class UndefinedMoment(TableCountError, ValueError):
    def __init__(self, r, total):
        self.r = r
        super().__init__(f"moment of order {r} undefined for S={total}")


class NotApplicable(TableCountError, ValueError):
    def __init__(self, reason):
        self.reason = reason
        super().__init__(reason)


class HypothesisViolated(TableCountError, ValueError):
    def __init__(self, message, lhs=None, rhs=None):
        self.lhs = lhs
        self.rhs = rhs
        super().__init__(message)


class SpecShapeMismatch(TableCountError, ValueError):
    pass
