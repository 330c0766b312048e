"""Shared exception types.

The CLI maps these onto exit codes: PreconditionError -> 2,
FactorBudgetError / PrecisionExhausted -> 3, IdentityFailure -> 4.
"""


class PreconditionError(ValueError):
    """An operation was called outside its stated premises."""


class FactorBudgetError(RuntimeError):
    """Factorization gave up within the configured work budget.

    Carries the budget, the offending composite cofactor, and the prime
    factors found so far, so callers can degrade gracefully (the sweep
    turns this into a per-record flag).
    """

    def __init__(self, budget: int, cofactor: int, partial=()):
        self.budget = budget
        self.cofactor = cofactor
        self.partial = tuple(partial)
        super().__init__(
            f"no factor of {cofactor} found within budget {budget}"
        )


class PrecisionExhausted(RuntimeError):
    """An interval comparison still straddled the threshold at the precision cap."""


class IdentityFailure(RuntimeError):
    """An exact identity that is a theorem failed to hold.

    Indicates an implementation bug (or a genuine counterexample, which
    would be far more interesting). Never caught internally.
    """
