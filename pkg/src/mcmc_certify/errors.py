"""Exception hierarchy for chain validation and resource limits.

Everything raised on purpose by this package derives from :class:`ChainError`,
so callers can catch one type at API boundaries.  Plain ``ValueError`` is
reserved for malformed *parameters* (wrong shapes, out-of-range scalars);
the subclasses below signal that the mathematical object itself is unusable.
"""

__all__ = [
    "ChainError",
    "NotStochastic",
    "NotReversible",
    "NotErgodic",
    "ZeroMass",
    "SpectralFailure",
    "BudgetOverflow",
    "TooLarge",
]


class ChainError(Exception):
    """Base class for domain errors raised by this package."""


class NotStochastic(ChainError):
    """A transition matrix has a negative entry or a row that does not sum to 1."""


class NotReversible(ChainError):
    """Detailed balance fails; the message names the worst offending pair."""


class NotErgodic(ChainError):
    """The chain is reducible, periodic, or numerically indistinguishable from it."""


class ZeroMass(ChainError):
    """A distribution entry required to be positive is zero (or denormal)."""


class SpectralFailure(ChainError):
    """The symmetric eigensolver failed or returned an inconsistent spectrum."""


class BudgetOverflow(ChainError):
    """An exact computation would exceed the configured work cap."""


class TooLarge(ChainError):
    """Brute-force path enumeration would exceed the hard size cap."""
