"""Exception types shared across the package.

Everything raised on purpose derives from VfactorError so callers can catch
the whole family in one clause. Errors that carry diagnostic payloads store
them as attributes rather than only in the message.
"""

from __future__ import annotations


class VfactorError(Exception):
    """Base class for all deliberate errors in this package."""


class ZeroDenominator(VfactorError):
    """A rational was given (or computed) with denominator zero."""


class DegenerateNodes(VfactorError):
    """Vandermonde nodes are not pairwise distinct."""

    def __init__(self, i: int, j: int, value) -> None:
        super().__init__(f"nodes {i} and {j} coincide (value {value})")
        self.i = i
        self.j = j
        self.value = value


class ArityError(VfactorError):
    """A point, exponent vector, or parameter tuple has the wrong length."""


class ZeroPivot(VfactorError):
    """A stage's pivot derivative vanished identically."""


class IndependenceViolation(VfactorError):
    """A sign assignment led to a singular linear system.

    Carries the offending sign string so callers can report which
    assignment failed.
    """

    def __init__(self, signs: tuple[int, ...]) -> None:
        super().__init__(f"dependent forms at sign string {signs}")
        self.signs = signs


class NondegeneracyExhausted(VfactorError):
    """Random completion failed verification too many times in a row."""

    def __init__(self, attempts: int, last_reason: str) -> None:
        super().__init__(
            f"no nondegenerate completion after {attempts} attempts "
            f"(last failure: {last_reason})"
        )
        self.attempts = attempts
        self.last_reason = last_reason


class BudgetExceeded(VfactorError):
    """An enumeration would exceed its configured work budget."""

    def __init__(self, requested: int, budget: int) -> None:
        super().__init__(f"enumeration size {requested} exceeds budget {budget}")
        self.requested = requested
        self.budget = budget


class FamilyGap(VfactorError):
    """The map family offers no member to probe."""


class EmptyModel(VfactorError):
    """Model reduction found no point with a nonzero coordinate pattern."""


class CorrespondenceViolation(VfactorError):
    """The SAT correspondence check found a mismatch.

    Either a satisfying assignment without a variety point or a point
    without a satisfying assignment.
    """

    def __init__(self, direction: str, witness) -> None:
        super().__init__(f"correspondence broken ({direction}): {witness}")
        self.direction = direction
        self.witness = witness


class NoInteriorOptimum(VfactorError):
    """The fixed-point equation for the optimal log-size has no interior root."""
