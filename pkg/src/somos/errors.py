"""Exception hierarchy for the somos package.

Every failure mode that callers are expected to handle gets its own type;
generic misuse (wrong argument counts, malformed input strings) raises the
usual ValueError/TypeError instead.
"""


class SomosError(Exception):
    """Base class for all package-specific errors."""


class DivisionByZeroTerm(SomosError):
    """A recurrence extension step would divide by a zero sequence term."""

    def __init__(self, index, message=None):
        self.index = index
        super().__init__(message or f"pivot term at index {index} is zero")


class InvalidSeed(SomosError):
    """Seed data violates a structural requirement (length, zero a1, ...)."""


class IndexOutOfWindow(SomosError):
    """A sequence index was requested outside the stored window."""

    def __init__(self, index, lo, hi):
        self.index = index
        super().__init__(f"index {index} outside window [{lo}, {hi}]")


class NonInteger(SomosError):
    """An integrality-dependent check was applied to a non-integer value."""


class ZeroGaugeFactor(SomosError):
    """Gauge transformations require all scale factors to be nonzero."""


class ZeroDenominator(SomosError):
    """A map or invariant evaluation hit a zero denominator."""


class MapSingular(SomosError):
    """A map produced a zero iterate, blocking further iteration."""


class ZeroSeed(SomosError):
    """Solver seeds must all be nonzero."""


class DegenerateCurve(SomosError):
    """The curve discriminant vanishes (or a degenerate family member)."""


class SingularMu(SomosError):
    """The quartic-root scale factor vanishes: beta + alpha*J = 0."""


class ConsistencyFailure(SomosError):
    """No sign assignment satisfies the solver's consistency conditions."""


class PoleAtLatticePoint(SomosError):
    """An elliptic function was evaluated at (or too close to) a pole."""


class PrecisionLoss(SomosError):
    """A series or iteration could not reach the requested accuracy."""


class ZeroScale(SomosError):
    """Lattice rescaling requires a nonzero scale factor."""


class NotApplicable(SomosError):
    """A formula's stated validity conditions are not met."""
