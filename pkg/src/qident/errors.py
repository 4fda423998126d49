"""Error taxonomy shared by all qident modules."""


class QidentError(Exception):
    """Base class for all qident errors."""


class DivisionByZero(QidentError):
    """A substitution or evaluation made a denominator vanish."""


class NotDivisible(QidentError):
    """Exact polynomial division left a nonzero remainder."""


class NotInDomain(QidentError):
    """An operator was applied outside its polynomial domain."""


class KMaxTooSmall(QidentError):
    """An operator series did not terminate within the allowed k range."""


class NotFormallySummable(QidentError):
    """A hypergeometric sum feeds degree 0 infinitely often; needs analytic mode."""


class TailNotBounded(QidentError):
    """The empirical term-ratio never certified a geometric tail within K_max."""


class DomainViolation(QidentError):
    """A sample point breaks a declared |expr| < 1 constraint."""


class OrderExceeded(QidentError):
    """A coefficient beyond the truncation cap was requested."""


class NonUnitConstantTerm(QidentError):
    """Series reciprocal requires an invertible constant coefficient."""


class MissingExpansionVar(QidentError):
    """An infinite product needs its base to carry an expansion variable."""
