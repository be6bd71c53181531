"""Exception hierarchy.

Every error raised on purpose by the package derives from :class:`QGIDError`,
so callers (and the CLI) can separate input problems from genuine bugs.
"""


class QGIDError(Exception):
    """Base class for all package errors."""


class CenterMismatch(QGIDError):
    """Two series expanded around different points were combined."""


class NonFiniteError(QGIDError, ArithmeticError):
    """An operation produced NaN or infinity."""


class NearSingular(QGIDError, ArithmeticError):
    """Leading coefficient too close to zero for a reciprocal."""


class DomainError(QGIDError, ValueError):
    """Argument outside the domain of a series function (log, real power)."""


class InvalidParameter(QGIDError, ValueError):
    """A family or operation parameter is outside its admissible range."""


class UnknownFamily(QGIDError, ValueError):
    """An LST description names a family that does not exist."""


class InvalidLST(QGIDError, ValueError):
    """Mixture masses came out negative: the description is not a valid LST."""


class DegenerateP0(QGIDError, ValueError):
    """The mass at zero is (numerically) zero, so forward recursions break."""


class DegenerateAtZero(QGIDError, ValueError):
    """The LST equals one at the intensity: the mixing law is a point mass at 0."""


class PreconditionNotMet(QGIDError, ValueError):
    """An equivalence was requested outside the hypotheses under which it holds."""


class BracketError(QGIDError, ValueError):
    """Threshold bisection bracket does not straddle the membership boundary."""


class RangeError(QGIDError, ValueError):
    """A value lies outside the range of a semigroup transform."""
