"""Exception types shared across the package.

Every failure mode that callers are expected to branch on gets its own
class.  Plain ValueError/ZeroDivisionError are reserved for genuine
programming errors (bad argument types, malformed literals).
"""

from __future__ import annotations


class DivalgError(Exception):
    """Base class for all package-specific errors."""


class DivisionByZero(DivalgError, ZeroDivisionError):
    """Division by an element whose sign is certified 0."""


class NegativeRadicand(DivalgError):
    """Square root requested of an element whose sign is -1."""


class NonPositiveRadicand(DivalgError):
    """Series square root requested of an element that is not certified
    positive (the leading-coefficient route needs a strict sign)."""


class ZeroInverse(DivalgError, ZeroDivisionError):
    """Series inverse requested of the exact zero."""


class ZeroValuation(DivalgError):
    """Valuation requested of the exact zero, which has none."""


class PrecisionExhausted(DivalgError):
    """A truncated-series decision could not be certified at the working order.

    Carries the order that was in effect so callers can retry at a higher
    one.  ``order`` is None when the failing operation had no meaningful
    working order of its own.
    """

    def __init__(self, message: str, order=None):
        super().__init__(message)
        self.order = order


class WrongAlgebra(DivalgError):
    """Mixed operands from two different quaternion algebras."""


class NotInvertible(DivalgError, ZeroDivisionError):
    """Quaternion of reduced norm 0 cannot be inverted (split algebras only)."""


class NotUnit(DivalgError):
    """Operation requires a quaternion of reduced norm 1."""


class NotPure(DivalgError):
    """Operation requires a quaternion with zero scalar part."""


class FrameMismatch(DivalgError):
    """Quaternion is not of the form c + s*p for the frame's p."""


class NotSpecialOrthogonal(DivalgError):
    """Matrix argument is not in SO(3) over the working field."""


class LatitudeMismatch(DivalgError):
    """Two sphere points that must share an i-coordinate do not."""


class PoleDegenerate(DivalgError):
    """Latitude circle collapses to a single pole point."""


class WrongModel(DivalgError):
    """Operation is only defined for the other field model."""


class YInG(DivalgError):
    """The climbing generator already lies in the constructed subgroup."""


class UnboundGenerator(DivalgError):
    """Group word evaluated without a quaternion bound to its Y symbol."""


class NotDivision(DivalgError):
    """Quaternion algebra splits, so division-algebra statements do not apply."""


class GroupTooLarge(DivalgError):
    """Finite group construction exceeds the supported order bound."""


class NotAGroup(DivalgError):
    """Multiplication table fails the group axioms."""


class BadAction(DivalgError):
    """Semidirect product parameters do not define a group action."""


class NotPrime(DivalgError):
    """Argument that must be prime (or a prime power where stated) is not."""


class NoIrreducible(DivalgError):
    """Deterministic search found no irreducible polynomial of the
    requested degree (cannot happen for true primes; guards bad input)."""
