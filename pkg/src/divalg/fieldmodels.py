"""Uniform access to the two euclidean base fields.

The geometric layers (quaternions, rotations, the sphere climb) are
generic over the scalar field.  They reach sign, square root, inversion
and valuation-ring membership through a small adapter object rather than
through the element classes directly, because the truncated-series model
needs a working order threaded through those operations while the
constructible model does not.

Both models are euclidean: every element is comparable with 0 and every
nonnegative element has a square root.  In the constructible model the
valuation ideal M is {0}; in the Puiseux model it is the set of
infinitesimals, and membership is certified or raises
:class:`~divalg.errors.PrecisionExhausted`.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

from .errors import PrecisionExhausted
from .puiseux import Dyadic, PrecisionPolicy, PuiseuxElement
from .towers import Sign, TowerElement

ScalarLike = Union[int, Fraction, TowerElement, PuiseuxElement]


class ConstructibleField:
    """Adapter for exact constructible reals (archimedean, M = {0})."""

    name = "constructible"

    def ensure(self, value) -> TowerElement:
        if isinstance(value, TowerElement):
            return value
        return TowerElement.from_fraction(Fraction(value))

    def zero(self) -> TowerElement:
        return TowerElement.zero()

    def one(self) -> TowerElement:
        return TowerElement.one()

    def from_fraction(self, value) -> TowerElement:
        return TowerElement.from_fraction(Fraction(value))

    def sign(self, a) -> Sign:
        return self.ensure(a).sign()

    def is_zero(self, a) -> bool:
        return self.ensure(a).is_zero()

    def invert(self, a) -> TowerElement:
        return self.ensure(a).inverse()

    def div(self, a, b) -> TowerElement:
        return self.ensure(a) / self.ensure(b)

    def sqrt(self, a) -> TowerElement:
        return self.ensure(a).sqrt()

    def in_valuation_ideal(self, a) -> bool:
        # archimedean degeneration: the only infinitesimal is 0
        return self.is_zero(a)

    def is_bounded(self, a) -> bool:
        return True

    def negligible(self, a) -> bool:
        """Vanishes to working tolerance; exact model, so same as zero."""
        return self.is_zero(a)

    def render(self, a) -> str:
        a = self.ensure(a)
        try:
            return str(a.as_fraction())
        except ValueError:
            lo, hi = a.approx(40)
            return f"~{float((lo + hi) / 2):.12g}"

    def __repr__(self):
        return "ConstructibleField()"


class PuiseuxField:
    """Adapter for truncated Puiseux series at a fixed working order."""

    name = "puiseux"

    def __init__(self, policy: PrecisionPolicy = PrecisionPolicy(), order: int = None):
        self.policy = policy
        self.order = policy.default_order if order is None else order

    def at_order(self, order: int) -> "PuiseuxField":
        return PuiseuxField(self.policy, order)

    def doubled(self) -> "PuiseuxField":
        if self.order * 2 > self.policy.max_order:
            raise PrecisionExhausted(
                "working order cap reached", order=self.order
            )
        return self.at_order(self.order * 2)

    def ensure(self, value) -> PuiseuxElement:
        if isinstance(value, PuiseuxElement):
            return value
        return PuiseuxElement.constant(value)

    def zero(self) -> PuiseuxElement:
        return PuiseuxElement.zero()

    def one(self) -> PuiseuxElement:
        return PuiseuxElement.one()

    def from_fraction(self, value) -> PuiseuxElement:
        return PuiseuxElement.constant(Fraction(value))

    def sign(self, a) -> Sign:
        return self.ensure(a).sign()

    def is_zero(self, a) -> bool:
        a = self.ensure(a)
        if a.is_exact_zero():
            return True
        if a.terms:
            return False
        raise PrecisionExhausted(
            "zero test undecidable at working order", order=a.order
        )

    def invert(self, a) -> PuiseuxElement:
        a = self.ensure(a)
        target = self.order
        if a.order is not None and a.terms:
            # an operand only valid to its own order cannot support a
            # residual certified beyond order minus leading valuation
            reachable = (a.order - a.terms[0][0]).as_fraction()
            target = min(target, reachable.numerator // reachable.denominator)
        if target < self._floor():
            raise PrecisionExhausted(
                "operand too coarse to invert within tolerance", order=a.order
            )
        return a.inverse(target)

    def div(self, a, b) -> PuiseuxElement:
        return self.ensure(a) * self.invert(b)

    def sqrt(self, a) -> PuiseuxElement:
        a = self.ensure(a)
        target = self.order
        if a.order is not None:
            declared = a.order.as_fraction()
            target = min(target, declared.numerator // declared.denominator)
        if target < self._floor():
            raise PrecisionExhausted(
                "operand too coarse for a square root within tolerance",
                order=a.order,
            )
        return a.sqrt(target)

    def _floor(self) -> int:
        return max(1, self.order // 2)

    def in_valuation_ideal(self, a) -> bool:
        return self.ensure(a).classify().is_infinitesimal

    def is_bounded(self, a) -> bool:
        return self.ensure(a).classify().is_bounded

    def negligible(self, a) -> bool:
        """Vanishes to working tolerance.

        Exact arithmetic on order-N truncations leaves visible residue
        terms of high valuation on quantities that are zero by theory;
        those must pass invariant checks.  The tolerance is half the
        working order, so certification degrades gracefully under the
        valuation losses of composed operations.
        """
        a = self.ensure(a)
        if not a.terms:
            return True
        return a.terms[0][0] >= self.tolerance()

    def tolerance(self):
        return Dyadic(max(1, self.order // 2))

    def render(self, a) -> str:
        return self.ensure(a).render()

    def __repr__(self):
        return f"PuiseuxField(order={self.order})"


FieldModel = Union[ConstructibleField, PuiseuxField]

CONSTRUCTIBLE = ConstructibleField()


def half_angle(model: FieldModel, c, s):
    """Point (a, b) on the unit circle whose double angle is (c, s).

    Convention: a = +sqrt((c+1)/2) and b = s/(2a); at c = -1 the result
    is (0, 1).  Requires c**2 + s**2 = 1, which callers guarantee.
    """
    c = model.ensure(c)
    s = model.ensure(s)
    shifted = c + 1
    if not_certified_nonzero(model, shifted):
        return model.zero(), model.one()
    a = model.sqrt(model.div(shifted, model.from_fraction(2)))
    b = model.div(s, a + a)
    return a, b


def not_certified_nonzero(model: FieldModel, a) -> bool:
    """True unless the element is certifiably different from zero.

    Used for consistency assertions on quantities that are zero by a
    theorem: the truncated model may be unable to certify the zero, and
    that is fine, but a certified nonzero means a real bug.
    """
    try:
        return model.sign(a) == Sign.ZERO
    except PrecisionExhausted:
        return True
