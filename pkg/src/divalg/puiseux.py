"""Truncated Puiseux series with dyadic exponents and constructible coefficients.

Elements model a real closed valued field whose value group is Z[1/2]:
finite sums of terms ``coeff * x**e`` with ``e`` dyadic and ``coeff`` an
exact :class:`~divalg.towers.TowerElement`, ordered so that ``x`` is a
positive infinitesimal.  Every element carries a validity order ``O``:
terms at exponents >= O are unknown and silently absent.  The exact zero
is the empty sum with ``O = +infinity`` (stored as ``None``).

Arithmetic propagates validity orders honestly: addition keeps the
minimum of the two orders, multiplication keeps
``min(O_a + v(b), O_b + v(a))``.  Decisions (sign, valuation, equality)
either certify an answer from the visible terms or raise
:class:`~divalg.errors.PrecisionExhausted`; they never guess.  Callers
that can rebuild their inputs retry at a doubled order, up to a policy
maximum.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Tuple, Union

from .errors import (
    NonPositiveRadicand,
    PrecisionExhausted,
    ZeroInverse,
    ZeroValuation,
)
from .towers import Sign, TowerElement

DEFAULT_ORDER = 16
MAX_ORDER = 256


class Dyadic:
    """An element of Z[1/2]: num / 2**exp2, kept reduced."""

    __slots__ = ("num", "exp2")

    def __init__(self, num: int, exp2: int = 0):
        if exp2 < 0:
            num <<= -exp2
            exp2 = 0
        while exp2 > 0 and num % 2 == 0:
            num //= 2
            exp2 -= 1
        self.num = num
        self.exp2 = exp2

    @classmethod
    def from_fraction(cls, value) -> "Dyadic":
        f = Fraction(value)
        den = f.denominator
        exp2 = den.bit_length() - 1
        if den != 1 << exp2:
            raise ValueError(f"{f} is not dyadic")
        return cls(f.numerator, exp2)

    def as_fraction(self) -> Fraction:
        return Fraction(self.num, 1 << self.exp2)

    def __add__(self, other):
        other = _as_dyadic(other)
        if other is None:
            return NotImplemented
        e = max(self.exp2, other.exp2)
        return Dyadic(
            (self.num << (e - self.exp2)) + (other.num << (e - other.exp2)), e
        )

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_dyadic(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _as_dyadic(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __neg__(self):
        return Dyadic(-self.num, self.exp2)

    def __mul__(self, other):
        other = _as_dyadic(other)
        if other is None:
            return NotImplemented
        return Dyadic(self.num * other.num, self.exp2 + other.exp2)

    __rmul__ = __mul__

    def half(self) -> "Dyadic":
        return Dyadic(self.num, self.exp2 + 1)

    def _key(self):
        return self.num, self.exp2

    def __eq__(self, other):
        other = _as_dyadic(other)
        return NotImplemented if other is None else self._key() == other._key()

    def __lt__(self, other):
        other = _as_dyadic(other)
        if other is None:
            return NotImplemented
        return self.as_fraction() < other.as_fraction()

    def __le__(self, other):
        other = _as_dyadic(other)
        if other is None:
            return NotImplemented
        return self.as_fraction() <= other.as_fraction()

    def __gt__(self, other):
        other = _as_dyadic(other)
        if other is None:
            return NotImplemented
        return other < self

    def __ge__(self, other):
        other = _as_dyadic(other)
        if other is None:
            return NotImplemented
        return other <= self

    def __hash__(self):
        return hash(self._key())

    def residue_mod(self, p: int) -> int:
        """Image in Z[1/2] / p*Z[1/2] identified with Z/p, for odd p."""
        if p % 2 == 0:
            raise ValueError("residue ring needs 2 invertible, p must be odd")
        return self.num * pow(2, -self.exp2, p) % p

    def __repr__(self):
        if self.exp2 == 0:
            return str(self.num)
        return f"{self.num}/{1 << self.exp2}"


def _as_dyadic(value) -> Optional[Dyadic]:
    if isinstance(value, Dyadic):
        return value
    if isinstance(value, int):
        return Dyadic(value)
    if isinstance(value, Fraction):
        try:
            return Dyadic.from_fraction(value)
        except ValueError:
            return None
    return None


ZERO_D = Dyadic(0)
ONE_D = Dyadic(1)


@dataclass(frozen=True)
class PrecisionPolicy:
    """Working order and retry schedule for truncated-series decisions."""

    default_order: int = DEFAULT_ORDER
    max_order: int = MAX_ORDER

    def schedule(self) -> Iterable[int]:
        order = self.default_order
        while order <= self.max_order:
            yield order
            order *= 2


@dataclass(frozen=True)
class Classification:
    """Certified valuation-theoretic placement of an element."""

    is_infinitesimal: bool
    is_bounded: bool


_CoeffLike = Union[TowerElement, int, Fraction]


def _coeff(value: _CoeffLike) -> TowerElement:
    if isinstance(value, TowerElement):
        return value
    return TowerElement.from_fraction(Fraction(value))


class PuiseuxElement:
    """A truncated Puiseux series; immutable.

    ``terms`` is a tuple of (Dyadic exponent, nonzero TowerElement)
    sorted by exponent; ``order`` is a Dyadic validity bound or None for
    an exact element.  Equality certifies: it raises PrecisionExhausted
    when the visible terms cancel but the validity order cannot rule out
    a difference further out.  Use :meth:`agrees_to` for bounded checks.
    """

    __slots__ = ("terms", "order")

    def __init__(self, terms: Tuple, order: Optional[Dyadic]):
        self.terms = terms
        self.order = order

    # -- constructors -------------------------------------------------

    @classmethod
    def from_terms(cls, raw, order: Optional[Dyadic] = None) -> "PuiseuxElement":
        acc = {}
        for e, c in raw:
            e = _as_dyadic(e) if not isinstance(e, Dyadic) else e
            if e is None:
                raise ValueError("exponents must be dyadic")
            c = _coeff(c)
            acc[e] = acc[e] + c if e in acc else c
        terms = []
        for e in sorted(acc, key=Dyadic.as_fraction):
            if order is not None and e >= order:
                continue
            if acc[e].sign() != Sign.ZERO:
                terms.append((e, acc[e]))
        return cls(tuple(terms), order)

    @classmethod
    def zero(cls) -> "PuiseuxElement":
        return cls((), None)

    @classmethod
    def one(cls) -> "PuiseuxElement":
        return cls.constant(1)

    @classmethod
    def constant(cls, c: _CoeffLike) -> "PuiseuxElement":
        coeff = _coeff(c)
        if coeff.sign() == Sign.ZERO:
            return cls.zero()
        return cls(((ZERO_D, coeff),), None)

    @classmethod
    def x_power(cls, exponent) -> "PuiseuxElement":
        e = _as_dyadic(exponent)
        if e is None:
            raise ValueError("exponent must be dyadic")
        return cls(((e, TowerElement.one()),), None)

    # -- views --------------------------------------------------------

    def is_exact_zero(self) -> bool:
        return not self.terms and self.order is None

    def is_truncated_zero(self) -> bool:
        return not self.terms and self.order is not None

    def leading(self) -> Tuple[Dyadic, TowerElement]:
        if not self.terms:
            raise PrecisionExhausted(
                "no visible terms to lead with", order=self.order
            )
        return self.terms[0]

    def valuation(self) -> Dyadic:
        """Leading exponent.  The exact zero has no valuation."""
        if self.terms:
            return self.terms[0][0]
        if self.order is None:
            raise ZeroValuation("valuation of 0 is undefined")
        raise PrecisionExhausted(
            "valuation hidden beyond working order", order=self.order
        )

    def valuation_at_least(self, bound) -> bool:
        """Certified v(self) >= bound; raises when truncation blocks it."""
        bound = _as_dyadic(bound)
        if self.terms:
            return self.terms[0][0] >= bound
        if self.order is None:
            return True
        if self.order >= bound:
            return True
        raise PrecisionExhausted(
            "cannot certify valuation bound", order=self.order
        )

    def coefficient(self, exponent) -> TowerElement:
        e = _as_dyadic(exponent)
        for te, tc in self.terms:
            if te == e:
                return tc
        return TowerElement.zero()

    def standard_part(self) -> TowerElement:
        """Coefficient at x**0, once boundedness is certified."""
        if not self.classify().is_bounded:
            raise ValueError("unbounded element has no standard part")
        return self.coefficient(ZERO_D)

    # -- decisions ----------------------------------------------------

    def sign(self) -> Sign:
        if self.terms:
            return self.terms[0][1].sign()
        if self.order is None:
            return Sign.ZERO
        raise PrecisionExhausted("sign hidden beyond working order", order=self.order)

    def classify(self) -> "Classification":
        """Certified membership in the valuation ring and its maximal ideal."""
        if self.terms:
            v = self.terms[0][0]
            return Classification(v > ZERO_D, v >= ZERO_D)
        if self.order is None:
            return Classification(True, True)
        if self.order > ZERO_D:
            return Classification(True, True)
        raise PrecisionExhausted(
            "classification hidden beyond working order", order=self.order
        )

    def agrees_to(self, other, order) -> bool:
        """True when v(self - other) >= order is certified."""
        return (self - _lift(other)).valuation_at_least(order)

    # -- arithmetic ---------------------------------------------------

    def _lower_valuation(self) -> Optional[Dyadic]:
        # a certified lower bound for v; None = +infinity
        if self.terms:
            return self.terms[0][0]
        return self.order

    def __add__(self, other):
        other = _lift(other)
        if other is None:
            return NotImplemented
        order = _min_order(self.order, other.order)
        return PuiseuxElement.from_terms(self.terms + other.terms, order)

    __radd__ = __add__

    def __sub__(self, other):
        other = _lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _lift(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __neg__(self):
        return PuiseuxElement(
            tuple((e, -c) for e, c in self.terms), self.order
        )

    def __mul__(self, other):
        other = _lift(other)
        if other is None:
            return NotImplemented
        if self.is_exact_zero() or other.is_exact_zero():
            return PuiseuxElement.zero()
        va, vb = self._lower_valuation(), other._lower_valuation()
        order = _min_order(
            _shift_order(self.order, vb), _shift_order(other.order, va)
        )
        raw = [
            (ea + eb, ca * cb)
            for ea, ca in self.terms
            for eb, cb in other.terms
        ]
        return PuiseuxElement.from_terms(raw, order)

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return (self ** (-exponent)).inverse()
        result = PuiseuxElement.one()
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __truediv__(self, other):
        other = _lift(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _lift(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __eq__(self, other):
        other = _lift(other)
        if other is None:
            return NotImplemented
        diff = self - other
        if diff.terms:
            return False
        if diff.order is None:
            return True
        raise PrecisionExhausted(
            "equality undecidable at working order", order=diff.order
        )

    def __ne__(self, other):
        eq = self.__eq__(other)
        return NotImplemented if eq is NotImplemented else not eq

    def __lt__(self, other):
        return self._cmp_sign(other) < 0

    def __le__(self, other):
        return self._cmp_sign(other) <= 0

    def __gt__(self, other):
        return self._cmp_sign(other) > 0

    def __ge__(self, other):
        return self._cmp_sign(other) >= 0

    def _cmp_sign(self, other) -> int:
        other = _lift(other)
        if other is None:
            raise TypeError("cannot compare puiseux element with that type")
        return int((self - other).sign())

    __hash__ = None

    def truncated(self, order) -> "PuiseuxElement":
        """Forget terms at exponents >= order and cap the validity order."""
        order = _as_dyadic(order)
        new_order = order if self.order is None else min(self.order, order, key=Dyadic.as_fraction)
        return PuiseuxElement(
            tuple((e, c) for e, c in self.terms if e < new_order), new_order
        )

    # -- inverse and square root --------------------------------------

    def inverse(self, target_order: Optional[int] = None) -> "PuiseuxElement":
        """Multiplicative inverse, certified so that self*result - 1 has
        valuation >= target_order (default DEFAULT_ORDER)."""
        target = Dyadic(DEFAULT_ORDER if target_order is None else target_order)
        if not self.terms:
            if self.order is None:
                raise ZeroInverse("inverse of the exact zero")
            raise PrecisionExhausted(
                "inverse needs a visible leading term", order=self.order
            )
        e, c0 = self.terms[0]
        lead_inv = PuiseuxElement(((-e, c0.inverse()),), None)
        # self = c0 x^e (1 + u) with v(u) > 0; invert the unit part by a
        # geometric series, truncated once u**k climbs past the target.
        u = self * lead_inv - 1
        if u.is_exact_zero():
            return lead_inv
        step = u._lower_valuation()
        if step is None:
            return lead_inv
        if not step > ZERO_D:
            raise PrecisionExhausted(
                "unit part not certified at working order", order=self.order
            )
        series = PuiseuxElement.one()
        power = PuiseuxElement.one()
        goal = target.as_fraction()
        rounds = 0
        acc = Fraction(0)
        while acc < goal:
            rounds += 1
            if rounds > 4096:
                raise PrecisionExhausted(
                    "geometric inversion did not reach the target order",
                    order=target,
                )
            power = (power * (-u)).truncated(target)
            if not power.terms:
                break
            series = series + power
            acc = acc + step.as_fraction()
        result = (lead_inv * series).truncated(target - e)
        resid = self * result - 1
        if not resid.valuation_at_least(target):
            raise PrecisionExhausted(
                "inverse residual not certified", order=target
            )
        return result

    def sqrt(self, target_order: Optional[int] = None) -> "PuiseuxElement":
        """Nonnegative square root via Newton iteration, certified so that
        result*result - self has valuation >= target_order."""
        target = Dyadic(DEFAULT_ORDER if target_order is None else target_order)
        if self.sign() != Sign.POSITIVE:
            raise NonPositiveRadicand(
                "series square root needs a certified-positive radicand"
            )
        e, c0 = self.terms[0]
        half_e = e.half()
        root = PuiseuxElement(((half_e, c0.sqrt()),), None)
        half = Fraction(1, 2)
        cap = target - half_e + 1
        for _ in range(64):
            resid = root * root - self
            if resid.valuation_at_least(target):  # PrecisionExhausted propagates
                return root
            # The inner inverse can only be certified up to what the
            # current iterate's validity order supports.
            want = (target - e + 1).as_fraction()
            if root.order is not None:
                want = min(want, (root.order - half_e).as_fraction())
            inner = max(1, want.numerator // want.denominator)
            root = ((root + self * root.inverse(inner)) * half).truncated(cap)
        raise PrecisionExhausted(
            "newton iteration failed to certify sqrt", order=target
        )

    # -- rendering ----------------------------------------------------

    def __repr__(self):
        if self.is_exact_zero():
            return "PuiseuxElement(0)"
        bits = []
        for e, c in self.terms[:4]:
            bits.append(f"{c!r}*x^{e!r}")
        if len(self.terms) > 4:
            bits.append("...")
        tail = "" if self.order is None else f" + O(x^{self.order!r})"
        return "PuiseuxElement(" + " + ".join(bits) + tail + ")"

    def render(self) -> str:
        """Compact text form used by the command line tools."""
        if self.is_exact_zero():
            return "0"
        pieces = []
        for e, c in self.terms:
            lo, hi = c.approx(30)
            mid = (lo + hi) / 2
            cs = str(lo) if lo == hi else f"~{float(mid):.6g}"
            if e == ZERO_D:
                pieces.append(cs)
            elif e == ONE_D:
                pieces.append(f"{cs}*x")
            else:
                pieces.append(f"{cs}*x^({e!r})")
        if self.order is not None:
            pieces.append(f"O(x^({self.order!r}))")
        return " + ".join(pieces) if pieces else f"O(x^({self.order!r}))"


def _lift(value) -> Optional[PuiseuxElement]:
    if isinstance(value, PuiseuxElement):
        return value
    if isinstance(value, (int, Fraction, TowerElement)):
        return PuiseuxElement.constant(value)
    return None


def _min_order(a: Optional[Dyadic], b: Optional[Dyadic]) -> Optional[Dyadic]:
    if a is None:
        return b
    if b is None:
        return a
    return a if a.as_fraction() <= b.as_fraction() else b


def _shift_order(order: Optional[Dyadic], shift: Optional[Dyadic]) -> Optional[Dyadic]:
    if order is None or shift is None:
        return None
    return order + shift
