"""Symbol quaternion algebras over a euclidean field model.

``QuaternionAlgebra(a, b, field)`` is the four dimensional algebra with
basis 1, i, j, k and relations i**2 = a, j**2 = b, k = ij = -ji.  The
reduced norm of r + s i + t j + u k is r**2 - a s**2 - b t**2 + a b u**2
and the reduced trace is 2r.  Everything is exact over the supplied
field model; the dot/cross decomposition and the rotation helpers are
restricted to the (-1, -1) case, where the norm form is euclidean.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

from .errors import FrameMismatch, NotPure, NotUnit, WrongAlgebra
from .fieldmodels import FieldModel, half_angle, not_certified_nonzero
from .towers import Sign


class QuaternionAlgebra:
    """The symbol algebra (a, b / F) for a euclidean field model F."""

    __slots__ = ("a", "b", "field")

    def __init__(self, a, b, field: FieldModel):
        self.field = field
        self.a = field.ensure(a)
        self.b = field.ensure(b)

    @classmethod
    def hamilton(cls, field: FieldModel) -> "QuaternionAlgebra":
        return cls(-1, -1, field)

    def is_hamilton_presentation(self) -> bool:
        return self.field.sign(self.a + 1) == Sign.ZERO and self.field.sign(
            self.b + 1
        ) == Sign.ZERO

    def is_division(self) -> bool:
        """Over a euclidean field the symbol algebra divides exactly when
        both slots are negative (each slot can shed square factors)."""
        return (
            self.field.sign(self.a) == Sign.NEGATIVE
            and self.field.sign(self.b) == Sign.NEGATIVE
        )

    # -- constructors -------------------------------------------------

    def quaternion(self, r, s=0, t=0, u=0) -> "Quaternion":
        e = self.field.ensure
        return Quaternion(self, e(r), e(s), e(t), e(u))

    def scalar(self, r) -> "Quaternion":
        return self.quaternion(r)

    def pure(self, b, c=0, d=0) -> "PureQuaternion":
        e = self.field.ensure
        return PureQuaternion(self, e(b), e(c), e(d))

    @property
    def one(self) -> "Quaternion":
        return self.quaternion(1)

    @property
    def i(self) -> "Quaternion":
        return self.quaternion(0, 1)

    @property
    def j(self) -> "Quaternion":
        return self.quaternion(0, 0, 1)

    @property
    def k(self) -> "Quaternion":
        return self.quaternion(0, 0, 0, 1)

    @property
    def i_pure(self) -> "PureQuaternion":
        return self.pure(1)

    def _check(self, other: "QuaternionAlgebra"):
        if other is self:
            return
        if not isinstance(other, QuaternionAlgebra):
            raise WrongAlgebra("operand is not a quaternion")
        same = (
            self.field.name == other.field.name
            and not_certified_nonzero(self.field, self.a - other.a)
            and not_certified_nonzero(self.field, self.b - other.b)
        )
        if not same:
            raise WrongAlgebra("operands live in different quaternion algebras")

    def __repr__(self):
        return (
            f"QuaternionAlgebra({self.field.render(self.a)}, "
            f"{self.field.render(self.b)}; {self.field.name})"
        )


_Num = Union[int, Fraction]


class Quaternion:
    """An element r + s i + t j + u k of a symbol algebra."""

    __slots__ = ("algebra", "r", "s", "t", "u")

    def __init__(self, algebra: QuaternionAlgebra, r, s, t, u):
        self.algebra = algebra
        self.r = r
        self.s = s
        self.t = t
        self.u = u

    def components(self):
        return (self.r, self.s, self.t, self.u)

    # -- coercion ------------------------------------------------------

    def _lift(self, other):
        if isinstance(other, Quaternion):
            self.algebra._check(other.algebra)
            return other
        if isinstance(other, PureQuaternion):
            self.algebra._check(other.algebra)
            return other.as_quaternion()
        if isinstance(other, (int, Fraction)):
            return self.algebra.scalar(other)
        try:
            return self.algebra.scalar(self.algebra.field.ensure(other))
        except (TypeError, ValueError):
            return None

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return Quaternion(
            self.algebra, self.r + o.r, self.s + o.s, self.t + o.t, self.u + o.u
        )

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return Quaternion(
            self.algebra, self.r - o.r, self.s - o.s, self.t - o.t, self.u - o.u
        )

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        a, b = self.algebra.a, self.algebra.b
        r1, s1, t1, u1 = self.r, self.s, self.t, self.u
        r2, s2, t2, u2 = o.r, o.s, o.t, o.u
        return Quaternion(
            self.algebra,
            r1 * r2 + a * (s1 * s2) + b * (t1 * t2) - a * b * (u1 * u2),
            r1 * s2 + s1 * r2 - b * (t1 * u2) + b * (u1 * t2),
            r1 * t2 + t1 * r2 + a * (s1 * u2) - a * (u1 * s2),
            r1 * u2 + u1 * r2 + s1 * t2 - t1 * s2,
        )

    def __rmul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o * self

    def __neg__(self):
        return Quaternion(self.algebra, -self.r, -self.s, -self.t, -self.u)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return (self ** (-exponent)).inverse()
        result = self.algebra.one
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # -- structure maps ------------------------------------------------

    def conjugate(self) -> "Quaternion":
        return Quaternion(self.algebra, self.r, -self.s, -self.t, -self.u)

    def nrd(self):
        a, b = self.algebra.a, self.algebra.b
        return (
            self.r * self.r
            - a * (self.s * self.s)
            - b * (self.t * self.t)
            + a * b * (self.u * self.u)
        )

    def trd(self):
        return self.r + self.r

    def scalar_part(self):
        return self.r

    def pure_part(self) -> "PureQuaternion":
        return PureQuaternion(self.algebra, self.s, self.t, self.u)

    def inverse(self) -> "Quaternion":
        field = self.algebra.field
        n_inv = field.invert(self.nrd())
        c = self.conjugate()
        return Quaternion(
            self.algebra, c.r * n_inv, c.s * n_inv, c.t * n_inv, c.u * n_inv
        )

    def is_zero(self) -> bool:
        field = self.algebra.field
        return all(field.is_zero(x) for x in self.components())

    def equals(self, other) -> bool:
        o = self._lift(other)
        if o is None:
            raise WrongAlgebra("cannot compare with that operand")
        field = self.algebra.field
        return all(
            field.is_zero(x - y)
            for x, y in zip(self.components(), o.components())
        )

    def __eq__(self, other):
        try:
            return self.equals(other)
        except WrongAlgebra:
            return NotImplemented

    __hash__ = None

    def is_unit_norm(self) -> bool:
        return self.algebra.field.is_zero(self.nrd() - 1)

    # -- conjugation action -------------------------------------------

    def conj_action(self, target):
        """x * target * x**-1, exact; pure targets come back pure.

        The scalar part of a conjugated pure quaternion vanishes by the
        trace identity; in the truncated model it may only vanish up to
        the working order, which is accepted, but a certified nonzero
        scalar part is a hard error.
        """
        field = self.algebra.field
        if isinstance(target, PureQuaternion):
            full = self * target.as_quaternion() * self.conjugate()
            n_inv = field.invert(self.nrd())
            if not field.negligible(full.r):
                raise NotPure("conjugation of a pure quaternion went impure")
            return PureQuaternion(
                self.algebra, full.s * n_inv, full.t * n_inv, full.u * n_inv
            )
        o = self._lift(target)
        if o is None:
            raise WrongAlgebra("cannot conjugate that operand")
        return self * o * self.inverse()

    def __repr__(self):
        f = self.algebra.field
        return (
            f"Quaternion({f.render(self.r)} + {f.render(self.s)}*i + "
            f"{f.render(self.t)}*j + {f.render(self.u)}*k)"
        )


class PureQuaternion:
    """A trace-zero quaternion b i + c j + d k."""

    __slots__ = ("algebra", "b", "c", "d")

    def __init__(self, algebra: QuaternionAlgebra, b, c, d):
        self.algebra = algebra
        self.b = b
        self.c = c
        self.d = d

    def components(self):
        return (self.b, self.c, self.d)

    def as_quaternion(self) -> Quaternion:
        return Quaternion(
            self.algebra, self.algebra.field.zero(), self.b, self.c, self.d
        )

    def _lift(self, other) -> "PureQuaternion":
        if isinstance(other, PureQuaternion):
            self.algebra._check(other.algebra)
            return other
        if isinstance(other, Quaternion):
            self.algebra._check(other.algebra)
            if not self.algebra.field.negligible(other.r):
                raise NotPure("quaternion has a nonzero scalar part")
            return other.pure_part()
        raise WrongAlgebra("expected a pure quaternion")

    def __add__(self, other):
        o = self._lift(other)
        return PureQuaternion(self.algebra, self.b + o.b, self.c + o.c, self.d + o.d)

    def __sub__(self, other):
        o = self._lift(other)
        return PureQuaternion(self.algebra, self.b - o.b, self.c - o.c, self.d - o.d)

    def __neg__(self):
        return PureQuaternion(self.algebra, -self.b, -self.c, -self.d)

    def scaled(self, factor) -> "PureQuaternion":
        f = self.algebra.field.ensure(factor)
        return PureQuaternion(self.algebra, self.b * f, self.c * f, self.d * f)

    def _require_hamilton(self):
        if not self.algebra.is_hamilton_presentation():
            raise WrongAlgebra(
                "dot/cross split needs the (-1,-1) presentation"
            )

    def dot(self, other):
        """Euclidean inner product; (-1,-1) presentation only."""
        self._require_hamilton()
        o = self._lift(other)
        return self.b * o.b + self.c * o.c + self.d * o.d

    def cross(self, other) -> "PureQuaternion":
        """Vector product; (-1,-1) presentation only."""
        self._require_hamilton()
        o = self._lift(other)
        return PureQuaternion(
            self.algebra,
            self.c * o.d - self.d * o.c,
            self.d * o.b - self.b * o.d,
            self.b * o.c - self.c * o.b,
        )

    def norm2(self):
        """Squared length = reduced norm of the pure element, (-1,-1) only."""
        self._require_hamilton()
        return self.b * self.b + self.c * self.c + self.d * self.d

    def normalized(self) -> "PureQuaternion":
        field = self.algebra.field
        return self.scaled(field.invert(field.sqrt(self.norm2())))

    def is_zero(self) -> bool:
        field = self.algebra.field
        return all(field.is_zero(x) for x in self.components())

    def equals(self, other) -> bool:
        o = self._lift(other)
        field = self.algebra.field
        return all(
            field.is_zero(x - y)
            for x, y in zip(self.components(), o.components())
        )

    def __eq__(self, other):
        try:
            return self.equals(other)
        except (WrongAlgebra, NotPure):
            return NotImplemented

    __hash__ = None

    def __repr__(self):
        f = self.algebra.field
        return (
            f"PureQuaternion({f.render(self.b)}*i + {f.render(self.c)}*j + "
            f"{f.render(self.d)}*k)"
        )


class Frame:
    """Right-handed orthonormal triple (p, q, r) of pure quaternions.

    Validated at construction: unit lengths, pairwise orthogonality and
    r = p*q as a quaternion product (equivalently the cross product).
    """

    __slots__ = ("p", "q", "r")

    def __init__(self, p: PureQuaternion, q: PureQuaternion, r: PureQuaternion):
        algebra = p.algebra
        field = algebra.field
        for v in (p, q, r):
            if not field.negligible(v.norm2() - 1):
                raise FrameMismatch("frame vector is not a unit vector")
        for x, y in ((p, q), (p, r), (q, r)):
            if not field.negligible(x.dot(y)):
                raise FrameMismatch("frame vectors are not orthogonal")
        cross = p.cross(q)
        if not all(
            field.negligible(a - b)
            for a, b in zip(cross.components(), r.components())
        ):
            raise FrameMismatch("third frame vector must be p*q")
        self.p = p
        self.q = q
        self.r = r

    @classmethod
    def standard(cls, algebra: QuaternionAlgebra) -> "Frame":
        return cls(algebra.pure(1), algebra.pure(0, 1), algebra.pure(0, 0, 1))

    def coordinates(self, v: PureQuaternion):
        return (v.dot(self.p), v.dot(self.q), v.dot(self.r))

    def from_coordinates(self, a, b, c) -> PureQuaternion:
        return (
            self.p.scaled(a) + self.q.scaled(b) + self.r.scaled(c)
        )

    def __repr__(self):
        return f"Frame(p={self.p!r})"


def complete_frame(p: PureQuaternion) -> Frame:
    """Deterministic extension of a unit pure quaternion to a frame.

    The second vector is the first of j, k, i not parallel to p,
    orthogonalised against p and normalised; the third is the product
    p*q.  May extend the coefficient tower by the normalisation root.
    """
    algebra = p.algebra
    field = algebra.field
    if not field.negligible(p.norm2() - 1):
        raise NotUnit("frame seed must be a unit vector")
    candidates = (
        algebra.pure(0, 1, 0),
        algebra.pure(0, 0, 1),
        algebra.pure(1, 0, 0),
    )
    for cand in candidates:
        perp = cand - p.scaled(p.dot(cand))
        n2 = perp.norm2()
        if field.sign(n2) == Sign.POSITIVE:
            q = perp.scaled(field.invert(field.sqrt(n2)))
            return Frame(p, q, p.cross(q))
    raise FrameMismatch("could not complete the frame")  # pragma: no cover


def rotate_i_to(gamma: PureQuaternion) -> Quaternion:
    """A quaternion x with x * i * x**-1 = gamma, for unit gamma.

    Canonical choices: gamma = i gives 1, gamma = -i gives j.  Otherwise
    x = c0 + s0 * p where p is the normalised i x gamma axis and
    (c0, s0) is the half angle of (gamma_i, |gamma - gamma_i i|).
    """
    algebra = gamma.algebra
    field = algebra.field
    if not field.negligible(gamma.norm2() - 1):
        raise NotUnit("target direction must be a unit vector")
    i_ax = algebra.i_pure
    c1 = gamma.dot(i_ax)
    rest = gamma - i_ax.scaled(c1)
    n2 = rest.norm2()
    if field.negligible(n2):
        if field.sign(c1) == Sign.POSITIVE:
            return algebra.one
        return algebra.j
    s1 = field.sqrt(n2)
    axis = i_ax.cross(gamma).scaled(field.invert(s1))
    c0, s0 = half_angle(field, c1, s1)
    return algebra.scalar(c0) + axis.scaled(s0).as_quaternion()
