"""Exact arithmetic in iterated real quadratic extensions of Q.

An element is stored against a ``TowerContext``, an ordered list of
radicands r_1, ..., r_h where each r_k is a positive element expressible
over the previous levels.  Field values are nested trees:

* a ``Fraction`` leaf is a rational constant (valid at every level), and
* a triple ``(k, lo, hi)`` denotes ``lo + hi*sqrt(r_k)`` where ``lo`` and
  ``hi`` are trees tagged strictly below ``k``.

Trees are kept normalised: a ``hi`` part that is structurally zero is
collapsed away, so a rational embedded in a deep tower still costs one
Fraction operation.  Representations are not canonical; equality is
decided by taking a sign of the difference, never structurally.

Sign determination runs dyadic interval refinement first (interval width
halves as the working precision doubles) and falls back to an exact
recursive comparison of ``lo**2`` against ``hi**2 * r_k`` when refinement
stays inconclusive.  The fallback is total, so every sign query
terminates with a correct answer even when a context accidentally
contains a redundant radicand.
"""

from __future__ import annotations

from enum import IntEnum
from fractions import Fraction
from math import isqrt
from typing import Optional, Union

from .errors import DivisionByZero, NegativeRadicand

_ZERO = Fraction(0)
_ONE = Fraction(1)

# Interval refinement schedule for sign(): 2**-32 start, doubled per
# round, exact fallback after four inconclusive rounds.
_SIGN_PRECISIONS = (32, 64, 128, 256)


class Sign(IntEnum):
    NEGATIVE = -1
    ZERO = 0
    POSITIVE = 1


# ---------------------------------------------------------------------------
# tree helpers (module-private, operate on raw data trees)
# ---------------------------------------------------------------------------


def _tag(x) -> int:
    """Extension level of a tree; rationals sit at level 0."""
    return x[0] if type(x) is tuple else 0


def _node(k: int, lo, hi):
    """Build lo + hi*sqrt(r_k), collapsing a structurally zero hi."""
    if type(hi) is not tuple and hi == 0:
        return lo
    return (k, lo, hi)


def _add(x, y):
    tx, ty = _tag(x), _tag(y)
    if tx == 0 and ty == 0:
        return x + y
    if tx == ty:
        return _node(tx, _add(x[1], y[1]), _add(x[2], y[2]))
    if tx > ty:
        return (tx, _add(x[1], y), x[2])
    return (ty, _add(x, y[1]), y[2])


def _neg(x):
    if type(x) is not tuple:
        return -x
    return (x[0], _neg(x[1]), _neg(x[2]))


def _sub(x, y):
    return _add(x, _neg(y))


def _mul(x, y, rads):
    tx, ty = _tag(x), _tag(y)
    if tx == 0 and ty == 0:
        return x * y
    if tx == ty:
        # (a + b*s)(c + d*s) = (ac + bd*r) + (ad + bc)*s  with s**2 = r
        a, b = x[1], x[2]
        c, d = y[1], y[2]
        r = rads[tx - 1]
        lo = _add(_mul(a, c, rads), _mul(_mul(b, d, rads), r, rads))
        hi = _add(_mul(a, d, rads), _mul(b, c, rads))
        return _node(tx, lo, hi)
    if tx > ty:
        return _node(tx, _mul(x[1], y, rads), _mul(x[2], y, rads))
    return _node(ty, _mul(x, y[1], rads), _mul(x, y[2], rads))


def _is_structural_zero(x) -> bool:
    return type(x) is not tuple and x == 0


def _shift(x, delta: int):
    """Re-tag a tree after its context is appended to another one."""
    if type(x) is not tuple:
        return x
    return (x[0] + delta, _shift(x[1], delta), _shift(x[2], delta))


# ---------------------------------------------------------------------------
# dyadic interval arithmetic for the sign fast path
# ---------------------------------------------------------------------------


def _sqrt_lower(f: Fraction, prec: int) -> Fraction:
    """Largest grid point m/2**prec with (m/2**prec)**2 <= f, for f >= 0."""
    if f <= 0:
        return _ZERO
    scaled = (f.numerator << (2 * prec)) // f.denominator
    return Fraction(isqrt(scaled), 1 << prec)


def _sqrt_upper(f: Fraction, prec: int) -> Fraction:
    if f <= 0:
        return _ZERO
    num = f.numerator << (2 * prec)
    den = f.denominator
    scaled = -(-num // den)  # ceil
    root = isqrt(scaled)
    if root * root < scaled:
        root += 1
    return Fraction(root, 1 << prec)


def _ival_mul(a, b):
    lo1, hi1 = a
    lo2, hi2 = b
    products = (lo1 * lo2, lo1 * hi2, hi1 * lo2, hi1 * hi2)
    return (min(products), max(products))


def _round_out(lo: Fraction, hi: Fraction, prec: int):
    """Snap an interval outward to the 2**-prec grid to cap denominators."""
    scale = 1 << prec
    lo = Fraction((lo.numerator * scale) // lo.denominator, scale)
    hi = Fraction(-((-hi.numerator * scale) // hi.denominator), scale)
    return (lo, hi)


def _interval(x, rads, prec: int, cache: dict):
    """Enclosing interval with dyadic endpoints on the 2**-prec grid."""
    if type(x) is not tuple:
        return (x, x)
    k, lo, hi = x
    ilo = _interval(lo, rads, prec, cache)
    ihi = _interval(hi, rads, prec, cache)
    isq = cache.get(k)
    if isq is None:
        ir = _interval(rads[k - 1], rads, prec, cache)
        isq = (_sqrt_lower(ir[0], prec), _sqrt_upper(ir[1], prec))
        cache[k] = isq
    prod = _ival_mul(ihi, isq)
    return _round_out(ilo[0] + prod[0], ilo[1] + prod[1], prec)


def _sign(x, rads) -> int:
    if type(x) is not tuple:
        return (x > 0) - (x < 0)
    for prec in _SIGN_PRECISIONS:
        lo, hi = _interval(x, rads, prec, {})
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        if lo == 0 and hi == 0:
            return 0
    return _sign_exact(x, rads)


def _sign_exact(x, rads) -> int:
    if type(x) is not tuple:
        return (x > 0) - (x < 0)
    k, a, b = x
    sa = _sign(a, rads)
    sb = _sign(b, rads)
    if sb == 0:
        return sa
    if sa == 0:
        return sb
    if sa > 0 and sb > 0:
        return 1
    if sa < 0 and sb < 0:
        return -1
    # Opposite signs: compare a**2 with b**2 * r at the lower level.
    diff = _sub(_mul(a, a, rads), _mul(_mul(b, b, rads), rads[k - 1], rads))
    st = _sign(diff, rads)
    return st if sa > 0 else -st


def _inv(x, rads):
    """Multiplicative inverse of a tree known to be nonzero."""
    if type(x) is not tuple:
        return 1 / x
    k, a, b = x
    r = rads[k - 1]
    den = _sub(_mul(a, a, rads), _mul(_mul(b, b, rads), r, rads))
    if _sign(den, rads) == 0:
        # Conjugate vanishes, so sqrt(r_k) = a/b already lives below level
        # k (the context carries a redundant radicand) and x equals 2a.
        return _inv(_mul(Fraction(2), a, rads), rads)
    dinv = _inv(den, rads)
    return _node(k, _mul(a, dinv, rads), _neg(_mul(b, dinv, rads)))


def _try_sqrt(x, rads, kmax: int):
    """Search for a tree whose square is x, using levels up to kmax.

    Bounded effort: the same-level decomposition (u + v*sqrt(r))**2 is
    attempted first, then the pure forms v*sqrt(r_k) for each unused
    level.  Returns None when no representation is found, in which case
    the caller adjoins a fresh radicand.
    """
    t = _tag(x)
    if t == 0:
        n, d = x.numerator, x.denominator
        if n >= 0:
            rn, rd = isqrt(n), isqrt(d)
            if rn * rn == n and rd * rd == d:
                return Fraction(rn, rd)
    else:
        k, c, d = x
        r = rads[k - 1]
        # (u + v*sqrt(r))**2 = c + d*sqrt(r)  forces  u**2 = (c +- m)/2
        # with m**2 = c**2 - d**2*r, and then v = d/(2u).
        norm = _sub(_mul(c, c, rads), _mul(_mul(d, d, rads), r, rads))
        m = _try_sqrt(norm, rads, k - 1)
        if m is not None:
            half = Fraction(1, 2)
            for usq in (_mul(_add(c, m), half, rads), _mul(_sub(c, m), half, rads)):
                u = _try_sqrt(usq, rads, k - 1)
                if u is None or _sign(u, rads) == 0:
                    continue
                v = _mul(d, _inv(_mul(Fraction(2), u, rads), rads), rads)
                cand = _node(k, u, v)
                if _sign(_sub(_mul(cand, cand, rads), x), rads) == 0:
                    return cand
    # Pure forms v*sqrt(r_k) at levels above x's own tag.
    for k in range(kmax, t, -1):
        quot = _mul(x, _inv(rads[k - 1], rads), rads)
        v = _try_sqrt(quot, rads, k - 1)
        if v is not None:
            cand = (k, _ZERO, v)
            if _sign(_sub(_mul(cand, cand, rads), x), rads) == 0:
                return cand
    return None


# ---------------------------------------------------------------------------
# public classes
# ---------------------------------------------------------------------------


class TowerContext:
    """Immutable chain of radicands defining an iterated quadratic extension.

    ``radicands[k]`` is the tree (tagged at most k) whose square root was
    adjoined at level k+1.  Radicands are positive; they are checked not
    to be squares at adjunction time by a bounded-effort search, but
    arithmetic and sign stay correct even if that search misses one.
    """

    __slots__ = ("radicands",)

    def __init__(self, radicands: tuple = ()):
        self.radicands = radicands

    @property
    def height(self) -> int:
        return len(self.radicands)

    def is_prefix_of(self, other: "TowerContext") -> bool:
        n = len(self.radicands)
        return len(other.radicands) >= n and other.radicands[:n] == self.radicands

    def extended(self, radicand_tree) -> "TowerContext":
        return TowerContext(self.radicands + (radicand_tree,))

    def __eq__(self, other):
        return isinstance(other, TowerContext) and self.radicands == other.radicands

    def __hash__(self):
        return hash(self.radicands)

    def __repr__(self):
        return f"TowerContext(height={self.height})"


EMPTY_CONTEXT = TowerContext()

_Coercible = Union["TowerElement", int, Fraction]


class TowerElement:
    """A constructible real, exact under +, -, *, /, sqrt and sign.

    Comparisons are decided by the sign of the difference and are
    therefore semantic, not structural; because of that the class is
    deliberately unhashable.
    """

    __slots__ = ("context", "data")

    def __init__(self, context: TowerContext, data):
        self.context = context
        self.data = data

    # -- construction -------------------------------------------------

    @classmethod
    def from_fraction(cls, value, context: TowerContext = EMPTY_CONTEXT) -> "TowerElement":
        return cls(context, Fraction(value))

    @classmethod
    def zero(cls, context: TowerContext = EMPTY_CONTEXT) -> "TowerElement":
        return cls(context, _ZERO)

    @classmethod
    def one(cls, context: TowerContext = EMPTY_CONTEXT) -> "TowerElement":
        return cls(context, _ONE)

    # -- context alignment --------------------------------------------

    def _coerce(self, other) -> Optional[tuple]:
        if isinstance(other, TowerElement):
            ca, cb = self.context, other.context
            if ca is cb or ca.radicands == cb.radicands:
                return ca, self.data, other.data
            if ca.is_prefix_of(cb):
                return cb, self.data, other.data
            if cb.is_prefix_of(ca):
                return ca, self.data, other.data
            # Disjoint histories: append other's levels after ours and
            # re-tag its trees.  No redundancy check across the join.
            delta = ca.height
            merged = TowerContext(
                ca.radicands + tuple(_shift(r, delta) for r in cb.radicands)
            )
            return merged, self.data, _shift(other.data, delta)
        if isinstance(other, (int, Fraction)):
            return self.context, self.data, Fraction(other)
        return None

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        ctx, a, b = c
        return TowerElement(ctx, _add(a, b))

    __radd__ = __add__

    def __sub__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        ctx, a, b = c
        return TowerElement(ctx, _sub(a, b))

    def __rsub__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        ctx, a, b = c
        return TowerElement(ctx, _sub(b, a))

    def __mul__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        ctx, a, b = c
        return TowerElement(ctx, _mul(a, b, ctx.radicands))

    __rmul__ = __mul__

    def __truediv__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        ctx, a, b = c
        if _sign(b, ctx.radicands) == 0:
            raise DivisionByZero("tower element division by zero")
        return TowerElement(ctx, _mul(a, _inv(b, ctx.radicands), ctx.radicands))

    def __rtruediv__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        ctx, a, b = c
        if _sign(a, ctx.radicands) == 0:
            raise DivisionByZero("tower element division by zero")
        return TowerElement(ctx, _mul(b, _inv(a, ctx.radicands), ctx.radicands))

    def __neg__(self):
        return TowerElement(self.context, _neg(self.data))

    def __pos__(self):
        return self

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return (self ** (-exponent)).inverse()
        result = TowerElement(self.context, _ONE)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self) -> "TowerElement":
        rads = self.context.radicands
        if _sign(self.data, rads) == 0:
            raise DivisionByZero("tower element has no inverse")
        return TowerElement(self.context, _inv(self.data, rads))

    # -- predicates and comparisons -----------------------------------

    def sign(self) -> Sign:
        return Sign(_sign(self.data, self.context.radicands))

    def is_zero(self) -> bool:
        return _sign(self.data, self.context.radicands) == 0

    def _cmp(self, other) -> Optional[int]:
        c = self._coerce(other)
        if c is None:
            return None
        ctx, a, b = c
        return _sign(_sub(a, b), ctx.radicands)

    def __eq__(self, other):
        s = self._cmp(other)
        return NotImplemented if s is None else s == 0

    def __ne__(self, other):
        s = self._cmp(other)
        return NotImplemented if s is None else s != 0

    def __lt__(self, other):
        s = self._cmp(other)
        return NotImplemented if s is None else s < 0

    def __le__(self, other):
        s = self._cmp(other)
        return NotImplemented if s is None else s <= 0

    def __gt__(self, other):
        s = self._cmp(other)
        return NotImplemented if s is None else s > 0

    def __ge__(self, other):
        s = self._cmp(other)
        return NotImplemented if s is None else s >= 0

    __hash__ = None  # semantic equality is incompatible with structural hash

    # -- roots and approximation --------------------------------------

    def sqrt(self) -> "TowerElement":
        """Nonnegative square root; may extend the context by one level."""
        rads = self.context.radicands
        s = _sign(self.data, rads)
        if s < 0:
            raise NegativeRadicand("sqrt of a negative tower element")
        if s == 0:
            return TowerElement(self.context, _ZERO)
        found = _try_sqrt(self.data, rads, self.context.height)
        if found is not None:
            root = TowerElement(self.context, found)
            return -root if root.sign() < 0 else root
        ctx = self.context.extended(self.data)
        return TowerElement(ctx, (ctx.height, _ZERO, _ONE))

    def approx(self, bits: int):
        """Rational interval (lo, hi) containing the value, hi-lo <= 2**-bits."""
        rads = self.context.radicands
        width = Fraction(1, 1 << bits)
        prec = max(bits + 2, 8)
        while True:
            lo, hi = _interval(self.data, rads, prec, {})
            if hi - lo <= width:
                return (lo, hi)
            prec *= 2

    def as_fraction(self) -> Fraction:
        """Exact rational value; ValueError when the element is irrational."""
        if type(self.data) is not tuple:
            return self.data
        collapsed = self._rational_probe()
        if collapsed is not None:
            return collapsed
        raise ValueError("tower element is not rational")

    def _rational_probe(self) -> Optional[Fraction]:
        # A redundant context can hide a rational value inside a tree;
        # probe by subtracting the interval midpoint guess exactly.
        lo, hi = self.approx(64)
        for guess in (lo, hi, (lo + hi) / 2):
            guess = Fraction(guess)
            if _sign(_sub(self.data, guess), self.context.radicands) == 0:
                return guess
        return None

    # -- serialization ------------------------------------------------

    def to_sexpr(self) -> str:
        parts = ["(tower (ctx"]
        for r in self.context.radicands:
            parts.append(" " + _data_to_sexpr(r))
        parts.append(") ")
        parts.append(_data_to_sexpr(self.data))
        parts.append(")")
        return "".join(parts)

    @classmethod
    def from_sexpr(cls, text: str) -> "TowerElement":
        tokens = _tokenize_sexpr(text)
        elem, rest = _parse_element(tokens)
        if rest:
            raise ValueError("trailing tokens after s-expression")
        return elem

    def __repr__(self):
        lo, hi = self.approx(20)
        mid = (lo + hi) / 2
        return f"TowerElement(~{float(mid):.9g}, height={self.context.height})"


# ---------------------------------------------------------------------------
# s-expression reader/writer (format documented in docs/formats.md)
# ---------------------------------------------------------------------------


def _data_to_sexpr(x) -> str:
    if type(x) is not tuple:
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x.numerator}/{x.denominator}"
    k, lo, hi = x
    return f"(rt {k} {_data_to_sexpr(lo)} {_data_to_sexpr(hi)})"


def _tokenize_sexpr(text: str):
    return text.replace("(", " ( ").replace(")", " ) ").split()


def _parse_element(tokens):
    if tokens[:2] != ["(", "tower"]:
        raise ValueError("expected (tower ...)")
    tokens = tokens[2:]
    if tokens[:2] != ["(", "ctx"]:
        raise ValueError("expected (ctx ...)")
    tokens = tokens[2:]
    radicands = []
    while tokens and tokens[0] != ")":
        tree, tokens = _parse_data(tokens)
        radicands.append(tree)
    if not tokens:
        raise ValueError("unterminated context")
    tokens = tokens[1:]
    data, tokens = _parse_data(tokens)
    if not tokens or tokens[0] != ")":
        raise ValueError("unterminated element")
    ctx = TowerContext(tuple(radicands))
    for idx, r in enumerate(ctx.radicands):
        if _tag(r) > idx:
            raise ValueError("radicand tagged above its level")
    if _tag(data) > ctx.height:
        raise ValueError("data tagged above the context height")
    return TowerElement(ctx, data), tokens[1:]


def _parse_data(tokens):
    if tokens[0] == "(":
        if tokens[1] != "rt":
            raise ValueError("expected (rt ...)")
        k = int(tokens[2])
        lo, tokens = _parse_data(tokens[3:])
        hi, tokens = _parse_data(tokens)
        if not tokens or tokens[0] != ")":
            raise ValueError("unterminated (rt ...)")
        if k < 1 or _tag(lo) >= k or _tag(hi) >= k:
            raise ValueError("ill-formed level tags")
        return _node(k, lo, hi), tokens[1:]
    return Fraction(tokens[0]), tokens[1:]
