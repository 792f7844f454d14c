"""Truncated unramified l-adic fields and the cyclic division algebra.

An ``UnramifiedField`` is Z_l[t]/(h) computed modulo l**N, with h monic
and irreducible mod l; it stands in for the unramified extension whose
residue field is F_l[t]/(h mod l).  The Frobenius generator of the
relative Galois group is produced by Hensel-lifting the q-power map on
the residue field.  On top sits the cyclic algebra with basis x^i over
the big field, twisted by x c x^-1 = sigma(c) and x^n = l, together
with its (1/n)Z-valued valuation and the finite quotient of its unit
group, which lands in an explicit semidirect product.

All equalities here are "to precision N": residues and valuations below
N are exact, which is all the quotient structure depends on.
"""

from __future__ import annotations

import random
from math import gcd

from .errors import (
    GroupTooLarge,
    NoIrreducible,
    NotPrime,
    PrecisionExhausted,
    WrongAlgebra,
)
from .groups import SemidirectZnZm, fg_iso_dihedral, fg_maximal, fg_semidirect

DEFAULT_PRECISION = 20
# discrete-log tables are materialized in full; beyond this residue size
# the quotient bookkeeping refuses rather than thrash
RESIDUE_CAP = 2 * 10**5


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _prime_power(q: int):
    """(l, m) with q = l**m, or NotPrime when q is not a prime power."""
    if q < 2:
        raise NotPrime(f"{q} is not a prime power")
    d = 2
    while d * d <= q:
        if q % d == 0:
            m = 0
            while q % d == 0:
                q //= d
                m += 1
            if q != 1:
                raise NotPrime("more than one prime divides q")
            return d, m
        d += 1
    return q, 1


# ---------------------------------------------------------------------------
# polynomial helpers over F_l (dense coefficient lists, low degree first)
# ---------------------------------------------------------------------------


def _fp_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_mulmod(a, b, h, ell):
    d = len(h) - 1
    conv = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                conv[i + j] = (conv[i + j] + ai * bj) % ell
    for k in range(len(conv) - 1, d - 1, -1):
        c = conv[k]
        if c:
            for j in range(d + 1):
                conv[k - d + j] = (conv[k - d + j] - c * h[j]) % ell
    return _fp_trim(conv[:d])

def _fp_powmod(a, e, h, ell):
    out = [1]
    base = list(a)
    while e:
        if e & 1:
            out = _fp_mulmod(out, base, h, ell)
        base = _fp_mulmod(base, base, h, ell)
        e >>= 1
    return out


def _fp_divmod(a, b, ell):
    a = list(a)
    binv = pow(b[-1], -1, ell)
    quot = [0] * max(1, len(a) - len(b) + 1)
    for k in range(len(a) - len(b), -1, -1):
        c = (a[k + len(b) - 1] * binv) % ell
        if c:
            quot[k] = c
            for j, bj in enumerate(b):
                a[k + j] = (a[k + j] - c * bj) % ell
    return _fp_trim(quot), _fp_trim(a[: len(b) - 1])


def _fp_gcd(a, b, ell):
    a, b = list(a), list(b)
    while b:
        _, r = _fp_divmod(a, b, ell)
        a, b = b, r
    return a


def _fp_irreducible(h, ell):
    """Rabin test: h (monic, degree d) is irreducible over F_l."""
    d = len(h) - 1
    if d < 1:
        return False
    t = [0, 1]
    tred = _fp_divmod(t, h, ell)[1] if d == 1 else t
    frob = _fp_powmod(t, ell**d, h, ell)
    if _fp_trim(list(frob)) != tred:
        return False
    for p in {p for p, _ in _factorize(d)}:
        probe = _fp_powmod(t, ell ** (d // p), h, ell)
        diff = [(x - y) % ell for x, y in _pad(probe, t)]
        g = _fp_gcd(h, _fp_trim(diff), ell)
        if len(g) - 1 > 0:
            return False
    return True


def _pad(a, b):
    n = max(len(a), len(b))
    return zip(a + [0] * (n - len(a)), b + [0] * (n - len(b)))


def _factorize(n: int):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1
    if n > 1:
        out.append((n, 1))
    return out


def _search_modulus(ell: int, degree: int):
    """First monic irreducible of the given degree over F_l.

    Candidates t^d + c_{d-1} t^{d-1} + ... + c_0 are ordered by the
    integer sum(c_i * l**i); the search is deterministic and always
    terminates for prime l (counting argument), so the exception only
    guards corrupt input.
    """
    for code in range(ell**degree):
        coeffs = []
        k = code
        for _ in range(degree):
            coeffs.append(k % ell)
            k //= ell
        h = coeffs + [1]
        if _fp_irreducible(h, ell):
            return h
    raise NoIrreducible(f"no irreducible of degree {degree} over F_{ell}")


# ---------------------------------------------------------------------------
# the truncated unramified field
# ---------------------------------------------------------------------------


class UnramifiedField:
    """Z_l[t]/(h) modulo l**N; elements are coefficient tuples.

    The modulus is monic of degree equal to the field degree and
    irreducible mod l, so the residue ring is the finite field with
    l**degree elements and every element with a unit coordinate is
    invertible.
    """

    __slots__ = ("ell", "degree", "precision", "modulus", "scale")

    def __init__(self, ell: int, degree: int, precision: int, modulus=None):
        if not _is_prime(ell):
            raise NotPrime(f"{ell} is not prime")
        if degree < 1 or precision < 1:
            raise ValueError("degree and precision must be positive")
        self.ell = ell
        self.degree = degree
        self.precision = precision
        self.scale = ell**precision
        if modulus is None:
            modulus = _search_modulus(ell, degree)
        modulus = tuple(int(c) % self.scale for c in modulus)
        if len(modulus) != degree + 1 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of the field degree")
        if not _fp_irreducible([c % ell for c in modulus], ell):
            raise NoIrreducible("modulus is reducible mod l")
        self.modulus = modulus

    # -- element plumbing ---------------------------------------------

    def element(self, coeffs):
        coeffs = list(coeffs)
        if len(coeffs) > self.degree:
            raise ValueError("too many coordinates")
        coeffs += [0] * (self.degree - len(coeffs))
        return tuple(int(c) % self.scale for c in coeffs)

    def zero(self):
        return (0,) * self.degree

    def one(self):
        return self.element([1])

    def gen(self):
        if self.degree == 1:
            # t is congruent to the negated constant term of the modulus
            return self.element([-self.modulus[0]])
        return self.element([0, 1])

    def add(self, a, b):
        M = self.scale
        return tuple((x + y) % M for x, y in zip(a, b))

    def sub(self, a, b):
        M = self.scale
        return tuple((x - y) % M for x, y in zip(a, b))

    def neg(self, a):
        M = self.scale
        return tuple((-x) % M for x in a)

    def smul(self, c, a):
        M = self.scale
        return tuple((c * x) % M for x in a)

    def mul(self, a, b):
        d = self.degree
        M = self.scale
        conv = [0] * (2 * d - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    conv[i + j] += ai * bj
        h = self.modulus
        for k in range(2 * d - 2, d - 1, -1):
            c = conv[k] % M
            if c:
                for j in range(d + 1):
                    conv[k - d + j] -= c * h[j]
        return tuple(v % M for v in conv[:d])

    def pow(self, a, e: int):
        out = self.one()
        base = a
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    # -- valuation and units ------------------------------------------

    def val(self, a):
        """Min l-adic valuation over coordinates; None when a = 0 mod l**N."""
        best = None
        for c in a:
            if c == 0:
                continue
            v = 0
            while c % self.ell == 0:
                c //= self.ell
                v += 1
            if best is None or v < best:
                best = v
                if best == 0:
                    break
        return best

    def residue(self, a):
        return tuple(c % self.ell for c in a)

    def unit_part(self, a):
        """(k, u) with a = l**k * u and u a unit; needs a nonzero mod l**N."""
        k = self.val(a)
        if k is None:
            raise PrecisionExhausted(
                "element vanishes to working precision", order=self.precision
            )
        p = self.ell**k
        return k, tuple(c // p % self.scale for c in a)

    def invert(self, a):
        """Inverse of a unit, by residue Euclid plus Newton lifting."""
        if self.val(a) != 0:
            raise ValueError("only units are invertible at fixed precision")
        ell = self.ell
        hbar = [c % ell for c in self.modulus]
        abar = _fp_trim([c % ell for c in a])
        # extended Euclid over F_l[t] for the residue inverse
        r0, r1 = list(hbar), list(abar)
        s0, s1 = [], [1]
        while r1:
            qout, r2 = _fp_divmod(r0, r1, ell)
            prod = [0] * (len(qout) + len(s1) - 1) if qout and s1 else []
            for i, qi in enumerate(qout):
                if qi:
                    for j, sj in enumerate(s1):
                        prod[i + j] = (prod[i + j] + qi * sj) % ell
            s2 = _fp_trim([(x - y) % ell for x, y in _pad(s0, prod)])
            r0, r1, s0, s1 = r1, r2, s1, s2
        lead = pow(r0[-1], -1, ell)
        inv0 = self.element([(c * lead) % ell for c in s0])
        # Newton doubling: v <- v (2 - a v) until exact at precision
        v = inv0
        for _ in range(self.precision.bit_length() + 2):
            av = self.mul(a, v)
            if av == self.one():
                return v
            v = self.mul(v, self.sub(self.smul(2, self.one()), av))
        raise AssertionError("unit inversion failed to converge")

    def render(self, a) -> str:
        parts = []
        for i, c in enumerate(a):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            elif i == 1:
                parts.append(f"{c}*t" if c != 1 else "t")
            else:
                parts.append(f"{c}*t^{i}" if c != 1 else f"t^{i}")
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return (
            f"UnramifiedField(ell={self.ell}, degree={self.degree}, "
            f"precision={self.precision})"
        )


class FrobeniusMap:
    """A field map t -> image_of_generator, applied coefficientwise.

    Scalars are fixed; the generator goes to the stored conjugate root
    of the modulus, so application is evaluation at that root.
    """

    __slots__ = ("field", "image_of_generator", "_powers")

    def __init__(self, field: UnramifiedField, image_of_generator):
        self.field = field
        self.image_of_generator = image_of_generator
        powers = [field.one()]
        for _ in range(1, field.degree):
            powers.append(field.mul(powers[-1], image_of_generator))
        self._powers = powers

    def __call__(self, a):
        f = self.field
        out = f.zero()
        for c, pw in zip(a, self._powers):
            if c:
                out = f.add(out, f.smul(c, pw))
        return out

    def __repr__(self):
        return f"FrobeniusMap(t -> {self.field.render(self.image_of_generator)})"


def _hensel_root(field: UnramifiedField, start):
    """Newton-lift start to a root of the modulus; start must be simple mod l."""
    h = field.modulus
    d = field.degree
    hprime = [(i * h[i]) for i in range(1, d + 1)]

    def eval_scalar_poly(coeffs, z):
        acc = field.zero()
        for c in reversed(coeffs):
            acc = field.mul(acc, z)
            acc = field.add(acc, field.element([c]))
        return acc

    z = start
    for _ in range(field.precision.bit_length() + 2):
        hz = eval_scalar_poly(list(h), z)
        if all(c == 0 for c in hz):
            return z
        dz = field.mul(hz, field.invert(eval_scalar_poly(hprime, z)))
        z = field.sub(z, dz)
    raise AssertionError("Hensel iteration failed to converge")


# ---------------------------------------------------------------------------
# the cyclic algebra context
# ---------------------------------------------------------------------------


class CyclicAlgebra:
    """Context for D = sum of L x^i with x c x^-1 = sigma(c), x^n = l.

    Iterating yields (F, L, sigma) so construction sites can unpack the
    classical triple; the context itself travels with every element.
    """

    __slots__ = ("ell", "m", "n", "precision", "F", "L", "sigma", "_sigmas",
                 "_dlog", "_dlog_gen")

    def __init__(self, ell: int, m: int, n: int, precision: int):
        self.ell = ell
        self.m = m
        self.n = n
        self.precision = precision
        self.F = UnramifiedField(ell, m, precision)
        self.L = UnramifiedField(ell, m * n, precision)
        q = ell**m
        residue_start = _fp_powmod([0, 1], q, [c % ell for c in self.L.modulus], ell)
        z = _hensel_root(self.L, self.L.element(list(residue_start)))
        self.sigma = FrobeniusMap(self.L, z)
        sigmas = [FrobeniusMap(self.L, self.L.gen())]
        for _ in range(1, n):
            sigmas.append(FrobeniusMap(self.L, self.sigma(sigmas[-1].image_of_generator)))
        self._sigmas = sigmas
        if n > 1 and self.sigma(sigmas[-1].image_of_generator) != self.L.gen():
            raise AssertionError("Frobenius power n is not the identity")
        self._dlog = None
        self._dlog_gen = None

    def __iter__(self):
        return iter((self.F, self.L, self.sigma))

    @property
    def q(self) -> int:
        return self.ell**self.m

    @property
    def subgroup_modulus(self) -> int:
        return (self.q**self.n - 1) // (self.q - 1) if self.q > 1 else 1

    # -- elements ------------------------------------------------------

    def element(self, coeffs) -> "CyclicAlgElement":
        coeffs = list(coeffs)
        if len(coeffs) > self.n:
            raise ValueError("too many x-coordinates")
        coeffs += [0] * (self.n - len(coeffs))
        fixed = []
        for c in coeffs:
            if isinstance(c, tuple):
                fixed.append(self.L.element(c))
            elif isinstance(c, (list, int)):
                fixed.append(self.L.element(c if isinstance(c, list) else [c]))
            else:
                raise TypeError("coefficients must be L elements or integers")
        return CyclicAlgElement(self, fixed)

    def one(self) -> "CyclicAlgElement":
        return self.element([1])

    def x(self) -> "CyclicAlgElement":
        if self.n == 1:
            return self.element([self.ell])
        return self.element([0, 1])

    def random_unit(self, rng: random.Random) -> "CyclicAlgElement":
        """A random element with at least one unit L-coordinate."""
        while True:
            coeffs = [
                tuple(rng.randrange(self.L.scale) for _ in range(self.L.degree))
                for _ in range(self.n)
            ]
            if any(self.L.val(c) == 0 for c in coeffs):
                return CyclicAlgElement(self, coeffs)

    # -- the residue discrete log -------------------------------------

    def _residue_table(self):
        if self._dlog is not None:
            return self._dlog_gen, self._dlog
        size = self.q**self.n - 1
        if size > RESIDUE_CAP:
            raise GroupTooLarge(f"residue group of order {size} exceeds cap")
        ell = self.ell
        hbar = [c % ell for c in self.L.modulus]
        d = self.L.degree
        factors = [p for p, _ in _factorize(size)] if size > 1 else []
        gen = None
        for code in range(1, ell**d):
            coeffs = []
            k = code
            for _ in range(d):
                coeffs.append(k % ell)
                k //= ell
            cand = _fp_trim(list(coeffs))
            if all(
                _fp_powmod(cand, size // p, hbar, ell) != [1] for p in factors
            ):
                gen = cand
                break
        if gen is None:
            raise NoIrreducible("no primitive residue element found")
        table = {}
        cur = [1]
        for e in range(size):
            table[tuple(cur) + (0,) * (d - len(cur))] = e
            cur = _fp_mulmod(cur, gen, hbar, ell)
        self._dlog_gen = gen
        self._dlog = table
        return gen, table

    def __repr__(self):
        return (
            f"CyclicAlgebra(ell={self.ell}, m={self.m}, n={self.n}, "
            f"precision={self.precision})"
        )


class CyclicAlgElement:
    """An element sum c_i x^i of the cyclic algebra, c_i in L."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: CyclicAlgebra, coeffs):
        self.ctx = ctx
        self.coeffs = tuple(coeffs)

    def __mul__(self, other):
        if not isinstance(other, CyclicAlgElement):
            return NotImplemented
        return ca_mul(self, other, self.ctx)

    def __add__(self, other):
        if not isinstance(other, CyclicAlgElement):
            return NotImplemented
        if other.ctx is not self.ctx:
            raise WrongAlgebra("operands from different algebra contexts")
        L = self.ctx.L
        return CyclicAlgElement(
            self.ctx, [L.add(a, b) for a, b in zip(self.coeffs, other.coeffs)]
        )

    def __eq__(self, other):
        if not isinstance(other, CyclicAlgElement):
            return NotImplemented
        return self.ctx is other.ctx and self.coeffs == other.coeffs

    __hash__ = None

    def __repr__(self):
        L = self.ctx.L
        parts = []
        for i, c in enumerate(self.coeffs):
            if all(v == 0 for v in c):
                continue
            body = L.render(c)
            if i == 0:
                parts.append(f"({body})")
            elif i == 1:
                parts.append(f"({body})*x")
            else:
                parts.append(f"({body})*x^{i}")
        return " + ".join(parts) if parts else "0"


class ValueFrac:
    """A value in (1/n)Z, kept over the fixed denominator n.

    Overflow past the working precision is signalled by the valuation
    operation raising, not by a sentinel value here.
    """

    __slots__ = ("numerator", "denominator")

    def __init__(self, numerator: int, denominator: int):
        self.numerator = numerator
        self.denominator = denominator

    def as_fraction(self):
        from fractions import Fraction

        return Fraction(self.numerator, self.denominator)

    def __add__(self, other):
        if not isinstance(other, ValueFrac):
            return NotImplemented
        if self.denominator == other.denominator:
            return ValueFrac(self.numerator + other.numerator, self.denominator)
        d = self.denominator * other.denominator // gcd(
            self.denominator, other.denominator
        )
        return ValueFrac(
            self.numerator * (d // self.denominator)
            + other.numerator * (d // other.denominator),
            d,
        )

    def __eq__(self, other):
        if isinstance(other, ValueFrac):
            return self.as_fraction() == other.as_fraction()
        return self.as_fraction() == other

    __hash__ = None

    def __repr__(self):
        return f"ValueFrac({self.numerator}/{self.denominator})"


# ---------------------------------------------------------------------------
# the operations
# ---------------------------------------------------------------------------


def ca_make(ell: int, m: int, n: int, N: int = DEFAULT_PRECISION) -> CyclicAlgebra:
    """Build the degree-m base, its degree-n extension, and the Frobenius.

    The returned context unpacks as (F, L, sigma): F unramified of
    degree m over Q_l, L of relative degree n over F, sigma the
    generator of the relative Galois group, Hensel-lifted so that its
    residue action is the q-power map with q = l**m.
    """
    if m < 1 or n < 1:
        raise ValueError("degrees must be positive")
    if N < 1:
        raise ValueError("precision must be positive")
    return CyclicAlgebra(ell, m, n, N)


def ca_mul(a: CyclicAlgElement, b: CyclicAlgElement, ctx: CyclicAlgebra):
    """Twisted product: (c x^i)(c' x^j) = c sigma^i(c') x^{i+j}, x^n = l."""
    if a.ctx is not ctx or b.ctx is not ctx:
        raise WrongAlgebra("operands from different algebra contexts")
    L = ctx.L
    n = ctx.n
    out = [L.zero() for _ in range(n)]
    for i, ci in enumerate(a.coeffs):
        if all(v == 0 for v in ci):
            continue
        twist = ctx._sigmas[i]
        for j, cj in enumerate(b.coeffs):
            if all(v == 0 for v in cj):
                continue
            term = L.mul(ci, twist(cj))
            k = i + j
            if k >= n:
                k -= n
                term = L.smul(ctx.ell, term)
            out[k] = L.add(out[k], term)
    return CyclicAlgElement(ctx, out)


def ca_valuation(a: CyclicAlgElement, ctx: CyclicAlgebra) -> ValueFrac:
    """min over i of v(c_i) + i/n, as a fraction over n."""
    if a.ctx is not ctx:
        raise WrongAlgebra("element from a different algebra context")
    best = None
    for i, c in enumerate(a.coeffs):
        v = ctx.L.val(c)
        if v is None:
            continue
        num = v * ctx.n + i
        if best is None or num < best:
            best = num
    if best is None:
        raise PrecisionExhausted(
            "all coordinates vanish to working precision", order=ctx.precision
        )
    return ValueFrac(best, ctx.n)


def ca_quotient_image(a: CyclicAlgElement, ctx: CyclicAlgebra):
    """Image of a unit in the finite quotient of the algebra's unit group.

    The quotient splits as (residue units modulo base residue units)
    extended by the value group mod 1; the first coordinate is the
    discrete log of the leading coefficient's residue against the fixed
    generator, reduced mod (q^n - 1)/(q - 1), the second is n v(a) mod n.
    Returns the element label of the matching SemidirectZnZm group.
    """
    v = ca_valuation(a, ctx)
    i0 = v.numerator % ctx.n
    # the minimum is attained at a unique i because the fractional parts
    # i/n are pairwise distinct
    k, unit = ctx.L.unit_part(a.coeffs[i0])
    _, table = ctx._residue_table()
    e = table[ctx.L.residue(unit)]
    return (e % ctx.subgroup_modulus, i0)


def ca_quotient_group(q: int, n: int) -> SemidirectZnZm:
    """The semidirect quotient for residue size q and degree n."""
    ell, m = _prime_power(q)
    modulus = (q**n - 1) // (q - 1)
    return fg_semidirect(modulus, n, q % modulus if modulus > 1 else 0)


class CaReport:
    """Structure report for one (q, n) quotient, with render helpers."""

    __slots__ = (
        "q", "n", "ell", "m", "precision", "seed", "group", "expected_order",
        "order_ok", "dihedral_k", "dihedral_ok", "maximal", "coverage_ok",
        "samples_used", "sample_budget",
    )

    def __init__(self, **kw):
        for name in self.__slots__:
            setattr(self, name, kw[name])

    def all_ok(self) -> bool:
        checks = [self.order_ok, self.coverage_ok]
        if self.dihedral_ok is not None:
            checks.append(self.dihedral_ok)
        return all(checks)

    def rows(self):
        """Maximal-subgroup table as plain tuples (order, index, normal, count)."""
        from collections import Counter

        tally = Counter((r.order, r.index, r.normal) for r in self.maximal)
        return [
            (order, index, normal, count)
            for (order, index, normal), count in sorted(tally.items())
        ]

    def to_dict(self):
        return {
            "q": self.q,
            "n": self.n,
            "ell": self.ell,
            "m": self.m,
            "precision": self.precision,
            "seed": self.seed,
            "group_order": self.group.order,
            "expected_order": self.expected_order,
            "order_ok": self.order_ok,
            "dihedral_k": self.dihedral_k,
            "dihedral_ok": self.dihedral_ok,
            "maximal_subgroups": [
                {
                    "order": order,
                    "index": index,
                    "normal": normal,
                    "count": count,
                }
                for order, index, normal, count in self.rows()
            ],
            "coverage_ok": self.coverage_ok,
            "samples_used": self.samples_used,
        }

    def to_markdown(self) -> str:
        lines = [
            f"# Quotient report: q = {self.q}, n = {self.n}",
            "",
            f"- base prime {self.ell}, residue degree {self.m}, "
            f"precision {self.precision}, seed {self.seed}",
            f"- group order {self.group.order} "
            f"(expected {self.expected_order}): "
            f"{'ok' if self.order_ok else 'MISMATCH'}",
        ]
        if self.dihedral_k is not None:
            verdict = "ok" if self.dihedral_ok else "NOT DIHEDRAL"
            lines.append(
                f"- dihedral of order 2*{self.dihedral_k}: {verdict}"
            )
        lines.append(
            f"- sampled images generate the full group: "
            f"{'ok' if self.coverage_ok else 'FAILED'} "
            f"({self.samples_used} samples)"
        )
        lines += ["", "| order | index | normal | count |", "|---|---|---|---|"]
        for order, index, normal, count in self.rows():
            lines.append(
                f"| {order} | {index} | {'yes' if normal else 'no'} | {count} |"
            )
        return "\n".join(lines)

    def to_csv(self) -> str:
        lines = ["order,index,normal,count"]
        for order, index, normal, count in self.rows():
            lines.append(f"{order},{index},{'yes' if normal else 'no'},{count}")
        return "\n".join(lines)


def ca_report(q: int, n: int, precision: int = DEFAULT_PRECISION,
              seed: int = 0, sample_budget: int = 2000) -> CaReport:
    """Assemble the quotient-structure report for one (q, n).

    Cross-checks the abstract group against the algebra: the order must
    match the exact-sequence count, the n = 2 case must be dihedral, and
    images of randomly sampled units must generate the whole quotient.
    """
    ell, m = _prime_power(q)
    G = ca_quotient_group(q, n)
    expected = ((q**n - 1) // (q - 1)) * n
    ctx = ca_make(ell, m, n, precision)
    rng = random.Random(seed)
    seen = {ca_quotient_image(ctx.x(), ctx), ca_quotient_image(ctx.one(), ctx)}
    used = 0
    covered = G.generated_by(seen)
    while used < sample_budget and len(covered) < G.order:
        seen.add(ca_quotient_image(ctx.random_unit(rng), ctx))
        used += 1
        if used % 25 == 0 or used == sample_budget:
            covered = G.generated_by(seen)
    covered = G.generated_by(seen)
    return CaReport(
        q=q,
        n=n,
        ell=ell,
        m=m,
        precision=precision,
        seed=seed,
        group=G,
        expected_order=expected,
        order_ok=G.order == expected,
        dihedral_k=q + 1 if n == 2 else None,
        dihedral_ok=fg_iso_dihedral(G, q + 1) if n == 2 else None,
        maximal=fg_maximal(G),
        coverage_ok=len(covered) == G.order,
        samples_used=used,
        sample_budget=sample_budget,
    )
