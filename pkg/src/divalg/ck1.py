"""Norm-cokernel orders and divisibility criteria for maximal subgroups.

The multiplicative group of a quaternion division algebra over a
euclidean field surjects, via the reduced norm and the valuation, onto
abelian groups whose maximal subgroups are visible by elementary means.
This module computes the resulting invariants exactly: triviality of
the norm cokernel for the matrix sizes where the euclidean structure
decides it, the cokernel order contributed by a dyadic value group, and
certificates that odd-index normal maximal subgroups exist.  Alongside
sit brute-force verifiers for the three divisibility facts the argument
rests on, run over explicit finite abelian groups.
"""

from __future__ import annotations

from math import gcd

from .errors import GroupTooLarge, NotDivision, NotPrime, WrongModel
from .fieldmodels import PuiseuxField
from .groups import FiniteGroup, fg_maximal
from .towers import Sign

# Default caps: element count for explicit abelian groups, prime sweep
# bound for witness lists.
GROUP_CAP = 10**4
PRIME_BOUND = 97
ORDER_SEARCH_BOUND = 10**6


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _factorize(n: int):
    """Prime factorization as a list of (p, exponent) pairs, ascending."""
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


def _integer_root(n: int, k: int) -> int:
    """Floor of the k-th root of n >= 0, by integer Newton iteration."""
    if n < 2:
        return n
    x = 1 << ((n.bit_length() + k - 1) // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y


def is_rational_kth_power(value, k: int) -> bool:
    """Exact test for membership in the k-th powers of Q*.

    A reduced fraction is a k-th power iff numerator and denominator
    both are; each integer test is a floor root plus one multiplication.
    """
    from fractions import Fraction

    value = Fraction(value)
    if value == 0:
        return False
    if value < 0:
        if k % 2 == 0:
            return False
        value = -value
    for part in (value.numerator, value.denominator):
        r = _integer_root(part, k)
        if r**k != part:
            return False
    return True


class FiniteAbelianGroup:
    """A direct product of cyclic groups, written additively.

    Elements are coordinate tuples; ``image(k)`` is the subgroup k*A as
    an explicit frozenset, which is all the lattice arithmetic the
    divisibility checks need.
    """

    __slots__ = ("cyclic_orders", "cap", "_elements")

    def __init__(self, cyclic_orders, cap: int = GROUP_CAP):
        self.cyclic_orders = tuple(int(d) for d in cyclic_orders)
        if any(d < 2 for d in self.cyclic_orders):
            raise ValueError("cyclic orders must be at least 2")
        self.cap = cap
        if self.order > cap:
            raise GroupTooLarge(f"element count {self.order} exceeds cap {cap}")
        self._elements = None

    @property
    def order(self) -> int:
        total = 1
        for d in self.cyclic_orders:
            total *= d
        return total

    def exponent(self) -> int:
        e = 1
        for d in self.cyclic_orders:
            e = e * d // gcd(e, d)
        return e

    def elements(self):
        if self._elements is None:
            out = [()]
            for d in self.cyclic_orders:
                out = [x + (r,) for x in out for r in range(d)]
            self._elements = out
        return self._elements

    def image(self, k: int):
        """The subgroup k*A as a frozenset of coordinate tuples."""
        orders = self.cyclic_orders
        return frozenset(
            tuple((k * c) % d for c, d in zip(x, orders))
            for x in self.elements()
        )

    def to_group(self) -> FiniteGroup:
        orders = self.cyclic_orders

        def add(a, b):
            return tuple((x + y) % d for x, y, d in zip(a, b, orders))

        return FiniteGroup(self.elements(), add)

    def __repr__(self):
        if not self.cyclic_orders:
            return "FiniteAbelianGroup(trivial)"
        body = " x ".join(f"Z/{d}" for d in self.cyclic_orders)
        return f"FiniteAbelianGroup({body})"


class Ck1Report:
    """Order bound for one norm cokernel, with its provenance note."""

    __slots__ = ("t", "order_lower_bound", "exact_for_ideal_residue", "basis_note")

    def __init__(self, t, order_lower_bound, exact_for_ideal_residue, basis_note):
        self.t = t
        self.order_lower_bound = order_lower_bound
        self.exact_for_ideal_residue = exact_for_ideal_residue
        self.basis_note = basis_note

    def __repr__(self):
        return (
            f"Ck1Report(t={self.t}, order_lower_bound={self.order_lower_bound}, "
            f"exact_for_ideal_residue={self.exact_for_ideal_residue})"
        )


class Witness:
    """A concrete element certifying that some p-th power is missing."""

    __slots__ = ("element", "reason")

    def __init__(self, element: str, reason: str):
        self.element = element
        self.reason = reason

    def __repr__(self):
        return f"Witness({self.element!r}: {self.reason})"


def ck_quaternion_trivial(model, a, b, t: int) -> bool:
    """Whether the norm cokernel of the t x t matrix algebra is trivial.

    Over a euclidean base the cokernel for t in {1, 2} is trivial
    exactly when (a, b) presents the ordinary quaternion division
    algebra, i.e. both parameters are negative; the square factors are
    then removed explicitly (a = -s**2, b = -u**2), exhibiting the
    equivalence with (-1, -1).  Nonnegative parameters split the
    algebra, which is reported as NotDivision rather than a verdict.
    """
    if t not in (1, 2):
        raise ValueError("triviality is decided here for t = 1 and t = 2 only")
    a = model.ensure(a)
    b = model.ensure(b)
    if model.sign(a) != Sign.NEGATIVE:
        raise NotDivision("first parameter is a square times a nonnegative unit")
    if model.sign(b) != Sign.NEGATIVE:
        raise NotDivision("second parameter is a square times a nonnegative unit")
    # both square roots exist in a euclidean model; computing them is the
    # change of presentation onto (-1, -1)
    model.sqrt(-a)
    model.sqrt(-b)
    return True


def _odd_part(t: int) -> int:
    while t % 2 == 0:
        t //= 2
    return t


def ck_mt_order(model, t: int) -> Ck1Report:
    """Cokernel order bound for the t x t matrices over the series model.

    The value group is the dyadic rationals, so its quotient by t-fold
    multiples has order equal to the odd part of t; positive units
    contribute nothing when the coefficient field makes them t-divisible
    (the report stays a certified lower bound otherwise).
    """
    if not isinstance(model, PuiseuxField):
        raise WrongModel("order bounds via the value group need the series model")
    if t < 1:
        raise ValueError("matrix size must be positive")
    odd = _odd_part(t)
    note = (
        f"value group Z[1/2] maps onto Z/{odd} under v -> v mod {t}; "
        "exact when positive residue units are t-divisible, lower bound "
        "otherwise"
    )
    return Ck1Report(
        t=t,
        order_lower_bound=odd,
        exact_for_ideal_residue=True,
        basis_note=note,
    )


def ck_normal_primes(model, bound: int = PRIME_BOUND):
    """Certified odd primes p with a normal maximal subgroup of index p.

    For the series model the uniformizer x has valuation 1, never a
    multiple of p, so x is not a p-th power times a unit.  For the
    constructible model the rational 2 is not a p-th power in Q for odd
    p (exact integer root test), and p-th power status transfers along
    the inclusion of Q.  The prime 2 is deliberately absent: over a
    euclidean base every positive element is a square, so no index-2
    normal subgroup arises this way.
    """
    out = []
    for p in range(3, bound + 1):
        if not _is_prime(p):
            continue
        if isinstance(model, PuiseuxField):
            witness = Witness(
                "x",
                f"v(x) = 1 is nonzero mod {p}, so x is not a power of "
                f"exponent {p} times a unit",
            )
        else:
            if is_rational_kth_power(2, p):
                continue  # cannot happen for odd p; kept as an honest guard
            witness = Witness(
                "2",
                f"2 has no rational root of exponent {p} "
                f"(integer root test: 1**{p} < 2 < 2**{p})",
            )
        out.append((p, witness))
    return out


def ck_lemma2_finite(A: FiniteAbelianGroup):
    """Maximal subgroups of an explicit finite abelian group.

    Enumerates the full subgroup lattice and returns the maximal members
    together with the verdict that each has prime index.  A nontrivial
    group always yields a nonempty list; the trivial group has none.
    """
    recs = fg_maximal(A.to_group())
    all_prime = all(_is_prime(r.index) for r in recs)
    return recs, all_prime


def ck_lemma11(A: FiniteAbelianGroup, n: int, k_max: int):
    """Both sides of the n-fold divisibility equivalence, brute force.

    lhs: nA = nkA for every k up to k_max.  For finite A this decides
    the unbounded statement once k_max reaches the exponent e of A:
    the inclusion nkA <= nA always holds, and k = e forces nA = neA = 0,
    after which every nkA is squeezed between 0 and nA.
    rhs: with n = prod p_i^{r_i}, each p_i^{r_i} A = p_i^{r_i+1} A, and
    qA = A for every other prime q.  Primes beyond the exponent act as
    units modulo every cyclic order, so sweeping q up to max(|A|, n)
    covers them all.
    """
    if n < 2:
        raise ValueError("the multiplier n must be at least 2")
    if k_max < 1:
        raise ValueError("k_max must be positive")
    nA = A.image(n)
    lhs = all(A.image(n * k) == nA for k in range(2, k_max + 1))
    factors = _factorize(n)
    rhs = all(
        A.image(p**r) == A.image(p ** (r + 1)) for p, r in factors
    )
    if rhs:
        full = A.image(1)
        used = {p for p, _ in factors}
        for q in range(2, max(A.order, n) + 1):
            if not _is_prime(q) or q in used:
                continue
            if A.image(q) != full:
                rhs = False
                break
    return lhs, rhs, lhs == rhs


def ck_lemma12(m: int, p: int, r: int):
    """Power-stability versus torsion generation on a cyclic group.

    The model group is Z/m written multiplicatively.  lhs: the p^r-th
    powers coincide with the p^(r+1)-th powers.  rhs: the elements of
    order dividing p^r together with all p-th powers generate the whole
    group; the generated subgroup is closed by an explicit worklist, not
    by gcd shortcuts.
    """
    if m < 2:
        raise ValueError("cyclic order must be at least 2")
    if not _is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if r < 1:
        raise ValueError("the exponent r must be positive")
    powers_r = {(p**r * x) % m for x in range(m)}
    powers_r1 = {(p ** (r + 1) * x) % m for x in range(m)}
    lhs = powers_r == powers_r1
    torsion = {x for x in range(m) if (x * p**r) % m == 0}
    seed = torsion | {(p * x) % m for x in range(m)}
    closed = set(seed)
    work = list(seed)
    while work:
        z = work.pop()
        for s in seed:
            w = (z + s) % m
            if w not in closed:
                closed.add(w)
                work.append(w)
    rhs = len(closed) == m
    return lhs, rhs, lhs == rhs


def abelian_universe(max_order: int):
    """Every finite abelian group of order up to max_order, once each.

    Enumerated by factoring each order and partitioning the exponent of
    every prime: a partition e = a_1 + ... + a_k contributes cyclic
    factors p**a_i.  Deterministic order; includes the trivial group.
    """

    def partitions(k, mx):
        if k == 0:
            yield ()
            return
        for first in range(min(k, mx), 0, -1):
            for rest in partitions(k - first, first):
                yield (first,) + rest

    for order in range(1, max_order + 1):
        per_prime = []
        for p, e in _factorize(order):
            per_prime.append([[p**a for a in pt] for pt in partitions(e, e)])
        combos = [[]]
        for options in per_prime:
            combos = [got + pick for got in combos for pick in options]
        for orders in combos:
            yield FiniteAbelianGroup(orders)


def ck_mu_in_limit_field(p: int, q: int):
    """Root-of-unity membership in the prime-to-p closure of F_p.

    The field is the union of the finite extensions of F_p of degree
    prime to p.  The q-th roots of unity live in the extension of
    degree d = ord(p mod q), so they lie in the union iff p does not
    divide d.  Returns (d, membership).
    """
    if not _is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if not _is_prime(q):
        raise NotPrime(f"{q} is not prime")
    if p == q:
        raise ValueError("the two primes must be distinct")
    if q > ORDER_SEARCH_BOUND:
        raise ValueError(f"q exceeds the search bound {ORDER_SEARCH_BOUND}")
    d = 1
    cur = p % q
    while cur != 1:
        cur = (cur * p) % q
        d += 1
    return d, d % p != 0
