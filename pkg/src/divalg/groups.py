"""Finite groups as verified multiplication tables.

``FiniteGroup`` wraps a finite set of element labels with a group law
and checks the axioms at construction: identity and inverses by
scanning, associativity by Light's test over a computed generating set,
which is equivalent to the full triple sweep.  ``SemidirectZnZm`` is the
split metacyclic family Z/m x Z/n in which the generator of Z/n acts on
Z/m by multiplication by a fixed unit q; these are the groups that arise
as unit-group quotients of valued division algebras.

Subgroup enumeration walks the lattice bottom up: every subgroup is the
closure of an already-found subgroup plus one element, and extensions by
two elements of the same right coset coincide, so one representative per
coset suffices.  Maximality falls out of the same walk (a proper H is
maximal iff every one-element extension generates the whole group) and
normality is a conjugation sweep.
"""

from __future__ import annotations

from .errors import BadAction, GroupTooLarge, NotAGroup

# Full axiom verification and lattice walks stay exact and affordable
# up to this order; beyond it constructions refuse rather than degrade.
ORDER_CAP = 512


class SubgroupRecord:
    """One subgroup of an enumerated lattice.

    ``generators`` is a chain found by the lattice walk (closure of the
    listed elements, empty for the trivial subgroup); ``members`` is the
    full element set, kept because callers cross-check containments.
    """

    __slots__ = ("generators", "members", "order", "index", "normal", "maximal")

    def __init__(self, generators, members, order, index, normal, maximal):
        self.generators = tuple(generators)
        self.members = frozenset(members)
        self.order = order
        self.index = index
        self.normal = normal
        self.maximal = maximal

    def __repr__(self):
        flags = []
        if self.normal:
            flags.append("normal")
        if self.maximal:
            flags.append("maximal")
        tag = " ".join(flags) if flags else "plain"
        return (
            f"SubgroupRecord(order={self.order}, index={self.index}, "
            f"{tag}, generators={list(self.generators)!r})"
        )


class FiniteGroup:
    """A finite group on explicit labels with a verified law.

    ``mul`` may be a callable on pairs of labels or a mapping from label
    pairs; it is expanded into an index table once.  Verification is
    exhaustive for the supported orders: the table must be a Latin
    square with two-sided identity and inverses, and Light's test
    certifies associativity (middle-associativity over a generating set
    propagates to all products, so the check covers every triple).
    """

    __slots__ = ("elements", "identity", "_index", "_table", "_inv", "_abelian")

    def __init__(self, elements, mul, check: bool = True):
        self.elements = tuple(elements)
        n = len(self.elements)
        if n == 0:
            raise NotAGroup("a group needs at least one element")
        if n > ORDER_CAP:
            raise GroupTooLarge(f"order {n} exceeds the cap {ORDER_CAP}")
        self._index = {g: i for i, g in enumerate(self.elements)}
        if len(self._index) != n:
            raise NotAGroup("duplicate element labels")
        if not callable(mul):
            table_map = dict(mul)
            mul = lambda a, b: table_map[(a, b)]
        idx = self._index
        table = []
        for a in self.elements:
            row = []
            for b in self.elements:
                c = mul(a, b)
                if c not in idx:
                    raise NotAGroup(f"product {a!r}*{b!r} leaves the set")
                row.append(idx[c])
            table.append(row)
        self._table = table
        self._abelian = None
        if check:
            self._verify()
        else:
            self.identity = self.elements[self._find_identity()]
            self._inv = self._find_inverses()

    # -- construction-time checks -------------------------------------

    def _find_identity(self) -> int:
        n = len(self.elements)
        straight = list(range(n))
        for e in range(n):
            if self._table[e] == straight and all(
                self._table[x][e] == x for x in range(n)
            ):
                return e
        raise NotAGroup("no two-sided identity")

    def _find_inverses(self):
        e = self._index[self.identity]
        inv = [None] * len(self.elements)
        for a, row in enumerate(self._table):
            try:
                b = row.index(e)
            except ValueError:
                raise NotAGroup("element without a right inverse") from None
            if self._table[b][a] != e:
                raise NotAGroup("right inverse is not a left inverse")
            inv[a] = b
        return inv

    def _verify(self):
        n = len(self.elements)
        full = set(range(n))
        for row in self._table:
            if set(row) != full:
                raise NotAGroup("a row is not a permutation")
        for col in zip(*self._table):
            if set(col) != full:
                raise NotAGroup("a column is not a permutation")
        self.identity = self.elements[self._find_identity()]
        self._inv = self._find_inverses()
        gens = self._greedy_generators()
        table = self._table
        for g in gens:
            rowg = table[g]
            for a in range(n):
                rowa = table[a]
                if [rowa[v] for v in rowg] != table[rowa[g]]:
                    raise NotAGroup("associativity fails (Light's test)")

    def _greedy_generators(self):
        n = len(self.elements)
        e = self._index[self.identity]
        known = {e}
        gens = []
        for x in range(n):
            if x in known:
                continue
            gens.append(x)
            known = self._close_indices(gens)
            if len(known) == n:
                break
        return gens

    def _close_indices(self, gens):
        """Subgroup generated by the given indices (worklist orbit)."""
        e = self._index[self.identity]
        out = {e}
        work = [e]
        table = self._table
        while work:
            z = work.pop()
            row = table[z]
            for g in gens:
                w = row[g]
                if w not in out:
                    out.add(w)
                    work.append(w)
        return out

    # -- group operations ---------------------------------------------

    @property
    def order(self) -> int:
        return len(self.elements)

    def mul(self, a, b):
        return self.elements[self._table[self._index[a]][self._index[b]]]

    def inv(self, a):
        return self.elements[self._inv[self._index[a]]]

    def power(self, a, k: int):
        if k < 0:
            a, k = self.inv(a), -k
        acc = self._index[self.identity]
        x = self._index[a]
        table = self._table
        while k:
            if k & 1:
                acc = table[acc][x]
            x = table[x][x]
            k >>= 1
        return self.elements[acc]

    def element_order(self, a) -> int:
        e = self._index[self.identity]
        x = self._index[a]
        table = self._table
        cur, k = x, 1
        while cur != e:
            cur = table[cur][x]
            k += 1
        return k

    def is_abelian(self) -> bool:
        if self._abelian is None:
            t = self._table
            n = len(t)
            self._abelian = all(
                t[i][j] == t[j][i] for i in range(n) for j in range(i)
            )
        return self._abelian

    def generated_by(self, labels):
        """Element set of the subgroup generated by the given labels."""
        gens = [self._index[a] for a in labels]
        return frozenset(self.elements[i] for i in self._close_indices(gens))

    def __contains__(self, a):
        return a in self._index

    def __iter__(self):
        return iter(self.elements)

    def __repr__(self):
        return f"FiniteGroup(order={self.order})"


class SemidirectZnZm(FiniteGroup):
    """Z/m extended by Z/n, the Z/n generator acting as u -> q*u.

    Elements are pairs (u mod m, i mod n) multiplied by
    (u, i)(u', i') = (u + q^i u' mod m, i + i' mod n); the action is a
    group action exactly when q^n = 1 mod m, which forces gcd(q, m) = 1.
    """

    __slots__ = ("m", "n", "q")

    def __init__(self, m: int, n: int, q: int):
        if m < 1 or n < 1:
            raise BadAction("moduli must be positive")
        q = q % m
        if pow(q, n, m) != 1 % m:
            raise BadAction(f"q^n = {q}^{n} is not 1 mod {m}")
        if m * n > ORDER_CAP:
            raise GroupTooLarge(f"order {m * n} exceeds the cap {ORDER_CAP}")
        qpow = [pow(q, i, m) for i in range(n)]
        elements = [(u, i) for u in range(m) for i in range(n)]

        def mul(a, b):
            return ((a[0] + qpow[a[1]] * b[0]) % m, (a[1] + b[1]) % n)

        super().__init__(elements, mul)
        self.m, self.n, self.q = m, n, q

    def __repr__(self):
        return f"SemidirectZnZm(m={self.m}, n={self.n}, q={self.q})"


def fg_semidirect(m: int, n: int, q: int) -> SemidirectZnZm:
    """The group Z/m x Z/n with the Z/n generator acting by q."""
    return SemidirectZnZm(m, n, q)


def fg_cyclic(m: int) -> SemidirectZnZm:
    """Z/m as a degenerate semidirect product (trivial action)."""
    return fg_semidirect(m, 1, 1)


def _lattice(G: FiniteGroup):
    """Breadth-first subgroup lattice walk over index space.

    Returns (members, gens, maximal) triples with members a frozenset of
    indices.  Every subgroup is reached: any H' properly containing a
    found H arises as closure(H + x) along a chain of single-element
    extensions, and only one x per right coset H x is tried because the
    closure depends only on that coset.
    """
    n = G.order
    table = G._table
    e = G._index[G.identity]
    abelian = G.is_abelian()
    trivial = frozenset([e])
    found = {trivial: 0}
    rows = [[trivial, (), False]]
    queue = [0]
    at = 0
    while at < len(queue):
        row = rows[queue[at]]
        at += 1
        members, gens, _ = row
        mlist = sorted(members)
        covered = set(members)
        all_full = True
        for x in range(n):
            if x in covered:
                continue
            if abelian:
                K = _extend_abelian(table, members, mlist, x)
            else:
                K = frozenset(G._close_indices(list(gens) + [x]))
            if len(K) < n:
                all_full = False
            if K not in found:
                found[K] = len(rows)
                rows.append([K, gens + (x,), False])
                queue.append(found[K])
            # mark the whole right coset H x as tried
            covered.update(table[h][x] for h in mlist)
        row[2] = all_full and len(members) < n
    return rows


def _extend_abelian(table, members, mlist, x):
    """closure(H + x) for abelian G: stack cosets x^j H until x^t lands in H."""
    out = list(mlist)
    px = x
    while px not in members:
        row = table[px]
        out.extend(row[h] for h in mlist)
        px = row[x]
    return frozenset(out)


def _is_normal(G: FiniteGroup, members) -> bool:
    table = G._table
    inv = G._inv
    for g in range(G.order):
        row = table[g]
        gi = inv[g]
        for h in members:
            if table[row[h]][gi] not in members:
                return False
    return True


def fg_subgroups(G: FiniteGroup):
    """Every subgroup of G exactly once, as SubgroupRecord instances.

    Output is sorted by (order, member indices) and is deterministic.
    """
    if G.order > ORDER_CAP:
        raise GroupTooLarge(f"order {G.order} exceeds the cap {ORDER_CAP}")
    abelian = G.is_abelian()
    records = []
    for members, gens, maximal in _lattice(G):
        order = len(members)
        if G.order % order != 0:
            raise NotAGroup("Lagrange violation in the lattice walk")
        normal = True if abelian else _is_normal(G, members)
        records.append(
            SubgroupRecord(
                generators=tuple(G.elements[i] for i in gens),
                members=frozenset(G.elements[i] for i in members),
                order=order,
                index=G.order // order,
                normal=normal,
                maximal=maximal,
            )
        )
    records.sort(key=lambda r: (r.order, sorted(G._index[m] for m in r.members)))
    return records


def fg_maximal(G: FiniteGroup):
    """The maximal subgroups of G, classified by index and normality."""
    return [r for r in fg_subgroups(G) if r.maximal]


def fg_iso_dihedral(G: FiniteGroup, k: int) -> bool:
    """Presentation check for the dihedral group of order 2k.

    True iff G contains r of order k and s of order 2 with
    s r s^-1 = r^-1 and ⟨r, s⟩ = G.  Since ⟨r⟩ already has index 2, any
    valid s outside ⟨r⟩ generates the rest; no closure is needed.
    """
    if G.order > ORDER_CAP:
        raise GroupTooLarge(f"order {G.order} exceeds the cap {ORDER_CAP}")
    if k < 1 or G.order != 2 * k:
        return False
    table = G._table
    inv = G._inv
    e = G._index[G.identity]
    twists = [s for s in range(G.order) if s != e and table[s][s] == e]
    for r in range(G.order):
        if G.element_order(G.elements[r]) != k:
            continue
        powers = set()
        cur = e
        for _ in range(k):
            powers.add(cur)
            cur = table[cur][r]
        ri = inv[r]
        for s in twists:
            if s in powers:
                continue
            if table[table[s][r]][inv[s]] == ri:
                return True
    return False
