"""Batch command line: verification suites, climbs, and quotient tables.

Four subcommands.  ``climb`` produces and checks an explicit group word
carrying i to a requested pure quaternion; ``dihedral`` prints the
finite-quotient report of the cyclic division algebra; ``ck1`` prints
the norm-cokernel table with its witness list; ``verify`` runs the
property suites of every module and reports PASS/FAIL per invariant.

Every run is a pure function of its flags: all randomness is drawn from
generators seeded with the ``--seed`` value and the check name, so two
invocations with identical flags produce byte-identical output, also
when suites are fanned out across worker threads.

Exit codes: 0 success, 1 verification failure or bad input, 2 the climb
generator already lies in the subgroup, 3 precision exhausted at the
maximal working order, 4 group too large.  The ``DIVALG_PRECISION``
environment variable overrides the default truncation precision of the
``dihedral`` subcommand.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

from .ck1 import (
    FiniteAbelianGroup,
    PRIME_BOUND,
    abelian_universe,
    ck_lemma2_finite,
    ck_lemma11,
    ck_lemma12,
    ck_mt_order,
    ck_mu_in_limit_field,
    ck_normal_primes,
    ck_quaternion_trivial,
)
from .cyclic import (
    DEFAULT_PRECISION,
    ca_make,
    ca_mul,
    ca_quotient_group,
    ca_quotient_image,
    ca_report,
    ca_valuation,
)
from .errors import (
    GroupTooLarge,
    NotDivision,
    NotPrime,
    NotUnit,
    PrecisionExhausted,
    WrongAlgebra,
    YInG,
    ZeroValuation,
)
from .fieldmodels import CONSTRUCTIBLE, PuiseuxField
from .groups import fg_cyclic, fg_iso_dihedral, fg_semidirect, fg_subgroups
from .maxsub import SphereContext, ms_climb, ms_in_delta, ms_in_g
from .puiseux import DEFAULT_ORDER, Dyadic, MAX_ORDER, PrecisionPolicy, PuiseuxElement
from .quaternions import Frame, QuaternionAlgebra
from .rotations import Mat3, Rot2, r2_mul, r2_sqrt, r3_conj_matrix, r3_sqrt
from .towers import Sign

import random

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_Y_IN_G = 2
EXIT_PRECISION = 3
EXIT_TOO_LARGE = 4

PRECISION_ENV = "DIVALG_PRECISION"

SUITE_NAMES = ("fields", "quat", "rotations", "maxsub", "lemmas", "cyclic")


# -- literal parsing --------------------------------------------------

_BASIS = ("i", "j", "k")


def _tokenize(text: str):
    out = []
    pos = 0
    while pos < len(text):
        ch = text[pos]
        if ch.isspace():
            pos += 1
            continue
        if ch.isdigit():
            start = pos
            while pos < len(text) and text[pos].isdigit():
                pos += 1
            out.append(("int", text[start:pos]))
            continue
        if ch in "ijkx":
            out.append(("name", ch))
            pos += 1
            continue
        if ch in "+-*/^()":
            out.append((ch, ch))
            pos += 1
            continue
        raise ValueError(f"unexpected character {ch!r} in literal")
    out.append(("end", ""))
    return out


class _LiteralParser:
    """Recursive descent over quaternion and scalar literals.

    The grammar (documented with full EBNF in the repository docs)
    admits four basis components r + s*i + t*j + u*k; each coefficient
    is a rational in the constructible model, or a signed sum of
    rational multiples of dyadic powers of x in the series model.
    Parenthesized coefficients may be multi-term; the * between a
    coefficient and a basis letter is optional.
    """

    def __init__(self, text: str, model):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.model = model
        self.series = isinstance(model, PuiseuxField)

    def _peek(self):
        return self.tokens[self.pos][0]

    def _take(self, kind=None):
        tok = self.tokens[self.pos]
        if kind is not None and tok[0] != kind:
            raise ValueError(f"expected {kind} at token {self.pos}, found {tok[1]!r}")
        self.pos += 1
        return tok

    def _sign(self) -> int:
        if self._peek() == "+":
            self._take()
            return 1
        if self._peek() == "-":
            self._take()
            return -1
        return 1

    def _integer(self) -> int:
        return int(self._take("int")[1])

    def _rational(self) -> Fraction:
        num = self._integer()
        if self._peek() == "/":
            self._take()
            den = self._integer()
            if den == 0:
                raise ValueError("zero denominator in literal")
            return Fraction(num, den)
        return Fraction(num)

    def _exponent(self) -> Fraction:
        if self._peek() == "(":
            self._take()
            sign = self._sign()
            value = self._rational()
            self._take(")")
            return sign * value
        sign = self._sign()
        return Fraction(sign * self._integer())

    def _xpower(self):
        self._take("name")  # the x itself
        exponent = Fraction(1)
        if self._peek() == "^":
            self._take()
            exponent = self._exponent()
        try:
            d = Dyadic.from_fraction(exponent)
        except ValueError:
            raise ValueError(
                f"exponent {exponent} is not dyadic (denominator must be a power of two)"
            ) from None
        return PuiseuxElement.x_power(d)

    def _satom(self):
        # rational [x-power] | x-power; the series variable is rejected
        # outright in the constructible model
        if self._peek() == "name":
            if self.tokens[self.pos][1] != "x":
                raise ValueError("basis letters cannot appear inside a coefficient")
            if not self.series:
                raise ValueError("the constructible scalar grammar has no variable x")
            return self._xpower()
        coeff = self._rational()
        if self._peek() == "*" and self.tokens[self.pos + 1][:2] == ("name", "x"):
            self._take()
        if self._peek() == "name" and self.tokens[self.pos][1] == "x":
            if not self.series:
                raise ValueError("the constructible scalar grammar has no variable x")
            return self.model.from_fraction(coeff) * self._xpower()
        return self.model.from_fraction(coeff)

    def _scalar(self):
        total = self.model.ensure(self._sign() * self._satom())
        while self._peek() in ("+", "-"):
            sign = self._sign()
            total = total + sign * self._satom()
        return total

    def _coefficient(self):
        if self._peek() == "(":
            self._take()
            value = self._scalar()
            self._take(")")
            return value
        return self._satom()

    def parse_scalar(self):
        value = self._scalar()
        self._take("end")
        return value

    def parse_quaternion(self, algebra: QuaternionAlgebra):
        parts = {name: self.model.zero() for name in ("", "i", "j", "k")}
        first = True
        while True:
            kind = self._peek()
            if kind == "end":
                if first:
                    raise ValueError("empty quaternion literal")
                break
            if not first and kind not in ("+", "-"):
                raise ValueError(f"expected + or - between terms, found {self.tokens[self.pos][1]!r}")
            sign = self._sign()
            basis = ""
            if self._peek() == "name" and self.tokens[self.pos][1] in _BASIS:
                basis = self._take()[1]
                coeff = self.model.one()
            else:
                coeff = self.model.ensure(self._coefficient())
                if self._peek() == "*":
                    self._take()
                    name = self._take("name")[1]
                    if name not in _BASIS:
                        raise ValueError(f"{name!r} is not a basis letter")
                    basis = name
                elif self._peek() == "name" and self.tokens[self.pos][1] in _BASIS:
                    basis = self._take()[1]
            parts[basis] = parts[basis] + sign * coeff
            first = False
        return algebra.quaternion(parts[""], parts["i"], parts["j"], parts["k"])


def parse_scalar_literal(text: str, model):
    return _LiteralParser(text, model).parse_scalar()


def parse_quaternion_literal(text: str, algebra: QuaternionAlgebra):
    return _LiteralParser(text, algebra.field).parse_quaternion(algebra)


def parse_pure_literal(text: str, algebra: QuaternionAlgebra):
    q = parse_quaternion_literal(text, algebra)
    model = algebra.field
    r = model.ensure(q.r)
    exact_zero = (
        r.is_exact_zero() if isinstance(model, PuiseuxField)
        else model.sign(r) == Sign.ZERO
    )
    if not exact_zero:
        raise ValueError("target must be a pure quaternion (zero scalar part)")
    return algebra.pure(q.s, q.t, q.u)


# -- rendering --------------------------------------------------------

def _quat_str(q) -> str:
    f = q.algebra.field
    r, s, t, u = (f.render(c) for c in q.components())
    return f"({r}) + ({s})*i + ({t})*j + ({u})*k"


def _csv_cell(value) -> str:
    text = str(value)
    if any(ch in text for ch in ",\"\n"):
        return '"' + text.replace('"', '""') + '"'
    return text


def _csv_line(cells) -> str:
    return ",".join(_csv_cell(c) for c in cells)


def _emit(text: str):
    sys.stdout.write(text)
    if not text.endswith("\n"):
        sys.stdout.write("\n")


# -- check harness ----------------------------------------------------

@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    passed: bool
    samples: int
    counterexample: str = ""


@dataclass(frozen=True)
class RunConfig:
    """Common decoded flags; every command is a pure function of these."""

    seed: int = 0
    order: int = DEFAULT_ORDER
    max_order: int = MAX_ORDER
    precision: int = DEFAULT_PRECISION
    fmt: str = "markdown"
    samples: Optional[int] = None
    quick: bool = False

    def count(self, base: int) -> int:
        if self.samples is not None:
            return max(1, min(base, self.samples))
        if self.quick:
            return max(10, base // 100)
        return base

    def rng(self, label: str) -> random.Random:
        return random.Random(f"{self.seed}:{label}")


def _sampled(suite: str, name: str, n: int, prop: Callable[[int], Optional[str]]) -> CheckResult:
    """Run ``prop`` on sample indices 0..n-1; None means the case passed."""
    for idx in range(n):
        note = prop(idx)
        if note is not None:
            return CheckResult(suite, name, False, idx + 1, note)
    return CheckResult(suite, name, True, n)


def _swept(suite: str, name: str, body: Callable[[], Tuple[int, Optional[str]]]) -> CheckResult:
    """Exhaustive sweep; the body reports how many cases it covered."""
    count, note = body()
    return CheckResult(suite, name, note is None, count, note or "")


# -- fields suite -----------------------------------------------------

def _tower_pool(rng, size: int):
    # one shared context chain Q(sqrt2, sqrt3) keeps coercion free
    r2 = CONSTRUCTIBLE.from_fraction(2).sqrt()
    r3 = (r2 * r2 + 1).sqrt()
    r6 = r2 * r3
    pool = []
    for _ in range(size):
        coords = [Fraction(rng.randint(-9, 9), rng.randint(1, 6)) for _ in range(4)]
        pool.append(coords[0] + coords[1] * r2 + coords[2] * r3 + coords[3] * r6)
    return pool


def _series_pool(rng, size: int):
    pool = []
    for _ in range(size):
        e0 = Dyadic(rng.randint(-4, 4), rng.randint(0, 2))
        value = PuiseuxElement.x_power(e0) * Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.randint(1, 4))
        for _ in range(rng.randint(0, 3)):
            step = Dyadic(rng.randint(1, 6), rng.randint(0, 2))
            coeff = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
            value = value + PuiseuxElement.x_power(e0 + step) * coeff
        pool.append(value)
    return pool


def _suite_fields(cfg: RunConfig) -> List[CheckResult]:
    out = []
    suite = "fields"

    rng = cfg.rng("fields:pool")
    pool = _tower_pool(rng, 48)
    nonzero = [a for a in pool if a.sign() != Sign.ZERO]

    axiom_rng = cfg.rng("fields:axioms")

    def axiom(idx):
        r = axiom_rng
        a, b, c = (r.choice(pool) for _ in range(3))
        if ((a * b) * c - a * (b * c)).sign() != Sign.ZERO:
            return f"associativity broke on sample {idx}"
        if (a * (b + c) - (a * b + a * c)).sign() != Sign.ZERO:
            return f"distributivity broke on sample {idx}"
        if (a * b - b * a).sign() != Sign.ZERO or ((a + b) - (b + a)).sign() != Sign.ZERO:
            return f"commutativity broke on sample {idx}"
        if a.sign() != Sign.ZERO and (a * (1 / a) - 1).sign() != Sign.ZERO:
            return f"multiplicative inverse broke on sample {idx}"
        if ((a - a)).sign() != Sign.ZERO:
            return f"additive inverse broke on sample {idx}"
        return None

    out.append(_sampled(suite, "field-axioms", cfg.count(10**4), axiom))

    order_rng = cfg.rng("fields:order")

    def ordered(idx):
        r = order_rng
        a, b, c = (r.choice(pool) for _ in range(3))
        if (b - a).sign() == Sign.POSITIVE and ((b + c) - (a + c)).sign() != Sign.POSITIVE:
            return f"translation broke monotonicity on sample {idx}"
        if a.sign() == Sign.POSITIVE and b.sign() == Sign.POSITIVE and (a * b).sign() != Sign.POSITIVE:
            return f"product of positives not positive on sample {idx}"
        return None

    out.append(_sampled(suite, "order-compatibility", cfg.count(10**4), ordered))

    sqrt_sound_rng = cfg.rng("fields:sqrt")

    def sqrt_sound(idx):
        r = sqrt_sound_rng
        a = r.choice(pool)
        if a.sign() == Sign.NEGATIVE:
            a = -a
        s = a.sqrt()
        if s.sign() == Sign.NEGATIVE:
            return f"negative root returned on sample {idx}"
        if (s * s - a).sign() != Sign.ZERO:
            return f"sqrt square mismatch on sample {idx}"
        return None

    out.append(_sampled(suite, "sqrt-soundness", cfg.count(10**3), sqrt_sound))

    trichotomy_rng = cfg.rng("fields:trichotomy")

    def trichotomy(idx):
        r = trichotomy_rng
        a, b = r.choice(pool), r.choice(pool)
        if r.random() < 0.1:
            b = a
        d = a - b
        s = d.sign()
        if s not in (Sign.NEGATIVE, Sign.ZERO, Sign.POSITIVE):
            return f"sign outside {{-1,0,1}} on sample {idx}"
        lo, hi = d.approx(48)
        if lo > 0 and s != Sign.POSITIVE:
            return f"interval positive but sign {int(s)} on sample {idx}"
        if hi < 0 and s != Sign.NEGATIVE:
            return f"interval negative but sign {int(s)} on sample {idx}"
        if s == Sign.ZERO and not (lo <= 0 <= hi):
            return f"zero sign outside bracket on sample {idx}"
        return None

    out.append(_sampled(suite, "trichotomy-brackets", cfg.count(10**3), trichotomy))

    euclidean_rng = cfg.rng("fields:euclid")

    def euclidean(idx):
        r = euclidean_rng
        a = r.choice(nonzero)
        roots = 0
        for cand in (a, -a):
            if cand.sign() == Sign.POSITIVE:
                cand.sqrt()
                roots += 1
        if roots != 1:
            return f"{roots} of a,-a admit a root on sample {idx}"
        return None

    out.append(_sampled(suite, "square-or-negated-square", cfg.count(10**3), euclidean))

    srng = cfg.rng("fields:series:pool")
    series = _series_pool(srng, 48)

    val_additive_rng = cfg.rng("fields:val")

    def val_additive(idx):
        r = val_additive_rng
        a, b = r.choice(series), r.choice(series)
        if (a * b).valuation() != a.valuation() + b.valuation():
            return f"v(ab) != v(a)+v(b) on sample {idx}"
        return None

    out.append(_sampled(suite, "series-valuation-additive", cfg.count(10**4), val_additive))

    ultrametric_rng = cfg.rng("fields:ultra")

    def ultrametric(idx):
        r = ultrametric_rng
        a, b = r.choice(series), r.choice(series)
        lo = min(a.valuation(), b.valuation())
        try:
            v = (a + b).valuation()
        except ZeroValuation:
            return None  # exact cancellation, v = +infinity
        if v < lo:
            return f"v(a+b) below min on sample {idx}"
        if a.valuation() != b.valuation() and v != lo:
            return f"distinct valuations but no equality on sample {idx}"
        return None

    out.append(_sampled(suite, "series-ultrametric", cfg.count(10**4), ultrametric))

    dichotomy_rng = cfg.rng("fields:ring")

    def dichotomy(idx):
        r = dichotomy_rng
        a = r.choice(series)
        if a.classify().is_bounded:
            return None
        if not a.inverse().classify().is_bounded:
            return f"neither a nor 1/a bounded on sample {idx}"
        return None

    out.append(_sampled(suite, "valuation-ring-dichotomy", cfg.count(10**3), dichotomy))

    ideal_rng = cfg.rng("fields:ideal")

    def ideal(idx):
        r = ideal_rng
        a, b = r.choice(series), r.choice(series)
        if not a.classify().is_infinitesimal:
            a = a * PuiseuxElement.x_power(Dyadic(1) - a.valuation())
        if not b.classify().is_bounded:
            b = b * PuiseuxElement.x_power(-b.valuation())
        if not (a * b).classify().is_infinitesimal:
            return f"ideal not absorbing on sample {idx}"
        return None

    out.append(_sampled(suite, "ideal-absorbs-bounded", cfg.count(10**3), ideal))

    roundtrip_rng = cfg.rng("fields:roundtrip")

    def residual_ok(residual, order):
        # order None advertises an exact result; otherwise nothing may be
        # visible below the stated order (a bare truncated zero is fine)
        if order is None:
            return residual.is_exact_zero()
        if residual.is_exact_zero() or residual.is_truncated_zero():
            return True
        return residual.valuation_at_least(order)

    def roundtrip(idx):
        r = roundtrip_rng
        a = r.choice(series)
        inv = a.inverse()
        if not residual_ok(a * inv - 1, inv.order):
            return f"a*inv(a)-1 visible below stated order on sample {idx}"
        if a.leading()[1].sign() != Sign.POSITIVE:
            a = -a
        s = a.sqrt()
        if not residual_ok(s * s - a, s.order):
            return f"sqrt(a)^2-a visible below stated order on sample {idx}"
        return None

    out.append(_sampled(suite, "series-roundtrips", cfg.count(10**3), roundtrip))

    halving_rng = cfg.rng("fields:halving")

    def halving(idx):
        r = halving_rng
        a = r.choice(series)
        if a.leading()[1].sign() != Sign.POSITIVE:
            a = -a
        v = a.valuation()
        if not isinstance(v, Dyadic):
            return f"valuation left the dyadics on sample {idx}"
        if a.sqrt().valuation() != v.half():
            return f"sqrt did not halve the valuation on sample {idx}"
        return None

    out.append(_sampled(suite, "value-group-halving", cfg.count(10**3), halving))

    series_order_rng = cfg.rng("fields:series-order")

    def series_order(idx):
        r = series_order_rng
        a, b, c = (r.choice(series) for _ in range(3))
        if a < b and not (a + c) < (b + c):
            return f"series translation monotonicity broke on sample {idx}"
        return None

    out.append(_sampled(suite, "series-order-compatibility", cfg.count(10**3), series_order))
    return out


# -- quat suite -------------------------------------------------------

def _rational_quat(algebra, r, span=9) -> "object":
    coords = [Fraction(r.randint(-span, span), r.randint(1, 6)) for _ in range(4)]
    return algebra.quaternion(*coords)


def _rational_unit(algebra, r):
    while True:
        x = _rational_quat(algebra, r)
        if not x.is_zero():
            break
    # x^2 / Nrd(x) has reduced norm 1 with rational coordinates
    n = x.nrd()
    return (x * x) * algebra.scalar(CONSTRUCTIBLE.invert(n))


def _rational_pure(algebra, r, span=9):
    coords = [Fraction(r.randint(-span, span), r.randint(1, 6)) for _ in range(3)]
    return algebra.pure(*coords)


def _suite_quat(cfg: RunConfig) -> List[CheckResult]:
    out = []
    suite = "quat"
    algebra = QuaternionAlgebra.hamilton(CONSTRUCTIBLE)
    model = CONSTRUCTIBLE

    def zero_scalar(value) -> bool:
        return model.sign(value) == Sign.ZERO

    nrd_mult_rng = cfg.rng("quat:nrd")

    def nrd_mult(idx):
        r = nrd_mult_rng
        x, y = _rational_quat(algebra, r), _rational_quat(algebra, r)
        if not zero_scalar((x * y).nrd() - x.nrd() * y.nrd()):
            return f"Nrd(xy) != Nrd(x)Nrd(y) on sample {idx}"
        return None

    out.append(_sampled(suite, "nrd-multiplicative", cfg.count(10**4), nrd_mult))

    pure_split_rng = cfg.rng("quat:split")

    def pure_split(idx):
        # alpha*beta = -(alpha.beta) + alpha x beta for pure arguments
        r = pure_split_rng
        a, b = _rational_pure(algebra, r), _rational_pure(algebra, r)
        lhs = a.as_quaternion() * b.as_quaternion()
        rhs = algebra.scalar(-a.dot(b)) + a.cross(b).as_quaternion()
        if not lhs.equals(rhs):
            return f"pure product split failed on sample {idx}"
        return None

    out.append(_sampled(suite, "pure-product-split", cfg.count(10**4), pure_split))

    anticommute_rng = cfg.rng("quat:anti")

    def anticommute(idx):
        r = anticommute_rng
        a = _rational_pure(algebra, r)
        if idx % 2 == 0:
            b = _rational_pure(algebra, r)
        else:
            b = a.cross(_rational_pure(algebra, r))  # orthogonal by construction
        qa, qb = a.as_quaternion(), b.as_quaternion()
        anti = (qa * qb + qb * qa).is_zero()
        ortho = zero_scalar(a.dot(b))
        if anti != ortho:
            return f"anticommuting and orthogonal disagreed on sample {idx}"
        return None

    out.append(_sampled(suite, "anticommute-orthogonal", cfg.count(10**4), anticommute))

    conj_invariants_rng = cfg.rng("quat:conjinv")

    def conj_invariants(idx):
        r = conj_invariants_rng
        while True:
            x = _rational_quat(algebra, r)
            if not x.is_zero():
                break
        y = _rational_quat(algebra, r)
        image = x.conj_action(y)
        if not zero_scalar(image.trd() - y.trd()):
            return f"Trd changed under conjugation on sample {idx}"
        if not zero_scalar(image.nrd() - y.nrd()):
            return f"Nrd changed under conjugation on sample {idx}"
        return None

    out.append(_sampled(suite, "conjugation-trd-nrd-invariant", cfg.count(10**4), conj_invariants))

    norm_preserved_rng = cfg.rng("quat:normpres")

    def norm_preserved(idx):
        r = norm_preserved_rng
        x = _rational_unit(algebra, r)
        a = _rational_pure(algebra, r)
        if not zero_scalar(x.conj_action(a).norm2() - a.norm2()):
            return f"unit conjugation changed the squared norm on sample {idx}"
        return None

    out.append(_sampled(suite, "unit-conjugation-norm", cfg.count(10**4), norm_preserved))

    dot_preserved_rng = cfg.rng("quat:dotpres")

    def dot_preserved(idx):
        r = dot_preserved_rng
        x = _rational_unit(algebra, r)
        a, b = _rational_pure(algebra, r), _rational_pure(algebra, r)
        if not zero_scalar(x.conj_action(a).dot(x.conj_action(b)) - a.dot(b)):
            return f"conjugation changed a dot product on sample {idx}"
        return None

    out.append(_sampled(suite, "conjugation-dot-preserving", cfg.count(10**3), dot_preserved))

    cauchy_schwarz_rng = cfg.rng("quat:cs")

    def cauchy_schwarz(idx):
        r = cauchy_schwarz_rng
        a, b = _rational_pure(algebra, r), _rational_pure(algebra, r)
        d = a.dot(b)
        gap = a.norm2() * b.norm2() - d * d
        if model.sign(gap) == Sign.NEGATIVE:
            return f"Cauchy-Schwarz violated on sample {idx}"
        # triangle inequality, root free: ||a+b|| <= ||a|| + ||b|| holds
        # iff the dot is nonpositive or its square stays below the norm
        # product, which the gap already certifies
        if model.sign((a + b).norm2() - (a.norm2() + 2 * d + b.norm2())) != Sign.ZERO:
            return f"norm expansion failed on sample {idx}"
        if idx % 100 == 0:
            lhs = model.sqrt((a + b).norm2())
            rhs = model.sqrt(a.norm2()) + model.sqrt(b.norm2())
            if model.sign(rhs - lhs) == Sign.NEGATIVE:
                return f"triangle inequality violated with explicit roots on sample {idx}"
        return None

    out.append(_sampled(suite, "cauchy-schwarz-triangle", cfg.count(10**4), cauchy_schwarz))

    trace_zero_rng = cfg.rng("quat:eq12")

    def trace_zero(idx):
        r = trace_zero_rng
        pick = idx % 3
        if pick == 0:
            x = _rational_pure(algebra, r).as_quaternion()
        elif pick == 1:
            x = _rational_quat(algebra, r)
        else:
            x = algebra.scalar(Fraction(r.randint(-9, 9), r.randint(1, 6)))
        traceless = zero_scalar(x.trd())
        sq = x * x
        square_in_f = all(zero_scalar(c) for c in (sq.s, sq.t, sq.u))
        outside_f = not all(zero_scalar(c) for c in (x.s, x.t, x.u))
        other = x.is_zero() or (square_in_f and outside_f)
        if traceless != other:
            return f"trace-zero characterization disagreed on sample {idx}"
        return None

    out.append(_sampled(suite, "trace-zero-characterization", cfg.count(10**3), trace_zero))
    return out


# -- rotations suite --------------------------------------------------

def _circle_point(r) -> Tuple[Fraction, Fraction]:
    m = r.randint(-30, 30)
    n = r.randint(1, 30)
    den = m * m + n * n
    return Fraction(m * m - n * n, den), Fraction(2 * m * n, den)


def _conjugation_matrix(algebra, u) -> Mat3:
    """Matrix of v -> u v u**-1 on pures, columns the images of i, j, k."""
    cols = [
        u.conj_action(e).components()
        for e in (algebra.pure(1), algebra.pure(0, 1), algebra.pure(0, 0, 1))
    ]
    return Mat3(algebra.field, tuple(zip(*cols)))


def _suite_rotations(cfg: RunConfig) -> List[CheckResult]:
    out = []
    suite = "rotations"
    model = CONSTRUCTIBLE
    algebra = QuaternionAlgebra.hamilton(model)
    frame = Frame.standard(algebra)

    edges = [(Fraction(1), Fraction(0)), (Fraction(-1), Fraction(0)),
             (Fraction(0), Fraction(1)), (Fraction(0), Fraction(-1))]

    plane_sqrt_rng = cfg.rng("rotations:r2")

    def plane_sqrt(idx):
        r = plane_sqrt_rng
        c, s = edges[idx] if idx < len(edges) else _circle_point(r)
        a = Rot2(model, c, s)
        b = r2_sqrt(a)
        if not r2_mul(b, b).equals(a):
            return f"half rotation squared missed on sample {idx} (c={c}, s={s})"
        return None

    out.append(_sampled(suite, "plane-half-rotation", cfg.count(1000), plane_sqrt))

    conj_matrix_hom_rng = cfg.rng("rotations:hom")

    def on_axis_unit(r):
        # unit quaternion with pure part along the frame axis
        c, s = _circle_point(r)
        return algebra.quaternion(c, s, 0, 0)

    def conj_matrix_hom(idx):
        r = conj_matrix_hom_rng
        x = on_axis_unit(r)
        y = on_axis_unit(r)
        lhs = r3_conj_matrix(x * y, frame)
        rhs = r3_conj_matrix(x, frame) * r3_conj_matrix(y, frame)
        if not lhs.equals(rhs):
            return f"conjugation matrices not multiplicative on sample {idx}"
        return None

    out.append(_sampled(suite, "conjugation-homomorphism", cfg.count(200), conj_matrix_hom))

    space_sqrt_rng = cfg.rng("rotations:r3")

    def space_sqrt(idx):
        r = space_sqrt_rng
        m = _conjugation_matrix(algebra, _rational_unit(algebra, r))
        b = r3_sqrt(m, algebra)
        if not (b * b).equals(m):
            return f"space half-rotation squared missed on sample {idx}"
        if not b.is_special_orthogonal():
            return f"square root left SO(3) on sample {idx}"
        return None

    out.append(_sampled(suite, "space-half-rotation", cfg.count(200), space_sqrt))

    orthogonal_closed_rng = cfg.rng("rotations:orth")

    def orthogonal_closed(idx):
        r = orthogonal_closed_rng
        m = _conjugation_matrix(algebra, _rational_unit(algebra, r))
        m = m * _conjugation_matrix(algebra, _rational_unit(algebra, r))
        if not m.is_special_orthogonal():
            return f"product left SO(3) on sample {idx}"
        return None

    out.append(_sampled(suite, "orthogonality-closure", cfg.count(200), orthogonal_closed))

    reflection_rng = cfg.rng("rotations:reflect")

    def reflection(idx):
        r = reflection_rng
        c, s = _circle_point(r)
        cm, sm = model.from_fraction(c), model.from_fraction(s)
        # A = [[c, s], [s, -c]] has det -1; its square must be the identity
        e00 = cm * cm + sm * sm
        e01 = cm * sm - sm * cm
        if model.sign(e00 - model.one()) != Sign.ZERO or model.sign(e01) != Sign.ZERO:
            return f"reflection squared missed the identity on sample {idx}"
        return None

    out.append(_sampled(suite, "reflection-involution", cfg.count(10**3), reflection))
    return out


# -- maxsub suite -----------------------------------------------------

def _stabilizer_sample(ctx, r, series: bool):
    algebra = ctx.algebra
    while True:
        a = Fraction(r.randint(-9, 9), r.randint(1, 4))
        b = Fraction(r.randint(-9, 9), r.randint(1, 4))
        if a != 0 or b != 0:
            break
    x = algebra.quaternion(a, b, 0, 0)
    if r.random() < 0.5:
        x = x * algebra.j
    if series:
        eps = algebra.quaternion(*[Fraction(r.randint(-2, 2), r.randint(1, 3)) for _ in range(4)])
        xq = algebra.scalar(ctx.model.ensure(PuiseuxElement.x_power(Dyadic(1))))
        x = x * (algebra.one + eps * xq)
    return x


def _suite_maxsub(cfg: RunConfig) -> List[CheckResult]:
    out = []
    suite = "maxsub"
    ctx_c = SphereContext()
    ctx_p = SphereContext(PuiseuxField())

    def closure(idx):
        series = idx % 2 == 1
        ctx = ctx_p if series else ctx_c
        r = cfg.rng(f"maxsub:closure:{idx}")
        x = _stabilizer_sample(ctx, r, series)
        y = _stabilizer_sample(ctx, r, series)
        if not (ms_in_g(x, ctx) and ms_in_g(y, ctx)):
            return f"constructed element fell outside the subgroup on sample {idx}"
        if not ms_in_g(x * y, ctx):
            return f"product escaped the subgroup on sample {idx}"
        if not ms_in_g(x.inverse(), ctx):
            return f"inverse escaped the subgroup on sample {idx}"
        return None

    out.append(_sampled(suite, "subgroup-closure", cfg.count(10**3), closure))

    absorption_rng = cfg.rng("maxsub:absorb")

    def absorption(idx):
        r = absorption_rng
        ctx = ctx_p
        algebra = ctx.algebra
        while True:
            a = Fraction(r.randint(-9, 9), r.randint(1, 4))
            b = Fraction(r.randint(-9, 9), r.randint(1, 4))
            if a != 0 or b != 0:
                break
        x = algebra.quaternion(a, b, 0, 0)  # fixes i, so x*i stays in the cap
        xq = ctx.model.ensure(PuiseuxElement.x_power(Dyadic(1)))
        rho = algebra.pure(*[xq * Fraction(r.randint(-2, 2), r.randint(1, 3)) for _ in range(3)])
        alpha = (algebra.i_pure + rho).normalized()
        if not ms_in_delta(alpha, ctx):
            return f"perturbed pole sample left the cap on sample {idx}"
        if not ms_in_delta(x.conj_action(alpha), ctx):
            return f"cap not absorbed under the stabilizer on sample {idx}"
        return None

    out.append(_sampled(suite, "cap-absorption", cfg.count(10**2), absorption))

    def properness(idx):
        ctx = (ctx_c, ctx_p)[idx]
        y = ctx.algebra.one + ctx.algebra.j
        if ms_in_g(y, ctx):
            return f"1+j reported inside the subgroup in model {ctx.model!r}"
        return None

    out.append(_sampled(suite, "properness-witness", 2, properness))

    def climb_sound(idx):
        series = idx >= 5
        ctx = ctx_p if series else ctx_c
        r = cfg.rng(f"maxsub:climb:{idx}")
        algebra = ctx.algebra
        y = algebra.one + algebra.j * algebra.scalar(Fraction(r.randint(1, 5), r.randint(1, 3)))
        while True:
            seed_q = _rational_quat(algebra, r, span=5)
            if not seed_q.is_zero():
                break
        gamma = seed_q.conj_action(algebra.i_pure)
        gamma = gamma.scaled(ctx.model.invert(ctx.model.sqrt(gamma.norm2())))
        if series:
            xq = ctx.model.ensure(PuiseuxElement.x_power(Dyadic(1)))
            rho = algebra.pure(*[xq * Fraction(r.randint(-2, 2), 3) for _ in range(3)])
            gamma = (gamma + rho).normalized()
        word, trace = ms_climb(y, gamma, ctx)
        trace.validate(ctx.model)
        ok, note = _climb_verified(word, gamma, ctx, DEFAULT_ORDER)
        if not ok:
            return f"climb failed verification on sample {idx}: {note}"
        return None

    out.append(_sampled(suite, "climb-soundness", 7, climb_sound))

    degeneration_rng = cfg.rng("maxsub:degenerate")

    def degeneration(idx):
        r = degeneration_rng
        ctx = ctx_c
        algebra = ctx.algebra
        a = Fraction(r.randint(-9, 9), r.randint(1, 4))
        b = Fraction(r.randint(-9, 9), r.randint(1, 4))
        if a == 0 and b == 0:
            a = Fraction(1)
        i_pure = algebra.i_pure
        x1 = algebra.quaternion(a, b, 0, 0)
        if not (ms_in_g(x1, ctx) and x1.conj_action(i_pure).equals(i_pure)):
            return f"stabilizer element misclassified on sample {idx}"
        x2 = x1 * algebra.j
        if not (ms_in_g(x2, ctx) and x2.conj_action(i_pure).equals(-i_pure)):
            return f"reversing coset misclassified on sample {idx}"
        c = Fraction(r.randint(1, 9), r.randint(1, 4))
        x3 = algebra.quaternion(a if a != 0 else Fraction(1), b, c, 0)
        image = x3.conj_action(i_pure)
        inside = image.equals(i_pure) or image.equals(-i_pure)
        if ms_in_g(x3, ctx) != inside:
            return f"membership and conjugation image disagreed on sample {idx}"
        if inside:
            return f"mixed element unexpectedly fixed the poles on sample {idx}"
        return None

    out.append(_sampled(suite, "archimedean-degeneration", cfg.count(10**3), degeneration))

    latitude_flip_rng = cfg.rng("maxsub:flip")

    def latitude_flip(idx):
        r = latitude_flip_rng
        ctx = ctx_c
        algebra = ctx.algebra
        v = _rational_pure(algebra, r)
        flipped = algebra.j.conj_action(v)
        expect = algebra.pure(-v.b, v.c, -v.d)
        if not flipped.equals(expect):
            return f"conjugation by j did not flip the latitude sign on sample {idx}"
        return None

    out.append(_sampled(suite, "latitude-flip", cfg.count(10**3), latitude_flip))
    return out


# -- lemmas suite -----------------------------------------------------

def _small_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _suite_lemmas(cfg: RunConfig) -> List[CheckResult]:
    out = []
    suite = "lemmas"
    order_cap = 24 if cfg.quick else 72
    n_cap = 6 if cfg.quick else 12
    cyclic_cap = 60 if cfg.quick else 200
    primes = (2, 3) if cfg.quick else (2, 3, 5, 7)
    r_cap = 2 if cfg.quick else 3
    lemma2_cap = 32 if cfg.quick else 128

    def divisibility():
        checked = 0
        for A in abelian_universe(order_cap):
            k_max = max(2, A.exponent())
            for n in range(2, n_cap + 1):
                lhs, rhs, agree = ck_lemma11(A, n, k_max)
                checked += 1
                if not agree:
                    return checked, f"equivalence failed for {A!r}, n={n} (lhs={lhs}, rhs={rhs})"
        return checked, None

    out.append(_swept(suite, "divisibility-equivalence", divisibility))

    def torsion_split():
        checked = 0
        for m in range(2, cyclic_cap + 1):
            for p in primes:
                for r in range(1, r_cap + 1):
                    lhs, rhs, agree = ck_lemma12(m, p, r)
                    checked += 1
                    if not agree:
                        return checked, f"torsion-power split failed for m={m}, p={p}, r={r}"
        return checked, None

    out.append(_swept(suite, "torsion-power-split", torsion_split))

    def maximal_exists():
        checked = 0
        for A in abelian_universe(lemma2_cap):
            if A.order == 1:
                continue
            recs, all_prime = ck_lemma2_finite(A)
            checked += 1
            if not recs:
                return checked, f"no maximal subgroup found in {A!r}"
            if not all_prime:
                return checked, f"non-prime maximal index in {A!r}"
        return checked, None

    out.append(_swept(suite, "maximal-exists-prime-index", maximal_exists))

    def witness_consistency():
        model = PuiseuxField()
        bound = 30 if cfg.quick else PRIME_BOUND
        listed = {p for p, _ in ck_normal_primes(model, bound)}
        checked = 0
        for p in range(2, bound + 1):
            if not _small_prime(p):
                continue
            checked += 1
            nontrivial = ck_mt_order(model, p).order_lower_bound > 1
            if nontrivial != (p in listed):
                return checked, f"witness list and order table disagree at p={p}"
        if 2 in listed:
            return checked, "prime 2 appeared in the witness list"
        return checked, None

    out.append(_swept(suite, "odd-prime-witness-consistency", witness_consistency))

    def odd_part_stability():
        model = PuiseuxField()
        for t in range(1, 201):
            if ck_mt_order(model, 2 * t).order_lower_bound != ck_mt_order(model, t).order_lower_bound:
                return t, f"doubling changed the order bound at t={t}"
        return 200, None

    out.append(_swept(suite, "odd-part-stability", odd_part_stability))

    def unity_roots():
        checked = 0
        for p in range(2, 51):
            if not _small_prime(p):
                continue
            for q in range(2, 51):
                if not _small_prime(q) or p == q:
                    continue
                checked += 1
                degree, mu_in = ck_mu_in_limit_field(p, q)
                brute = any(
                    pow(p, i, q) == 1 and i % p != 0 for i in range(1, q)
                )
                if mu_in != brute:
                    return checked, f"limit-field membership disagreed with brute force at ({p},{q})"
                if pow(p, degree, q) != 1 or any(pow(p, i, q) == 1 for i in range(1, degree)):
                    return checked, f"reported degree is not the multiplicative order at ({p},{q})"
        return checked, None

    out.append(_swept(suite, "unity-root-degrees", unity_roots))

    def semidirect_kernel():
        cases = ((3, 2, 2), (7, 3, 2), (5, 4, 2), (8, 2, 7), (12, 2, 11), (9, 3, 4))
        for m, n, q in cases:
            G = fg_semidirect(m, n, q)
            if G.order != m * n:
                return len(cases), f"order mismatch for ({m},{n},{q})"
            kernel = [(u, 0) for u in range(m)]
            kset = set(kernel)
            for g in G:
                gi = G.inv(g)
                for k in kernel:
                    if G.mul(G.mul(g, k), gi) not in kset:
                        return len(cases), f"value kernel not normal for ({m},{n},{q})"
            if G.order // len(kernel) != n:
                return len(cases), f"kernel index is not n for ({m},{n},{q})"
        return len(cases), None

    out.append(_swept(suite, "semidirect-kernel", semidirect_kernel))

    def dihedral_recognition():
        checked = 0
        for m in range(3, 13):
            G = fg_semidirect(m, 2, m - 1)
            checked += 1
            if not fg_iso_dihedral(G, m):
                return checked, f"inversion action not recognized as dihedral at m={m}"
            for u in range(m):
                flip = (u, 1)
                for v in range(m):
                    conj = G.mul(G.mul(flip, (v, 0)), G.inv(flip))
                    if conj != ((-v) % m, 0):
                        return checked, f"reflection failed to invert rotations at m={m}"
        if fg_iso_dihedral(fg_cyclic(4), 2):
            return checked, "cyclic group of order 4 recognized as dihedral"
        if fg_iso_dihedral(fg_cyclic(6), 3):
            return checked, "cyclic group of order 6 recognized as dihedral"
        return checked + 2, None

    out.append(_swept(suite, "dihedral-recognition", dihedral_recognition))

    def table_consistency():
        groups = [
            fg_semidirect(6, 2, 5),
            fg_cyclic(12),
            fg_semidirect(7, 3, 2),
            FiniteAbelianGroup((2, 2, 2)).to_group(),
        ]
        checked = 0
        for G in groups:
            recs = fg_subgroups(G)
            members = [set(rec.members) for rec in recs]
            for pos, rec in enumerate(recs):
                checked += 1
                if G.order % rec.order or rec.order * rec.index != G.order:
                    return checked, f"Lagrange failed in {G!r}"
                mset = members[pos]
                normal = all(
                    G.mul(G.mul(g, h), G.inv(g)) in mset
                    for g in G for h in rec.members
                )
                if normal != rec.normal:
                    return checked, f"normality flag wrong in {G!r}"
                proper = rec.order < G.order
                strictly_between = any(
                    mset < other and len(other) < G.order for other in members
                )
                if rec.maximal != (proper and not strictly_between):
                    return checked, f"maximality flag wrong in {G!r}"
        return checked, None

    out.append(_swept(suite, "subgroup-table-consistency", table_consistency))
    return out


# -- cyclic suite -----------------------------------------------------

_CYCLIC_CONFIGS = ((2, 1, 2), (3, 1, 2), (2, 2, 2), (2, 1, 3))


def _suite_cyclic(cfg: RunConfig) -> List[CheckResult]:
    out = []
    suite = "cyclic"
    contexts = [(spec, ca_make(*spec, cfg.precision)) for spec in _CYCLIC_CONFIGS]
    pairs = cfg.count(500)

    def homomorphism():
        checked = 0
        for spec, ctx in contexts:
            r = cfg.rng(f"cyclic:hom:{spec}")
            group = ca_quotient_group(ctx.q, ctx.n)
            for _ in range(pairs):
                a, b = ctx.random_unit(r), ctx.random_unit(r)
                for _ in range(r.randrange(ctx.n)):
                    a = ca_mul(a, ctx.x(), ctx)
                ab = ca_mul(a, b, ctx)
                checked += 1
                if ca_valuation(ab, ctx) != ca_valuation(a, ctx) + ca_valuation(b, ctx):
                    return checked, f"valuation not additive for (l,m,n)={spec}"
                ia, ib = ca_quotient_image(a, ctx), ca_quotient_image(b, ctx)
                if ca_quotient_image(ab, ctx) != group.mul(ia, ib):
                    return checked, f"image not multiplicative for (l,m,n)={spec}"
        return checked, None

    out.append(_swept(suite, "quotient-homomorphism", homomorphism))

    def ultrametric():
        checked = 0
        for spec, ctx in contexts:
            r = cfg.rng(f"cyclic:ultra:{spec}")
            for _ in range(cfg.count(200)):
                a, b = ctx.random_unit(r), ctx.random_unit(r)
                for _ in range(r.randrange(ctx.n)):
                    a = ca_mul(a, ctx.x(), ctx)
                try:
                    v = ca_valuation(a + b, ctx)
                except PrecisionExhausted:
                    continue  # sum vanished to working precision
                va, vb = ca_valuation(a, ctx), ca_valuation(b, ctx)
                floor = min(va.as_fraction(), vb.as_fraction())
                checked += 1
                if v.as_fraction() < floor:
                    return checked, f"ultrametric floor broken for (l,m,n)={spec}"
                if va.as_fraction() != vb.as_fraction() and v.as_fraction() != floor:
                    return checked, f"distinct valuations without equality for (l,m,n)={spec}"
        return checked, None

    out.append(_swept(suite, "ultrametric-inequality", ultrametric))

    def frobenius():
        checked = 0
        for spec, ctx in contexts:
            r = cfg.rng(f"cyclic:frob:{spec}")
            field, big, sigma = tuple(ctx)
            for _ in range(cfg.count(100)):
                a = big.element([r.randrange(big.scale) for _ in range(big.degree)])
                b = big.element([r.randrange(big.scale) for _ in range(big.degree)])
                checked += 1
                if sigma(big.mul(a, b)) != big.mul(sigma(a), sigma(b)):
                    return checked, f"relative Frobenius not multiplicative for (l,m,n)={spec}"
                v = big.val(big.sub(sigma(a), big.pow(a, ctx.q)))
                if v is not None and v == 0:
                    return checked, f"residue action is not the q-power map for (l,m,n)={spec}"
            cur = big.gen()
            for _ in range(ctx.n):
                cur = sigma(cur)
            if cur != big.gen():
                return checked, f"Galois generator order exceeded n for (l,m,n)={spec}"
        return checked, None

    out.append(_swept(suite, "frobenius-automorphism", frobenius))

    def ring_unit(ctx, r):
        # valuation zero forces a unit coordinate at i = 0
        L = ctx.L
        while True:
            coeffs = [
                tuple(r.randrange(L.scale) for _ in range(L.degree))
                for _ in range(ctx.n)
            ]
            if L.val(coeffs[0]) == 0:
                return ctx.element(coeffs)

    def unit_kernel():
        checked = 0
        for spec, ctx in contexts:
            r = cfg.rng(f"cyclic:kernel:{spec}")
            G = ca_quotient_group(ctx.q, ctx.n)
            M = ctx.subgroup_modulus
            seen = set()
            for _ in range(cfg.count(400)):
                label = ca_quotient_image(ring_unit(ctx, r), ctx)
                checked += 1
                if label[1] != 0:
                    return checked, f"unit image left the value kernel for (l,m,n)={spec}"
                seen.add(label)
            covered = G.generated_by(seen)
            kernel = {(e, 0) for e in range(M)}
            if not kernel <= covered:
                return checked, f"unit images failed to cover the kernel for (l,m,n)={spec}"
            if ctx.n > 1 and ca_quotient_image(ctx.x(), ctx)[1] != 1:
                return checked, f"uniformizer image has wrong twist component for (l,m,n)={spec}"
        return checked, None

    out.append(_swept(suite, "unit-kernel-exactness", unit_kernel))

    def inversion():
        checked = 0
        for q in (2, 3, 4, 5, 7, 8, 9, 11):
            M = q + 1
            for u in range(M):
                checked += 1
                if (q * u) % M != (-u) % M:
                    return checked, f"multiplication by q is not inversion modulo {M}"
        return checked, None

    out.append(_swept(suite, "inversion-at-minus-one", inversion))

    def reports():
        cases = ((2, 2), (3, 2))
        for q, n in cases:
            rep = ca_report(q, n, precision=cfg.precision, seed=cfg.seed)
            if not rep.all_ok():
                return len(cases), f"quotient report failed its own checks at (q,n)=({q},{n})"
        return len(cases), None

    out.append(_swept(suite, "quotient-reports", reports))
    return out


SUITES = {
    "fields": _suite_fields,
    "quat": _suite_quat,
    "rotations": _suite_rotations,
    "maxsub": _suite_maxsub,
    "lemmas": _suite_lemmas,
    "cyclic": _suite_cyclic,
}


# -- climb ------------------------------------------------------------

def _climb_verified(word, gamma, ctx, order: int):
    image = word.evaluate().conj_action(ctx.algebra.i_pure)
    model = ctx.model
    diff = image - gamma
    if isinstance(model, PuiseuxField):
        bound = max(1, order // 2)
        try:
            ok = all(
                model.ensure(c).valuation_at_least(bound)
                for c in diff.components()
            )
        except PrecisionExhausted:
            return False, f"residual valuation not certifiable at order {order}"
        return ok, f"residual valuation >= {bound}"
    ok = all(model.sign(c) == Sign.ZERO for c in diff.components())
    return ok, "sign-exact equality in every coordinate"


def cli_climb(args) -> int:
    if args.order < 1 or args.max_order < args.order:
        print("error: need 1 <= order <= max-order", file=sys.stderr)
        return EXIT_FAIL
    if args.model == "puiseux":
        policy = PrecisionPolicy(default_order=args.order, max_order=args.max_order)
        model = PuiseuxField(policy, args.order)
    else:
        model = CONSTRUCTIBLE
    ctx = SphereContext(model)
    try:
        y = parse_quaternion_literal(args.y, ctx.algebra)
        gamma = parse_pure_literal(args.gamma, ctx.algebra)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    try:
        word, trace = ms_climb(y, gamma, ctx)
    except YInG as exc:
        print(f"not a climbing generator: {exc}", file=sys.stderr)
        return EXIT_Y_IN_G
    except PrecisionExhausted as exc:
        print(f"precision exhausted at order {exc.order}: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except (NotUnit, NotDivision, WrongAlgebra) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL

    problems = []
    try:
        trace.validate(model)
    except ValueError as exc:
        problems.append(str(exc))
    verified, note = _climb_verified(word, gamma, ctx, args.order)
    if problems:
        verified = False
        note = "; ".join(problems)

    steps = [
        {
            "step": pos + 1,
            "generator": st.generator,
            "latitude_from": model.render(st.latitude_from),
            "latitude_to": model.render(st.latitude_to),
            "positioning": _quat_str(st.positioning) if st.positioning is not None else "",
        }
        for pos, st in enumerate(trace.steps)
    ]
    payload = {
        "command": "climb",
        "model": args.model,
        "order": args.order if args.model == "puiseux" else None,
        "seed": args.seed,
        "y": _quat_str(y),
        "gamma": _quat_str(gamma.as_quaternion()),
        "latitude_c": model.render(trace.normalized_c),
        "latitude_s": model.render(trace.normalized_s),
        "steps": steps,
        "word": word.render(),
        "y_applications": word.y_applications(),
        "step_bound": trace.step_bound,
        "verified": verified,
        "verification": note,
    }

    if args.format == "json":
        _emit(json.dumps(payload, indent=2))
    elif args.format == "csv":
        lines = ["step,generator,latitude_from,latitude_to,positioning"]
        lines += [
            _csv_line([s["step"], s["generator"], s["latitude_from"],
                       s["latitude_to"], s["positioning"]])
            for s in steps
        ]
        lines.append("")
        lines.append("key,value")
        for key in ("word", "y_applications", "step_bound", "verified"):
            lines.append(_csv_line([key, payload[key]]))
        _emit("\n".join(lines))
    else:
        lines = [
            f"# Climb: model={args.model}"
            + (f", order={args.order}" if args.model == "puiseux" else ""),
            "",
            f"- y = {payload['y']}",
            f"- gamma = {payload['gamma']}",
            f"- start latitude c = {payload['latitude_c']}, s = {payload['latitude_s']}",
            "",
            "| step | generator | from | to | positioning |",
            "|---|---|---|---|---|",
        ]
        lines += [
            f"| {s['step']} | {s['generator']} | {s['latitude_from']} "
            f"| {s['latitude_to']} | {s['positioning']} |"
            for s in steps
        ]
        lines += [
            "",
            f"- word: {payload['word']}",
            f"- y applications: {payload['y_applications']} (bound {payload['step_bound']})",
            f"- verified: {'yes' if verified else 'NO'} ({note})",
        ]
        _emit("\n".join(lines))
    return EXIT_OK if verified else EXIT_FAIL


# -- dihedral ---------------------------------------------------------

def cli_dihedral(args) -> int:
    try:
        report = ca_report(
            args.q, args.n,
            precision=args.precision, seed=args.seed, sample_budget=args.budget,
        )
    except GroupTooLarge as exc:
        print(f"group too large: {exc}", file=sys.stderr)
        return EXIT_TOO_LARGE
    except NotPrime as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if args.format == "json":
        _emit(json.dumps({"command": "dihedral", **report.to_dict()}, indent=2))
    elif args.format == "csv":
        _emit(report.to_csv())
    else:
        _emit(report.to_markdown())
    return EXIT_OK if report.all_ok() else EXIT_FAIL


# -- ck1 --------------------------------------------------------------

def _parse_t_range(text: str) -> Tuple[int, int]:
    if ".." in text:
        lo_text, hi_text = text.split("..", 1)
        lo, hi = int(lo_text), int(hi_text)
    else:
        lo = hi = int(text)
    if not (1 <= lo <= hi <= 1000):
        raise ValueError("t range must satisfy 1 <= lo <= hi <= 1000")
    return lo, hi


def cli_ck1(args) -> int:
    series = args.model == "puiseux"
    model = PuiseuxField() if series else CONSTRUCTIBLE
    try:
        lo, hi = _parse_t_range(args.t if args.t is not None else ("1..6" if series else "1..2"))
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL

    rows = []
    if series:
        for t in range(lo, hi + 1):
            rep = ck_mt_order(model, t)
            rows.append({
                "t": t,
                "order_lower_bound": rep.order_lower_bound,
                "exact_for_ideal_residue": rep.exact_for_ideal_residue,
                "note": rep.basis_note,
            })
    else:
        if hi > 2:
            print("note: constructible cokernel rows cover t in {1, 2} only",
                  file=sys.stderr)
        for t in range(lo, min(hi, 2) + 1):
            trivial = ck_quaternion_trivial(model, -1, -1, t)
            rows.append({
                "t": t,
                "order_lower_bound": 1,
                "exact_for_ideal_residue": trivial,
                "note": "norm cokernel trivial for the (-1,-1) division algebra "
                        "over a euclidean base",
            })
    witnesses = [
        {"p": p, "element": w.element, "reason": w.reason}
        for p, w in ck_normal_primes(model, args.bound)
    ]

    payload = {
        "command": "ck1",
        "model": args.model,
        "rows": rows,
        "normal_maximal_primes": witnesses,
    }
    if args.format == "json":
        _emit(json.dumps(payload, indent=2))
    elif args.format == "csv":
        lines = ["t,order_lower_bound,exact"]
        lines += [_csv_line([r["t"], r["order_lower_bound"],
                             "yes" if r["exact_for_ideal_residue"] else "no"])
                  for r in rows]
        lines.append("")
        lines.append("p,element,reason")
        lines += [_csv_line([w["p"], w["element"], w["reason"]]) for w in witnesses]
        _emit("\n".join(lines))
    else:
        lines = [
            f"# Norm cokernel orders: model={args.model}",
            "",
            "| t | order lower bound | exact |",
            "|---|---|---|",
        ]
        lines += [
            f"| {r['t']} | {r['order_lower_bound']} "
            f"| {'yes' if r['exact_for_ideal_residue'] else 'no'} |"
            for r in rows
        ]
        lines += ["", "Odd primes with a normal maximal subgroup of that index:", ""]
        lines += [
            f"- p = {w['p']}: witness {w['element']} ({w['reason']})"
            for w in witnesses
        ]
        _emit("\n".join(lines))
    return EXIT_OK


# -- verify -----------------------------------------------------------

def _run_suites(names: Sequence[str], cfg: RunConfig) -> List[CheckResult]:
    if len(names) == 1:
        return SUITES[names[0]](cfg)
    # fan out across worker threads, assemble in canonical order
    with ThreadPoolExecutor(max_workers=len(names)) as pool:
        blocks = list(pool.map(lambda name: SUITES[name](cfg), names))
    return [result for block in blocks for result in block]


def cli_verify(args) -> int:
    cfg = RunConfig(
        seed=args.seed,
        fmt=args.format,
        samples=args.samples,
        quick=args.quick,
    )
    names = SUITE_NAMES if args.suite == "all" else (args.suite,)
    results = _run_suites(names, cfg)
    failures = sum(1 for r in results if not r.passed)

    if args.format == "json":
        payload = {
            "command": "verify",
            "suite": args.suite,
            "seed": args.seed,
            "checks": [
                {
                    "suite": r.suite,
                    "name": r.name,
                    "passed": r.passed,
                    "samples": r.samples,
                    "counterexample": r.counterexample,
                }
                for r in results
            ],
            "failures": failures,
        }
        _emit(json.dumps(payload, indent=2))
    elif args.format == "csv":
        lines = ["suite,check,passed,samples,counterexample"]
        lines += [
            _csv_line([r.suite, r.name, "yes" if r.passed else "no",
                       r.samples, r.counterexample])
            for r in results
        ]
        _emit("\n".join(lines))
    else:
        lines = []
        for r in results:
            verdict = "PASS" if r.passed else "FAIL"
            tail = f" ({r.samples} samples)"
            if not r.passed:
                tail += f": {r.counterexample}"
            lines.append(f"{verdict} {r.suite}.{r.name}{tail}")
        lines.append(f"done: {len(results)} checks, {failures} failures")
        _emit("\n".join(lines))
    return EXIT_OK if failures == 0 else EXIT_FAIL


# -- entry point ------------------------------------------------------

def _default_precision() -> int:
    raw = os.environ.get(PRECISION_ENV, "")
    try:
        value = int(raw)
    except ValueError:
        return DEFAULT_PRECISION
    return value if value > 0 else DEFAULT_PRECISION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="divalg",
        description="Exact verification suites for quaternion division algebras "
                    "over euclidean fields",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    climb = sub.add_parser("climb", help="produce and check a conjugation word carrying i to a target")
    climb.add_argument("--model", choices=("constructible", "puiseux"), default="constructible")
    climb.add_argument("--y", required=True, help="climbing generator, quaternion literal")
    climb.add_argument("--gamma", required=True, help="target pure quaternion literal")
    climb.add_argument("--order", type=int, default=DEFAULT_ORDER,
                       help="series working order (puiseux model only)")
    climb.add_argument("--max-order", type=int, default=MAX_ORDER,
                       help="retry cap for the working order")
    climb.add_argument("--seed", type=int, default=0)
    climb.add_argument("--format", choices=("markdown", "csv", "json"), default="markdown")
    climb.set_defaults(run=cli_climb)

    dihedral = sub.add_parser("dihedral", help="finite quotient report of the cyclic division algebra")
    dihedral.add_argument("--q", type=int, required=True, help="residue field size, a prime power")
    dihedral.add_argument("--n", type=int, default=2, help="degree of the cyclic extension")
    dihedral.add_argument("--precision", type=int, default=_default_precision())
    dihedral.add_argument("--seed", type=int, default=0)
    dihedral.add_argument("--budget", type=int, default=2000,
                          help="sampling budget for the coverage check")
    dihedral.add_argument("--format", choices=("markdown", "csv", "json"), default="markdown")
    dihedral.set_defaults(run=cli_dihedral)

    ck1 = sub.add_parser("ck1", help="norm cokernel table with witness list")
    ck1.add_argument("--model", choices=("constructible", "puiseux"), default="constructible")
    ck1.add_argument("--t", default=None, help="matrix size or range lo..hi (at most 1000)")
    ck1.add_argument("--bound", type=int, default=PRIME_BOUND,
                     help="upper bound for the witness prime sweep")
    ck1.add_argument("--format", choices=("markdown", "csv", "json"), default="markdown")
    ck1.set_defaults(run=cli_ck1)

    verify = sub.add_parser("verify", help="run the module property suites")
    verify.add_argument("--suite", choices=SUITE_NAMES + ("all",), default="all")
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--samples", type=int, default=None,
                        help="cap the per-check sample counts")
    verify.add_argument("--quick", action="store_true",
                        help="reduced sample counts and sweep bounds")
    verify.add_argument("--format", choices=("markdown", "csv", "json"), default="markdown")
    verify.set_defaults(run=cli_verify)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.run(args)


if __name__ == "__main__":
    raise SystemExit(main())
