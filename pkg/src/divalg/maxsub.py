"""The maximal-subgroup construction on the unit sphere of pure quaternions.

Over a euclidean field with infinitesimals, the elements x of the
quaternion group whose conjugation action sends i infinitesimally close
to +-i form a proper subgroup G.  Adjoining any outside element y
generates everything: conjugation by y tilts the latitude foliation of
the sphere, and finitely many alternations of y with rotations about i
(the stabilizer G0) carry i to an arbitrary unit pure quaternion.  This
module implements that climb as an explicit, machine-checkable group
word, together with the membership tests for G and its building blocks.

Climb words are exact.  Intermediate descent steps are routed through
rational points of the sphere, so only the last two tokens of a word
need a square root beyond the base rationals; evaluation and the final
conjugation check then stay cheap even for words with hundreds of
generator applications.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, isqrt
from typing import List, Optional, Sequence, Tuple

from .errors import (
    LatitudeMismatch,
    NotDivision,
    NotPrime,
    NotUnit,
    PrecisionExhausted,
    UnboundGenerator,
    WrongAlgebra,
    WrongModel,
    YInG,
)
from .fieldmodels import (
    CONSTRUCTIBLE,
    FieldModel,
    PuiseuxField,
    not_certified_nonzero,
)
from .quaternions import Frame, PureQuaternion, Quaternion, QuaternionAlgebra
from .rotations import Rot2, r2_sqrt
from .towers import Sign


class SphereContext:
    """Working data for the sphere construction: the algebra and model."""

    __slots__ = ("model", "algebra")

    def __init__(self, model: FieldModel = CONSTRUCTIBLE, algebra=None):
        if algebra is None:
            algebra = QuaternionAlgebra.hamilton(model)
        if not algebra.is_hamilton_presentation():
            raise WrongAlgebra("sphere construction needs the (-1,-1) algebra")
        if not algebra.is_division():
            raise NotDivision("sphere construction needs a division algebra")
        self.model = algebra.field
        self.algebra = algebra

    def at_order(self, order: int) -> "SphereContext":
        return SphereContext(self.model.at_order(order))

    def __repr__(self):
        return f"SphereContext({self.model!r})"


# -- group words ------------------------------------------------------

Y = "y"
YINV = "y^-1"
J = "j"
G0 = "g0"


def _needs_parens(rendered: str) -> bool:
    tail = rendered[1:]
    return " " in rendered or "+" in tail or "-" in tail


def _render_coeff(rendered: str) -> str:
    return f"({rendered})" if _needs_parens(rendered) else rendered


class Token:
    """One generator with a repeat count; G0 tokens carry their element."""

    __slots__ = ("kind", "count", "element")

    def __init__(self, kind: str, count: int = 1, element: Quaternion = None):
        if kind not in (Y, YINV, J, G0):
            raise ValueError(f"unknown generator kind {kind!r}")
        if count < 1:
            raise ValueError("token count must be positive")
        if (element is not None) != (kind == G0):
            raise ValueError("exactly the g0 tokens carry an element")
        if kind == G0:
            field = element.algebra.field
            if not (field.negligible(element.t) and field.negligible(element.u)):
                raise ValueError("g0 token element must stabilize i")
            if not_certified_nonzero(field, element.nrd()):
                raise ValueError("g0 token element must be invertible")
        self.kind = kind
        self.count = count
        self.element = element

    def inverse(self) -> "Token":
        if self.kind == Y:
            return Token(YINV, self.count)
        if self.kind == YINV:
            return Token(Y, self.count)
        if self.kind == G0:
            return Token(G0, self.count, self.element.inverse())
        raise ValueError("j inverses need a scalar sign token")

    def render(self) -> str:
        if self.kind == G0:
            f = self.element.algebra.field
            real = _render_coeff(f.render(self.element.r))
            imag = f.render(self.element.s)
            if _needs_parens(imag):
                body = f"{real}+({imag})i"
            elif imag.startswith("-"):
                body = f"{real}-{imag[1:]}i"
            else:
                body = f"{real}+{imag}i"
            core = f"g0({body})"
        else:
            core = self.kind
        return core if self.count == 1 else f"{core}^{self.count}"


class GroupWord:
    """An ordered product of generators from {y, y^-1, j, G0 elements}.

    Evaluation is the left-to-right product; the quaternion bound to the
    y slots is carried on the word itself.
    """

    __slots__ = ("context", "tokens", "binding")

    def __init__(self, context: SphereContext, tokens: Sequence[Token] = (),
                 binding: Quaternion = None):
        self.context = context
        self.tokens = tuple(tokens)
        self.binding = binding

    def bound(self, y: Quaternion) -> "GroupWord":
        return GroupWord(self.context, self.tokens, y)

    def __add__(self, other: "GroupWord") -> "GroupWord":
        if not isinstance(other, GroupWord):
            return NotImplemented
        binding = self.binding if self.binding is not None else other.binding
        return GroupWord(self.context, self.tokens + other.tokens, binding)

    def __len__(self):
        return sum(t.count for t in self.tokens)

    def y_applications(self) -> int:
        return sum(t.count for t in self.tokens if t.kind in (Y, YINV))

    def inverse(self) -> "GroupWord":
        out: List[Token] = []
        algebra = self.context.algebra
        for token in reversed(self.tokens):
            if token.kind == J:
                # j^-1 = -j: keep the j and emit a central sign token
                out.append(Token(J, token.count))
                if token.count % 2:
                    out.append(Token(G0, 1, algebra.scalar(-1)))
            else:
                out.append(token.inverse())
        return GroupWord(self.context, out, self.binding)

    def evaluate(self) -> Quaternion:
        algebra = self.context.algebra
        acc = algebra.one
        inverse_binding = None
        for token in self.tokens:
            if token.kind in (Y, YINV):
                if self.binding is None:
                    raise UnboundGenerator("word has no quaternion bound to y")
                if token.kind == Y:
                    base = self.binding
                else:
                    if inverse_binding is None:
                        inverse_binding = self.binding.inverse()
                    base = inverse_binding
            elif token.kind == J:
                base = algebra.j
            else:
                base = token.element
            acc = acc * base ** token.count
        return acc

    def render(self) -> str:
        if not self.tokens:
            return "1"
        return " ".join(t.render() for t in self.tokens)

    def __repr__(self):
        return f"GroupWord({self.render()})"


def ms_word_eval(word: GroupWord) -> Quaternion:
    return word.evaluate()


# -- climb traces -----------------------------------------------------

@dataclass(frozen=True)
class ClimbStep:
    latitude_from: object
    latitude_to: object
    positioning: Optional[Quaternion]
    generator: str  # "y", "j" or "g0"


@dataclass(frozen=True)
class ClimbTrace:
    normalized_c: object
    normalized_s: object
    frame: Frame
    steps: Tuple[ClimbStep, ...]
    step_bound: int

    def y_steps(self) -> int:
        return sum(1 for s in self.steps if s.generator == "y")

    def validate(self, model: FieldModel):
        """Checks the latitude windows and the application bound.

        A step is rejected only when it is certifiably outside both
        allowed windows; undecidable comparisons in the truncated model
        pass.
        """
        if self.y_steps() > self.step_bound:
            raise ValueError(
                f"{self.y_steps()} y-applications exceed bound {self.step_bound}"
            )
        c = self.normalized_c
        s2 = model.ensure(1) - c * c
        for step in self.steps:
            if step.generator != "y":
                continue
            frm = model.ensure(step.latitude_from)
            to = model.ensure(step.latitude_to)
            descent_ok = not (
                _certainly_positive(model, to - frm)
                or _certainly_positive(model, frm - s2 - to)
            )
            upward_ok = not (
                _certainly_positive(model, c - to)
                or _certainly_positive(model, to - 1)
            )
            if not (descent_ok or upward_ok):
                raise ValueError(
                    "climb step leaves both permitted latitude windows"
                )


def _certainly_positive(model: FieldModel, a) -> bool:
    try:
        return model.sign(a) == Sign.POSITIVE
    except PrecisionExhausted:
        return False


def _certainly_negative(model: FieldModel, a) -> bool:
    try:
        return model.sign(a) == Sign.NEGATIVE
    except PrecisionExhausted:
        return False


# -- membership tests -------------------------------------------------

def ms_in_delta(alpha: PureQuaternion, ctx: SphereContext) -> bool:
    """Infinitesimally near i: squared distance in the valuation ideal."""
    model = ctx.model
    if not model.negligible(alpha.norm2() - 1):
        raise NotUnit("cap membership is defined on the unit sphere")
    offset = alpha - ctx.algebra.i_pure
    return model.in_valuation_ideal(offset.norm2())


def ms_in_g(x: Quaternion, ctx: SphereContext) -> bool:
    """Membership in the candidate subgroup: x conjugates i to within an
    infinitesimal of i or of -i."""
    image = x.conj_action(ctx.algebra.i_pure)
    return ms_in_delta(image, ctx) or ms_in_delta(-image, ctx)


# -- stabilizer moves -------------------------------------------------

def ms_g0_move(frm: PureQuaternion, to: PureQuaternion,
               ctx: SphereContext) -> Quaternion:
    """A rotation about i carrying frm to to, as a unit c0 + s0*i.

    Both points must be unit and share their i-coordinate.  When the
    shared latitude is a pole the circle is a single point and the
    identity is returned.
    """
    model = ctx.model
    for v in (frm, to):
        if not model.negligible(v.norm2() - 1):
            raise NotUnit("latitude moves are defined on the unit sphere")
    a = frm.components()[0]
    if not model.negligible(to.components()[0] - a):
        raise LatitudeMismatch("points do not share a latitude")
    radius2 = model.ensure(1) - a * a
    if not_certified_nonzero(model, radius2):
        return ctx.algebra.one
    inv_r2 = model.invert(radius2)
    fj, fk = frm.components()[1], frm.components()[2]
    tj, tk = to.components()[1], to.components()[2]
    rot = Rot2(model, (fj * tj + fk * tk) * inv_r2,
               (fj * tk - fk * tj) * inv_r2)
    half = r2_sqrt(rot)
    return ctx.algebra.quaternion(half.c, half.s)


# -- reduction of the outside generator -------------------------------

@dataclass
class _Reduced:
    c: object            # latitude-transfer cosine, nonnegative
    s: object            # latitude-transfer sine, nonnegative
    s2: object           # 1 - c**2, exactly s**2
    frame: Frame
    pre_tokens: Tuple[Token, ...]   # value: the unit reduced generator
    workpiece: Quaternion           # unnormalized reduced generator
    action: Tuple[Tuple[object, ...], ...]  # ambient conjugation matrix rows


def _conj_rows(w: Quaternion, ctx: SphereContext):
    """Rows of the ambient matrix of v -> w v w**-1 on pure quaternions."""
    cols = []
    for basis in (ctx.algebra.i_pure, ctx.algebra.pure(0, 1),
                  ctx.algebra.pure(0, 0, 1)):
        cols.append(w.conj_action(basis).components())
    return tuple(tuple(cols[j][i] for j in range(3)) for i in range(3))


def _reduce(y: Quaternion, ctx: SphereContext) -> _Reduced:
    model = ctx.model
    algebra = ctx.algebra
    if ms_in_g(y, ctx):
        raise YInG("generator already lies in the candidate subgroup")

    tokens: List[Token] = [Token(Y)]
    w = y
    # clear the i-component by a left stabilizer factor; its scalar+i
    # part cannot vanish for y outside G, so the inverse exists
    head = algebra.quaternion(w.r, w.s)
    if not (model.negligible(w.s) and model.negligible(w.r - 1)):
        g1 = head.inverse()
        tokens.insert(0, Token(G0, 1, g1))
        w = g1 * w

    n2 = w.t * w.t + w.u * w.u
    if not_certified_nonzero(model, n2):
        raise YInG("reduced generator stabilizes i")  # pragma: no cover

    # make the transferred cosine nonnegative: multiply by the equatorial
    # direction of the generator's own axis (an element of G), which
    # swaps the roles of the half-angle cosine and sine
    if _certainly_negative(model, w.r * w.r - n2):
        direction = algebra.quaternion(w.t, w.u)
        tokens.extend([
            Token(G0, 1, direction),
            Token(J),
            Token(G0, 1, algebra.scalar(-1)),
        ])
        w = -(w * (direction * algebra.j))
        n2 = w.t * w.t + w.u * w.u

    nrd = w.nrd()
    scale = model.invert(model.sqrt(nrd))
    if not model.negligible(nrd - 1):
        tokens.insert(0, Token(G0, 1, algebra.scalar(scale)))

    c = (w.r * w.r - n2) * model.invert(nrd)
    s = (w.r + w.r) * model.sqrt(n2) * model.invert(nrd)
    s2 = model.ensure(1) - c * c

    if model.in_valuation_ideal(s2):
        raise YInG("latitude transfer is degenerate")  # pragma: no cover

    axis = w.pure_part().scaled(model.invert(model.sqrt(n2)))
    seam = ctx.algebra.i_pure.cross(axis)
    frame = Frame(axis, seam, ctx.algebra.i_pure)

    return _Reduced(c, s, s2, frame, tuple(tokens), w, _conj_rows(w, ctx))


def ms_normalize_y(y: Quaternion, ctx: SphereContext):
    """Reduction of an outside generator to latitude-transfer form.

    Returns (c, s, frame, pre_word): the transfer cosine and sine (both
    nonnegative, with s a unit of the valuation ring), the frame whose
    first vector is the reduced rotation axis (perpendicular to i), and
    a word over {y, j, G0} evaluating to the unit reduced generator.
    """
    red = _reduce(y, ctx)
    word = GroupWord(ctx, red.pre_tokens, y)
    return red.c, red.s, red.frame, word


# -- rational helpers for the descent search --------------------------

def _sqrt_bounds(value: Fraction, bits: int) -> Tuple[Fraction, Fraction]:
    """Rational lower/upper bounds on sqrt(value) within 2**-bits-ish."""
    p, q = value.numerator, value.denominator
    scale = 1 << bits
    root = isqrt(p * q * scale * scale)
    return Fraction(root, q * scale), Fraction(root + 1, q * scale)


def _simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """A smallest-denominator rational in the closed interval."""
    if hi < lo:
        lo, hi = hi, lo
    if lo <= 0 <= hi:
        return Fraction(0)
    if hi < 0:
        return -_simplest_between(-hi, -lo)
    # walk the continued fraction shared by the endpoints until an
    # integer separates them; rational endpoints keep this finite
    coefficients = []
    while True:
        floor_lo = lo.numerator // lo.denominator
        if floor_lo == lo:
            coefficients.append(floor_lo)
            break
        if floor_lo + 1 <= hi:
            coefficients.append(floor_lo + 1)
            break
        coefficients.append(floor_lo)
        lo, hi = 1 / (hi - floor_lo), 1 / (lo - floor_lo)
    value = Fraction(coefficients[-1])
    for term in reversed(coefficients[:-1]):
        value = term + 1 / value
    return value


def _latitude_after(point, rows, tau: Fraction) -> Fraction:
    """i-coordinate after rotating about i by tau's angle, then the
    generator transfer; all rational."""
    den = 1 + tau * tau
    cg = (1 - tau * tau) / den
    sg = (tau + tau) / den
    pj = cg * point[1] - sg * point[2]
    pk = sg * point[1] + cg * point[2]
    r0 = rows[0]
    return r0[0] * point[0] + r0[1] * pj + r0[2] * pk


def _window_tau(point, rows, lo: Fraction, hi: Fraction) -> Optional[Fraction]:
    """A rational rotation parameter landing the next latitude in
    [lo, hi]; None encodes the half-turn (rotation by pi).

    Brackets the rotation parameters of the two window edges with
    outward-rounded square-root bounds and takes the simplest rational
    strictly between them.  The bracket width is set by the latitude
    window, not by the size of the current coordinates, so parameter
    denominators stay small along the whole descent.
    """
    r0 = rows[0]
    u = r0[1] * point[1] + r0[2] * point[2]
    w = r0[2] * point[1] - r0[1] * point[2]
    base = r0[0] * point[0]
    for bits in (32, 64, 128, 256):
        for root_sign in (1, -1):
            edges = []
            for v in (lo, hi):
                m = v - base
                den = u + m
                disc = u * u + w * w - m * m
                if den == 0 or disc < 0:
                    edges = None
                    break
                root_lo, root_hi = _sqrt_bounds(disc, bits)
                if root_sign > 0:
                    span = ((w + root_lo) / den, (w + root_hi) / den)
                else:
                    span = ((w - root_hi) / den, (w - root_lo) / den)
                edges.append(tuple(sorted(span)))
            if edges is None:
                continue
            (a1, b1), (a2, b2) = edges
            if b1 < a2:
                inner = (b1, a2)
            elif b2 < a1:
                inner = (b2, a1)
            else:
                continue  # brackets overlap: retry with sharper bounds
            cand = _simplest_between(*inner)
            if lo <= _latitude_after(point, rows, cand) <= hi:
                return cand
    # degenerate edge geometry: solve for the midpoint instead
    mid = lo + (hi - lo) / 2
    m = mid - base
    den = u + m
    if den == 0:
        if w == 0:
            return None  # only the half-turn reaches the midpoint
        return (m - u) / (2 * w)
    disc = u * u + w * w - m * m
    if disc < 0:  # pragma: no cover - excluded by the window inequalities
        raise ValueError("latitude window is out of reach")
    for bits in (64, 256, 1024, 4096):
        root_lo, root_hi = _sqrt_bounds(disc, bits)
        for root_pair in ((w + root_lo, w + root_hi),
                          (w - root_hi, w - root_lo)):
            cand = _simplest_between(root_pair[0] / den, root_pair[1] / den)
            if lo <= _latitude_after(point, rows, cand) <= hi:
                return cand
    raise ValueError("window search failed to converge")  # pragma: no cover


def _rotate_about_i(point, tau):
    """Apply the rational rotation with half-angle tangent tau; tau None
    means the half-turn."""
    if tau is None:
        return (point[0], -point[1], -point[2])
    den = 1 + tau * tau
    cg = (1 - tau * tau) / den
    sg = (tau + tau) / den
    return (
        point[0],
        cg * point[1] - sg * point[2],
        sg * point[1] + cg * point[2],
    )


def _apply_rows(rows, point):
    return tuple(
        r[0] * point[0] + r[1] * point[1] + r[2] * point[2] for r in rows
    )


def _tau_token(ctx: SphereContext, tau) -> Token:
    algebra = ctx.algebra
    if tau is None:
        return Token(G0, 1, algebra.i)
    return Token(G0, 1, algebra.quaternion(1, tau))


# -- the climb itself -------------------------------------------------

def ms_climb(y: Quaternion, gamma: PureQuaternion,
             ctx: SphereContext) -> Tuple[GroupWord, ClimbTrace]:
    """A group word carrying i to gamma by conjugation.

    In the constructible model the landing is sign-exact; in the
    truncated model it is certified to the working tolerance, retrying
    at doubled orders up to the policy cap.
    """
    model = ctx.model
    if isinstance(model, PuiseuxField):
        failure = None
        work = ctx
        while True:
            try:
                # inputs are certified against the entry tolerance even
                # when the working order is raised
                return _climb(y, gamma, work, check_model=model)
            except PrecisionExhausted as exc:
                failure = exc
                try:
                    work = work.at_order(work.model.doubled().order)
                except PrecisionExhausted:
                    raise failure from None
    return _climb(y, gamma, ctx)


def _climb(y: Quaternion, gamma: PureQuaternion, ctx: SphereContext,
           check_model: FieldModel = None) -> Tuple[GroupWord, ClimbTrace]:
    model = ctx.model
    algebra = ctx.algebra
    if check_model is None:
        check_model = model
    if not check_model.negligible(gamma.norm2() - 1):
        raise NotUnit("climb targets live on the unit sphere")

    red = _reduce(y, ctx)

    gi, gj, gk = gamma.components()
    if all(check_model.negligible(v) for v in (gi - 1, gj, gk)):
        word = GroupWord(ctx, (), y)
        trace = _trace(red, (), model)
        trace.validate(model)
        return word, trace
    if all(check_model.negligible(v) for v in (gi + 1, gj, gk)):
        word = GroupWord(ctx, (Token(J),), y)
        trace = _trace(red, (ClimbStep(model.ensure(1), model.ensure(-1),
                                       None, "j"),), model)
        trace.validate(model)
        return word, trace

    if _certainly_negative(model, gi):
        flipped = algebra.pure(-gi, gj, -gk)
        sub_word, sub_trace = _climb(y, flipped, ctx, check_model)
        word = GroupWord(ctx, (Token(J),), y) + sub_word
        steps = sub_trace.steps + (
            ClimbStep(-gi, gi, None, "j"),
        )
        trace = _trace(red, steps, model)
        trace.validate(model)
        return word, trace

    rational = _rational_inputs(model, red, gamma)
    if rational is not None:
        actions, steps = _plan_rational(ctx, red, *rational)
    else:
        actions, steps = _plan_generic(ctx, red, gamma)

    tokens: List[Token] = []
    for block in reversed(actions):
        tokens.extend(block)
    word = GroupWord(ctx, tokens, y)
    trace = _trace(red, tuple(steps), model)
    trace.validate(model)
    return word, trace


def _trace(red: _Reduced, steps, model) -> ClimbTrace:
    bound = _step_bound(model, red.c, red.s2)
    return ClimbTrace(red.c, red.s, red.frame, tuple(steps), bound)


def _step_bound(model, c, s2) -> int:
    ratio = c * model.invert(s2)
    fr = _fraction_of(model, ratio)
    if fr is not None:
        return ceil(fr) + 3
    # certified smallest integer bound for the truncated model
    k = 0
    while _certainly_positive(model, ratio - k):
        k += 1
        if k > 1_000_000:  # pragma: no cover
            raise PrecisionExhausted("latitude step bound did not certify")
    return k + 3


def _fraction_of(model, value) -> Optional[Fraction]:
    if isinstance(model, PuiseuxField):
        return None
    try:
        return value.as_fraction()
    except ValueError:
        return None


def _rational_inputs(model, red: _Reduced, gamma):
    """Fractions for the fast path, or None when anything is irrational."""
    if isinstance(model, PuiseuxField):
        return None
    out = []
    for v in (red.c, red.s2, *gamma.components()):
        fr = _fraction_of(model, v)
        if fr is None:
            return None
        out.append(fr)
    rows = []
    for row in red.action:
        fr_row = []
        for v in row:
            fr = _fraction_of(model, v)
            if fr is None:
                return None
            fr_row.append(fr)
        rows.append(tuple(fr_row))
    c, s2, gi, gj, gk = out
    return c, s2, (gi, gj, gk), tuple(rows)


def _plan_rational(ctx: SphereContext, red: _Reduced, c: Fraction,
                   s2: Fraction, gamma3, rows):
    """Climb plan over rational ambient coordinates.

    Descent steps aim at narrow rational windows just under the maximal
    drop, which keeps every intermediate point rational; the final
    transfer and the landing rotation are solved exactly and are the
    only tokens that may extend the tower.
    """
    model = ctx.model
    target = gamma3[0]
    bound = ceil(c / s2) + 3
    width = s2 / (2 * bound)

    actions: List[Tuple[Token, ...]] = []
    steps: List[ClimbStep] = []
    point = (Fraction(1), Fraction(0), Fraction(0))

    # first application: i is fixed by the stabilizer, so no positioning
    before = point[0]
    point = _apply_rows(rows, point)
    steps.append(ClimbStep(model.ensure(before), model.ensure(point[0]),
                           None, "y"))
    actions.append(red.pre_tokens)

    if target < c:
        while point[0] - target > s2:
            lo = point[0] - s2
            tau = _window_tau(point, rows, lo, lo + width)
            before = point[0]
            point = _apply_rows(rows, _rotate_about_i(point, tau))
            token = _tau_token(ctx, tau)
            steps.append(ClimbStep(model.ensure(before),
                                   model.ensure(point[0]),
                                   token.element, "y"))
            actions.append((token,))
            actions.append(red.pre_tokens)

    # exact transfer onto the target latitude; may introduce sqrt(disc)
    exact_point, _, pos_token = _exact_transfer(
        ctx, point, red.action, target
    )
    steps.append(ClimbStep(model.ensure(point[0]), model.ensure(target),
                           pos_token.element if pos_token else None, "y"))
    if pos_token is not None:
        actions.append((pos_token,))
    actions.append(red.pre_tokens)

    final = _landing_token(ctx, exact_point, gamma3, target)
    if final is not None:
        steps.append(ClimbStep(model.ensure(target), model.ensure(target),
                               final.element, "g0"))
        actions.append((final,))
    return actions, steps


def _exact_transfer(ctx: SphereContext, point, rows, target):
    """Position and transfer so the new latitude equals target exactly.

    Works over the field model; point entries and target may be rational
    or model elements.  Returns the new ambient point, the rotation
    parameter and its token (None when no positioning is needed).
    """
    model = ctx.model
    e = model.ensure
    p = tuple(e(v) for v in point)
    r0 = tuple(e(v) for v in rows[0])
    u = r0[1] * p[1] + r0[2] * p[2]
    w = r0[2] * p[1] - r0[1] * p[2]
    m = e(target) - r0[0] * p[0]

    den = u + m
    if not_certified_nonzero(model, den):
        if not_certified_nonzero(model, w):
            tau = None  # half turn
        else:
            tau = (m - u) * model.invert(w + w)
    else:
        disc = u * u + w * w - m * m
        root = model.sqrt(disc)
        tau = (w + root) * model.invert(den)

    if tau is None:
        rotated = (p[0], -p[1], -p[2])
        token = _tau_token(ctx, None)
    elif model.negligible(tau):
        rotated = p
        token = None
    else:
        den2 = model.invert(e(1) + tau * tau)
        cg = (e(1) - tau * tau) * den2
        sg = (tau + tau) * den2
        rotated = (p[0], cg * p[1] - sg * p[2], sg * p[1] + cg * p[2])
        token = _tau_token(ctx, tau)
    lifted_rows = tuple(tuple(e(v) for v in row) for row in rows)
    return _apply_rows(lifted_rows, rotated), tau, token


def _landing_token(ctx: SphereContext, point, gamma3, latitude):
    """Rotation about i carrying the exact-latitude point onto gamma."""
    model = ctx.model
    e = model.ensure
    gj, gk = e(gamma3[1]), e(gamma3[2])
    pj, pk = e(point[1]), e(point[2])
    radius2 = e(1) - e(latitude) * e(latitude)
    inv = model.invert(radius2)
    cr = (pj * gj + pk * gk) * inv
    sr = (pj * gk - pk * gj) * inv
    if model.negligible(cr - 1) and model.negligible(sr):
        return None
    if not_certified_nonzero(model, cr + e(1)):
        return _tau_token(ctx, None)
    tau = sr * model.invert(cr + e(1))
    return _tau_token(ctx, tau)


def _plan_generic(ctx: SphereContext, red: _Reduced, gamma: PureQuaternion):
    """Climb plan with exact per-step transfers, for the truncated model
    and for irrational constructible input."""
    model = ctx.model
    target = gamma.components()[0]
    actions: List[Tuple[Token, ...]] = []
    steps: List[ClimbStep] = []

    point = tuple(ctx.algebra.i_pure.components())
    before = point[0]
    point = _apply_rows(red.action, point)
    steps.append(ClimbStep(before, point[0], None, "y"))
    actions.append(red.pre_tokens)

    # descend by slightly less than the permitted drop; the margin keeps
    # the discriminant positive and the step count within the bound
    bound = _step_bound(model, red.c, red.s2)
    drop = red.s2 * Fraction(2 * bound - 1, 2 * bound)
    guard = 0
    while _certainly_positive(model, point[0] - target - red.s2):
        before = point[0]
        next_lat = before - drop
        point, _, token = _exact_transfer(ctx, point, red.action, next_lat)
        steps.append(ClimbStep(before, next_lat,
                               token.element if token else None, "y"))
        if token is not None:
            actions.append((token,))
        actions.append(red.pre_tokens)
        guard += 1
        if guard > bound:  # pragma: no cover
            raise PrecisionExhausted("descent exceeded its step bound")

    before = point[0]
    point, _, token = _exact_transfer(ctx, point, red.action, target)
    steps.append(ClimbStep(before, target,
                           token.element if token else None, "y"))
    if token is not None:
        actions.append((token,))
    actions.append(red.pre_tokens)

    final = _landing_token(ctx, point, gamma.components(), target)
    if final is not None:
        steps.append(ClimbStep(target, target, final.element, "g0"))
        actions.append((final,))
    return actions, steps


# -- decomposition and the normal-subgroup test -----------------------

def ms_decompose(h: Quaternion, y: Quaternion,
                 ctx: SphereContext) -> Tuple[GroupWord, Quaternion]:
    """Write h as (climb word) * (stabilizer element).

    The word carries i to h * i * h**-1; its value z then satisfies
    z**-1 h in the stabilizer of i, so h = z * (z**-1 h) exhibits h in
    the group generated by y and G.
    """
    gamma = h.conj_action(ctx.algebra.i_pure)
    word, _ = ms_climb(y, gamma, ctx)
    z = word.evaluate()
    g0 = z.inverse() * h
    image = g0.conj_action(ctx.algebra.i_pure)
    drift = image - ctx.algebra.i_pure
    if not all(ctx.model.negligible(v) for v in drift.components()):
        raise PrecisionExhausted(
            "stabilizer residue of the decomposition did not certify"
        )
    return word, g0


def _is_odd_prime(p: int) -> bool:
    if p < 3 or p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def ms_normal_index_p_member(x: Quaternion, p: int,
                             ctx: SphereContext) -> bool:
    """Membership in the unique normal subgroup of index p (odd prime).

    Defined in the truncated model only: the quaternion valuation is
    half the valuation of the reduced norm, and membership asks for its
    class in the value group modulo p, where the dyadic rationals
    reduce modulo an odd prime like plain integers.
    """
    if not isinstance(ctx.model, PuiseuxField):
        raise WrongModel("the index-p normal subgroups need the valued model")
    if not _is_odd_prime(p):
        raise NotPrime(f"{p} is not an odd prime")
    value = x.nrd().valuation().half()
    return value.residue_mod(p) == 0
