"""Exact plane and space rotations over an ordered euclidean field model.

``Rot2`` is a point (c, s) on the unit circle acting on 2-vectors by the
usual matrix [[c, -s], [s, c]]; composition is the angle-sum formula and
``r2_sqrt`` is the half-angle formula, so the group is exactly
2-divisible.  ``Mat3`` is a plain 3x3 matrix; for special orthogonal
members ``r3_axis`` extracts the fixed axis by an exact kernel
computation and ``r3_sqrt`` halves the rotation angle in the plane
perpendicular to it.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import NotSpecialOrthogonal, NotUnit
from .fieldmodels import FieldModel, not_certified_nonzero
from .quaternions import Frame, PureQuaternion, Quaternion, complete_frame
from .towers import Sign


class Rot2:
    """A rotation of the plane, stored as the unit vector (c, s)."""

    __slots__ = ("model", "c", "s")

    def __init__(self, model: FieldModel, c, s, check: bool = True):
        self.model = model
        self.c = model.ensure(c)
        self.s = model.ensure(s)
        if check and not model.negligible(
            self.c * self.c + self.s * self.s - 1
        ):
            raise NotUnit("rotation pair must satisfy c**2 + s**2 = 1")

    @classmethod
    def identity(cls, model: FieldModel) -> "Rot2":
        return cls(model, 1, 0, check=False)

    def inverse(self) -> "Rot2":
        return Rot2(self.model, self.c, -self.s, check=False)

    def apply(self, x, y):
        """Matrix action on a 2-vector."""
        e = self.model.ensure
        x, y = e(x), e(y)
        return (self.c * x - self.s * y, self.s * x + self.c * y)

    def equals(self, other: "Rot2") -> bool:
        return self.model.is_zero(self.c - other.c) and self.model.is_zero(
            self.s - other.s
        )

    def __eq__(self, other):
        if not isinstance(other, Rot2):
            return NotImplemented
        return self.equals(other)

    __hash__ = None

    def __repr__(self):
        m = self.model
        return f"Rot2({m.render(self.c)}, {m.render(self.s)})"


def r2_mul(a: Rot2, b: Rot2) -> Rot2:
    return Rot2(
        a.model, a.c * b.c - a.s * b.s, a.s * b.c + a.c * b.s, check=False
    )


def r2_sqrt(a: Rot2) -> Rot2:
    """The half-angle rotation B with B*B = A.

    Convention: the cosine of the half angle is the nonnegative root of
    (c + 1)/2; at c = -1 the result is (0, 1).
    """
    model = a.model
    half_c2 = (a.c + 1) / 2
    if not_certified_nonzero(model, half_c2):
        return Rot2(model, 0, 1, check=False)
    b_c = model.sqrt(half_c2)
    b_s = a.s * model.invert(b_c + b_c)
    return Rot2(model, b_c, b_s, check=False)


def r2_between(model: FieldModel, u, w) -> Rot2:
    """The rotation carrying the unit vector u to the unit vector w."""
    ux, uy = (model.ensure(u[0]), model.ensure(u[1]))
    wx, wy = (model.ensure(w[0]), model.ensure(w[1]))
    return Rot2(model, ux * wx + uy * wy, ux * wy - uy * wx, check=False)


class Mat3:
    """A 3x3 matrix of field elements, row major."""

    __slots__ = ("model", "rows")

    def __init__(self, model: FieldModel, rows, check: bool = False):
        e = model.ensure
        self.model = model
        self.rows = tuple(tuple(e(v) for v in row) for row in rows)
        if len(self.rows) != 3 or any(len(r) != 3 for r in self.rows):
            raise ValueError("need exactly 3 rows of 3 entries")
        if check and not self.is_special_orthogonal():
            raise NotSpecialOrthogonal("matrix is not a rotation")

    @classmethod
    def identity(cls, model: FieldModel) -> "Mat3":
        return cls(model, ((1, 0, 0), (0, 1, 0), (0, 0, 1)))

    def __mul__(self, other: "Mat3") -> "Mat3":
        if not isinstance(other, Mat3):
            return NotImplemented
        rows = []
        for i in range(3):
            row = []
            for j in range(3):
                acc = self.rows[i][0] * other.rows[0][j]
                acc = acc + self.rows[i][1] * other.rows[1][j]
                acc = acc + self.rows[i][2] * other.rows[2][j]
                row.append(acc)
            rows.append(row)
        return Mat3(self.model, rows)

    def apply(self, v):
        e = self.model.ensure
        v = tuple(e(x) for x in v)
        return tuple(
            r[0] * v[0] + r[1] * v[1] + r[2] * v[2] for r in self.rows
        )

    def transpose(self) -> "Mat3":
        return Mat3(self.model, tuple(zip(*self.rows)))

    def det(self):
        r = self.rows
        return (
            r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1])
            - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
            + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0])
        )

    def equals(self, other: "Mat3") -> bool:
        return all(
            self.model.is_zero(a - b)
            for ra, rb in zip(self.rows, other.rows)
            for a, b in zip(ra, rb)
        )

    def __eq__(self, other):
        if not isinstance(other, Mat3):
            return NotImplemented
        return self.equals(other)

    __hash__ = None

    def is_identity(self) -> bool:
        return all(
            self.model.negligible(self.rows[i][j] - (1 if i == j else 0))
            for i in range(3)
            for j in range(3)
        )

    def is_special_orthogonal(self) -> bool:
        gram = self * self.transpose()
        ok = self.model.negligible(self.det() - 1)
        return ok and all(
            self.model.negligible(gram.rows[i][j] - (1 if i == j else 0))
            for i in range(3)
            for j in range(3)
        )

    def __repr__(self):
        m = self.model
        body = "; ".join(
            ", ".join(m.render(v) for v in row) for row in self.rows
        )
        return f"Mat3([{body}])"


def r3_conj_matrix(x: Quaternion, frame: Frame) -> Mat3:
    """Matrix of v -> x v x**-1 in frame coordinates, for x = c + s*p.

    The axis p = frame.p is fixed and the (q, r) plane turns by the
    doubled angle, so the matrix is the familiar block
    [[1, 0, 0], [0, c**2 - s**2, -2cs], [0, 2cs, c**2 - s**2]].
    """
    from .errors import FrameMismatch

    model = x.algebra.field
    if not model.negligible(x.nrd() - 1):
        raise NotUnit("conjugation matrix needs a unit quaternion")
    pure = x.pure_part()
    c = x.scalar_part()
    s = pure.dot(frame.p)
    axial = frame.p.scaled(s)
    if not all(model.negligible(v) for v in (pure - axial).components()):
        raise FrameMismatch("pure part must be parallel to the frame axis")
    cc = c * c - s * s
    ss = (c * s) + (c * s)
    return Mat3(model, ((1, 0, 0), (0, cc, -ss), (0, ss, cc)))


def _kernel_direction(model: FieldModel, m: Mat3):
    """A nonzero rational-elimination solution of (m - I)v = 0.

    Fraction-free forward elimination with certified pivots; the free
    variable of smallest index is set to 1.  For m = I every vector
    works and the convention is (1, 0, 0).
    """
    rows = [
        [m.rows[i][j] - (1 if i == j else 0) for j in range(3)]
        for i in range(3)
    ]
    pivots = {}
    rank_rows = []
    for col in range(3):
        pick = None
        for r in range(3):
            if r in [pr for pr, _ in rank_rows]:
                continue
            if not not_certified_nonzero(model, rows[r][col]):
                pick = r
                break
        if pick is None:
            continue
        for r in range(3):
            if r == pick or r in [pr for pr, _ in rank_rows]:
                continue
            if not_certified_nonzero(model, rows[r][col]):
                continue
            factor = rows[r][col]
            lead = rows[pick][col]
            for j in range(3):
                rows[r][j] = rows[r][j] * lead - rows[pick][j] * factor
        rank_rows.append((pick, col))
        pivots[col] = pick
    free = [c for c in range(3) if c not in pivots]
    if not free:
        raise NotSpecialOrthogonal("rotation must fix a direction")
    v = [model.zero(), model.zero(), model.zero()]
    v[free[0]] = model.one()
    # back substitution over pivot columns, highest first
    for pick, col in sorted(rank_rows, key=lambda rc: -rc[1]):
        acc = model.zero()
        for j in range(col + 1, 3):
            acc = acc + rows[pick][j] * v[j]
        v[col] = -acc * model.invert(rows[pick][col])
    return tuple(v)


def r3_axis(m: Mat3):
    """Unit vector fixed by a special orthogonal matrix.

    Deterministic: exact kernel of m - I with the smallest-index free
    coordinate set to 1, then normalised; sign follows that convention.
    The identity has every axis and returns (1, 0, 0).
    """
    if not m.is_special_orthogonal():
        raise NotSpecialOrthogonal("axis extraction needs a rotation")
    model = m.model
    if m.is_identity():
        return (model.one(), model.zero(), model.zero())
    v = _kernel_direction(model, m)
    n2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2]
    scale = model.invert(model.sqrt(n2))
    return tuple(x * scale for x in v)


def r3_sqrt(m: Mat3, algebra=None) -> "Mat3":
    """A rotation B with B*B = m, by halving the angle about the axis.

    The rotation block perpendicular to the axis is read off in a
    completed frame, halved with r2_sqrt, and conjugated back into
    ambient coordinates.  The result may extend the coefficient tower.
    """
    if not m.is_special_orthogonal():
        raise NotSpecialOrthogonal("square root needs a rotation")
    model = m.model
    if m.is_identity():
        return Mat3.identity(model)
    axis = r3_axis(m)
    if algebra is None:
        from .quaternions import QuaternionAlgebra

        algebra = QuaternionAlgebra.hamilton(model)
    frame = complete_frame(algebra.pure(*axis))
    qc = frame.q.components()
    rc = frame.r.components()
    image_q = m.apply(qc)
    block_c = sum((a * b for a, b in zip(image_q, qc)), model.zero())
    block_s = sum((a * b for a, b in zip(image_q, rc)), model.zero())
    half = r2_sqrt(Rot2(model, block_c, block_s, check=False))
    basis = Mat3(model, tuple(zip(axis, qc, rc)))  # columns p, q, r
    half_block = Mat3(
        model,
        ((1, 0, 0), (0, half.c, -half.s), (0, half.s, half.c)),
    )
    return basis * half_block * basis.transpose()
