"""Central quaternion algebras D(a, b) over a real quadratic field.

The algebra has basis {1, i, j, k} with i^2 = a, j^2 = b, ij = -ji = k;
the derived relations jk = -kj = -b*i, ki = -ik = -a*j and k^2 = -a*b
follow.  All arithmetic is exact.  Real places are classified per
embedding as Split (the completion is the 2x2 matrix algebra) or
Definite (Hamilton quaternions).
"""

from __future__ import annotations

import json
import math
from fractions import Fraction

from .numbers import FieldElem, QuadraticField, parse_field_elem


class AlgebraMismatch(ValueError):
    """Operands live in different quaternion algebras."""


class ZeroDivisor(ZeroDivisionError):
    """Inversion of an element with vanishing reduced norm."""


class QuatAlgebra:
    def __init__(self, field: QuadraticField, a, b):
        self.field = field
        self.a = a if isinstance(a, FieldElem) else field(a)
        self.b = b if isinstance(b, FieldElem) else field(b)
        if self.a.is_zero() or self.b.is_zero():
            raise ValueError("a and b must be nonzero")

    def __eq__(self, other):
        return (isinstance(other, QuatAlgebra)
                and self.field == other.field
                and self.a == other.a and self.b == other.b)

    def __hash__(self):
        return hash((self.field, self.a, self.b))

    def __repr__(self):
        return f"D({self.a},{self.b}) over {self.field}"

    def __call__(self, x=0, y=0, z=0, w=0) -> "Quat":
        return Quat(self, x, y, z, w)

    def zero(self):
        return self()

    def one(self):
        return self(1)

    def i(self):
        return self(0, 1)

    def j(self):
        return self(0, 0, 1)

    def k(self):
        return self(0, 0, 0, 1)

    def basis(self):
        return [self.one(), self.i(), self.j(), self.k()]


class Quat:
    """x + y*i + z*j + w*k with FieldElem components."""

    __slots__ = ("algebra", "x", "y", "z", "w")

    def __init__(self, algebra: QuatAlgebra, x=0, y=0, z=0, w=0):
        self.algebra = algebra
        F = algebra.field
        self.x = x if isinstance(x, FieldElem) else F(x)
        self.y = y if isinstance(y, FieldElem) else F(y)
        self.z = z if isinstance(z, FieldElem) else F(z)
        self.w = w if isinstance(w, FieldElem) else F(w)

    def _check(self, other) -> "Quat":
        if isinstance(other, Quat):
            if other.algebra != self.algebra:
                raise AlgebraMismatch("operands in different algebras")
            return other
        return Quat(self.algebra, other)

    def components(self):
        return (self.x, self.y, self.z, self.w)

    def __add__(self, other):
        other = self._check(other)
        return Quat(self.algebra, self.x + other.x, self.y + other.y,
                    self.z + other.z, self.w + other.w)

    __radd__ = __add__

    def __neg__(self):
        return Quat(self.algebra, -self.x, -self.y, -self.z, -self.w)

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) + (-self)

    def __mul__(self, other):
        other = self._check(other)
        a, b = self.algebra.a, self.algebra.b
        x1, y1, z1, w1 = self.components()
        x2, y2, z2, w2 = other.components()
        ab = a * b
        return Quat(
            self.algebra,
            x1 * x2 + a * y1 * y2 + b * z1 * z2 - ab * w1 * w2,
            x1 * y2 + y1 * x2 - b * z1 * w2 + b * w1 * z2,
            x1 * z2 + z1 * x2 + a * y1 * w2 - a * w1 * y2,
            x1 * w2 + w1 * x2 + y1 * z2 - z1 * y2,
        )

    def __rmul__(self, other):
        return self._check(other) * self

    def conj(self) -> "Quat":
        return Quat(self.algebra, self.x, -self.y, -self.z, -self.w)

    def trace(self) -> FieldElem:
        return self.x + self.x

    def norm(self) -> FieldElem:
        a, b = self.algebra.a, self.algebra.b
        x, y, z, w = self.components()
        return x * x - a * y * y - b * z * z + a * b * w * w

    def inverse(self) -> "Quat":
        n = self.norm()
        if n.is_zero():
            raise ZeroDivisor("vanishing reduced norm (split algebra or zero)")
        ninv = n.inverse()
        c = self.conj()
        return Quat(self.algebra, c.x * ninv, c.y * ninv, c.z * ninv, c.w * ninv)

    def __truediv__(self, other):
        return self * self._check(other).inverse()

    def __eq__(self, other):
        try:
            other = self._check(other)
        except AlgebraMismatch:
            return NotImplemented
        return self.components() == other.components()

    def __hash__(self):
        return hash((self.algebra, self.components()))

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components())

    def is_scalar(self) -> bool:
        return self.y.is_zero() and self.z.is_zero() and self.w.is_zero()

    def is_imaginary(self) -> bool:
        return self.x.is_zero()

    def scalar_part(self) -> FieldElem:
        return self.x

    def __repr__(self):
        return f"Quat({self.x}, {self.y}, {self.z}, {self.w})"

    def left_regular_matrix(self):
        """4x4 matrix of left multiplication on the basis {1, i, j, k}.

        Used as an independent oracle for the product formula.
        """
        cols = [self * e for e in self.algebra.basis()]
        return [[col.components()[r] for col in cols] for r in range(4)]


def quat_mul(lam: Quat, mu: Quat) -> Quat:
    return lam * mu


def conj(lam: Quat) -> Quat:
    return lam.conj()


def norm(lam: Quat) -> FieldElem:
    return lam.norm()


def trace(lam: Quat) -> FieldElem:
    return lam.trace()


def quat_inv(lam: Quat) -> Quat:
    return lam.inverse()


SPLIT = "Split"
DEFINITE = "Definite"


def real_place_type(D: QuatAlgebra, embedding: str = "identity") -> str:
    """Classify the completion of D at a real place of the base field.

    Split iff the embedded a > 0 or b > 0; Definite iff both < 0.
    """
    conjugate = _embedding_flag(embedding)
    sa = D.a.sign(conjugate)
    sb = D.b.sign(conjugate)
    if sa == 0 or sb == 0:
        raise ValueError("degenerate algebra: a or b embeds to 0")
    if sa > 0 or sb > 0:
        return SPLIT
    return DEFINITE


def _embedding_flag(embedding) -> bool:
    if embedding in ("identity", False):
        return False
    if embedding in ("conjugate", True):
        return True
    raise ValueError(f"unknown embedding {embedding!r}")


class NotRealifiable(ValueError):
    """No rescaling of generators achieves i^2 = j^2 = 1 at the identity place."""


def rescale_split_generators(D: QuatAlgebra):
    """Real scalings (s_i, s_j) with (s_i*i')^2 = (s_j*j')^2 = 1 in D_R.

    Works at the identity real place.  When the given i has positive
    norm (a < 0) the roles of generators are permuted, mirroring the
    interchange of j and k; the returned permutation tag records which
    imaginary basis elements play the roles of the rescaled i and j.

    Returns (s_i, s_j, perm) where perm maps 'i'/'j' to one of
    'i', 'j', 'k'.
    """
    if real_place_type(D, "identity") != SPLIT:
        raise NotRealifiable("identity real place is not split")
    a = float(D.a.embed())
    b = float(D.b.embed())
    # squares of the imaginary basis elements at the identity place
    squares = {"i": a, "j": b, "k": -a * b}
    pos = [g for g in ("i", "j", "k") if squares[g] > 0]
    if len(pos) < 2:
        raise NotRealifiable("fewer than two negative-norm generators")
    # keep i in role if possible, mirroring the j/k interchange rule
    role_i = "i" if "i" in pos else pos[0]
    role_j = next(g for g in pos if g != role_i)
    s_i = 1.0 / math.sqrt(squares[role_i])
    s_j = 1.0 / math.sqrt(squares[role_j])
    return s_i, s_j, {"i": role_i, "j": role_j}


class Order:
    """A lattice in D spanned by 4 quaternions over the ring of integers.

    Default is A^4 = A*1 + A*i + A*j + A*k.  Membership testing solves
    the 4x4 linear system over K exactly and then checks integrality of
    the coefficients.
    """

    def __init__(self, algebra: QuatAlgebra, basis=None):
        self.algebra = algebra
        self.basis = list(basis) if basis is not None else algebra.basis()
        if len(self.basis) != 4:
            raise ValueError("an order basis has 4 elements")
        self._mat = [[q.components()[r] for q in self.basis] for r in range(4)]
        if 1 not in self:
            raise ValueError("1 must lie in the order")

    def coordinates(self, lam: Quat):
        """Solve basis * c = lam over K; returns 4 FieldElems or None."""
        if not isinstance(lam, Quat):
            lam = self.algebra(lam)
        rhs = lam.components()
        aug = [self._mat[r][:] + [rhs[r]] for r in range(4)]
        n = 4
        # Gaussian elimination over the field
        for col in range(n):
            piv = next((r for r in range(col, n) if not aug[r][col].is_zero()), None)
            if piv is None:
                return None
            aug[col], aug[piv] = aug[piv], aug[col]
            inv = aug[col][col].inverse()
            aug[col] = [e * inv for e in aug[col]]
            for r in range(n):
                if r != col and not aug[r][col].is_zero():
                    f = aug[r][col]
                    aug[r] = [e - f * p for e, p in zip(aug[r], aug[col])]
        return [aug[r][n] for r in range(n)]

    def __contains__(self, lam) -> bool:
        if not isinstance(lam, Quat):
            lam = self.algebra(lam)
        coords = self.coordinates(lam)
        if coords is None:
            return False
        return all(_is_integral(c) for c in coords)

    def is_multiplicatively_closed(self) -> bool:
        """Check closure on pairwise basis products."""
        return all((u * v) in self for u in self.basis for v in self.basis)


def _is_integral(c: FieldElem) -> bool:
    """Membership in the ring of integers of Q(sqrt(d)).

    For d = 1 (mod 4) the ring is Z[(1+sqrt(d))/2], otherwise Z[sqrt(d)].
    """
    d = c.field.d
    if d == 1:
        return c.p.denominator == 1
    if d % 4 == 1:
        two_p, two_q = 2 * c.p, 2 * c.q
        return (two_p.denominator == 1 and two_q.denominator == 1
                and (two_p - two_q) % 2 == 0)
    return c.p.denominator == 1 and c.q.denominator == 1


def in_order(lam: Quat, O: Order) -> bool:
    return lam in O


# -- JSON wire format -------------------------------------------------

def quat_to_json(lam: Quat) -> dict:
    alg = lam.algebra
    return {
        "d": alg.field.d,
        "x": lam.x.as_string(), "y": lam.y.as_string(),
        "z": lam.z.as_string(), "w": lam.w.as_string(),
        "a": alg.a.as_string(), "b": alg.b.as_string(),
    }


def quat_from_json(obj) -> Quat:
    if isinstance(obj, str):
        obj = json.loads(obj)
    field = QuadraticField(obj["d"])
    alg = QuatAlgebra(field, parse_field_elem(field, obj["a"]),
                      parse_field_elem(field, obj["b"]))
    return Quat(alg, *(parse_field_elem(field, obj[c]) for c in "xyzw"))
