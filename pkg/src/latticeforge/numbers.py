"""Exact arithmetic in real quadratic fields Q(sqrt(d)).

Elements are stored as a pair of rationals (p, q) meaning p + q*sqrt(d).
Real embeddings never return bare floats: they return :class:`RatInterval`,
a closed interval with exact rational endpoints, so that downstream sign
tests are sound.  d = 1 encodes the rational field itself.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache


class SignUndecided(Exception):
    """An interval straddles zero at the working precision."""


class RatInterval:
    """Closed interval [lo, hi] with Fraction endpoints.

    Arithmetic is exact (outward rounding is unnecessary because the
    endpoints stay rational), so enclosures are always sound.
    """

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        lo = Fraction(lo)
        hi = lo if hi is None else Fraction(hi)
        if hi < lo:
            raise ValueError("empty interval")
        self.lo = lo
        self.hi = hi

    def __repr__(self):
        return f"RatInterval({self.lo}, {self.hi})"

    def __add__(self, other):
        other = _coerce(other)
        return RatInterval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self):
        return RatInterval(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        cands = (self.lo * other.lo, self.lo * other.hi,
                 self.hi * other.lo, self.hi * other.hi)
        return RatInterval(min(cands), max(cands))

    __rmul__ = __mul__

    @property
    def width(self):
        return self.hi - self.lo

    def contains_zero(self):
        return self.lo <= 0 <= self.hi

    def sign(self):
        """Certified sign: -1, 0 (exact zero only) or +1.

        Raises SignUndecided when the interval straddles zero with
        nonzero width.
        """
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        if self.lo == 0 == self.hi:
            return 0
        raise SignUndecided(repr(self))

    def midpoint(self):
        return (self.lo + self.hi) / 2

    def __float__(self):
        return float(self.midpoint())


def _coerce(x):
    if isinstance(x, RatInterval):
        return x
    return RatInterval(Fraction(x))


@lru_cache(maxsize=None)
def sqrt_interval(d: int, prec_bits: int = 64) -> RatInterval:
    """Rational enclosure of sqrt(d) of width <= 2**-prec_bits."""
    if d < 0:
        raise ValueError("negative radicand")
    scale = 1 << prec_bits
    lo = math.isqrt(d * scale * scale)
    return RatInterval(Fraction(lo, scale), Fraction(lo + 1, scale))


def _squarefree(d: int) -> bool:
    if d % 4 == 0:
        return False
    f = 3
    while f * f <= d:
        if d % (f * f) == 0:
            return False
        f += 2
    return True


class QuadraticField:
    """The real quadratic field Q(sqrt(d)); d = 1 encodes Q itself.

    Carries the two real embeddings: the identity (sqrt(d) -> +sqrt(d))
    and the conjugate (sqrt(d) -> -sqrt(d)).
    """

    def __init__(self, d: int = 1):
        d = int(d)
        if d < 1:
            raise ValueError("d must be >= 1")
        if not _squarefree(d):
            raise ValueError(f"d = {d} is not squarefree")
        self.d = d

    @property
    def is_rational(self) -> bool:
        return self.d == 1

    def __eq__(self, other):
        return isinstance(other, QuadraticField) and self.d == other.d

    def __hash__(self):
        return hash(("QuadraticField", self.d))

    def __repr__(self):
        return "QQ" if self.d == 1 else f"QQ(sqrt({self.d}))"

    def __call__(self, p, q=0) -> "FieldElem":
        return FieldElem(self, p, q)

    def zero(self) -> "FieldElem":
        return self(0)

    def one(self) -> "FieldElem":
        return self(1)

    def gen(self) -> "FieldElem":
        """sqrt(d) as a field element (1 when d = 1)."""
        if self.d == 1:
            return self.one()
        return self(0, 1)


class FieldElem:
    """p + q*sqrt(d) with exact Fraction coefficients."""

    __slots__ = ("field", "p", "q")

    def __init__(self, field: QuadraticField, p, q=0):
        self.field = field
        p = Fraction(p)
        q = Fraction(q)
        if field.d == 1:
            # fold sqrt(1) = 1 into the rational part
            p, q = p + q, Fraction(0)
        self.p = p
        self.q = q

    # -- ring structure ------------------------------------------------

    def _check(self, other) -> "FieldElem":
        if isinstance(other, FieldElem):
            if other.field != self.field:
                raise ValueError("elements of different fields")
            return other
        return FieldElem(self.field, other)

    def __add__(self, other):
        other = self._check(other)
        return FieldElem(self.field, self.p + other.p, self.q + other.q)

    __radd__ = __add__

    def __neg__(self):
        return FieldElem(self.field, -self.p, -self.q)

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) + (-self)

    def __mul__(self, other):
        other = self._check(other)
        d = self.field.d
        return FieldElem(self.field,
                         self.p * other.p + d * self.q * other.q,
                         self.p * other.q + self.q * other.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._check(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._check(other) * self.inverse()

    def inverse(self) -> "FieldElem":
        d = self.field.d
        nrm = self.p * self.p - d * self.q * self.q
        if nrm == 0:
            raise ZeroDivisionError("zero or non-invertible field element")
        return FieldElem(self.field, self.p / nrm, -self.q / nrm)

    def galois_conjugate(self) -> "FieldElem":
        return FieldElem(self.field, self.p, -self.q)

    def __eq__(self, other):
        try:
            other = self._check(other)
        except ValueError:
            return NotImplemented
        return self.p == other.p and self.q == other.q

    def __hash__(self):
        return hash((self.field.d, self.p, self.q))

    def is_zero(self) -> bool:
        return self.p == 0 and self.q == 0

    def is_rational(self) -> bool:
        return self.q == 0

    # -- embeddings ----------------------------------------------------

    def embed(self, conjugate: bool = False, prec_bits: int = 64) -> RatInterval:
        """Certified real interval for this element under an embedding."""
        if self.q == 0:
            return RatInterval(self.p)
        root = sqrt_interval(self.field.d, prec_bits)
        q = -self.q if conjugate else self.q
        return RatInterval(self.p) + RatInterval(q) * root

    def sign(self, conjugate: bool = False) -> int:
        """Certified sign at the chosen embedding (exact, never ambiguous)."""
        if self.q == 0:
            return (self.p > 0) - (self.p < 0)
        prec = 64
        while True:
            try:
                return self.embed(conjugate, prec).sign()
            except SignUndecided:
                prec *= 2
                if prec > 1 << 16:
                    # p + q sqrt(d) = 0 with q != 0 cannot happen for
                    # squarefree d > 1, so escalation always terminates.
                    raise

    def __float__(self):
        return float(self.embed())

    def __repr__(self):
        if self.q == 0:
            return str(self.p)
        return f"({self.p}+{self.q}*sqrt({self.field.d}))"

    def as_string(self) -> str:
        """Decimal-free serialization 'p/q' or 'p/q+r/s*sqrt(d)'."""
        if self.q == 0:
            return str(self.p)
        return f"{self.p}+{self.q}*sqrt({self.field.d})"


def parse_field_elem(field: QuadraticField, s) -> FieldElem:
    """Inverse of FieldElem.as_string; also accepts plain rationals."""
    if isinstance(s, FieldElem):
        return s
    if isinstance(s, (int, Fraction)):
        return FieldElem(field, s)
    s = str(s).strip()
    if "sqrt" in s:
        head, _, tail = s.partition("+")
        coeff, _, _ = tail.partition("*sqrt")
        return FieldElem(field, Fraction(head), Fraction(coeff))
    return FieldElem(field, Fraction(s))
