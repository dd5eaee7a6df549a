"""Scalar arithmetic backends shared by the whole library.

Two backends are supported:

* ``rational`` -- exact arbitrary-precision rationals, backed by
  :class:`fractions.Fraction`.  Every ring operation is exact, so algebraic
  identities (composition laws, oracle equivalences) can be checked with
  ``==``.
* ``fixed`` -- binary fixed point with ``P`` bits after the point, stored as
  an arbitrary-precision integer mantissa.  Addition and subtraction are
  exact; multiplication, division and square roots are correctly rounded to
  the nearest representable value, so each such operation introduces an
  absolute error of at most ``2**(1 - P)``.

Circle points live in ``[0, 1)``; :func:`mod_one` reduces any scalar into
that range exactly in both backends.  The fixed-point backend carries a
coincidence tolerance ``tau = 2**-(P - 16)`` used by callers to decide when
two nearby values must be treated as the same point; the rational backend
compares exactly and its tolerance is zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

RATIONAL = "rational"
FIXED = "fixed"
BACKENDS = (RATIONAL, FIXED)

DEFAULT_PRECISION = 256
MIN_PRECISION = 64
TOLERANCE_MARGIN_BITS = 16


def _div_nearest(a: int, b: int) -> int:
    """Round a/b to the nearest integer, ties to even.  Requires b > 0."""
    q, r = divmod(a, b)
    if 2 * r > b or (2 * r == b and q & 1):
        q += 1
    return q


class FixedPoint:
    """A binary fixed-point number ``mantissa / 2**bits``.

    Instances are immutable and hashable, and hash/compare consistently
    with exact numbers of equal value (ints and Fractions).  Mixed
    arithmetic with ints and Fractions rounds once, at the end.
    Arithmetic between two FixedPoint values requires equal ``bits``.
    """

    __slots__ = ("mantissa", "bits")

    def __init__(self, mantissa: int, bits: int):
        if bits < 1:
            raise ValueError("precision must be positive")
        object.__setattr__(self, "mantissa", mantissa)
        object.__setattr__(self, "bits", bits)

    def __setattr__(self, name, value):
        raise AttributeError("FixedPoint is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_fraction(cls, value, bits: int) -> "FixedPoint":
        """Correctly rounded conversion from any exact rational value."""
        fr = Fraction(value)
        return cls(_div_nearest(fr.numerator << bits, fr.denominator), bits)

    @classmethod
    def one(cls, bits: int) -> "FixedPoint":
        return cls(1 << bits, bits)

    @classmethod
    def zero(cls, bits: int) -> "FixedPoint":
        return cls(0, bits)

    # -- conversions -------------------------------------------------------

    def to_fraction(self) -> Fraction:
        """Exact value as a Fraction (fixed-point values are dyadic)."""
        return Fraction(self.mantissa, 1 << self.bits)

    def to_bits(self, bits: int) -> "FixedPoint":
        """Re-quantize.  Exact when widening, correctly rounded when narrowing."""
        if bits == self.bits:
            return self
        if bits > self.bits:
            return FixedPoint(self.mantissa << (bits - self.bits), bits)
        return FixedPoint(_div_nearest(self.mantissa, 1 << (self.bits - bits)), bits)

    def __float__(self) -> float:
        m, b = self.mantissa, self.bits
        if b > 512:
            # keep float(m) in range; dropped bits are below float resolution
            drop = b - 512
            m >>= drop
            b = 512
        return math.ldexp(m, -b)

    def __bool__(self) -> bool:
        return self.mantissa != 0

    # -- arithmetic --------------------------------------------------------

    def _coerce_mantissa(self, other) -> int:
        """Other's value as a mantissa at self.bits, rounding at most once."""
        if isinstance(other, FixedPoint):
            if other.bits != self.bits:
                raise ValueError(
                    f"mixed fixed-point precisions: {self.bits} vs {other.bits}"
                )
            return other.mantissa
        if isinstance(other, int):
            return other << self.bits
        if isinstance(other, Fraction):
            return _div_nearest(other.numerator << self.bits, other.denominator)
        return NotImplemented

    def __add__(self, other):
        m = self._coerce_mantissa(other)
        if m is NotImplemented:
            return NotImplemented
        return FixedPoint(self.mantissa + m, self.bits)

    __radd__ = __add__

    def __sub__(self, other):
        m = self._coerce_mantissa(other)
        if m is NotImplemented:
            return NotImplemented
        return FixedPoint(self.mantissa - m, self.bits)

    def __rsub__(self, other):
        m = self._coerce_mantissa(other)
        if m is NotImplemented:
            return NotImplemented
        return FixedPoint(m - self.mantissa, self.bits)

    def __mul__(self, other):
        if isinstance(other, FixedPoint):
            if other.bits != self.bits:
                raise ValueError(
                    f"mixed fixed-point precisions: {self.bits} vs {other.bits}"
                )
            return FixedPoint(
                _div_nearest(self.mantissa * other.mantissa, 1 << self.bits),
                self.bits,
            )
        if isinstance(other, int):
            return FixedPoint(self.mantissa * other, self.bits)
        if isinstance(other, Fraction):
            # Fraction denominators are normalized positive
            return FixedPoint(
                _div_nearest(self.mantissa * other.numerator, other.denominator),
                self.bits,
            )
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, FixedPoint):
            if other.bits != self.bits:
                raise ValueError(
                    f"mixed fixed-point precisions: {self.bits} vs {other.bits}"
                )
            num, den = self.mantissa << self.bits, other.mantissa
        elif isinstance(other, int):
            num, den = self.mantissa, other
        elif isinstance(other, Fraction):
            num, den = self.mantissa * other.denominator, other.numerator
        else:
            return NotImplemented
        if den == 0:
            raise ZeroDivisionError("fixed-point division by zero")
        if den < 0:
            num, den = -num, -den
        return FixedPoint(_div_nearest(num, den), self.bits)

    def __neg__(self):
        return FixedPoint(-self.mantissa, self.bits)

    def __abs__(self):
        return FixedPoint(abs(self.mantissa), self.bits)

    def sqrt(self) -> "FixedPoint":
        """Nonnegative square root, rounded to the nearest representable value."""
        if self.mantissa < 0:
            raise ValueError("square root of a negative value")
        n = self.mantissa << self.bits
        s = math.isqrt(n)
        if (s + 1) * (s + 1) - n < n - s * s:
            s += 1
        return FixedPoint(s, self.bits)

    # -- comparison --------------------------------------------------------

    def _cmp(self, other) -> int:
        if isinstance(other, FixedPoint):
            if other.bits != self.bits:
                raise ValueError(
                    f"mixed fixed-point precisions: {self.bits} vs {other.bits}"
                )
            a, b = self.mantissa, other.mantissa
        elif isinstance(other, int):
            a, b = self.mantissa, other << self.bits
        elif isinstance(other, Fraction):
            # exact cross multiplication, no rounding
            a = self.mantissa * other.denominator
            b = other.numerator << self.bits
        else:
            return NotImplemented
        return (a > b) - (a < b)

    def __eq__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c == 0

    def __lt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c >= 0

    def __hash__(self):
        # consistent with numeric equality against Fraction/int
        return hash(self.to_fraction())

    def __repr__(self):
        return f"FixedPoint({float(self):.17g}, bits={self.bits})"

    def __str__(self):
        return scalar_format(self)

    def __reduce__(self):
        return (FixedPoint, (self.mantissa, self.bits))


Scalar = Union[Fraction, FixedPoint]


@dataclass(frozen=True)
class NumericsConfig:
    """Backend selection plus fixed-point precision.

    ``precision_bits`` must be at least 64.  The comparison tolerance is
    ``2**-(precision_bits - 16)`` in fixed-point mode and exactly zero in
    rational mode.
    """

    backend: str = RATIONAL
    precision_bits: int = DEFAULT_PRECISION

    def __post_init__(self):
        if self.backend not in BACKENDS:
            raise ValueError(f"unknown backend {self.backend!r}")
        if self.precision_bits < MIN_PRECISION:
            raise ValueError(f"precision_bits must be >= {MIN_PRECISION}")

    @property
    def tolerance(self) -> Fraction:
        if self.backend == RATIONAL:
            return Fraction(0)
        return Fraction(1, 1 << (self.precision_bits - TOLERANCE_MARGIN_BITS))

    def parse(self, text: str) -> Scalar:
        return scalar_parse(text, self.backend, self.precision_bits)


def backend_of(s: Scalar) -> str:
    if isinstance(s, FixedPoint):
        return FIXED
    if isinstance(s, (Fraction, int)):
        return RATIONAL
    raise TypeError(f"not a scalar: {s!r}")


def tolerance_of(s: Scalar) -> Scalar:
    """Coincidence tolerance in the same backend as ``s`` (zero for rationals)."""
    if isinstance(s, FixedPoint):
        return FixedPoint(1 << TOLERANCE_MARGIN_BITS, s.bits)
    return Fraction(0)


def mod_one(s: Scalar) -> Scalar:
    """Reduce into [0, 1): the result r satisfies 0 <= r < 1 and s - r is an integer.

    Exact in both backends (the unit is exactly representable), and idempotent.
    """
    if isinstance(s, FixedPoint):
        return FixedPoint(s.mantissa % (1 << s.bits), s.bits)
    if isinstance(s, (Fraction, int)):
        return Fraction(s) % 1
    raise TypeError(f"not a scalar: {s!r}")


def scalar_parse(text: str, backend: str = RATIONAL,
                 bits: int = DEFAULT_PRECISION) -> Scalar:
    """Parse "p/q" or a decimal literal into the requested backend.

    Rational parsing is exact.  Decimal literals entering the fixed-point
    backend are correctly rounded to ``bits`` binary digits.
    """
    if backend not in BACKENDS:
        raise ValueError(f"unknown backend {backend!r}")
    try:
        value = Fraction(str(text).strip())
    except ZeroDivisionError:
        raise ValueError(f"zero denominator in scalar {text!r}") from None
    except ValueError:
        raise ValueError(f"malformed scalar {text!r}") from None
    if backend == RATIONAL:
        return value
    return FixedPoint.from_fraction(value, bits)


def _decimal_digits(bits: int) -> int:
    # smallest d with 10**d > 2**bits, so formatting loses nothing
    return len(str(1 << bits))


def scalar_format(s: Scalar) -> str:
    """Serialize a scalar; round-trips through :func:`scalar_parse`.

    Rationals print as "p/q".  Fixed-point values print in decimal with
    enough digits that parsing back at the same precision is exact.
    """
    if isinstance(s, int):
        s = Fraction(s)
    if isinstance(s, Fraction):
        return f"{s.numerator}/{s.denominator}"
    if isinstance(s, FixedPoint):
        digits = _decimal_digits(s.bits)
        m = s.mantissa
        sign = "-" if m < 0 else ""
        scaled = _div_nearest(abs(m) * 10**digits, 1 << s.bits)
        whole, frac = divmod(scaled, 10**digits)
        return f"{sign}{whole}.{frac:0{digits}d}"
    if isinstance(s, Surd):
        return str(s)
    raise TypeError(f"not a scalar: {s!r}")


def as_float(s) -> float:
    if isinstance(s, (Fraction, FixedPoint, Surd)):
        return float(s)
    return float(s)


def to_backend(s: Scalar, backend: str, bits: int = DEFAULT_PRECISION) -> Scalar:
    """Convert between backends.  Fixed -> rational is exact (dyadic);
    rational -> fixed is correctly rounded."""
    if backend == RATIONAL:
        return s.to_fraction() if isinstance(s, FixedPoint) else Fraction(s)
    if backend == FIXED:
        if isinstance(s, FixedPoint):
            return s.to_bits(bits)
        return FixedPoint.from_fraction(s, bits)
    raise ValueError(f"unknown backend {backend!r}")


class Surd:
    """An exact value ``coeff * sqrt(root)`` with rational coeff and integer root.

    Used to declare irrational rectangle heights, so commensurability
    questions stay decidable: two surds have a rational ratio exactly when
    their square-free roots agree.  Only the operations the surface module
    needs are provided (scaling by rationals, comparison of roots,
    conversion to fixed point).
    """

    __slots__ = ("coeff", "root")

    def __init__(self, coeff, root: int = 1):
        coeff = Fraction(coeff)
        root = int(root)
        if root < 1:
            raise ValueError("root must be a positive integer")
        # pull square factors out of the root
        f = 2
        while f * f <= root:
            while root % (f * f) == 0:
                root //= f * f
                coeff *= f
            f += 1
        object.__setattr__(self, "coeff", coeff)
        object.__setattr__(self, "root", root)

    def __setattr__(self, name, value):
        raise AttributeError("Surd is immutable")

    @property
    def is_rational(self) -> bool:
        return self.root == 1 or self.coeff == 0

    def as_fraction(self) -> Fraction:
        if not self.is_rational:
            raise ValueError(f"{self} is irrational")
        return self.coeff if self.root == 1 else Fraction(0)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Surd(self.coeff * other, self.root)
        return NotImplemented

    __rmul__ = __mul__

    def __float__(self) -> float:
        return float(self.coeff) * math.sqrt(self.root)

    def __eq__(self, other):
        if isinstance(other, Surd):
            return self.coeff == other.coeff and self.root == other.root
        if isinstance(other, (int, Fraction)):
            return self.is_rational and self.as_fraction() == other
        return NotImplemented

    def __hash__(self):
        if self.is_rational:
            return hash(self.as_fraction())
        return hash((self.coeff, self.root))

    def __gt__(self, other):
        if isinstance(other, int) and other == 0:
            return self.coeff > 0
        return NotImplemented

    def to_fixed(self, bits: int) -> FixedPoint:
        p, q = self.coeff.numerator, self.coeff.denominator
        sign = -1 if p < 0 else 1
        s = math.isqrt(self.root * p * p << (2 * bits))
        return FixedPoint(sign * _div_nearest(s, q), bits)

    def __str__(self):
        if self.root == 1:
            return scalar_format(self.coeff)
        return f"{scalar_format(self.coeff)}*sqrt({self.root})"

    __repr__ = __str__

    def __reduce__(self):
        return (Surd, (self.coeff, self.root))


def parse_height(text) -> Union[Fraction, Surd]:
    """Parse a rectangle height: "p/q" or "p/q*sqrt(d)"."""
    text = str(text).strip()
    if "sqrt" in text:
        head, _, tail = text.partition("*sqrt(")
        if not tail.endswith(")"):
            raise ValueError(f"malformed height {text!r}")
        return Surd(Fraction(head.strip()), int(tail[:-1]))
    return Fraction(text)


def commensurable(a, b) -> bool:
    """True iff a/b is rational.  Fixed-point inputs are rejected: rationality
    is undecidable from an approximation."""
    if isinstance(a, FixedPoint) or isinstance(b, FixedPoint):
        raise ValueError("commensurability is undecidable for fixed-point values")
    ra = a.root if isinstance(a, Surd) and not a.is_rational else 1
    rb = b.root if isinstance(b, Surd) and not b.is_rational else 1
    return ra == rb
