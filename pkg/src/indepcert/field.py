"""Scalar fields: exact rationals, prime fields GF(p) and approximate reals.

Scalars are plain Python values so they stay immutable and hashable:

* rationals are :class:`fractions.Fraction` (always reduced, positive
  denominator, unbounded precision),
* GF(p) elements are ``int`` residues in ``[0, p)``,
* approximate reals are finite ``float``.

All arithmetic goes through a :class:`FieldDescriptor`, which also owns the
zero test used for every pivot decision.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from numbers import Integral, Rational, Real

from .errors import FieldError, InversionOfZero

RATIONAL = "rational"
PRIME = "prime"
APPROX = "approx"

MAX_MODULUS = 2**31
DEFAULT_TOLERANCE = 1e-10


def _is_prime(p):
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class FieldDescriptor:
    """Which scalar field is in force, plus its zero-test policy.

    Use the :meth:`rational`, :meth:`gf` and :meth:`approx` constructors
    rather than building instances by hand.
    """

    kind: str
    modulus: int = 0
    tolerance: float = 0.0

    def __post_init__(self):
        if self.kind == PRIME:
            if isinstance(self.modulus, bool) or not isinstance(self.modulus, Integral):
                raise FieldError(f"modulus must be an integer, got {self.modulus!r}")
            if self.modulus > MAX_MODULUS:
                raise FieldError(f"modulus {self.modulus} exceeds 2**31")
            if not _is_prime(int(self.modulus)):
                raise FieldError(f"modulus {self.modulus} is not prime")
            if self.tolerance != 0:
                raise FieldError("prime fields are exact; tolerance must be 0")
        elif self.kind == RATIONAL:
            if self.modulus != 0 or self.tolerance != 0:
                raise FieldError("the rational field takes no modulus or tolerance")
        elif self.kind == APPROX:
            if self.modulus != 0:
                raise FieldError("approximate reals take no modulus")
            if not (0.0 < self.tolerance < 1.0):
                raise FieldError(f"tolerance must lie in (0, 1), got {self.tolerance!r}")
        else:
            raise FieldError(f"unknown field kind {self.kind!r}")

    @classmethod
    def rational(cls):
        return cls(RATIONAL)

    @classmethod
    def gf(cls, p):
        return cls(PRIME, modulus=p)

    @classmethod
    def approx(cls, tolerance=DEFAULT_TOLERANCE):
        return cls(APPROX, tolerance=float(tolerance))

    @property
    def is_exact(self):
        return self.kind != APPROX

    def __str__(self):
        if self.kind == PRIME:
            return f"GF({self.modulus})"
        if self.kind == APPROX:
            return f"R~(tol={self.tolerance:g})"
        return "Q"

    # -- construction -------------------------------------------------

    @property
    def zero(self):
        if self.kind == RATIONAL:
            return Fraction(0)
        if self.kind == PRIME:
            return 0
        return 0.0

    @property
    def one(self):
        if self.kind == RATIONAL:
            return Fraction(1)
        if self.kind == PRIME:
            return 1
        return 1.0

    def from_int(self, n):
        if self.kind == RATIONAL:
            return Fraction(n)
        if self.kind == PRIME:
            return n % self.modulus
        return self._finite(float(n))

    def coerce(self, value):
        """Convert ``value`` into a scalar of this field.

        Floats are refused by the exact fields so that exact results never
        depend on binary rounding.
        """
        if isinstance(value, bool):
            value = int(value)
        if isinstance(value, str):
            return self.parse_scalar(value)
        if self.kind == RATIONAL:
            if isinstance(value, (Integral, Rational)):
                return Fraction(value)
            raise FieldError(f"cannot represent {value!r} exactly as a rational")
        if self.kind == PRIME:
            p = self.modulus
            if isinstance(value, Integral):
                return int(value) % p
            if isinstance(value, Rational):
                den = int(value.denominator) % p
                if den == 0:
                    raise FieldError(f"{value} has a denominator divisible by {p}")
                return int(value.numerator) * pow(den, -1, p) % p
            raise FieldError(f"cannot represent {value!r} in GF({p})")
        if isinstance(value, Real):
            return self._finite(float(value))
        raise FieldError(f"cannot represent {value!r} as a real")

    @staticmethod
    def _finite(x):
        if not math.isfinite(x):
            raise FieldError(f"non-finite value {x!r}")
        return x

    # -- arithmetic ---------------------------------------------------

    def add(self, a, b):
        if self.kind == PRIME:
            return (a + b) % self.modulus
        if self.kind == APPROX:
            return self._finite(a + b)
        return a + b

    def sub(self, a, b):
        if self.kind == PRIME:
            return (a - b) % self.modulus
        if self.kind == APPROX:
            return self._finite(a - b)
        return a - b

    def neg(self, a):
        if self.kind == PRIME:
            return -a % self.modulus
        return -a

    def mul(self, a, b):
        if self.kind == PRIME:
            return a * b % self.modulus
        if self.kind == APPROX:
            return self._finite(a * b)
        return a * b

    def inv(self, a):
        if self.is_zero(a):
            raise InversionOfZero(f"cannot invert zero in {self}")
        if self.kind == PRIME:
            return pow(a, -1, self.modulus)
        if self.kind == APPROX:
            return self._finite(1.0 / a)
        return 1 / a

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e):
        """``a**e`` for a nonnegative integer ``e``."""
        if e < 0:
            raise FieldError("negative exponents are not supported")
        if self.kind == PRIME:
            return pow(a, e, self.modulus)
        if self.kind == APPROX:
            try:
                return self._finite(a**e)
            except OverflowError as exc:
                raise FieldError(f"overflow computing {a!r}**{e}") from exc
        return a**e

    def dot(self, xs, ys):
        acc = self.zero
        for x, y in zip(xs, ys):
            acc = self.add(acc, self.mul(x, y))
        return acc

    def magnitude(self, a):
        """Nonnegative size of a scalar, used for pivoting and scales.

        GF(p) has no absolute value; nonzero residues count as 1.
        """
        if self.kind == PRIME:
            return 0.0 if a == 0 else 1.0
        return abs(float(a))

    def is_zero(self, v, scale=0.0):
        if self.kind == APPROX:
            return abs(v) <= self.tolerance * max(scale, 1.0)
        return v == 0

    # -- text form ----------------------------------------------------

    def format_scalar(self, v):
        if self.kind == PRIME:
            return f"{v} mod {self.modulus}"
        if self.kind == APPROX:
            return repr(float(v))
        return str(v)

    def parse_scalar(self, text):
        s = text.strip()
        if self.kind == PRIME:
            m = re.fullmatch(r"(-?\d+)\s*(?:mod\s*(\d+))?", s)
            if not m:
                # also accept plain rationals like "1/3"
                try:
                    return self.coerce(Fraction(s))
                except (ValueError, ZeroDivisionError) as exc:
                    raise FieldError(f"not a GF({self.modulus}) element: {text!r}") from exc
            if m.group(2) is not None and int(m.group(2)) != self.modulus:
                raise FieldError(f"{text!r} is not an element of GF({self.modulus})")
            return int(m.group(1)) % self.modulus
        if self.kind == RATIONAL:
            m = re.fullmatch(r"([-+]?\d+)\s*(?:/\s*([-+]?\d+))?", s)
            if not m:
                raise FieldError(f"not an exact rational: {text!r}")
            den = int(m.group(2)) if m.group(2) is not None else 1
            if den == 0:
                raise FieldError(f"zero denominator in {text!r}")
            return Fraction(int(m.group(1)), den)
        try:
            return self._finite(float(s))
        except ValueError:
            try:
                return self._finite(float(Fraction(s)))
            except (ValueError, ZeroDivisionError) as exc:
                raise FieldError(f"not a real number: {text!r}") from exc

    # -- problem-file form --------------------------------------------

    def to_json(self):
        if self.kind == PRIME:
            return f"gf({self.modulus})"
        if self.kind == APPROX:
            return {"approx": self.tolerance}
        return "rational"

    @classmethod
    def from_json(cls, obj):
        """Inverse of :meth:`to_json`: ``"rational"``, ``"gf(p)"`` or ``{"approx": tol}``."""
        if isinstance(obj, str):
            s = obj.strip().lower()
            if s in ("rational", "q"):
                return cls.rational()
            m = re.fullmatch(r"gf\(\s*(\d+)\s*\)", s)
            if m:
                return cls.gf(int(m.group(1)))
            raise FieldError(f"unknown field {obj!r}")
        if isinstance(obj, dict) and set(obj) == {"approx"}:
            tol = obj["approx"]
            if isinstance(tol, bool) or not isinstance(tol, (int, float)):
                raise FieldError(f"approx tolerance must be a number, got {tol!r}")
            return cls.approx(tol)
        raise FieldError(f"unknown field {obj!r}")


def is_effectively_zero(v, scale, fd):
    """Zero test behind every pivot decision.

    Exact fields compare against the additive identity.  Approximate reals
    use ``|v| <= tolerance * max(scale, 1)``.
    """
    return fd.is_zero(v, scale)


def invert(v, fd):
    """Multiplicative inverse of ``v``; raises :class:`InversionOfZero` on zero."""
    return fd.inv(v)
