"""Exact scalars: Gaussian rationals and the quadratic extension by a cube root of unity.

``GaussianRational`` is the coefficient field ℚ(i) of every polynomial in the
engine.  ``QiLambda`` is ℚ(i)(λ) with λ² + λ + 1 = 0; it is only used to
evaluate polynomials exactly at points whose coordinates involve λ.
"""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational

from .errors import DivisionByZero, ParseError

__all__ = ["GaussianRational", "QiLambda", "parse_scalar", "format_rational", "I", "ONE", "ZERO"]


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as a rational number")


def format_rational(q: Fraction) -> str:
    """Canonical text for a rational number: ``p`` or ``p/q``."""
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


class GaussianRational:
    """Immutable number ``re + i*im`` with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", _frac(re))
        object.__setattr__(self, "im", _frac(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    def __reduce__(self):
        return (GaussianRational, (self.re, self.im))

    @classmethod
    def coerce(cls, x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, (int, Fraction, Rational)):
            return cls(x, 0)
        if isinstance(x, complex):
            raise TypeError("floating complex numbers are not exact scalars")
        if isinstance(x, str):
            return parse_scalar(x)
        return NotImplemented

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        o = GaussianRational.coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = GaussianRational.coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = GaussianRational.coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = GaussianRational.coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if not self.im and not o.im:
            return GaussianRational(self.re * o.re, 0)
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        """Squared modulus ``re² + im²``."""
        return self.re * self.re + self.im * self.im

    def inverse(self) -> "GaussianRational":
        n = self.norm()
        if n == 0:
            raise DivisionByZero("division by the zero Gaussian rational")
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, other):
        o = GaussianRational.coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = GaussianRational.coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o * self.inverse()

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = GaussianRational(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    # comparison / hashing ----------------------------------------------
    def __eq__(self, other):
        o = GaussianRational.coerce(other) if not isinstance(other, str) else NotImplemented
        if o is NotImplemented:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def is_real(self) -> bool:
        return self.im == 0

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({self})"

    def __str__(self):
        return format_scalar(self)


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)


def format_scalar(z: GaussianRational) -> str:
    """Canonical text form, e.g. ``3/2+1/2i``, ``-i``, ``0``."""
    re_s = format_rational(z.re) if z.re else ""
    if not z.im:
        return re_s or "0"
    if z.im == 1:
        im_s = "i"
    elif z.im == -1:
        im_s = "-i"
    else:
        im_s = format_rational(z.im) + "i"
    if re_s and not im_s.startswith("-"):
        im_s = "+" + im_s
    return re_s + im_s


_RAT = r"\d+(?:/\d+)?"
_SCALAR_RE = re.compile(
    rf"^\s*(?:(?P<re>[+-]?{_RAT})(?=$|[+-]))?\s*"
    rf"(?:(?P<im>[+-]?(?:{_RAT})?)i)?\s*$"
)


def _parse_rat(text: str) -> Fraction:
    num, _, den = text.partition("/")
    if den and int(den) == 0:
        raise ParseError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den) if den else 1)


def parse_scalar(text: str) -> GaussianRational:
    """Parse a Gaussian rational written as ``a/b+c/di`` (each part optional)."""
    if not isinstance(text, str):
        raise ParseError(f"scalar must be a string, got {type(text).__name__}")
    t = text.replace(" ", "")
    m = _SCALAR_RE.match(t)
    if not t or m is None or (m.group("re") is None and m.group("im") is None):
        raise ParseError(f"not a Gaussian rational: {text!r}")
    re_part = _parse_rat(m.group("re")) if m.group("re") else Fraction(0)
    im_text = m.group("im")
    if im_text is None:
        im_part = Fraction(0)
    elif im_text in ("", "+"):
        im_part = Fraction(1)
    elif im_text == "-":
        im_part = Fraction(-1)
    else:
        im_part = _parse_rat(im_text)
    return GaussianRational(re_part, im_part)


class QiLambda:
    """Element ``a + b·λ`` of ℚ(i)[λ]/(λ² + λ + 1) with ``a, b`` Gaussian rationals.

    λ is a primitive cube root of unity.  Complex conjugation sends i ↦ −i and
    λ ↦ λ² = −1 − λ, so the conjugate of the numerical value is represented exactly.
    """

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        object.__setattr__(self, "a", GaussianRational.coerce(a))
        object.__setattr__(self, "b", GaussianRational.coerce(b))

    def __setattr__(self, name, value):
        raise AttributeError("QiLambda is immutable")

    def __reduce__(self):
        return (QiLambda, (self.a, self.b))

    @classmethod
    def coerce(cls, x) -> "QiLambda":
        if isinstance(x, QiLambda):
            return x
        g = GaussianRational.coerce(x)
        if g is NotImplemented:
            return NotImplemented
        return cls(g, 0)

    @classmethod
    def lam(cls) -> "QiLambda":
        return cls(0, 1)

    def __add__(self, other):
        o = QiLambda.coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QiLambda(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other):
        o = QiLambda.coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QiLambda(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        return QiLambda.coerce(other) - self

    def __neg__(self):
        return QiLambda(-self.a, -self.b)

    def __mul__(self, other):
        o = QiLambda.coerce(other)
        if o is NotImplemented:
            return NotImplemented
        # (a + bλ)(c + dλ) = ac + (ad + bc)λ + bd λ²,  λ² = −1 − λ
        bd = self.b * o.b
        return QiLambda(self.a * o.a - bd, self.a * o.b + self.b * o.a - bd)

    __rmul__ = __mul__

    def norm(self) -> GaussianRational:
        """Field norm to ℚ(i): (a + bλ)(a + bλ²) = a² − ab + b²."""
        return self.a * self.a - self.a * self.b + self.b * self.b

    def inverse(self) -> "QiLambda":
        n = self.norm()
        if not n:
            raise DivisionByZero("division by zero in Q(i)(lambda)")
        # (a + bλ)^{-1} = (a + bλ²)/N = (a − b − bλ)/N
        return QiLambda((self.a - self.b) / n, -self.b / n)

    def __truediv__(self, other):
        o = QiLambda.coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return QiLambda.coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = QiLambda(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self) -> "QiLambda":
        # conj(a + bλ) = ā + b̄λ² = (ā − b̄) − b̄λ
        ca, cb = self.a.conjugate(), self.b.conjugate()
        return QiLambda(ca - cb, -cb)

    def __eq__(self, other):
        o = QiLambda.coerce(other) if not isinstance(other, str) else NotImplemented
        if o is NotImplemented:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        if not self.b:
            return hash(self.a)
        return hash((self.a, self.b))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __complex__(self):
        lam = complex(-0.5, 3 ** 0.5 / 2)
        return complex(self.a) + complex(self.b) * lam

    def __repr__(self):
        return f"QiLambda({self.a}, {self.b})"
