"""Scalar fields behind the coefficient-ring contract.

Each field exposes ``zero()``, ``one()``, ``coerce``, ``from_rational``,
``is_zero``, ``invert`` and ``exp`` so that a :class:`Q24Series` can hold its
elements directly.
"""
from __future__ import annotations

import cmath
from fractions import Fraction

from gmpy2 import mpq


def as_scalar(x):
    """Exact rational from int / Fraction / mpq / 'p/q' string."""
    if isinstance(x, str):
        x = Fraction(x)
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    return mpq(x)


class GaussianRational:
    """a + b*i with a, b exact rationals."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = mpq(re)
        self.im = mpq(im)

    @staticmethod
    def _lift(x):
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, complex):
            raise TypeError("refusing to mix floats into exact Gaussian arithmetic")
        return GaussianRational(x, 0)

    def __add__(self, o):
        o = self._lift(o)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, o):
        o = self._lift(o)
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, o):
        return self._lift(o) - self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, o):
        if not isinstance(o, GaussianRational):
            o = mpq(o)
            return GaussianRational(self.re * o, self.im * o)
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = self._lift(o)
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("Gaussian zero")
        return self * GaussianRational(o.re / n, -o.im / n)

    def __rtruediv__(self, o):
        return self._lift(o) / self

    def __eq__(self, o):
        try:
            o = self._lift(o)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __ne__(self, o):
        eq = self.__eq__(o)
        return eq if eq is NotImplemented else not eq

    def __hash__(self):
        return hash(self.re) if self.im == 0 else hash((self.re, self.im))

    def __repr__(self):
        if self.im == 0:
            return str(self.re)
        return f"({self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i)"

    def conjugate(self):
        return GaussianRational(self.re, -self.im)


I = GaussianRational(0, 1)


class _Field:
    name = "field"

    def is_zero(self, x) -> bool:
        return x == 0

    def from_rational(self, r):
        return self.coerce(r)

    def invert(self, x):
        if x == 0:
            raise ZeroDivisionError(f"zero is not invertible in {self.name}")
        return self.one() / x

    def nilpotency_bound(self) -> int:
        return 0

    def __repr__(self):
        return self.name


class RationalField(_Field):
    name = "QQ"

    def zero(self):
        return mpq(0)

    def one(self):
        return mpq(1)

    def coerce(self, x):
        if isinstance(x, GaussianRational):
            if x.im != 0:
                raise TypeError("non-real value in QQ")
            return x.re
        return as_scalar(x)

    def exp(self, c):
        if c != 0:
            raise ValueError("exp of a nonzero rational is not rational")
        return mpq(1)


class GaussianField(_Field):
    name = "QQ(i)"

    def zero(self):
        return GaussianRational(0, 0)

    def one(self):
        return GaussianRational(1, 0)

    def coerce(self, x):
        if isinstance(x, GaussianRational):
            return x
        return GaussianRational(as_scalar(x), 0)

    def exp(self, c):
        if c != 0:
            raise ValueError("exp of a nonzero Gaussian rational is not exact")
        return self.one()


class ComplexField(_Field):
    name = "CC"

    def zero(self):
        return 0j

    def one(self):
        return 1 + 0j

    def coerce(self, x):
        if isinstance(x, GaussianRational):
            return complex(float(x.re), float(x.im))
        if isinstance(x, complex):
            return x
        return complex(float(x))

    def exp(self, c):
        return cmath.exp(c)


QQ = RationalField()
QQI = GaussianField()
CC = ComplexField()
