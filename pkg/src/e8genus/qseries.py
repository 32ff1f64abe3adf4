"""Truncated sparse series in q^(1/24) over a pluggable coefficient ring.

Exponents are plain ints in units of 1/24. A series knows its truncation
bound ``trunc``: every exponent >= trunc is unknown, never silently zero.
"""
from __future__ import annotations

from math import factorial

from gmpy2 import mpq

from .scalars import QQ

DEN = 24


class DomainError(ArithmeticError):
    """exp/log/invert requested outside the domain where they are defined."""


def exp24(num, den=1) -> int:
    """Exponent num/den as an integer count of 1/24 steps."""
    n = num * DEN
    if n % den:
        raise ValueError(f"{num}/{den} is not on the 1/24 grid")
    return n // den


class Q24Series:
    __slots__ = ("ring", "terms", "trunc")

    def __init__(self, ring, terms: dict[int, object], trunc: int):
        self.ring = ring
        self.trunc = trunc
        is_zero = ring.is_zero
        self.terms = {e: c for e, c in terms.items() if e < trunc and not is_zero(c)}

    # constructors ---------------------------------------------------------
    @classmethod
    def zero(cls, ring, trunc: int) -> "Q24Series":
        return cls(ring, {}, trunc)

    @classmethod
    def one(cls, ring, trunc: int) -> "Q24Series":
        return cls(ring, {0: ring.one()}, trunc)

    @classmethod
    def monomial(cls, ring, coeff, e: int, trunc: int) -> "Q24Series":
        return cls(ring, {e: coeff}, trunc)

    @classmethod
    def from_integer_coeffs(cls, coeffs, ring=QQ, trunc: int | None = None) -> "Q24Series":
        """Series sum_n coeffs[n] q^n (integral powers)."""
        if trunc is None:
            trunc = len(coeffs) * DEN
        return cls(ring, {n * DEN: ring.from_rational(c) for n, c in enumerate(coeffs)}, trunc)

    # basic queries --------------------------------------------------------
    def valuation(self) -> int:
        return min(self.terms) if self.terms else self.trunc

    def __getitem__(self, e: int):
        if e >= self.trunc:
            raise IndexError(f"exponent {e}/24 is beyond truncation {self.trunc}/24")
        return self.terms.get(e, self.ring.zero())

    def coeff_q(self, n: int):
        """Coefficient of q^n (integral n)."""
        return self[n * DEN]

    def coefficient_list(self, order: int) -> list:
        return [self.coeff_q(n) for n in range(order + 1)]

    def is_zero(self) -> bool:
        return not self.terms

    def exponents(self):
        return sorted(self.terms)

    def __eq__(self, other):
        if not isinstance(other, Q24Series):
            return NotImplemented
        return self.trunc == other.trunc and self.terms == other.terms

    def __hash__(self):
        return hash((self.trunc, frozenset(self.terms)))

    # arithmetic -----------------------------------------------------------
    def _check(self, other: "Q24Series"):
        if other.ring is not self.ring:
            raise TypeError(f"ring mismatch: {self.ring!r} vs {other.ring!r}")

    def __add__(self, other):
        if not isinstance(other, Q24Series):
            other = Q24Series(self.ring, {0: self._coerce(other)}, self.trunc)
        self._check(other)
        trunc = min(self.trunc, other.trunc)
        out = {e: c for e, c in self.terms.items() if e < trunc}
        for e, c in other.terms.items():
            if e < trunc:
                out[e] = out[e] + c if e in out else c
        return Q24Series(self.ring, out, trunc)

    __radd__ = __add__

    def __neg__(self):
        return Q24Series(self.ring, {e: -c for e, c in self.terms.items()}, self.trunc)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def _coerce(self, c):
        if isinstance(c, (int, mpq)) or type(c).__name__ == "Fraction":
            return self.ring.from_rational(c)
        return c

    def scale(self, c) -> "Q24Series":
        c = self._coerce(c)
        return Q24Series(self.ring, {e: v * c for e, v in self.terms.items()}, self.trunc)

    def __mul__(self, other):
        if not isinstance(other, Q24Series):
            return self.scale(other)
        self._check(other)
        # precision of a product: each factor is known below its own trunc,
        # so the product is known below min(ta + vb, tb + va)
        trunc = min(self.trunc + other.valuation(), other.trunc + self.valuation())
        a = sorted(self.terms.items())
        b = sorted(other.terms.items())
        out: dict = {}
        for ea, ca in a:
            for eb, cb in b:
                e = ea + eb
                if e >= trunc:
                    break
                v = out.get(e)
                out[e] = ca * cb if v is None else v + ca * cb
        return Q24Series(self.ring, out, trunc)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int) -> "Q24Series":
        if k < 0:
            return series_invert(self) ** (-k)
        if k == 0:
            return Q24Series.one(self.ring, self.trunc - self.valuation())
        out = None
        base = self
        while k:
            if k & 1:
                out = base if out is None else out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def shift(self, e: int) -> "Q24Series":
        """Multiply by q^(e/24)."""
        return Q24Series(self.ring, {k + e: c for k, c in self.terms.items()}, self.trunc + e)

    def truncate(self, trunc: int) -> "Q24Series":
        if trunc > self.trunc:
            raise ValueError("cannot raise the truncation bound")
        return Q24Series(self.ring, self.terms, trunc)

    def map_coeffs(self, fn, ring=None) -> "Q24Series":
        ring = ring or self.ring
        return Q24Series(ring, {e: fn(c) for e, c in self.terms.items()}, self.trunc)

    def has_only_integral_powers(self) -> bool:
        return all(e % DEN == 0 for e in self.terms)

    # display --------------------------------------------------------------
    def to_text(self) -> str:
        """Debug format ``c0 + c1*q^(a/24) + ...`` with rationals as p/q."""
        if not self.terms:
            body = "0"
        else:
            parts = []
            for e in sorted(self.terms):
                c = str(self.terms[e])
                if e:
                    c = f"[{c}]*q^({e}/24)" if " + " in c else f"{c}*q^({e}/24)"
                parts.append(c)
            body = " + ".join(parts)
        return f"{body} + O(q^({self.trunc}/24))"

    __str__ = to_text

    def __repr__(self):
        return f"Q24Series({self.to_text()})"


# ---------------------------------------------------------------------------
# transcendental operations


def _inv_factorial(ring, k):
    return ring.from_rational(mpq(1, factorial(k)))


def _constant_exp(ring, c0):
    if ring.is_zero(c0):
        return ring.one()
    bound = getattr(ring, "nilpotency_bound", lambda: 0)()
    if bound == 0:
        try:
            return ring.exp(c0)
        except (AttributeError, ValueError) as exc:
            raise DomainError("constant term is neither zero nor nilpotent") from exc
    out = ring.one()
    term = ring.one()
    for k in range(1, bound + 2):
        term = term * c0 * ring.from_rational(mpq(1, k))
        if ring.is_zero(term):
            return out
        out = out + term
    raise DomainError("constant term is not nilpotent")


def series_exp(f: Q24Series) -> Q24Series:
    if f.terms and f.valuation() < 0:
        raise DomainError("exp needs non-negative valuation")
    ring = f.ring
    c0 = f.terms.get(0, ring.zero())
    g = Q24Series(ring, {e: c for e, c in f.terms.items() if e > 0}, f.trunc)
    head = _constant_exp(ring, c0)
    out = Q24Series.one(ring, f.trunc)
    if g.terms:
        term = Q24Series.one(ring, f.trunc)
        k = 0
        while True:
            k += 1
            term = _cap(term * g, f.trunc).scale(ring.from_rational(mpq(1, k)))
            if term.is_zero():
                break
            out = out + term
    return out.scale(head)


def series_log(f: Q24Series) -> Q24Series:
    """log of a series whose constant term is 1 + nilpotent."""
    if f.terms and f.valuation() < 0:
        raise DomainError("log needs non-negative valuation")
    ring = f.ring
    h = f - Q24Series.one(ring, f.trunc)
    bound = ring.nilpotency_bound()
    if 0 in h.terms and bound == 0:
        raise DomainError("constant term must be 1 over a field")
    positive = [e for e in h.terms if e > 0]
    max_k = bound + 1 + (f.trunc // min(positive) if positive else 0)
    out = Q24Series.zero(ring, f.trunc)
    term = Q24Series.one(ring, f.trunc)
    for k in range(1, max_k + 2):
        term = _cap(term * h, f.trunc)
        if term.is_zero():
            return out
        out = out + term.scale(ring.from_rational(mpq(1 if k % 2 else -1, k)))
    raise DomainError("log series did not terminate; constant term not unipotent")


def _cap(s: Q24Series, trunc: int) -> Q24Series:
    return s.truncate(trunc) if s.trunc > trunc else s


def series_invert(f: Q24Series) -> Q24Series:
    if f.is_zero():
        raise DomainError("cannot invert a series with no known nonzero term")
    ring = f.ring
    v = f.valuation()
    lead = f.terms[v]
    try:
        lead_inv = ring.invert(lead)
    except (ZeroDivisionError, ValueError) as exc:
        raise DomainError("leading coefficient is not invertible") from exc
    # f = q^v * lead * (1 + h), h of positive valuation
    unit = f.shift(-v).scale(lead_inv)
    h = unit - Q24Series.one(ring, unit.trunc)
    h = Q24Series(ring, {e: c for e, c in h.terms.items() if e != 0}, h.trunc)
    out = Q24Series.one(ring, unit.trunc)
    term = Q24Series.one(ring, unit.trunc)
    while True:
        term = -_cap(term * h, unit.trunc)
        if term.is_zero():
            break
        out = out + term
    return out.scale(lead_inv).shift(-v)


# ---------------------------------------------------------------------------
# eta-type products


def euler_product(order: int, ring=QQ, power: int = 1) -> Q24Series:
    """phi(q)^power = prod_j (1 - q^j)^power, exact below q^(order+1)."""
    trunc = (order + 1) * DEN
    one = ring.one()
    # logarithmic derivative recurrence is overkill here; multiply factors
    out = Q24Series.one(ring, trunc)
    for j in range(1, order + 1):
        factor = Q24Series(ring, {0: one, j * DEN: -one}, trunc)
        if power >= 0:
            for _ in range(power):
                out = out * factor
        else:
            inv = series_invert(factor)
            for _ in range(-power):
                out = out * inv
    return out


def phi(order: int, ring=QQ) -> Q24Series:
    return euler_product(order, ring)


def phi_power(k: int, order: int, ring=QQ) -> Q24Series:
    return euler_product(order, ring, k)


def eta(order: int, ring=QQ) -> Q24Series:
    """eta = q^(1/24) phi; relative precision through q^order."""
    return phi(order, ring).shift(1)


def eta_power(k: int, order: int, ring=QQ) -> Q24Series:
    return phi_power(k, order, ring).shift(k)


def eta_cubed(order: int, ring=QQ) -> Q24Series:
    return eta_power(3, order, ring)
