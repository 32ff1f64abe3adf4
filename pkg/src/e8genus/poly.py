"""Truncated graded polynomials over an exact (or complex) scalar field.

Monomials are packed into a single int, one 8-bit field per generator, so
monomial multiplication is integer addition. Every generator carries an even
cohomological degree; degree-0 generators (such as the elliptic variable u)
must declare a maximum exponent, which makes them nilpotent.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from gmpy2 import mpq

from .scalars import GaussianRational, QQ, as_scalar

FIELD = 8
MASK = (1 << FIELD) - 1


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int
    max_exp: int | None = None

    def __post_init__(self):
        if self.degree % 2 or self.degree < 0:
            raise ValueError(f"generator {self.name} must have even degree >= 0")
        if self.degree == 0 and self.max_exp is None:
            raise ValueError(f"degree-0 generator {self.name} needs max_exp")


class PolyRing:
    """A truncated polynomial ring; total degree above ``cap`` is discarded.

    The ring doubles as the coefficient-ring object consumed by
    :class:`~e8genus.qseries.Q24Series` (``zero``, ``one``, ``is_zero``,
    ``invert``, ``from_rational``).
    """

    def __init__(self, gens: Iterable[Generator], cap: int, scalars=QQ):
        self.gens = tuple(gens)
        names = [g.name for g in self.gens]
        if len(set(names)) != len(names):
            raise ValueError("generator names must be unique")
        if cap % 2:
            raise ValueError("cap must be even")
        self.cap = cap
        self.scalars = scalars
        self.index = {g.name: i for i, g in enumerate(self.gens)}
        self._deg_cache: dict[int, int] = {0: 0}
        self._limits = [
            (i * FIELD, g.max_exp) for i, g in enumerate(self.gens) if g.max_exp is not None
        ]
        for g in self.gens:
            top = g.max_exp if g.max_exp is not None else cap // g.degree
            if top > MASK:
                raise ValueError("exponent field overflow")

    def __repr__(self):
        return f"PolyRing({[g.name for g in self.gens]}, cap={self.cap})"

    # monomial helpers -------------------------------------------------
    def degree_of(self, mono: int) -> int:
        d = self._deg_cache.get(mono)
        if d is None:
            d = 0
            m = mono
            for g in self.gens:
                d += (m & MASK) * g.degree
                m >>= FIELD
            self._deg_cache[mono] = d
        return d

    def exponents(self, mono: int) -> tuple[int, ...]:
        return tuple((mono >> (i * FIELD)) & MASK for i in range(len(self.gens)))

    def monomial(self, exps: dict[str, int] | Iterable[int]) -> int:
        if isinstance(exps, dict):
            items = ((self.index[k], e) for k, e in exps.items())
        else:
            items = enumerate(exps)
        m = 0
        for i, e in items:
            m |= e << (i * FIELD)
        return m

    def admissible(self, mono: int) -> bool:
        if self.degree_of(mono) > self.cap:
            return False
        for shift, top in self._limits:
            if (mono >> shift) & MASK > top:
                return False
        return True

    # coefficient-ring contract ----------------------------------------
    def zero(self) -> "GradedPoly":
        return GradedPoly(self, {})

    def one(self) -> "GradedPoly":
        return GradedPoly(self, {0: self.scalars.one()})

    def const(self, c) -> "GradedPoly":
        c = self.scalars.coerce(c)
        return GradedPoly(self, {0: c} if c != 0 else {})

    def from_rational(self, r) -> "GradedPoly":
        return self.const(r)

    def is_zero(self, p: "GradedPoly") -> bool:
        return not p.terms

    def gen(self, name: str) -> "GradedPoly":
        i = self.index[name]
        m = 1 << (i * FIELD)
        if not self.admissible(m):
            return self.zero()
        return GradedPoly(self, {m: self.scalars.one()})

    def invert(self, p: "GradedPoly") -> "GradedPoly":
        c0 = p.terms.get(0)
        if c0 is None or c0 == 0:
            raise ZeroDivisionError("constant term is not invertible")
        inv0 = self.scalars.one() / c0
        r = p * inv0 - self.one()
        out = self.one()
        term = self.one()
        for _ in range(self.nilpotency_bound() + 1):
            term = -(term * r)
            if not term.terms:
                break
            out = out + term
        return out * inv0

    def nilpotency_bound(self) -> int:
        """Upper bound on k with (nilpotent element)^k possibly nonzero."""
        n = 0
        for g in self.gens:
            n += g.max_exp if g.degree == 0 else self.cap // g.degree
        return n

    def with_scalars(self, scalars) -> "PolyRing":
        return PolyRing(self.gens, self.cap, scalars)


class GradedPoly:
    """Sparse packed-monomial polynomial; immutable by convention."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms

    # arithmetic --------------------------------------------------------
    def _lift(self, other):
        if isinstance(other, GradedPoly):
            if other.ring is not self.ring:
                raise TypeError("polynomials from different rings")
            return other
        return self.ring.const(other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m)
            v = c if v is None else v + c
            if v == 0:
                out.pop(m, None)
            else:
                out[m] = v
        return GradedPoly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return GradedPoly(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, GradedPoly):
            c = self.ring.scalars.coerce(other)
            if c == 0:
                return GradedPoly(self.ring, {})
            return GradedPoly(self.ring, {m: v * c for m, v in self.terms.items()})
        if other.ring is not self.ring:
            raise TypeError("polynomials from different rings")
        ring = self.ring
        cap = ring.cap
        deg = ring.degree_of
        limits = ring._limits
        b_items = sorted(other.terms.items(), key=lambda kv: deg(kv[0]))
        b_degs = [deg(m) for m, _ in b_items]
        out: dict = {}
        get = out.get
        for ma, ca in self.terms.items():
            room = cap - deg(ma)
            for (mb, cb), db in zip(b_items, b_degs):
                if db > room:
                    break
                m = ma + mb
                if limits:
                    bad = False
                    for shift, top in limits:
                        if (m >> shift) & MASK > top:
                            bad = True
                            break
                    if bad:
                        continue
                v = get(m)
                out[m] = ca * cb if v is None else v + ca * cb
        return GradedPoly(ring, {m: c for m, c in out.items() if c != 0})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.ring.invert(self) ** (-k)
        out = self.ring.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def __truediv__(self, other):
        if isinstance(other, GradedPoly):
            return self * self.ring.invert(other)
        c = self.ring.scalars.coerce(other)
        return self * (self.ring.scalars.one() / c)

    def __eq__(self, other):
        if isinstance(other, GradedPoly):
            return self.ring is other.ring and self.terms == other.terms
        if other == 0:
            return not self.terms
        return self.terms == {0: other} if other != 0 else not self.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    # queries ------------------------------------------------------------
    def constant(self):
        return self.terms.get(0, self.ring.scalars.zero())

    def coefficient(self, exps: dict[str, int]):
        return self.terms.get(self.ring.monomial(exps), self.ring.scalars.zero())

    def degree_component(self, k: int) -> "GradedPoly":
        deg = self.ring.degree_of
        return GradedPoly(self.ring, {m: c for m, c in self.terms.items() if deg(m) == k})

    def is_nilpotent(self) -> bool:
        return self.constant() == 0

    def map_scalars(self, fn, ring: PolyRing | None = None) -> "GradedPoly":
        ring = ring or self.ring
        out = {}
        for m, c in self.terms.items():
            v = fn(c)
            if v != 0:
                out[m] = v
        return GradedPoly(ring, out)

    def change_ring(self, ring: PolyRing, names: dict[str, str] | None = None) -> "GradedPoly":
        """Re-home into ``ring`` matching generators by name (or ``names`` map).

        Generators absent from the target ring must not occur.
        """
        src = self.ring
        perm = []
        for i, g in enumerate(src.gens):
            tgt = (names or {}).get(g.name, g.name)
            perm.append((i, ring.index.get(tgt)))
        out = {}
        for m, c in self.terms.items():
            nm = 0
            for i, j in perm:
                e = (m >> (i * FIELD)) & MASK
                if e:
                    if j is None:
                        raise KeyError(f"generator {src.gens[i].name} missing in target")
                    nm += e << (j * FIELD)
            if ring.admissible(nm):
                out[nm] = out.get(nm, 0) + ring.scalars.coerce(c)
        return GradedPoly(ring, {m: c for m, c in out.items() if c != 0})

    def substitute(self, images: dict[str, "GradedPoly"], ring: PolyRing) -> "GradedPoly":
        """Ring homomorphism sending each generator to a polynomial in ``ring``."""
        src = self.ring
        gens_img = []
        for g in src.gens:
            img = images.get(g.name)
            if img is None:
                img = ring.gen(g.name) if g.name in ring.index else None
            gens_img.append(img)
        pow_cache: dict[tuple[int, int], GradedPoly] = {}

        def power(i, e):
            key = (i, e)
            if key not in pow_cache:
                if gens_img[i] is None:
                    raise KeyError(f"no image for generator {src.gens[i].name}")
                pow_cache[key] = gens_img[i] ** e
            return pow_cache[key]

        out = ring.zero()
        for m, c in self.terms.items():
            term = ring.const(c)
            for i, e in enumerate(src.exponents(m)):
                if e:
                    term = term * power(i, e)
                    if not term.terms:
                        break
            out = out + term
        return out

    # display -----------------------------------------------------------
    def __repr__(self):
        return f"GradedPoly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        ring = self.ring
        parts = []
        for m in sorted(self.terms, key=lambda m: (ring.degree_of(m), ring.exponents(m))):
            c = self.terms[m]
            mono = "*".join(
                g.name if e == 1 else f"{g.name}^{e}"
                for g, e in zip(ring.gens, ring.exponents(m))
                if e
            )
            parts.append(f"({c})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)


def poly_exp(p: GradedPoly) -> GradedPoly:
    """exp of a polynomial whose non-constant part is nilpotent.

    A nonzero constant is only allowed over complex scalars.
    """
    ring = p.ring
    c0 = p.constant()
    nil = p - ring.const(c0) if c0 != 0 else p
    out = ring.one()
    term = ring.one()
    for k in range(1, ring.nilpotency_bound() + 2):
        term = term * nil * ring.scalars.coerce(mpq(1, k))
        if not term.terms:
            break
        out = out + term
    if c0 != 0:
        out = out * ring.scalars.exp(c0)
    return out


__all__ = [
    "Generator",
    "PolyRing",
    "GradedPoly",
    "poly_exp",
    "GaussianRational",
    "as_scalar",
]
