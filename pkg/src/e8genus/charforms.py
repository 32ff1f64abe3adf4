"""Characteristic forms in Chern-class generators.

The computational root variables are the normalized roots (2*pi*i times the
usual Chern roots), so every Chern character, Todd form and exterior-power
sum has exact rational coefficients. Constraints c1(T) = c1(W) = 0 and
p1(T) = p1(W) are built into the ring: c1 generators are absent and
c2(W) is the same generator as c2(T).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import factorial
from typing import Callable, Sequence

from gmpy2 import mpq

from .poly import Generator, GradedPoly, PolyRing
from .qseries import Q24Series
from .scalars import QQ


@dataclass(frozen=True)
class RootFamily:
    """A bundle given by its Chern classes c_1..c_rank (entries may be zero)."""

    name: str
    rank: int
    chern: tuple  # GradedPoly per k = 1..rank
    ring: PolyRing

    def c(self, k: int) -> GradedPoly:
        if k == 0:
            return self.ring.one()
        if k > self.rank:
            return self.ring.zero()
        return self.chern[k - 1]


@dataclass(frozen=True)
class ChernLayout:
    ring: PolyRing
    T: RootFamily
    W: RootFamily


def chern_layout(d: int, l: int, extra: Sequence[Generator] = (), cap: int | None = None,
                 scalars=QQ) -> ChernLayout:
    """Ring of Chern generators for (T, W) with the structural constraints.

    ``extra`` generators (E8 power sums, the elliptic variable u, ...) are
    appended unchanged.
    """
    cap = 2 * d if cap is None else cap
    gens: list[Generator] = []
    shared_c2 = d >= 2 and l >= 2
    if shared_c2:
        gens.append(Generator("c2", 4))
    gens += [Generator(f"c{k}T", 2 * k) for k in range(3, d + 1)]
    gens += [Generator(f"c{k}W", 2 * k) for k in range(3, l + 1)]
    gens += list(extra)
    ring = PolyRing(gens, cap, scalars)

    def cls(k, fam):
        if k == 1:
            return ring.zero()
        if k == 2:
            return ring.gen("c2") if shared_c2 else ring.zero()
        return ring.gen(f"c{k}{fam}")

    T = RootFamily("T", d, tuple(cls(k, "T") for k in range(1, d + 1)), ring)
    W = RootFamily("W", l, tuple(cls(k, "W") for k in range(1, l + 1)), ring)
    return ChernLayout(ring, T, W)


def power_sums(fam: RootFamily, k_max: int) -> list[GradedPoly]:
    """[p_1, ..., p_k_max] with p_k = sum of k-th powers of the roots."""
    ring = fam.ring
    p: list[GradedPoly] = []
    for k in range(1, k_max + 1):
        if 2 * k > ring.cap:
            p.append(ring.zero())
            continue
        acc = fam.c(k) * ((-1) ** (k - 1) * k) if k <= fam.rank else ring.zero()
        for i in range(1, min(k - 1, fam.rank) + 1):
            acc = acc + fam.c(i) * p[k - i - 1] * ((-1) ** (i - 1))
        p.append(acc)
    return p


def _dual_sign(k: int, dual: bool) -> int:
    return -1 if dual and k % 2 else 1


def adams_ch(fam: RootFamily, m: int, dual: bool = False) -> GradedPoly:
    """ch(psi^m E) = rank + sum_k m^k p_k / k!  (roots negated when dual)."""
    ring = fam.ring
    kmax = ring.cap // 2
    out = ring.const(fam.rank)
    if m == 0:
        return out
    for k, pk in enumerate(power_sums(fam, kmax), start=1):
        if pk:
            out = out + pk * (mpq(m**k * _dual_sign(k, dual), factorial(k)))
    return out


def _elementary_from_power(P: list[GradedPoly], n: int, ring: PolyRing, sign: int) -> list:
    """Newton recursion: k E_k = sum_i (+-1)^(i-1) E_{k-i} P_i.

    sign=-1 gives elementary symmetric functions, sign=+1 complete ones.
    """
    E = [ring.one()]
    for k in range(1, n + 1):
        acc = ring.zero()
        for i in range(1, k + 1):
            s = 1 if sign > 0 else (-1) ** (i - 1)
            acc = acc + E[k - i] * P[i - 1] * s
        E.append(acc * mpq(1, k))
    return E


def lambda_coeffs(fam: RootFamily, dual: bool = False, check: bool = True) -> list[GradedPoly]:
    """[ch Lambda^0, ..., ch Lambda^rank] of E (or E*)."""
    ring = fam.ring
    n = fam.rank + (1 if check else 0)
    P = [adams_ch(fam, m, dual) for m in range(1, n + 1)]
    E = _elementary_from_power(P, n, ring, -1)
    if check:
        assert not E[-1], f"Lambda^{n} of a rank-{fam.rank} bundle must vanish"
        E = E[:-1]
    return E


def symmetric_coeffs(fam: RootFamily, n: int, dual: bool = False) -> list[GradedPoly]:
    """[ch S^0, ..., ch S^n]."""
    P = [adams_ch(fam, m, dual) for m in range(1, n + 1)]
    return _elementary_from_power(P, n, fam.ring, +1)


def lambda_series_ch(fam: RootFamily, dual: bool, t: Q24Series) -> Q24Series:
    """ch Lambda_t(E) = sum_k t^k ch(Lambda^k E) for a series parameter t."""
    coeffs = lambda_coeffs(fam, dual)
    ring = t.ring
    out = Q24Series.one(ring, t.trunc)
    power = Q24Series.one(ring, t.trunc)
    for k in range(1, len(coeffs)):
        power = power * t
        if power.is_zero() and power.valuation() >= t.trunc:
            break
        out = out + power.scale(coeffs[k])
    return out


def symmetric_series_ch(fam: RootFamily, dual: bool, t: Q24Series) -> Q24Series:
    """ch S_t(E) = sum_k t^k ch(S^k E); t must have positive q-valuation."""
    v = t.valuation()
    if v <= 0:
        raise ValueError("symmetric series needs a parameter of positive valuation")
    n = -(-t.trunc // v)
    coeffs = symmetric_coeffs(fam, n, dual)
    ring = t.ring
    out = Q24Series.one(ring, t.trunc)
    power = Q24Series.one(ring, t.trunc)
    for k in range(1, n + 1):
        power = power * t
        if power.trunc > t.trunc:
            power = power.truncate(t.trunc)
        if power.is_zero():
            break
        out = out + power.scale(coeffs[k])
    return out


# -- univariate rational power series helpers (lists of mpq) -----------------


def _umul(a, b, n):
    out = [mpq(0)] * n
    for i, x in enumerate(a[:n]):
        if x:
            for j, y in enumerate(b[: n - i]):
                out[i + j] += x * y
    return out


def _uinv(a, n):
    out = [mpq(0)] * n
    out[0] = 1 / a[0]
    for k in range(1, n):
        s = sum(a[i] * out[k - i] for i in range(1, min(k, len(a) - 1) + 1))
        out[k] = -s / a[0]
    return out


def _ulog(a, n):
    """log of a power series with a[0] == 1, via log' = a'/a."""
    assert a[0] == 1
    da = [a[k + 1] * (k + 1) for k in range(min(n, len(a)) - 1)] or [mpq(0)]
    q = _umul(da, _uinv(a, n), n)
    return [mpq(0)] + [q[k - 1] / k for k in range(1, n)]


@lru_cache(maxsize=None)
def todd_log_coeffs(n: int) -> tuple:
    """Taylor coefficients of log(x / (1 - e^{-x})) through x^(n-1)."""
    # (1 - e^{-x})/x = sum_{k>=0} (-1)^k x^k / (k+1)!
    g = [mpq((-1) ** k, factorial(k + 1)) for k in range(n + 1)]
    f = _uinv(g, n)
    return tuple(_ulog(f, n))


def multiplicative_class(fam: RootFamily, log_coeffs: Sequence) -> GradedPoly:
    """prod_i F(x_i) = exp(sum_k a_k p_k) with log F = sum a_k x^k, a_0 = 0."""
    ring = fam.ring
    kmax = ring.cap // 2
    P = power_sums(fam, kmax)
    expo = ring.zero()
    for k in range(1, kmax + 1):
        if k < len(log_coeffs) and log_coeffs[k] and P[k - 1]:
            expo = expo + P[k - 1] * log_coeffs[k]
    from .poly import poly_exp

    return poly_exp(expo)


def todd_form(T: RootFamily) -> GradedPoly:
    return multiplicative_class(T, todd_log_coeffs(T.ring.cap // 2 + 1))


def weighted_wedge_sum(W: RootFamily, weight: Callable[[int], object] | Sequence,
                       dual: bool = True) -> GradedPoly:
    """sum_rho (-1)^rho weight(rho) ch(Lambda^rho W*).

    ``weight`` is a callable rho -> rational or the coefficient list of a
    polynomial in rho (constant term first).
    """
    if not callable(weight):
        coeffs = [mpq(c) for c in weight]

        def weight(rho, coeffs=coeffs):
            return sum((c * rho**i for i, c in enumerate(coeffs)), mpq(0))

    lam = lambda_coeffs(W, dual)
    out = W.ring.zero()
    for rho, ch in enumerate(lam):
        wt = weight(rho)
        if wt:
            out = out + ch * (mpq(wt) * (-1) ** rho)
    return out


def degree_component(p: GradedPoly, k: int) -> GradedPoly:
    if k % 2:
        raise ValueError("all generators are even; odd degrees are empty")
    return p.degree_component(k)


# -- explicit roots ------------------------------------------------------------


def elementary(vars_: Sequence[GradedPoly], k: int, ring: PolyRing) -> GradedPoly:
    if k == 0:
        return ring.one()
    out = ring.zero()
    for combo in combinations(vars_, k):
        term = ring.one()
        for v in combo:
            term = term * v
        out = out + term
    return out


def symmetric_reduce(p: GradedPoly, blocks: Sequence[Sequence[str]],
                     images: Sequence[Sequence[GradedPoly]], target: PolyRing) -> GradedPoly:
    """Rewrite a polynomial symmetric in each block of root variables.

    ``images[b][k-1]`` is the target-ring image of e_k(block b). Generators
    outside the blocks are carried over by name. Raises ValueError when
    ``p`` is not block-symmetric.
    """
    src = p.ring
    block_idx = [[src.index[n] for n in blk] for blk in blocks]
    in_block = {i for blk in block_idx for i in blk}
    others = [i for i in range(len(src.gens)) if i not in in_block]
    e_src = [[elementary([src.gen(n) for n in blk], k, src) for k in range(1, len(blk) + 1)]
             for blk in blocks]
    for b, blk in enumerate(blocks):
        if len(images[b]) < len(blk):
            raise ValueError("need an image for every elementary polynomial")

    def key(m):
        ex = src.exponents(m)
        return tuple(ex[i] for blk in block_idx for i in blk) + tuple(ex[i] for i in others)

    out = target.zero()
    rest = p
    guard = 0
    while rest.terms:
        guard += 1
        if guard > 100000:
            raise RuntimeError("symmetric reduction did not terminate")
        m = max(rest.terms, key=key)
        c = rest.terms[m]
        ex = src.exponents(m)
        src_term = src.const(c)
        tgt_term = target.const(c)
        for b, blk in enumerate(block_idx):
            a = [ex[i] for i in blk] + [0]
            for k in range(len(blk)):
                step = a[k] - a[k + 1]
                if step < 0:
                    raise ValueError("polynomial is not symmetric in block " + str(blocks[b]))
                if step:
                    src_term = src_term * e_src[b][k] ** step
                    tgt_term = tgt_term * images[b][k] ** step
        for i in others:
            if ex[i]:
                name = src.gens[i].name
                src_term = src_term * src.gen(name) ** ex[i]
                tgt_term = tgt_term * target.gen(name) ** ex[i]
        rest = rest - src_term
        out = out + tgt_term
        if m in rest.terms:
            raise ValueError("reduction failed to cancel the leading term")
    return out
