"""Eisenstein series, monomial bases G4^a G6^b, and exact basis decomposition."""
from __future__ import annotations

import time
from dataclasses import dataclass
from functools import lru_cache
from math import comb

from gmpy2 import mpq

from .qseries import DEN, Q24Series
from .reports import VerificationReport
from .scalars import QQ


@lru_cache(maxsize=None)
def bernoulli(n: int) -> mpq:
    """B_n with B_1 = -1/2, from sum_{k<=n} C(n+1, k) B_k = 0."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return mpq(1)
    s = sum(comb(n + 1, k) * bernoulli(k) for k in range(n))
    return -s / (n + 1)


def divisor_sigma(k: int, n: int) -> int:
    if n < 1:
        raise ValueError("divisor_sigma needs n >= 1")
    if k < 0:
        raise ValueError("divisor_sigma needs k >= 0")
    total = 0
    t = 1
    while t * t <= n:
        if n % t == 0:
            total += t**k
            if t * t != n:
                total += (n // t) ** k
        t += 1
    return total


def eisenstein_G(k2: int, order: int) -> Q24Series:
    """Raw G_{2k} = -B_{2k}/(4k) + sum sigma_{2k-1}(n) q^n through q^order."""
    if k2 < 2 or k2 % 2:
        raise ValueError("weight must be even and >= 2")
    coeffs = [-bernoulli(k2) / (2 * k2)]
    coeffs += [mpq(divisor_sigma(k2 - 1, n)) for n in range(1, order + 1)]
    return Q24Series.from_integer_coeffs(coeffs)


def E2(order: int) -> Q24Series:
    return eisenstein_G(2, order).scale(-24)


def normalized(series: Q24Series) -> Q24Series:
    c0 = series.terms.get(0)
    if c0 is None:
        raise ZeroDivisionError("series has zero constant term")
    return series.scale(series.ring.invert(c0))


@lru_cache(maxsize=None)
def _normalized_G(k2: int, order: int) -> Q24Series:
    return normalized(eisenstein_G(k2, order))


def weight_dimension(w: int) -> int:
    if w < 0 or w % 2:
        return 0
    return sum(1 for b in range(w // 6 + 1) if (w - 6 * b) % 4 == 0)


@dataclass(frozen=True)
class BasisElement:
    a: int
    b: int
    series: Q24Series

    @property
    def weight(self) -> int:
        return 4 * self.a + 6 * self.b

    @property
    def label(self) -> str:
        parts = []
        if self.a:
            parts.append("G4" if self.a == 1 else f"G4^{self.a}")
        if self.b:
            parts.append("G6" if self.b == 1 else f"G6^{self.b}")
        return "*".join(parts) or "1"


def weight_basis(w: int, order: int) -> list[BasisElement]:
    """Normalized G4^a G6^b with 4a + 6b = w, ordered by a descending."""
    if w < 0 or w % 2:
        return []
    g4 = _normalized_G(4, order)
    g6 = _normalized_G(6, order)
    out = []
    for a in range(w // 4, -1, -1):
        rest = w - 4 * a
        if rest % 6:
            continue
        b = rest // 6
        out.append(BasisElement(a, b, (g4**a) * (g6**b) if (a or b) else g4**0))
    return out


@dataclass
class Decomposition:
    basis: list[BasisElement]
    coefficients: list
    residual: Q24Series

    @property
    def exact(self) -> bool:
        return self.residual.is_zero()


def _solve_inverse(mat: list[list[mpq]]) -> list[list[mpq]]:
    n = len(mat)
    aug = [list(row) + [mpq(int(i == j)) for j in range(n)] for i, row in enumerate(mat)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        assert piv is not None, "singular basis matrix"
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def decompose(f: Q24Series, w: int, order: int) -> Decomposition:
    """Match the first dim q-coefficients of ``f`` on the weight-w basis.

    Works over any coefficient ring with rational scalars (one linear solve,
    applied to every monomial at once). The residual ``f - sum lambda_i b_i``
    through q^order certifies membership when it vanishes.
    """
    ring = f.ring
    basis = weight_basis(w, order)
    trunc = min(f.trunc, (order + 1) * DEN)
    if f.trunc < (order + 1) * DEN:
        raise ValueError(f"series known only below q^({f.trunc}/24); need q^{order}")
    if not f.has_only_integral_powers():
        raise ValueError("series has fractional q-powers")
    f = f.truncate(trunc)
    dim = len(basis)
    if order + 1 < dim:
        raise ValueError("order too small for the weight space")
    coeffs = []
    if dim:
        mat = [[b.series.coeff_q(i) for b in basis] for i in range(dim)]
        inv = _solve_inverse(mat)
        rhs = [f.coeff_q(i) for i in range(dim)]
        for j in range(dim):
            lam = ring.zero()
            for i in range(dim):
                if inv[j][i] != 0:
                    lam = lam + rhs[i] * ring.from_rational(inv[j][i])
            coeffs.append(lam)
    approx = Q24Series.zero(ring, trunc)
    for lam, b in zip(coeffs, basis):
        lifted = b.series.map_coeffs(ring.from_rational, ring).truncate(trunc)
        approx = approx + lifted.scale(lam)
    return Decomposition(basis, coeffs, f - approx)


def product_series(label: str, order: int) -> Q24Series:
    """Normalized product from a label such as "G4^2*G6"."""
    out = Q24Series.one(QQ, (order + 1) * DEN)
    for part in label.split("*"):
        base, _, exp = part.partition("^")
        if base not in ("G4", "G6"):
            raise ValueError(f"unknown factor {base!r}")
        out = out * _normalized_G(int(base[1:]), order) ** int(exp or 1)
    return out


def check_expansions(table: dict[str, list[int]]) -> VerificationReport:
    """Compare normalized products with listed integer q-expansions."""
    start = time.perf_counter()
    witness = None
    details = []
    for label, want in table.items():
        got = [int(c) for c in product_series(label, len(want) - 1).coefficient_list(len(want) - 1)]
        details.append({"series": label, "got": got})
        if got != list(want) and witness is None:
            witness = {"series": label, "expected": list(want), "got": got}
    return VerificationReport("eisenstein-expansions", {"count": len(table)},
                              "pass" if witness is None else "fail", witness=witness,
                              elapsed_ms=(time.perf_counter() - start) * 1e3, details=details)
