"""The four Jacobi theta functions in product form.

    theta   = 2 q^(1/8) sin(pi z) prod (1-q^j)(1-y q^j)(1-y^-1 q^j)
    theta_1 = 2 q^(1/8) cos(pi z) prod (1-q^j)(1+y q^j)(1+y^-1 q^j)
    theta_2 =                     prod (1-q^j)(1-y q^(j-1/2))(1-y^-1 q^(j-1/2))
    theta_3 =                     prod (1-q^j)(1+y q^(j-1/2))(1+y^-1 q^(j-1/2))

with q = e^(2 pi i tau), y = e^(2 pi i z). Three evaluation modes: a formal
q-series whose argument v = 2 pi i z lives in a nilpotent ring, an exact
(q, y)-series, and numeric complex evaluation.
"""
from __future__ import annotations

import cmath
import math
import time
from enum import Enum
from math import factorial

from gmpy2 import mpq

from .poly import GradedPoly, poly_exp
from .qseries import DEN, Q24Series, phi_power
from .reports import VerificationReport
from .scalars import GaussianRational, I


class ThetaKind(Enum):
    THETA = "theta"
    THETA1 = "theta1"
    THETA2 = "theta2"
    THETA3 = "theta3"

    @classmethod
    def parse(cls, k) -> "ThetaKind":
        if isinstance(k, cls):
            return k
        return cls(str(k).lower())


def _needs_unit(ring):
    sc = ring.scalars
    if sc.name == "QQ":
        raise TypeError("theta needs a ring with the Gaussian unit i (QQ(i) or CC scalars)")


def _unit_i(ring):
    return ring.const(I) if ring.scalars.name == "QQ(i)" else ring.const(1j)


# ---------------------------------------------------------------------------
# formal mode


def _product(kind: ThetaKind, yv, yinv, ring, trunc: int) -> Q24Series:
    """prod_j (1-q^j)(1 -+ y q^a_j)(1 -+ y^-1 q^a_j) below q^(trunc/24)."""
    one = ring.one()
    sign = -1 if kind in (ThetaKind.THETA, ThetaKind.THETA2) else 1
    half = kind in (ThetaKind.THETA2, ThetaKind.THETA3)
    out = phi_power(1, -(-trunc // DEN), ring).truncate(trunc)
    j = 1
    while True:
        e = j * DEN - (DEN // 2 if half else 0)
        if e >= trunc:
            break
        f1 = Q24Series(ring, {0: one, e: yv * sign}, trunc)
        f2 = Q24Series(ring, {0: one, e: yinv * sign}, trunc)
        out = out * f1 * f2
        j += 1
    return out


def theta_of(kind, v: GradedPoly, q_order: int) -> Q24Series:
    """Formal theta at the normalized argument v = 2 pi i z.

    The product is exact below relative order q^(q_order+1); the absolute
    truncation of theta/theta_1 carries the extra q^(1/8).
    """
    kind = ThetaKind.parse(kind)
    ring = v.ring
    trunc = (q_order + 1) * DEN
    yv = poly_exp(v)
    yinv = poly_exp(-v)
    prod = _product(kind, yv, yinv, ring, trunc)
    if kind is ThetaKind.THETA:
        _needs_unit(ring)
        h = poly_exp(v * mpq(1, 2))
        hinv = poly_exp(v * mpq(-1, 2))
        pref = (h - hinv) * (-_unit_i(ring))  # 2 sin(pi z)
        return prod.scale(pref).shift(3)
    if kind is ThetaKind.THETA1:
        h = poly_exp(v * mpq(1, 2))
        hinv = poly_exp(v * mpq(-1, 2))
        return prod.scale(h + hinv).shift(3)
    return prod


def sinhc_half(v: GradedPoly) -> GradedPoly:
    """sinh(v/2)/(v/2) for nilpotent v."""
    ring = v.ring
    half = v * mpq(1, 2)
    sq = half * half
    out = ring.one()
    term = ring.one()
    for k in range(1, ring.nilpotency_bound() + 2):
        term = term * sq
        if not term:
            break
        out = out + term * mpq(1, factorial(2 * k + 1))
    return out


def theta_over_arg(v: GradedPoly, q_order: int) -> Q24Series:
    """theta(tau, z) / v for nilpotent v = 2 pi i z: a unit series.

    2 sin(pi z) = -i * v * sinh(v/2)/(v/2), so the quotient is
    -i q^(1/8) sinhc(v/2) prod(...).
    """
    ring = v.ring
    _needs_unit(ring)
    trunc = (q_order + 1) * DEN
    prod = _product(ThetaKind.THETA, poly_exp(v), poly_exp(-v), ring, trunc)
    return prod.scale(sinhc_half(v) * (-_unit_i(ring))).shift(3)


# ---------------------------------------------------------------------------
# (q, y) mode: Laurent polynomials in y^(1/2) as the coefficient ring


class LPoly(dict):
    """Laurent polynomial in y^(1/2) with ring arithmetic."""

    def __add__(self, o):
        out = LPoly(self)
        for k, c in o.items():
            v = out.get(k)
            v = c if v is None else v + c
            if v == 0:
                out.pop(k, None)
            else:
                out[k] = v
        return out

    __radd__ = __add__

    def __neg__(self):
        return LPoly({k: -c for k, c in self.items()})

    def __sub__(self, o):
        return self + (-LPoly(o))

    def __mul__(self, o):
        if not isinstance(o, dict):
            c = GaussianRational._lift(o) if not isinstance(o, GaussianRational) else o
            return LPoly({k: v * c for k, v in self.items() if v * c != 0})
        out = LPoly()
        for a, ca in self.items():
            for b, cb in o.items():
                k = a + b
                v = out.get(k)
                out[k] = ca * cb if v is None else v + ca * cb
        return LPoly({k: c for k, c in out.items() if c != 0})

    __rmul__ = __mul__

    def __eq__(self, o):
        return dict.__eq__(LPoly(o) if isinstance(o, dict) else o, self)

    __hash__ = None


class LaurentRing:
    """Coefficient ring of Laurent polynomials in y^(1/2) over QQ(i)."""

    name = "QQ(i)[y^(1/2), y^(-1/2)]"

    def zero(self):
        return LPoly()

    def one(self):
        return LPoly({0: GaussianRational(1)})

    def from_rational(self, r):
        return LPoly({0: GaussianRational(r)}) if r != 0 else LPoly()

    def is_zero(self, x):
        return not x

    def nilpotency_bound(self):
        return 0

    def invert(self, x):
        if len(x) != 1:
            raise ZeroDivisionError("only monomials in y are invertible")
        (k, c), = x.items()
        return LPoly({-k: GaussianRational(1) / c})

    def __repr__(self):
        return self.name


LY = LaurentRing()


def theta_qy_series(kind, q_order: int, y_window: int | None = None) -> Q24Series:
    """Exact (q, y)-expansion of the product formula below relative q^(q_order+1).

    Coefficients are :class:`LPoly` keyed by twice the y-exponent. When
    ``y_window`` is given, terms with |y-exponent| > y_window are dropped
    from the result (display only).
    """
    kind = ThetaKind.parse(kind)
    y = LPoly({2: GaussianRational(1)})
    yinv = LPoly({-2: GaussianRational(1)})
    trunc = (q_order + 1) * DEN
    prod = _product(kind, y, yinv, LY, trunc)
    if kind is ThetaKind.THETA:
        pref = LPoly({1: GaussianRational(0, -1), -1: GaussianRational(0, 1)})
        prod = prod.scale(pref).shift(3)
    elif kind is ThetaKind.THETA1:
        pref = LPoly({1: GaussianRational(1), -1: GaussianRational(1)})
        prod = prod.scale(pref).shift(3)
    if y_window is not None:
        prod = prod.map_coeffs(lambda c: LPoly({k: v for k, v in c.items() if abs(k) <= 2 * y_window}))
    return prod


def substitute_y(series: Q24Series, value: int = 1):
    """Collapse y to +-1 (value in {1, -1}); y^(1/2) -> 1 or i."""
    half = GaussianRational(1) if value == 1 else I
    out = {}
    for e, c in series.terms.items():
        tot = GaussianRational(0)
        for k, v in c.items():
            tot = tot + v * _gpow(half, k)
        if tot != 0:
            out[e] = tot
    return out


def _gpow(g: GaussianRational, k: int) -> GaussianRational:
    if k < 0:
        return GaussianRational(1) / _gpow(g, -k)
    out = GaussianRational(1)
    for _ in range(k):
        out = out * g
    return out


def shift_z_by_one(series: Q24Series) -> Q24Series:
    """z -> z+1: y^(1/2) -> -y^(1/2)."""
    return series.map_coeffs(lambda c: LPoly({k: (v if k % 2 == 0 else -v) for k, v in c.items()}))


def _min_known_after_qshift(trunc: int) -> int:
    """Lower bound (1/24 units) on where unknown terms land after y -> q y.

    In every product above, a term y^(-n) needs q-exponent >= n^2/2, so an
    unknown term at q^m carries y-exponent >= -sqrt(2m) - 1/2 and lands at
    or above m - sqrt(2m) - 1/2, which increases with m.
    """
    m = trunc / DEN
    bound = m - math.sqrt(2 * m) - 0.5
    return max(0, math.floor(bound * DEN))


def shift_z_by_tau(series: Q24Series) -> Q24Series:
    """z -> z+tau: y^(k/2) -> q^(k/2) y^(k/2), with a safe truncation bound."""
    out: dict = {}
    for e, c in series.terms.items():
        for k, v in c.items():
            ne = e + 12 * k
            bucket = out.setdefault(ne, LPoly())
            out[ne] = bucket + LPoly({k: v})
    trunc = _min_known_after_qshift(series.trunc)
    return Q24Series(LY, out, trunc)


# ---------------------------------------------------------------------------
# numeric mode


def _is_poly(z):
    return isinstance(z, GradedPoly)


def _cexp(z):
    if _is_poly(z):
        return poly_exp(z)
    return cmath.exp(z)


def theta_numeric(kind, tau: complex, z, tol: float = 1e-15):
    """Numeric theta. ``z`` may be complex or an epsilon-polynomial with CC scalars.

    The factor count n is the least with |q|^n * max(|y|, 1/|y|) < tol/16.
    """
    kind = ThetaKind.parse(kind)
    tau = complex(tau)
    if tau.imag <= 0:
        raise ValueError("theta needs Im(tau) > 0")
    q = cmath.exp(2j * math.pi * tau)
    aq = abs(q)
    z0 = z.constant() if _is_poly(z) else complex(z)
    ymag = math.exp(2 * math.pi * abs(complex(z0).imag))
    n = 1
    while aq**n * ymag >= tol / 16:
        n += 1
        if n > 100000:
            raise ValueError("tau too close to the real axis")
    if _is_poly(z):
        ring = z.ring
        one = ring.one()
    else:
        one = 1 + 0j
    y = _cexp(z * (2j * math.pi))
    yinv = _cexp(z * (-2j * math.pi))
    sign = -1 if kind in (ThetaKind.THETA, ThetaKind.THETA2) else 1
    half = kind in (ThetaKind.THETA2, ThetaKind.THETA3)
    prod = one
    for j in range(1, n + 1):
        qa = cmath.exp(2j * math.pi * tau * (j - 0.5)) if half else q**j
        prod = prod * (1 - q**j)
        prod = prod * (one + y * (sign * qa))
        prod = prod * (one + yinv * (sign * qa))
    if kind in (ThetaKind.THETA, ThetaKind.THETA1):
        q8 = cmath.exp(2j * math.pi * tau / 8)
        h = _cexp(z * (1j * math.pi))
        hinv = _cexp(z * (-1j * math.pi))
        if kind is ThetaKind.THETA:
            pref = (h - hinv) * (-1j)  # 2 sin(pi z)
        else:
            pref = h + hinv
        prod = prod * pref * q8
    return prod


def _sqrt_tau_over_i(tau: complex) -> complex:
    w = tau / 1j
    assert w.real > 0, "tau/i has positive real part on the upper half plane"
    return cmath.sqrt(w)


def check_modular_transforms(tau: complex, z: complex, tol: float = 1e-9) -> VerificationReport:
    """The T and S laws for all four thetas at one point."""
    start = time.perf_counter()
    tau = complex(tau)
    z = complex(z)
    Tk = ThetaKind
    th = theta_numeric
    e8 = cmath.exp(1j * math.pi / 4)
    st = -1 / tau
    root = _sqrt_tau_over_i(tau)
    gauss = cmath.exp(1j * math.pi * tau * z * z)
    laws = {
        "theta T": (th(Tk.THETA, tau + 1, z), e8 * th(Tk.THETA, tau, z)),
        "theta1 T": (th(Tk.THETA1, tau + 1, z), e8 * th(Tk.THETA1, tau, z)),
        "theta2 T": (th(Tk.THETA2, tau + 1, z), th(Tk.THETA3, tau, z)),
        "theta3 T": (th(Tk.THETA3, tau + 1, z), th(Tk.THETA2, tau, z)),
        "theta S": (th(Tk.THETA, st, z), (1 / 1j) * root * gauss * th(Tk.THETA, tau, tau * z)),
        "theta1 S": (th(Tk.THETA1, st, z), root * gauss * th(Tk.THETA2, tau, tau * z)),
        "theta2 S": (th(Tk.THETA2, st, z), root * gauss * th(Tk.THETA1, tau, tau * z)),
        "theta3 S": (th(Tk.THETA3, st, z), root * gauss * th(Tk.THETA3, tau, tau * z)),
    }
    details = []
    worst = ("", 0.0)
    for name, (lhs, rhs) in laws.items():
        scale = max(1.0, abs(lhs), abs(rhs))
        res = abs(lhs - rhs) / scale
        details.append({"law": name, "residual": res})
        if res > worst[1]:
            worst = (name, res)
    ok = worst[1] < tol
    return VerificationReport(
        check="theta-modular-transforms",
        instance={"tau": [tau.real, tau.imag], "z": [z.real, z.imag]},
        status="pass" if ok else "fail",
        witness=None if ok else {"law": worst[0], "residual": worst[1]},
        expected=tol,
        got=worst[1],
        elapsed_ms=(time.perf_counter() - start) * 1e3,
        details=details,
    )


def _series_equal(a: Q24Series, b: Q24Series, upto: int):
    """Compare two (q,y)-series below q^(upto/24); returns first mismatch or None."""
    for e in sorted(set(a.terms) | set(b.terms)):
        if e >= upto:
            break
        if a.terms.get(e, LPoly()) != b.terms.get(e, LPoly()):
            return e
    return None


def check_lattice_shifts(mode: str = "symbolic", q_order: int = 4, tau: complex = 2j,
                         z: complex = 0.1 + 0.2j, tol: float = 1e-9) -> VerificationReport:
    """theta(z+1) = -theta(z) and theta(z+tau) = -q^(-1/2) y^(-1) theta(z)."""
    start = time.perf_counter()
    details = []
    witness = None
    if mode == "symbolic":
        need = (q_order + 1) * DEN
        order = q_order + 1
        while _min_known_after_qshift((order + 1) * DEN) - DEN // 2 < need:
            order += 1
        th = theta_qy_series(ThetaKind.THETA, order)
        lhs1 = shift_z_by_one(th)
        bad1 = _series_equal(lhs1, -th, need)
        twice = shift_z_by_one(lhs1)
        bad_twice = _series_equal(twice, th, need)
        lhs2 = shift_z_by_tau(th)
        rhs2 = th.scale(LPoly({-2: GaussianRational(-1)})).shift(-12)
        upto = min(need, lhs2.trunc, rhs2.trunc)
        assert upto >= need, "internal truncation bound too small"
        bad2 = _series_equal(lhs2, rhs2, need)
        details = [
            {"law": "z+1", "ok": bad1 is None},
            {"law": "z+1 twice", "ok": bad_twice is None},
            {"law": "z+tau", "ok": bad2 is None},
        ]
        for name, bad in (("z+1", bad1), ("z+1 twice", bad_twice), ("z+tau", bad2)):
            if bad is not None and witness is None:
                witness = {"law": name, "q_exponent": f"{bad}/24"}
        inst = {"mode": "symbolic", "q_order": q_order}
    elif mode == "numeric":
        tau = complex(tau)
        z = complex(z)
        th = theta_numeric
        laws = {
            "z+1": (th("theta", tau, z + 1), -th("theta", tau, z)),
            "z+tau": (
                th("theta", tau, z + tau),
                -cmath.exp(-1j * math.pi * tau) * cmath.exp(-2j * math.pi * z) * th("theta", tau, z),
            ),
        }
        for name, (a, b) in laws.items():
            res = abs(a - b) / max(1.0, abs(a), abs(b))
            details.append({"law": name, "residual": res})
            if res >= tol and witness is None:
                witness = {"law": name, "residual": res}
        inst = {"mode": "numeric", "tau": [tau.real, tau.imag], "z": [z.real, z.imag]}
    else:
        raise ValueError("mode must be 'symbolic' or 'numeric'")
    return VerificationReport(
        check="theta-lattice-shifts",
        instance=inst,
        status="pass" if witness is None else "fail",
        witness=witness,
        elapsed_ms=(time.perf_counter() - start) * 1e3,
        details=details,
    )
