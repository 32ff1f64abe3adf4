"""The E8 factor Theta = 1/2 (prod theta_1 + prod theta_2 + prod theta_3)(tau, y_k).

Each theta_k(tau, y) is even in y, so with s = y^2 it is f_k(s) and

    prod_{k=1..8} f(s_k) = f(0)^8 * exp(sum_m c_m P_{2m}),

where log(f(s)/f(0)) = sum_m c_m s^m and P_{2m} = sum_k y_k^(2m). The roots
never appear: the expansion lands directly on the even power sums. Below
degree 16 the generators P2, P4, P6 suffice.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from functools import lru_cache

from gmpy2 import mpq

from .poly import Generator, GradedPoly, PolyRing
from .eisenstein import eisenstein_G, normalized
from .qseries import DEN, Q24Series, phi_power, series_exp, series_invert, series_log
from .reports import VerificationReport
from .scalars import QQ
from .theta import ThetaKind, theta_of

E8_RANK = 8
POWER_SUM_DEGREES = (4, 8, 12)


def e8_generators(label: str = "") -> list[Generator]:
    return [Generator(f"P{k // 2}{label}", k) for k in POWER_SUM_DEGREES]


def _check_cap(cap: int):
    if cap >= 16:
        raise ValueError("the E8 factor is supported only below degree 16 (2d < 16)")


@lru_cache(maxsize=None)
def theta_log_coeffs(kind: str, q_order: int, cap: int):
    """(f(0) as a QQ series, [c_1, c_2, ...] as QQ series) for one theta kind."""
    _check_cap(cap)
    ring = PolyRing([Generator("y", 2)], cap, QQ)
    f = theta_of(ThetaKind.parse(kind), ring.gen("y"), q_order)
    f0 = f.map_coeffs(lambda p: p.constant(), QQ)
    f0_lift = f0.map_coeffs(ring.const, ring)
    g = f * series_invert(f0_lift)
    lg = series_log(g)
    cs = []
    for m in range(1, cap // 4 + 1):
        cm = lg.map_coeffs(lambda p, m=m: p.coefficient({"y": 2 * m}), QQ)
        odd = lg.map_coeffs(lambda p, m=m: p.coefficient({"y": 2 * m - 1}), QQ)
        assert odd.is_zero(), "theta_1..3 must be even in y"
        cs.append(cm)
    return f0, tuple(cs)


def theta_power_product(kind, ring: PolyRing, label: str, q_order: int) -> Q24Series:
    """prod_{k=1..8} theta_kind(tau, y_k) in the power sums P2, P4, P6 of ``ring``."""
    kind = ThetaKind.parse(kind)
    f0, cs = theta_log_coeffs(kind.value, q_order, ring.cap)
    trunc = f0.trunc - f0.valuation()
    expo = Q24Series.zero(ring, trunc)
    for m, cm in enumerate(cs, start=1):
        name = f"P{2 * m}{label}"
        if name not in ring.index:
            continue
        gen = ring.gen(name)
        if not gen:
            continue
        expo = expo + cm.map_coeffs(lambda c, gen=gen: gen * c, ring).truncate(
            min(cm.trunc, trunc))
    head = (f0 ** E8_RANK).map_coeffs(ring.const, ring)
    return head * series_exp(expo)


def e8_theta_combo(q_order: int, cap: int, ring: PolyRing | None = None,
                   label: str = "") -> Q24Series:
    """Theta as a series over ``ring`` (default: a ring of P2, P4, P6 only).

    Asserts the half-integral q-powers of theta_2, theta_3 cancel.
    """
    _check_cap(cap)
    if ring is None:
        ring = PolyRing(e8_generators(label), cap, QQ)
    elif ring.cap != cap:
        raise ValueError("ring cap disagrees with cap")
    parts = [theta_power_product(k, ring, label, q_order)
             for k in (ThetaKind.THETA1, ThetaKind.THETA2, ThetaKind.THETA3)]
    trunc = (q_order + 1) * DEN
    total = Q24Series.zero(ring, trunc)
    for p in parts:
        total = total + p
    total = total.scale(mpq(1, 2))
    if not total.has_only_integral_powers():
        raise ArithmeticError("E8 theta combination has fractional q-powers")
    return total


def chV_series(q_order: int, cap: int, ring: PolyRing | None = None, label: str = "") -> Q24Series:
    """ch(V) = Theta / phi^8."""
    combo = e8_theta_combo(q_order, cap, ring, label)
    inv = series_invert(phi_power(8, q_order, QQ)).map_coeffs(combo.ring.const, combo.ring)
    return combo * inv


@dataclass(frozen=True)
class E8Characters:
    chV: Q24Series
    chW: GradedPoly
    chWbar: GradedPoly
    c2: GradedPoly


def adjoint_and_level2(q_order: int, cap: int, ring: PolyRing | None = None,
                       label: str = "") -> E8Characters:
    """chW = [q^1] chV, chWbar = [q^2] chV, c2 = -30 P2."""
    chv = chV_series(max(q_order, 2), cap, ring, label)
    ring = chv.ring
    p2 = ring.gen(f"P2{label}")
    return E8Characters(chv, chv.coeff_q(1), chv.coeff_q(2), p2 * (-30))


def check_e8_character(q_order: int = 3, cap: int = 8) -> VerificationReport:
    """y = 0 slice of Theta is normalized G4; ch(V) has dimensions 1, 248, 4124."""
    start = time.perf_counter()
    ring = PolyRing(e8_generators(), cap, QQ)
    combo = e8_theta_combo(q_order, cap, ring)
    slice0 = combo.map_coeffs(lambda p: p.constant(), QQ)
    g4 = normalized(eisenstein_G(4, q_order))
    chars = adjoint_and_level2(q_order, cap, ring)
    dims = [chars.chV.coeff_q(k).constant() for k in range(3)]
    witness = None
    details = [{"y=0 slice": slice0.coefficient_list(q_order),
                "G4": g4.coefficient_list(q_order)}, {"dimensions": dims}]
    if slice0.truncate((q_order + 1) * DEN) != g4:
        witness = {"slice": slice0.coefficient_list(q_order)}
    elif dims != [1, 248, 4124]:
        witness = {"dimensions": dims}
    return VerificationReport("e8-character", {"q_order": q_order, "cap": cap},
                              "pass" if witness is None else "fail", witness=witness,
                              expected=[1, 248, 4124], got=dims,
                              elapsed_ms=(time.perf_counter() - start) * 1e3, details=details)
