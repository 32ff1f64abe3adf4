"""Chern-class formulas against explicit root computations."""
from itertools import combinations_with_replacement
from math import factorial

import pytest
from gmpy2 import mpq

from e8genus import charforms as cf
from e8genus.poly import Generator, PolyRing, poly_exp

RANK = 3
CAP = 8
CH = PolyRing([Generator(f"c{k}", 2 * k) for k in range(1, RANK + 1)], CAP)
FAM = cf.RootFamily("E", RANK, tuple(CH.gen(f"c{k}") for k in range(1, RANK + 1)), CH)
ROOTS = PolyRing([Generator(f"x{i}", 2) for i in range(1, RANK + 1)], CAP)
X = [ROOTS.gen(f"x{i}") for i in range(1, RANK + 1)]
TO_ROOTS = {f"c{k}": cf.elementary(X, k, ROOTS) for k in range(1, RANK + 1)}


def lift(p):
    return p.substitute(TO_ROOTS, ROOTS)


def complete(vals, k):
    out = ROOTS.zero()
    for combo in combinations_with_replacement(vals, k):
        t = ROOTS.one()
        for v in combo:
            t = t * v
        out = out + t
    return out if k else ROOTS.one()


def todd_root(x):
    g = ROOTS.zero()
    for k in range(CAP // 2 + 1):
        g = g + x**k * mpq((-1) ** k, factorial(k + 1))
    return ROOTS.invert(g)


def test_power_sums():
    P = cf.power_sums(FAM, 4)
    for k, pk in enumerate(P, start=1):
        assert lift(pk) == sum((x**k for x in X), ROOTS.zero())


@pytest.mark.parametrize("m", [0, 1, 2, 3])
@pytest.mark.parametrize("dual", [False, True])
def test_adams_character(m, dual):
    s = -1 if dual else 1
    want = sum((poly_exp(x * (s * m)) for x in X), ROOTS.zero())
    assert lift(cf.adams_ch(FAM, m, dual)) == want


@pytest.mark.parametrize("dual", [False, True])
def test_exterior_and_symmetric_powers(dual):
    s = -1 if dual else 1
    ex = [poly_exp(x * s) for x in X]
    lam = cf.lambda_coeffs(FAM, dual)
    assert len(lam) == RANK + 1
    for k, c in enumerate(lam):
        assert lift(c) == cf.elementary(ex, k, ROOTS)
    sym = cf.symmetric_coeffs(FAM, 3, dual)
    for k, c in enumerate(sym):
        assert lift(c) == complete(ex, k)


def test_todd_form():
    want = ROOTS.one()
    for x in X:
        want = want * todd_root(x)
    assert lift(cf.todd_form(FAM)) == want


def test_todd_low_degrees():
    c1, c2 = CH.gen("c1"), CH.gen("c2")
    td = cf.todd_form(FAM)
    assert td.degree_component(2) == c1 * mpq(1, 2)
    assert td.degree_component(4) == (c1 * c1 + c2) * mpq(1, 12)


def test_weighted_wedge_sum():
    wt = [mpq(1, 3), mpq(-2), mpq(1, 2)]
    ex = [poly_exp(-x) for x in X]
    want = ROOTS.zero()
    for rho in range(RANK + 1):
        f = sum(c * rho**i for i, c in enumerate(wt))
        want = want + cf.elementary(ex, rho, ROOTS) * (f * (-1) ** rho)
    assert lift(cf.weighted_wedge_sum(FAM, wt)) == want


def test_symmetric_reduce_roundtrip():
    p = cf.todd_form(FAM) * cf.adams_ch(FAM, 2, True)
    back = cf.symmetric_reduce(lift(p), [[f"x{i}" for i in range(1, RANK + 1)]],
                               [[CH.gen(f"c{k}") for k in range(1, RANK + 1)]], CH)
    assert back == p


def test_symmetric_reduce_rejects_asymmetric():
    with pytest.raises(ValueError):
        cf.symmetric_reduce(X[0] * X[0], [["x1", "x2", "x3"]],
                            [[CH.gen(f"c{k}") for k in range(1, 4)]], CH)


def test_layout_constraints():
    lay = cf.chern_layout(3, 2)
    assert lay.T.c(1) == 0 and lay.W.c(1) == 0
    assert lay.T.c(2) == lay.W.c(2) == lay.ring.gen("c2")
    assert lay.W.c(3) == 0
    lone = cf.chern_layout(3, 1)
    assert lone.T.c(2) == 0


def test_series_parameters():
    from e8genus.qseries import DEN, Q24Series

    lay = cf.chern_layout(2, 2, cap=4)
    R = lay.ring
    t = Q24Series(R, {DEN: R.one()}, 3 * DEN)
    s = cf.symmetric_series_ch(lay.T, False, t)
    sym = cf.symmetric_coeffs(lay.T, 2)
    assert s.coeff_q(1) == sym[1] and s.coeff_q(2) == sym[2]
    with pytest.raises(ValueError):
        cf.symmetric_series_ch(lay.T, False, Q24Series.one(R, DEN))
