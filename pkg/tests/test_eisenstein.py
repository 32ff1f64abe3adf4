from fractions import Fraction

import pytest
from gmpy2 import mpq

from e8genus.eisenstein import (E2, bernoulli, decompose, divisor_sigma, eisenstein_G, normalized,
                                product_series, weight_basis, weight_dimension)
from e8genus.poly import Generator, PolyRing
from e8genus.qseries import DEN, Q24Series
from e8genus.scalars import QQ


def test_bernoulli_known_values():
    known = {0: 1, 1: Fraction(-1, 2), 2: Fraction(1, 6), 4: Fraction(-1, 30),
             6: Fraction(1, 42), 8: Fraction(-1, 30), 12: Fraction(-691, 2730), 3: 0}
    for n, v in known.items():
        v = Fraction(v)
        assert bernoulli(n) == mpq(v.numerator, v.denominator)


def test_divisor_sigma_brute_force():
    for k in range(5):
        for n in range(1, 60):
            assert divisor_sigma(k, n) == sum(t**k for t in range(1, n + 1) if n % t == 0)


def test_e2_and_g2_constant():
    assert eisenstein_G(2, 3).coeff_q(0) == mpq(-1, 24)
    assert [int(c) for c in E2(3).coefficient_list(3)] == [1, -24, -72, -96]


def test_hecke_type_identities():
    # E4^2 = E8 and E4 E6 = E10: both spaces are one-dimensional
    order = 8
    e8 = normalized(eisenstein_G(8, order))
    e10 = normalized(eisenstein_G(10, order))
    assert product_series("G4^2", order) == e8
    assert product_series("G4*G6", order) == e10


def test_weight_dimension_matches_basis():
    for w in range(0, 40):
        brute = sum(1 for a in range(11) for b in range(8) if 4 * a + 6 * b == w)
        assert weight_dimension(w) == brute == len(weight_basis(w, 1 + brute))


def test_delta_is_the_weight_12_cusp_form():
    g43, g62 = (b.series for b in weight_basis(12, 4))
    delta = (g43 - g62).scale(mpq(1, 1728))
    assert [int(c) for c in delta.coefficient_list(4)] == [0, 1, -24, 252, -1472]


def test_decompose_recovers_combination_with_polynomial_coefficients():
    R = PolyRing([Generator("x", 2), Generator("y", 2)], 4)
    x, y = R.gen("x"), R.gen("y")
    g43, g62 = (b.series.map_coeffs(R.const, R) for b in weight_basis(12, 3))
    f = g43.scale(x * 3 + y * y) + g62.scale(x * y * mpq(-1, 2))
    dec = decompose(f, 12, 3)
    assert dec.exact
    assert dec.coefficients == [x * 3 + y * y, x * y * mpq(-1, 2)]


def test_decompose_reports_residual():
    f = normalized(eisenstein_G(6, 3))
    dec = decompose(f, 4, 3)
    assert not dec.exact
    assert dec.residual.coeff_q(1) == -744


def test_empty_weight_space():
    assert weight_basis(2, 3) == [] and weight_basis(7, 3) == []
    dec = decompose(Q24Series.zero(QQ, 4 * DEN), 2, 3)
    assert dec.exact


def test_invalid_weight():
    with pytest.raises(ValueError):
        eisenstein_G(3, 2)
