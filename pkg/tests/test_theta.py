import cmath
import math

import pytest

from e8genus.poly import Generator, PolyRing
from e8genus.qseries import DEN, eta_power
from e8genus.scalars import QQ, QQI, GaussianRational, I
from e8genus.theta import (ThetaKind, check_lattice_shifts, check_modular_transforms, theta_numeric,
                           theta_of, theta_over_arg, theta_qy_series)


def triple_product_sum(kind, tau, z, N=30):
    """Theta functions as bilateral sums, independent of the product formula."""
    q = cmath.exp(2j * math.pi * tau)
    y = cmath.exp(2j * math.pi * z)
    tot = 0j
    for n in range(-N, N + 1):
        if kind == "theta":
            tot += -1j * (-1) ** n * q ** ((n + 0.5) ** 2 / 2) * cmath.exp(1j * math.pi * (2 * n + 1) * z)
        elif kind == "theta1":
            tot += q ** ((n + 0.5) ** 2 / 2) * cmath.exp(1j * math.pi * (2 * n + 1) * z)
        elif kind == "theta2":
            tot += (-1) ** n * q ** (n * n / 2) * y**n
        else:
            tot += q ** (n * n / 2) * y**n
    return tot


@pytest.mark.parametrize("kind", ["theta", "theta1", "theta2", "theta3"])
@pytest.mark.parametrize("tau,z", [(1j, 0.3), (0.2 + 0.9j, 0.1 - 0.25j), (-0.5 + 1.4j, 0.45 + 0.1j)])
def test_numeric_product_matches_bilateral_sum(kind, tau, z):
    a = theta_numeric(kind, tau, z)
    b = triple_product_sum(kind, tau, z)
    assert abs(a - b) <= 1e-12 * max(1.0, abs(b))


@pytest.mark.parametrize("kind", ["theta", "theta3"])
def test_qy_series_matches_bilateral_sum_exactly(kind):
    order = 4
    s = theta_qy_series(kind, order)
    want = {}
    for n in range(-4, 5):
        if kind == "theta":
            e, key, c = 3 * (2 * n + 1) ** 2, 2 * n + 1, GaussianRational(0, -((-1) ** n))
        else:
            e, key, c = 12 * n * n, 2 * n, GaussianRational(1)
        if e < s.trunc:
            want.setdefault(e, {})[key] = c
    got = {e: {k: v for k, v in c.items() if v != 0} for e, c in s.terms.items()}
    assert got == want


def test_derivative_at_zero_is_eta_cubed():
    # theta(tau, z) = 2 pi z eta^3 + O(z^3), i.e. i [v^1] theta = eta^3 in v = 2 pi i z
    R = PolyRing([Generator("v", 0, max_exp=1)], 0, QQI)
    th = theta_of("theta", R.gen("v"), 5)
    lin = th.map_coeffs(lambda p: R.const(p.coefficient({"v": 1}) * I))
    assert lin == eta_power(3, 5, QQI).map_coeffs(R.const, R)


def test_theta_over_arg_times_arg():
    R = PolyRing([Generator("x", 2)], 6, QQI)
    x = R.gen("x")
    assert theta_over_arg(x, 3).scale(x) == theta_of("theta", x, 3)


def test_theta_refuses_rational_scalars():
    R = PolyRing([Generator("x", 2)], 4, QQ)
    with pytest.raises(TypeError):
        theta_of(ThetaKind.THETA, R.gen("x"), 2)


def test_even_thetas_are_even_in_v():
    R = PolyRing([Generator("x", 2)], 8, QQ)
    x = R.gen("x")
    for kind in ("theta1", "theta2", "theta3"):
        assert theta_of(kind, x, 3) == theta_of(kind, -x, 3)
        assert theta_of(kind, x, 3).coeff_q(0).coefficient({"x": 1}) == 0


@pytest.mark.parametrize("tau,z", [(0.8j, 0.1), (0.4 + 1.2j, -0.2 + 0.3j), (1.9j + 0.7, 0.37)])
def test_modular_transforms(tau, z):
    rep = check_modular_transforms(tau, z)
    assert rep.passed, rep.witness


def test_lattice_shifts_symbolic_and_numeric():
    assert check_lattice_shifts("symbolic", q_order=4).passed
    assert check_lattice_shifts("numeric", tau=0.3 + 1.1j, z=0.2 - 0.1j).passed


def test_numeric_requires_upper_half_plane():
    with pytest.raises(ValueError):
        theta_numeric("theta", -0.5j, 0.1)


def test_half_integral_powers_only_in_theta2_theta3():
    s2 = theta_qy_series("theta2", 2)
    assert any(e % DEN for e in s2.terms)
    s = theta_qy_series("theta", 2)
    assert all(e % DEN == 3 for e in s.terms)
