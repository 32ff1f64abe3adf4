import cmath
import math

import pytest
from gmpy2 import mpq

from e8genus import charforms as cf
from e8genus import genus as G
from e8genus.eisenstein import eisenstein_G, normalized
from e8genus.genus import Gauge, GenusInstance

E8 = Gauge.E8


@pytest.mark.parametrize("d,l,gauge", [(1, 1, "none"), (2, 2, "none"), (3, 2, "none"),
                                       (2, 3, "e8"), (3, 3, "e8"), (2, 0, "e8"),
                                       (1, 2, "e8xe8"), (2, 2, "e8xe8")])
def test_routes_agree(d, l, gauge):
    rep = G.route_equivalence(GenusInstance(d, l, gauge, q_order=2, u_order=3))
    assert rep.passed, rep.witness


def test_bundle_low_order_slices():
    inst = GenusInstance(3, 3, "none", q_order=2, u_order=2)
    ctx = G.context(inst)
    W, T = ctx.layout.W, ctx.layout.T
    E = G.u_slice(G.bundle_E_ch(inst), 0)
    lam = cf.weighted_wedge_sum(W, [1])
    A1 = (-cf.adams_ch(W, 1, True) - cf.adams_ch(W, 1) + cf.adams_ch(T, 1, True)
          + cf.adams_ch(T, 1) - 2 * (inst.d - inst.l))
    assert E.coeff_q(0) == lam
    assert E.coeff_q(1) == lam * A1


def test_index_zero_is_u_independent():
    inst = GenusInstance(3, 0, "e8", q_order=2, u_order=3)
    ell = G.ell_definition_route(inst)
    for n in (1, 2, 3):
        assert G.u_slice(ell, n).is_zero()
        assert G.a_n(inst, n).is_zero()


def test_a0_for_d2_l2_is_c2_times_g4():
    a0 = G.a0_coefficients(GenusInstance(2, 2, E8), 3)
    c2 = a0[0].ring.gen("c2")
    g4 = normalized(eisenstein_G(4, 3))
    assert a0 == [c2 * int(c) for c in g4.coefficient_list(3)]


def test_a0_for_d2_l0_is_a_multiple_of_g6():
    # only exp(C/720) = 1 - P2/24 survives in degree 4 at q^0
    a0 = G.a0_coefficients(GenusInstance(2, 0, E8), 3)
    p2 = a0[0].ring.gen("P2a")
    g6 = normalized(eisenstein_G(6, 3))
    assert a0 == [p2 * mpq(-1, 24) * int(c) for c in g6.coefficient_list(3)]


@pytest.mark.parametrize("d,l,gauge", [(2, 2, "e8"), (3, 2, "e8"), (4, 2, "e8"), (3, 4, "e8"),
                                       (1, 2, "e8xe8"), (4, 2, "e8xe8"), (2, 0, "e8")])
def test_templates_with_q2_cross_term(d, l, gauge):
    rep = G.verify_prop_expansions(GenusInstance(d, l, gauge), fixed_A2=True)
    assert rep.passed, rep.witness


def test_q2_template_without_cross_term_differs_at_4_2():
    rep = G.verify_prop_expansions(GenusInstance(4, 2, E8))
    assert not rep.passed
    assert rep.witness["term"] == "a0[q^2]"
    assert [x["term"] for x in rep.details if not x["ok"]] == ["a0[q^2]"]


def test_c_series_by_hand():
    # exp(l G2 u^2), G2 = -1/24 + q + 3 q^2 + ...
    for l in (1, 2, 5):
        inst = GenusInstance(2, l, E8)
        s = G.c_series(inst)
        u2 = lambda k, n: G.u_slice(s, n).coeff_q(k).constant()  # noqa: E731
        assert (u2(0, 2), u2(0, 4)) == (mpq(-l, 24), mpq(l * l, 1152))
        assert (u2(1, 2), u2(1, 4)) == (l, mpq(-l * l, 24))
        assert (u2(2, 2), u2(2, 4)) == (3 * l, mpq(3 * l * l, 8))


def test_c_series_report_flags_only_the_q2_quartic_term():
    rep = G.verify_c_series(GenusInstance(2, 2, E8))
    bad = [(x["q"], x["u"]) for x in rep.details if not x["ok"]]
    assert bad == [(2, 4)]


def test_u_dictionary():
    for n in range(1, 6):
        r = mpq(7, 3)
        lhs = complex(G.z_to_u(r, n)) * (2j * math.pi) ** n
        rhs = float(r) * math.pi**n * (1j if n % 2 else 1)
        assert cmath.isclose(lhs, rhs, rel_tol=1e-12)


def test_vanishing_clause_counterexample_in_dimension_6():
    rep = G.verify_vanishing(GenusInstance(3, 3, E8), 1)
    assert not rep.passed
    assert rep.witness == {"term": "a0[q^0]", "nonzero": "(1)*c3W"}


@pytest.mark.parametrize("d,l,gauge", [(2, 2, "e8"), (4, 2, "e8"), (4, 4, "e8"), (6, 4, "e8"),
                                       (2, 2, "e8xe8"), (4, 2, "e8xe8"), (4, 0, "e8")])
def test_a0_decomposes_at_scaling_weight(d, l, gauge):
    inst = GenusInstance(d, l, gauge)
    rep = G.decompose_a0(inst, weight=inst.scaling_weight)
    assert rep.passed, rep.witness


def test_a0_misses_claimed_weight():
    rep = G.decompose_a0(GenusInstance(2, 2, E8))
    assert not rep.passed


@pytest.mark.parametrize("gauge", ["none", "e8", "e8xe8"])
@pytest.mark.parametrize("d,l", [(2, 2), (3, 3), (4, 2)])
def test_numeric_weight_is_scaling_weight(gauge, d, l):
    inst = GenusInstance(d, l, gauge)
    rep = G.jacobi_numeric_check(inst, 0.3 + 1.2j, 0.15 - 0.05j, weight=inst.scaling_weight)
    assert rep.passed, rep.witness
    assert rep.got["observed_weight"] == inst.scaling_weight


def test_numeric_vanishing_for_odd_scaling_weight():
    rep = G.jacobi_numeric_check(GenusInstance(3, 2, E8), 2j, 0.2)
    assert rep.passed
    assert rep.got["observed_weight"] is None
    assert any("vanishes" in n for n in rep.notes)


def test_numeric_refuses_near_real_axis():
    with pytest.raises(ValueError):
        G.ell_numeric(GenusInstance(2, 2, E8), 0.1 + 0.2j, 0.1)
    with pytest.raises(ValueError):
        G.jacobi_numeric_check(GenusInstance(2, 2, E8), 0.5 - 1j, 0.1)


def test_instance_validation():
    with pytest.raises(ValueError):
        GenusInstance(8, 2, "e8")
    assert GenusInstance(8, 2, "none").gauge is Gauge.NONE
    assert Gauge.parse("E8×E8") is Gauge.E8XE8
    inst = GenusInstance(5, 2, "e8")
    assert (inst.claimed_weight, inst.scaling_weight, inst.index) == (12, 7, 1)


def test_anomaly_case_mismatch():
    with pytest.raises(ValueError):
        G.verify_anomaly_case(GenusInstance(2, 2, E8), 0)


def test_case_instances():
    assert G.case_instances(E8, 0) == [(2, 4), (3, 6)]
    assert G.case_instances(E8, 8) == [(5, 2), (6, 4)]
    assert G.case_instances(E8, 12) == [(7, 2)]
    assert G.case_instances(Gauge.E8XE8, -4)[0] == (1, 6)
