"""One test per acceptance criterion, with pinned values and time limits.

Instances, integer tables and tolerances are written out here rather than
imported from the CLI, so the suite and the driver cannot drift together.
"""
import time

from gmpy2 import mpq

from e8genus import genus as G
from e8genus.e8char import check_e8_character
from e8genus.eisenstein import E2, product_series
from e8genus.genus import Gauge, GenusInstance
from e8genus.theta import check_lattice_shifts, check_modular_transforms


class Clock:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.t0


def failures(reports):
    return [(r.check, r.instance, r.witness) for r in reports if not r.passed]


def test_criterion_01_eisenstein_expansions():
    table = {
        "G4": [1, 240, 2160, 6720], "G6": [1, -504, -16632, -122976],
        "G4^2": [1, 480, 61920], "G4*G6": [1, -264, -135432], "G4^3": [1, 720, 179280],
        "G6^2": [1, -1008, 220752], "G4^2*G6": [1, -24, -196632], "G4^4": [1, 960, 354240],
        "G4*G6^2": [1, -768, -19008],
    }
    with Clock() as c:
        got = {k: [int(x) for x in product_series(k, len(v) - 1).coefficient_list(len(v) - 1)]
               for k, v in table.items()}
    assert got == table
    assert c.seconds < 1


def test_criterion_02_e2_expansion():
    with Clock() as c:
        coeffs = E2(2).coefficient_list(2)
    assert coeffs == [mpq(1), mpq(-24), mpq(-72)]
    assert c.seconds < 1


def test_criterion_03_theta_laws():
    points = [(0.8j, 0.13 + 0.05j), (0.3 + 1.0j, 0.21 - 0.1j), (-0.4 + 1.3j, 0.35 + 0.2j),
              (0.1 + 1.7j, -0.27 + 0.11j), (0.5 + 2.0j, 0.4 + 0.3j)]
    with Clock() as c:
        reps = [check_modular_transforms(t, z, tol=1e-9) for t, z in points]
        reps.append(check_lattice_shifts("symbolic", q_order=4))
    assert all(0.8 <= t.imag <= 2 for t, _ in points)
    assert failures(reps) == []
    assert c.seconds < 5


def test_criterion_04_route_equivalence():
    cases = [(d, l, g) for g in ("none", "e8") for d, l in ((1, 1), (2, 2), (3, 2))]
    cases.append((1, 2, "e8xe8"))
    with Clock() as c:
        reps = [G.route_equivalence(GenusInstance(d, l, g, q_order=2, u_order=4))
                for d, l, g in cases]
    assert failures(reps) == []
    assert c.seconds < 120


def test_criterion_05_e8_character():
    with Clock() as c:
        rep = check_e8_character(q_order=3)
    assert rep.passed, rep.witness
    assert rep.got == [1, 248, 4124]
    assert c.seconds < 30


def test_criterion_06_expansion_templates():
    with Clock() as c:
        reps = [G.verify_prop_expansions(GenusInstance(2, 2, "e8")),
                G.verify_prop_expansions(GenusInstance(1, 2, "e8xe8"))]
    assert failures(reps) == []
    assert c.seconds < 300


E8_TABLE = {
    0: ((2, 4), (240, 2160)), 2: ((2, 2), (-504, -16632)), 4: ((3, 2), (480, 61920)),
    6: ((4, 2), (-264, -135432)), 8: ((5, 2), (196560, -24)), 10: ((6, 2), (-24, -196632)),
    12: ((7, 2), (146880, 216)),
}
E8XE8_TABLE = {
    -4: ((1, 6), (240, 2160)), -2: ((2, 6), (-504, -16632)), 0: ((2, 4), (480, 61920)),
    2: ((2, 2), (-264, -135432)), 4: ((3, 2), (196560, -24)), 6: ((4, 2), (-24, -196632)),
    8: ((5, 2), (146880, 216)),
}


def _anomaly(gauge, table):
    reps = []
    for target, ((d, l), expected) in table.items():
        case = G.anomaly_cases(gauge)[target]
        assert case.expected == expected
        reps.append(G.verify_anomaly_case(GenusInstance(d, l, gauge), case))
    return reps


def test_criterion_07_e8_anomaly_relations():
    with Clock() as c:
        reps = _anomaly(Gauge.E8, E8_TABLE)
    assert failures(reps) == []
    assert c.seconds < 600


def test_criterion_08_e8xe8_anomaly_relations():
    with Clock() as c:
        reps = _anomaly(Gauge.E8XE8, E8XE8_TABLE)
    assert failures(reps) == []
    assert c.seconds < 600


VANISHING_SAMPLES = {
    # clause: instances inside its hypothesis, all with 2d <= 6
    ("e8", 1): [(2, 3), (3, 3), (1, 4)], ("e8", 2): [(2, 2), (3, 2), (1, 5)],
    ("e8", 3): [(2, 3), (3, 3), (1, 6)], ("e8", 4): [(2, 2), (3, 2), (1, 7)],
    ("e8", 5): [(2, 3), (3, 3), (1, 8)],
    ("e8xe8", 1): [(2, 3), (3, 3), (1, 8)], ("e8xe8", 2): [(2, 2), (3, 2), (1, 9)],
    ("e8xe8", 3): [(2, 3), (3, 3), (1, 10)], ("e8xe8", 4): [(2, 2), (3, 2), (1, 11)],
    ("e8xe8", 5): [(2, 3), (3, 3), (1, 12)],
}


def test_criterion_09_vanishing_clauses():
    missing = []
    with Clock() as c:
        for (gauge, clause), pairs in VANISHING_SAMPLES.items():
            reps = [G.verify_vanishing(GenusInstance(d, l, gauge), clause) for d, l in pairs]
            if not any(r.passed for r in reps):
                missing.append((gauge, clause))
    assert missing == []
    assert c.seconds < 300


def test_criterion_10_jacobi_form_laws():
    points = [(t, z) for t in (2j, 1 + 1.5j) for z in (0.2, 0.1 + 0.1j)]
    with Clock() as c:
        reps = [G.jacobi_numeric_check(GenusInstance(2, 2, g, tol=1e-6), t, z)
                for g in ("none", "e8", "e8xe8") for t, z in points]
    assert failures(reps) == []
    assert c.seconds < 120


def test_criterion_11_weight_12_decomposition():
    # the stated relation is for 2d - l = 8; (5, 2) is the smallest such pair and
    # (6, 4) the next one with the same 2d - l
    with Clock() as c:
        reps = [G.decompose_a0(GenusInstance(d, l, "e8", q_order=3)) for d, l in ((5, 2), (6, 4))]
    assert all(r.expected["weight"] == 12 for r in reps)
    assert failures(reps) == []
    assert c.seconds < 120
