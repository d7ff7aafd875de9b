import math
import random
from fractions import Fraction

import pytest

from cy4pairs.algebra import RatFn
from cy4pairs.gvseries import (
    INF,
    ClassData,
    GVTable,
    InvalidChamber,
    conjecture_rhs,
    grassmannian_sum,
    gv0_to_gw0,
    gv1_to_gw1,
    gw0_to_gv0,
    gw1_to_gv1,
    macmahon,
    nagao_nakajima,
    q_negate,
)
from cy4pairs.series import Series2


F = Fraction


def const(x):
    return RatFn.from_const(F(x))


def test_table_validation():
    with pytest.raises(ValueError):
        GVTable("GW2", {1: 1})
    with pytest.raises(ValueError):
        GVTable("GV0", {0: 1})
    with pytest.raises(ValueError):
        GVTable("GV0", {(1, 2): 1})
    with pytest.raises(ValueError):
        GVTable("MEETING", {3: 1})
    with pytest.raises(ValueError):
        GVTable("MEETING", {(0, 2): 1})


def test_table_drops_zeros_and_compares_by_content():
    a = GVTable("GV0", {1: 1, 2: 0, 3: F(0)})
    b = GVTable("GV0", {1: F(2, 2)})
    assert a == b
    assert a.entries == {1: F(1)}
    assert a.value(2) == 0
    assert a.max_degree() == 1
    assert GVTable("MEETING", {(2, 3): 1}).max_degree() == 5
    assert GVTable("GW1").max_degree() == 0


def test_table_json_roundtrip():
    t = GVTable("GV0", {1: 2875, 2: F(5, 4)})
    assert t.to_json() == {
        "kind": "GV0",
        "entries": [{"d": 1, "value": "2875"}, {"d": 2, "value": "5/4"}],
    }
    assert GVTable.from_json(t.to_json()) == t
    m = GVTable("MEETING", {(1, 2): -3})
    assert GVTable.from_json(m.to_json()) == m


def test_gv0_to_gw0_examples():
    out = gv0_to_gw0(GVTable("GV0", {1: 1}), d_max=4)
    assert out == GVTable("GW0", {1: 1, 2: F(1, 4), 3: F(1, 9), 4: F(1, 16)})
    assert gv0_to_gw0(GVTable("GV0")) == GVTable("GW0")
    out = gv0_to_gw0(GVTable("GV0", {2: 5}), d_max=6)
    assert out == GVTable("GW0", {2: 5, 4: F(5, 4), 6: F(5, 9)})
    with pytest.raises(ValueError):
        gv0_to_gw0(GVTable("GW0", {1: 1}))


def test_gw0_to_gv0_examples():
    assert gw0_to_gv0(GVTable("GW0", {1: 7})) == GVTable("GV0", {1: 7})
    # n_2 = GW_2 - GW_1/4 vanishes on the pure multiple-cover table
    assert gw0_to_gv0(GVTable("GW0", {1: 1, 2: F(1, 4)})) == GVTable("GV0", {1: 1})


def test_genus0_roundtrip_random_tables():
    rng = random.Random(41)
    for _ in range(100):
        entries = {
            d: rng.randint(-50, 50)
            for d in rng.sample(range(1, 21), rng.randint(0, 8))
        }
        n = GVTable("GV0", entries)
        assert gw0_to_gv0(gv0_to_gw0(n, d_max=20), d_max=20) == n
        gw = GVTable(
            "GW0",
            {
                d: F(rng.randint(-40, 40), rng.randint(1, 9))
                for d in rng.sample(range(1, 21), rng.randint(0, 8))
            },
        )
        assert gv0_to_gw0(gw0_to_gv0(gw, d_max=20), d_max=20) == gw


def test_gv1_to_gw1_sigma_ladder():
    out = gv1_to_gw1(
        GVTable("GV1", {1: 1}), GVTable("N0C2"), GVTable("MEETING"), d_max=4
    )
    assert out == GVTable("GW1", {1: 1, 2: F(3, 2), 3: F(4, 3), 4: F(7, 4)})
    zero = gv1_to_gw1(GVTable("GV1"), GVTable("N0C2"), GVTable("MEETING"), d_max=6)
    assert zero == GVTable("GW1")


def test_gv1_to_gw1_correction_terms():
    out = gv1_to_gw1(
        GVTable("GV1"), GVTable("N0C2", {1: 24}), GVTable("MEETING"), d_max=5
    )
    assert out == GVTable("GW1", {d: F(-1, d) for d in range(1, 6)})
    out = gv1_to_gw1(
        GVTable("GV1"), GVTable("N0C2"), GVTable("MEETING", {(1, 2): 24}), d_max=6
    )
    assert out == GVTable("GW1", {3: 1, 6: F(1, 2)})


def test_genus1_roundtrip_random_tables():
    rng = random.Random(43)
    for _ in range(100):
        n1 = GVTable(
            "GV1",
            {
                d: rng.randint(-30, 30)
                for d in rng.sample(range(1, 13), rng.randint(0, 6))
            },
        )
        n0c2 = GVTable(
            "N0C2",
            {
                d: rng.randint(-30, 30)
                for d in rng.sample(range(1, 13), rng.randint(0, 4))
            },
        )
        meeting = GVTable(
            "MEETING",
            {
                (rng.randint(1, 6), rng.randint(1, 6)): rng.randint(-10, 10)
                for _ in range(rng.randint(0, 3))
            },
        )
        gw1 = gv1_to_gw1(n1, n0c2, meeting, d_max=12)
        assert gw1_to_gv1(gw1, n0c2, meeting, d_max=12) == n1


def test_macmahon_small_orders():
    assert [str(macmahon(0).coeff(0, 0))] == ["1"]
    assert [str(macmahon(2).coeff(0, j)) for j in range(3)] == ["1", "1", "3"]
    assert [str(macmahon(4).coeff(0, j)) for j in range(5)] == [
        "1",
        "1",
        "3",
        "6",
        "13",
    ]


def _sigma2(n):
    return sum(e * e for e in range(1, n + 1) if n % e == 0)


def test_macmahon_vs_sigma2_exponential():
    # independent oracle: M(y) = exp(sum_n sigma_2(n)/n * y^n)
    order = 12
    u = Series2(
        0, order, {(0, n): F(_sigma2(n), n) for n in range(1, order + 1)}
    )
    expo = Series2.const(1, 0, order)
    power = Series2.const(1, 0, order)
    for j in range(1, order + 1):
        power = power * u
        expo = expo + power * F(1, math.factorial(j))
    assert macmahon(order) == expo


def test_conjecture_rhs_rejects_bad_chamber():
    for t in (0, -1, F(-3, 2)):
        with pytest.raises(InvalidChamber):
            conjecture_rhs([ClassData(1, 1, 0)], t, 4, 2)


def test_conjecture_rhs_trivial_inputs():
    assert conjecture_rhs([], INF, 3, 2) == Series2.const(1, 3, 2)
    assert conjecture_rhs([ClassData(2, 0, 0)], 5, 3, 2) == Series2.const(1, 3, 2)


def test_conjecture_rhs_pt_chamber_quintic_coefficients():
    s = conjecture_rhs([ClassData(1, 2875, 0)], INF, 10, 1)
    for n in range(1, 11):
        assert s.coeff(n, 1) == const((-1) ** (n + 1) * 2875 * n)


def test_conjecture_rhs_pt_chamber_960l_coefficients():
    for l in (1, 2, 3):
        s = conjecture_rhs([ClassData(1, 960 * l, 0)], INF, 10, 1)
        for n in range(1, 11):
            assert s.coeff(n, 1) == const((-1) ** (n + 1) * 960 * l * n)


def test_conjecture_rhs_js_diagonal_matches_binomial_power():
    # with cutoff k the n = k*d slice collapses onto the top factor
    for k in range(1, 5):
        for a in range(1, 5):
            d_top = 6
            s = conjecture_rhs(
                [ClassData(1, a, 0)], F(2 * k + 1, 2), k * d_top, d_top
            )
            for d in range(d_top + 1):
                want = math.comb(k * a, d) * (-1) ** (d + k * d)
                assert s.coeff(k * d, d) == const(want)


def test_conjecture_rhs_cutoff_is_floor():
    # t = 1 gives a single factor (1 + q y)^{n0D}
    s = conjecture_rhs([ClassData(1, 3, 0)], 1, 4, 4)
    assert s == (1 + Series2.monomial(1, 1, 1, 4, 4)) ** 3
    # just below the next wall nothing changes; at t = 2 the k = 2 factor enters
    assert conjecture_rhs([ClassData(1, 3, 0)], F(199, 100), 4, 4) == s
    assert conjecture_rhs([ClassData(1, 3, 0)], 2, 4, 4) != s


def test_conjecture_rhs_class_degree_sets_y_power():
    s = conjecture_rhs([ClassData(2, 1, 0)], F(1, 2), 4, 4)
    assert s == (1 + Series2.monomial(1, 2, 1, 4, 4))
    # degree scales the cutoff too: floor(t*w) = 1 already at t = 1/2
    assert conjecture_rhs([ClassData(2, 1, 0)], F(1, 4), 4, 4) == Series2.const(
        1, 4, 4
    )


def test_conjecture_rhs_multi_class_product_commutes():
    classes = [ClassData(1, 2, 0), ClassData(2, -1, 1), ClassData(1, 0, F(1, 3))]
    a = conjecture_rhs(classes, F(5, 2), 6, 6)
    b = conjecture_rhs(list(reversed(classes)), F(5, 2), 6, 6)
    assert a == b


def test_conjecture_rhs_genus_one_factor_only():
    s = conjecture_rhs([ClassData(1, 0, 2)], 7, 3, 6)
    mm = macmahon(6)
    sq = mm * mm
    for j in range(7):
        assert s.coeff(0, j) == sq.coeff(0, j)
    assert all(i == 0 for (i, _j) in s.coeffs)
    # rational exponent: the square of M^{1/2} is M again
    half = conjecture_rhs([ClassData(1, 0, F(1, 2))], INF, 0, 6)
    assert half * half == conjecture_rhs([ClassData(1, 0, 1)], INF, 0, 6)
    # degree-2 class feeds the MacMahon factor with y^2
    s2 = conjecture_rhs([ClassData(2, 0, 1)], 1, 0, 5)
    for j in range(6):
        want = mm.coeff(0, j // 2) if j % 2 == 0 else RatFn.zero()
        assert s2.coeff(0, j) == want


def test_class_data_validation():
    with pytest.raises(ValueError):
        ClassData(0, 1, 0)
    with pytest.raises(ValueError):
        ClassData(1, F(1, 2), 0)
    c = ClassData(3, -2, F(7, 3))
    assert (c.omega_beta, c.n0D, c.n1X) == (3, -2, F(7, 3))


def test_nagao_nakajima_factor():
    assert nagao_nakajima(1, 3, 1) == 1 + Series2.monomial(1, 1, 1, 3, 1)
    assert nagao_nakajima(0, 3, 2) == Series2.const(1, 3, 2)
    # agrees with the one-class conjecture series of unit weight
    for k in range(1, 4):
        assert nagao_nakajima(k, 8, 3) == conjecture_rhs(
            [ClassData(1, 1, 0)], F(2 * k + 1, 2), 8, 3
        )
    with pytest.raises(ValueError):
        nagao_nakajima(-1, 2, 2)


def test_q_negate_companion():
    s = conjecture_rhs([ClassData(1, 5, 0)], INF, 6, 2)
    flipped = q_negate(s)
    assert q_negate(flipped) == s
    for n in range(7):
        assert flipped.coeff(n, 1) == s.coeff(n, 1) * F((-1) ** n)


def test_grassmannian_sum_examples():
    assert grassmannian_sum(2, 2, 2) == 6
    assert grassmannian_sum(5, 1, 0) == 1
    assert grassmannian_sum(1, 3, 2) == 3
    assert grassmannian_sum(2, 0, 0) == 1
    assert grassmannian_sum(2, 0, 3) == 0
    with pytest.raises(ValueError):
        grassmannian_sum(-1, 2, 2)


def test_grassmannian_sum_is_vandermonde():
    for k in range(7):
        for a in range(7):
            for d in range(7):
                assert grassmannian_sum(k, a, d) == math.comb(k * a, d)


def test_grassmannian_generating_series():
    for k in range(4):
        for a in range(4):
            series = Series2(
                0, 6, {(0, d): grassmannian_sum(k, a, d) for d in range(7)}
            )
            assert series == (1 + Series2.monomial(0, 1, 1, 0, 6)) ** (k * a)
