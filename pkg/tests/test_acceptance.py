"""Acceptance gate: the twelve headline identities, each checked exactly.

Every criterion prints its own pass/fail line so a full run reads as a
scoreboard; all comparisons are structural equalities of exact rational
data — there are no tolerances anywhere.
"""

import math
import random
import time
from fractions import Fraction

from cy4pairs.algebra import MPoly, RatFn
from cy4pairs.characters import bar
from cy4pairs.cohmodels import (
    multinomial_vanishing_check,
    pn2_vanishing,
    proj_bundle_coefficient,
)
from cy4pairs.gvseries import (
    INF,
    ClassData,
    GVTable,
    conjecture_rhs,
    grassmannian_sum,
    gv0_to_gw0,
    gv1_to_gw1,
    gw0_to_gv0,
    gw1_to_gv1,
    macmahon,
)
from cy4pairs.jspairs import (
    chi_x_ii0,
    enumerate_fixed_pairs,
    fit_poly_in_m,
    insertion_free,
    js_invariant_closed,
    js_invariant_localization,
    js_invariant_predicted,
    sqrt_obstruction,
)
from cy4pairs.series import Series2, binom_series


def _report(number, label, body):
    try:
        body()
    except BaseException:
        print("criterion %02d: FAIL - %s" % (number, label))
        raise
    print("criterion %02d: PASS - %s" % (number, label))


def test_criterion_01_three_way_agreement():
    def body():
        start = time.time()
        for k in range(4):
            for d in range(1, 6):
                n = (k + 1) * d
                loc = js_invariant_localization(n, d).value
                clo = js_invariant_closed(n, d).value
                pre = js_invariant_predicted(n, d).value
                assert loc == clo == pre, (n, d)
        assert time.time() - start < 30

    _report(1, "localization = closed = predicted for k <= 3, d <= 5", body)


def test_criterion_02_non_divisible_vanishing():
    def body():
        for n in range(9):
            for d in range(1, 5):
                if n % d:
                    assert js_invariant_localization(n, d).value.is_zero(), (n, d)

    _report(2, "invariant vanishes whenever d does not divide n", body)


def test_criterion_03_insertion_free_corollary():
    def body():
        l3 = MPoly.variable("l3")
        for d in range(1, 6):
            expected = RatFn(MPoly.const(1), l3 ** d * math.factorial(d))
            assert insertion_free(d, d) == expected, d
            for k in range(1, 4):
                assert insertion_free((k + 1) * d, d).is_zero(), (k, d)

    _report(3, "insertion-free values 1/(d! l3^d) at n = d, else 0", body)


def test_criterion_04_square_root_property():
    def body():
        for n in range(7):
            for d in range(1, n + 1):
                for fp in enumerate_fixed_pairs(n, d):
                    s = sqrt_obstruction(fp)
                    assert s + bar(s) == chi_x_ii0(fp), fp
                    assert s.trivial_multiplicity() == 0, fp

    _report(4, "square root halves the obstruction, no trivial weights", body)


def test_criterion_05_grassmannian_vandermonde():
    def body():
        start = time.time()
        y = Series2.monomial(0, 1, 1, 0, 6)
        for k in range(7):
            for a in range(7):
                for d in range(7):
                    assert grassmannian_sum(k, a, d) == math.comb(k * a, d)
                series = Series2(
                    0, 6, {(0, d): grassmannian_sum(k, a, d) for d in range(7)}
                )
                assert series == (1 + y) ** (k * a)
        assert time.time() - start < 1

    _report(5, "composition sum equals C(ka, d) and (1+y)^(ka)", body)


def test_criterion_06_js_chamber_conjecture_instance():
    def body():
        d_top = 6
        for k in range(1, 5):
            for a in range(1, 5):
                series = conjecture_rhs(
                    [ClassData(1, a, 0)], Fraction(2 * k + 1, 2), k * d_top, d_top
                )
                binom = binom_series(k * a, d_top)
                for d in range(d_top + 1):
                    want = binom.coeff(0, d) * Fraction((-1) ** (k * d))
                    assert series.coeff(k * d, d) == want, (k, a, d)

    _report(6, "JS-chamber series restricted to n = k d is (1-(-q)^k y)^(ka)", body)


def test_criterion_07_pt_chamber_coefficients():
    def body():
        for n0d in (2875, 960, 1920, 2880):
            series = conjecture_rhs([ClassData(1, n0d, 0)], INF, 10, 1)
            for n in range(1, 11):
                want = RatFn.from_const(Fraction((-1) ** (n + 1) * n0d * n))
                assert series.coeff(n, 1) == want, (n0d, n)

    _report(7, "PT-chamber linear coefficients (-1)^(n+1) n0D n", body)


def test_criterion_08_macmahon_oracle():
    def body():
        order = 12
        u = Series2(
            0,
            order,
            {
                (0, n): Fraction(
                    sum(e * e for e in range(1, n + 1) if n % e == 0), n
                )
                for n in range(1, order + 1)
            },
        )
        oracle = Series2.const(1, 0, order)
        power = Series2.const(1, 0, order)
        for j in range(1, order + 1):
            power = power * u
            oracle = oracle + power * Fraction(1, math.factorial(j))
        assert macmahon(order) == oracle

    _report(8, "MacMahon coefficients match exp(sum sigma_2(n)/n y^n) to order 12", body)


def test_criterion_09_gv_roundtrips():
    def body():
        rng = random.Random(41)
        for _ in range(100):
            table = GVTable(
                "GV0",
                {
                    d: rng.randint(-50, 50)
                    for d in rng.sample(range(1, 21), rng.randint(0, 8))
                },
            )
            assert gw0_to_gv0(gv0_to_gw0(table, d_max=20), d_max=20) == table
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

    _report(9, "genus 0 and genus 1 conversions invert on 100 random tables", body)


def test_criterion_10_appendix_vanishing():
    def body():
        start = time.time()
        for n in range(1, 7):
            assert pn2_vanishing(n).is_zero(), n
        for n in range(1, 9):
            assert multinomial_vanishing_check(n), n
        assert time.time() - start < 60

    _report(10, "symmetric-product integral vanishes, multinomial identity holds", body)


def test_criterion_11_pushforward_coefficient():
    def body():
        for h0 in range(1, 9):
            for n in range(1, h0 + 1):
                assert proj_bundle_coefficient(h0, n) == n, (h0, n)

    _report(11, "projective-bundle coefficient equals n for all 1 <= n <= h0 <= 8", body)


def test_criterion_12_interpolation_consistency():
    def body():
        m = RatFn(MPoly.variable("m"))
        for k in range(3):
            for d in range(1, 4):
                n = (k + 1) * d
                inv = js_invariant_localization(n, d).value
                samples = [(t, inv.subs_scalar({"m": t})) for t in range(n + 1)]
                rebuilt = RatFn.zero()
                for j, c in enumerate(fit_poly_in_m(samples, n)):
                    rebuilt = rebuilt + c * m ** j
                assert rebuilt == js_invariant_predicted(n, d).value, (n, d)

    _report(12, "interpolation of integer-m samples reproduces the prediction", body)
