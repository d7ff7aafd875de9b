"""Tests for the exact polynomial / rational-function kernel."""

import random
from fractions import Fraction

import pytest

from cy4pairs.algebra import (
    VARS,
    VARS_EXT,
    DivisionByZero,
    MPoly,
    PoleAtPoint,
    RatFn,
    eval_at,
    poly_gcd,
    reduce_cy_relation,
)


def mk(name):
    return MPoly.variable(name)


L1, L2, L3, M = (mk(n) for n in VARS)


def test_mpoly_basics():
    p = L1 + L2
    q = L1 - L2
    assert p * q == L1 * L1 - L2 * L2
    assert (p + q) == 2 * L1
    assert p - p == MPoly.zero()
    assert not (p - p)
    assert MPoly.const(Fraction(3, 2)).const_value() == Fraction(3, 2)


def test_mpoly_degrees():
    p = M * M * L3 + L1
    assert p.total_degree() == 3
    assert p.degree_in("m") == 2
    assert p.degree_in("l2") == 0
    assert MPoly.zero().total_degree() == -1


def test_mpoly_pow():
    p = L1 + 1
    assert p**0 == MPoly.const(1)
    assert p**3 == p * p * p
    with pytest.raises(ValueError):
        p ** (-1)


def test_mpoly_str_ordering():
    # graded order with m most significant inside each degree
    p = M * M + M * L3
    assert str(p) == "m^2 + m*l3"
    assert str(L1 + L2 + L3) == "l1 + l2 + l3"
    assert str(MPoly.zero()) == "0"
    assert str(-M + 1) == "-m + 1"


def test_mpoly_eval():
    p = 2 * M * L3 + L1
    assert p.eval({"m": 3, "l3": Fraction(1, 2), "l1": -1}) == 2
    with pytest.raises(ValueError):
        p.eval({"m": 1, "l3": 1})  # l1 missing


def test_mpoly_coeff_of_power():
    p = M * M * L3 + 2 * M * L1 + L2
    assert p.coeff_of_power("m", 2) == L3
    assert p.coeff_of_power("m", 1) == 2 * L1
    assert p.coeff_of_power("m", 0) == L2
    assert p.coeff_of_power("m", 5) == MPoly.zero()


def test_divexact():
    a = (L1 + L2) * (L1 - L3) * (M + 2)
    assert a.divexact(L1 + L2) == (L1 - L3) * (M + 2)
    assert a.divexact(L1 + L3) is None
    assert MPoly.zero().divexact(L1) == MPoly.zero()


def test_poly_gcd_known():
    a = (L1 + L2) ** 2 * (M - L3)
    b = (L1 + L2) * (M + L3)
    g = poly_gcd(a, b)
    assert g == L1 + L2
    # coprime inputs
    assert poly_gcd(L1 + L2, L1 - L2).is_const()
    # gcd with zero
    assert poly_gcd(MPoly.zero(), 2 * L1) == L1


def test_ratfn_reduces_gcd():
    r = RatFn((L1 + L2) * M, (L1 + L2) * L3)
    assert r.num == M
    assert r.den == L3


def test_ratfn_canonical_scaling():
    # coefficients cleared to integers with joint content 1
    r = RatFn(MPoly.const(Fraction(1, 2)) * M, L3)
    assert r.num == M
    assert r.den == 2 * L3
    # denominator leading coefficient positive
    r = RatFn(M, -L3)
    assert r.den == L3
    assert r.num == -M


def test_ratfn_str_matches_wire_format():
    r = RatFn(M * M + M * L3, 2 * L3 * L3)
    assert str(r) == "(m^2 + m*l3) / (2*l3^2)"
    assert str(RatFn(M)) == "m"
    assert str(RatFn.zero()) == "0"


def test_ratfn_field_ops():
    a = RatFn(M, L3)
    b = RatFn(L1, L2)
    assert a + b == RatFn(M * L2 + L1 * L3, L3 * L2)
    assert a - a == RatFn.zero()
    assert a * b / b == a
    assert (a / a) == RatFn.one()
    assert a ** (-2) == RatFn(L3 * L3, M * M)


def test_ratfn_division_by_zero():
    with pytest.raises(DivisionByZero):
        RatFn(M, MPoly.zero())
    with pytest.raises(DivisionByZero):
        RatFn(M) / RatFn.zero()


def test_ratfn_structural_equality():
    # same function built two ways must be structurally identical
    a = RatFn(M * M - L3 * L3, M - L3)
    b = RatFn(M + L3)
    assert a == b
    assert hash(a) == hash(b)
    assert a != RatFn(M - L3)


def test_eval_at_and_poles():
    r = RatFn(M, L3 - L1)
    assert eval_at(r, {"m": 6, "l3": 3, "l1": 1}) == 3
    with pytest.raises(PoleAtPoint):
        r.eval_at({"m": 1, "l3": 2, "l1": 2})


def test_subs_scalar_partial():
    r = RatFn(M + L1, L3)
    s = r.subs_scalar({"l1": 2})
    assert s == RatFn(M + 2, L3)
    with pytest.raises(PoleAtPoint):
        RatFn(M, L3 - 1).subs_scalar({"l3": 1})


def test_coeff_of_var_power():
    r = RatFn(M * M + M * L3, 2 * L3 * L3)
    assert r.coeff_of_var_power("m", 2) == RatFn(MPoly.const(1), 2 * L3 * L3)
    assert r.coeff_of_var_power("m", 1) == RatFn(MPoly.const(1), 2 * L3)
    with pytest.raises(ValueError):
        RatFn(L1, M).coeff_of_var_power("m", 0)


def test_reduce_cy_relation():
    l0 = MPoly.variable("l0", VARS_EXT)
    l1 = MPoly.variable("l1", VARS_EXT)
    l2 = MPoly.variable("l2", VARS_EXT)
    l3 = MPoly.variable("l3", VARS_EXT)
    assert reduce_cy_relation(l0 + l1 + l2 + l3) == RatFn.zero()
    assert reduce_cy_relation(l0) == RatFn(-(L1 + L2 + L3))
    # quadratic identity: l0^2 - (l1+l2+l3)^2 = 0
    assert reduce_cy_relation(l0 * l0 - (l1 + l2 + l3) ** 2) == RatFn.zero()
    # rational input
    r = RatFn(MPoly.variable("m", VARS_EXT), l0 + l1)
    assert reduce_cy_relation(r) == RatFn(-M, L2 + L3)


def rand_poly(rng, nterms=4, maxdeg=3):
    terms = {}
    for _ in range(nterms):
        exp = tuple(rng.randrange(maxdeg) for _ in VARS)
        terms[exp] = Fraction(rng.randrange(-9, 10), rng.randrange(1, 5))
    return MPoly(terms)


def rand_ratfn(rng):
    num = rand_poly(rng)
    den = rand_poly(rng)
    while den.is_zero():
        den = rand_poly(rng)
    return RatFn(num, den)


def test_field_axioms_random():
    rng = random.Random(20260814)
    for _ in range(40):
        a, b, c = rand_ratfn(rng), rand_ratfn(rng), rand_ratfn(rng)
        assert (a + b) * c == a * c + b * c
        assert a + b == b + a
        assert (a - b) + b == a
        if not b.is_zero():
            assert (a / b) * b == a


def test_canonical_form_random():
    rng = random.Random(7)
    for _ in range(40):
        r = rand_ratfn(rng)
        # gcd removed
        assert poly_gcd(r.num, r.den).is_const()
        # integer coefficients, joint content 1
        coeffs = list(r.num.terms.values()) + list(r.den.terms.values())
        assert all(c.denominator == 1 for c in coeffs)
        from math import gcd

        g = 0
        for c in coeffs:
            g = gcd(g, c.numerator)
        assert g == 1
        # positive denominator lead
        assert r.den.leading()[1] > 0
        # rebuilding from the canonical pair is the identity
        assert RatFn(r.num, r.den) == r


def test_eval_is_homomorphism_random():
    rng = random.Random(99)
    pt = {"l1": Fraction(5), "l2": Fraction(-7), "l3": Fraction(11, 2), "m": Fraction(13)}
    for _ in range(25):
        a, b = rand_ratfn(rng), rand_ratfn(rng)
        try:
            va, vb = a.eval_at(pt), b.eval_at(pt)
            assert (a + b).eval_at(pt) == va + vb
            assert (a * b).eval_at(pt) == va * vb
        except PoleAtPoint:
            continue
