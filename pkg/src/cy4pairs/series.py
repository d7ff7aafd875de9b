"""Truncated formal power series in q and y with exact coefficients.

A `Series2` is a bivariate polynomial truncated at fixed orders in q and y,
with coefficients in the exact rational-function field QQ(l1, l2, l3, m).
All arithmetic silently drops terms of q-degree above `q_order` or y-degree
above `y_order`; two series only combine when their truncation orders agree,
so an accidental mix of differently-truncated data fails loudly instead of
producing a silently less precise answer.

The one non-generic constructor is `binom_series`, the generalized binomial
series (1-y)^x for a symbolic rational-function exponent x: its y^d
coefficient is (-1)^d * binom_poly(x, d) with binom_poly the falling
factorial x(x-1)...(x-d+1)/d!.  Since the exponent enters only through
these polynomials, the series is exact at every truncation order.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from .algebra import VARS, RatFn


class OrderMismatch(Exception):
    """Arithmetic between series with different truncation orders."""


class NonUnitConstantTerm(Exception):
    """Inversion of a series whose constant term is zero."""


def _coerce(value, names=VARS) -> RatFn:
    if isinstance(value, RatFn):
        return value
    return RatFn.from_const(Fraction(value), names)


class Series2:
    """Bivariate series truncated at q^q_order, y^y_order (inclusive)."""

    __slots__ = ("q_order", "y_order", "coeffs")

    def __init__(self, q_order: int, y_order: int, coeffs=None):
        if q_order < 0 or y_order < 0:
            raise ValueError("truncation orders must be non-negative")
        self.q_order = q_order
        self.y_order = y_order
        clean = {}
        if coeffs:
            for (i, j), value in coeffs.items():
                if i > q_order or j > y_order:
                    continue
                c = _coerce(value)
                if c:
                    clean[(i, j)] = c
        self.coeffs = clean

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, q_order: int, y_order: int) -> "Series2":
        return cls(q_order, y_order)

    @classmethod
    def const(cls, value, q_order: int, y_order: int) -> "Series2":
        return cls(q_order, y_order, {(0, 0): value})

    @classmethod
    def monomial(cls, i: int, j: int, value, q_order: int, y_order: int) -> "Series2":
        return cls(q_order, y_order, {(i, j): value})

    # -- access --------------------------------------------------------

    def coeff(self, i: int, j: int) -> RatFn:
        return self.coeffs.get((i, j), RatFn.zero())

    def is_zero(self) -> bool:
        return not self.coeffs

    def _check(self, other: "Series2"):
        if self.q_order != other.q_order or self.y_order != other.y_order:
            raise OrderMismatch(
                "orders (%d, %d) vs (%d, %d)"
                % (self.q_order, self.y_order, other.q_order, other.y_order)
            )

    # -- ring operations ------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Series2):
            other = Series2.const(other, self.q_order, self.y_order)
        self._check(other)
        out = dict(self.coeffs)
        for key, value in other.coeffs.items():
            s = out.get(key, RatFn.zero()) + value
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        return Series2(self.q_order, self.y_order, out)

    __radd__ = __add__

    def __neg__(self):
        return Series2(
            self.q_order, self.y_order, {k: -v for k, v in self.coeffs.items()}
        )

    def __sub__(self, other):
        if not isinstance(other, Series2):
            other = Series2.const(other, self.q_order, self.y_order)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Series2):
            other = Series2.const(other, self.q_order, self.y_order)
        self._check(other)
        out = {}
        for (i1, j1), c1 in self.coeffs.items():
            for (i2, j2), c2 in other.coeffs.items():
                i, j = i1 + i2, j1 + j2
                if i > self.q_order or j > self.y_order:
                    continue
                key = (i, j)
                s = out.get(key, RatFn.zero()) + c1 * c2
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
        return Series2(self.q_order, self.y_order, out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        return series_int_pow(self, e)

    def __eq__(self, other):
        return (
            isinstance(other, Series2)
            and self.q_order == other.q_order
            and self.y_order == other.y_order
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash(
            (self.q_order, self.y_order, frozenset(self.coeffs.items()))
        )

    # -- presentation -----------------------------------------------------

    def sorted_items(self):
        return sorted(self.coeffs.items())

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for (i, j), value in self.sorted_items():
            mono = "*".join(
                ["q^%d" % i] * (i > 0) + ["y^%d" % j] * (j > 0)
            )
            text = str(value)
            if " " in text and not text.startswith("("):
                text = "(%s)" % text
            parts.append(text if not mono else "%s*%s" % (text, mono))
        return " + ".join(parts)

    def __repr__(self):
        return "Series2(%d, %d, %s)" % (self.q_order, self.y_order, str(self))

    def to_json(self) -> dict:
        return {
            "q_order": self.q_order,
            "y_order": self.y_order,
            "coeffs": [
                {"q": i, "y": j, "value": str(value)}
                for (i, j), value in self.sorted_items()
            ],
        }


def series_arith(a: Series2, b: Series2, op: str) -> Series2:
    """Truncated ring arithmetic; `op` is "add" or "mul"."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise ValueError("unknown op %r" % (op,))


def series_int_pow(a: Series2, e: int) -> Series2:
    """a**e truncated; negative e inverts the unit part geometrically."""
    if e < 0:
        c0 = a.coeff(0, 0)
        if not c0:
            raise NonUnitConstantTerm("cannot invert a series with zero constant term")
        # a = c0*(1 - u) with u supported in positive total degree, so the
        # geometric series for (1 - u)^-1 terminates at the truncation.
        one = Series2.const(1, a.q_order, a.y_order)
        u = one - a * (RatFn.one() / c0)
        inv = one
        term = one
        for _ in range(a.q_order + a.y_order):
            term = term * u
            if term.is_zero():
                break
            inv = inv + term
        inv = inv * (RatFn.one() / c0)
        return series_int_pow(inv, -e)
    out = Series2.const(1, a.q_order, a.y_order)
    base = a
    k = e
    while k:
        if k & 1:
            out = out * base
        k >>= 1
        if k:
            base = base * base
    return out


def binom_poly(x, d: int) -> RatFn:
    """Falling-factorial binomial coefficient x(x-1)...(x-d+1)/d!."""
    if d < 0:
        raise ValueError("binomial index must be non-negative")
    x = _coerce(x)
    out = RatFn.one(x.names)
    for a in range(d):
        out = out * (x - a)
    return out * Fraction(1, factorial(d))


def binom_series(x, y_order: int) -> Series2:
    """(1-y)^x as a y-series: coefficient of y^d is (-1)^d * binom_poly(x, d)."""
    x = _coerce(x)
    coeffs = {}
    value = RatFn.one()
    coeffs[(0, 0)] = value
    for d in range(1, y_order + 1):
        # Incremental falling factorial: C(x,d) = C(x,d-1)*(x-d+1)/d.
        value = value * (x - (d - 1)) * Fraction(1, d)
        sign = -1 if d % 2 else 1
        coeffs[(0, d)] = value * sign
    return Series2(0, y_order, coeffs)
