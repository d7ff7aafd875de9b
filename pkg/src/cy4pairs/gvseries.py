"""Gopakumar-Vafa / Gromov-Witten tables and the conjectural product series.

Two layers live here.  The table layer converts between genus-0 and
genus-1 Gromov-Witten numbers and their conjecturally integral
Gopakumar-Vafa counterparts through the usual multiple-cover sums; the
genus-1 identity additionally consumes a ``c2``-weighted genus-zero table
and the table of meeting invariants, both treated as pure input data.

The series layer assembles the pair-counting conjecture's right-hand
side: a chamber-truncated product of factors ``(1 - (-q)^k y^w)^{k n0D}``
for each curve class, times a MacMahon factor ``M(y^w)^{n1X}`` per class.
The grading variable ``y`` records the degree of a class against the
polarization (``w = omega_beta``), which is how the generating series in
the source geometry are indexed; classes of equal degree therefore share
a ``y``-power.  The stability parameter ``t`` sets the cutoff
``floor(t*w)`` of the inner product; the infinite-``t`` chamber is
requested with the token ``INF`` and caps the cutoff at ``q_order``,
since higher factors cannot touch the truncation.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .series import Series2, binom_poly, series_int_pow

INF = float("inf")

KINDS = ("GW0", "GV0", "GW1", "GV1", "N0C2", "MEETING")


class InvalidChamber(Exception):
    """Raised when the stability parameter is not positive."""


def _divisors(d):
    return [e for e in range(1, d + 1) if d % e == 0]


def _sigma(d):
    """Sum of divisors."""
    return sum(_divisors(d))


class GVTable:
    """Finitely supported table of curve-counting numbers.

    ``kind`` tags which side of which identity the numbers sit on.  All
    kinds except ``MEETING`` are keyed by an integer degree >= 1; meeting
    tables are keyed by pairs ``(b1, b2)`` of degrees.  Values are exact
    rationals and zero entries are dropped, so tables with equal content
    compare equal.
    """

    __slots__ = ("kind", "entries")

    def __init__(self, kind, entries=None):
        if kind not in KINDS:
            raise ValueError("unknown table kind %r" % (kind,))
        clean = {}
        for key, value in dict(entries or {}).items():
            if kind == "MEETING":
                try:
                    b1, b2 = key
                except (TypeError, ValueError):
                    raise ValueError(
                        "MEETING entries are keyed by degree pairs, got %r" % (key,)
                    )
                if not (isinstance(b1, int) and isinstance(b2, int)) or min(b1, b2) < 1:
                    raise ValueError("degrees must be integers >= 1, got %r" % (key,))
                key = (b1, b2)
            elif not isinstance(key, int) or key < 1:
                raise ValueError("degrees must be integers >= 1, got %r" % (key,))
            value = Fraction(value)
            if value:
                clean[key] = value
        self.kind = kind
        self.entries = clean

    def value(self, key) -> Fraction:
        return self.entries.get(key, Fraction(0))

    def max_degree(self) -> int:
        """Largest degree carrying a nonzero entry (pairs count as b1+b2)."""
        if not self.entries:
            return 0
        if self.kind == "MEETING":
            return max(b1 + b2 for b1, b2 in self.entries)
        return max(self.entries)

    def __eq__(self, other):
        return (
            isinstance(other, GVTable)
            and self.kind == other.kind
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.kind, frozenset(self.entries.items())))

    def __repr__(self):
        body = ", ".join(
            "%r: %s" % (key, value) for key, value in sorted(self.entries.items())
        )
        return "GVTable(%r, {%s})" % (self.kind, body)

    def to_json(self) -> dict:
        entries = []
        if self.kind == "MEETING":
            for (b1, b2), value in sorted(self.entries.items()):
                entries.append({"b1": b1, "b2": b2, "value": str(value)})
        else:
            for d, value in sorted(self.entries.items()):
                entries.append({"d": d, "value": str(value)})
        return {"kind": self.kind, "entries": entries}

    @staticmethod
    def from_json(obj) -> "GVTable":
        kind = obj["kind"]
        entries = {}
        for row in obj.get("entries", ()):
            value = Fraction(str(row["value"]))
            if kind == "MEETING":
                entries[(int(row["b1"]), int(row["b2"]))] = value
            else:
                entries[int(row["d"])] = value
        return GVTable(kind, entries)


def _require(table: GVTable, kind: str):
    if table.kind != kind:
        raise ValueError("expected a %s table, got %s" % (kind, table.kind))


# -- genus-zero conversions -------------------------------------------------


def gv0_to_gw0(n: GVTable, d_max=None) -> GVTable:
    """Multiple-cover sum GW_d = sum over e | d of n_{d/e} / e^2.

    The sum has unbounded support once any entry is nonzero, so the output
    is tabulated up to ``d_max`` (default: the input's top degree).
    """
    _require(n, "GV0")
    top = n.max_degree() if d_max is None else d_max
    out = {}
    for d in range(1, top + 1):
        out[d] = sum((n.value(d // e) / (e * e) for e in _divisors(d)), Fraction(0))
    return GVTable("GW0", out)


def gw0_to_gv0(gw: GVTable, d_max=None) -> GVTable:
    """Triangular inverse of :func:`gv0_to_gw0`."""
    _require(gw, "GW0")
    top = gw.max_degree() if d_max is None else d_max
    n = {}
    for d in range(1, top + 1):
        value = gw.value(d)
        for e in _divisors(d):
            if e > 1:
                value -= n[d // e] / (e * e)
        n[d] = value
    return GVTable("GV0", n)


# -- genus-one conversions --------------------------------------------------


def gv1_to_gw1(n1: GVTable, n0c2: GVTable, meeting: GVTable, d_max=None) -> GVTable:
    """Genus-one identity, read off coefficientwise at each degree D:

        GW1_D = sum_{e|D} sigma(e)/e * n1(D/e)
                - 1/24 * sum_{b|D} n0c2(b) * b/D
                + 1/24 * sum_{(b1,b2): (b1+b2)|D} m(b1,b2) * (b1+b2)/D

    The two corrections are the log(1 - q^b) expansions of the auxiliary
    genus-zero data; ``sigma`` is the sum-of-divisors function.
    """
    _require(n1, "GV1")
    _require(n0c2, "N0C2")
    _require(meeting, "MEETING")
    if d_max is None:
        top = max(n1.max_degree(), n0c2.max_degree(), meeting.max_degree())
    else:
        top = d_max
    out = {}
    for D in range(1, top + 1):
        value = Fraction(0)
        for e in _divisors(D):
            value += Fraction(_sigma(e), e) * n1.value(D // e)
        for b in _divisors(D):
            value -= Fraction(1, 24) * n0c2.value(b) * Fraction(b, D)
        for (b1, b2), m in meeting.entries.items():
            if D % (b1 + b2) == 0:
                value += Fraction(1, 24) * m * Fraction(b1 + b2, D)
        out[D] = value
    return GVTable("GW1", out)


def gw1_to_gv1(gw1: GVTable, n0c2: GVTable, meeting: GVTable, d_max=None) -> GVTable:
    """Triangular inverse of :func:`gv1_to_gw1` given the same auxiliary data."""
    _require(gw1, "GW1")
    _require(n0c2, "N0C2")
    _require(meeting, "MEETING")
    if d_max is None:
        top = max(gw1.max_degree(), n0c2.max_degree(), meeting.max_degree())
    else:
        top = d_max
    n1 = {}
    for D in range(1, top + 1):
        value = gw1.value(D)
        for b in _divisors(D):
            value += Fraction(1, 24) * n0c2.value(b) * Fraction(b, D)
        for (b1, b2), m in meeting.entries.items():
            if D % (b1 + b2) == 0:
                value -= Fraction(1, 24) * m * Fraction(b1 + b2, D)
        for e in _divisors(D):
            if e > 1:
                value -= Fraction(_sigma(e), e) * n1[D // e]
        n1[D] = value
    return GVTable("GV1", n1)


# -- series layer ------------------------------------------------------------


def macmahon(order: int) -> Series2:
    """MacMahon function prod_{k>=1} (1 - y^k)^{-k}, truncated at y^order."""
    out = Series2.const(1, 0, order)
    for k in range(1, order + 1):
        base = 1 - Series2.monomial(0, k, 1, 0, order)
        out = out * series_int_pow(base, -k)
    return out


def _macmahon_factor(w: int, q_order: int, y_order: int) -> Series2:
    """MacMahon function in y^w, embedded at the ambient truncation orders."""
    out = Series2.const(1, q_order, y_order)
    for k in range(1, y_order // w + 1):
        base = 1 - Series2.monomial(0, w * k, 1, q_order, y_order)
        out = out * series_int_pow(base, -k)
    return out


def _rat_pow(s: Series2, e: Fraction) -> Series2:
    """s**e for rational e, for s with constant term 1 (binomial series)."""
    if e.denominator == 1:
        return series_int_pow(s, e.numerator)
    u = s - 1
    out = Series2.const(1, s.q_order, s.y_order)
    power = Series2.const(1, s.q_order, s.y_order)
    d = 0
    while True:
        d += 1
        power = power * u
        if power.is_zero():
            return out
        out = out + power * binom_poly(e, d)


class ClassData:
    """Per-class input of the conjecture's product formula.

    ``omega_beta`` is the degree of the (primitive multiple of the) class
    against the polarization and doubles as its y-grading; ``n0D`` is the
    genus-zero count on the divisor geometry, ``n1X`` the (rational)
    genus-one count on the ambient fourfold.
    """

    __slots__ = ("omega_beta", "n0D", "n1X")

    def __init__(self, omega_beta: int, n0D: int = 0, n1X=0):
        if not isinstance(omega_beta, int) or omega_beta < 1:
            raise ValueError("omega_beta must be an integer >= 1")
        if not isinstance(n0D, int):
            raise ValueError("n0D must be an integer")
        self.omega_beta = omega_beta
        self.n0D = n0D
        self.n1X = Fraction(n1X)

    def __repr__(self):
        return "ClassData(omega_beta=%d, n0D=%d, n1X=%s)" % (
            self.omega_beta,
            self.n0D,
            self.n1X,
        )


def conjecture_rhs(classes, t, q_order: int, y_order: int) -> Series2:
    """Product side of the pair-counting conjecture, truncated exactly.

    For each class of degree w the factors (1 - (-q)^k y^w)^{k*n0D} run
    over 1 <= k <= floor(t*w) (capped at q_order when t is the INF token),
    followed by the genus-one factor M(y^w)^{n1X}.  Raises InvalidChamber
    unless t > 0.
    """
    if t != INF:
        t = Fraction(t)
        if t <= 0:
            raise InvalidChamber("stability parameter must be positive, got %s" % t)
    out = Series2.const(1, q_order, y_order)
    for cls in classes:
        w = cls.omega_beta
        if t == INF:
            cutoff = q_order
        else:
            cutoff = min(math.floor(t * w), q_order)
        if w <= y_order and cls.n0D:
            for k in range(1, cutoff + 1):
                base = 1 - Series2.monomial(k, w, (-1) ** k, q_order, y_order)
                out = out * series_int_pow(base, k * cls.n0D)
        if cls.n1X:
            out = out * _rat_pow(_macmahon_factor(w, q_order, y_order), cls.n1X)
    return out


def nagao_nakajima(cutoff: int, q_order: int, y_order: int) -> Series2:
    """Resolved-conifold series prod_{k=1}^{cutoff} (1 - (-q)^k y)^k."""
    if cutoff < 0:
        raise ValueError("cutoff must be >= 0")
    out = Series2.const(1, q_order, y_order)
    for k in range(1, min(cutoff, q_order) + 1):
        base = 1 - Series2.monomial(k, 1, (-1) ** k, q_order, y_order)
        out = out * series_int_pow(base, k)
    return out


def q_negate(s: Series2) -> Series2:
    """Companion series under q -> -q."""
    flipped = {
        (i, j): (-value if i % 2 else value) for (i, j), value in s.coeffs.items()
    }
    return Series2(s.q_order, s.y_order, flipped)


def grassmannian_sum(k: int, a: int, d: int) -> int:
    """Sum over compositions d1 + ... + da = d of prod_i C(k, di)."""
    if min(k, a, d) < 0:
        raise ValueError("arguments must be >= 0")
    total = 0
    for comp in _weak_compositions(d, a):
        term = 1
        for di in comp:
            term *= math.comb(k, di)
            if not term:
                break
        total += term
    return total


def _weak_compositions(total, parts):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total, -1, -1):
        for rest in _weak_compositions(total - first, parts - 1):
            yield (first,) + rest
