"""Torus-fixed stable pairs on the local resolved conifold and their
equivariant tautological invariants.

A fixed stable pair with curve class d and holomorphic Euler characteristic
n = (k+1)d is labelled by a composition (d_0, ..., d_k) of d: the sheaf is a
direct sum of line bundles O((k-i)Z_inf + i*Z_0) on the invariant P^1, the
i-th one repeated d_i times with fibre weights 1, t3, ..., t3^(d_i - 1).

The invariant P_{n,d}(e^m) is computed three independent ways:

* `js_invariant_localization` -- the fixed-point sum of Euler classes of the
  square-root obstruction plus the m-twisted tautological insertion;
* `js_invariant_closed` -- the explicit combinatorial sum over compositions,
  a product of linear factors in l0, l3 and m per composition;
* `js_invariant_predicted` -- the conjecturally equal binomial
  (-1)^d * C((n/d)(-m/l3), d), a polynomial in m/l3.

Every Euler weight that occurs here pairs into the rank-two sublattice
Z*l0 + Z*l3 of equivariant parameters (the t1/t2 directions only enter
through Koszul layers that vanish on the curve), so the localization and
closed sums run in a dedicated three-variable ring (l0, l3, m) where each
fixed-point contribution is a rational scalar times a quotient of products
of primitive integer linear forms.  Contributions are combined over an
explicit common denominator assembled form-by-form, and the result is
reduced by trial division before l0 is eliminated through the Calabi-Yau
relation l0 = -(l1+l2+l3).
"""

from __future__ import annotations

import os
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from math import factorial, gcd

from .algebra import L0_REDUCED, VARS, MPoly, RatFn
from .characters import (
    NORMALS_X,
    NORMALS_Y,
    TChar,
    bar,
    chi_p1,
    koszul_chi_hom,
)
from .series import binom_poly


class FixedPartNonzero(Exception):
    """The square-root obstruction character kept a torus-trivial term."""


class NotDivisible(Exception):
    """The predicted invariant needs d | n."""


class SingularSystem(Exception):
    """Interpolation nodes are not pairwise distinct."""


class FixedPair:
    """Torus-fixed stable pair labelled by (k, composition of d)."""

    __slots__ = ("k", "composition")

    def __init__(self, k: int, composition):
        composition = tuple(int(c) for c in composition)
        if k < 0:
            raise ValueError("k must be non-negative")
        if len(composition) != k + 1:
            raise ValueError("composition must have k+1 parts")
        if any(c < 0 for c in composition):
            raise ValueError("composition parts must be non-negative")
        self.k = k
        self.composition = composition

    @property
    def d(self) -> int:
        return sum(self.composition)

    @property
    def n(self) -> int:
        return (self.k + 1) * self.d

    def __eq__(self, other):
        return (
            isinstance(other, FixedPair)
            and self.k == other.k
            and self.composition == other.composition
        )

    def __hash__(self):
        return hash((self.k, self.composition))

    def __repr__(self):
        return "FixedPair(k=%d, composition=%s)" % (self.k, self.composition)


class InvariantResult:
    """An exact invariant value together with its provenance."""

    __slots__ = ("value", "n", "d", "method")

    def __init__(self, value: RatFn, n: int, d: int, method: str):
        self.value = value
        self.n = n
        self.d = d
        self.method = method

    def __eq__(self, other):
        return (
            isinstance(other, InvariantResult)
            and self.value == other.value
            and (self.n, self.d, self.method) == (other.n, other.d, other.method)
        )

    def __repr__(self):
        return "InvariantResult(n=%d, d=%d, method=%s, value=%s)" % (
            self.n,
            self.d,
            self.method,
            self.value,
        )


def _compositions(total: int, parts: int):
    """Compositions of `total` into `parts` non-negative parts, first part
    descending (so (4,2) enumerates to (2,0), (1,1), (0,2))."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def enumerate_fixed_pairs(n: int, d: int):
    """All torus-fixed stable pairs with chi = n and degree d.

    Empty unless n = (k+1)d for some k >= 0; (0,0) carries the single empty
    pair.  The count for n = (k+1)d is C(d+k, k).
    """
    if n < 0 or d < 0:
        raise ValueError("n and d must be non-negative")
    if d == 0:
        return [FixedPair(0, (0,))] if n == 0 else []
    if n < d or n % d:
        return []
    k = n // d - 1
    return [FixedPair(k, c) for c in _compositions(d, k + 1)]


def _line_summands(fp: FixedPair):
    """(p, q, weight) data of the line-bundle summands of F."""
    out = []
    for i, di in enumerate(fp.composition):
        for j in range(di):
            out.append((fp.k - i, i, (0, 0, 0, j)))
    return out


def chi_F(fp: FixedPair) -> TChar:
    """Character of H^0(F): sum over summands of t3^j * chi_p1(k-i, i)."""
    total = TChar.zero()
    for p, q, w in _line_summands(fp):
        total = total + chi_p1(p, q) * TChar.monomial(w)
    return total


def sqrt_obstruction(fp: FixedPair) -> TChar:
    """The square root -chi(F) + chi_Y(F, F) of the obstruction character.

    Y is the Fano threefold O(-1, 0) containing the curve; the character has
    virtual dimension -n and must contain no torus-trivial term.
    """
    summands = _line_summands(fp)
    s = -chi_F(fp) + koszul_chi_hom(summands, summands, NORMALS_Y)
    if s.trivial_multiplicity():
        raise FixedPartNonzero(
            "square root of %r keeps a trivial weight" % (fp,)
        )
    return s


def chi_x_ii0(fp: FixedPair) -> TChar:
    """Traceless chi_X(I, I) computed directly on the four-fold.

    Independent of `sqrt_obstruction`: uses the full normal data of the
    curve in X, chi_X(I,I)_0 = -chi(F) - bar(chi(F)) + chi_X(F, F).
    """
    summands = _line_summands(fp)
    c = chi_F(fp)
    return -c - bar(c) + koszul_chi_hom(summands, summands, NORMALS_X)


# --------------------------------------------------------------------------
# Fast exact engine: factored products of linear forms in (l0, l3, m).
# --------------------------------------------------------------------------

_ENGINE = ("l0", "l3", "m")


def _canon_form(c0: int, c3: int, cm: int):
    """Primitive representative and the scalar it was divided by.

    A form is c0*l0 + c3*l3 + cm*m; returns ((c0', c3', cm'), s) with the
    primitive form scaled so its first nonzero coefficient is positive and
    s * form' = form.
    """
    g = gcd(gcd(abs(c0), abs(c3)), abs(cm))
    if g == 0:
        raise FixedPartNonzero("zero Euler weight form")
    for c in (c0, c3, cm):
        if c:
            if c < 0:
                g = -g
            break
    return (c0 // g, c3 // g, cm // g), g


class _Factored:
    """One fixed-point contribution: scale * prod(num) / prod(den)."""

    __slots__ = ("scale", "num", "den")

    def __init__(self, scale=1):
        self.scale = Fraction(scale)
        self.num = Counter()
        self.den = Counter()

    def times_form(self, c0: int, c3: int, cm: int, power: int = 1):
        if power == 0:
            return
        form, s = _canon_form(c0, c3, cm)
        if power > 0:
            self.num[form] += power
            self.scale *= Fraction(s) ** power
        else:
            self.den[form] += -power
            self.scale /= Fraction(s) ** (-power)

    def times_char(self, char: TChar, m_twist: bool = False):
        """Multiply by the Euler class of a character in the l0/l3 lattice."""
        for w, mult in char.terms.items():
            # normalized weight (0, -b, -b, c-b) pairs to b*l0 + c*l3
            if w[1] != w[2]:
                raise FixedPartNonzero(
                    "weight %r leaves the l0/l3 sublattice" % (w,)
                )
            b = -w[1]
            c = w[3] - w[1]
            self.times_form(b, c, 1 if m_twist else 0, mult)

    def cancel(self):
        for form in set(self.num) & set(self.den):
            common = min(self.num[form], self.den[form])
            self.num[form] -= common
            self.den[form] -= common
        self.num = Counter({f: e for f, e in self.num.items() if e})
        self.den = Counter({f: e for f, e in self.den.items() if e})


def _expand_forms(forms: Counter) -> dict:
    """Expand a product of linear forms into an integer-coefficient dict."""
    poly = {(0, 0, 0): 1}
    for (c0, c3, cm), e in sorted(forms.items()):
        for _ in range(e):
            out = {}
            for (e0, e3, em), coef in poly.items():
                if c0:
                    key = (e0 + 1, e3, em)
                    out[key] = out.get(key, 0) + coef * c0
                if c3:
                    key = (e0, e3 + 1, em)
                    out[key] = out.get(key, 0) + coef * c3
                if cm:
                    key = (e0, e3, em + 1)
                    out[key] = out.get(key, 0) + coef * cm
            poly = out
    return poly


def _divexact_linear(terms: dict, form) -> dict:
    """Exact division of an integer-coefficient dict by a primitive linear
    form, or None.  Synthetic division along the form's first variable."""
    if not terms:
        return {}
    v = next(i for i, c in enumerate(form) if c)
    a = form[v]
    rest = [(i, c) for i, c in enumerate(form) if c and i != v]
    levels = {}
    top = 0
    for exp, c in terms.items():
        t = exp[v]
        if t > top:
            top = t
        r = exp[:v] + (0,) + exp[v + 1 :]
        levels.setdefault(t, {})[r] = c
    if top == 0:
        return None
    quo_levels = {}
    prev = {}
    for t in range(top, 0, -1):
        cur = dict(levels.get(t, {}))
        # subtract L * q_t, where q_t is the level above (prev)
        for r, c in prev.items():
            for i, ci in rest:
                key = r[:i] + (r[i] + 1,) + r[i + 1 :]
                s = cur.get(key, 0) - c * ci
                if s:
                    cur[key] = s
                else:
                    cur.pop(key, None)
        q = {}
        for r, c in cur.items():
            if c % a:
                return None
            q[r] = c // a
        quo_levels[t - 1] = q
        prev = q
    # remainder check: level 0 must equal L * q_0
    rem = dict(levels.get(0, {}))
    for r, c in prev.items():
        for i, ci in rest:
            key = r[:i] + (r[i] + 1,) + r[i + 1 :]
            s = rem.get(key, 0) - c * ci
            if s:
                rem[key] = s
            else:
                rem.pop(key, None)
    if rem:
        return None
    out = {}
    for t, level in quo_levels.items():
        for r, c in level.items():
            out[r[:v] + (t,) + r[v + 1 :]] = c
    return out


def _sum_factored(parts) -> RatFn:
    """Sum factored contributions over an explicit common denominator."""
    lcm: dict = {}
    for part in parts:
        part.cancel()
        for form, e in part.den.items():
            if lcm.get(form, 0) < e:
                lcm[form] = e
    denom_scale = 1
    for part in parts:
        denom_scale = denom_scale * part.scale.denominator // gcd(
            denom_scale, part.scale.denominator
        )
    total: dict = {}
    for part in parts:
        forms = Counter(part.num)
        for form, e in lcm.items():
            extra = e - part.den.get(form, 0)
            if extra:
                forms[form] += extra
        weight = part.scale * denom_scale
        assert weight.denominator == 1
        w = weight.numerator
        for exp, coef in _expand_forms(forms).items():
            s = total.get(exp, 0) + coef * w
            if s:
                total[exp] = s
            else:
                total.pop(exp, None)
    if not total:
        return RatFn.zero(_ENGINE)
    remaining = dict(lcm)
    for form in sorted(lcm):
        while remaining[form]:
            q = _divexact_linear(total, form)
            if q is None:
                break
            total = q
            remaining[form] -= 1
    den = _expand_forms(Counter(remaining))
    num_mp = MPoly(total, _ENGINE)
    den_mp = MPoly({e: c * denom_scale for e, c in den.items()}, _ENGINE)
    return RatFn._coprime(num_mp, den_mp)


_ENGINE_TO_VARS = {
    "l0": L0_REDUCED,
    "l3": MPoly.variable("l3"),
    "m": MPoly.variable("m"),
}


def _to_canonical(r: RatFn) -> RatFn:
    """Eliminate l0 = -(l1+l2+l3) from an engine-ring value."""
    return RatFn(
        r.num.map_ring(VARS, _ENGINE_TO_VARS),
        r.den.map_ring(VARS, _ENGINE_TO_VARS),
    )


def _map_contributions(builder, items):
    """Evaluate independent contributions, optionally in parallel.

    CY4_THREADS caps the worker count; the combination order is always the
    enumeration order, so the result does not depend on the schedule.
    """
    try:
        workers = int(os.environ.get("CY4_THREADS", "1"))
    except ValueError:
        workers = 1
    if workers > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(builder, items))
    return [builder(fp) for fp in items]


def _localization_contrib(fp: FixedPair) -> _Factored:
    part = _Factored(-1 if fp.d % 2 else 1)
    part.times_char(chi_F(fp), m_twist=True)
    part.times_char(sqrt_obstruction(fp))
    return part


def js_invariant_localization(n: int, d: int) -> InvariantResult:
    """P_{n,d}(e^m) as the fixed-point sum of (-1)^d e(sqrt) e(chi(F) @ e^m)."""
    pairs = enumerate_fixed_pairs(n, d)
    if not pairs:
        value = RatFn.zero()
    else:
        parts = _map_contributions(_localization_contrib, pairs)
        value = _to_canonical(_sum_factored(parts))
    return InvariantResult(value, n, d, "localization")


def _closed_contrib(fp: FixedPair) -> _Factored:
    k = fp.k
    comp = fp.composition
    scale = Fraction((-1) ** fp.n)
    for i in range(1, k + 1):
        scale /= factorial(i)
    for di in comp:
        scale /= factorial(di)
    part = _Factored(scale)
    for i in range(k + 1):
        for j in range(i + 1, k + 1):
            # (j-i) + (d_i-d_j) * l3/l0
            part.times_form(j - i, comp[i] - comp[j], 0)
            part.times_form(1, 0, 0, -1)
    for i, di in enumerate(comp):
        for a in range(di):
            for b in range(-i, k - i + 1):
                # -m/l3 - a - b*l0/l3 = -(m + a*l3 + b*l0)/l3
                part.scale = -part.scale
                part.times_form(b, a, 1)
                part.times_form(0, 1, 0, -1)
        for a in range(1, di + 1):
            for b in range(1, k - i + 1):
                # 1 / (a + b*l0/l3) = l3 / (a*l3 + b*l0)
                part.times_form(0, 1, 0)
                part.times_form(b, a, 0, -1)
            for b in range(1, i + 1):
                # 1 / (a - b*l0/l3) = l3 / (a*l3 - b*l0)
                part.times_form(0, 1, 0)
                part.times_form(-b, a, 0, -1)
    return part


def js_invariant_closed(n: int, d: int) -> InvariantResult:
    """P_{n,d}(e^m) by the closed combinatorial sum over compositions."""
    if d == 0:
        value = RatFn.one() if n == 0 else RatFn.zero()
    elif n % d or n < d:
        value = RatFn.zero()
    else:
        k = n // d - 1
        pairs = [FixedPair(k, c) for c in _compositions(d, k + 1)]
        parts = _map_contributions(_closed_contrib, pairs)
        value = _to_canonical(_sum_factored(parts))
    return InvariantResult(value, n, d, "closed")


def js_invariant_predicted(n: int, d: int) -> InvariantResult:
    """P_{n,d}(e^m) = (-1)^d * C((n/d)(-m/l3), d)."""
    if d == 0 and n == 0:
        return InvariantResult(RatFn.one(), 0, 0, "predicted")
    if d <= 0 or n % d:
        raise NotDivisible("d = %d does not divide n = %d" % (d, n))
    x = RatFn(
        MPoly.linear({"m": -(n // d)}),
        MPoly.variable("l3"),
    )
    value = binom_poly(x, d)
    if d % 2:
        value = -value
    return InvariantResult(value, n, d, "predicted")


def insertion_free(n: int, d: int) -> RatFn:
    """Leading m-coefficient of the invariant: the insertion-free number.

    Equals 1/(d! l3^d) when n = d and vanishes for n = (k+1)d with k >= 1,
    matching the normalized fixed-point count with the insertion removed.
    """
    value = js_invariant_localization(n, d).value
    return value.coeff_of_var_power("m", n)


def fit_poly_in_m(samples, degree: int):
    """Interpolating polynomial through (m-value, value) samples.

    Returns the coefficient list (ascending in m) of the unique polynomial
    of the given degree through the first degree+1 samples; the remaining
    samples are ignored.  Exact Lagrange interpolation.
    """
    nodes = [int(mv) for mv, _ in samples]
    if len(set(nodes)) != len(nodes):
        raise SingularSystem("repeated m-values make the system singular")
    if len(samples) < degree + 1:
        raise ValueError("need at least degree+1 samples")
    use = list(samples)[: degree + 1]
    coeffs = [RatFn.zero() for _ in range(degree + 1)]
    for t, (mt, vt) in enumerate(use):
        # integer coefficients of prod_{s != t} (x - m_s)
        basis = [1]
        denom = 1
        for s, (ms, _) in enumerate(use):
            if s == t:
                continue
            denom *= mt - ms
            basis = [0] + basis
            for idx in range(len(basis) - 1):
                basis[idx] -= ms * basis[idx + 1]
        if not isinstance(vt, RatFn):
            vt = RatFn.from_const(vt)
        w = vt * Fraction(1, denom)
        for idx, c in enumerate(basis):
            if c:
                coeffs[idx] = coeffs[idx] + w * c
    return coeffs
