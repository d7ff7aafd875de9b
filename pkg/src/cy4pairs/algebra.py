"""Exact sparse multivariate polynomials and reduced rational functions over QQ.

This is the computational kernel of the package: every downstream quantity
(torus Euler classes, localization sums, series coefficients) is an element of
QQ(l1, l2, l3, m), the field of rational functions in the three independent
torus weights l1, l2, l3 and the insertion parameter m.  The dependent fourth
weight l0 satisfies l0 + l1 + l2 + l3 = 0 and is eliminated on sight by
:func:`reduce_cy_relation`.

Representation
--------------
``MPoly`` maps exponent tuples (one slot per ring variable) to ``Fraction``
coefficients; zero coefficients are never stored, so dict equality is
polynomial equality.  ``RatFn`` is a pair num/den of MPoly in canonical form:

* polynomial gcd of num and den removed,
* all coefficients cleared to integers with joint content 1,
* denominator leading coefficient positive.

Structural equality of canonical forms is therefore exact equality of
rational functions — no simplification heuristics, no floats anywhere.

The canonical term order is graded, then lexicographic with ``m`` most
significant followed by the remaining variables in ring order.  One order is
used for string output, the denominator sign convention and the division
internals ("m^2 + m*l3" prints with m^2 first, "l1 + l2 + l3" in ring order).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Union

#: The public coefficient ring variables, in display order.
VARS = ("l1", "l2", "l3", "m")

#: Extended ring admitting the dependent weight l0 before reduction.
VARS_EXT = ("l0", "l1", "l2", "l3", "m")

Scalar = Union[int, Fraction]


class AlgebraError(Exception):
    """Base class for exact-arithmetic failures."""


class DivisionByZero(AlgebraError):
    """Raised when a rational function with identically-zero denominator is formed."""


class PoleAtPoint(AlgebraError):
    """Raised when a rational function is evaluated where its denominator vanishes."""


@lru_cache(maxsize=None)
def _order_perm(names: tuple) -> tuple:
    """Indices of the variables in comparison-significance order.

    ``m`` (when present) is most significant; the remaining variables keep
    their ring order.  Used for the graded-lex key below.
    """
    idx = list(range(len(names)))
    if "m" in names:
        i = names.index("m")
        idx.remove(i)
        idx.insert(0, i)
    return tuple(idx)


def _term_key(names, exp):
    """Graded-lex sort key (bigger key = leading term)."""
    perm = _order_perm(names)
    return (sum(exp),) + tuple(exp[i] for i in perm)


def _frac_gcd(a: Fraction, b: Fraction) -> Fraction:
    """gcd on QQ with the Gauss convention gcd(p/q, r/s) = gcd(p,r)/lcm(q,s)."""
    from math import gcd, lcm

    return Fraction(gcd(a.numerator, b.numerator), lcm(a.denominator, b.denominator))


class MPoly:
    """Sparse multivariate polynomial with Fraction coefficients.

    Immutable by convention: arithmetic returns new objects, ``terms`` must
    not be mutated after construction.
    """

    __slots__ = ("names", "terms")

    def __init__(self, terms: Mapping[tuple, Scalar], names: tuple = VARS):
        clean = {}
        for exp, c in terms.items():
            c = Fraction(c)
            if c:
                clean[tuple(exp)] = c
        self.names = names
        self.terms = clean

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, names: tuple = VARS) -> "MPoly":
        return cls({}, names)

    @classmethod
    def const(cls, value: Scalar, names: tuple = VARS) -> "MPoly":
        return cls({(0,) * len(names): Fraction(value)}, names)

    @classmethod
    def variable(cls, name: str, names: tuple = VARS) -> "MPoly":
        exp = [0] * len(names)
        exp[names.index(name)] = 1
        return cls({tuple(exp): Fraction(1)}, names)

    @classmethod
    def linear(cls, coeffs: Mapping[str, Scalar], const: Scalar = 0, names: tuple = VARS) -> "MPoly":
        """Build c0 + sum coeffs[v] * v.  Convenient for torus weight forms."""
        terms: dict = {}
        zero = (0,) * len(names)
        if const:
            terms[zero] = Fraction(const)
        for name, c in coeffs.items():
            if not c:
                continue
            exp = [0] * len(names)
            exp[names.index(name)] = 1
            terms[tuple(exp)] = terms.get(tuple(exp), Fraction(0)) + Fraction(c)
        return cls(terms, names)

    # -- predicates and views ------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_const(self) -> bool:
        return all(not any(exp) for exp in self.terms)

    def const_value(self) -> Fraction:
        """The constant coefficient (the value, when is_const())."""
        return self.terms.get((0,) * len(self.names), Fraction(0))

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(exp) for exp in self.terms)

    def degree_in(self, name: str) -> int:
        if not self.terms:
            return -1
        i = self.names.index(name)
        return max(exp[i] for exp in self.terms)

    def uses(self, name: str) -> bool:
        i = self.names.index(name)
        return any(exp[i] for exp in self.terms)

    def sorted_terms(self):
        """Terms in descending canonical order (leading term first)."""
        return sorted(self.terms.items(), key=lambda kv: _term_key(self.names, kv[0]), reverse=True)

    def leading(self):
        """(exponent, coefficient) of the leading term; raises on zero."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        exp = max(self.terms, key=lambda e: _term_key(self.names, e))
        return exp, self.terms[exp]

    # -- ring operations -----------------------------------------------

    def _check(self, other: "MPoly"):
        if self.names != other.names:
            raise ValueError(f"mixed variable rings {self.names} vs {other.names}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MPoly.const(other, self.names)
        self._check(other)
        out = dict(self.terms)
        for exp, c in other.terms.items():
            s = out.get(exp, Fraction(0)) + c
            if s:
                out[exp] = s
            else:
                out.pop(exp, None)
        p = MPoly.__new__(MPoly)
        p.names = self.names
        p.terms = out
        return p

    __radd__ = __add__

    def __neg__(self):
        p = MPoly.__new__(MPoly)
        p.names = self.names
        p.terms = {exp: -c for exp, c in self.terms.items()}
        return p

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MPoly.const(other, self.names)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if not c:
                return MPoly.zero(self.names)
            p = MPoly.__new__(MPoly)
            p.names = self.names
            p.terms = {exp: v * c for exp, v in self.terms.items()}
            return p
        self._check(other)
        out: dict = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                exp = tuple(x + y for x, y in zip(ea, eb))
                s = out.get(exp, Fraction(0)) + ca * cb
                if s:
                    out[exp] = s
                else:
                    del out[exp]
        p = MPoly.__new__(MPoly)
        p.names = self.names
        p.terms = out
        return p

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power of a polynomial; use RatFn")
        result = MPoly.const(1, self.names)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MPoly.const(other, self.names)
        return isinstance(other, MPoly) and self.names == other.names and self.terms == other.terms

    def __hash__(self):
        return hash((self.names, frozenset(self.terms.items())))

    # -- substitution ---------------------------------------------------

    def map_ring(self, names_out: tuple, mapping: Mapping[str, "MPoly"]) -> "MPoly":
        """Re-express in another ring, sending each variable through ``mapping``.

        Variables absent from ``mapping`` map to the same-named variable of
        the target ring (which must then exist).
        """
        images = []
        for name in self.names:
            if name in mapping:
                images.append(mapping[name])
            else:
                images.append(MPoly.variable(name, names_out))
        out = MPoly.zero(names_out)
        for exp, c in self.terms.items():
            term = MPoly.const(c, names_out)
            for img, e in zip(images, exp):
                if e:
                    term = term * img**e
            out = out + term
        return out

    def subs_scalar(self, assignment: Mapping[str, Scalar]) -> "MPoly":
        """Substitute numeric values for a subset of the variables."""
        out: dict = {}
        items = [(self.names.index(n), Fraction(v)) for n, v in assignment.items()]
        for exp, c in self.terms.items():
            val = c
            new_exp = list(exp)
            for i, v in items:
                if exp[i]:
                    val *= v ** exp[i]
                    new_exp[i] = 0
            key = tuple(new_exp)
            s = out.get(key, Fraction(0)) + val
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        p = MPoly.__new__(MPoly)
        p.names = self.names
        p.terms = out
        return p

    def eval(self, assignment: Mapping[str, Scalar]) -> Fraction:
        """Evaluate at a full point; every variable that appears must be assigned."""
        for name in self.names:
            if self.uses(name) and name not in assignment:
                raise ValueError(f"no value supplied for variable {name!r}")
        r = self.subs_scalar({n: assignment[n] for n in self.names if n in assignment})
        return r.const_value()

    def coeff_of_power(self, name: str, k: int) -> "MPoly":
        """The coefficient of name**k, as a polynomial in the remaining variables."""
        i = self.names.index(name)
        out = {}
        for exp, c in self.terms.items():
            if exp[i] == k:
                e = list(exp)
                e[i] = 0
                out[tuple(e)] = c
        p = MPoly.__new__(MPoly)
        p.names = self.names
        p.terms = out
        return p

    # -- content / division / gcd ---------------------------------------

    def content(self) -> Fraction:
        """Positive gcd of the coefficients (0 for the zero polynomial)."""
        g = Fraction(0)
        for c in self.terms.values():
            g = _frac_gcd(g, abs(c))
            if g == 1:
                break
        return g

    def divexact(self, divisor: "MPoly"):
        """Exact polynomial division; returns the quotient or None if not divisible."""
        self._check(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if self.is_zero():
            return MPoly.zero(self.names)
        lead_exp, lead_c = divisor.leading()
        rem = dict(self.terms)
        quo: dict = {}
        key = lambda e: _term_key(self.names, e)
        while rem:
            exp = max(rem, key=key)
            c = rem[exp]
            qexp = tuple(a - b for a, b in zip(exp, lead_exp))
            if any(e < 0 for e in qexp):
                return None
            qc = c / lead_c
            quo[qexp] = qc
            # subtract qc * x^qexp * divisor
            for dexp, dc in divisor.terms.items():
                e = tuple(a + b for a, b in zip(qexp, dexp))
                s = rem.get(e, Fraction(0)) - qc * dc
                if s:
                    rem[e] = s
                else:
                    rem.pop(e, None)
        p = MPoly.__new__(MPoly)
        p.names = self.names
        p.terms = quo
        return p

    # -- display ---------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        chunks = []
        perm = _order_perm(self.names)
        for exp, c in self.sorted_terms():
            mono = "*".join(
                self.names[i] if exp[i] == 1 else f"{self.names[i]}^{exp[i]}"
                for i in perm
                if exp[i]
            )
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            if not chunks:
                chunks.append(body if c > 0 else f"-{body}")
            else:
                chunks.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(chunks)

    def __repr__(self):
        return f"MPoly({self})"


# ---------------------------------------------------------------------------
# polynomial gcd via recursive content / primitive-part reduction
# ---------------------------------------------------------------------------


_CERT_PRIME = (1 << 61) - 1  # Mersenne prime; certificate arithmetic runs mod this


def _uni_gcd_degree(ca: list, cb: list, p: int) -> int:
    """Degree of the gcd of two univariate polys over GF(p), dense coefficient lists."""

    def strip(c):
        while c and not c[-1]:
            c.pop()
        return c

    ca, cb = strip(ca), strip(cb)
    if len(ca) < len(cb):
        ca, cb = cb, ca
    while cb:
        inv = pow(cb[-1], p - 2, p)
        while len(ca) >= len(cb):
            f = ca[-1] * inv % p
            if f:
                off = len(ca) - len(cb)
                for j in range(len(cb) - 1):
                    ca[off + j] = (ca[off + j] - f * cb[j]) % p
            ca.pop()
        strip(ca)
        ca, cb = cb, ca
    return len(ca) - 1


def _image_gcd_degree(a: MPoly, b: MPoly, i: int, attempt: int):
    """Upper bound for deg_{x_i} gcd(a, b) from one evaluation point, or None.

    Reducing mod p and evaluating every other variable at a point r where the
    leading x_i-coefficient of a (or of b) survives cannot decrease the
    x_i-degree of the gcd, so deg gcd(a(x_i, r), b(x_i, r)) mod p bounds it
    from above.
    """
    p = _CERT_PRIME
    point = [(3 + 2 * j + 31 * attempt) % p for j in range(len(a.names))]

    def dense(poly: MPoly):
        out = [0] * (poly.degree_in(poly.names[i]) + 1)
        for exp, c in poly.terms.items():
            if c.denominator % p == 0:
                return None
            v = c.numerator % p * pow(c.denominator, p - 2, p) % p
            for j, e in enumerate(exp):
                if j != i and e:
                    v = v * pow(point[j], e, p) % p
            out[exp[i]] = (out[exp[i]] + v) % p
        return out

    da, db = dense(a), dense(b)
    if da is None or db is None:
        return None
    if not da[-1] and not db[-1]:
        return None  # both leading coefficients vanished: point invalid
    return _uni_gcd_degree(da, db, p)


def _gcd_degree_bounds(a: MPoly, b: MPoly, shared: list) -> dict:
    """Certified per-variable degree bounds for gcd(a, b) (None = unknown)."""
    bounds = {}
    for i in shared:
        bnd = None
        for attempt in range(3):
            d = _image_gcd_degree(a, b, i, attempt)
            if d is not None:
                bnd = d if bnd is None else min(bnd, d)
                if bnd == 0:
                    break
        bounds[i] = bnd
    return bounds


# -- modular gcd: Brown's evaluation/interpolation over GF(p) ---------------
#
# The nontrivial-gcd workhorse.  Compute the gcd image mod a large prime by
# recursively evaluating one variable at a time, interpolating the images,
# then lift symmetrically to the integers and verify by exact trial division.
# A verified candidate divides the true gcd; since reduction mod p (with the
# term-order leading coefficients surviving) can only raise the gcd degree,
# a verified lift of maximal image degree IS the gcd.  Every probabilistic
# shortcut is therefore caught by the final division check.

_GCD_PRIMES = ((1 << 61) - 1, (1 << 89) - 1, (1 << 107) - 1, (1 << 127) - 1)


def _p_uni_strip(c: list) -> list:
    while c and not c[-1]:
        c.pop()
    return c


def _p_uni_gcd(ca: list, cb: list, p: int) -> list:
    """Monic gcd of dense univariate coefficient lists over GF(p)."""
    ca, cb = _p_uni_strip(list(ca)), _p_uni_strip(list(cb))
    if len(ca) < len(cb):
        ca, cb = cb, ca
    while cb:
        inv = pow(cb[-1], p - 2, p)
        while len(ca) >= len(cb):
            f = ca[-1] * inv % p
            if f:
                off = len(ca) - len(cb)
                for j in range(len(cb) - 1):
                    ca[off + j] = (ca[off + j] - f * cb[j]) % p
            ca.pop()
        _p_uni_strip(ca)
        ca, cb = cb, ca
    inv = pow(ca[-1], p - 2, p)
    return [c * inv % p for c in ca]


def _p_uni_divexact(ca: list, u: list, p: int):
    """Exact division of dense univariate lists over GF(p); None if inexact."""
    ca = _p_uni_strip(list(ca))
    if len(u) == 1:
        inv = pow(u[0], p - 2, p)
        return [c * inv % p for c in ca]
    quo = [0] * (len(ca) - len(u) + 1)
    inv = pow(u[-1], p - 2, p)
    while len(ca) >= len(u):
        f = ca[-1] * inv % p
        off = len(ca) - len(u)
        quo[off] = f
        if f:
            for j in range(len(u) - 1):
                ca[off + j] = (ca[off + j] - f * u[j]) % p
        ca.pop()
        _p_uni_strip(ca)
        if len(ca) < len(u) and ca:
            return None
    return quo


def _p_mul(A: dict, B: dict, p: int) -> dict:
    out: dict = {}
    for ea, ca in A.items():
        for eb, cb in B.items():
            exp = tuple(x + y for x, y in zip(ea, eb))
            out[exp] = (out.get(exp, 0) + ca * cb) % p
    return {e: c for e, c in out.items() if c}


def _p_divexact(A: dict, B: dict, p: int, names: tuple):
    """Exact multivariate division over GF(p); None if not divisible."""
    lead = max(B, key=lambda e: _term_key(names, e))
    lead_inv = pow(B[lead], p - 2, p)
    rem = dict(A)
    quo: dict = {}
    while rem:
        exp = max(rem, key=lambda e: _term_key(names, e))
        qexp = tuple(a - b for a, b in zip(exp, lead))
        if any(e < 0 for e in qexp):
            return None
        f = rem[exp] * lead_inv % p
        quo[qexp] = f
        for be, bc in B.items():
            e = tuple(x + y for x, y in zip(qexp, be))
            s = (rem.get(e, 0) - f * bc) % p
            if s:
                rem[e] = s
            else:
                rem.pop(e, None)
    return quo


def _p_eval_var(A: dict, z: int, r: int, p: int) -> dict:
    out: dict = {}
    for exp, c in A.items():
        e = list(exp)
        k = e[z]
        e[z] = 0
        v = c * pow(r, k, p) % p if k else c
        key = tuple(e)
        out[key] = (out.get(key, 0) + v) % p
    return {e: c for e, c in out.items() if c}


def _p_lc_uni(A: dict, z: int, names: tuple) -> list:
    """Term-order leading coefficient of A (ignoring z) as a dense poly in z."""
    best = None
    for exp in A:
        e = list(exp)
        e[z] = 0
        k = _term_key(names, tuple(e))
        if best is None or k > best[0]:
            best = (k, tuple(e))
    red = best[1]
    out = [0] * (max(exp[z] for exp in A if tuple(y if j != z else 0 for j, y in enumerate(exp)) == red) + 1)
    for exp, c in A.items():
        e = list(exp)
        k = e[z]
        e[z] = 0
        if tuple(e) == red:
            out[k] = c
    return _p_uni_strip(out)


def _gcd_p(A: dict, B: dict, p: int, names: tuple, salt: int):
    """Monic (term-order) gcd of nonzero coefficient dicts over GF(p), or None.

    Probabilistically correct; the caller verifies the lifted result by exact
    division, so a wrong answer here only costs a retry.
    """
    n = len(names)
    one = (0,) * n

    def monic(G):
        lead = max(G, key=lambda e: _term_key(names, e))
        inv = pow(G[lead], p - 2, p)
        if inv == 1:
            return G
        return {e: c * inv % p for e, c in G.items()}

    # monomial content
    mins_a = None
    for exp in A:
        mins_a = exp if mins_a is None else tuple(map(min, mins_a, exp))
    mins_b = None
    for exp in B:
        mins_b = exp if mins_b is None else tuple(map(min, mins_b, exp))
    mono = tuple(map(min, mins_a, mins_b))
    if any(mins_a):
        A = {tuple(e - m for e, m in zip(exp, mins_a)): c for exp, c in A.items()}
    if any(mins_b):
        B = {tuple(e - m for e, m in zip(exp, mins_b)): c for exp, c in B.items()}

    def with_mono(G):
        if any(mono):
            G = {tuple(e + m for e, m in zip(exp, mono)): c for exp, c in G.items()}
        return monic(G)

    if A == {one: A.get(one)} or B == {one: B.get(one)}:
        return with_mono({one: 1})
    used_a = {i for exp in A for i in range(n) if exp[i]}
    used_b = {i for exp in B for i in range(n) if exp[i]}
    both = used_a & used_b
    if not both:
        return with_mono({one: 1})
    if len(used_a | used_b) == 1:
        (i,) = used_a | used_b
        da = max(exp[i] for exp in A)
        db = max(exp[i] for exp in B)
        ca = [0] * (da + 1)
        for exp, c in A.items():
            ca[exp[i]] = c
        cb = [0] * (db + 1)
        for exp, c in B.items():
            cb[exp[i]] = c
        g = _p_uni_gcd(ca, cb, p)
        exp0 = [0] * n
        out = {}
        for k, c in enumerate(g):
            if c:
                exp0[i] = k
                out[tuple(exp0)] = c
        return with_mono(out)

    z = max(both)

    def profiles(P):
        """Per-monomial z-profiles: reduced exponent -> dense coeff list in z."""
        prof: dict = {}
        for exp, c in P.items():
            e = list(exp)
            k = e[z]
            e[z] = 0
            key = tuple(e)
            lst = prof.get(key)
            if lst is None:
                prof[key] = lst = []
            if len(lst) <= k:
                lst.extend([0] * (k + 1 - len(lst)))
            lst[k] = c
        return prof

    def content_z(prof):
        """Monic univariate-in-z content: gcd of all profile lists."""
        cont = None
        for lst in prof.values():
            cont = _p_uni_strip(list(lst)) if cont is None else _p_uni_gcd(cont, lst, p)
            if len(cont) == 1:
                return [1]
        inv = pow(cont[-1], p - 2, p)
        return [c * inv % p for c in cont] if inv != 1 else cont

    def strip_content(P, prof, cont):
        if len(cont) == 1:
            return P
        out = {}
        for red, lst in prof.items():
            q = _p_uni_divexact(lst, cont, p)
            if q is None:
                return None
            e = list(red)
            for k, c in enumerate(q):
                if c:
                    e[z] = k
                    out[tuple(e)] = c
        return out

    prof_a, prof_b = profiles(A), profiles(B)
    ucont_a, ucont_b = content_z(prof_a), content_z(prof_b)
    Ap = strip_content(A, prof_a, ucont_a)
    Bp = strip_content(B, prof_b, ucont_b)
    if Ap is None or Bp is None:
        return None
    cg_list = _p_uni_gcd(ucont_a, ucont_b, p) if len(ucont_a) > 1 and len(ucont_b) > 1 else [1]
    cg = {}
    e0 = [0] * n
    for k, c in enumerate(cg_list):
        if c:
            e0[z] = k
            cg[tuple(e0)] = c
    if Ap == {one: Ap.get(one)} or Bp == {one: Bp.get(one)}:
        return with_mono(cg)

    lc_a = _p_lc_uni(Ap, z, names)
    lc_b = _p_lc_uni(Bp, z, names)
    gamma = _p_uni_gcd(lc_a, lc_b, p)
    deg_az = max(e[z] for e in Ap)
    deg_bz = max(e[z] for e in Bp)
    dz = min(deg_az, deg_bz) + len(gamma) - 1
    npoints = dz + 1

    def uni_eval(c: list, r: int) -> int:
        v = 0
        for coef in reversed(c):
            v = (v * r + coef) % p
        return v

    # Newton interpolation of gamma(z) * monic-image over accepted points
    rs: list = []
    H: dict = {}
    basis = {0: 1}  # prod (z - r_j), dense in z as {deg: coeff}
    lead_min = None
    r = salt % p
    tries = 0
    limit = 40 * npoints + 60
    while len(rs) < npoints:
        tries += 1
        if tries > limit:
            return None
        r = (r + 1) % p
        if uni_eval(lc_a, r) == 0 or uni_eval(lc_b, r) == 0:
            continue
        Ar = _p_eval_var(Ap, z, r, p)
        Br = _p_eval_var(Bp, z, r, p)
        g_r = _gcd_p(Ar, Br, p, names, salt)
        if g_r is None:
            return None
        if g_r == {one: 1}:
            # primitive parts are coprime
            return with_mono(cg)
        lead = _term_key(names, max(g_r, key=lambda e: _term_key(names, e)))
        if lead_min is None or lead < lead_min:
            lead_min = lead
            rs, H, basis = [], {}, {0: 1}
        elif lead > lead_min:
            continue  # unlucky evaluation point
        gr = uni_eval(gamma, r)
        value = {e: c * gr % p for e, c in g_r.items()}
        # divided difference: d = (value - H(r)) / basis(r)
        Hr = _p_eval_var(H, z, r, p) if H else {}
        diff = dict(value)
        for e, c in Hr.items():
            s = (diff.get(e, 0) - c) % p
            if s:
                diff[e] = s
            else:
                diff.pop(e, None)
        bs = 0
        for deg, c in basis.items():
            bs = (bs + c * pow(r, deg, p)) % p
        inv = pow(bs, p - 2, p)
        for deg, c in basis.items():
            f = c * inv % p
            if not f:
                continue
            for e, dcoef in diff.items():
                ee = list(e)
                ee[z] += deg
                key = tuple(ee)
                s = (H.get(key, 0) + dcoef * f) % p
                if s:
                    H[key] = s
                else:
                    H.pop(key, None)
        rs.append(r)
        nb = {}
        for deg, c in basis.items():
            nb[deg + 1] = (nb.get(deg + 1, 0) + c) % p
            nb[deg] = (nb.get(deg, 0) - c * r) % p
        basis = {d: c for d, c in nb.items() if c}
    if not H:
        return None
    # strip the univariate z-content introduced by the gamma normalization
    prof_h = profiles(H)
    H = strip_content(H, prof_h, content_z(prof_h))
    if H is None:
        return None
    return with_mono(_p_mul(cg, H, p))


def _int_primitive(a: MPoly) -> MPoly:
    """Integer-coefficient primitive associate with positive leading coefficient."""
    cont = a.content()
    a = a * (1 / cont)
    if a.leading()[1] < 0:
        a = -a
    return a


def _modular_gcd(a: MPoly, b: MPoly):
    """Primitive integer gcd of integer-primitive inputs, or None on failure."""
    from math import gcd as int_gcd

    lc_a = a.leading()[1].numerator
    lc_b = b.leading()[1].numerator
    gamma = int_gcd(lc_a, lc_b)
    for idx, p in enumerate(_GCD_PRIMES):
        if lc_a % p == 0 or lc_b % p == 0:
            continue
        A = {e: c.numerator % p for e, c in a.terms.items() if c.numerator % p}
        B = {e: c.numerator % p for e, c in b.terms.items() if c.numerator % p}
        G = _gcd_p(A, B, p, a.names, salt=1009 * idx)
        if G is None:
            continue
        half = p // 2
        lift = {}
        for e, c in G.items():
            v = c * gamma % p
            if v > half:
                v -= p
            if v:
                lift[e] = Fraction(v)
        cand = _int_primitive(MPoly(lift, a.names))
        if cand.is_const():
            return MPoly.const(1, a.names)
        if a.divexact(cand) is not None and b.divexact(cand) is not None:
            return cand
    return None


def _uni_view(p: MPoly, i: int) -> dict:
    """View p as univariate in variable i: degree -> MPoly coefficient."""
    out: dict = {}
    for exp, c in p.terms.items():
        d = exp[i]
        e = list(exp)
        e[i] = 0
        coeff = out.setdefault(d, {})
        coeff[tuple(e)] = coeff.get(tuple(e), Fraction(0)) + c
    return {
        d: MPoly(coeffs, p.names)
        for d, coeffs in out.items()
        if any(coeffs.values())
    }


def _from_uni(view: dict, i: int, names: tuple) -> MPoly:
    out = MPoly.zero(names)
    x = MPoly.variable(names[i], names)
    for d, coeff in view.items():
        out = out + coeff * x**d
    return out


def _uni_scale(view: dict, f: MPoly) -> dict:
    return {d: c * f for d, c in view.items()}


def _uni_sub(u: dict, v: dict) -> dict:
    out = dict(u)
    for d, c in v.items():
        s = out.get(d)
        s = (s - c) if s is not None else -c
        if s.is_zero():
            out.pop(d, None)
        else:
            out[d] = s
    return out


def _uni_shift(view: dict, k: int) -> dict:
    return {d + k: c for d, c in view.items()}


def _poly_content_poly(view: dict) -> MPoly:
    """gcd of the MPoly coefficients of a univariate view."""
    g = None
    for c in view.values():
        g = c if g is None else poly_gcd(g, c)
        if g.is_const():
            break
    return g


def _normalize_gcd(p: MPoly) -> MPoly:
    """Scale a gcd candidate to integer coefficients, content 1, positive lead."""
    if p.is_zero():
        return p
    cont = p.content()
    p = p * (1 / cont)
    if p.leading()[1] < 0:
        p = -p
    return p


def _pseudo_rem(pa: dict, pb: dict, db: int):
    """Pseudo-remainder of univariate views: scale-and-subtract, no division.

    Equals lc(pb)^k * (pa mod pb) up to content in the other variables, which
    the caller strips anyway.
    """
    lead_b = pb[db]
    rem = dict(pa)
    while rem:
        dr = max(rem)
        if dr < db:
            break
        lc = rem[dr]
        # rem := lead_b * rem - lc * x^(dr-db) * pb
        rem = {d: c * lead_b for d, c in rem.items()}
        rem = _uni_sub(rem, _uni_shift(_uni_scale(pb, lc), dr - db))
    return rem


def _mono_strip(p: MPoly):
    """Split off the monomial content: returns (min-exponent vector, p / monomial)."""
    mins = None
    for exp in p.terms:
        mins = exp if mins is None else tuple(map(min, mins, exp))
    if not any(mins):
        return mins, p
    q = MPoly.__new__(MPoly)
    q.names = p.names
    q.terms = {tuple(e - m for e, m in zip(exp, mins)): c for exp, c in p.terms.items()}
    return mins, q


def poly_gcd(a: MPoly, b: MPoly) -> MPoly:
    """Polynomial gcd over QQ, normalized to content 1 and positive lead.

    Recursive content/primitive-part algorithm with a primitive pseudo-
    remainder sequence in a shared variable of minimal degree.
    """
    if a.is_zero():
        return _normalize_gcd(b)
    if b.is_zero():
        return _normalize_gcd(a)
    if a.is_const() or b.is_const():
        return MPoly.const(1, a.names)
    if a.terms == b.terms:
        return _normalize_gcd(a)
    mina, a = _mono_strip(a)
    minb, b = _mono_strip(b)
    common = tuple(map(min, mina, minb))
    mono = MPoly({common: Fraction(1)}, a.names)
    shared = [
        i
        for i, name in enumerate(a.names)
        if a.degree_in(name) > 0 and b.degree_in(name) > 0
    ]
    if not shared:
        # no variable occurs in both, so the gcd is the common monomial
        return _normalize_gcd(mono)
    bounds = _gcd_degree_bounds(a, b, shared)
    if all(bnd == 0 for bnd in bounds.values()):
        # the gcd involves no variable at all: it is the common monomial
        return _normalize_gcd(mono)
    g = _modular_gcd(_int_primitive(a), _int_primitive(b))
    if g is not None:
        return _normalize_gcd(mono * g)
    # fallback: primitive pseudo-remainder sequence in a variable the gcd may
    # actually involve, preferring the smallest certified degree bound
    candidates = [j for j in shared if bounds[j] != 0]
    i = min(
        candidates,
        key=lambda j: (
            bounds[j] if bounds[j] is not None else 10**9,
            min(a.degree_in(a.names[j]), b.degree_in(a.names[j])),
        ),
    )
    ua, ub = _uni_view(a, i), _uni_view(b, i)
    if max(ua) < max(ub):
        ua, ub = ub, ua
    cont_a, cont_b = _poly_content_poly(ua), _poly_content_poly(ub)
    cont = poly_gcd(cont_a, cont_b)
    pa = {d: c.divexact(cont_a) for d, c in ua.items()}
    pb = {d: c.divexact(cont_b) for d, c in ub.items()}
    # primitive pseudo-remainder sequence
    while True:
        rem = _pseudo_rem(pa, pb, max(pb))
        if not rem:
            g = _from_uni(pb, i, a.names)
            break
        if max(rem) == 0:
            g = MPoly.const(1, a.names)
            break
        rc = _poly_content_poly(rem)
        pa, pb = pb, {d: c.divexact(rc) for d, c in rem.items()}
    return _normalize_gcd(mono * cont * g)


# ---------------------------------------------------------------------------
# rational functions
# ---------------------------------------------------------------------------


class RatFn:
    """Rational function num/den in canonical reduced form.

    Canonical form: gcd(num, den) = 1, all coefficients integers with joint
    content 1, denominator leading coefficient positive.  Structural equality
    of canonical forms is equality of rational functions.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: MPoly, den: MPoly = None):
        if den is None:
            den = MPoly.const(1, num.names)
        if num.names != den.names:
            raise ValueError("numerator and denominator in different rings")
        if den.is_zero():
            raise DivisionByZero("denominator is identically zero")
        num, den = self._reduce(num, den)
        self.num = num
        self.den = den

    @staticmethod
    def _reduce(num: MPoly, den: MPoly):
        if num.is_zero():
            return num, MPoly.const(1, num.names)
        g = poly_gcd(num, den)
        if not (g.is_const() and g.const_value() == 1):
            num = num.divexact(g)
            den = den.divexact(g)
        return RatFn._scale(num, den)

    @staticmethod
    def _scale(num: MPoly, den: MPoly):
        """Clear coefficients to integers with joint content 1, den lead > 0."""
        from math import gcd, lcm

        denom_lcm = 1
        for c in list(num.terms.values()) + list(den.terms.values()):
            denom_lcm = lcm(denom_lcm, c.denominator)
        numer_gcd = 0
        for c in list(num.terms.values()) + list(den.terms.values()):
            numer_gcd = gcd(numer_gcd, (c * denom_lcm).numerator)
        scale = Fraction(denom_lcm, numer_gcd)
        if den.leading()[1] < 0:
            scale = -scale
        return num * scale, den * scale

    @classmethod
    def _coprime(cls, num: MPoly, den: MPoly) -> "RatFn":
        """Internal fast path: caller guarantees gcd(num, den) = 1 already."""
        if den.is_zero():
            raise DivisionByZero("denominator is identically zero")
        r = cls.__new__(cls)
        if num.is_zero():
            r.num = num
            r.den = MPoly.const(1, num.names)
            return r
        r.num, r.den = cls._scale(num, den)
        return r

    # -- constructors ----------------------------------------------------

    @classmethod
    def from_const(cls, value: Scalar, names: tuple = VARS) -> "RatFn":
        return cls(MPoly.const(value, names))

    @classmethod
    def var(cls, name: str, names: tuple = VARS) -> "RatFn":
        return cls(MPoly.variable(name, names))

    @classmethod
    def zero(cls, names: tuple = VARS) -> "RatFn":
        return cls(MPoly.zero(names))

    @classmethod
    def one(cls, names: tuple = VARS) -> "RatFn":
        return cls(MPoly.const(1, names))

    # -- predicates -------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self):
        return not self.is_zero()

    @property
    def names(self):
        return self.num.names

    def is_poly(self) -> bool:
        return self.den.is_const()

    # -- field operations ---------------------------------------------------

    @staticmethod
    def _coerce(x, names) -> "RatFn":
        if isinstance(x, RatFn):
            return x
        if isinstance(x, MPoly):
            return RatFn(x)
        return RatFn.from_const(x, names)

    def __add__(self, other):
        o = self._coerce(other, self.names)
        if self.is_zero():
            return o
        if o.is_zero():
            return self
        g = poly_gcd(self.den, o.den)
        if g.is_const():
            # coprime denominators: the sum is already reduced
            num = self.num * o.den + o.num * self.den
            return RatFn._coprime(num, self.den * o.den)
        ds, do = self.den.divexact(g), o.den.divexact(g)
        return RatFn(self.num * do + o.num * ds, ds * o.den)

    __radd__ = __add__

    def __neg__(self):
        r = RatFn.__new__(RatFn)
        r.num = -self.num
        r.den = self.den
        return r

    def __sub__(self, other):
        return self + (-self._coerce(other, self.names))

    def __rsub__(self, other):
        return (-self) + other

    @staticmethod
    def _cancel(p: MPoly, g: MPoly) -> MPoly:
        return p if g.is_const() else p.divexact(g)

    def __mul__(self, other):
        o = self._coerce(other, self.names)
        if self.is_zero() or o.is_zero():
            return RatFn.zero(self.names)
        # cross-cancel: both inputs canonical, so the result is reduced
        g1 = poly_gcd(self.num, o.den)
        g2 = poly_gcd(o.num, self.den)
        num = self._cancel(self.num, g1) * self._cancel(o.num, g2)
        den = self._cancel(self.den, g2) * self._cancel(o.den, g1)
        return RatFn._coprime(num, den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other, self.names)
        if o.is_zero():
            raise DivisionByZero("division by the zero rational function")
        g1 = poly_gcd(self.num, o.num)
        g2 = poly_gcd(self.den, o.den)
        num = self._cancel(self.num, g1) * self._cancel(o.den, g2)
        den = self._cancel(self.den, g2) * self._cancel(o.num, g1)
        return RatFn._coprime(num, den)

    def __rtruediv__(self, other):
        return self._coerce(other, self.names) / self

    def __pow__(self, e: int):
        if e == 0:
            return RatFn.one(self.names)
        if e < 0:
            if self.is_zero():
                raise DivisionByZero("negative power of zero")
            return RatFn._coprime(self.den ** (-e), self.num ** (-e))
        return RatFn._coprime(self.num**e, self.den**e)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, MPoly)):
            other = self._coerce(other, self.names)
        return isinstance(other, RatFn) and self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    # -- evaluation and substitution -----------------------------------

    def eval_at(self, assignment: Mapping[str, Scalar]) -> Fraction:
        """Exact value at a point.  Raises PoleAtPoint on a vanishing denominator."""
        d = self.den.eval(assignment)
        if d == 0:
            raise PoleAtPoint(f"denominator vanishes at {dict(assignment)!r}")
        return self.num.eval(assignment) / d

    def subs_scalar(self, assignment: Mapping[str, Scalar]) -> "RatFn":
        """Partial substitution of numeric values; result stays symbolic."""
        den = self.den.subs_scalar(assignment)
        if den.is_zero():
            raise PoleAtPoint(f"denominator vanishes identically at {dict(assignment)!r}")
        return RatFn(self.num.subs_scalar(assignment), den)

    def coeff_of_var_power(self, name: str, k: int) -> "RatFn":
        """Coefficient of name**k, valid when the denominator is free of name."""
        if self.den.uses(name):
            raise ValueError(f"denominator involves {name!r}; not a polynomial in it")
        return RatFn(self.num.coeff_of_power(name, k), self.den)

    def map_ring(self, names_out: tuple, mapping: Mapping[str, MPoly]) -> "RatFn":
        return RatFn(self.num.map_ring(names_out, mapping), self.den.map_ring(names_out, mapping))

    # -- display -----------------------------------------------------------

    def __str__(self):
        if self.den.is_const() and self.den.const_value() == 1:
            return str(self.num)
        return f"({self.num}) / ({self.den})"

    def __repr__(self):
        return f"RatFn({self})"


# ---------------------------------------------------------------------------
# the Calabi-Yau weight relation
# ---------------------------------------------------------------------------

#: l0 expressed in the public ring.
L0_REDUCED = MPoly.linear({"l1": -1, "l2": -1, "l3": -1})


def reduce_cy_relation(x: Union[MPoly, RatFn]) -> RatFn:
    """Eliminate l0 via l0 = -(l1 + l2 + l3), landing in the public ring.

    Accepts polynomials or rational functions over any ring whose non-l0
    variables are a subset of the public ones; expressions already free of
    l0 pass through (re-expressed in the public ring).
    """
    mapping = {"l0": L0_REDUCED}
    if isinstance(x, MPoly):
        return RatFn(x.map_ring(VARS, mapping))
    return x.map_ring(VARS, mapping)


def eval_at(f: RatFn, assignment: Mapping[str, Scalar]) -> Fraction:
    """Module-level alias for :meth:`RatFn.eval_at`."""
    return f.eval_at(assignment)
