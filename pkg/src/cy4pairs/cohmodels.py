"""Truncated cohomology-ring models backing two closed-form checks.

The first model is the symmetric product of an elliptic curve fibered
over its Picard variety by the Abel-Jacobi map.  Its ring is generated
by the relative hyperplane class ``xi`` and the fiber class ``f``
subject to ``f^2 = 0`` and truncation above total degree ``n``, with the
integration rules

    int xi^n = 1 - n,    int xi^(n-1) f = 1,

everything of lower degree integrating to zero.  That is all the
structure the vanishing computation consumes: the integrand is a
rational expression in ``xi`` and the shifted class ``xi' = xi + (n-1)f``
whose denominator is inverted as a truncated geometric series, and the
resulting integral collapses to an exact zero thanks to a multinomial
identity that :func:`multinomial_vanishing_check` verifies on its own.

The second model is the plain hyperplane ring Q[H]/(H^N) of a projective
space, used to extract the pushforward coefficient of a tautological
bundle expression; the answer is the rank ``n`` regardless of the
dimension of the ambient space.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .algebra import MPoly, RatFn


class InvalidInput(Exception):
    """Raised when an operation is queried outside its domain."""


def _ratfn(value) -> RatFn:
    if isinstance(value, RatFn):
        return value
    if isinstance(value, MPoly):
        return RatFn(value)
    return RatFn.from_const(Fraction(value))


class SymRingElt:
    """Element c_{a,b} xi^a f^b of the degree-truncated model ring.

    ``n`` is the model parameter; exponents satisfy b <= 1 (squares of
    the fiber class vanish) and a + b <= n (higher degrees truncate to
    zero).  Coefficients are exact rational functions.
    """

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs=None):
        if not isinstance(n, int) or n < 1:
            raise ValueError("model parameter n must be an integer >= 1")
        self.n = n
        clean = {}
        for (a, b), value in dict(coeffs or {}).items():
            if b not in (0, 1) or a < 0:
                raise ValueError("exponents must have a >= 0 and b in {0, 1}")
            if a + b > n:
                continue
            c = _ratfn(value)
            if c:
                clean[(a, b)] = c
        self.coeffs = clean

    # -- constructors -------------------------------------------------

    @classmethod
    def const(cls, n: int, value) -> "SymRingElt":
        return cls(n, {(0, 0): value})

    @classmethod
    def xi(cls, n: int) -> "SymRingElt":
        return cls(n, {(1, 0): 1})

    @classmethod
    def fiber(cls, n: int) -> "SymRingElt":
        return cls(n, {(0, 1): 1})

    @classmethod
    def xi_prime(cls, n: int) -> "SymRingElt":
        """The shifted class xi' = xi + (n-1) f."""
        return cls(n, {(1, 0): 1, (0, 1): n - 1})

    def coeff(self, a: int, b: int) -> RatFn:
        return self.coeffs.get((a, b), RatFn.zero())

    # -- ring operations ------------------------------------------------

    def _coerce(self, other) -> "SymRingElt":
        if isinstance(other, SymRingElt):
            if other.n != self.n:
                raise ValueError("mixed model parameters %d and %d" % (self.n, other.n))
            return other
        return SymRingElt.const(self.n, other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.coeffs)
        for key, value in other.coeffs.items():
            s = out.get(key, RatFn.zero()) + value
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        return SymRingElt(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return SymRingElt(self.n, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        out = {}
        for (a1, b1), c1 in self.coeffs.items():
            for (a2, b2), c2 in other.coeffs.items():
                a, b = a1 + a2, b1 + b2
                if b > 1 or a + b > self.n:
                    continue
                key = (a, b)
                s = out.get(key, RatFn.zero()) + c1 * c2
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
        return SymRingElt(self.n, out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative powers are not defined in the model ring")
        out = SymRingElt.const(self.n, 1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        return (
            isinstance(other, SymRingElt)
            and self.n == other.n
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.n, frozenset(self.coeffs.items())))

    def __repr__(self):
        body = ", ".join(
            "(%d,%d): %s" % (a, b, v) for (a, b), v in sorted(self.coeffs.items())
        )
        return "SymRingElt(n=%d, {%s})" % (self.n, body)


def sym_integrate(x: SymRingElt) -> RatFn:
    """Integration against the model rules: only the top monomials survive,
    xi^n contributing (1-n) and xi^(n-1) f contributing 1."""
    n = x.n
    return x.coeff(n, 0) * (1 - n) + x.coeff(n - 1, 1)


def _xi_derivative(x: SymRingElt) -> SymRingElt:
    """Formal d/d(xi)."""
    return SymRingElt(
        x.n, {(a - 1, b): v * a for (a, b), v in x.coeffs.items() if a >= 1}
    )


def _geometric_inverse(n: int, c: RatFn) -> SymRingElt:
    """1/(xi + c) in the model ring, c a nonzero scalar of the base field."""
    out = {}
    term = 1 / c
    for j in range(n + 1):
        out[(j, 0)] = term if j % 2 == 0 else -term
        term = term / c
    return SymRingElt(n, out)


def pn2_vanishing(n: int) -> RatFn:
    """Tautological pair integral over the n-th symmetric product.

    Builds the degree-two-class integrand F(xi)^(n-1) * F(xi') with

        F(x) = (x - 2*l1)(x + l2)(x + l3) / ((x - l1 + l2)(x - l1 + l3)),

    over the field generated by l1, l2 with l3 = -l1 - l2 substituted
    throughout, the denominator inverted as a truncated geometric series
    and xi' = xi + (n-1) f expanded through f^2 = 0.  The integral is an
    exact zero for every n >= 1, which is what the caller should assert.
    """
    if not isinstance(n, int) or n < 1:
        raise ValueError("n must be an integer >= 1")
    l1 = _ratfn(MPoly.variable("l1"))
    l2 = _ratfn(MPoly.variable("l2"))
    l3 = -l1 - l2
    xi = SymRingElt.xi(n)
    F = (
        (xi - 2 * l1)
        * (xi + l2)
        * (xi + l3)
        * _geometric_inverse(n, l2 - l1)
        * _geometric_inverse(n, l3 - l1)
    )
    # F(xi') = F(xi) + (n-1) f F'(xi) since f^2 = 0
    F_shift = F + SymRingElt.fiber(n) * _xi_derivative(F) * (n - 1)
    return sym_integrate(F ** (n - 1) * F_shift)


def _partition_multiplicities(n: int, max_part: int):
    """Multiplicity vectors (m_1, ..., m_n) of the partitions of n."""
    if n == 0:
        yield {}
        return
    for k in range(min(n, max_part), 0, -1):
        for rest in _partition_multiplicities(n - k, k):
            out = dict(rest)
            out[k] = out.get(k, 0) + 1
            yield out


def multinomial_vanishing_check(n: int) -> bool:
    """Combinatorial identity behind the vanishing of :func:`pn2_vanishing`.

    For every tuple (P_0, ..., P_n) of non-negative integers with
    sum(P_k) = n and sum(k*P_k) = n, the signed multinomial sum

        sum_k (k - 1) * n! / (P_0! ... (P_k - 1)! ... P_n!)

    must vanish (terms with P_k = 0 are absent).  Each tuple also
    satisfies the linear form of the same identity, sum_k (k-1) P_k = 0.
    """
    if not isinstance(n, int) or n < 1:
        raise ValueError("n must be an integer >= 1")
    for mult in _partition_multiplicities(n, n):
        P = [0] * (n + 1)
        for part, count in mult.items():
            P[part] = count
        P[0] = n - sum(P[1:])
        assert sum((k - 1) * P[k] for k in range(n + 1)) == 0
        total = 0
        for k in range(n + 1):
            if P[k] == 0:
                continue
            denom = 1
            for j in range(n + 1):
                denom *= math.factorial(P[j] - 1 if j == k else P[j])
            total += (k - 1) * math.factorial(n) // denom
        if total != 0:
            return False
    return True


class ProjRingElt:
    """Element of the hyperplane ring Q[H]/(H^N), dense coefficient list."""

    __slots__ = ("N", "coeffs")

    def __init__(self, N: int, coeffs=None):
        if not isinstance(N, int) or N < 1:
            raise ValueError("ring truncation N must be an integer >= 1")
        self.N = N
        values = list(coeffs or [])
        if len(values) > N:
            values = values[:N]
        values += [0] * (N - len(values))
        self.coeffs = [_ratfn(v) for v in values]

    @classmethod
    def const(cls, N: int, value) -> "ProjRingElt":
        return cls(N, [value])

    @classmethod
    def hyperplane(cls, N: int) -> "ProjRingElt":
        return cls(N, [0, 1] if N > 1 else [0])

    def coeff(self, k: int) -> RatFn:
        return self.coeffs[k]

    def _coerce(self, other) -> "ProjRingElt":
        if isinstance(other, ProjRingElt):
            if other.N != self.N:
                raise ValueError("mixed truncations %d and %d" % (self.N, other.N))
            return other
        return ProjRingElt.const(self.N, other)

    def __add__(self, other):
        other = self._coerce(other)
        return ProjRingElt(
            self.N, [a + b for a, b in zip(self.coeffs, other.coeffs)]
        )

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return ProjRingElt(
            self.N, [a - b for a, b in zip(self.coeffs, other.coeffs)]
        )

    def __mul__(self, other):
        other = self._coerce(other)
        out = [RatFn.zero() for _ in range(self.N)]
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if i + j >= self.N:
                    break
                if b:
                    out[i + j] = out[i + j] + a * b
        return ProjRingElt(self.N, out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("use inv_unit for inverses")
        out = ProjRingElt.const(self.N, 1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def inv_unit(self) -> "ProjRingElt":
        """Inverse of an element with invertible constant term."""
        c0 = self.coeffs[0]
        if not c0:
            raise ZeroDivisionError("constant term vanishes")
        # geometric series: 1/(c0 (1 + u)) = (1/c0) sum (-u)^j
        u = ProjRingElt(self.N, [0] + [v / c0 for v in self.coeffs[1:]])
        out = ProjRingElt.const(self.N, 1)
        power = ProjRingElt.const(self.N, 1)
        sign = 1
        for _ in range(self.N - 1):
            power = power * u
            if all(not v for v in power.coeffs):
                break
            sign = -sign
            out = out + power * sign
        return ProjRingElt(self.N, [v / c0 for v in out.coeffs])

    def __eq__(self, other):
        return (
            isinstance(other, ProjRingElt)
            and self.N == other.N
            and self.coeffs == other.coeffs
        )

    def __repr__(self):
        return "ProjRingElt(N=%d, %s)" % (
            self.N,
            [str(v) for v in self.coeffs],
        )


def proj_bundle_coefficient(h0: int, n: int) -> Fraction:
    """Degree h0-1 coefficient of H^h1 (1+H)^h0 / (1+H)^h1 on P(H^0).

    ``h1 = h0 - n`` is the corank; the answer equals ``n`` for every
    admissible pair.  Raises InvalidInput when h0 < n.
    """
    if not isinstance(h0, int) or not isinstance(n, int) or h0 < 1 or n < 1:
        raise InvalidInput("h0 and n must be integers >= 1")
    if h0 < n:
        raise InvalidInput("h0 must be at least n (corank h1 = h0 - n >= 0)")
    h1 = h0 - n
    H = ProjRingElt.hyperplane(h0)
    one_plus = ProjRingElt.const(h0, 1) + H
    expr = H ** h1 * one_plus ** h0 * (one_plus ** h1).inv_unit()
    return expr.coeff(h0 - 1).eval_at({})
