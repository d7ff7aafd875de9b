"""Virtual torus characters and equivariant Euler classes.

The four-torus T = (C*)^4 acts on the local geometry with weight basis
t0, t1, t2, t3 whose equivariant parameters are l0, l1, l2, l3, subject to
the Calabi-Yau relation l0 + l1 + l2 + l3 = 0.  A (virtual) T-character is a
finite integer combination of monomials t^w, w in Z^4; because the subtorus
that preserves the holomorphic volume form kills the diagonal, weights are
only meaningful modulo Z*(1,1,1,1).  We store the canonical representative
with w[0] = 0, which also makes the Euler pairing land directly in the
reduced ring QQ(l1, l2, l3).

`chi_p1` is the building block: the character of the cohomology of an
equivariant line bundle O(p*Zinf + q*Z0) on the invariant P^1, a signed
interval of powers of t0.  `koszul_chi_hom` assembles Ext-characters of
pushforwards from the curve into a larger space by the Koszul resolution of
the curve: an alternating sum over subsets of the normal bundle summands,
each subset twisting the line-bundle degrees and weights.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Sequence, Tuple

from .algebra import MPoly, RatFn

Weight = Tuple[int, int, int, int]

#: Normal bundle summands of the curve inside the resolved conifold:
#: O(-1) with fibre weight t1^-1 and the trivial direction with weight t3^-1.
NORMALS_Y = (
    (-1, 0, (0, -1, 0, 0)),
    (0, 0, (0, 0, 0, -1)),
)

#: Normal bundle summands of the curve inside the four-fold: the conifold
#: normals plus the second O(-1) direction with fibre weight t2^-1.
NORMALS_X = NORMALS_Y + ((-1, 0, (0, 0, -1, 0)),)


class ZeroWeight(Exception):
    """Euler class of a character with a torus-trivial summand."""


def _normalize(w: Sequence[int]) -> Weight:
    """Canonical coset representative modulo the diagonal: first slot zero."""
    w0 = w[0]
    return (0, w[1] - w0, w[2] - w0, w[3] - w0)


class TChar:
    """Virtual T-character: weight coset -> integer multiplicity."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for w, mult in terms.items():
                if mult:
                    key = _normalize(w)
                    s = clean.get(key, 0) + mult
                    if s:
                        clean[key] = s
                    else:
                        del clean[key]
        self.terms = clean

    @classmethod
    def zero(cls) -> "TChar":
        return cls()

    @classmethod
    def monomial(cls, w: Sequence[int], mult: int = 1) -> "TChar":
        return cls({tuple(w): mult})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def dimension(self) -> int:
        """Virtual dimension: the sum of multiplicities."""
        return sum(self.terms.values())

    def trivial_multiplicity(self) -> int:
        """Multiplicity of the torus-trivial weight."""
        return self.terms.get((0, 0, 0, 0), 0)

    def __add__(self, other: "TChar") -> "TChar":
        out = dict(self.terms)
        for w, mult in other.terms.items():
            s = out.get(w, 0) + mult
            if s:
                out[w] = s
            else:
                del out[w]
        t = TChar.__new__(TChar)
        t.terms = out
        return t

    def __neg__(self) -> "TChar":
        t = TChar.__new__(TChar)
        t.terms = {w: -mult for w, mult in self.terms.items()}
        return t

    def __sub__(self, other: "TChar") -> "TChar":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            t = TChar.__new__(TChar)
            t.terms = {w: mult * other for w, mult in self.terms.items()} if other else {}
            return t
        out: dict = {}
        for wa, ma in self.terms.items():
            for wb, mb in other.terms.items():
                key = _normalize((wa[0] + wb[0], wa[1] + wb[1], wa[2] + wb[2], wa[3] + wb[3]))
                s = out.get(key, 0) + ma * mb
                if s:
                    out[key] = s
                else:
                    del out[key]
        t = TChar.__new__(TChar)
        t.terms = out
        return t

    __rmul__ = __mul__

    def bar(self) -> "TChar":
        """The involution t^w -> t^-w."""
        t = TChar.__new__(TChar)
        t.terms = {_normalize((-w[0], -w[1], -w[2], -w[3])): mult for w, mult in self.terms.items()}
        return t

    def __eq__(self, other):
        return isinstance(other, TChar) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __str__(self):
        if not self.terms:
            return "0"
        bits = []
        for w in sorted(self.terms):
            mult = self.terms[w]
            mono = "*".join(f"t{i}^{e}" for i, e in enumerate(w) if e) or "1"
            bits.append(f"{'+' if mult > 0 and bits else ''}{mult}*{mono}")
        return " ".join(bits)

    def __repr__(self):
        return f"TChar({self})"


def bar(c: TChar) -> TChar:
    """Module-level alias for :meth:`TChar.bar`."""
    return c.bar()


def chi_p1(p: int, q: int) -> TChar:
    """Cohomology character of O(p*Zinf + q*Z0) on the invariant P^1.

    The two fixed points carry the degrees p and q; sections contribute the
    t0-weight interval [-q, p] when p + q >= -1 (empty at -1), and H^1
    contributes minus the interior interval [p+1, -q-1] when p + q <= -2.
    Either way the virtual dimension is p + q + 1.
    """
    terms = {}
    if p + q >= -1:
        for b in range(-q, p + 1):
            terms[(b, 0, 0, 0)] = 1
    else:
        for b in range(p + 1, -q):
            terms[(b, 0, 0, 0)] = -1
    return TChar(terms)


Summand = Tuple[int, int, Weight]


def koszul_chi_hom(
    a_summands: Iterable[Summand],
    b_summands: Iterable[Summand],
    normals: Sequence[Summand],
) -> TChar:
    """Ext-character chi(i_*A, i_*B) for sums of line bundles on the curve.

    A and B are given as summands (p, q, w): the line bundle of bidegree
    (p, q) twisted by the torus character t^w.  Resolving i_*A by the Koszul
    complex of the inclusion turns the Ext-character into an alternating sum
    over subsets S of the normal summands,

        chi(i_*A, i_*B) = sum_S (-1)^|S| chi_P1(A^v tensor B tensor Lambda^S N),

    where the subset S adds its degrees and weights to those of A^v tensor B.
    """
    a_summands = tuple(a_summands)
    b_summands = tuple(b_summands)
    total = TChar.zero()
    for size in range(len(normals) + 1):
        for subset in combinations(normals, size):
            dp = sum(s[0] for s in subset)
            dq = sum(s[1] for s in subset)
            dw = [0, 0, 0, 0]
            for s in subset:
                for i in range(4):
                    dw[i] += s[2][i]
            sign = -1 if size % 2 else 1
            for pa, qa, wa in a_summands:
                for pb, qb, wb in b_summands:
                    block = chi_p1(pb - pa + dp, qb - qa + dq)
                    if block.is_zero():
                        continue
                    w = tuple(wb[i] - wa[i] + dw[i] for i in range(4))
                    total = total + sign * (block * TChar.monomial(w))
    return total


def euler_class(c: TChar, m_twist: bool = False) -> RatFn:
    """Equivariant Euler class: the product of weight forms over the character.

    Each summand t^w with multiplicity mu contributes (w . lambda)^mu, where
    the pairing uses the canonical representative with w[0] = 0 so the result
    lives in QQ(l1, l2, l3, m) with the Calabi-Yau relation already applied.
    With ``m_twist`` the character is tensored by the rank-one piece e^m and
    every factor becomes (m + w . lambda).

    Raises :class:`ZeroWeight` if a torus-trivial summand appears without the
    m-twist, since its weight form vanishes identically.
    """
    out = RatFn.one()
    for w, mult in c.terms.items():
        coeffs = {"l1": w[1], "l2": w[2], "l3": w[3]}
        if m_twist:
            coeffs["m"] = 1
        elif w == (0, 0, 0, 0):
            raise ZeroWeight(f"trivial weight with multiplicity {mult}")
        form = MPoly.linear(coeffs)
        out = out * RatFn(form) ** mult
    return out
