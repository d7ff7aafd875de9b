"""Equivariant stable-pair invariants of the local resolved conifold.

Exact symbolic computation of tautological torus-equivariant invariants
counting stable pairs on the four-fold total space of O(-1,-1,0) over the
resolved conifold curve, together with the Gopakumar-Vafa / Gromov-Witten
series identities they feed into and the cohomological toy models used to
cross-check vanishing statements.

Everything is computed over exact rationals; there are no floats anywhere in
the library.
"""

__version__ = "0.1.0"
