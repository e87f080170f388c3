"""The shipped corpus: a hand-encoded instance and the acceptance expressions."""

from __future__ import annotations

from ..algebra import RationalFunc, SparsePoly, make_field
from ..torus import DMLInstance, MonomialEndo, Variety, linear_equation

# (expression, N) pairs that compile and verify with verdict match
CORPUS = (
    ("AP(1,2)", 200),
    ("AP(0,0)", 200),
    ("AP(3,4)", 200),
    ("B(2;1;1)", 512),
    ("B(3;2;1)", 512),
    ("B(3;1,1;1,1)", 512),
    ("B(2;1,1;1,1)", 128),
    ("B(2;1,1;1,2)", 128),
    ("B(2;3/2,1/2;1,1)", 128),
    ("B(3;1,1;1,1) U AP(0,5)", 120),
    ("AP(0,2) & AP(0,3)", 120),
)


def hand_encoded_b3() -> DMLInstance:
    """Over F_3(t): Phi = diag(t, 1+t, 1-t), alpha = (1,1,1), V: y + z - 2x = 2.

    Since (1+t)^n + (1-t)^n - 2t^n = 2 exactly when n = 3^a + 3^b, the return
    set is B(3;1,1;1,1).
    """
    F = make_field(3, 1)

    def lin(a, b):
        return RationalFunc.poly(SparsePoly.linear(F, a % 3, b % 3))

    one = RationalFunc.one(F)
    endo = MonomialEndo.diagonal(F, (lin(0, 1), lin(1, 1), lin(1, -1)))
    c = RationalFunc.const
    eq = linear_equation({0: c(F, (-2) % 3), 1: one, 2: one}, c(F, (-2) % 3))
    return DMLInstance(F, endo, (one, one, one), Variety(((eq,),)))
