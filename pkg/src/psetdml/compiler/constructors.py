"""Instance constructors for the set operations: APs, unions/intersections,
scaling, division and translation of return sets."""

from __future__ import annotations

from ..algebra import FieldSpec, RationalFunc, SparsePoly
from ..torus.model import (DMLInstance, MonomialEndo, TorusError, Variety, endo_pow,
                           instance_product, linear_equation, t_rf)
from ..torus.orbit import variety_member


class ConstructionError(RuntimeError):
    """A constructor could not produce an instance; ``trace`` holds the partial plan."""

    def __init__(self, msg: str, trace=None):
        super().__init__(msg)
        self.trace = trace


def _one(F):
    return RationalFunc.one(F)


def build_ap(F: FieldSpec, a: int, b: int) -> DMLInstance:
    """Instance with return set {a + b*t : t >= 0}; the auxiliary constant is t."""
    if a < 0 or b < 0:
        raise ValueError("AP parameters must be nonnegative")
    c = t_rf(F)
    one = _one(F)
    if b == 0:
        # x_{a+1} reads 1 exactly at step a
        rows = ((),) + tuple(((j, 1),) for j in range(a))
        endo = MonomialEndo(F, rows, (c,) + (one,) * a)
        start = (one,) + (c,) * a
        atom = (linear_equation({a: one}, -one),)
        return DMLInstance(F, endo, start, Variety((atom,)))
    if a == 0:
        return instance_product(build_ap(F, 0, 0), build_ap(F, b, b), "union")
    # coordinates x_1..x_a, y_1..y_b (0-based: x at 0..a-1, y at a..a+b-1)
    rows = [()]
    rows += [((j, 1),) for j in range(a - 1)]
    rows += [((a + j + 1, 1),) for j in range(b - 1)]
    rows.append(((a - 1, 1), (a, 1)))
    endo = MonomialEndo(F, tuple(rows), (one,) * (a + b))
    start = (c,) + (one,) * (a + b - 1)
    atom = tuple(linear_equation({i: one}, -one) for i in range(a + b - 1))
    return DMLInstance(F, endo, start, Variety((atom,)))


def union(I1: DMLInstance, I2: DMLInstance) -> DMLInstance:
    return instance_product(I1, I2, "union")


def intersect(I1: DMLInstance, I2: DMLInstance) -> DMLInstance:
    return instance_product(I1, I2, "intersection")


def scale_up(I: DMLInstance, m: int, cut: bool = True) -> DMLInstance:
    """Return set m*S: m cyclic copies of the system, then intersect with m*N_0.

    ``cut=False`` omits the intersection (used only by mutation tests).
    """
    if m < 1:
        raise ValueError("scale factor must be >= 1")
    if m == 1:
        return I
    F, k = I.field, I.dim
    rows = []
    scalars = []
    # block 0 gets Phi(block m-1); block b gets block b-1
    last = (m - 1) * k
    for row, s in zip(I.endo.rows, I.endo.scalars):
        rows.append(tuple((last + j, a) for j, a in row))
        scalars.append(s)
    for blk in range(1, m):
        for i in range(k):
            rows.append((((blk - 1) * k + i, 1),))
            scalars.append(_one(F))
    endo = MonomialEndo(F, tuple(rows), tuple(scalars))
    cyc = DMLInstance(F, endo, I.start * m, I.variety)
    if not cut:
        return cyc
    return intersect(cyc, build_ap(F, 0, m))


def divide_by(I: DMLInstance, m: int) -> DMLInstance:
    """Return set S from an instance for m*S: replace Phi by Phi^m."""
    if m < 1:
        raise ValueError("divisor must be >= 1")
    if m == 1:
        return I
    return DMLInstance(I.field, endo_pow(I.endo, m), I.start, I.variety)


# -- points off the variety ------------------------------------------------

BETA_BUDGET = 64


def beta_candidate(F: FieldSpec, i: int) -> RationalFunc:
    """i-th entry of t, t+1, t^2, t^2+1, t^3, ..."""
    d, plus = divmod(i, 2)
    return RationalFunc.poly(SparsePoly.from_dict(F, {d + 1: 1, 0: plus}))


def find_off_variety_point(I: DMLInstance, budget: int = BETA_BUDGET) -> tuple:
    """First point not on V in a fixed order.

    The first half of the budget tries constant vectors (v_i, ..., v_i), the
    second half staggered vectors (v_i, v_{i+1}, ..., v_{i+k-1}), where v is
    the sequence of :func:`beta_candidate`.
    """
    F, k = I.field, I.dim
    half = budget // 2
    for i in range(budget):
        if i < half:
            pt = (beta_candidate(F, i),) * k
        else:
            j = i - half
            pt = tuple(beta_candidate(F, j + c) for c in range(k))
        if not variety_member(I.variety, pt):
            return pt
    raise TorusError(f"no point off the variety among {budget} candidates")


def shift_up(I: DMLInstance, m: int, beta=None) -> DMLInstance:
    """Return set m + S via an (m+1)-block delay line.

    Block 0 evolves by Phi; block b copies block b-1; V is imposed on block m,
    which starts at beta and reads Phi^{n-m}(alpha) from step m on.
    """
    if m < 1:
        raise ValueError("shift must be >= 1")
    if beta is None:
        beta = find_off_variety_point(I)
    F, k = I.field, I.dim
    rows = list(I.endo.rows)
    scalars = list(I.endo.scalars)
    for blk in range(1, m + 1):
        for i in range(k):
            rows.append((((blk - 1) * k + i, 1),))
            scalars.append(_one(F))
    endo = MonomialEndo(F, tuple(rows), tuple(scalars))
    start = I.start + tuple(beta) * m
    return DMLInstance(F, endo, start, I.variety.relabel(m * k, 0))


def shift_up_literal(I: DMLInstance, m: int) -> DMLInstance:
    """m-fold iteration of the one-step doubling (x, y) -> (Phi(x), x)."""
    for _ in range(m):
        beta = find_off_variety_point(I)
        F, k = I.field, I.dim
        rows = I.endo.rows + tuple(((i, 1),) for i in range(k))
        endo = MonomialEndo(F, rows, I.endo.scalars + (_one(F),) * k)
        I = DMLInstance(F, endo, I.start + tuple(beta), I.variety.relabel(k, 0))
    return I
