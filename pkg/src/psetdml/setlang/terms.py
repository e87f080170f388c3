"""Expression trees describing subsets of the nonnegative integers."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm


@dataclass(frozen=True)
class APTerm:
    """{a + b*t : t >= 0}; b == 0 is the singleton {a}."""

    a: int
    b: int


@dataclass(frozen=True)
class PSetTerm:
    """B(p^k; c_1..c_m; k_1..k_m) = {sum c_j (p^k)^(k_j n_j)}, intersected with N_0."""

    p: int
    k: int
    coeffs: tuple[Fraction, ...]
    exps: tuple[int, ...]

    @property
    def q(self) -> int:
        return self.p**self.k

    @property
    def m(self) -> int:
        return len(self.coeffs)

    def is_uniform(self) -> bool:
        return all(x == 1 for x in self.exps)

    def int_coeffs(self) -> tuple[int, ...]:
        return tuple(int(c) for c in self.coeffs)


@dataclass(frozen=True)
class Union:
    children: tuple


@dataclass(frozen=True)
class Intersect:
    children: tuple


@dataclass(frozen=True)
class Scale:
    """m * S."""

    m: int
    child: object


@dataclass(frozen=True)
class Shift:
    """m + S."""

    m: int
    child: object


SetExpr = APTerm | PSetTerm | Union | Intersect | Scale | Shift


def pset(q_or_p: int, coeffs, exps, k: int | None = None) -> PSetTerm:
    """Convenience constructor: ``pset(4, (1,), (1,))`` is B(4;1;1)."""
    from ..algebra.field import prime_power

    if k is None:
        pk = prime_power(q_or_p)
        if pk is None:
            raise ValueError(f"{q_or_p} is not a prime power")
        p, k = pk
    else:
        p = q_or_p
    return PSetTerm(p, k, tuple(Fraction(c) for c in coeffs), tuple(int(e) for e in exps))


@dataclass(frozen=True)
class NormalizedPSet:
    """scale * S == shift + core  (core None means scale * S == {shift}).

    ``trace`` records the order the reductions were applied: scale first,
    then extraction of the constant (exponent-zero) coefficients.
    """

    original: PSetTerm
    scale: int
    shift: int
    core: PSetTerm | None
    trace: tuple[tuple[str, int], ...]

    @property
    def degenerate(self) -> bool:
        return self.core is None


def normalize_pset(t: PSetTerm) -> NormalizedPSet:
    scale = lcm(*(c.denominator for c in t.coeffs))
    scaled = [c * scale for c in t.coeffs]
    shift = sum(int(c) for c, e in zip(scaled, t.exps) if e == 0)
    keep = [(int(c), e) for c, e in zip(scaled, t.exps) if e != 0]
    core = None
    if keep:
        core = PSetTerm(t.p, t.k, tuple(Fraction(c) for c, _ in keep), tuple(e for _, e in keep))
    trace = (("scale", scale), ("shift", shift))
    return NormalizedPSet(t, scale, shift, core, trace)


def uniformize(t: PSetTerm, paper_literal: bool = False) -> list[PSetTerm]:
    """Split a core term into terms over a common base p^K with all exponents 1.

    K is lcm of the base-p exponents (their product with ``paper_literal``); the
    returned terms, over all 0 <= i_j < K/k_j, are B(p^K; c_j p^(k_j i_j); 1..1).
    """
    pe = [t.k * e for e in t.exps]
    if any(e <= 0 for e in pe):
        raise ValueError("uniformize needs positive exponents")
    if paper_literal:
        K = 1
        for e in pe:
            K *= e
    else:
        K = lcm(*pe)
    from itertools import product

    out = []
    ranges = [range(K // e) for e in pe]
    for idx in product(*ranges):
        coeffs = tuple(Fraction(int(c) * t.p ** (e * i)) for c, e, i in zip(t.coeffs, pe, idx))
        out.append(PSetTerm(t.p, K, coeffs, (1,) * t.m))
    return out
