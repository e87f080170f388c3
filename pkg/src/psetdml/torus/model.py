"""Monomial endomorphisms of split tori over F_{p^e}(t), points and subvarieties."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Any

from ..algebra import FieldSpec, RationalFunc, SparsePoly


class TorusError(ValueError):
    pass


Row = tuple[tuple[int, int], ...]  # sorted (column, exponent) pairs, exponent > 0


def _rf_one(F: FieldSpec) -> RationalFunc:
    return RationalFunc.one(F)


@dataclass(frozen=True)
class MonomialEndo:
    """x -> (scalars[i] * prod_j x_j ** A[i][j])_i with a nonnegative integer matrix A."""

    field: FieldSpec
    rows: tuple[Row, ...]
    scalars: tuple[RationalFunc, ...]

    def __post_init__(self):
        if len(self.rows) != len(self.scalars):
            raise TorusError("rows and scalars differ in length")
        k = len(self.rows)
        for row in self.rows:
            for j, a in row:
                if not 0 <= j < k or a <= 0:
                    raise TorusError(f"bad matrix entry ({j}, {a}) for dim {k}")
        if any(s.is_zero() for s in self.scalars):
            raise TorusError("scalar multipliers must be nonzero")

    @property
    def dim(self) -> int:
        return len(self.rows)

    @classmethod
    def diagonal(cls, F: FieldSpec, scalars) -> "MonomialEndo":
        scalars = tuple(scalars)
        return cls(F, tuple(((i, 1),) for i in range(len(scalars))), scalars)

    @classmethod
    def identity(cls, F: FieldSpec, k: int) -> "MonomialEndo":
        return cls.diagonal(F, [_rf_one(F)] * k)

    def matrix(self) -> list[list[int]]:
        k = self.dim
        out = [[0] * k for _ in range(k)]
        for i, row in enumerate(self.rows):
            for j, a in row:
                out[i][j] = a
        return out

    def is_diagonal(self) -> bool:
        return all(row == ((i, 1),) for i, row in enumerate(self.rows))

    def apply(self, point: tuple[RationalFunc, ...]) -> tuple[RationalFunc, ...]:
        if len(point) != self.dim:
            raise TorusError("point dimension mismatch")
        out = []
        for s, row in zip(self.scalars, self.rows):
            v = s
            for j, a in row:
                x = point[j]
                v = v * (x if a == 1 else x**a)
            out.append(v)
        return tuple(out)


def endo_compose(E1: MonomialEndo, E2: MonomialEndo) -> MonomialEndo:
    """E1 o E2: matrix A1 A2, scalars gamma1_i * prod_j gamma2_j ** A1_ij."""
    if E1.dim != E2.dim:
        raise TorusError(f"dimension mismatch {E1.dim} vs {E2.dim}")
    rows, scalars = [], []
    for s1, row in zip(E1.scalars, E1.rows):
        acc: dict[int, int] = {}
        s = s1
        for j, a in row:
            g = E2.scalars[j]
            if not g.is_one():
                s = s * (g if a == 1 else g**a)
            for l, b in E2.rows[j]:
                acc[l] = acc.get(l, 0) + a * b
        rows.append(tuple(sorted(acc.items())))
        scalars.append(s)
    return MonomialEndo(E1.field, tuple(rows), tuple(scalars))


def endo_pow(E: MonomialEndo, m: int) -> MonomialEndo:
    if m < 0:
        raise TorusError("negative power")
    if m == 0:
        return MonomialEndo.identity(E.field, E.dim)
    result = None
    base = E
    while m:
        if m & 1:
            result = base if result is None else endo_compose(result, base)
        m >>= 1
        if m:
            base = endo_compose(base, base)
    return result


# -- polynomial equations ------------------------------------------------

# Variables: coordinate i is encoded as i >= 0, linear form f as -(f + 1).
Monomial = tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class Equation:
    """sum_terms coeff * monomial == 0, monomials in coordinates and linear forms."""

    terms: tuple[tuple[Monomial, RationalFunc], ...]

    @classmethod
    def build(cls, terms: dict[Monomial, RationalFunc]) -> "Equation":
        clean = {tuple(sorted(m)): c for m, c in terms.items() if not c.is_zero()}
        return cls(tuple(sorted(clean.items(), key=lambda mc: _mono_key(mc[0]))))

    def variables(self) -> set[int]:
        return {v for m, _ in self.terms for v, _ in m}

    def degree(self) -> int:
        return max((sum(e for _, e in m) for m, _ in self.terms), default=0)

    def relabel(self, coord_offset: int, form_offset: int) -> "Equation":
        return Equation(tuple(
            (tuple((_shift_var(v, coord_offset, form_offset), e) for v, e in m), c)
            for m, c in self.terms))


def _mono_key(m: Monomial):
    return (sum(e for _, e in m), tuple((v if v >= 0 else 10**9 - v, e) for v, e in m))


def _shift_var(v: int, co: int, fo: int) -> int:
    return v + co if v >= 0 else v - fo


def linear_equation(coeffs: dict[int, RationalFunc], constant: RationalFunc | None = None) -> Equation:
    """sum coeffs[v] * v + constant == 0."""
    terms: dict[Monomial, RationalFunc] = {((v, 1),): c for v, c in coeffs.items()}
    if constant is not None:
        terms[()] = constant
    return Equation.build(terms)


def form_var(f: int) -> int:
    return -(f + 1)


def form_index(v: int) -> int:
    return -v - 1


@dataclass(frozen=True)
class Variety:
    """Union over atoms of the common zero locus of each atom's equations.

    ``forms`` are named linear forms in the coordinates shared by all atoms;
    equations refer to them as variables so that relations in derived
    coordinates stay compact.
    """

    atoms: tuple[tuple[Equation, ...], ...]
    forms: tuple[tuple[tuple[int, RationalFunc], ...], ...] = ()

    def __post_init__(self):
        if not self.atoms:
            raise TorusError("a variety needs at least one atom")
        if any(not atom for atom in self.atoms):
            raise TorusError("every atom needs at least one equation")

    def max_coordinate(self) -> int:
        vs = [v for atom in self.atoms for eq in atom for v in eq.variables() if v >= 0]
        vs += [v for f in self.forms for v, _ in f]
        return max(vs, default=-1)

    def relabel(self, coord_offset: int, form_offset: int) -> "Variety":
        return Variety(
            tuple(tuple(eq.relabel(coord_offset, form_offset) for eq in atom) for atom in self.atoms),
            tuple(tuple((v + coord_offset, c) for v, c in f) for f in self.forms))


@dataclass(frozen=True)
class DMLInstance:
    """(X = G_m^dim, Phi, alpha, V) over F_{p^e}(t); ``trace`` is provenance only."""

    field: FieldSpec
    endo: MonomialEndo
    start: tuple[RationalFunc, ...]
    variety: Variety
    trace: Any = dc_field(default=None, compare=False)

    def __post_init__(self):
        if len(self.start) != self.endo.dim:
            raise TorusError("start point and endomorphism dimensions differ")
        if any(x.is_zero() for x in self.start):
            raise TorusError("start point must lie on the torus")
        if self.variety.max_coordinate() >= self.dim:
            raise TorusError("variety refers to a coordinate beyond the dimension")

    @property
    def dim(self) -> int:
        return self.endo.dim

    def with_trace(self, trace) -> "DMLInstance":
        return DMLInstance(self.field, self.endo, self.start, self.variety, trace)


def const_rf(F: FieldSpec, c: int) -> RationalFunc:
    return RationalFunc.const(F, c)


def t_rf(F: FieldSpec) -> RationalFunc:
    return RationalFunc.poly(SparsePoly.monomial(F, 1))


def instance_product(I1: DMLInstance, I2: DMLInstance, mode: str = "union") -> DMLInstance:
    """Block-diagonal product; return set is the union or intersection of the two."""
    if I1.field is not I2.field:
        raise TorusError("instances over different fields")
    k1 = I1.dim
    rows = I1.endo.rows + tuple(tuple((j + k1, a) for j, a in row) for row in I2.endo.rows)
    endo = MonomialEndo(I1.field, rows, I1.endo.scalars + I2.endo.scalars)
    V1 = I1.variety
    V2 = I2.variety.relabel(k1, len(V1.forms))
    forms = V1.forms + V2.forms
    if mode == "union":
        atoms = V1.atoms + V2.atoms
    elif mode == "intersection":
        atoms = tuple(a + b for a in V1.atoms for b in V2.atoms)
    else:
        raise ValueError(f"unknown product mode {mode!r}")
    return DMLInstance(I1.field, endo, I1.start + I2.start, Variety(atoms, forms))
