"""Canonical rational functions num/den in F_{p^e}(t)."""

from __future__ import annotations

from .field import FieldSpec
from .poly import SparsePoly, poly_gcd, poly_pow


class RationalFunc:
    """num/den with den monic and gcd(num, den) = 1, so equality is structural."""

    __slots__ = ("num", "den")

    def __init__(self, num: SparsePoly, den: SparsePoly | None = None, *, _canonical=False):
        F = num.field
        if den is None:
            den = SparsePoly.one(F)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if not _canonical and not den.is_one():
            if num.is_zero():
                den = SparsePoly.one(F)
            else:
                g = poly_gcd(num, den)
                if not g.is_one():
                    num, den = num // g, den // g
                lead = den.lead()
                if lead != 1:
                    il = F.inv(lead)
                    num, den = num.scale(il), den.scale(il)
        self.num = num
        self.den = den

    @classmethod
    def const(cls, field: FieldSpec, c: int) -> "RationalFunc":
        return cls(SparsePoly.const(field, c), _canonical=True)

    @classmethod
    def one(cls, field: FieldSpec) -> "RationalFunc":
        return cls(SparsePoly.one(field), _canonical=True)

    @classmethod
    def zero(cls, field: FieldSpec) -> "RationalFunc":
        return cls(SparsePoly.zero(field), _canonical=True)

    @classmethod
    def poly(cls, p: SparsePoly) -> "RationalFunc":
        return cls(p, _canonical=True)

    @property
    def field(self) -> FieldSpec:
        return self.num.field

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num.is_one() and self.den.is_one()

    def is_poly(self) -> bool:
        return self.den.is_one()

    def degree(self) -> int:
        """max(deg num, deg den); the height used by degree caps."""
        return max(self.num.degree(), self.den.degree())

    def __eq__(self, other):
        if not isinstance(other, RationalFunc):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        from .textform import format_rational

        return f"RationalFunc({format_rational(self)})"

    def __add__(self, other: "RationalFunc") -> "RationalFunc":
        if self.den.is_one() and other.den.is_one():
            return RationalFunc(self.num + other.num, _canonical=True)
        if self.den == other.den:
            return RationalFunc(self.num + other.num, self.den)
        return RationalFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    def __neg__(self):
        return RationalFunc(-self.num, self.den, _canonical=True)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "RationalFunc") -> "RationalFunc":
        if self.den.is_one() and other.den.is_one():
            return RationalFunc(self.num * other.num, _canonical=True)
        return RationalFunc(self.num * other.num, self.den * other.den)

    def scale(self, c: int) -> "RationalFunc":
        return RationalFunc(self.num.scale(c), self.den, _canonical=c != 0)

    def inv(self) -> "RationalFunc":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return RationalFunc(self.den, self.num)

    def __truediv__(self, other):
        return self * other.inv()

    def __pow__(self, n: int) -> "RationalFunc":
        if n < 0:
            return self.inv() ** (-n)
        return RationalFunc(poly_pow(self.num, n), poly_pow(self.den, n), _canonical=True)

    def evaluate(self, x: int, target: FieldSpec | None = None, embed=None) -> int:
        F = target or self.field
        d = self.den.evaluate(x, target, embed)
        if d == 0:
            raise ZeroDivisionError("denominator vanishes at evaluation point")
        return F.div(self.num.evaluate(x, target, embed), d)
