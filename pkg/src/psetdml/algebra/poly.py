"""Sparse univariate polynomials in t over a finite field."""

from __future__ import annotations

import numpy as np

from .field import FieldElement, FieldSpec


class SparsePoly:
    """Immutable sparse polynomial; ``_terms`` is a tuple of (exponent, encoded coeff)
    with strictly increasing exponents and nonzero coefficients."""

    __slots__ = ("field", "_terms", "_hash", "_arr")

    def __init__(self, field: FieldSpec, terms=()):
        self.field = field
        self._terms = tuple(terms)
        self._hash = None
        self._arr = None

    def term_array(self) -> "np.ndarray":
        """(n, 2) int64 array of (exponent, coeff); cached."""
        if self._arr is None:
            self._arr = np.array(self._terms, dtype=np.int64).reshape(-1, 2)
        return self._arr

    # -- constructors ----------------------------------------------------

    @classmethod
    def from_dict(cls, field: FieldSpec, d: dict[int, int]) -> "SparsePoly":
        return cls(field, sorted((k, v) for k, v in d.items() if v))

    @classmethod
    def const(cls, field: FieldSpec, c: int) -> "SparsePoly":
        return cls(field, ((0, c),) if c else ())

    @classmethod
    def one(cls, field: FieldSpec) -> "SparsePoly":
        return cls(field, ((0, 1),))

    @classmethod
    def zero(cls, field: FieldSpec) -> "SparsePoly":
        return cls(field, ())

    @classmethod
    def monomial(cls, field: FieldSpec, exp: int, c: int = 1) -> "SparsePoly":
        return cls(field, ((exp, c),) if c else ())

    @classmethod
    def linear(cls, field: FieldSpec, a: int, b: int) -> "SparsePoly":
        """a + b*t."""
        return cls.from_dict(field, {0: a, 1: b})

    # -- inspection ------------------------------------------------------

    @property
    def terms(self) -> list[tuple[int, FieldElement]]:
        return [(k, FieldElement(self.field, c)) for k, c in self._terms]

    @property
    def raw_terms(self) -> tuple[tuple[int, int], ...]:
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def is_one(self) -> bool:
        return self._terms == ((0, 1),)

    def degree(self) -> int:
        return self._terms[-1][0] if self._terms else -1

    def lead(self) -> int:
        return self._terms[-1][1]

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def __len__(self):
        return len(self._terms)

    def __eq__(self, other):
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return self.field is other.field and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._terms)
        return self._hash

    def __repr__(self):
        from .textform import format_poly

        return f"SparsePoly({format_poly(self)})"

    # -- arithmetic ------------------------------------------------------

    def _same(self, other):
        if other.field is not self.field:
            raise ValueError("polynomials over different fields")

    def __add__(self, other: "SparsePoly") -> "SparsePoly":
        self._same(other)
        if not other._terms:
            return self
        if not self._terms:
            return other
        add = self.field.add
        d = dict(self._terms)
        for k, c in other._terms:
            v = d.get(k)
            d[k] = c if v is None else add(v, c)
        return SparsePoly.from_dict(self.field, d)

    def __neg__(self):
        neg = self.field.neg
        return SparsePoly(self.field, [(k, neg(c)) for k, c in self._terms])

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: int) -> "SparsePoly":
        if c == 0:
            return SparsePoly.zero(self.field)
        if c == 1:
            return self
        mul = self.field.mul
        return SparsePoly(self.field, [(k, mul(v, c)) for k, v in self._terms])

    def shift(self, s: int) -> "SparsePoly":
        """Multiply by t**s."""
        return SparsePoly(self.field, [(k + s, c) for k, c in self._terms])

    def __mul__(self, other: "SparsePoly") -> "SparsePoly":
        self._same(other)
        a, b = self._terms, other._terms
        if not a or not b:
            return SparsePoly.zero(self.field)
        if len(a) < len(b):
            a, b = b, a
        if len(b) == 1:
            (s, c), = b
            if c == 1:
                return SparsePoly(self.field, [(k + s, v) for k, v in a])
            mul = self.field.mul
            return SparsePoly(self.field, [(k + s, mul(v, c)) for k, v in a])
        F = self.field
        add, mul = F.add, F.mul
        d: dict[int, int] = {}
        get = d.get
        for kb, cb in b:
            for ka, ca in a:
                k = ka + kb
                v = mul(ca, cb)
                old = get(k)
                d[k] = v if old is None else add(old, v)
        return SparsePoly.from_dict(F, d)

    def frobenius(self, k: int = 1) -> "SparsePoly":
        """self ** (p ** k), computed termwise."""
        F = self.field
        pk = F.p**k
        frob = F.frob
        return SparsePoly(F, [(e * pk, frob(c, k)) for e, c in self._terms])

    def __pow__(self, n: int) -> "SparsePoly":
        return poly_pow(self, n)

    def divmod(self, g: "SparsePoly") -> tuple["SparsePoly", "SparsePoly"]:
        self._same(g)
        if g.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        F = self.field
        dg = g.degree()
        inv_lead = F.inv(g.lead())
        gl = g._terms[:-1]
        r = dict(self._terms)
        q: dict[int, int] = {}
        while r:
            dr = max(r)
            if dr < dg:
                break
            c = F.mul(r.pop(dr), inv_lead)
            s = dr - dg
            q[s] = c
            for k, v in gl:
                kk = k + s
                nv = F.sub(r.get(kk, 0), F.mul(c, v))
                if nv:
                    r[kk] = nv
                else:
                    r.pop(kk, None)
        return SparsePoly.from_dict(F, q), SparsePoly.from_dict(F, r)

    def __floordiv__(self, g):
        return self.divmod(g)[0]

    def __mod__(self, g):
        return self.divmod(g)[1]

    def monic(self) -> "SparsePoly":
        if self.is_zero():
            return self
        return self.scale(self.field.inv(self.lead()))

    def evaluate(self, x: int, target: FieldSpec | None = None, embed=None) -> int:
        """Evaluate at x; with ``target``/``embed`` coefficients are mapped first."""
        F = target or self.field
        acc = 0
        prev = None
        for k, c in reversed(self._terms):
            if prev is not None:
                acc = F.mul(acc, F.pow(x, prev - k))
            acc = F.add(acc, embed[c] if embed is not None else c)
            prev = k
        if prev:
            acc = F.mul(acc, F.pow(x, prev))
        return acc


def poly_gcd(f: SparsePoly, g: SparsePoly) -> SparsePoly:
    """Monic gcd (zero if both are zero)."""
    f._same(g)
    while not g.is_zero():
        f, g = g, f.divmod(g)[1]
    return f.monic()


def poly_pow(f: SparsePoly, n: int) -> SparsePoly:
    """f ** n through base-p digits and Frobenius layers.

    With n = sum b_i p^i, f^n = prod_i (f^(p^i))^(b_i) and each f^(p^i) is obtained
    termwise; only the b_i <= p - 1 residual products are real multiplications.
    """
    if n < 0:
        raise ValueError("negative exponent")
    F = f.field
    if n == 0:
        return SparsePoly.one(F)
    if f.is_monomial():
        (k, c), = f._terms
        return SparsePoly(F, ((k * n, F.pow(c, n)),))
    p = F.p
    result = SparsePoly.one(F)
    layer = f
    i = 0
    while n:
        n, b = divmod(n, p)
        if b:
            for _ in range(b):
                result = result * layer
        if n:
            i += 1
            layer = f.frobenius(i)
    return result


def naive_pow(f: SparsePoly, n: int) -> SparsePoly:
    out = SparsePoly.one(f.field)
    for _ in range(n):
        out = out * f
    return out


def linear_combination(field: FieldSpec, pairs) -> SparsePoly:
    """sum c * f over (encoded c, SparsePoly f), vectorized over all terms."""
    pairs = [(c, f) for c, f in pairs if c and f._terms]
    if not pairs:
        return SparsePoly.zero(field)
    if len(pairs) == 1:
        c, f = pairs[0]
        return f.scale(c)
    F = field
    arr = np.concatenate([f.term_array() for _, f in pairs])
    exps, vals = arr[:, 0], arr[:, 1]
    cs = np.concatenate([np.full(len(f._terms), c, np.int64) for c, f in pairs])
    if F.e == 1:
        if F.p >= 1 << 31:
            d: dict = {}
            for c, f in pairs:
                for k, v in f._terms:
                    d[k] = (d.get(k, 0) + c * v) % F.p
            return SparsePoly.from_dict(F, d)
        prod = cs * vals % F.p
        rep = None
    elif F._log is not None:
        log = np.asarray(F._log, dtype=np.int64)
        exp = np.asarray(F._exp, dtype=np.int64)
        prod = exp[(log[cs] + log[vals]) % (F.order - 1)]
        rep = None
        if F.p != 2:
            rep = (prod[:, None] // np.array([F.p**i for i in range(F.e)], np.int64)) % F.p
    else:
        acc = SparsePoly.zero(F)
        for c, f in pairs:
            acc = acc + f.scale(c)
        return acc
    order = np.argsort(exps, kind="stable")
    exps = exps[order]
    starts = np.flatnonzero(np.r_[True, exps[1:] != exps[:-1]])
    keys = exps[starts]
    if F.e == 1:
        sums = np.add.reduceat(prod[order], starts) % F.p
    elif F.p == 2:
        sums = np.bitwise_xor.reduceat(prod[order], starts)
    else:
        dig = np.add.reduceat(rep[order], starts, axis=0) % F.p
        sums = dig @ np.array([F.p**i for i in range(F.e)], np.int64)
    nz = sums != 0
    return SparsePoly(F, zip(keys[nz].tolist(), sums[nz].tolist()))
