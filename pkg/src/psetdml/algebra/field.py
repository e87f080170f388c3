"""Finite fields F_{p^e} with elements encoded as integers.

An element a_0 + a_1 u + ... + a_{e-1} u^{e-1} (u a root of the modulus) is
stored as the integer sum a_i p^i.  Fields up to ``TABLE_LIMIT`` elements keep
exp/log/Zech tables so that multiplication and addition are list lookups.
"""

from __future__ import annotations

import math

import numpy as np
from functools import lru_cache

TABLE_LIMIT = 1 << 22
BIT_CAP = 40


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def factorize(n: int) -> dict[int, int]:
    """Trial-division factorization; fine below 2**40."""
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_power(q: int) -> tuple[int, int] | None:
    """Return (p, k) with q == p**k, or None."""
    if q < 2:
        return None
    fac = factorize(q)
    if len(fac) != 1:
        return None
    (p, k), = fac.items()
    return p, k


# dense polynomials over F_p as coefficient lists, low degree first

def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a, f, p):
    a = list(a)
    df = len(f) - 1
    inv_lead = pow(f[-1], p - 2, p)
    while len(_trim(a)) - 1 >= df:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - df
        for i, fc in enumerate(f):
            a[shift + i] = (a[shift + i] - c * fc) % p
    return a


def _pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _pgcd(a, b, p):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _trim(_pmod(a, b, p))
    return a


def _ppowmod(base, n, f, p):
    result = [1]
    base = _pmod(base, f, p)
    while n:
        if n & 1:
            result = _pmod(_pmul(result, base, p), f, p)
        base = _pmod(_pmul(base, base, p), f, p)
        n >>= 1
    return result


def is_irreducible(f: list[int], p: int) -> bool:
    """Rabin's test for a monic f over F_p."""
    e = len(f) - 1
    if e <= 1:
        return e == 1
    x = [0, 1]
    if _trim(list(_ppowmod(x, p**e, f, p))) != x:
        return False
    for r in factorize(e):
        h = _ppowmod(x, p ** (e // r), f, p)
        h = h + [0] * max(0, 2 - len(h))
        h[1] = (h[1] - 1) % p
        g = _pgcd(f, _trim(h), p)
        if len(g) > 1:
            return False
    return True


class FieldSpec:
    """The field F_{p^e}.  Use :func:`make_field` rather than constructing directly."""

    def __init__(self, p: int, e: int, modulus: tuple[int, ...]):
        self.p = p
        self.e = e
        self.order = p**e
        self.modulus = modulus  # low -> high, monic, length e + 1
        self._neg_low = [(-c) % p for c in modulus[:-1]]
        self._exp: list[int] | None = None
        self._log: list[int] | None = None
        self._zech: list[int] | None = None
        if e > 1 and self.order <= TABLE_LIMIT:
            self._build_tables()
        self.primitive = self._find_primitive()

    # -- representation -------------------------------------------------

    def digits(self, a: int) -> list[int]:
        p = self.p
        out = []
        for _ in range(self.e):
            a, r = divmod(a, p)
            out.append(r)
        return out

    def from_digits(self, d) -> int:
        v = 0
        for c in reversed(list(d)):
            v = v * self.p + (c % self.p)
        return v

    def element(self, a: int) -> "FieldElement":
        return FieldElement(self, a)

    @property
    def one(self) -> int:
        return 1

    def __repr__(self):
        return f"FieldSpec(p={self.p}, e={self.e})"

    def __reduce__(self):
        return make_field, (self.p, self.e)

    # -- slow arithmetic (no tables) -----------------------------------

    def _mulx(self, d: list[int]) -> list[int]:
        top = d[-1]
        out = [0] + d[:-1]
        if top:
            p = self.p
            out = [(o + top * m) % p for o, m in zip(out, self._neg_low)]
        return out

    def _slow_mul(self, a: int, b: int) -> int:
        da, db = self.digits(a), self.digits(b)
        acc = [0] * self.e
        p = self.p
        # Horner over the digits of b, highest first
        for c in reversed(db):
            acc = self._mulx(acc)
            if c:
                acc = [(x + c * y) % p for x, y in zip(acc, da)]
        return self.from_digits(acc)

    def _slow_pow(self, a: int, n: int) -> int:
        r = 1
        while n:
            if n & 1:
                r = self._slow_mul(r, a)
            a = self._slow_mul(a, a)
            n >>= 1
        return r

    def _mul_matrix(self, h: int) -> "np.ndarray":
        """Digit matrix of x -> x*h: row i holds the digits of u^i * h."""
        return np.array([self.digits(self._slow_mul(self.p**i, h)) for i in range(self.e)],
                        dtype=np.int64)

    def _build_tables(self):
        q1 = self.order - 1
        fac = factorize(q1)
        p, e = self.p, self.e

        def is_gen(h):
            return all(self._slow_pow(h, q1 // r) != 1 for r in fac)

        # prefer u + a, else the smallest generator
        gen = next((p + a for a in range(p) if is_gen(p + a)), None)
        if gen is None:
            gen = next(v for v in range(2, self.order) if is_gen(v))
        # powers gen^k in blocks: block j+1 = block j times gen^B (a linear map on digits)
        B = min(q1, 1024)
        step = self._mul_matrix(gen)
        first = np.zeros((B, e), dtype=np.int64)
        row = np.zeros(e, dtype=np.int64)
        row[0] = 1
        for k in range(B):
            first[k] = row
            row = (row @ step) % p
        jump = self._mul_matrix(self._slow_pow(gen, B))
        nblocks = -(-q1 // B)
        digits = np.empty((nblocks * B, e), dtype=np.int64)
        blk = first
        for j in range(nblocks):
            digits[j * B:(j + 1) * B] = blk
            blk = (blk @ jump) % p
        weights = np.array([p**i for i in range(e)], dtype=np.int64)
        exp_arr = (digits[:q1] @ weights).astype(np.int64)
        log_arr = np.full(self.order, -1, dtype=np.int64)
        log_arr[exp_arr] = np.arange(q1, dtype=np.int64)
        low = exp_arr % p
        succ = exp_arr - low + (low + 1) % p
        zech_arr = log_arr[succ]
        self._exp = exp_arr.tolist()
        self._log = log_arr.tolist()
        self._zech = zech_arr.tolist()

    def _find_primitive(self) -> int:
        q1 = self.order - 1
        if q1 == 1:
            return 1
        if self._log is not None:
            for v in range(1, self.order):
                if math.gcd(self._log[v], q1) == 1:
                    return v
        fac = factorize(q1)
        for v in range(1, self.order):
            if all(self.pow(v, q1 // r) != 1 for r in fac):
                return v
        raise FieldError("no primitive element")  # pragma: no cover

    # -- arithmetic on encoded ints ------------------------------------

    def add(self, a: int, b: int) -> int:
        p = self.p
        if self.e == 1:
            return (a + b) % p
        if p == 2:
            return a ^ b
        if self._zech is not None:
            if a == 0:
                return b
            if b == 0:
                return a
            la, lb = self._log[a], self._log[b]
            z = self._zech[(lb - la) % (self.order - 1)]
            if z < 0:
                return 0
            return self._exp[(la + z) % (self.order - 1)]
        return self.from_digits(x + y for x, y in zip(self.digits(a), self.digits(b)))

    def neg(self, a: int) -> int:
        p = self.p
        if self.e == 1:
            return (-a) % p
        if p == 2:
            return a
        return self.from_digits(-x for x in self.digits(a))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.e == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        if self._log is not None:
            return self._exp[(self._log[a] + self._log[b]) % (self.order - 1)]
        return self._slow_mul(a, b)

    def scale(self, c: int, a: int) -> int:
        """Multiply by an integer (an element of the prime field)."""
        c %= self.p
        if c == 0 or a == 0:
            return 0
        if c == 1:
            return a
        if self.e == 1:
            return c * a % self.p
        return self.from_digits(c * x for x in self.digits(a))

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in " + repr(self))
        if self.e == 1:
            return pow(a, self.p - 2, self.p)
        if self._log is not None:
            return self._exp[(-self._log[a]) % (self.order - 1)]
        return self._slow_pow(a, self.order - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, n: int) -> int:
        if n < 0:
            return self.pow(self.inv(a), -n)
        if n == 0:
            return 1
        if a == 0:
            return 0
        if self.e == 1:
            return pow(a, n, self.p)
        if self._log is not None:
            return self._exp[(self._log[a] * n) % (self.order - 1)]
        return self._slow_pow(a, n)

    def frob(self, a: int, k: int = 1) -> int:
        """a ** (p ** k)."""
        k %= self.e
        if k == 0 or a == 0:
            return a
        if self._log is not None:
            return self._exp[(self._log[a] * self.p**k) % (self.order - 1)]
        return self.pow(a, self.p**k)

    def log(self, a: int) -> int:
        """Discrete log w.r.t. the internal table generator (not ``primitive``)."""
        if self._log is None:
            if self.e == 1:
                raise FieldError("log tables only for extension fields")
            raise FieldError("field too large for log tables")
        return self._log[a]

    def mult_order(self, a: int) -> int:
        if a == 0:
            raise FieldError("zero has no multiplicative order")
        q1 = self.order - 1
        n = q1
        for r in factorize(q1):
            while n % r == 0 and self.pow(a, n // r) == 1:
                n //= r
        return n

    def subfield_degree(self, a: int) -> int:
        """Smallest d with a in F_{p^d}."""
        for d in range(1, self.e + 1):
            if self.e % d == 0 and self.frob(a, d) == a:
                return d
        raise AssertionError("unreachable")  # pragma: no cover

    def subfield_elements(self, d: int) -> list["FieldElement"]:
        return [self.element(v) for v in self.subfield_ints(d)]

    def subfield_ints(self, d: int) -> list[int]:
        if d < 1 or self.e % d:
            raise FieldError(f"{d} does not divide extension degree {self.e}")
        q1 = self.order - 1
        step = q1 // (self.p**d - 1)
        g = self.primitive
        h = self.pow(g, step)
        out, v = [], 1
        for _ in range(self.p**d - 1):
            out.append(v)
            v = self.mul(v, h)
        return out

    def embedding_into(self, target: "FieldSpec") -> list[int]:
        """Image table of every element under a fixed embedding into ``target``.

        The image of u is the smallest (by encoding) root of the modulus in
        ``target``; for a prime field the embedding is the identity on residues.
        """
        if target.p != self.p or target.e % self.e:
            raise FieldError(f"{self!r} does not embed into {target!r}")
        if self.e == 1:
            return list(range(self.p))
        candidates = [0] + target.subfield_ints(self.e)
        root = None
        for r in sorted(candidates):
            acc = 0
            for c in reversed(self.modulus):
                acc = target.add(target.mul(acc, r), c % self.p)
            if acc == 0:
                root = r
                break
        if root is None:  # pragma: no cover
            raise FieldError("modulus has no root in target")
        powers = [1]
        for _ in range(self.e - 1):
            powers.append(target.mul(powers[-1], root))
        table = []
        for v in range(self.order):
            acc = 0
            for dgt, pw in zip(self.digits(v), powers):
                if dgt:
                    acc = target.add(acc, target.scale(dgt, pw))
            table.append(acc)
        return table


def make_field(p: int, e: int = 1) -> FieldSpec:
    """Deterministically construct F_{p^e}; equal (p, e) give the same object.

    The modulus is the monic irreducible of degree e whose lower coefficients,
    read as the integer a_0 + a_1 p + ..., are smallest.  The primitive element
    is the smallest encoding of multiplicative order p^e - 1.
    """
    return _make_field(p, e)


@lru_cache(maxsize=None)
def _make_field(p: int, e: int) -> FieldSpec:
    if not isinstance(p, int) or not is_prime(p):
        raise FieldError(f"{p} is not prime")
    if not isinstance(e, int) or e < 1:
        raise FieldError(f"extension degree must be >= 1, got {e}")
    if e * math.log2(p) > BIT_CAP:
        raise FieldError(f"p^e = {p}^{e} exceeds the {BIT_CAP}-bit cap")
    if e == 1:
        return FieldSpec(p, 1, (0, 1))
    for low in range(p**e):
        f = []
        v = low
        for _ in range(e):
            v, r = divmod(v, p)
            f.append(r)
        f.append(1)
        if f[0] != 0 and is_irreducible(f, p):
            return FieldSpec(p, e, tuple(f))
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


class FieldElement:
    """Immutable element of a :class:`FieldSpec`."""

    __slots__ = ("field", "value")

    def __init__(self, field: FieldSpec, value: int):
        if not 0 <= value < field.order:
            raise FieldError(f"encoding {value} out of range for {field!r}")
        self.field = field
        self.value = value

    @property
    def coeffs(self) -> tuple[int, ...]:
        return tuple(self.field.digits(self.value))

    def _check(self, other):
        if not isinstance(other, FieldElement):
            return FieldElement(self.field, int(other) % self.field.p)
        if other.field is not self.field:
            raise FieldError("mixed fields")
        return other

    def __add__(self, other):
        other = self._check(other)
        return FieldElement(self.field, self.field.add(self.value, other.value))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._check(other)
        return FieldElement(self.field, self.field.sub(self.value, other.value))

    def __rsub__(self, other):
        return self._check(other) - self

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __mul__(self, other):
        other = self._check(other)
        return FieldElement(self.field, self.field.mul(self.value, other.value))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._check(other)
        return FieldElement(self.field, self.field.div(self.value, other.value))

    def inv(self):
        return FieldElement(self.field, self.field.inv(self.value))

    def __pow__(self, n: int):
        return FieldElement(self.field, self.field.pow(self.value, n))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field is other.field and self.value == other.value
        if isinstance(other, int):
            return self == self._check(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field.p, self.field.e, self.value))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        from .textform import format_element

        return f"FieldElement({format_element(self.field, self.value)})"
