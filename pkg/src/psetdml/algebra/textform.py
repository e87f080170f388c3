"""Text form of field elements, polynomials and rational functions.

Grammar (whitespace ignored)::

    rational := poly | '(' poly ')' '/' '(' poly ')'
    poly     := ['-'] pterm (('+' | '-') pterm)*
    pterm    := coef ['*' tpow] | tpow
    tpow     := 't' ['^' nat]
    coef     := nat | '(' elem ')'
    elem     := ['-'] eterm (('+' | '-') eterm)*
    eterm    := nat ['*' upow] | upow
    upow     := 'u' ['^' nat]

``u`` is the root of the field modulus, so over F_4 the generator prints as
``(u)``.  Integers are reduced mod p.  The printer emits terms in increasing
degree and never uses '-', so printing is canonical and parse(print(x)) == x.
"""

from __future__ import annotations

from .field import FieldSpec
from .poly import SparsePoly
from .rational import RationalFunc


class TextFormError(ValueError):
    pass


def format_element(F: FieldSpec, a: int) -> str:
    if F.e == 1 or a < F.p:
        return str(a)
    parts = []
    for i, d in enumerate(F.digits(a)):
        if not d:
            continue
        if i == 0:
            parts.append(str(d))
            continue
        u = "u" if i == 1 else f"u^{i}"
        parts.append(u if d == 1 else f"{d}*{u}")
    return "+".join(parts)


def format_poly(f: SparsePoly) -> str:
    F = f.field
    if f.is_zero():
        return "0"
    parts = []
    for k, c in f.raw_terms:
        cs = format_element(F, c)
        if c >= F.p:
            cs = f"({cs})"
        if k == 0:
            parts.append(cs)
            continue
        tp = "t" if k == 1 else f"t^{k}"
        parts.append(tp if c == 1 else f"{cs}*{tp}")
    return "+".join(parts)


def format_rational(r: RationalFunc) -> str:
    if r.den.is_one():
        return format_poly(r.num)
    return f"({format_poly(r.num)})/({format_poly(r.den)})"


class _Reader:
    def __init__(self, text: str):
        self.s = "".join(text.split())
        self.i = 0

    def peek(self) -> str:
        return self.s[self.i] if self.i < len(self.s) else ""

    def take(self, ch: str) -> bool:
        if self.peek() == ch:
            self.i += 1
            return True
        return False

    def expect(self, ch: str):
        if not self.take(ch):
            raise TextFormError(f"expected {ch!r} at position {self.i} in {self.s!r}")

    def nat(self) -> int:
        j = self.i
        while self.peek().isdigit():
            self.i += 1
        if j == self.i:
            raise TextFormError(f"expected a number at position {j} in {self.s!r}")
        return int(self.s[j:self.i])

    def done(self) -> bool:
        return self.i == len(self.s)


def _power(r: _Reader, var: str) -> int:
    r.expect(var)
    return r.nat() if r.take("^") else 1


def _elem(r: _Reader, F: FieldSpec) -> int:
    digits = [0] * max(F.e, 1)
    sign = -1 if r.take("-") else 1
    while True:
        if r.peek() == "u":
            c, k = 1, _power(r, "u")
        else:
            c = r.nat()
            k = _power(r, "u") if r.take("*") else 0
        if k >= F.e:
            raise TextFormError(f"u^{k} exceeds extension degree {F.e}")
        digits[k] = (digits[k] + sign * c) % F.p
        if r.take("+"):
            sign = 1
        elif r.take("-"):
            sign = -1
        else:
            return F.from_digits(digits)


def _poly(r: _Reader, F: FieldSpec) -> SparsePoly:
    acc: dict[int, int] = {}
    sign = -1 if r.take("-") else 1
    while True:
        if r.peek() == "t":
            c, k = 1, _power(r, "t")
        else:
            if r.take("("):
                c = _elem(r, F)
                r.expect(")")
            else:
                c = r.nat() % F.p
            k = _power(r, "t") if r.take("*") else 0
        if sign < 0:
            c = F.neg(c)
        acc[k] = F.add(acc.get(k, 0), c)
        if r.take("+"):
            sign = 1
        elif r.take("-"):
            sign = -1
        else:
            return SparsePoly.from_dict(F, acc)


def parse_element(F: FieldSpec, text: str) -> int:
    r = _Reader(text)
    v = _elem(r, F)
    if not r.done():
        raise TextFormError(f"trailing input at position {r.i} in {r.s!r}")
    return v


def parse_poly(F: FieldSpec, text: str) -> SparsePoly:
    r = _Reader(text)
    try:
        f = _poly(r, F)
        if r.done():
            return f
    except TextFormError:
        pass
    s = r.s
    if s.startswith("(") and s.endswith(")"):
        return parse_poly(F, s[1:-1])
    raise TextFormError(f"cannot parse polynomial {text!r}")


def parse_rational(F: FieldSpec, text: str) -> RationalFunc:
    s = "".join(text.split())
    if "/" in s:
        num, _, den = s.partition("/")
        return RationalFunc(parse_poly(F, num), parse_poly(F, den))
    return RationalFunc(parse_poly(F, s))
