"""Recursive-descent parser and canonical renderer for set expressions.

    set    := inter ('U' inter)*
    inter  := term ('&' term)*
    term   := 'AP(' nat ',' nat ')'
            | 'B(' nat ';' rat {',' rat} ';' nat {',' nat} ')'
            | nat '*' term          (m * S)
            | nat '+' term          (m + S)
            | '(' set ')'
    rat    := ['-'] nat ['/' nat]
"""

from __future__ import annotations

from fractions import Fraction

from ..algebra.field import prime_power
from .terms import APTerm, Intersect, PSetTerm, Scale, Shift, Union


class SetParseError(ValueError):
    def __init__(self, msg: str, pos: int | None = None):
        self.pos = pos
        super().__init__(msg if pos is None else f"{msg} (at position {pos})")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.i = 0

    def ws(self):
        while self.i < len(self.text) and self.text[self.i].isspace():
            self.i += 1

    def peek(self) -> str:
        self.ws()
        return self.text[self.i] if self.i < len(self.text) else ""

    def take(self, tok: str) -> bool:
        self.ws()
        if self.text.startswith(tok, self.i):
            self.i += len(tok)
            return True
        return False

    def expect(self, tok: str):
        if not self.take(tok):
            found = self.text[self.i:self.i + 1] or "end of input"
            raise SetParseError(f"expected {tok!r}, found {found!r}", self.i)

    def nat(self) -> int:
        self.ws()
        j = self.i
        while self.i < len(self.text) and self.text[self.i].isdigit():
            self.i += 1
        if j == self.i:
            raise SetParseError("expected a natural number", j)
        return int(self.text[j:self.i])

    def rat(self) -> Fraction:
        neg = self.take("-")
        num = self.nat()
        den = self.nat() if self.take("/") else 1
        if den == 0:
            raise SetParseError("zero denominator", self.i)
        v = Fraction(num, den)
        return -v if neg else v

    def parse_set(self):
        parts = [self.parse_inter()]
        while self.take("U"):
            parts.append(self.parse_inter())
        return parts[0] if len(parts) == 1 else Union(tuple(parts))

    def parse_inter(self):
        parts = [self.parse_term()]
        while self.take("&"):
            parts.append(self.parse_term())
        return parts[0] if len(parts) == 1 else Intersect(tuple(parts))

    def parse_term(self):
        start = self.i
        if self.take("("):
            inner = self.parse_set()
            self.expect(")")
            return inner
        if self.take("AP("):
            a = self.nat()
            self.expect(",")
            b = self.nat()
            self.expect(")")
            return APTerm(a, b)
        if self.take("B("):
            return self.parse_pset(start)
        if self.peek().isdigit():
            m = self.nat()
            if self.take("*"):
                if m < 1:
                    raise SetParseError("scale factor must be >= 1", start)
                return Scale(m, self.parse_term())
            if self.take("+"):
                return Shift(m, self.parse_term())
            raise SetParseError("expected '*' or '+' after a number", self.i)
        found = self.text[self.i:self.i + 1] or "end of input"
        raise SetParseError(f"expected a term, found {found!r}", self.i)

    def parse_pset(self, start: int) -> PSetTerm:
        qpos = self.i
        q = self.nat()
        pk = prime_power(q)
        if pk is None:
            raise SetParseError(f"base {q} is not a prime power", qpos)
        self.expect(";")
        coeffs = [self.rat()]
        while self.take(","):
            coeffs.append(self.rat())
        self.expect(";")
        exps = [self.nat()]
        while self.take(","):
            exps.append(self.nat())
        self.expect(")")
        if len(coeffs) != len(exps):
            raise SetParseError(
                f"{len(coeffs)} coefficients but {len(exps)} exponents", start)
        if any(c == 0 for c in coeffs):
            raise SetParseError("p-set coefficients must be nonzero", start)
        if any(c < 0 for c in coeffs):
            raise SetParseError(
                "coefficients not all positive after clearing denominators", start)
        return PSetTerm(pk[0], pk[1], tuple(coeffs), tuple(exps))


def parse(text: str):
    p = _Parser(text)
    e = p.parse_set()
    p.ws()
    if p.i != len(text):
        raise SetParseError(f"unexpected {text[p.i]!r}", p.i)
    return e


def _fmt_rat(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def render(e, _ctx: int = 0) -> str:
    """Canonical text with minimal parentheses (U < & < prefix operators)."""
    if isinstance(e, APTerm):
        return f"AP({e.a},{e.b})"
    if isinstance(e, PSetTerm):
        cs = ",".join(_fmt_rat(c) for c in e.coeffs)
        ks = ",".join(str(k) for k in e.exps)
        return f"B({e.q};{cs};{ks})"
    if isinstance(e, Union):
        s = " U ".join(render(c, 1) for c in e.children)
        return f"({s})" if _ctx >= 1 else s
    if isinstance(e, Intersect):
        s = " & ".join(render(c, 2) for c in e.children)
        return f"({s})" if _ctx >= 2 else s
    if isinstance(e, Scale):
        return f"{e.m}*{render(e.child, 2)}"
    if isinstance(e, Shift):
        return f"{e.m}+{render(e.child, 2)}"
    raise TypeError(f"not a set expression: {e!r}")


def to_json(e) -> dict:
    if isinstance(e, APTerm):
        return {"type": "AP", "a": e.a, "b": e.b}
    if isinstance(e, PSetTerm):
        return {"type": "B", "q": e.q, "coeffs": [_fmt_rat(c) for c in e.coeffs],
                "exps": list(e.exps)}
    if isinstance(e, (Union, Intersect)):
        return {"type": "union" if isinstance(e, Union) else "intersection",
                "children": [to_json(c) for c in e.children]}
    if isinstance(e, Scale):
        return {"type": "scale", "m": e.m, "child": to_json(e.child)}
    if isinstance(e, Shift):
        return {"type": "shift", "m": e.m, "child": to_json(e.child)}
    raise TypeError(f"not a set expression: {e!r}")


def from_json(d: dict):
    t = d["type"]
    if t == "AP":
        return APTerm(d["a"], d["b"])
    if t == "B":
        return parse(f"B({d['q']};{','.join(d['coeffs'])};{','.join(map(str, d['exps']))})")
    if t in ("union", "intersection"):
        cls = Union if t == "union" else Intersect
        return cls(tuple(from_json(c) for c in d["children"]))
    if t == "scale":
        return Scale(d["m"], from_json(d["child"]))
    if t == "shift":
        return Shift(d["m"], from_json(d["child"]))
    raise ValueError(f"unknown node type {t!r}")
