"""JSON schema for DMLInstance (versioned, round-trip stable).

Equations are written as ``term + term + ...`` where a term is an optional
bracketed rational coefficient followed by ``*``-joined factors ``x<i>[^e]``
(1-based coordinates) or ``L<f>[^e]`` (1-based linear forms)::

    [2]*x1 + x2 + x3 + [1]
"""

from __future__ import annotations

import json

from ..algebra import RationalFunc, format_rational, make_field, parse_rational
from .model import DMLInstance, Equation, MonomialEndo, TorusError, Variety, form_index, form_var

SCHEMA = "psetdml.instance/1"


class InstanceFormatError(TorusError):
    pass


def _fmt_var(v: int) -> str:
    return f"x{v + 1}" if v >= 0 else f"L{form_index(v) + 1}"


def format_equation(eq: Equation) -> str:
    parts = []
    for mono, c in eq.terms:
        factors = [_fmt_var(v) + (f"^{e}" if e != 1 else "") for v, e in mono]
        if not c.is_one() or not factors:
            factors.insert(0, f"[{format_rational(c)}]")
        parts.append("*".join(factors))
    return " + ".join(parts) if parts else "[0]"


def _split_top(s: str, sep: str) -> list[str]:
    out, depth, cur = [], 0, []
    for ch in s:
        if ch in "[(":
            depth += 1
        elif ch in "])":
            depth -= 1
        if ch == sep and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return out


def parse_equation(F, text: str) -> Equation:
    s = "".join(text.split())
    terms: dict = {}
    for part in _split_top(s, "+"):
        if not part:
            raise InstanceFormatError(f"empty term in {text!r}")
        coef = RationalFunc.one(F)
        factors = _split_top(part, "*")
        if factors[0].startswith("["):
            if not factors[0].endswith("]"):
                raise InstanceFormatError(f"unterminated coefficient in {part!r}")
            coef = parse_rational(F, factors[0][1:-1])
            factors = factors[1:]
        mono: dict[int, int] = {}
        for fac in factors:
            name, _, e = fac.partition("^")
            if len(name) < 2 or name[0] not in "xL" or not name[1:].isdigit():
                raise InstanceFormatError(f"bad factor {fac!r}")
            idx = int(name[1:]) - 1
            v = idx if name[0] == "x" else form_var(idx)
            mono[v] = mono.get(v, 0) + (int(e) if e else 1)
        key = tuple(sorted(mono.items()))
        terms[key] = terms[key] + coef if key in terms else coef
    return Equation.build(terms)


def instance_to_dict(I: DMLInstance) -> dict:
    F = I.field
    V = I.variety
    return {
        "schema": SCHEMA,
        "field": {"p": F.p, "e": F.e, "modulus": list(F.modulus)},
        "dim": I.dim,
        "endo": {
            "rows": [[[j + 1, a] for j, a in row] for row in I.endo.rows],
            "scalars": [format_rational(s) for s in I.endo.scalars],
        },
        "point": [format_rational(x) for x in I.start],
        "variety": {
            "forms": [format_equation(Equation.build({((v, 1),): c for v, c in f}))
                      for f in V.forms],
            "atoms": [[format_equation(eq) for eq in atom] for atom in V.atoms],
        },
        "trace": I.trace,
    }


def instance_from_dict(d: dict) -> DMLInstance:
    try:
        if d.get("schema") != SCHEMA:
            raise InstanceFormatError(f"unsupported schema {d.get('schema')!r}")
        F = make_field(d["field"]["p"], d["field"]["e"])
        if list(F.modulus) != list(d["field"]["modulus"]):
            raise InstanceFormatError("field modulus differs from the canonical one")
        rows = tuple(tuple((j - 1, a) for j, a in row) for row in d["endo"]["rows"])
        scalars = tuple(parse_rational(F, s) for s in d["endo"]["scalars"])
        endo = MonomialEndo(F, rows, scalars)
        start = tuple(parse_rational(F, s) for s in d["point"])
        forms = []
        for ftext in d["variety"]["forms"]:
            eq = parse_equation(F, ftext)
            if any(len(m) != 1 or m[0][1] != 1 or m[0][0] < 0 for m, _ in eq.terms):
                raise InstanceFormatError(f"form {ftext!r} is not linear in coordinates")
            forms.append(tuple((m[0][0], c) for m, c in eq.terms))
        atoms = tuple(tuple(parse_equation(F, e) for e in atom) for atom in d["variety"]["atoms"])
        I = DMLInstance(F, endo, start, Variety(atoms, tuple(forms)), d.get("trace"))
        if I.dim != d["dim"]:
            raise InstanceFormatError("dim field disagrees with the endomorphism")
        return I
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InstanceFormatError):
            raise
        raise InstanceFormatError(f"malformed instance: {exc}") from exc


def dumps(obj) -> str:
    """Deterministic JSON text used for every artifact."""
    return json.dumps(obj, sort_keys=True, indent=1, separators=(",", ": ")) + "\n"


def instance_to_json(I: DMLInstance) -> str:
    return dumps(instance_to_dict(I))


def instance_from_json(text: str) -> DMLInstance:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"not JSON: {exc}") from exc
    return instance_from_dict(d)
