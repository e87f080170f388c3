"""Ground-truth membership and bounded enumeration for set expressions.

Deliberately independent of the torus machinery: everything here is integer
arithmetic on the definitions.
"""

from __future__ import annotations

from functools import lru_cache
from heapq import merge

from .terms import APTerm, Intersect, PSetTerm, Scale, Shift, Union, normalize_pset


def _core_member(core: PSetTerm, x: int) -> bool:
    bases = tuple(core.q**e for e in core.exps)
    coeffs = core.int_coeffs()
    tails = [sum(coeffs[j:]) for j in range(len(coeffs) + 1)]

    @lru_cache(maxsize=None)
    def rec(j: int, rest: int) -> bool:
        if j == len(coeffs):
            return rest == 0
        v = coeffs[j]
        while v + tails[j + 1] <= rest:
            if rec(j + 1, rest - v):
                return True
            v *= bases[j]
        return False

    return rec(0, x)


def member(e, n: int) -> bool:
    if n < 0:
        return False
    if isinstance(e, APTerm):
        if e.b == 0:
            return n == e.a
        return n >= e.a and (n - e.a) % e.b == 0
    if isinstance(e, PSetTerm):
        norm = normalize_pset(e)
        x = n * norm.scale - norm.shift
        if norm.core is None:
            return x == 0
        return x >= 0 and _core_member(norm.core, x)
    if isinstance(e, Union):
        return any(member(c, n) for c in e.children)
    if isinstance(e, Intersect):
        return all(member(c, n) for c in e.children)
    if isinstance(e, Scale):
        return n % e.m == 0 and member(e.child, n // e.m)
    if isinstance(e, Shift):
        return n >= e.m and member(e.child, n - e.m)
    raise TypeError(f"not a set expression: {e!r}")


def core_values(core: PSetTerm, bound: int) -> set[int]:
    """All elements <= bound of a core p-set (positive integer coefficients)."""
    coeffs = core.int_coeffs()
    bases = [core.q**e for e in core.exps]
    tails = [sum(coeffs[j:]) for j in range(len(coeffs) + 1)]
    out: set[int] = set()

    def rec(j: int, acc: int):
        if j == len(coeffs):
            out.add(acc)
            return
        v = coeffs[j]
        while acc + v + tails[j + 1] <= bound:
            rec(j + 1, acc + v)
            v *= bases[j]

    rec(0, 0)
    return out


def enumerate_set(e, N: int) -> list[int]:
    """Sorted list of members in [0, N]."""
    if N < 0:
        return []
    if isinstance(e, APTerm):
        if e.b == 0:
            return [e.a] if e.a <= N else []
        return list(range(e.a, N + 1, e.b))
    if isinstance(e, PSetTerm):
        norm = normalize_pset(e)
        L, s = norm.scale, norm.shift
        if norm.core is None:
            return [s // L] if s % L == 0 and s // L <= N else []
        vals = core_values(norm.core, L * N - s)
        return sorted((v + s) // L for v in vals if (v + s) % L == 0)
    if isinstance(e, Union):
        out = []
        for x in merge(*(enumerate_set(c, N) for c in e.children)):
            if not out or out[-1] != x:
                out.append(x)
        return out
    if isinstance(e, Intersect):
        sets = [set(enumerate_set(c, N)) for c in e.children]
        return sorted(set.intersection(*sets))
    if isinstance(e, Scale):
        return [e.m * x for x in enumerate_set(e.child, N // e.m)]
    if isinstance(e, Shift):
        return [e.m + x for x in enumerate_set(e.child, N - e.m)]
    raise TypeError(f"not a set expression: {e!r}")


def identity_check(e1, e2, N: int) -> tuple[bool, int | None]:
    """Compare two expressions on [0, N]; returns (equal, first mismatch or None)."""
    a, b = set(enumerate_set(e1, N)), set(enumerate_set(e2, N))
    diff = a ^ b
    if not diff:
        return True, None
    return False, min(diff)
