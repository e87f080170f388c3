"""Exact orbit evaluation and subvariety membership."""

from __future__ import annotations

from typing import Iterator

import numpy as np

from ..algebra import RationalFunc, SparsePoly, linear_combination
from .model import DMLInstance, Equation, TorusError, Variety, endo_pow, form_index


class DegreeCapExceeded(TorusError):
    """An orbit coordinate grew past the configured degree cap; lower N or raise the cap."""


def default_degree_cap(I: DMLInstance, N: int) -> int:
    top = max((s.degree() for s in I.endo.scalars), default=0)
    top = max([top] + [x.degree() for x in I.start])
    return 4 * (N + 1) * max(1, top)


def _power(x: RationalFunc, e: int, cache=None) -> RationalFunc:
    if e == 1:
        return x
    if cache is None:
        return x**e
    key = (id(x), e)
    v = cache.get(key)
    if v is None:
        v = cache[key] = x**e
    return v


def form_values(V: Variety, point, needed=None, F=None) -> dict[int, RationalFunc]:
    """Values of the variety's linear forms; ``point`` may be a tuple or a dict."""
    if F is None:
        F = point[0].field
    out = {}
    for f, form in enumerate(V.forms):
        if needed is not None and f not in needed:
            continue
        out[f] = _form_value(form, point, F)
    return out


def _const_of(c: RationalFunc):
    """Encoded constant if c is a constant polynomial, else None."""
    if not c.is_poly():
        return None
    terms = c.num.raw_terms
    if not terms:
        return 0
    return terms[0][1] if len(terms) == 1 and terms[0][0] == 0 else None


def _form_value(form, point, F) -> RationalFunc:
    pairs = []
    for v, c in form:
        k = _const_of(c)
        x = point[v]
        if k is None or not x.is_poly():
            break
        pairs.append((k, x.num))
    else:
        return RationalFunc.poly(linear_combination(F, pairs))
    acc = RationalFunc.zero(F)
    for v, c in form:
        acc = acc + c * point[v]
    return acc


def eval_equation(eq: Equation, point, forms: dict[int, RationalFunc], F=None) -> RationalFunc:
    if F is None:
        F = point[0].field
    acc = RationalFunc.zero(F)
    for mono, c in eq.terms:
        term = c
        for v, e in mono:
            x = point[v] if v >= 0 else forms[form_index(v)]
            if x.is_zero():
                term = x
                break
            term = term * _power(x, e)
        acc = acc + term
    return acc


def atom_holds(atom, point, forms, F=None) -> bool:
    return all(eval_equation(eq, point, forms, F).is_zero() for eq in atom)


def variety_member(V: Variety, point) -> bool:
    forms = form_values(V, point)
    return any(atom_holds(atom, point, forms) for atom in V.atoms)


def orbit_iter(I: DMLInstance, N: int, degree_cap: int | None = None) -> Iterator[tuple]:
    """Yield Phi^n(alpha) for n = 0..N by repeated application."""
    cap = degree_cap if degree_cap is not None else default_degree_cap(I, N)
    P = I.start
    for n in range(N + 1):
        if n:
            P = I.endo.apply(P)
            if max(x.degree() for x in P) > cap:
                raise DegreeCapExceeded(f"degree exceeds cap {cap} at n={n}")
        yield P


def orbit_eval(I: DMLInstance, n: int) -> tuple:
    """Phi^n(alpha); diagonal endomorphisms use gamma_i^n * alpha_i directly."""
    if n == 0:
        return I.start
    if I.endo.is_diagonal():
        return tuple(a * (g**n) if not g.is_one() else a for a, g in zip(I.start, I.endo.scalars))
    return endo_pow(I.endo, n).apply(I.start)


def return_set_exact(I: DMLInstance, N: int, degree_cap: int | None = None) -> list[int]:
    """Reference path: orbit_iter + variety_member for every n."""
    return [n for n, P in enumerate(orbit_iter(I, N, degree_cap)) if variety_member(I.variety, P)]


# -- symbolic exponent tracking ----------------------------------------------

class ExponentTracker:
    """Every orbit coordinate is a product of powers of the distinct scalars and
    start coordinates ("factors").  Tracking the integer exponent matrix is a
    linear recurrence E_{n+1} = G + A E_n and gives exact points on demand."""

    def __init__(self, I: DMLInstance):
        import scipy.sparse as sp

        self.instance = I
        factors: list[RationalFunc] = []
        index: dict[RationalFunc, int] = {}

        def fid(x: RationalFunc) -> int | None:
            if x.is_one():
                return None
            if x not in index:
                index[x] = len(factors)
                factors.append(x)
            return index[x]

        k = I.dim
        start_ids = [fid(x) for x in I.start]
        scalar_ids = [fid(s) for s in I.endo.scalars]
        self.factors = factors
        nf = max(len(factors), 1)
        self.E0 = np.zeros((k, nf), dtype=np.int64)
        self.G = np.zeros((k, nf), dtype=np.int64)
        for i, f in enumerate(start_ids):
            if f is not None:
                self.E0[i, f] = 1
        for i, f in enumerate(scalar_ids):
            if f is not None:
                self.G[i, f] = 1
        r, c, d = [], [], []
        for i, row in enumerate(I.endo.rows):
            for j, a in row:
                r.append(i)
                c.append(j)
                d.append(a)
        self.A = sp.csr_matrix((np.array(d, dtype=np.int64), (r, c)), shape=(k, k))
        self.diagonal = I.endo.is_diagonal()
        self._pow_cache: dict = {}

    def states(self, ns):
        """Yield (n, E_n) for the sorted integers ``ns``."""
        ns = sorted(set(ns))
        if not ns:
            return
        if self.diagonal:
            for n in ns:
                yield n, self.E0 + n * self.G
            return
        E = self.E0
        cur = 0
        for n in ns:
            while cur < n:
                E = self.A @ E + self.G
                cur += 1
                if E.size and E.max() > 2**60:
                    raise DegreeCapExceeded("orbit exponents overflow")
            yield n, E

    def value(self, E_row, degree_cap: int | None = None) -> RationalFunc:
        F = self.instance.field
        acc = RationalFunc.one(F)
        for f in np.nonzero(E_row)[0]:
            e = int(E_row[f])
            key = (int(f), e)
            v = self._pow_cache.get(key)
            if v is None:
                base = self.factors[f]
                if degree_cap is not None and base.degree() * e > degree_cap:
                    raise DegreeCapExceeded(f"degree {base.degree() * e} exceeds cap {degree_cap}")
                v = self._pow_cache[key] = base**e
            acc = acc * v
        return acc

    def point(self, E, coords=None, degree_cap=None) -> dict[int, RationalFunc]:
        coords = range(E.shape[0]) if coords is None else coords
        return {i: self.value(E[i], degree_cap) for i in coords}


def return_set(I: DMLInstance, N: int, degree_cap: int | None = None,
               method: str = "auto") -> list[int]:
    """Exact {n <= N : Phi^n(alpha) in V}.

    ``auto`` screens every n with :class:`ShadowEvaluator` and confirms the
    survivors symbolically; ``exact`` runs orbit_iter + variety_member.
    """
    if N < 0:
        return []
    from .shadow import shadow_available, shadow_candidates

    if method == "exact" or (method == "auto" and not shadow_available(I.field)):
        return return_set_exact(I, N, degree_cap)
    cap = degree_cap if degree_cap is not None else default_degree_cap(I, N)
    cands = shadow_candidates(I, N)
    return confirm_candidates(I, cands, cap)


def confirm_candidates(I: DMLInstance, cands: dict[int, list[int]], cap: int) -> list[int]:
    V, F = I.variety, I.field
    tracker = ExponentTracker(I)
    hits = []
    for n, E in tracker.states(cands):
        atoms = [V.atoms[a] for a in cands[n]]
        fneed = {form_index(v) for atom in atoms for eq in atom for v in eq.variables() if v < 0}
        coords = {v for atom in atoms for eq in atom for v in eq.variables() if v >= 0}
        coords |= {v for f in fneed for v, _ in V.forms[f]}
        point = tracker.point(E, sorted(coords), cap)
        forms = form_values(V, point, fneed, F)
        if any(atom_holds(atom, point, forms, F) for atom in atoms):
            hits.append(n)
    return hits
