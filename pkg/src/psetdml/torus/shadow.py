"""Fast exclusion filter for return-set computation.

Evaluating t at a point t0 of a finite field G containing the constant field is
a ring homomorphism, so an equation whose image at t0 is nonzero is certainly
nonzero in F(t).  All orbit coordinates are nonzero, so they are tracked by
their discrete logs in G and the monomial map acts linearly on those logs.  Only
indices that survive at every sample point are handed to the exact check; the
filter never accepts anything by itself.
"""

from __future__ import annotations

import math
import random

import numpy as np

from ..algebra.field import TABLE_LIMIT, FieldSpec, make_field
from .model import DMLInstance, form_index

MIN_SHADOW_ORDER = 1 << 10
EXTRA_SHADOW_MAX_ORDER = 1 << 20


def shadow_field_for(F: FieldSpec) -> FieldSpec | None:
    """Smallest tabulated F_{p^e'} with e | e', e' >= 2 and at least MIN_SHADOW_ORDER elements."""
    e = F.e
    while e < 2 or F.p**e < MIN_SHADOW_ORDER:
        e += F.e
    if F.p**e > TABLE_LIMIT:
        return None
    return make_field(F.p, e)


def shadow_fields_for(F: FieldSpec, N: int) -> list[FieldSpec]:
    """Evaluation fields whose multiplicative orders have lcm > N when possible.

    Values at a point of G are periodic in n with period dividing |G| - 1, so a
    single small field lets every residue class of a true member through.
    """
    first = shadow_field_for(F)
    if first is None:
        return []
    out = [first]
    period = first.order - 1
    e = first.e
    while period <= N:
        e += F.e
        if F.p**e > EXTRA_SHADOW_MAX_ORDER:
            break
        G = make_field(F.p, e)
        out.append(G)
        period = math.lcm(period, G.order - 1)
    return out


class ShadowEvaluator:
    def __init__(self, I: DMLInstance, npoints: int | None = None, seed: int = 0x5EED,
                 G: FieldSpec | None = None):
        F = I.field
        if G is None:
            G = shadow_field_for(F)
        if G is None:
            raise ValueError(f"no tabulated evaluation field for {F!r}")
        self.instance = I
        self.G = G
        self.q1 = G.order - 1
        self.embed = F.embedding_into(G)
        self.exp = np.asarray(G._exp, dtype=np.int64)
        self.zech = np.asarray(G._zech, dtype=np.int64)
        if npoints is None:
            npoints = 3 if G.order < (1 << 14) else 2
        self.points = self._pick_points(npoints, seed)
        V = I.variety
        self.ref = sorted({v for atom in V.atoms for eq in atom for v in eq.variables() if v >= 0}
                          | {v for f in V.forms for v, _ in f})
        self.ref_pos = {v: r for r, v in enumerate(self.ref)}

    # -- setup -------------------------------------------------------------

    def _ev(self, x, t0) -> int:
        return x.evaluate(t0, self.G, self.embed)

    def _pick_points(self, npoints, seed):
        I, G = self.instance, self.G
        rng = random.Random(seed)
        rfs = list(I.start) + list(I.endo.scalars)
        coeffs = [c for atom in I.variety.atoms for eq in atom for _, c in eq.terms]
        coeffs += [c for f in I.variety.forms for _, c in f]
        nonzero_needed = list({x: None for x in rfs})
        dens = list({c.den: None for c in coeffs if not c.den.is_one()})
        pts = []
        tries = 0
        while len(pts) < npoints:
            tries += 1
            if tries > 10_000:
                raise ValueError("could not find usable evaluation points")
            t0 = rng.randrange(2, G.order)
            if t0 in pts:
                continue
            if tries < 5000 and G.subfield_degree(t0) != G.e:
                continue
            try:
                if any(self._ev(x, t0) == 0 for x in nonzero_needed):
                    continue
            except ZeroDivisionError:
                continue
            if any(d.evaluate(t0, G, self.embed) == 0 for d in dens):
                continue
            pts.append(t0)
        return pts

    def _log(self, x, t0) -> int:
        v = self._ev(x, t0)
        return -1 if v == 0 else self.G._log[v]

    # -- vectorised log-domain arithmetic -----------------------------------

    def _zadd(self, a, b):
        q1 = self.q1
        out = np.where(a < 0, b, a)
        both = (a >= 0) & (b >= 0)
        if both.any():
            aa, bb = a[both], b[both]
            z = self.zech[(bb - aa) % q1]
            out[both] = np.where(z < 0, -1, (aa + z) % q1)
        return out

    def log_states(self, N: int) -> np.ndarray:
        """Logs of the referenced coordinates, shape (N + 1, len(ref), npoints)."""
        I, q1 = self.instance, self.q1
        P = len(self.points)
        L0 = np.array([[self._log(x, t0) for t0 in self.points] for x in I.start], dtype=np.int64)
        g = np.array([[self._log(s, t0) for t0 in self.points] for s in I.endo.scalars],
                     dtype=np.int64)
        ref = np.asarray(self.ref, dtype=np.int64)
        out = np.empty((N + 1, len(ref), P), dtype=np.int64)
        if I.endo.is_diagonal():
            n = np.arange(N + 1, dtype=np.int64)[:, None, None]
            out[:] = (L0[ref][None] + (n % q1) * g[ref][None]) % q1
            return out
        import scipy.sparse as sp

        r, c, d = [], [], []
        for i, row in enumerate(I.endo.rows):
            for j, a in row:
                r.append(i)
                c.append(j)
                d.append(a % q1)
        k = I.dim
        A = sp.csr_matrix((np.array(d, dtype=np.int64), (r, c)), shape=(k, k))
        L = L0
        out[0] = L[ref]
        for n in range(1, N + 1):
            L = (A @ L + g) % q1
            out[n] = L[ref]
        return out

    def _coef_logs(self, c):
        return np.array([self._log(c, t0) for t0 in self.points], dtype=np.int64)

    def candidates(self, N: int) -> dict[int, list[int]]:
        """Map n -> atoms not excluded at n (all equations vanish at every point)."""
        V = self.instance.variety
        q1 = self.q1
        states = self.log_states(N)
        coef_cache: dict = {}

        def clog(c):
            key = id(c)
            if key not in coef_cache:
                coef_cache[key] = (c, self._coef_logs(c))
            return coef_cache[key][1]

        def form_vals(f, idx):
            acc = np.full((len(idx), len(self.points)), -1, dtype=np.int64)
            for v, c in V.forms[f]:
                cl = clog(c)[None, :]
                x = states[idx, self.ref_pos[v], :]
                t = np.where(cl < 0, -1, (cl + x) % q1)
                acc = self._zadd(acc, t)
            return acc

        def eq_vals(eq, idx, fcache):
            acc = np.full((len(idx), len(self.points)), -1, dtype=np.int64)
            for mono, c in eq.terms:
                cl = clog(c)
                t = np.broadcast_to(cl, acc.shape).copy()
                zero = t < 0
                for v, e in mono:
                    if v >= 0:
                        x = states[idx, self.ref_pos[v], :]
                    else:
                        f = form_index(v)
                        if f not in fcache:
                            fcache[f] = form_vals(f, idx)
                        x = fcache[f]
                    zero |= x < 0
                    t = (t + (e % q1) * x) % q1
                t[zero] = -1
                acc = self._zadd(acc, t)
            return acc

        out: dict[int, list[int]] = {}
        all_idx = np.arange(N + 1)
        for ai, atom in enumerate(V.atoms):
            idx = all_idx
            # cheapest equations first: no forms, then low degree
            order = sorted(atom, key=lambda eq: (any(v < 0 for v in eq.variables()),
                                                 eq.degree(), len(eq.terms)))
            for eq in order:
                fcache: dict = {}
                vals = eq_vals(eq, idx, fcache)
                idx = idx[(vals < 0).all(axis=1)]
                if not len(idx):
                    break
            for n in idx.tolist():
                out.setdefault(n, []).append(ai)
        return out


def shadow_available(F: FieldSpec) -> bool:
    return shadow_field_for(F) is not None


def shadow_candidates(I: DMLInstance, N: int, seed: int = 0x5EED) -> dict[int, list[int]]:
    """Intersection of the candidate maps over :func:`shadow_fields_for`."""
    out = None
    for G in shadow_fields_for(I.field, N):
        cand = ShadowEvaluator(I, seed=seed, G=G).candidates(N)
        if out is None:
            out = cand
        else:
            out = {n: [a for a in atoms if a in set(cand[n])]
                   for n, atoms in out.items() if n in cand}
            out = {n: atoms for n, atoms in out.items() if atoms}
    return out or {}

