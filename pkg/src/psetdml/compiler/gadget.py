"""Base gadget for B(q'; c_1..c_m; 1..1) with sum(c) < q'/2.

Coordinates y_l = (1 + kappa_l t)^n for M + 1 distinct nonzero constants and
z = t^n.  Over F_{q'}, (1 + kappa t)^n = sum_s kappa^s F_s(t) where F_s
collects the monomials whose base-q' digit sum is s, so the inverse
Vandermonde forms E_s recover F_s whenever the digit sum of n is at most M.
The variety asks for E_0 = 1, E_M = z (digit sum exactly M), the hyperplane
sum lambda_l y_l + mu z = beta, and the equations of the fusion locus of the
coefficient multiset in (E_1..E_{M-1}, z).  Each gadget is certified against
the oracle before use; certification over F_{q'} carries over to any field
containing it.
"""

from __future__ import annotations

import copy
import itertools
from functools import lru_cache

from ..algebra import (FieldSpec, RationalFunc, SparsePoly, inverse, make_field, nullspace,
                       prime_power, solve)
from ..setlang.oracle import core_values
from ..setlang.terms import pset
from ..torus.model import DMLInstance, Equation, MonomialEndo, Variety, form_var, t_rf
from ..torus.orbit import return_set
from .constructors import ConstructionError

N_BUILD_CAP = 65536
MAX_CONSTANT_ATTEMPTS = 4


def default_n_build(q: int) -> int:
    return min(2 * q**3, N_BUILD_CAP)


# -- linear algebra of the hyperplane ----------------------------------------

def solve_gadget_lambda(F: FieldSpec, constants) -> tuple[list[int], int, int]:
    """(lambda, mu, beta) for distinct nonzero constants kappa_1..kappa_M.

    lambda is orthogonal to kappa^s for 1 <= s < M, scaled so lambda_1 = 1;
    beta = sum lambda_l and mu = -sum lambda_l kappa_l^M.  Both are nonzero
    for any choice of constants (they are, up to the scaling, the reciprocal
    of prod kappa_l and 1).
    """
    M = len(constants)
    if M < 1:
        raise ValueError("need at least one constant")
    if len(set(constants)) != M or 0 in constants:
        raise ValueError("constants must be distinct and nonzero")
    A = [[F.pow(k, s) for k in constants] for s in range(M)]
    lam = solve(F, A, [1] + [0] * (M - 1))
    norm = F.inv(lam[0])
    lam = [F.mul(x, norm) for x in lam]
    beta = norm
    top = 0
    for x, k in zip(lam, constants):
        top = F.add(top, F.mul(x, F.pow(k, M)))
    return lam, F.neg(top), beta


def expansion_forms(F: FieldSpec, constants) -> list[list[int]]:
    """Rows of the inverse Vandermonde matrix: E_s = sum_l W[s][l] y_l."""
    V = [[F.pow(k, s) for s in range(len(constants))] for k in constants]
    return inverse(F, V)


# -- fusion locus relations ----------------------------------------------------

def _lucas_support(c: int, p: int) -> list[int]:
    """s in [0, c] with binom(c, s) nonzero mod p (base-p digits of s bounded by c's)."""
    out = [0]
    place = 1
    while c:
        c, d = divmod(c, p)
        out = [x + place * k for x in out for k in range(d + 1)]
        place *= p
    return sorted(out)


def live_symbols(p: int, coeffs) -> list[int]:
    """Indices s in 1..M for which E_s is not identically zero on the fusion locus."""
    sums = {0}
    for c in coeffs:
        sums = {x + y for x in sums for y in _lucas_support(int(c), p)}
    return sorted(sums - {0})


def _locus_polys(p: int, coeffs) -> list[dict]:
    """E_0..E_M as polynomials in w_1..w_m: dicts exponent-tuple -> coefficient mod p."""
    from math import comb

    m = len(coeffs)
    polys: dict[int, dict] = {0: {(0,) * m: 1}}
    for j, c in enumerate(coeffs):
        nxt: dict[int, dict] = {}
        for s, poly in polys.items():
            for k in _lucas_support(int(c), p):
                b = comb(int(c), k) % p
                tgt = nxt.setdefault(s + k, {})
                for e, v in poly.items():
                    e2 = e[:j] + (e[j] + k,) + e[j + 1:]
                    tgt[e2] = (tgt.get(e2, 0) + v * b) % p
        polys = nxt
    M = sum(int(c) for c in coeffs)
    return [{e: v for e, v in polys.get(s, {}).items() if v} for s in range(M + 1)]


def _pmul(a: dict, b: dict, p: int) -> dict:
    out: dict = {}
    for e1, v1 in a.items():
        for e2, v2 in b.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            out[e] = (out.get(e, 0) + v1 * v2) % p
    return {e: v for e, v in out.items() if v}


def _weighted_monomials(weight: int, symbols) -> list[tuple[tuple[int, int], ...]]:
    """Monomials in the given symbols (symbol s has weight s) of exact total weight."""
    syms = sorted(symbols, reverse=True)
    out = []

    def rec(rem, start, acc):
        if rem == 0:
            out.append(tuple(sorted(acc.items())))
            return
        for i in range(start, len(syms)):
            s = syms[i]
            if s > rem:
                continue
            acc[s] = acc.get(s, 0) + 1
            rec(rem - s, i, acc)
            acc[s] -= 1
            if not acc[s]:
                del acc[s]

    rec(weight, 0, {})
    return out


def _divides(a, b) -> bool:
    db = dict(b)
    return all(db.get(s, 0) >= e for s, e in a)


def _mono_order_key(mono, M: int):
    # lex with larger symbols more significant; all candidates share one weight
    d = dict(mono)
    return tuple(d.get(s, 0) for s in range(M, 0, -1))


@lru_cache(maxsize=None)
def _relations_upto(p: int, coeffs: tuple, top: int) -> tuple:
    """Truncated Groebner basis (weights <= top) of the fusion-locus ideal.

    Each monomial in the live symbols is expanded exactly as a polynomial in
    the w's; at each weight the kernel of that linear map is put in echelon
    form with respect to a monomial order, and a kernel vector is kept only if
    its leading monomial is not divisible by an earlier leading monomial.
    """
    M = sum(coeffs)
    Fp = make_field(p, 1)
    live = live_symbols(p, coeffs)
    dead = [s for s in range(1, M + 1) if s not in live]
    rels = [(((s, 1),), 1) for s in dead]
    rels = [tuple([r]) for r in rels]
    leads = []
    E = _locus_polys(p, coeffs)
    cache: dict = {(): {(0,) * len(coeffs): 1}}

    def expand(mono):
        v = cache.get(mono)
        if v is None:
            d = dict(mono)
            s = max(d)
            d[s] -= 1
            if not d[s]:
                del d[s]
            v = cache[mono] = _pmul(expand(tuple(sorted(d.items()))), E[s], p)
        return v

    for wt in range(1, top + 1):
        monos = _weighted_monomials(wt, live)
        monos = [m for m in monos if not any(_divides(lm, m) for lm in leads)]
        if len(monos) < 2:
            continue
        monos.sort(key=lambda m: _mono_order_key(m, M))
        polys = [expand(m) for m in monos]
        wexps = sorted({e for poly in polys for e in poly})
        row_of = {e: i for i, e in enumerate(wexps)}
        A = [[0] * len(monos) for _ in wexps]
        for c, poly in enumerate(polys):
            for e, v in poly.items():
                A[row_of[e]][c] = v
        for vec in nullspace(Fp, A, len(monos)):
            lead = max(i for i, x in enumerate(vec) if x)
            lm = monos[lead]
            if any(_divides(l, lm) for l in leads):
                continue
            inv = Fp.inv(vec[lead])
            rel = tuple((monos[i], Fp.mul(x, inv)) for i, x in enumerate(vec) if x)
            rels.append(rel)
            leads.append(lm)
    return tuple(rels)


def synthesize_relations(p: int, coeffs, seed: int = 0, max_weight: int | None = None):
    """Equations of the fusion locus in E_1..E_{M-1}, Z up to a weighted degree.

    The default weight bound is M + 2 (symbol s has weight s, symbol M is z).
    Returns a list of relations, each a tuple of (monomial, coefficient in F_p):
    the linear equations E_s = 0 for symbols that vanish identically, then a
    truncated Groebner basis of the remaining ideal.  The computation is exact;
    ``seed`` is accepted for interface stability and does not affect the result.
    """
    coeffs = tuple(int(c) for c in coeffs)
    M = sum(coeffs)
    if all(c == 1 for c in coeffs) or M < 2:
        return []
    top = M + 2 if max_weight is None else max_weight
    return list(_relations_upto(p, coeffs, top))


def format_relation(rel, M: int, p: int) -> str:
    parts = []
    for mono, c in rel:
        fac = []
        for s, e in mono:
            name = "Z" if s == M else f"E{s}"
            fac.append(name + (f"^{e}" if e > 1 else ""))
        body = "*".join(fac)
        parts.append(body if c == 1 else f"{c}*{body}")
    return " + ".join(parts) + f"  (mod {p})"


# -- instances --------------------------------------------------------------

def _rf(F, c):
    return RationalFunc.const(F, c)


def gadget_instance(spec: dict, F: FieldSpec) -> DMLInstance:
    """Instance over ``F`` for a gadget description (see :func:`plan_gadget`)."""
    Fq = make_field(spec["p"], spec["e"])
    emb = Fq.embedding_into(F)
    kap = [emb[c] for c in spec["constants"]]
    M = sum(spec["coeffs"])
    mutation = spec.get("mutation")
    one = RationalFunc.one(F)
    scalars = [RationalFunc.poly(SparsePoly.linear(F, 1, k)) for k in kap]
    scalars.append(one if mutation == "z_one" else t_rf(F))
    endo = MonomialEndo.diagonal(F, scalars)
    z = len(kap)
    hyper_consts = kap[1:] if len(kap) == M + 1 else kap
    lam = [emb[x] for x in spec["lambda"]]
    terms = {((z - len(hyper_consts) + l, 1),): _rf(F, x) for l, x in enumerate(lam)}
    terms[((z, 1),)] = _rf(F, emb[spec["mu"]])
    terms[()] = _rf(F, F.neg(emb[spec["beta"]]))
    hyper = Equation.build(terms)
    if mutation == "hyperplane_only":
        return DMLInstance(F, endo, (one,) * (z + 1), Variety(((hyper,),)))
    W = expansion_forms(F, kap)
    forms = tuple(tuple((l, _rf(F, w)) for l, w in enumerate(row) if w) for row in W)
    atom = [
        Equation.build({((form_var(0), 1),): one, (): -one}),
        Equation.build({((form_var(M), 1),): one, ((z, 1),): -one}),
        hyper,
    ]
    for rel in spec["relations"]:
        rterms = {}
        for mono, c in rel:
            vm = tuple((z if s == M else form_var(s), e) for s, e in mono)
            rterms[vm] = _rf(F, c % F.p)
        atom.append(Equation.build(rterms))
    return DMLInstance(F, endo, (one,) * (z + 1), Variety((tuple(atom),), forms))


def _constant_order(Fq: FieldSpec) -> list[int]:
    """Nonzero elements, those generating F_{q'} over F_p first."""
    elems = range(1, Fq.order)
    gens = [a for a in elems if Fq.subfield_degree(a) == Fq.e]
    rest = [a for a in elems if Fq.subfield_degree(a) != Fq.e]
    return gens + rest


def gadget_target(q: int, coeffs, N: int) -> list[int]:
    return sorted(core_values(pset(q, coeffs, (1,) * len(coeffs)), N))


def certify(spec: dict, N: int) -> list[int]:
    """Mismatch witnesses of the gadget on [0, N] over its own field."""
    Fq = make_field(spec["p"], spec["e"])
    got = set(return_set(gadget_instance(spec, Fq), N))
    want = set(gadget_target(spec["q"], spec["coeffs"], N))
    return sorted(got ^ want)


def check_eligible(q: int, coeffs) -> None:
    if any(int(c) != c or c <= 0 for c in coeffs):
        raise ValueError("gadget coefficients must be positive integers")
    if 2 * sum(coeffs) >= q:
        raise ValueError(f"gadget bound violated: 2*{sum(coeffs)} >= {q}")


def make_spec(q: int, coeffs, constants, seed: int = 0, mutation: str | None = None,
              weight: int | None = None) -> dict:
    p, e = prime_power(q)
    Fq = make_field(p, e)
    M = sum(coeffs)
    hyper = list(constants[1:]) if len(constants) == M + 1 else list(constants)
    lam, mu, beta = solve_gadget_lambda(Fq, hyper)
    rels = [] if mutation == "hyperplane_only" else synthesize_relations(p, coeffs, seed, weight)
    return {
        "step": "BaseGadget", "lemma": "Corollary 3.2",
        "q": q, "p": p, "e": e, "coeffs": list(coeffs), "constants": list(constants),
        "lambda": lam, "mu": mu, "beta": beta,
        "relation_weight": weight if weight is not None else M + 2,
        "relations": [[[list(map(list, mono)), c] for mono, c in rel] for rel in rels],
        "relations_text": [format_relation(r, M, p) for r in rels],
        "dim": len(constants) + 1,
        "mutation": mutation,
    }


def _normalize_relations(spec: dict) -> dict:
    spec = dict(spec)
    spec["relations"] = [tuple((tuple(tuple(x) for x in mono), c) for mono, c in rel)
                         for rel in spec["relations"]]
    return spec


def _digit_sum(n: int, q: int) -> int:
    s = 0
    while n:
        n, r = divmod(n, q)
        s += r
    return s


@lru_cache(maxsize=None)
def _plan_gadget_cached(q: int, coeffs: tuple, n_build: int, seed: int, allow_split: bool):
    pe = prime_power(q)
    if pe is None:
        raise ValueError(f"{q} is not a prime power")
    check_eligible(q, coeffs)
    Fq = make_field(*pe)
    M = sum(coeffs)
    order = _constant_order(Fq)
    if len(order) < M + 1:
        raise ConstructionError(f"F_{q} has too few nonzero constants for M={M}")
    grouped = any(c > 1 for c in coeffs)
    attempts = []
    for consts in itertools.islice(itertools.combinations(order, M + 1), MAX_CONSTANT_ATTEMPTS):
        known = -1
        for weight in range(M + 2, 2 * M + 3 if grouped else M + 3):
            nrel = len(synthesize_relations(pe[0], coeffs, seed, weight))
            if nrel == known:
                continue
            known = nrel
            spec = make_spec(q, coeffs, consts, seed, weight=weight)
            bad = certify(_normalize_relations(spec), n_build)
            attempts.append({"constants": list(consts), "weight": weight, "witnesses": bad[:8]})
            if not bad:
                spec["certified_n"] = n_build
                spec["attempts"] = attempts
                return spec
            # relations only separate digit patterns of digit sum M
            if any(_digit_sum(n, q) != M for n in bad):
                break
    if not allow_split:
        raise ConstructionError(
            f"no certified gadget for B({q};{','.join(map(str, coeffs))}) on [0,{n_build}]; "
            f"attempts: {attempts}")
    # base enlargement: B(q; c) = union over i in {0,1}^m of B(q^2; c_j q^{i_j})
    children = []
    for idx in itertools.product((0, 1), repeat=len(coeffs)):
        sub = tuple(c * q**i for c, i in zip(coeffs, idx))
        children.append(_plan_gadget_cached(q * q, sub, n_build, seed, False))
    return {"step": "GadgetSplit", "lemma": "Theorem 3.1", "q": q, "coeffs": list(coeffs),
            "attempts": attempts, "children": children,
            "dim": sum(c["dim"] for c in children)}


def plan_gadget(q: int, coeffs, n_build: int | None = None, seed: int = 0) -> dict:
    """Certified gadget description (JSON-ready) or a base-enlargement split.

    Constant subsets are tried in a fixed order (combinations of the preference
    order of :func:`_constant_order`); if none certifies on [0, n_build], the
    set is split over base q'^2.  Raises ConstructionError if that fails too.
    """
    coeffs = tuple(int(c) for c in coeffs)
    if n_build is None:
        n_build = default_n_build(q)
    return copy.deepcopy(_plan_gadget_cached(q, coeffs, n_build, seed, True))


def base_gadget(q: int, coeffs, F: FieldSpec | None = None, n_build: int | None = None,
                seed: int = 0) -> DMLInstance:
    """Certified instance for B(q; coeffs; 1..1), over F_{q} unless ``F`` is given."""
    spec = plan_gadget(q, coeffs, n_build, seed)
    if F is None:
        p, e = prime_power(q)
        F = make_field(p, e)
    return build_gadget_node(spec, F)


def build_gadget_node(spec: dict, F: FieldSpec) -> DMLInstance:
    from ..torus.model import instance_product

    if spec["step"] == "GadgetSplit":
        inst = None
        for ch in spec["children"]:
            sub = build_gadget_node(ch, F)
            inst = sub if inst is None else instance_product(inst, sub, "union")
        return inst
    return gadget_instance(_normalize_relations(spec), F)
