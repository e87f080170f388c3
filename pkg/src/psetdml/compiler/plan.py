"""Two-pass compilation of set expressions into DML instances.

The planning pass turns an expression into a trace: a tree of JSON-ready
steps (dicts) carrying every parameter of the construction, including the
certified gadget constants.  The build pass replays a trace over the ambient
field F_{p^E}, E the lcm of the gadget extension degrees.  Replaying a stored
trace therefore reproduces the instance exactly.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from ..algebra import FieldSpec, make_field
from ..setlang.oracle import enumerate_set
from ..setlang.parser import render
from ..setlang.terms import (APTerm, Intersect, PSetTerm, Scale, Shift, Union, normalize_pset,
                             uniformize)
from ..torus.model import DMLInstance, instance_product
from ..torus.orbit import return_set
from .constructors import (ConstructionError, build_ap, divide_by, scale_up, shift_up,
                           shift_up_literal)
from .gadget import build_gadget_node, plan_gadget

TRACE_SCHEMA = "psetdml.trace/1"
DEFAULT_DIM_CAP = 20_000
DEFAULT_RECURSION_CAP = 64
DEFAULT_N_FINAL = 512
DEFAULT_AP_CHARACTERISTIC = 2
# the m = 1 split scales by c and q*c; above this we use c * B(q;1;1) when q >= 3
M1_SPLIT_MAX_SCALE = 64


@dataclass
class CompileOptions:
    n_build: int | None = None  # None: per-gadget default min(2 q'^3, cap)
    n_final: int = DEFAULT_N_FINAL
    dim_cap: int = DEFAULT_DIM_CAP
    recursion_cap: int = DEFAULT_RECURSION_CAP
    degree_cap: int | None = None
    paper_literal: bool = False
    seed: int = 0
    verify: bool = True
    characteristic: int | None = None  # for expressions without p-sets


def ap_dim(a: int, b: int) -> int:
    if b == 0:
        return a + 1
    if a == 0:
        return 1 + 2 * b
    return a + b


def _node(step: str, lemma: str | None, dim: int, children=(), **params) -> dict:
    d = {"step": step, "lemma": lemma, "dim": dim}
    d.update(params)
    if children:
        d["children"] = list(children)
    return d


class Planner:
    def __init__(self, opts: CompileOptions):
        self.opts = opts
        self.depth = 0
        self.gadget_degrees: set[int] = set()
        self.p: int | None = None
        self._pset_cache: dict = {}

    # -- generic combinators ----------------------------------------------

    def _check_dim(self, node: dict) -> dict:
        if node["dim"] > self.opts.dim_cap:
            raise ConstructionError(
                f"dimension {node['dim']} exceeds cap {self.opts.dim_cap} at step {node['step']}",
                trace=node)
        return node

    def ap(self, a: int, b: int) -> dict:
        return self._check_dim(_node("AP", "Lemma 2.2", ap_dim(a, b), a=a, b=b))

    def union(self, children: list[dict]) -> dict:
        if len(children) == 1:
            return children[0]
        return self._check_dim(_node("Union", "Lemma 2.1", sum(c["dim"] for c in children),
                                     children))

    def intersect(self, children: list[dict]) -> dict:
        if len(children) == 1:
            return children[0]
        return self._check_dim(_node("Intersect", "Lemma 2.1",
                                     sum(c["dim"] for c in children), children))

    def scale_up(self, m: int, child: dict) -> dict:
        if m == 1:
            return child
        return self._check_dim(_node("ScaleUp", "Lemma 2.3(1)",
                                     m * child["dim"] + ap_dim(0, m), [child], m=m))

    def divide_by(self, m: int, child: dict) -> dict:
        if m == 1:
            return child
        return _node("DivideBy", "Lemma 2.3(1)", child["dim"], [child], m=m)

    def shift_up(self, m: int, child: dict) -> dict:
        if m == 0:
            return child
        dim = child["dim"] * (2**m if self.opts.paper_literal else m + 1)
        return self._check_dim(_node("ShiftUp", "Lemma 2.3(2)", dim, [child], m=m,
                                     literal=self.opts.paper_literal))

    def gadget(self, q: int, coeffs) -> dict:
        coeffs = [int(c) for c in coeffs]
        if 2 * sum(coeffs) >= q:
            raise ConstructionError(f"gadget bound violated for B({q};{coeffs})")
        spec = plan_gadget(q, coeffs, self.opts.n_build, self.opts.seed)
        self._collect_degrees(spec)
        return self._check_dim(spec)

    def _collect_degrees(self, spec: dict):
        if spec["step"] == "BaseGadget":
            self.gadget_degrees.add(spec["e"])
        for ch in spec.get("children", ()):
            self._collect_degrees(ch)

    # -- expressions --------------------------------------------------------

    def plan(self, e) -> dict:
        if isinstance(e, APTerm):
            return self.ap(e.a, e.b)
        if isinstance(e, Union):
            return self.union([self.plan(c) for c in e.children])
        if isinstance(e, Intersect):
            return self.intersect([self.plan(c) for c in e.children])
        if isinstance(e, Scale):
            return self.scale_up(e.m, self.plan(e.child))
        if isinstance(e, Shift):
            return self.shift_up(e.m, self.plan(e.child))
        if isinstance(e, PSetTerm):
            return self.plan_pset_term(e)
        raise TypeError(f"not a set expression: {e!r}")

    def _set_p(self, p: int):
        if self.p is None:
            self.p = p
        elif self.p != p:
            raise ConstructionError(f"p-sets in characteristics {self.p} and {p} cannot share a field")

    def plan_pset_term(self, t: PSetTerm) -> dict:
        """L*S = s + core: build the core, shift by s, divide by L."""
        self._set_p(t.p)
        norm = normalize_pset(t)
        L, s = norm.scale, norm.shift
        if norm.core is None:
            inner = self.ap(s, 0)
            body = self.divide_by(L, inner)
            return _node("Normalize", "Lemma 2.3", body["dim"], [body], expr=render(t),
                         scale=L, shift=s, degenerate=True)
        terms = uniformize(norm.core, self.opts.paper_literal)
        K = terms[0].k
        builds = [self.plan_pset(term.q, term.int_coeffs()) for term in terms]
        uni = _node("Uniformize", "Section 2", sum(b["dim"] for b in builds),
                    [self.union(builds)], base=t.p**K, K=K,
                    terms=[render(term) for term in terms], literal=self.opts.paper_literal)
        body = self.divide_by(L, self.shift_up(s, uni))
        return _node("Normalize", "Lemma 2.3", body["dim"], [body], expr=render(t),
                     scale=L, shift=s, degenerate=False)

    # -- Theorem 3.1 --------------------------------------------------------

    def plan_pset(self, q: int, coeffs) -> dict:
        """B(q; coeffs; 1..1) for positive integer coefficients."""
        coeffs = tuple(int(c) for c in coeffs)
        key = (q, coeffs)
        if key in self._pset_cache:
            return self._pset_cache[key]
        self.depth += 1
        try:
            if self.depth > self.opts.recursion_cap:
                raise ConstructionError(f"recursion cap {self.opts.recursion_cap} exceeded at "
                                        f"B({q};{','.join(map(str, coeffs))})")
            if len(coeffs) == 1:
                body = self._plan_m1(q, coeffs[0])
            elif 2 * sum(coeffs) < q:
                body = self.gadget(q, coeffs)
            else:
                body = self._plan_split(q, coeffs)
        finally:
            self.depth -= 1
        node = _node("PSet", "Theorem 3.1", body["dim"], [body], q=q, coeffs=list(coeffs))
        self._pset_cache[key] = node
        return node

    def _plan_m1(self, q: int, c: int) -> dict:
        if 2 * c < q:
            return self.gadget(q, (c,))
        if q >= 3 and not self.opts.paper_literal and q * c > M1_SPLIT_MAX_SCALE:
            # c*q^n = s*(d*q^n) with d the largest divisor of c that the gadget accepts
            d = max(d for d in range(1, (q + 1) // 2) if c % d == 0)
            body = self.scale_up(c // d, self.gadget(q, (d,)))
            return _node("M1Scale", "Theorem 3.1", body["dim"], [body], q=q, c=c, factor=d)
        g = self.gadget(q * q, (1,))
        parts = [self.scale_up(c, g), self.scale_up(q * c, g)]
        return _node("M1Split", "Theorem 3.1", sum(x["dim"] for x in parts),
                     [self.union(parts)], q=q, c=c)

    def _plan_split(self, q: int, coeffs: tuple) -> dict:
        m = len(coeffs)
        total = sum(coeffs)
        k = 1
        while (2 * total) ** m >= q**k:
            k += 1
        Q = q**k
        subs = []
        for idx in itertools.product(range(k), repeat=m):
            imin = min(idx)
            red = tuple(i - imin for i in idx)
            rc = tuple(c * q**i for c, i in zip(coeffs, red))
            if 2 * sum(rc) < Q:
                inner = self.gadget(Q, rc)
            else:
                inner = self._plan_gap_shift(q, k, coeffs, red)
            body = self.scale_up(q**imin, inner)
            subs.append(_node("Subterm", "Theorem 3.1", body["dim"], [body], i=list(idx),
                              i_min=imin, coeffs=[c * q**i for c, i in zip(coeffs, idx)]))
        body = self.union(subs)
        return _node("UniformSplit", "Theorem 3.1", body["dim"], [body], q=q, k=k, base=Q,
                     m=m)

    def _plan_gap_shift(self, q: int, k: int, coeffs: tuple, red: tuple) -> dict:
        m = len(coeffs)
        Q = q**k
        order = sorted(range(m), key=lambda j: -red[j])
        i_s = [k] + [red[j] for j in order]  # sentinel i_0 = k
        c_s = [None] + [coeffs[j] for j in order]
        gaps = [i_s[t] - i_s[t + 1] for t in range(m)]
        r = gaps.index(max(gaps))
        if m * gaps[r] < k:
            raise ConstructionError(f"gap inequality failed: {gaps} with k={k}")
        if r == 0:
            raise ConstructionError("gap shift needed for an already eligible term")
        base = [c_s[t] * q ** (i_s[t] - i_s[r]) for t in range(1, r + 1)]
        base += [c_s[t] * q ** (k - i_s[r] + i_s[t]) for t in range(r + 1, m + 1)]
        if 2 * sum(base) >= Q:
            raise ConstructionError(f"gadget bound failed after gap shift: {base} over {Q}")
        stage = self.gadget(Q, base)
        cur = list(base)
        for t in range(r):
            after = list(cur)
            after[t] = Q * cur[t]
            parts = []
            seen = set()
            for i in range(m):
                if i == t:
                    continue
                rest = tuple(after[:i] + after[i + 1:])
                if (cur[i], rest) in seen:
                    continue
                seen.add((cur[i], rest))
                parts.append(self.shift_up(cur[i], self.plan_pset(Q, rest)))
            parts.append(self.scale_up(Q, stage))
            body = self.union(parts)
            stage = _node("Peel", "Lemma 3.3", body["dim"], [body], position=t + 1,
                          before=cur, after=after, base=Q)
            cur = after
        body = self.divide_by(q ** (k - i_s[r]), stage)
        return _node("GapShift", "Theorem 3.1", body["dim"], [body], k=k, r=r,
                     i=i_s[1:], order=[j + 1 for j in order], gaps=gaps,
                     shift_exponent=k - i_s[r])


# -- build pass ---------------------------------------------------------------

class Builder:
    def __init__(self, F: FieldSpec):
        self.F = F
        self._memo: dict = {}
        self._keys: dict[int, tuple] = {}
        self._alive: list = []

    def _key(self, node: dict) -> tuple:
        # structural key, so equal subtrees from a reloaded trace share one build
        k = self._keys.get(id(node))
        if k is None:
            params = tuple(sorted((a, repr(b)) for a, b in node.items()
                                  if a not in ("children", "dim")))
            k = (params, tuple(self._key(c) for c in node.get("children", ())))
            self._keys[id(node)] = k
            self._alive.append(node)
        return k

    def build(self, node: dict) -> DMLInstance:
        key = self._key(node)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        inst = self._build(node)
        self._memo[key] = inst
        return inst

    def _build(self, node: dict) -> DMLInstance:
        step = node["step"]
        F = self.F
        kids = node.get("children", [])
        if step == "AP":
            return build_ap(F, node["a"], node["b"])
        if step in ("BaseGadget", "GadgetSplit"):
            return build_gadget_node(node, F)
        if step in ("Union", "Intersect"):
            mode = "union" if step == "Union" else "intersection"
            inst = self.build(kids[0])
            for ch in kids[1:]:
                inst = instance_product(inst, self.build(ch), mode)
            return inst
        if step == "ScaleUp":
            return scale_up(self.build(kids[0]), node["m"])
        if step == "DivideBy":
            return divide_by(self.build(kids[0]), node["m"])
        if step == "ShiftUp":
            child = self.build(kids[0])
            if node.get("literal"):
                return shift_up_literal(child, node["m"])
            return shift_up(child, node["m"])
        if step in ("Normalize", "Uniformize", "PSet", "M1Split", "M1Scale", "UniformSplit",
                    "Subterm", "GapShift", "Peel"):
            return self.build(kids[0])
        raise ConstructionError(f"unknown trace step {step!r}")


def ambient_field(p: int, degrees) -> FieldSpec:
    E = 1
    for d in degrees:
        E = math.lcm(E, d)
    return make_field(p, E)


def trace_depth(node: dict) -> int:
    return 1 + max((trace_depth(c) for c in node.get("children", ())), default=0)


def plan(e, opts: CompileOptions | None = None) -> dict:
    """Planning pass: the full trace document for expression ``e``."""
    opts = opts or CompileOptions()
    planner = Planner(opts)
    try:
        root = planner.plan(e)
    except ConstructionError as exc:
        if exc.trace is None:
            exc.trace = {"expr": render(e)}
        raise
    p = planner.p or opts.characteristic or DEFAULT_AP_CHARACTERISTIC
    degrees = sorted(planner.gadget_degrees) or [1]
    F = ambient_field(p, degrees)
    return {
        "schema": TRACE_SCHEMA,
        "expr": render(e),
        "field": {"p": F.p, "e": F.e},
        "gadget_degrees": degrees,
        "options": {"paper_literal": opts.paper_literal, "seed": opts.seed,
                    "n_build": opts.n_build, "dim_cap": opts.dim_cap,
                    "recursion_cap": opts.recursion_cap},
        "dim": root["dim"],
        "root": root,
    }


def build_from_trace(trace: dict) -> DMLInstance:
    """Replay a trace document into an instance."""
    if trace.get("schema") != TRACE_SCHEMA:
        raise ConstructionError(f"unsupported trace schema {trace.get('schema')!r}")
    F = make_field(trace["field"]["p"], trace["field"]["e"])
    inst = Builder(F).build(trace["root"])
    if inst.dim != trace["dim"]:
        raise ConstructionError(f"replayed dimension {inst.dim} differs from planned {trace['dim']}")
    return inst.with_trace(trace["root"])


def compile_expr(e, opts: CompileOptions | None = None) -> tuple[DMLInstance, dict]:
    """Compile ``e`` to (instance, trace); verifies on [0, n_final] unless disabled."""
    opts = opts or CompileOptions()
    trace = plan(e, opts)
    inst = build_from_trace(trace)
    if opts.verify and opts.n_final >= 0:
        got = set(return_set(inst, opts.n_final, opts.degree_cap))
        want = set(enumerate_set(e, opts.n_final))
        bad = sorted(got ^ want)
        trace["verified"] = {"n": opts.n_final, "verdict": "match" if not bad else "mismatch",
                             "witnesses": bad[:32]}
        if bad:
            raise ConstructionError(f"compiled instance disagrees with the oracle at n={bad[:8]}",
                                    trace=trace)
    return inst, trace
