"""Randomized constructor contracts with shrinking on failure.

Each contract draws integer parameters from a seeded RNG and checks one
identity on [0, N].  A failing case is shrunk by repeatedly halving its
parameters while the failure persists.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from typing import Callable

from ..algebra import make_field
from ..compiler import (CompileOptions, build_ap, build_from_trace, divide_by, intersect, plan,
                        scale_up, shift_up, union)
from ..compiler.gadget import _normalize_relations, gadget_instance, plan_gadget
from ..setlang import parse, pset
from ..setlang.oracle import core_values
from ..torus import (dumps, endo_pow, instance_to_dict, orbit_eval, return_set, variety_member)
from ..torus.orbit import eval_equation, form_values

CONTRACT_N = 128
MUTATIONS = ("scale_no_cut", "z_one")


def _ap(a: int, b: int, N: int) -> set[int]:
    if b == 0:
        return {a} if a <= N else set()
    return set(range(a, N + 1, b))


def _diff(got, want) -> str | None:
    got, want = set(got), set(want)
    if got == want:
        return None
    bad = sorted(got ^ want)
    return f"witnesses {bad[:8]}"


@dataclass
class Contract:
    name: str
    gen: Callable[[random.Random], dict]
    check: Callable[..., str | None]
    cases: int
    floors: dict


class Suite:
    def __init__(self, mutations=()):
        unknown = set(mutations) - set(MUTATIONS)
        if unknown:
            raise ValueError(f"unknown mutations {sorted(unknown)}")
        self.mutations = frozenset(mutations)
        self.N = CONTRACT_N

    def field(self, p):
        return make_field(p, 1)

    # -- set-level constructors ----------------------------------------------

    def c_ap(self, p, a, b):
        return _diff(return_set(build_ap(self.field(p), a, b), self.N), _ap(a, b, self.N))

    def c_scale(self, p, a, b, m):
        I = scale_up(build_ap(self.field(p), a, b), m, cut="scale_no_cut" not in self.mutations)
        want = {m * x for x in _ap(a, b, self.N)}
        return _diff(return_set(I, self.N), {x for x in want if x <= self.N})

    def c_divide(self, p, a, b, m):
        I = divide_by(scale_up(build_ap(self.field(p), a, b), m), m)
        return _diff(return_set(I, self.N), _ap(a, b, self.N))

    def c_shift(self, p, a, b, m):
        I = shift_up(build_ap(self.field(p), a, b), m)
        want = {m + x for x in _ap(a, b, self.N)}
        return _diff(return_set(I, self.N), {x for x in want if x <= self.N})

    def c_union(self, p, a1, b1, a2, b2):
        F = self.field(p)
        I = union(build_ap(F, a1, b1), build_ap(F, a2, b2))
        return _diff(return_set(I, self.N), _ap(a1, b1, self.N) | _ap(a2, b2, self.N))

    def c_intersect(self, p, a1, b1, a2, b2):
        F = self.field(p)
        I = intersect(build_ap(F, a1, b1), build_ap(F, a2, b2))
        return _diff(return_set(I, self.N), _ap(a1, b1, self.N) & _ap(a2, b2, self.N))

    # -- torus laws ------------------------------------------------------------

    def _mixed(self, p, a, b, m):
        F = self.field(p)
        return shift_up(scale_up(build_ap(F, a, b), m), 1)

    def c_semigroup(self, p, a, b, m, n, j):
        I = self._mixed(p, a, b, m)
        P = orbit_eval(I, n)
        for _ in range(j):
            P = I.endo.apply(P)
        return None if P == orbit_eval(I, n + j) else f"orbit_eval({n + j}) differs"

    def c_endo_pow(self, p, a, b, m, j):
        I = self._mixed(p, a, b, m)
        P = I.start
        for _ in range(j):
            P = I.endo.apply(P)
        return None if endo_pow(I.endo, j).apply(I.start) == P else "endo_pow differs"

    def c_replay(self, p, a1, b1, a2, b2, m):
        text = f"{m}*AP({a1},{b1}) U ({m}+AP({a2},{b2})) & AP(0,1)"
        trace = plan(parse(text), CompileOptions(characteristic=p))
        one, two = build_from_trace(trace), build_from_trace(trace)
        if dumps(instance_to_dict(one)) != dumps(instance_to_dict(two)):
            return "replayed instances differ"
        return None

    # -- gadgets ------------------------------------------------------------------

    GADGETS = ((5, (1,)), (5, (2,)), (7, (1, 1)), (7, (1, 2)), (9, (1, 2)))

    def _gadget(self, g):
        q, coeffs = self.GADGETS[g]
        spec = plan_gadget(q, coeffs)
        if "z_one" in self.mutations:
            spec["mutation"] = "z_one"
        F = make_field(spec["p"], spec["e"])
        return q, coeffs, spec, gadget_instance(_normalize_relations(spec), F)

    def c_gadget_forward(self, g, seed):
        q, coeffs, _, I = self._gadget(g)
        rng = random.Random(seed)
        for _ in range(20):
            ns = [rng.randint(0, 6) for _ in coeffs]
            n = sum(c * q**k for c, k in zip(coeffs, ns))
            if not variety_member(I.variety, orbit_eval(I, n)):
                return f"n={n} (exponents {ns}) is not a member"
        return None

    def c_gadget_digits(self, g, N):
        q, coeffs, _, I = self._gadget(g)
        M = sum(coeffs)
        eq = I.variety.atoms[0][1]  # E_M = z
        for n in range(N + 1):
            s, x = 0, n
            while x:
                x, r = divmod(x, q)
                s += r
            if s == M:
                continue
            P = orbit_eval(I, n)
            if eval_equation(eq, P, form_values(I.variety, P)).is_zero():
                return f"E_M = z holds at n={n} with digit sum {s}"
        return None

    def c_gadget_scale(self, c):
        q = 5
        F = make_field(q, 1)
        spec1 = plan_gadget(q, (1,))
        specc = plan_gadget(q, (c,))
        I1 = scale_up(gadget_instance(_normalize_relations(spec1), F), c)
        Ic = gadget_instance(_normalize_relations(specc), F)
        N = 2 * q**3
        got = return_set(Ic, N)
        want = set(core_values(pset(q, (c,), (1,)), N))
        return _diff(return_set(I1, N), got) or _diff(got, want)

    # -- registry -----------------------------------------------------------------

    def contracts(self) -> list[Contract]:
        P = lambda r: r.choice((2, 3, 5))  # noqa: E731
        ab = lambda r: {"p": P(r), "a": r.randint(0, 6), "b": r.randint(0, 5)}  # noqa: E731
        two = lambda r: {"p": P(r), "a1": r.randint(0, 6), "b1": r.randint(0, 5),  # noqa: E731
                         "a2": r.randint(0, 6), "b2": r.randint(0, 5)}
        return [
            Contract("build_ap", ab, self.c_ap, 30, {"p": 2}),
            Contract("scale_up", lambda r: {**ab(r), "m": r.randint(2, 4)}, self.c_scale, 20,
                     {"p": 2, "m": 2}),
            Contract("divide_by_scale_up", lambda r: {**ab(r), "m": r.randint(2, 4)},
                     self.c_divide, 15, {"p": 2, "m": 1}),
            Contract("shift_up", lambda r: {**ab(r), "m": r.randint(1, 4)}, self.c_shift, 20,
                     {"p": 2, "m": 1}),
            Contract("union", two, self.c_union, 20, {"p": 2}),
            Contract("intersection", two, self.c_intersect, 20, {"p": 2}),
            Contract("orbit_semigroup",
                     lambda r: {**ab(r), "m": r.randint(1, 3), "n": r.randint(0, 16),
                                "j": r.randint(0, 16)}, self.c_semigroup, 15, {"p": 2, "m": 1}),
            Contract("endo_pow", lambda r: {**ab(r), "m": r.randint(1, 3), "j": r.randint(0, 20)},
                     self.c_endo_pow, 15, {"p": 2, "m": 1}),
            Contract("trace_replay", lambda r: {**two(r), "m": r.randint(1, 3)}, self.c_replay,
                     6, {"p": 2, "m": 1}),
            Contract("gadget_forward",
                     lambda r: {"g": r.randrange(len(self.GADGETS)), "seed": r.randrange(2**16)},
                     self.c_gadget_forward, 10, {"g": 10**9, "seed": 10**9}),
            Contract("gadget_digit_sum",
                     lambda r: {"g": r.randrange(len(self.GADGETS)), "N": r.randint(60, 160)},
                     self.c_gadget_digits, 5, {"g": 10**9, "N": 0}),
            Contract("gadget_scale_agreement", lambda r: {"c": r.randint(1, 2)},
                     self.c_gadget_scale, 2, {"c": 1}),
        ]


def shrink(check: Callable[..., str | None], params: dict, floors: dict) -> tuple[dict, str]:
    """Halve integer parameters (not below their floors) while ``check`` keeps failing.

    A floor of 10**9 or more marks a parameter that is never shrunk.
    """
    cur = dict(params)
    msg = check(**cur)
    changed = True
    while changed:
        changed = False
        for k, v in cur.items():
            lo = floors.get(k, 0)
            if lo >= 10**9 or not isinstance(v, int) or v // 2 < lo or v // 2 == v:
                continue
            trial = dict(cur, **{k: v // 2})
            try:
                m = check(**trial)
            except Exception as exc:  # a crash while shrinking still counts as failure
                m = f"{type(exc).__name__}: {exc}"
            if m:
                cur, msg, changed = trial, m, True
    return cur, msg


def contract_suite(seed: int = 0, mutations=(), only=None) -> dict:
    """Run every contract; the summary lists each failure with a shrunk reproduction."""
    suite = Suite(mutations)
    rng = random.Random(seed)
    results = []
    t0 = time.perf_counter()
    for c in suite.contracts():
        if only is not None and c.name not in only:
            continue
        crng = random.Random(rng.randrange(2**32))
        entry = {"name": c.name, "cases": 0, "status": "pass"}
        for _ in range(c.cases):
            params = c.gen(crng)
            entry["cases"] += 1
            try:
                msg = c.check(**params)
            except Exception as exc:
                msg = f"{type(exc).__name__}: {exc}"
            if msg:
                small, smsg = shrink(c.check, params, c.floors)
                entry.update(status="fail", failure={"params": params, "message": msg,
                                                     "shrunk": small, "shrunk_message": smsg})
                break
        results.append(entry)
    failed = [r["name"] for r in results if r["status"] == "fail"]
    return {"seed": seed, "mutations": sorted(mutations), "passed": not failed,
            "failed": failed, "results": results,
            "elapsed_s": round(time.perf_counter() - t0, 3)}
