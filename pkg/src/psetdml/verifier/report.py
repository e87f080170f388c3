"""Exact comparison of an instance's return set with the set oracle."""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field

from ..setlang import enumerate_set, render
from ..torus import DegreeCapExceeded, dumps, instance_stats, instance_to_dict, return_set
from ..torus.model import DMLInstance

REPORT_SCHEMA = "psetdml.report/1"
WITNESS_CAP = 32


def instance_hash(I: DMLInstance) -> str:
    """sha256 of the instance JSON without its provenance trace."""
    d = instance_to_dict(I)
    d.pop("trace", None)
    return hashlib.sha256(dumps(d).encode()).hexdigest()


def compare_sets(expected, got, lo: int, hi: int) -> list[dict]:
    """Witnesses of the symmetric difference on [lo, hi], in increasing n."""
    exp = {n for n in expected if lo <= n <= hi}
    have = {n for n in got if lo <= n <= hi}
    return [{"n": n, "expected": n in exp, "got": n in have} for n in sorted(exp ^ have)]


def gadget_log(trace) -> list[dict]:
    """Retry history of every gadget in a trace (instance trace or full document)."""
    out = []
    seen = set()

    def walk(node):
        if not isinstance(node, dict):
            return
        if node.get("step") in ("BaseGadget", "GadgetSplit"):
            key = (node.get("step"), node.get("q"), tuple(node.get("coeffs", ())))
            if key not in seen:
                seen.add(key)
                out.append({"step": node["step"], "q": node.get("q"),
                            "coeffs": node.get("coeffs"),
                            "certified_n": node.get("certified_n"),
                            "attempts": node.get("attempts", [])})
        for c in node.get("children", ()):
            walk(c)

    walk(trace.get("root", trace) if isinstance(trace, dict) else trace)
    return out


@dataclass
class VerificationReport:
    instance_hash: str
    expression: str
    n_low: int
    n: int
    verdict: str  # match | mismatch | error
    witnesses: list = field(default_factory=list)
    witness_count: int = 0
    stats: dict = field(default_factory=dict)
    gadget_log: list = field(default_factory=list)
    error: str | None = None
    timing: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.verdict == "match"

    def to_dict(self, timing: bool = True) -> dict:
        d = {
            "schema": REPORT_SCHEMA,
            "instance_hash": self.instance_hash,
            "expression": self.expression,
            "window": [self.n_low, self.n],
            "verdict": self.verdict,
            "witnesses": self.witnesses,
            "witness_count": self.witness_count,
            "stats": self.stats,
            "gadget_log": self.gadget_log,
            "error": self.error,
        }
        if timing:
            d["timing"] = self.timing
        return d

    def to_json(self, timing: bool = True) -> str:
        return dumps(self.to_dict(timing))

    def content_hash(self) -> str:
        """Hash of the report without timing fields."""
        return hashlib.sha256(self.to_json(timing=False).encode()).hexdigest()

    @classmethod
    def from_dict(cls, d: dict) -> "VerificationReport":
        if d.get("schema") != REPORT_SCHEMA:
            raise ValueError(f"unsupported report schema {d.get('schema')!r}")
        lo, hi = d["window"]
        return cls(d["instance_hash"], d["expression"], lo, hi, d["verdict"], d["witnesses"],
                   d["witness_count"], d["stats"], d["gadget_log"], d.get("error"),
                   d.get("timing", {}))

    @classmethod
    def from_json(cls, text: str) -> "VerificationReport":
        return cls.from_dict(json.loads(text))


def verify_instance(I: DMLInstance, e, N: int, *, n_low: int = 0, degree_cap: int | None = None,
                    all_witnesses: bool = False) -> VerificationReport:
    """Compare return_set(I) with the oracle for ``e`` on [n_low, N].

    A degree-cap overflow gives verdict ``error`` instead of raising.
    """
    if n_low > N:
        raise ValueError(f"empty window [{n_low}, {N}]")
    t0 = time.perf_counter()
    want = enumerate_set(e, N)
    t1 = time.perf_counter()
    rep = VerificationReport(instance_hash(I), render(e), n_low, N, "match",
                             stats=instance_stats(I), gadget_log=gadget_log(I.trace))
    try:
        got = return_set(I, N, degree_cap)
    except DegreeCapExceeded as exc:
        rep.verdict = "error"
        rep.error = str(exc)
        got = None
    t2 = time.perf_counter()
    if got is not None:
        wit = compare_sets(want, got, n_low, N)
        rep.witness_count = len(wit)
        rep.witnesses = wit if all_witnesses else wit[:WITNESS_CAP]
        rep.verdict = "mismatch" if wit else "match"
    rep.timing = {"oracle_s": round(t1 - t0, 6), "instance_s": round(t2 - t1, 6)}
    return rep


def spurious_scan(I: DMLInstance, e, N_low: int, N_high: int, **kw) -> VerificationReport:
    """verify_instance restricted to the window [N_low, N_high]."""
    if N_low > N_high:
        raise ValueError("N_low must not exceed N_high")
    return verify_instance(I, e, N_high, n_low=N_low, **kw)
