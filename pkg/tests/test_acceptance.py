"""Acceptance suite: one test per criterion, numbered 1 to 10."""

import json
import subprocess
import sys
import time
from pathlib import Path

import pytest

from psetdml.compiler import CompileOptions, base_gadget, compile_expr, scale_up
from psetdml.setlang import enumerate_set, parse
from psetdml.torus import return_set
from psetdml.verifier import contract_suite, hand_encoded_b3, run_mutation, verify_instance

HERE = Path(__file__).parent


def steps(node):
    return [node["step"]] + [s for c in node.get("children", ()) for s in steps(c)]


def compile_and_verify(text, N):
    e = parse(text)
    inst, trace = compile_expr(e, CompileOptions(n_final=N))
    rep = verify_instance(inst, e, N)
    assert rep.verdict == "match", (text, rep.witnesses[:5])
    return inst, trace


def test_criterion_01_golden_instance():
    t0 = time.perf_counter()
    I = hand_encoded_b3()
    e = parse("B(3;1,1;1,1)")
    rep = verify_instance(I, e, 2000)
    assert rep.verdict == "match"
    assert return_set(I, 200) == [2, 4, 6, 10, 12, 18, 28, 30, 36, 54, 82, 84, 90, 108, 162]
    assert enumerate_set(e, 200) == return_set(I, 200)
    assert time.perf_counter() - t0 < 10


def test_criterion_02_ap_coverage():
    t0 = time.perf_counter()
    for a in range(5):
        for b in range(5):
            compile_and_verify(f"AP({a},{b})", 200)
    assert time.perf_counter() - t0 < 5


def test_criterion_03_m1_split():
    t0 = time.perf_counter()
    for text in ("B(2;1;1)", "B(3;2;1)"):
        _, trace = compile_and_verify(text, 512)
        s = steps(trace["root"])
        assert "M1Split" in s or "M1Scale" in s
    assert time.perf_counter() - t0 < 30


def test_criterion_04_full_recursion_with_peel():
    t0 = time.perf_counter()
    inst, trace = compile_and_verify("B(2;1,1;1,1)", 128)
    s = set(steps(trace["root"]))
    assert "GapShift" in s and "Peel" in s
    assert inst.dim <= 20000
    assert time.perf_counter() - t0 < 120


def test_criterion_05_grouped_gadget():
    t0 = time.perf_counter()
    g = base_gadget(7, (1, 2))
    assert verify_instance(g, parse("B(7;1,2;1,1)"), 686).verdict == "match"
    a = return_set(base_gadget(5, (2,)), 300)
    b = return_set(scale_up(base_gadget(5, (1,)), 2), 300)
    assert a == b == enumerate_set(parse("B(5;2;1)"), 300)
    assert time.perf_counter() - t0 < 30


def test_criterion_06_nonuniform_and_rational():
    assert enumerate_set(parse("B(2;1,1;1,2)"), 20) == [2, 3, 5, 6, 8, 9, 12, 17, 18, 20]
    compile_and_verify("B(2;1,1;1,2)", 128)
    inst, _ = compile_and_verify("B(2;3/2,1/2;1,1)", 128)
    assert inst.dim <= 20000


def test_criterion_07_boolean_structure():
    compile_and_verify("B(3;1,1;1,1) U AP(0,5)", 120)
    inst, _ = compile_and_verify("AP(0,2) & AP(0,3)", 120)
    assert return_set(inst, 120) == list(range(0, 121, 6))


def test_criterion_08_mutation_sensitivity():
    reports = {name: run_mutation(name) for name in ("scale_no_cut", "z_one", "subfield_constant")}
    assert all(r.verdict == "mismatch" for r in reports.values())
    assert reports["scale_no_cut"].witnesses[0]["n"] % 2 != 0
    assert reports["subfield_constant"].witnesses[0]["n"] == 2
    # the orbit point at n = 0 is the start point, which no multiplier change can move
    assert reports["z_one"].witnesses[0]["n"] == 0


def test_criterion_09_contract_suite():
    res = contract_suite(0)
    assert res["passed"], [r["failure"] for r in res["results"] if r["status"] == "fail"]
    assert res["elapsed_s"] < 120
    mutated = contract_suite(0, mutations=("scale_no_cut",), only={"scale_up"})
    assert mutated["results"][0]["failure"]["shrunk"]


@pytest.mark.slow
def test_criterion_10_determinism():
    def run():
        r = subprocess.run([sys.executable, str(HERE / "determinism_run.py")],
                           capture_output=True, text=True, check=True, timeout=900)
        return json.loads(r.stdout)

    first, second = run(), run()
    assert first == second
    assert all(v["verdict"] == "match" for v in first.values())
