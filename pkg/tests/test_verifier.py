import pytest

from psetdml.algebra import make_field
from psetdml.compiler import CompileOptions, build_ap, compile_expr
from psetdml.setlang import parse
from psetdml.torus import instance_from_json, instance_to_json
from psetdml.verifier import (CORPUS, MUTATION_NAMES, REPORT_SCHEMA, WITNESS_CAP,
                              VerificationReport, compare_sets, contract_suite, gadget_log,
                              hand_encoded_b3, instance_hash, mutated_instance, run_mutation,
                              shrink, spurious_scan, verify_instance)

B3 = parse("B(3;1,1;1,1)")


# -- comparisons --------------------------------------------------------------------

def test_compare_sets_examples():
    assert compare_sets([1, 2, 3], [2, 3, 4], 0, 10) == [
        {"n": 1, "expected": True, "got": False}, {"n": 4, "expected": False, "got": True}]
    assert compare_sets([1, 2, 3], [2, 3, 4], 2, 3) == []


def test_compare_sets_is_symmetric():
    a, b = [0, 5, 7, 9], [5, 6, 9, 11]
    ab, ba = compare_sets(a, b, 0, 20), compare_sets(b, a, 0, 20)
    assert [w["n"] for w in ab] == [w["n"] for w in ba]
    assert all(x["expected"] == y["got"] for x, y in zip(ab, ba))


# -- reports ------------------------------------------------------------------------

def test_golden_match_report():
    rep = verify_instance(hand_encoded_b3(), B3, 500)
    assert rep.ok and rep.verdict == "match" and rep.witnesses == [] and rep.witness_count == 0
    d = rep.to_dict()
    assert d["schema"] == REPORT_SCHEMA and d["window"] == [0, 500]
    assert d["stats"]["dim"] == 3 and "timing" in d
    assert "timing" not in rep.to_dict(timing=False)


def test_mismatch_report_witnesses():
    rep = verify_instance(build_ap(make_field(2), 0, 2), parse("AP(0,3)"), 20)
    assert rep.verdict == "mismatch" and not rep.ok
    assert [w["n"] for w in rep.witnesses] == [2, 3, 4, 8, 9, 10, 14, 15, 16, 20]
    assert rep.witnesses[1] == {"n": 3, "expected": True, "got": False}


def test_witness_cap():
    I = build_ap(make_field(2), 0, 1)
    rep = verify_instance(I, parse("AP(0,0)"), 100)
    assert rep.witness_count == 100 and len(rep.witnesses) == WITNESS_CAP
    assert len(verify_instance(I, parse("AP(0,0)"), 100, all_witnesses=True).witnesses) == 100


def test_report_round_trip_and_hash():
    rep = verify_instance(hand_encoded_b3(), B3, 100)
    again = VerificationReport.from_json(rep.to_json())
    assert again == rep
    rep2 = verify_instance(hand_encoded_b3(), B3, 100)
    assert rep2.content_hash() == rep.content_hash()
    with pytest.raises(ValueError):
        VerificationReport.from_dict({"schema": "x"})


def test_degree_cap_gives_error_verdict():
    rep = verify_instance(hand_encoded_b3(), B3, 50, degree_cap=10)
    assert rep.verdict == "error" and "degree" in rep.error.lower()


def test_instance_hash_ignores_trace():
    I, _ = compile_expr(parse("AP(1,2)"), CompileOptions(n_final=20))
    J = instance_from_json(instance_to_json(I))
    assert instance_hash(I) == instance_hash(J) == instance_hash(I.with_trace(None))
    assert instance_hash(I) != instance_hash(build_ap(make_field(2), 1, 3))


def test_gadget_log_from_trace():
    _, trace = compile_expr(parse("B(2;1;1)"), CompileOptions(n_final=64))
    log = gadget_log(trace)
    assert log and all(g["certified_n"] for g in log)
    assert all(g["attempts"] for g in log)


# -- spurious scans ------------------------------------------------------------------

def test_spurious_scan_golden_window():
    rep = spurious_scan(hand_encoded_b3(), B3, 200, 2000)
    assert rep.verdict == "match" and rep.to_dict()["window"] == [200, 2000]


def test_spurious_scan_subfield_mismatch():
    I, text, _ = mutated_instance("subfield_constant")
    rep = spurious_scan(I, parse(text), 0, 128)
    assert rep.verdict == "mismatch" and rep.witnesses[0]["n"] == 2


def test_spurious_scan_empty_window():
    with pytest.raises(ValueError):
        spurious_scan(hand_encoded_b3(), B3, 10, 5)
    rep = spurious_scan(hand_encoded_b3(), B3, 7, 7)
    assert rep.verdict == "match" and rep.witness_count == 0


# -- mutations and contracts ---------------------------------------------------------

@pytest.mark.parametrize("name,first", [("scale_no_cut", 3), ("z_one", 1),
                                        ("subfield_constant", 2)])
def test_mutations_are_caught(name, first):
    rep = run_mutation(name)
    assert rep.verdict == "mismatch" and rep.witnesses[0]["n"] == first


def test_unknown_mutation():
    with pytest.raises(ValueError):
        mutated_instance("nope")
    assert set(MUTATION_NAMES) == {"scale_no_cut", "z_one", "subfield_constant"}


def test_contract_suite_seed_zero_passes():
    res = contract_suite(0)
    assert res["passed"], res["failed"]
    assert len(res["results"]) >= 10 and all(r["cases"] > 0 for r in res["results"])


def test_contract_suite_catches_scale_mutation():
    res = contract_suite(0, mutations=("scale_no_cut",), only={"scale_up"})
    assert res["failed"] == ["scale_up"]
    shrunk = res["results"][0]["failure"]["shrunk"]
    assert shrunk["m"] == 2


def test_contract_suite_catches_z_one():
    res = contract_suite(0, mutations=("z_one",), only={"gadget_forward"})
    assert not res["passed"]


def test_shrink_halves_to_floor():
    def check(a, b):
        return "bad" if a >= 3 else None
    small, msg = shrink(check, {"a": 40, "b": 9}, {"b": 10**9})
    assert small == {"a": 5, "b": 9} and msg == "bad"


# -- corpus --------------------------------------------------------------------------

@pytest.mark.parametrize("text,N", [c for c in CORPUS if c[1] <= 200 or "U" in c[0]][:6])
def test_corpus_compiles(text, N):
    I, trace = compile_expr(parse(text), CompileOptions(n_final=N))
    assert verify_instance(I, parse(text), N).verdict == "match"
