import json
import random

import pytest

from psetdml.algebra import make_field
from psetdml.compiler import (CompileOptions, ConstructionError, base_gadget, build_ap,
                              build_from_trace, compile_expr, divide_by, intersect, plan,
                              plan_gadget, scale_up, shift_up, shift_up_literal,
                              solve_gadget_lambda, synthesize_relations, union)
from psetdml.compiler.gadget import certify, format_relation, make_spec, _normalize_relations
from psetdml.setlang import enumerate_set, parse
from psetdml.torus import instance_to_json, return_set
from psetdml.verifier import hand_encoded_b3


def ap_set(a, b, N):
    return [a] if b == 0 and a <= N else [x for x in range(a, N + 1, b)] if b else []


def steps(node):
    return [node["step"]] + [s for c in node.get("children", ()) for s in steps(c)]


# -- constructors --------------------------------------------------------------

@pytest.mark.parametrize("a,b", [(0, 0), (1, 2), (3, 4), (0, 3), (4, 0), (2, 1)])
def test_build_ap(a, b):
    assert return_set(build_ap(make_field(2), a, b), 60) == ap_set(a, b, 60)


def test_build_ap_rejects_negative():
    with pytest.raises(ValueError):
        build_ap(make_field(2), -1, 2)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_build_ap_any_characteristic(p):
    assert return_set(build_ap(make_field(p), 2, 3), 40) == ap_set(2, 3, 40)


@pytest.mark.parametrize("seed", range(6))
def test_scale_divide_shift(seed):
    rng = random.Random(seed)
    F = make_field(rng.choice([2, 3]))
    a, b, m = rng.randint(0, 4), rng.randint(1, 4), rng.randint(2, 4)
    I = build_ap(F, a, b)
    base = set(return_set(I, 120))
    assert set(return_set(scale_up(I, m), 120)) == {m * x for x in base if m * x <= 120}
    assert set(return_set(divide_by(scale_up(I, m), m), 60)) == {x for x in base if x <= 60}
    assert set(return_set(shift_up(I, m), 120)) == {m + x for x in base if m + x <= 120}
    assert return_set(shift_up_literal(I, m), 60) == return_set(shift_up(I, m), 60)


def test_scale_up_dimension_and_identity():
    I = build_ap(make_field(2), 1, 2)
    assert scale_up(I, 1) is I and divide_by(I, 1) is I
    assert scale_up(I, 3).dim == 3 * I.dim + 7  # m copies plus AP(0,3)


def test_scale_up_without_cut_leaks():
    I = build_ap(make_field(2), 2, 3)
    assert 3 in return_set(scale_up(I, 2, cut=False), 20)
    assert 3 not in return_set(scale_up(I, 2), 20)


def test_union_and_intersect_constructors():
    F = make_field(3)
    a, b = build_ap(F, 1, 2), build_ap(F, 0, 3)
    assert return_set(union(a, b), 30) == sorted(set(ap_set(1, 2, 30)) | set(ap_set(0, 3, 30)))
    assert return_set(intersect(a, b), 30) == [3, 9, 15, 21, 27]


def test_shift_of_golden_instance():
    I = hand_encoded_b3()
    assert return_set(shift_up(I, 2), 40) == [x + 2 for x in return_set(I, 38)]


def test_constructor_argument_errors():
    I = build_ap(make_field(2), 0, 1)
    for fn in (scale_up, divide_by, shift_up):
        with pytest.raises(ValueError):
            fn(I, 0)


# -- gadget -----------------------------------------------------------------------

def test_gadget_lambda_example():
    assert solve_gadget_lambda(make_field(3), [1, 2]) == ([1, 1], 1, 2)


def test_relation_examples():
    assert [format_relation(r, 2, 5) for r in synthesize_relations(5, (2,))] == ["E1^2 + Z  (mod 5)"]
    assert synthesize_relations(7, (1, 2)) == []
    assert len(synthesize_relations(7, (1, 2), max_weight=6)) == 1
    assert synthesize_relations(5, (1,)) == []


def test_plan_gadget_records_certification():
    s = plan_gadget(5, (1,))
    assert s["step"] == "BaseGadget" and s["certified_n"] == 250
    assert (s["lambda"], s["mu"], s["beta"]) == ([1], 3, 1)
    s = plan_gadget(7, (1, 2))
    assert s["relation_weight"] == 6 and s["certified_n"] == 686


@pytest.mark.parametrize("q,coeffs,N", [(5, (1,), 250), (5, (2,), 250), (7, (1, 2), 686),
                                        (9, (1, 2), 300), (4, (1,), 128)])
def test_base_gadget_matches_oracle(q, coeffs, N):
    I = base_gadget(q, coeffs)
    text = f"B({q};{','.join(map(str, coeffs))};{','.join(['1'] * len(coeffs))})"
    assert return_set(I, N) == enumerate_set(parse(text), N)
    assert I.dim == sum(coeffs) + 2


def test_gadget_ineligible():
    with pytest.raises(ValueError):
        plan_gadget(3, (1, 1))
    with pytest.raises(ValueError):
        plan_gadget(5, (0,))


def test_hyperplane_only_gadget_overshoots():
    spec = _normalize_relations(make_spec(5, (2,), [1, 2, 3], mutation="hyperplane_only"))
    assert certify(spec, 100)


def test_gadget_over_extension_field():
    F = make_field(5, 2)
    I = base_gadget(5, (1,), F=F)
    assert I.field is F
    assert return_set(I, 200) == enumerate_set(parse("B(5;1;1)"), 200)


# -- planning and replay -----------------------------------------------------------

def test_m1_split_trace():
    t = plan(parse("B(2;1;1)"))
    s = steps(t["root"])
    assert "M1Split" in s and s.count("BaseGadget") == 2
    assert t["schema"] == "psetdml.trace/1" and t["field"]["p"] == 2


def test_gap_shift_and_peel_trace():
    t = plan(parse("B(2;1,1;1,1)"))
    s = set(steps(t["root"]))
    assert {"UniformSplit", "GapShift", "Peel", "DivideBy", "ShiftUp"} <= s
    assert t["dim"] <= 20000


def test_every_node_has_lemma_and_dim():
    def walk(n):
        assert "lemma" in n and isinstance(n["dim"], int)
        for c in n.get("children", ()):
            walk(c)
    walk(plan(parse("B(3;1,1;1,1) U AP(0,5)"))["root"])


@pytest.mark.parametrize("text,N", [("AP(1,2)", 100), ("B(2;1;1)", 256), ("B(3;2;1)", 256),
                                    ("AP(0,2) & AP(0,3)", 100), ("2*AP(1,3)", 100),
                                    ("3+B(3;1;1)", 200), ("B(3;1,1;1,1) U AP(0,5)", 120)])
def test_compile_matches_oracle(text, N):
    e = parse(text)
    inst, trace = compile_expr(e, CompileOptions(n_final=N))
    assert trace["verified"]["verdict"] == "match"
    assert return_set(inst, N) == enumerate_set(e, N)


def test_replay_is_bit_identical():
    e = parse("B(3;1,1;1,1) U AP(0,5)")
    inst, trace = compile_expr(e, CompileOptions(n_final=60))
    doc = json.loads(json.dumps(trace))
    again = build_from_trace(doc)
    assert instance_to_json(again) == instance_to_json(inst)


def test_replay_rejects_bad_schema():
    trace = plan(parse("AP(1,2)"))
    trace["schema"] = "other"
    with pytest.raises(ConstructionError):
        build_from_trace(trace)


def test_dimension_cap():
    with pytest.raises(ConstructionError):
        plan(parse("B(2;1,1;1,1)"), CompileOptions(dim_cap=50))


def test_plan_is_deterministic():
    e = parse("B(2;1,1;1,1)")
    assert json.dumps(plan(e), sort_keys=True) == json.dumps(plan(e), sort_keys=True)


def test_paper_literal_mode_still_correct():
    e = parse("B(3;2;1)")
    inst, trace = compile_expr(e, CompileOptions(paper_literal=True, n_final=200))
    assert trace["options"]["paper_literal"] is True
    assert return_set(inst, 200) == enumerate_set(e, 200)


def test_characteristic_follows_pset_base():
    assert plan(parse("B(3;1;1) U AP(0,2)"))["field"]["p"] == 3
    assert plan(parse("AP(0,2)"))["field"]["p"] == 2
