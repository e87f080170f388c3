import random

import pytest

from psetdml.algebra import RationalFunc, SparsePoly, make_field
from psetdml.compiler import build_ap, find_off_variety_point, scale_up, shift_up
from psetdml.torus import (DegreeCapExceeded, DMLInstance, Equation, InstanceFormatError,
                           MonomialEndo, TorusError, Variety, dumps, endo_compose, endo_pow,
                           format_equation, instance_from_json, instance_product, instance_stats,
                           instance_to_dict, instance_to_json, linear_equation, orbit_eval,
                           orbit_iter, parse_equation, return_set, return_set_exact,
                           variety_member)
from psetdml.torus.model import form_var
from psetdml.torus.shadow import shadow_candidates, shadow_fields_for
from psetdml.verifier import hand_encoded_b3

GOLDEN_200 = [2, 4, 6, 10, 12, 18, 28, 30, 36, 54, 82, 84, 90, 108, 162]


def rf(F, d):
    return RationalFunc.poly(SparsePoly.from_dict(F, d))


def one(F):
    return RationalFunc.one(F)


# -- endomorphisms ------------------------------------------------------------------

def test_compose_diagonal():
    F = make_field(3)
    t = rf(F, {1: 1})
    E = MonomialEndo.diagonal(F, (t,))
    assert endo_compose(E, E) == MonomialEndo.diagonal(F, (rf(F, {2: 1}),))


def test_golden_map_squared():
    I = hand_encoded_b3()
    F = I.field
    E2 = endo_compose(I.endo, I.endo)
    assert E2.is_diagonal()
    assert E2.scalars == (rf(F, {2: 1}), rf(F, {0: 1, 1: 2, 2: 1}), rf(F, {0: 1, 1: 1, 2: 1}))


def test_cyclic_shift_powers():
    F = make_field(2)
    t = rf(F, {1: 1})
    E = MonomialEndo(F, (((2, 1),), ((0, 1),), ((1, 1),)), (t, one(F), one(F)))
    E2 = endo_compose(E, E)
    assert [r[0][0] for r in E2.rows] == [1, 2, 0]
    E3 = endo_pow(E, 3)
    assert E3.matrix() == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert all(s == t for s in E3.scalars)


def test_endo_pow_frobenius():
    F = make_field(2)
    E = MonomialEndo.diagonal(F, (rf(F, {0: 1, 1: 1}),))
    assert endo_pow(E, 1) == E
    assert endo_pow(E, 8).scalars == (rf(F, {0: 1, 8: 1}),)


@pytest.mark.parametrize("seed", range(8))
def test_endo_pow_equals_repeated_application(seed):
    rng = random.Random(seed)
    F = make_field(rng.choice([2, 3, 5]))
    I = shift_up(scale_up(build_ap(F, rng.randint(0, 4), rng.randint(1, 4)), rng.randint(1, 3)), 1)
    m = rng.randint(1, 12)
    P = I.start
    for _ in range(m):
        P = I.endo.apply(P)
    assert endo_pow(I.endo, m).apply(I.start) == P


@pytest.mark.parametrize("seed", range(8))
def test_orbit_semigroup_law(seed):
    rng = random.Random(100 + seed)
    F = make_field(rng.choice([2, 3]))
    I = scale_up(build_ap(F, rng.randint(0, 3), rng.randint(1, 3)), 2)
    m, n = rng.randint(0, 16), rng.randint(0, 16)
    P = orbit_eval(I, n)
    for _ in range(m):
        P = I.endo.apply(P)
    assert P == orbit_eval(I, m + n)


# -- orbits and membership ------------------------------------------------------------

def test_golden_orbit_points():
    I = hand_encoded_b3()
    F = I.field
    P2 = orbit_eval(I, 2)
    assert P2 == (rf(F, {2: 1}), rf(F, {0: 1, 1: 2, 2: 1}), rf(F, {0: 1, 1: 1, 2: 1}))
    assert variety_member(I.variety, P2)
    P1 = orbit_eval(I, 1)
    assert P1 == (rf(F, {1: 1}), rf(F, {0: 1, 1: 1}), rf(F, {0: 1, 1: 2}))
    assert not variety_member(I.variety, P1)
    assert orbit_eval(I, 0) == I.start


def test_orbit_iter_matches_orbit_eval():
    I = hand_encoded_b3()
    for n, P in enumerate(orbit_iter(I, 12)):
        assert P == orbit_eval(I, n)


def test_variety_member_examples():
    F = make_field(3)
    t = rf(F, {1: 1})
    V = Variety(((linear_equation({0: one(F)}, -one(F)),),))
    assert variety_member(V, (one(F), t))
    V2 = Variety(((linear_equation({0: one(F)}, -one(F)),), (linear_equation({1: one(F)}, -one(F)),)))
    assert variety_member(V2, (t, one(F)))
    assert not variety_member(V2, (t, t))


def test_golden_return_set():
    I = hand_encoded_b3()
    assert return_set(I, 200) == GOLDEN_200
    assert return_set_exact(I, 200) == GOLDEN_200
    assert return_set(I, 1) == []


def test_return_set_ap_instance():
    assert return_set(build_ap(make_field(2), 2, 3), 12) == [2, 5, 8, 11]


def test_degree_cap():
    with pytest.raises(DegreeCapExceeded):
        return_set_exact(hand_encoded_b3(), 50, degree_cap=10)


# -- products -----------------------------------------------------------------------

def test_product_union_and_intersection():
    F = make_field(2)
    a, b = build_ap(F, 0, 2), build_ap(F, 0, 3)
    u = instance_product(a, b, "union")
    i = instance_product(a, b, "intersection")
    assert u.dim == a.dim + b.dim
    assert len(u.variety.atoms) == len(a.variety.atoms) + len(b.variety.atoms)
    assert return_set(u, 60) == sorted(set(range(0, 61, 2)) | set(range(0, 61, 3)))
    assert return_set(i, 60) == list(range(0, 61, 6))
    same = instance_product(a, a, "intersection")
    assert return_set(same, 60) == return_set(a, 60)


def test_product_field_mismatch():
    with pytest.raises(TorusError):
        instance_product(build_ap(make_field(2), 0, 1), build_ap(make_field(3), 0, 1))


def test_golden_union_with_itself_stats():
    I = hand_encoded_b3()
    s = instance_stats(I)
    assert (s["dim"], s["atoms"], s["max_equation_degree"]) == (3, 1, 1)
    U = instance_product(I, I, "union")
    s2 = instance_stats(U)
    assert (s2["dim"], s2["atoms"]) == (6, 2)
    assert instance_stats(build_ap(make_field(2), 1, 2))["dim"] == 3


def test_relabeling_preserves_membership():
    F = make_field(3)
    I = hand_encoded_b3()
    J = build_ap(F, 1, 2)
    U = instance_product(I, J, "union")
    for n in range(12):
        P, Q = orbit_eval(I, n), orbit_eval(J, n)
        want = variety_member(I.variety, P) or variety_member(J.variety, Q)
        assert variety_member(U.variety, P + Q) == want


def test_instance_validation():
    F = make_field(3)
    with pytest.raises(TorusError):
        DMLInstance(F, MonomialEndo.diagonal(F, (one(F),)), (one(F), one(F)), Variety(((
            linear_equation({0: one(F)}),),)))
    with pytest.raises(TorusError):
        DMLInstance(F, MonomialEndo.diagonal(F, (one(F),)), (RationalFunc.zero(F),),
                    Variety(((linear_equation({0: one(F)}),),)))


# -- points off the variety -----------------------------------------------------------

def test_find_off_variety_point():
    F = make_field(2)
    t = rf(F, {1: 1})
    I = build_ap(F, 0, 0)  # V: x_1 = 1
    assert find_off_variety_point(I) == (t,)
    assert find_off_variety_point(hand_encoded_b3()) == (rf(make_field(3), {1: 1}),) * 3


def test_find_off_variety_point_budget():
    F = make_field(2)
    whole = Variety(((Equation.build({}),),))
    I = DMLInstance(F, MonomialEndo.diagonal(F, (one(F),)), (one(F),), whole)
    with pytest.raises(TorusError):
        find_off_variety_point(I)


# -- serialization --------------------------------------------------------------------

@pytest.mark.parametrize("I", [hand_encoded_b3(), build_ap(make_field(2), 3, 2),
                               scale_up(build_ap(make_field(3), 1, 1), 2)])
def test_json_round_trip(I):
    text = instance_to_json(I)
    J = instance_from_json(text)
    assert J == I and instance_to_json(J) == text
    assert return_set(J, 60) == return_set(I, 60)


def test_equation_text_round_trip():
    F = make_field(2, 2)
    eq = Equation.build({((0, 2), (3, 1)): rf(F, {0: 2, 1: 1}), ((form_var(1), 1),): one(F),
                         (): RationalFunc.const(F, 3)})
    assert parse_equation(F, format_equation(eq)) == eq


@pytest.mark.parametrize("mutate", [
    lambda d: d.update(schema="other"),
    lambda d: d.update(dim=99),
    lambda d: d["field"].update(modulus=[1, 0, 1]),
    lambda d: d["variety"].update(atoms=[["[1]*y1"]]),
    lambda d: d.pop("endo"),
])
def test_malformed_instances(mutate):
    d = instance_to_dict(hand_encoded_b3())
    mutate(d)
    with pytest.raises(InstanceFormatError):
        instance_from_json(dumps(d))
    with pytest.raises(InstanceFormatError):
        instance_from_json("{not json")


def test_json_deterministic():
    assert instance_to_json(hand_encoded_b3()) == instance_to_json(hand_encoded_b3())


# -- shadow screening ----------------------------------------------------------------

def test_shadow_fields_cover_window():
    F = make_field(2, 6)
    fields = shadow_fields_for(F, 65536)
    assert len(fields) >= 2
    assert all(G.e % F.e == 0 for G in fields)


@pytest.mark.parametrize("I", [hand_encoded_b3(), scale_up(build_ap(make_field(2), 1, 3), 2)])
def test_shadow_keeps_every_member(I):
    N = 300
    cands = shadow_candidates(I, N)
    assert set(return_set_exact(I, N)) <= set(cands)
