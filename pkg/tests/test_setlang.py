import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from psetdml.setlang import (APTerm, Intersect, PSetTerm, Scale, SetParseError, Shift, Union,
                             enumerate_set, from_json, identity_check, member, normalize_pset,
                             parse, pset, render, to_json, uniformize)


def B(text):
    return parse(text)


# -- parser -------------------------------------------------------------------

def test_parse_examples():
    assert parse("AP(1,2)") == APTerm(1, 2)
    t = parse("B(3;1,1;1,1)")
    assert isinstance(t, PSetTerm) and t.q == 3 and t.int_coeffs() == (1, 1) and t.exps == (1, 1)
    t4 = parse("B(4;1;1)")
    assert (t4.p, t4.k) == (2, 2)


def test_parse_precedence():
    e = parse("AP(0,2) U AP(1,4) & AP(0,3)")
    assert isinstance(e, Union) and isinstance(e.children[1], Intersect)
    assert parse("2*AP(1,1)") == Scale(2, APTerm(1, 1))
    assert parse("3+AP(0,2)") == Shift(3, APTerm(0, 2))


@pytest.mark.parametrize("text,fragment", [
    ("B(6;1;1)", "prime power"),
    ("B(3;1,1;1)", ""),
    ("B(2;1,-1;1,1)", "not all positive"),
    ("AP(1,", ""),
    ("AP(1,2) U", ""),
    ("C(1)", ""),
])
def test_parse_errors(text, fragment):
    with pytest.raises(SetParseError) as exc:
        parse(text)
    assert fragment in str(exc.value)


@pytest.mark.parametrize("text", [
    "AP(1,2)", "B(3;1,1;1,1) U AP(0,5)", "AP(0,2) & AP(0,3)", "(AP(0,2) U AP(1,3)) & AP(0,5)",
    "B(2;3/2,1/2;1,1)", "2*(AP(0,3) U B(2;1;1))", "4+B(5;1,2;0,1)",
])
def test_render_and_json_round_trip(text):
    e = parse(text)
    assert parse(render(e)) == e
    assert from_json(to_json(e)) == e


# -- normalization and uniformization ---------------------------------------------

def test_normalize_examples():
    n = normalize_pset(parse("B(2;3/2,1/2;1,1)"))
    assert (n.scale, n.shift) == (2, 0)
    assert n.core.int_coeffs() == (3, 1) and n.core.exps == (1, 1)
    n = normalize_pset(parse("B(3;5,1;0,2)"))
    assert (n.scale, n.shift) == (1, 5)
    assert n.core.int_coeffs() == (1,) and n.core.exps == (2,)
    t = parse("B(3;2;1)")
    assert normalize_pset(t).core == t


def test_normalize_degenerate():
    n = normalize_pset(parse("B(3;2,1;0,0)"))
    assert n.degenerate and n.shift == 3
    assert enumerate_set(parse("B(3;2,1;0,0)"), 10) == [3]


def test_uniformize_examples():
    out = uniformize(parse("B(2;1,1;1,2)"))
    assert [render(t) for t in out] == ["B(4;1,1;1,1)", "B(4;2,1;1,1)"]
    t = parse("B(3;1,1;1,1)")
    assert uniformize(t) == [t]
    assert [render(x) for x in uniformize(parse("B(2;1;3)"))] == ["B(8;1;1)"]


def _union(terms):
    return terms[0] if len(terms) == 1 else Union(tuple(terms))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([2, 3]), st.lists(st.tuples(st.integers(1, 3), st.integers(1, 3)),
                                         min_size=1, max_size=3), st.booleans())
def test_uniformize_preserves_the_set(p, cks, literal):
    t = pset(p, [c for c, _ in cks], [k for _, k in cks])
    ok, where = identity_check(t, _union(uniformize(t, literal)), 500)
    assert ok, where


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([2, 3, 5]),
       st.lists(st.tuples(st.fractions(min_value=Fraction(1, 4), max_value=3, max_denominator=4),
                          st.integers(0, 2)), min_size=1, max_size=3))
def test_normalization_replay(p, cks):
    t = pset(p, [c for c, _ in cks], [k for _, k in cks])
    n = normalize_pset(t)
    core = set(enumerate_set(n.core, 200 * n.scale)) if n.core is not None else {0}
    for x in range(201):
        assert member(t, x) == ((n.scale * x - n.shift) in core)


# -- oracle -----------------------------------------------------------------------

def test_member_examples():
    assert member(parse("B(2;1,1;1,2)"), 6)
    assert not member(parse("B(3;1,1;1,1)"), 8)
    assert member(parse("AP(2,3)"), 11)
    assert member(parse("AP(4,0)"), 4) and not member(parse("AP(4,0)"), 5)


def test_enumerate_examples():
    assert enumerate_set(parse("B(3;1,1;1,1)"), 30) == [2, 4, 6, 10, 12, 18, 28, 30]
    assert enumerate_set(parse("B(2;1,1;1,2)"), 20) == [2, 3, 5, 6, 8, 9, 12, 17, 18, 20]
    assert enumerate_set(parse("B(7;1,2;1,1)"), 350) == [3, 9, 15, 21, 51, 63, 99, 105, 147, 345]


def test_enumerate_brute_force_cross_check():
    # sums c_j q^{k_j n_j} computed by an independent nested loop
    for q, cs, ks in [(3, (1, 1), (1, 1)), (2, (1, 3), (1, 2)), (5, (2, 1, 1), (1, 1, 2))]:
        want = {0}
        for c, k in zip(cs, ks):
            want = {w + c * q ** (k * n) for w in want for n in range(12)}
        want = sorted(x for x in want if x <= 400)
        text = f"B({q};{','.join(map(str, cs))};{','.join(map(str, ks))})"
        assert enumerate_set(parse(text), 400) == want


def test_identity_check_examples():
    assert identity_check(B("B(3;1,3;1,1)"), B("(1+B(3;3;1)) U 3*B(3;1,1;1,1)"), 40)[0]
    assert identity_check(B("B(2;1;1)"), B("B(4;1;1) U 2*B(4;1;1)"), 64)[0]
    assert identity_check(B("AP(0,1)"), B("AP(0,2) U AP(1,2)"), 100)[0]
    ok, where = identity_check(B("AP(0,2)"), B("AP(0,4)"), 10)
    assert not ok and where == 2


def _random_expr(rng, depth=0):
    r = rng.random()
    if depth > 2 or r < 0.35:
        return APTerm(rng.randint(0, 8), rng.randint(0, 5))
    if r < 0.6:
        m = rng.randint(1, 3)
        return pset(rng.choice([2, 3, 4]), [rng.randint(1, 3) for _ in range(m)],
                    [rng.randint(0, 2) for _ in range(m)])
    if r < 0.75:
        return Union((_random_expr(rng, depth + 1), _random_expr(rng, depth + 1)))
    if r < 0.85:
        return Intersect((_random_expr(rng, depth + 1), _random_expr(rng, depth + 1)))
    if r < 0.93:
        return Scale(rng.randint(1, 3), _random_expr(rng, depth + 1))
    return Shift(rng.randint(1, 3), _random_expr(rng, depth + 1))


@pytest.mark.parametrize("seed", range(25))
def test_member_enumerate_consistency(seed):
    e = _random_expr(random.Random(seed))
    got = set(enumerate_set(e, 200))
    assert all(member(e, n) == (n in got) for n in range(201))


def test_core_minimum():
    for text in ["B(3;2,1;1,1)", "B(2;1,1,1;1,2,3)", "B(5;4;2)"]:
        t = parse(text)
        vals = enumerate_set(t, 500)
        assert vals[0] == sum(t.int_coeffs())


def _peel_rhs(q, cs, t):
    """Right side of the peeling identity for B(q; c) with coefficient t replaced by q*c_t."""
    m = len(cs)
    after = list(cs)
    after[t] = q * cs[t]
    parts = []
    for i in range(m):
        if i == t:
            continue
        rest = after[:i] + after[i + 1:]
        parts.append(f"{cs[i]}+B({q};{','.join(map(str, rest))};{','.join(['1'] * (m - 1))})")
    parts.append(f"{q}*B({q};{','.join(map(str, cs))};{','.join(['1'] * m)})")
    return parse(" U ".join(f"({x})" for x in parts))


@pytest.mark.parametrize("seed", range(12))
def test_peel_identity(seed):
    rng = random.Random(seed)
    q = rng.choice([2, 3, 4])
    m = rng.randint(2, 3)
    cs = [rng.randint(1, 3) for _ in range(m)]
    t = rng.randrange(m)
    after = list(cs)
    after[t] = q * cs[t]
    lhs = parse(f"B({q};{','.join(map(str, after))};{','.join(['1'] * m)})")
    ok, where = identity_check(lhs, _peel_rhs(q, cs, t), 500)
    assert ok, where
