import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from extrifact.errors import InputError, PreconditionError
from extrifact.excat import build_extended_category, build_module_category, compose, dualize
from extrifact.silting import enumerate_silting, silted_pair
from extrifact.torsion import (
    SubcatPair,
    enumerate_s_torsion,
    in_star,
    pair_from_json,
    torsion_triangle,
    verify_s_torsion,
)
from oracles import brute_force_a2_pairs, short_exact_splittings

T_EX = ("P3[1]", "P1[1]", "I2[1]", "I1[1]")
F_EX = ("P3", "P2", "P1", "S2", "I2", "I1", "S2[1]")


def test_subrepresentation_oracle_sanity():
    # P1 has exactly the sub-representations 0, P2 and P1
    subs = sorted(sorted(s) for s, _ in short_exact_splittings("P1"))
    assert subs == [[], ["P1"], ["P2"]]


def test_module_a2_matches_brute_force():
    got = {(pr.t_set, pr.f_set) for pr in enumerate_s_torsion(build_module_category(2))}
    assert got == set(brute_force_a2_pairs())
    assert len(got) == 5


def test_module_a2_extra_pair_is_simple_pair():
    # ({S1}, {S2, P1}) is a torsion pair of mod A_2 next to the four trivial/standard ones
    p = build_module_category(2)
    assert verify_s_torsion(p, pair_from_json(p, {"T": ["S1"], "F": ["S2", "P1"]}))["ok"]


# ---------------------------------------------------------------- census against silting


@pytest.mark.parametrize("n,m,count", [(1, 1, 2), (2, 1, 5), (3, 1, 14), (4, 1, 42), (2, 2, 12), (2, 3, 22), (3, 2, 55)])
def test_count_matches_silting_census(n, m, count):
    p = build_extended_category(n, m)
    pairs = enumerate_s_torsion(p)
    assert len(pairs) == count
    assert len(enumerate_silting(n, m)) == count


@pytest.mark.parametrize("n,m", [(2, 2), (3, 2)])
def test_enumeration_equals_silted_pairs(n, m):
    p = build_extended_category(n, m)
    silted = {silted_pair(c, p, check=False) for c in enumerate_silting(n, m)}
    assert silted == set(enumerate_s_torsion(p))


def test_parallel_enumeration_is_identical():
    p = build_extended_category(3, 2)
    assert enumerate_s_torsion(p, jobs=2) == enumerate_s_torsion(p)


def test_cap_mode_is_sound_but_incomplete():
    p = build_extended_category(3, 2)
    exact = set(enumerate_s_torsion(p))
    capped = set(enumerate_s_torsion(p, mode="cap"))
    assert capped < exact


# ---------------------------------------------------------------- verification


P32 = build_extended_category(3, 2)
PAIRS32 = enumerate_s_torsion(P32)


def test_example_pair_verifies_with_triangles():
    rep = verify_s_torsion(P32, SubcatPair.of(T_EX, F_EX), triangles=True)
    assert rep["ok"]
    tris = rep["cond1"]["triangles"]
    assert set(tris) == set(P32.labels)
    for x, t in tris.items():
        assert set(t["T"]) <= set(T_EX) and set(t["F"]) <= set(F_EX)
        assert t["middle"] == [x]


def test_torsion_triangles_realize():
    pair = SubcatPair.of(T_EX, F_EX)
    for x in P32.labels:
        t = torsion_triangle(P32, x, pair)
        assert t.b == (x,)
        assert compose(P32, t.y, t.x).is_zero()


def test_failure_witnesses():
    bad = SubcatPair.of(["P1"], ["I1"])
    rep = verify_s_torsion(P32, bad)
    assert rep["cond2"]["outcome"] == "fail" and rep["cond2"]["witness"] == ["P1", "I1"]
    assert rep["cond1"]["outcome"] == "fail"
    assert in_star(P32, "P3", bad) is None
    with pytest.raises(PreconditionError):
        torsion_triangle(P32, "P3", bad)


def test_negative_extension_condition_can_fail():
    # Hom(P1, P1[1]) = 0 but E^-1(P1, P1[1]) = Hom(P1, P1) != 0
    assert P32.hom[("P1", "P1[1]")] == 0 and P32.Eneg[("P1", "P1[1]")] == 1
    rep = verify_s_torsion(P32, SubcatPair.of(["P1"], ["P1[1]"]))
    assert rep["cond3"]["outcome"] == "fail"


def test_unknown_label_rejected():
    with pytest.raises(InputError):
        pair_from_json(P32, {"T": ["Q1"], "F": []})


@settings(max_examples=40)
@given(st.sets(st.sampled_from(P32.labels)), st.sets(st.sampled_from(P32.labels)))
def test_random_pairs_verify_iff_enumerated(t, f):
    pair = SubcatPair.of(t, f)
    assert verify_s_torsion(P32, pair)["ok"] == (pair in set(PAIRS32))


def perp_right(p, t):
    return frozenset(y for y in p.labels if all(p.hom[(x, y)] == 0 and p.Eneg[(x, y)] == 0 for x in t))


def perp_left(p, f):
    return frozenset(x for x in p.labels if all(p.hom[(x, y)] == 0 and p.Eneg[(x, y)] == 0 for y in f))


@pytest.mark.parametrize("pair", PAIRS32, ids=lambda pr: f"T{len(pr.t_set)}F{len(pr.f_set)}")
def test_pairs_are_mutual_perpendiculars(pair):
    assert pair.f_set == perp_right(P32, pair.t_set)
    assert pair.t_set == perp_left(P32, pair.f_set)


def test_duality_swaps_pairs():
    d = dualize(P32)
    assert {pr.swapped() for pr in PAIRS32} == set(enumerate_s_torsion(d))


def test_dims_only_cond1_unchecked():
    from extrifact.excat import load_presentation, serialize_presentation

    doc = serialize_presentation(P32)
    doc["kind"] = "dims"
    del doc["ambient"]
    q = load_presentation(doc)
    rep = verify_s_torsion(q, SubcatPair.of(T_EX, F_EX))
    assert rep["cond1"]["outcome"] == "unchecked" and not rep["ok"]
