import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from extrifact import fixtures as fx
from extrifact.errors import DomainError, PreconditionError
from extrifact.excat import Morphism, build_extended_category, compose, dualize, is_deflation, is_inflation
from extrifact.factsys import (
    FactSystem,
    factorize,
    factorize_deflation,
    factorize_inflation,
    fs_to_torsion,
    generator,
    in_defl_class,
    in_infl_class,
    morphism_sample,
    orthogonal,
    roundtrip_extensional,
    third_term,
    torsion_to_fs,
    verify_fs,
)
from extrifact.torsion import SubcatPair, enumerate_s_torsion

P = build_extended_category(3, 2)
D = dualize(P)
PAIR = SubcatPair.of(fx.T_LABELS, fx.F_LABELS)
PAIRS = enumerate_s_torsion(P)


def test_factorization_of_p1_to_i1():
    f = P.auto_morphism(["P1"], ["I1"])
    fact = factorize_inflation(P, f, PAIR)
    assert fact.first.source == ("P1",) and fact.first.target == ("I2",)
    assert fact.second.source == ("I2",) and fact.second.target == ("I1",)
    assert is_inflation(P, fact.first) == (True, ("P3[1]",))
    assert is_inflation(P, fact.second) == (True, ("S2[1]",))
    assert not in_infl_class(P, f, PAIR.t_set) and not in_infl_class(P, f, PAIR.f_set)
    # the cone P2[1] is an extension of S2[1] by P3[1] and lies in neither set
    assert third_term(P, f) == ("P2[1]",)


@pytest.mark.parametrize("text", fx.T_GENERATORS)
def test_t_generators(text):
    assert in_infl_class(P, generator(P, text), PAIR.t_set)


@pytest.mark.parametrize("text", fx.F_GENERATORS)
def test_f_generators(text):
    assert in_infl_class(P, generator(P, text), PAIR.f_set)


def test_dual_factorization_mirrors():
    f = D.auto_morphism(["I1"], ["P1"])
    fact = factorize_deflation(D, f, PAIR.swapped())
    assert fact.k == ("I2",)
    assert fact.first.describe() == "I1 -> I2" and fact.second.describe() == "I2 -> P1"
    assert in_defl_class(D, fact.first, PAIR.f_set) and in_defl_class(D, fact.second, PAIR.t_set)


def test_non_inflation_rejected():
    g = P.auto_morphism(["I1"], ["P1[1]"])
    ok, _ = is_inflation(P, g)
    if not ok:
        with pytest.raises(DomainError):
            factorize_inflation(P, g, PAIR)
    bad = SubcatPair.of(["P1"], ["I1"])
    with pytest.raises(PreconditionError):
        factorize_inflation(P, P.auto_morphism(["P1"], ["I1"]), bad)


@st.composite
def morphisms(draw, p):
    src = draw(st.lists(st.sampled_from(p.labels), max_size=2))
    tgt = draw(st.lists(st.sampled_from(p.labels), min_size=1, max_size=2))
    c = np.zeros((len(tgt), len(src)), dtype=np.int64)
    for j, y in enumerate(tgt):
        for i, x in enumerate(src):
            if p.hom[(x, y)]:
                c[j, i] = draw(st.integers(0, 1))
    return Morphism(tuple(src), tuple(tgt), c)


@settings(max_examples=80)
@given(st.sampled_from(PAIRS), morphisms(P), st.sampled_from(["inflation", "deflation"]))
def test_random_factorizations(pair, f, side):
    test = is_inflation if side == "inflation" else is_deflation
    assume(test(P, f)[0])
    fact = factorize(P, f, FactSystem(side, pair.t_set, pair.f_set))
    assert np.array_equal(compose(P, fact.second, fact.first).coeffs, f.coeffs)
    ok1, c1 = test(P, fact.first)
    ok2, c2 = test(P, fact.second)
    assert ok1 and ok2
    assert set(c1) <= pair.t_set and set(c2) <= pair.f_set
    assert orthogonal(P, fact.first, fact.second, side)


@pytest.mark.parametrize("side", ["inflation", "deflation"])
def test_example_system_verifies(side):
    fs = torsion_to_fs(P, PAIR, side)
    rep = verify_fs(P, fs)
    assert rep["ok"], rep["findings"][:2]
    assert rep["members"] > 0 and rep["checked"]["axiom1"] == rep["members"]
    assert fs_to_torsion(fs) == PAIR


def test_verify_fs_flags_bad_pair():
    rep = verify_fs(P, FactSystem("inflation", frozenset({"P1"}), frozenset({"I1"})))
    assert not rep["ok"]
    assert {f["check"] for f in rep["findings"]} >= {"vanishing", "s-torsion"}


def test_roundtrip_for_all_pairs():
    assert all(roundtrip_extensional(P, pr) for pr in PAIRS)


def test_morphism_sample_is_exhaustive_on_basis():
    sample = morphism_sample(P)
    basis = sum(1 for x in P.labels for y in P.labels if P.hom[(x, y)])
    assert len(sample) == basis + 2 * len(P.labels)


def test_orthogonality_against_generators():
    # axiom check by hand: l in Infl T is orthogonal to every 0 -> F
    l = generator(P, "P1 -> I2")
    for y in fx.F_LABELS:
        assert orthogonal(P, l, generator(P, f"0 -> {y}"))
    r = generator(P, "I2 -> I1")
    assert not orthogonal(P, generator(P, "0 -> S2[1]"), generator(P, "0 -> I2[1]"))
    assert orthogonal(P, generator(P, "0 -> P3[1]"), r)
