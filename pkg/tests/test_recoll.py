import copy
import json

import numpy as np
import pytest

from extrifact.errors import InputError, PreconditionError
from extrifact.excat import Morphism, build_extended_category, build_module_category, dualize, zero_category
from extrifact.factsys import torsion_to_fs, verify_fs
from extrifact.recoll import (
    build_product_recollement,
    check_exactness_hypotheses,
    check_neg_ext_adjoint_iso,
    check_recollement,
    functor_exactness,
    glue_fs,
    glue_torsion,
    load_recollement,
    load_triangular_fixture,
    serialize_recollement,
    triangular_fixture,
)
from extrifact.torsion import SubcatPair, enumerate_s_torsion, pair_from_json

M1 = build_module_category(1)
M2 = build_module_category(2)
R2 = build_product_recollement(M2, M2)
PAIRS2 = enumerate_s_torsion(M2)


def outcomes(rep):
    return {f["check"]: f["outcome"] for f in rep["findings"]}


def test_product_recollement_axioms():
    rep = check_recollement(R2)
    assert rep["ok"], [f for f in rep["findings"] if f["outcome"] != "pass"]
    assert all(v == "pass" for v in outcomes(rep).values())
    assert check_exactness_hypotheses(R2)["ok"]


def test_degenerate_a_zero():
    r = build_product_recollement(zero_category(), M2)
    assert check_recollement(r)["ok"]
    assert check_exactness_hypotheses(r)["ok"]
    g = glue_torsion(r, SubcatPair.of([], []), PAIRS2[1])
    assert g["verification"]["ok"]


def test_glue_k_times_k():
    r = build_product_recollement(M1, M1)
    g = glue_torsion(r, SubcatPair.of(["P1"], []), SubcatPair.of([], ["P1"]))
    assert g["pair"] == SubcatPair.of(["A:P1"], ["C:P1"])
    assert g["verification"]["ok"]
    g = glue_torsion(r, SubcatPair.of(["P1"], []), SubcatPair.of(["P1"], []))
    assert g["pair"] == SubcatPair.of(r.B.labels, [])


def test_glue_named_example():
    p1 = pair_from_json(M2, {"T": ["S2"], "F": ["S1"]})
    p2 = pair_from_json(M2, {"T": ["S1", "P1"], "F": ["S2"]})
    g = glue_torsion(R2, p1, p2)
    assert g["verification"]["ok"]
    assert g["pair"] == SubcatPair.of(["A:P2", "C:I1", "C:P1"], ["A:I1", "C:P2"])


def prefixed(prefix, labels):
    return {f"{prefix}:{l}" for l in labels}


@pytest.mark.parametrize("a", PAIRS2, ids=lambda p: f"A{sorted(p.t_set)}")
@pytest.mark.parametrize("c", PAIRS2, ids=lambda p: f"C{sorted(p.t_set)}")
def test_glue_all_combinations(a, c):
    g = glue_torsion(R2, a, c)
    assert g["verification"]["ok"]
    # componentwise union on a product
    assert g["pair"].t_set == prefixed("A", a.t_set) | prefixed("C", c.t_set)
    assert g["pair"].f_set == prefixed("A", a.f_set) | prefixed("C", c.f_set)
    fs = glue_fs(R2, torsion_to_fs(M2, a), torsion_to_fs(M2, c))
    assert not fs["disagreements"] and fs["checked"] > 0
    assert verify_fs(R2.B, fs["fs"])["ok"]


def test_glue_deflation_side_on_dual_data():
    d = dualize(M2)
    rd = build_product_recollement(d, d)
    for a in PAIRS2[:3]:
        for c in PAIRS2[-3:]:
            up = glue_torsion(R2, a, c)["pair"]
            down = glue_fs(rd, torsion_to_fs(d, a.swapped(), "deflation"), torsion_to_fs(d, c.swapped(), "deflation"))
            assert down["fs"].pair == up.swapped()
            assert not down["disagreements"]


def test_unverified_input_rejected():
    with pytest.raises(PreconditionError):
        glue_torsion(R2, SubcatPair.of(["P1"], ["I1"]), PAIRS2[0])


def test_triangular_fixture_is_rejected():
    r = triangular_fixture()
    assert check_recollement(r)["ok"]
    rep = check_exactness_hypotheses(r)
    assert not rep["ok"]
    failing = [f for f in rep["findings"] if f["outcome"] == "fail"]
    assert [f["check"] for f in failing] == ["i_shriek exact"]
    assert failing[0]["witness"]["conflation"] == "P2 -> P1 -> I1"
    assert functor_exactness(r, "i_upper") is None


def test_triangular_fixture_lemma_gated():
    rep = check_neg_ext_adjoint_iso(triangular_fixture())
    out = outcomes(rep)
    assert out["Lemma iso for i_shriek with left adjoint i_star"] == "hypotheses unmet"
    assert out["Lemma iso for j_upper with left adjoint j_lower"] == "pass"


def test_shipped_fixture_matches_builder():
    assert serialize_recollement(load_triangular_fixture()) == serialize_recollement(triangular_fixture())


@pytest.mark.parametrize("r", [R2, triangular_fixture()], ids=["product", "triangular"])
def test_document_round_trip(r):
    doc = serialize_recollement(r)
    again = load_recollement(json.dumps(doc))
    assert serialize_recollement(again) == doc
    assert check_recollement(again)["status"] == check_recollement(r)["status"]


def test_lemma_iso_on_extended_products():
    p = build_extended_category(3, 2)
    rep = check_neg_ext_adjoint_iso(build_product_recollement(p, p))
    assert rep["ok"] and all(f["outcome"] == "pass" for f in rep["findings"])


def test_lemma_iso_abelian_product_is_zero():
    rep = check_neg_ext_adjoint_iso(R2)
    assert rep["ok"]
    assert all(v == 0 for v in R2.B.Eneg.values())


def test_broken_unit_detected():
    r = triangular_fixture()
    fam = r.units["j_upper,j_star"]["unit"]
    fam["P2"] = Morphism(("P2",), ("P1",), [[0]])
    out = outcomes(check_recollement(r))
    assert out["(R1) j_upper -| j_star: triangle identities"] == "fail"


def test_broken_object_map_detected():
    r = triangular_fixture()
    r.functors["j_upper"].object_map["I1"] = ("P1",)
    out = outcomes(check_recollement(r))
    assert out["(R2) Im i_* = Ker j^*"] == "fail"


def test_load_rejects_bad_documents():
    doc = serialize_recollement(triangular_fixture())
    bad = copy.deepcopy(doc)
    del bad["functors"]["j_star"]
    with pytest.raises(InputError):
        load_recollement(bad)
    bad = copy.deepcopy(doc)
    bad["functors"]["i_star"]["objects"]["P1"] = ["Q9"]
    with pytest.raises(InputError, match="unknown label"):
        load_recollement(bad)
    bad = copy.deepcopy(doc)
    key = next(iter(bad["functors"]["i_upper"]["homs"]))
    bad["functors"]["i_upper"]["homs"][key] = [[1, 1]]
    with pytest.raises(InputError, match="shape"):
        load_recollement(bad)
