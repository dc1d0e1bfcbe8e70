import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from extrifact import exactlin as el
from extrifact.derived import (
    ChainMap,
    DerivedCategory,
    HomSpace,
    ShiftedInterval,
    cone,
    decompose_perfect,
    direct_sum_complexes,
    hom_shift_dim,
    homology_dims,
    homotopic,
    normalize,
    parse_label,
    stalk,
)
from extrifact.errors import InputError
from extrifact.repkernel import Interval, all_intervals


def objs(n, shifts=(0, 1)):
    return [ShiftedInterval(iv, s) for s in shifts for iv in all_intervals(n)]


@pytest.mark.parametrize("n", [1, 2, 3])
def test_stalk_homology(n):
    for iv in all_intervals(n):
        for s in (-1, 0, 2):
            assert homology_dims(stalk(iv, s, n)) == {-s: iv.dim_vector(n)}


def test_labels_round_trip():
    for o in objs(3, (0, 1, 3)):
        assert parse_label(o.label(3), 3) == o
    assert parse_label(" P2 [ 1 ]", 3) == ShiftedInterval(Interval(2, 3), 1)
    with pytest.raises(InputError):
        parse_label("P2[x]", 3)


@pytest.mark.parametrize("n", [2, 3])
def test_chain_level_hom_matches_closed_form(n):
    os_ = objs(n)
    for x in os_:
        for y in os_:
            for t in (-1, 0, 1, 2):
                hs = HomSpace(stalk(x.interval, x.shift, n), stalk(y.interval, y.shift + t, n))
                assert hs.dim == hom_shift_dim(x, y, t), (x, y, t)


def test_cone_of_p1_to_i1():
    # P1 -> I1 in mod A_2 is onto with kernel P2, so its cone is P2[1]
    n = 2
    dc = DerivedCategory(n)
    p1, i1 = parse_label("P1", n), parse_label("I1", n)
    assert dc.cone_objects([p1], [i1], [[1]]) == [parse_label("P2[1]", n)]
    assert dc.cocone_objects([p1], [i1], [[1]]) == [parse_label("P2", n)]


def test_stalk_of_nonprojective_is_two_term():
    c = stalk(Interval(1, 1), 1, 2)
    assert c.terms == {-2: (2,), -1: (1,)}


@st.composite
def coeff_map(draw, n=3, shifts=(0, 1)):
    os_ = objs(n, shifts)
    src = draw(st.lists(st.sampled_from(os_), min_size=1, max_size=3))
    tgt = draw(st.lists(st.sampled_from(os_), min_size=1, max_size=3))
    c = el.zeros(len(tgt), len(src))
    for j, y in enumerate(tgt):
        for i, x in enumerate(src):
            if hom_shift_dim(x, y):
                c[j, i] = draw(st.integers(0, 1))
    return src, tgt, c


DC3 = DerivedCategory(3)


@given(coeff_map())
def test_coefficients_invert_embed(m):
    src, tgt, c = m
    f = DC3.embed(src, tgt, c)
    assert f.is_chain_map()
    assert np.array_equal(DC3.coefficients(src, tgt, f), c)


@given(coeff_map(), st.data())
def test_compose_matches_chain_level(m, data):
    src, mid, f = m
    os_ = objs(3)
    tgt = data.draw(st.lists(st.sampled_from(os_), min_size=1, max_size=3))
    g = el.zeros(len(tgt), len(mid))
    for j, z in enumerate(tgt):
        for i, y in enumerate(mid):
            if hom_shift_dim(y, z):
                g[j, i] = data.draw(st.integers(0, 1))
    chain = DC3.embed(mid, tgt, g).compose(DC3.embed(src, mid, f))
    assert np.array_equal(DC3.coefficients(src, tgt, chain), DC3.compose(g, f, src, mid, tgt))


def k0(os_, n):
    v = np.zeros(n, dtype=np.int64)
    for o in os_:
        v += np.array(o.k0(n))
    return v


@given(coeff_map())
def test_cone_is_additive_in_k0(m):
    src, tgt, c = m
    cone_objs = DC3.cone_objects(src, tgt, c)
    assert np.array_equal(k0(cone_objs, 3), k0(tgt, 3) - k0(src, 3))


@given(coeff_map())
def test_normal_form_is_homotopy_equivalence(m):
    src, tgt, c = m
    f = DC3.embed(src, tgt, c)
    cc = cone(f)
    nf = normalize(cc)
    assert sorted(nf.objects) == decompose_perfect(cc)
    assert homotopic(nf.alpha.compose(nf.beta), cc.identity())
    assert homotopic(nf.beta.compose(nf.alpha), nf.canonical.identity())


@given(coeff_map())
def test_cone_triangle_composes_to_zero(m):
    src, tgt, c = m
    cobjs, g = DC3.cone_triangle(src, tgt, c)
    assert not DC3.compose(g, c, src, tgt, cobjs).any()
    aobjs, h = DC3.cocone_triangle(src, tgt, c)
    assert not DC3.compose(c, h, aobjs, src, tgt).any()


def test_realize_extension_examples():
    n = 3
    dc = DerivedCategory(n)
    L = lambda s: [parse_label(x, n) for x in s.split("+")]
    for c, a, mid in [("I2", "P2", "P1+S2"), ("S2", "P3", "P2"), ("P3[1]", "P1", "I2")]:
        b, x, y = dc.realize_extension(L(c), L(a), [[1]])
        assert sorted(b) == sorted(L(mid))
        assert not dc.compose(y, x, L(a), b, L(c)).any()
