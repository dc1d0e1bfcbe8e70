from collections import Counter

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from extrifact import exactlin as el
from extrifact.errors import InputError
from extrifact.repkernel import (
    Interval,
    QuiverRep,
    all_intervals,
    decompose_rep,
    direct_sum,
    euler_form,
    ext_dim,
    ext_middle,
    extension_rep,
    hom_dim,
    parse_interval,
    rep_ext_cocycles,
    rep_ext_oracle,
    rep_hom_oracle,
)


@pytest.mark.parametrize("p", [2, 3])
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_closed_forms_match_linear_algebra(n, p):
    ivs = all_intervals(n)
    reps = {iv: QuiverRep.from_interval(iv, n, p) for iv in ivs}
    for x in ivs:
        for y in ivs:
            assert hom_dim(x, y) == rep_hom_oracle(reps[x], reps[y], p), (x, y)
            assert ext_dim(x, y) == rep_ext_oracle(reps[x], reps[y], p), (x, y)


@pytest.mark.parametrize("n", range(1, 6))
def test_euler_form_identity(n):
    for x in all_intervals(n):
        for y in all_intervals(n):
            assert hom_dim(x, y) - ext_dim(x, y) == euler_form(x.dim_vector(n), y.dim_vector(n))


def test_ext_is_one_sided_shift():
    # S1 -> P2 is the only nonsplit extension in mod A_2 (middle term P1)
    n = 2
    pairs = [(x, y) for x in all_intervals(n) for y in all_intervals(n) if ext_dim(x, y)]
    assert pairs == [(Interval(1, 1), Interval(2, 2))]
    assert ext_middle(*pairs[0]) == [Interval(1, 2)]


def test_projectives_and_injectives():
    n = 4
    for i in range(1, n + 1):
        pr = Interval(i, n)
        inj = Interval(1, i)
        assert all(ext_dim(pr, y) == 0 for y in all_intervals(n))
        assert all(ext_dim(x, inj) == 0 for x in all_intervals(n))


def test_names_n3():
    names = sorted(iv.name(3) for iv in all_intervals(3))
    assert names == sorted(["P1", "P2", "P3", "S2", "I1", "I2"])
    assert Interval(2, 3).name(4) == "M2_3"


def test_parse_interval_aliases():
    assert parse_interval("S1", 2) == Interval(1, 1) == parse_interval("I1", 2)
    assert parse_interval("S2", 2) == parse_interval("P2", 2)
    assert parse_interval("M2_3", 4) == Interval(2, 3)
    for bad in ["Q1", "P", "I4", "M3_2"]:
        with pytest.raises(InputError):
            parse_interval(bad, 3)


def rank_multiplicities(r: QuiverRep, p):
    # multiplicity of [a,b] by inclusion-exclusion over path-map ranks
    n = r.n

    def rk(a, b):
        if a < 1 or b > n:
            return 0
        return el.rank(r.path_map(a, b, p), p)

    out = Counter()
    for a in range(1, n + 1):
        for b in range(a, n + 1):
            m = rk(a, b) - rk(a - 1, b) - rk(a, b + 1) + rk(a - 1, b + 1)
            if m:
                out[Interval(a, b)] = m
    return out


@given(st.integers(1, 4), st.data())
def test_decompose_matches_rank_invariants(n, data):
    ivs = all_intervals(n)
    parts = data.draw(st.lists(st.sampled_from(ivs), min_size=1, max_size=4))
    p = 2
    r = direct_sum([QuiverRep.from_interval(iv, n, p) for iv in parts])
    # scramble by a random invertible base change at each vertex
    rng = np.random.default_rng(data.draw(st.integers(0, 2**32 - 1)))
    bases = []
    for v in range(n):
        d = r.dims[v]
        g = el.identity(d)
        for _ in range(3 * d):
            i, j = rng.integers(0, d, size=2) if d else (0, 0)
            if i != j:
                g[i] = (g[i] + g[j]) % p
        bases.append(g[rng.permutation(d)] if d else g)
    maps = []
    for v in range(n - 1):
        maps.append(el.matmul(el.matmul(bases[v + 1], r.maps[v], p), el.inverse(bases[v], p), p))
    s = QuiverRep(n, r.dims, maps)
    assert Counter(decompose_rep(s, p)) == Counter(parts)
    assert rank_multiplicities(s, p) == Counter(parts)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_ext_middle_terms(n):
    for x in all_intervals(n):
        for y in all_intervals(n):
            if not ext_dim(x, y):
                continue
            rx, ry = QuiverRep.from_interval(x, n), QuiverRep.from_interval(y, n)
            (cocycle,) = rep_ext_cocycles(rx, ry)
            mid = extension_rep(rx, ry, cocycle)
            assert sorted(rank_multiplicities(mid, 2).elements()) == ext_middle(x, y)
