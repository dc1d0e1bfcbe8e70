import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from extrifact import exactlin as el
from extrifact.errors import InputError

PRIMES = [2, 3, 5]


@st.composite
def matrices(draw, max_rows=4, max_cols=4):
    p = draw(st.sampled_from(PRIMES))
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    vals = draw(st.lists(st.integers(0, p - 1), min_size=r * c, max_size=r * c))
    return p, np.array(vals, dtype=np.int64).reshape(r, c)


def image_size(m, p):
    # brute force: count distinct m @ x over all x in F_p^cols
    seen = set()
    for x in itertools.product(range(p), repeat=m.shape[1]):
        seen.add(tuple(np.mod(m @ np.array(x, dtype=np.int64), p)))
    return len(seen)


@given(matrices())
def test_rank_matches_image_count(pm):
    p, m = pm
    assert p ** el.rank(m, p) == image_size(m, p)


@given(matrices())
def test_kernel_is_kernel_and_complete(pm):
    p, m = pm
    ker = el.kernel_basis(m, p)
    for v in ker:
        assert not np.mod(m @ v, p).any()
    assert len(ker) == m.shape[1] - el.rank(m, p)


@given(matrices())
def test_rref_is_reduced(pm):
    p, m = pm
    r, piv = el.rref(m, p)
    for i, c in enumerate(piv):
        col = r[:, c]
        assert col[i] == 1 and np.count_nonzero(col) == 1
    assert el.rank(r, p) == len(piv)


@given(matrices(), st.data())
def test_solve_round_trip(pm, data):
    p, m = pm
    x = np.array(data.draw(st.lists(st.integers(0, p - 1), min_size=m.shape[1], max_size=m.shape[1])))
    b = np.mod(m @ x, p)
    sol = el.solve(m, b, p)
    assert sol is not None
    assert np.array_equal(np.mod(m @ sol, p), b)


def test_solve_inconsistent():
    m = np.array([[1, 0], [1, 0]])
    assert el.solve(m, [0, 1], 2) is None


@given(st.sampled_from(PRIMES), st.integers(1, 4), st.data())
def test_inverse(p, k, data):
    vals = data.draw(st.lists(st.integers(0, p - 1), min_size=k * k, max_size=k * k))
    m = np.array(vals, dtype=np.int64).reshape(k, k)
    if el.rank(m, p) < k:
        with pytest.raises(InputError):
            el.inverse(m, p)
    else:
        assert np.array_equal(el.matmul(m, el.inverse(m, p), p), el.identity(k))


def test_inv_scalar():
    for p in PRIMES:
        for a in range(1, p):
            assert a * el.inv_scalar(a, p) % p == 1


def test_characteristic_must_be_prime():
    with pytest.raises(InputError):
        el.set_characteristic(4)


def test_characteristic_from_env(monkeypatch):
    monkeypatch.setenv("EXTRIFACT_FIELD_CHAR", "3")
    assert el.characteristic_from_env() == 3
    monkeypatch.setenv("EXTRIFACT_FIELD_CHAR", "6")
    with pytest.raises(InputError):
        el.characteristic_from_env()
    monkeypatch.delenv("EXTRIFACT_FIELD_CHAR")
    assert el.characteristic_from_env() == 2


def test_empty_shapes():
    assert el.rank(el.zeros(0, 3)) == 0
    assert len(el.kernel_basis(el.zeros(0, 3))) == 3
    assert el.inverse(el.zeros(0, 0)).shape == (0, 0)
