import random

import pytest
from hypothesis import given, settings, strategies as st

from g2spider.checks import invariant_dimensions
from g2spider.enumeration import basis_dimension, basis_webs, disk_basis, random_closed_web, random_web, rotate_disk
from g2spider.web import compose, is_basis_web, mirror

DIMS = invariant_dimensions(8)


def test_invariant_dimension_oracle_small_cases():
    # V (x) V = 1 + 7 + 14 + 27, so one invariant; V^3 has exactly one too
    assert DIMS[:4] == [1, 0, 1, 1]


@pytest.mark.parametrize("N", range(9))
def test_disk_counts_match_invariant_dimensions(N):
    assert len(disk_basis(N)) == DIMS[N]


@pytest.mark.parametrize("n,m", [(0, 0), (1, 1), (2, 2), (3, 3), (1, 2), (2, 4), (3, 5), (0, 6)])
def test_rectangle_counts(n, m):
    assert basis_dimension(n, m) == DIMS[n + m]


@pytest.mark.parametrize("n,m", [(2, 2), (3, 3), (1, 4)])
def test_basis_webs_are_distinct_basis_webs(n, m):
    ws = basis_webs(n, m)
    assert all(is_basis_web(w) and w.arity == (n, m) for w in ws)
    assert len({w.code for w in ws}) == len(ws)
    assert [w.code for w in ws] == sorted(w.code for w in ws)


@pytest.mark.parametrize("N", [3, 5, 6])
def test_disk_basis_closed_under_rotation(N):
    codes = {w.code for w in disk_basis(N)}
    assert {rotate_disk(w).code for w in disk_basis(N)} == codes


def test_basis_closed_under_mirror():
    codes = {w.code for w in basis_webs(3, 3)}
    assert {mirror(w).code for w in basis_webs(3, 3)} == codes


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 4), st.integers(0, 4))
def test_random_web_arity_and_size(seed, n, m):
    w = random_web(random.Random(seed), n, m, max_vertices=12)
    assert w.arity == (n, m)
    w.validate()


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_random_closed_web(seed):
    w = random_closed_web(random.Random(seed), 12)
    assert w.arity == (0, 0)
    assert 2 <= w.n_vertices <= 12


def test_random_web_is_deterministic():
    a = random_web(random.Random(5), 2, 3)
    b = random_web(random.Random(5), 2, 3)
    assert a == b and compose(a, mirror(a)).arity == (2, 2)
