import dataclasses
import random

import pytest
from hypothesis import given, settings, strategies as st

from g2spider.enumeration import random_closed_web, random_web
from g2spider.qfield import ONE, parse_laurent
from g2spider.rewrite import (
    RELATIONS,
    BudgetExceeded,
    Reducer,
    evaluate_closed,
    find_site,
    list_sites,
    random_chooser,
    reduce,
)
from g2spider.web import (
    L,
    WebCombo,
    Y,
    cap,
    circle,
    compose,
    identity,
    is_basis_web,
    pair,
    polygon,
    strand,
    tensor,
    theta,
)

DELTA = parse_laurent("q^10 + q^8 + q^2 + 1 + q^-2 + q^-8 + q^-10").to_rf()
BIGON = parse_laurent("-q^6 - q^4 - q^2 - q^-2 - q^-4 - q^-6").to_rf()


def test_circle():
    assert evaluate_closed(circle()) == DELTA
    assert evaluate_closed(tensor(circle(), circle())) == DELTA**2


def test_bigon_on_a_strand():
    out = reduce(compose(Y(), L()))
    assert list(out.items()) == [(strand(), BIGON)]


def test_theta():
    assert evaluate_closed(theta()) == BIGON * DELTA


def test_lollipop_vanishes():
    assert reduce(compose(Y(), cap())).is_zero()


@pytest.mark.parametrize(
    "k,coeffs",
    [
        (3, ["q^4 + 1 + q^-4"]),
        (4, ["-q^2 - q^-2"] * 2 + ["q^2 + 1 + q^-2"] * 2),
        (5, ["1"] * 5 + ["-1"] * 5),
    ],
)
def test_polygon_relations(k, coeffs):
    got = sorted(str(c) for _, c in reduce(polygon(k)).items())
    assert got == sorted(coeffs)


def test_site_priority():
    w = tensor(polygon(3), compose(Y(), L()))
    assert [s.relation for s in list_sites(w)] == ["bigon", "triangle"]
    assert find_site(w).relation == "bigon"
    assert find_site(tensor(circle(), compose(Y(), cap()))).relation == "loop"
    assert find_site(compose(Y(), cap())).relation == "lollipop"
    assert find_site(identity(2)) is None


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_reductions_end_in_basis_webs(seed):
    rng = random.Random(seed)
    w = random_web(rng, rng.randint(0, 3), rng.randint(0, 3), 10)
    out = reduce(w)
    assert all(is_basis_web(b) for b, _ in out.items())
    assert reduce(out) == out


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_confluence_closed(seed):
    w = random_closed_web(random.Random(seed), 12)
    a = Reducer(chooser=random_chooser(seed), split_closed=False).evaluate_closed(w)
    b = Reducer(chooser=random_chooser(seed + 1), split_closed=False).evaluate_closed(w)
    assert a == b == evaluate_closed(w)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_confluence_open(seed):
    rng = random.Random(seed)
    w = random_web(rng, rng.randint(0, 3), rng.randint(1, 3), 12)
    a = Reducer(chooser=random_chooser(seed)).reduce(w)
    b = Reducer(chooser=random_chooser(seed + 7), split_closed=False).reduce(w)
    assert a == b


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_reduction_respects_composition(seed):
    rng = random.Random(seed)
    a = random_web(rng, 2, 2, 6)
    b = random_web(rng, 2, 2, 6)
    assert reduce(compose(a, b)) == reduce(reduce(a).compose(reduce(b)))


def test_wrong_constant_breaks_confluence():
    # a single sign change in the relation table is detected by two orders
    bad = dataclasses.replace(RELATIONS, pentagon_forest=ONE)
    rng = random.Random(1)
    mismatches = 0
    for i in range(60):
        w = random_closed_web(rng, 12)
        a = Reducer(bad, chooser=random_chooser(2 * i), split_closed=False).evaluate_closed(w)
        b = Reducer(bad, chooser=random_chooser(2 * i + 1), split_closed=False).evaluate_closed(w)
        mismatches += a != b
    assert mismatches > 0


def test_pairing_of_strands_is_delta():
    assert pair(identity(1), identity(1)) == DELTA
    assert pair(identity(2), identity(2)) == DELTA**2


def test_trace_replay():
    r = Reducer(trace=True, chooser=random_chooser(3))
    w = polygon(5)
    out = r.reduce(w)
    assert len(r.trace) > 0
    assert Reducer.replay(r.trace, w) == out


def test_cache_round_trip(tmp_path):
    path = tmp_path / "cache.jsonl"
    r = Reducer(cache_path=path)
    w = random_web(random.Random(2), 2, 2, 10)
    out = r.reduce(w)
    r.flush()
    r2 = Reducer(cache_path=path)
    assert r2.stats["cache_loaded"] > 0
    assert r2.reduce(w) == out and r2.stats["rewrites"] == 0
    other = dataclasses.replace(RELATIONS, triangle=ONE)
    assert Reducer(other, cache_path=path).stats["cache_loaded"] == 0


def test_budget():
    with pytest.raises(BudgetExceeded):
        Reducer(budget=2).reduce(tensor(polygon(5), polygon(4)))
    with pytest.raises(ValueError):
        Reducer(budget=0)


def test_reduce_accepts_combinations():
    x = WebCombo.from_terms([(compose(Y(), L()), ONE), (strand(), ONE)])
    assert reduce(x).coeff(strand()) == BIGON + 1
