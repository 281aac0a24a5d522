import random

import pytest
from hypothesis import given, settings, strategies as st

from g2spider.enumeration import basis_webs, random_web
from g2spider.qfield import ONE, q
from g2spider.web import (
    H_web,
    I_web,
    L,
    Web,
    WebCombo,
    WebError,
    Y,
    cap,
    capcup_web,
    circle,
    compose,
    cup,
    down,
    empty,
    face_census,
    identity,
    is_basis_web,
    mirror,
    pair,
    parse_web,
    partial_trace,
    polygon,
    print_web,
    tensor,
    theta,
    trace_closure,
    up,
    web_from_code,
)

NAMED = [empty(), circle(), identity(3), cup(), cap(), up(), down(), Y(), L(), I_web(), H_web(), capcup_web(), theta()]


def relabel(w: Web, perm: dict) -> Web:
    def f(e):
        return (perm[e[0]], e[1]) if isinstance(e[0], int) else e

    return Web(w.bottom, w.top, {f(a): f(b) for a, b in w.adj.items()}, w.loops)


def rotate_slots(w: Web, v: int, k: int) -> Web:
    def f(e):
        return (e[0], (e[1] + k) % 3) if e[0] == v else e

    return Web(w.bottom, w.top, {f(a): f(b) for a, b in w.adj.items()}, w.loops)


@pytest.mark.parametrize("w", NAMED, ids=repr)
def test_print_parse_round_trip(w):
    assert parse_web(print_web(w)) == w
    assert web_from_code(w.code) == w


def test_round_trip_over_a_basis():
    for w in basis_webs(3, 3):
        assert parse_web(print_web(w)).code == w.code


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_code_ignores_vertex_names_and_slot_rotation(seed):
    rng = random.Random(seed)
    w = random_web(rng, rng.randint(0, 3), rng.randint(0, 3), 8)
    vs = w.vertices
    perm = dict(zip(vs, rng.sample(range(100, 100 + len(vs)), len(vs))))
    assert relabel(w, perm).code == w.code
    if vs:
        assert rotate_slots(w, vs[0], rng.randint(1, 2)).code == w.code


def test_distinct_webs_have_distinct_codes():
    for n in (2, 3):
        ws = basis_webs(n, n)
        assert len({w.code for w in ws}) == len(ws)
    assert identity(2).code != capcup_web().code
    assert I_web().code != H_web().code


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_compose_is_associative(seed):
    rng = random.Random(seed)
    a = random_web(rng, 2, 3, 6)
    b = random_web(rng, 3, 2, 6)
    c = random_web(rng, 2, 2, 6)
    assert compose(compose(a, b), c) == compose(a, compose(b, c))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_tensor_and_mirror_laws(seed):
    rng = random.Random(seed)
    a, b, c = (random_web(rng, rng.randint(0, 2), rng.randint(0, 2), 5) for _ in range(3))
    assert tensor(tensor(a, b), c) == tensor(a, tensor(b, c))
    assert mirror(mirror(a)) == a
    assert compose(identity(a.bottom), a) == a == compose(a, identity(a.top))
    assert mirror(tensor(a, b)) == tensor(mirror(a), mirror(b))


def test_mirror_swaps_named_pieces():
    assert mirror(cup()) == cap()
    assert mirror(up()) == down()
    assert mirror(Y()) == L()
    assert mirror(H_web()) == H_web()
    assert mirror(I_web()) == I_web()


def test_compose_arity_mismatch():
    with pytest.raises(WebError):
        compose(cup(), identity(3))


def test_closing_creates_loops():
    assert compose(cup(), cap()).loops == 1
    assert trace_closure(identity(2)).loops == 2
    closed = partial_trace(identity(2), 1)
    assert closed.loops == 1 and closed.arity == (1, 1)


@pytest.mark.parametrize(
    "text",
    [
        "web { bottom: 1; top: 1; vertices: 0; rot: ; edges: B1-B1 }",
        "web { bottom: 2; top: 0; vertices: 0; rot: }",  # dangling points
        "web { bottom: 0; top: 3; vertices: 1; rot: v1 = (T1, T2) }",
        "web { bottom: 0; top: 0; vertices: 1; rot: v2 = (T1, T2, T3) }",
        "web { top: 2; vertices: 0; rot: ; edges: T1-T2 }",
        "graph { }",
    ],
)
def test_parse_rejects_bad_input(text):
    with pytest.raises(WebError):
        parse_web(text)


def test_nonplanar_rotation_rejected():
    # the crossing of two strands is not a planar web
    with pytest.raises(WebError):
        Web(2, 2, {("B", 1): ("T", 2), ("T", 2): ("B", 1), ("B", 2): ("T", 1), ("T", 1): ("B", 2)})


@pytest.mark.parametrize("k", [2, 3, 4, 5, 6])
def test_polygon_faces(k):
    w = polygon(k)
    cen = face_census(w)
    assert cen.internal_sizes == [k]
    assert is_basis_web(w) == (k >= 6)


def test_basis_predicate():
    assert is_basis_web(H_web()) and is_basis_web(identity(3))
    assert not is_basis_web(circle())
    assert not is_basis_web(theta())
    assert not is_basis_web(compose(Y(), L()))


def test_combo_arithmetic_and_serialization():
    x = WebCombo.from_terms([(I_web(), q), (H_web(), ONE)])
    y = WebCombo.from_terms([(I_web(), -q), (identity(2), q**2)])
    s = x + y
    assert s.coeff(I_web()).is_zero() and len(s) == 2
    assert (x - x).is_zero()
    assert WebCombo.from_jsonl(s.to_jsonl()) == s
    assert x.scale(q).coeff(H_web()) == q
    with pytest.raises(WebError):
        x + WebCombo.from_web(cup())


def test_pairing_is_symmetric():
    ws = basis_webs(2, 2)
    for a in ws:
        for b in ws:
            assert pair(a, b) == pair(b, a)
