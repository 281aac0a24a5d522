import itertools
import random
from fractions import Fraction

import pytest

from g2spider.braid import BraidAlgebraElement, BraidWord, eval_braid
from g2spider.enumeration import basis_webs
from g2spider.qfield import ONE, q
from g2spider.rewrite import reduce
from g2spider.surject import (
    PATTERNS,
    Catalog,
    Decomposer,
    GeneratorCounts,
    SurjectionError,
    base_case_decompose,
    build_catalog,
    decompose,
    default_catalog,
    entry_pattern,
    euler_census,
    find_peel_site,
    generator_counts,
    pattern_web,
    peel,
    plan_base_case,
    separate,
)
from g2spider.web import (
    H_web,
    I_web,
    L,
    WebCombo,
    Y,
    cap,
    capcup_web,
    compose,
    cup,
    down,
    identity,
    mirror,
    tensor,
    up,
)


@pytest.fixture(scope="module")
def catalog():
    return default_catalog()


def round_trip(x, el):
    target = reduce(x if isinstance(x, WebCombo) else WebCombo.from_web(x))
    return eval_braid(el) == target


@pytest.mark.parametrize("n", [1, 2, 3])
def test_euler_measure_per_component(n):
    for w in basis_webs(n, n):
        for cen in euler_census(w):
            assert cen.measure() == 1
            if len(cen.vertices) >= 2:
                assert cen.small_boundary_faces >= 3


def test_peel_sites_on_two_strands():
    s = find_peel_site(I_web())
    assert (s.kind, s.i) == ("I", 1)
    assert find_peel_site(H_web()).kind == "H"
    assert find_peel_site(identity(2)) is None


def test_peel_composes_back():
    for w in basis_webs(3, 3):
        site = find_peel_site(w)
        if site is None:
            continue
        factor, rem = peel(w, site)
        assert rem.n_vertices == w.n_vertices - 2
        back = compose(factor, rem) if site.wall == "bottom" else compose(rem, factor)
        assert back == w


def _counts_up_to(k):
    for t in itertools.product(range(k + 1), repeat=6):
        a, b, c, d, e, f = t
        if 2 * a + 3 * c + e == 2 * b + 3 * d + f:
            yield GeneratorCounts(*t)


def test_plan_covers_every_count_tuple():
    checked = 0
    for counts in _counts_up_to(4):
        used = [0] * 6
        names = "cup cap up down Y L".split()
        for name, mirrored in plan_base_case(counts):
            for k in entry_pattern(name, mirrored):
                used[names.index(k)] += 1
        assert tuple(used) == counts.as_tuple()
        checked += 1
    assert checked > 100


def test_plan_rejects_unbalanced_counts():
    with pytest.raises(SurjectionError):
        plan_base_case(GeneratorCounts(a=1))


@pytest.mark.parametrize("name", sorted(PATTERNS))
def test_pattern_webs_are_endomorphisms(name):
    w = pattern_web(name)
    assert w.bottom == w.top
    assert generator_counts(w) is not None


def test_separate_is_an_isotopy():
    # the strand on the left is carried past the cap and the cup
    w = tensor(identity(1), capcup_web())
    comps = w.components()
    pieces = [[i] for i in reversed(range(len(comps)))]
    below, block, above = separate(w, pieces)
    lhs = reduce(eval_braid(below).compose(WebCombo.from_web(block)).compose(eval_braid(above)))
    assert lhs == reduce(WebCombo.from_web(w))


@pytest.mark.parametrize("n", [2, 3])
def test_separate_random_orders(n):
    rng = random.Random(n)
    for w in basis_webs(n, n)[:12]:
        comps = w.components()
        order = list(range(len(comps)))
        rng.shuffle(order)
        below, block, above = separate(w, [[i] for i in order])
        lhs = reduce(eval_braid(below).compose(WebCombo.from_web(block)).compose(eval_braid(above)))
        assert lhs == reduce(WebCombo.from_web(w))


def test_catalog_entries_round_trip(catalog):
    assert {e.name for e in catalog} == {"I", "H", *PATTERNS}
    for e in catalog:
        assert round_trip(e.web, e.element)


def test_catalog_json_round_trip(tmp_path, catalog):
    text = catalog.to_json("v1")
    back = Catalog.from_json(text, "v1")
    assert back.to_json("v1") == text
    assert Catalog.from_json(text, "other") is None
    path = tmp_path / "cat.json"
    first = build_catalog(path=path)
    assert path.exists()
    assert {e.name for e in build_catalog(path=path)} == {e.name for e in first}


def test_base_case_identity_is_empty(catalog):
    el = base_case_decompose(identity(3), catalog=catalog)
    assert el.expand() == BraidAlgebraElement.identity(3)


@pytest.mark.parametrize(
    "w",
    [
        capcup_web(),
        tensor(identity(1), capcup_web()),
        tensor(tensor(down(), Y()), tensor(Y(), Y())),
        tensor(tensor(L(), L()), cup()),
        tensor(tensor(Y(), Y()), cap()),
        tensor(down(), up()),
    ],
    ids=["capcup", "strand_capcup", "down_Ys", "L_L_cup", "Y_Y_cap", "downup"],
)
def test_base_case_round_trip(w, catalog):
    assert w.bottom == w.top
    assert round_trip(w, base_case_decompose(w, catalog=catalog))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_decompose_every_basis_web(n, catalog):
    d = Decomposer(catalog)
    for w in basis_webs(n, n):
        assert round_trip(w, d.decompose(w))


def test_decompose_some_four_strand_webs(catalog):
    rng = random.Random(0)
    ws = rng.sample(basis_webs(4, 4), 6)
    d = Decomposer(catalog)
    for w in ws:
        assert round_trip(w, d.decompose(w))


def test_decompose_combination(catalog):
    x = WebCombo.from_terms([(H_web(), q), (I_web(), ONE / (1 + q)), (identity(2), Fraction(3))])
    assert round_trip(x, decompose(x, catalog=catalog))


def test_decompose_tensor_in_both_orders(catalog):
    a, b = H_web(), mirror(tensor(identity(1), I_web()))
    for w in (tensor(a, b), tensor(b, a)):
        assert round_trip(w, decompose(w, catalog=catalog))


def test_decompose_rejects_non_endomorphisms(catalog):
    with pytest.raises(SurjectionError):
        decompose(cup(), catalog=catalog)
    with pytest.raises(SurjectionError):
        base_case_decompose(tensor(cup(), identity(1)), catalog=catalog)


def test_decompose_budget(catalog):
    w = max(basis_webs(3, 3), key=lambda w: w.n_vertices)
    with pytest.raises(SurjectionError):
        decompose(w, catalog=catalog, budget=1)
    assert round_trip(w, decompose(w, catalog=catalog, budget=1000))


def test_word_factor_is_identity_for_empty_word():
    assert eval_braid(BraidWord(2)) == WebCombo.from_web(identity(2))
