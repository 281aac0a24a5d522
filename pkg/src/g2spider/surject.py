"""Expressing webs as images of braid algebra elements.

Every basis web from ``n`` points to ``n`` points is written as the image of
an element of the braid algebra on ``n`` strands.  The web is taken apart
from its boundary: a vertex with two legs on adjacent wall points (together
with its neighbour), or an H spanning two adjacent wall points, is peeled off
as a factor ``I_i`` or ``H_i``, and both factors are themselves images of
braid algebra elements on two strands.  What is left has two fewer vertices.
When no such piece sits on adjacent wall points, the offending component is
first slid clear of the others by braids that pass every other strand in
front of it.  Webs whose components have at most one vertex each are handled
by a finite catalogue of small endomorphism webs.

The per-component face census behind this (see :func:`euler_census`) is what
guarantees a peelable piece: with angles of 2pi/3 at every vertex, a
component has total curvature 1, internal faces with ``k >= 6`` sides add
``1 - k/6 <= 0`` and a boundary face meeting ``k`` edges adds ``2/3 - k/6``,
so boundary faces with two or three edges must exist.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .braid import (
    BraidAlgebraElement,
    BraidError,
    BraidEvaluator,
    BraidWord,
    FactoredElement,
    default_evaluator,
)
from .qfield import ONE, RationalFunction
from .rewrite import Reducer, RELATIONS
from .web import (
    H_web,
    I_web,
    Web,
    WebCombo,
    WebError,
    cap,
    capcup_web,
    compose,
    cup,
    down,
    identity,
    is_boundary,
    is_slot,
    L,
    mirror,
    tensor,
    up,
    Y,
)

__all__ = [
    "SurjectionError",
    "ComponentCensus",
    "euler_census",
    "PeelSite",
    "find_peel_site",
    "peel",
    "separate",
    "GeneratorCounts",
    "generator_counts",
    "Catalog",
    "build_catalog",
    "factor_as_braid",
    "base_case_decompose",
    "Decomposer",
    "decompose",
]


class SurjectionError(RuntimeError):
    """A decomposition step failed its own consistency check."""


# ---------------------------------------------------------------------------
# face census
# ---------------------------------------------------------------------------


@dataclass
class ComponentCensus:
    """Face counts of one connected component drawn alone in the rectangle.

    ``boundary[k]`` counts faces meeting the boundary and ``k`` edges,
    ``internal[k]`` counts internal faces with ``k`` sides.
    """

    vertices: frozenset
    points: tuple
    boundary: dict[int, int] = field(default_factory=dict)
    internal: dict[int, int] = field(default_factory=dict)

    def measure(self) -> Fraction:
        """Total curvature; equals 1 for every component with boundary points."""
        tot = Fraction(0)
        for k, c in self.boundary.items():
            tot += c * (Fraction(2, 3) - Fraction(k, 6))
        for k, c in self.internal.items():
            tot += c * (1 - Fraction(k, 6))
        return tot

    @property
    def small_boundary_faces(self) -> int:
        return self.boundary.get(2, 0) + self.boundary.get(3, 0)


def euler_census(w: Web) -> list[ComponentCensus]:
    """Census of every component of ``w`` that touches the boundary."""
    out = []
    for verts, pts in w.components():
        if not pts:
            continue
        sub = w.restrict(verts, pts)
        cen = ComponentCensus(verts, pts)
        for f in sub.faces():
            tgt = cen.internal if f.internal else cen.boundary
            tgt[f.size] = tgt.get(f.size, 0) + 1
        out.append(cen)
    return out


# ---------------------------------------------------------------------------
# peeling
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PeelSite:
    """A removable piece on wall points ``i, i+1`` (1-based) of ``wall``.

    ``kind`` is ``"H"`` (two adjacent vertices, each with one leg on the
    wall) or ``"I"`` (a vertex with both legs on the wall whose third edge
    runs to another vertex).
    """

    wall: str
    i: int
    kind: str


def _bottom_sites(w: Web) -> list[PeelSite]:
    out = []
    adj = w.adj
    for f in w.faces():
        if f.size not in (2, 3) or f.boundary_contacts != 1 or f.walls != ("bottom",):
            continue
        ends = {d for d in f.darts if is_boundary(d)} | {adj[d] for d in f.darts if is_slot(adj[d]) is False}
        ends = sorted(e[1] for e in ends if e[0] == "B")
        if len(ends) != 2 or ends[1] != ends[0] + 1:
            continue
        i = ends[0]
        verts = {d[0] for d in f.darts if is_slot(d)}
        if f.size == 3 and len(verts) == 2:
            out.append(PeelSite("bottom", i, "H"))
        elif f.size == 2:
            (v,) = verts
            legs = {s for s in range(3) if adj[(v, s)] in (("B", i), ("B", i + 1))}
            (third,) = set(range(3)) - legs
            if is_slot(adj[(v, third)]):
                out.append(PeelSite("bottom", i, "I"))
    return out


def find_peel_site(w: Web) -> PeelSite | None:
    """First peelable piece on adjacent wall points.

    The bottom wall is searched before the top, left to right, and an H is
    preferred over an I at the same position.
    """
    for wall, src in (("bottom", w), ("top", None)):
        if src is None:
            src = mirror(w)
        sites = _bottom_sites(src)
        if sites:
            s = min(sites, key=lambda s: (s.i, s.kind != "H"))
            return PeelSite(wall, s.i, s.kind)
    return None


def _factor_web(kind: str, i: int, n: int) -> Web:
    g = H_web() if kind == "H" else I_web()
    return tensor(tensor(identity(i - 1), g), identity(n - i - 1))


def _peel_bottom(w: Web, i: int, kind: str) -> Web:
    adj = w.adj
    a, b = adj[("B", i)], adj[("B", i + 1)]
    if kind == "I":
        v = a[0]
        third = next(s for s in range(3) if s not in (a[1], b[1]))
        u, t = adj[(v, third)]
        removed = {u, v}
        options = [(adj[(u, (t + 1) % 3)], adj[(u, (t + 2) % 3)])]
        options.append(options[0][::-1])
    else:
        removed = {a[0], b[0]}
        outs = []
        for x in (a, b):
            other = b[0] if x is a else a[0]
            s = next(s for s in range(3) if s != x[1] and adj[(x[0], s)][0] != other)
            outs.append(adj[(x[0], s)])
        options = [tuple(outs)]
    target = w.code
    factor = _factor_web(kind, i, w.bottom)
    for left, right in options:
        new = {}
        for x, y in adj.items():
            if (is_slot(x) and x[0] in removed) or x in (("B", i), ("B", i + 1)):
                continue
            if is_slot(y) and y[0] in removed:
                continue
            new[x] = y
        for pos, end in ((i, left), (i + 1, right)):
            new[("B", pos)] = end
            new[end] = ("B", pos)
        try:
            rem = Web(w.bottom, w.top, new, w.loops)
        except WebError:
            continue
        if compose(factor, rem).code == target:
            return rem
    raise SurjectionError(f"peeling {kind} at bottom {i} did not reproduce the web")


def peel(w: Web, site: PeelSite) -> tuple[Web, Web]:
    """Split off the piece at ``site``; returns ``(factor, remainder)``.

    For a bottom site ``w == compose(factor, remainder)`` (factor first), for
    a top site ``w == compose(remainder, factor)``.  The remainder has two
    vertices fewer than ``w``.
    """
    if site.wall == "bottom":
        rem = _peel_bottom(w, site.i, site.kind)
        return _factor_web(site.kind, site.i, w.bottom), rem
    rem = mirror(_peel_bottom(mirror(w), site.i, site.kind))
    return _factor_web(site.kind, site.i, w.top), rem


# ---------------------------------------------------------------------------
# sliding components apart
# ---------------------------------------------------------------------------


def _sorting_swaps(keys: Sequence) -> list[int]:
    """Adjacent transpositions (0-based left index) of a stable bubble sort."""
    seq = list(keys)
    swaps = []
    changed = True
    while changed:
        changed = False
        for k in range(len(seq) - 1):
            if seq[k] > seq[k + 1]:
                seq[k], seq[k + 1] = seq[k + 1], seq[k]
                swaps.append(k)
                changed = True
    return swaps


def _letter(k: int, left_depth: int, right_depth: int) -> int:
    # the strand of the piece with the smaller index passes in front
    return (k + 1) if left_depth < right_depth else -(k + 1)


def separate(w: Web, pieces: Sequence[Sequence[int]]) -> tuple[BraidWord, Web, BraidWord]:
    """Slide groups of components into side-by-side blocks.

    Args:
        w: a web with no closed components.
        pieces: a partition of the indices of ``w.components()``; each part
            is drawn as one block, blocks left to right in the given order.

    Returns:
        ``(below, block, above)`` with ``w`` isotopic to ``below``, then
        ``block``, then ``above``.  Strands of different pieces cross with the
        earlier piece in front, which is a consistent layering of disjoint
        planar pieces and hence an isotopy.
    """
    comps = w.components()
    owner = {}
    for p, part in enumerate(pieces):
        for ci in part:
            for pt in comps[ci][1]:
                owner[pt] = p
    if len(owner) != w.bottom + w.top:
        raise SurjectionError("pieces must cover every boundary point")
    block = None
    for part in pieces:
        verts = frozenset().union(*(comps[ci][0] for ci in part))
        pts = [pt for ci in part for pt in comps[ci][1]]
        sub = w.restrict(verts, pts)
        block = sub if block is None else tensor(block, sub)
    if block is None:
        block = identity(0)

    bottom_keys = [(owner[("B", j)], j) for j in range(1, w.bottom + 1)]
    seq = list(bottom_keys)
    below = []
    for k in _sorting_swaps(bottom_keys):
        below.append(_letter(k, seq[k][0], seq[k + 1][0]))
        seq[k], seq[k + 1] = seq[k + 1], seq[k]

    top_keys = [(owner[("T", j)], j) for j in range(1, w.top + 1)]
    seq = sorted(top_keys)
    above = []
    for k in reversed(_sorting_swaps(top_keys)):
        above.append(_letter(k, seq[k][0], seq[k + 1][0]))
        seq[k], seq[k + 1] = seq[k + 1], seq[k]
    return BraidWord(w.bottom, tuple(below)), block, BraidWord(w.top, tuple(above))


# ---------------------------------------------------------------------------
# webs whose components have at most one vertex
# ---------------------------------------------------------------------------

_KINDS = ("strand", "cup", "cap", "up", "down", "Y", "L")


def component_kind(w: Web, comp: tuple[frozenset, tuple]) -> str | None:
    """Name of a component with at most one vertex, or ``None``."""
    verts, pts = comp
    nb = sum(1 for p in pts if p[0] == "B")
    nt = len(pts) - nb
    if not verts:
        return {(1, 1): "strand", (0, 2): "cup", (2, 0): "cap"}.get((nb, nt))
    if len(verts) == 1:
        return {(0, 3): "up", (3, 0): "down", (1, 2): "Y", (2, 1): "L"}.get((nb, nt))
    return None


@dataclass
class GeneratorCounts:
    """Numbers of cups (a), caps (b), ups (c), downs (d), Ys (e), Ls (f) and strands."""

    a: int = 0
    b: int = 0
    c: int = 0
    d: int = 0
    e: int = 0
    f: int = 0
    strands: int = 0

    def as_tuple(self) -> tuple[int, ...]:
        return (self.a, self.b, self.c, self.d, self.e, self.f)


def generator_counts(w: Web) -> GeneratorCounts | None:
    """Counts of the one-vertex pieces of ``w``; ``None`` if some component is bigger."""
    field_of = {"cup": "a", "cap": "b", "up": "c", "down": "d", "Y": "e", "L": "f", "strand": "strands"}
    out = GeneratorCounts()
    for comp in w.components():
        k = component_kind(w, comp)
        if k is None:
            return None
        setattr(out, field_of[k], getattr(out, field_of[k]) + 1)
    return out


# catalogue entries built from one-vertex pieces, as tensor products in this order
PATTERNS: dict[str, tuple[str, ...]] = {
    "capcup": ("cap", "cup"),
    "downup": ("down", "up"),
    "LY": ("L", "Y"),
    "down_Y_cup": ("down", "Y", "cup"),
    "L_L_cup": ("L", "L", "cup"),
    "down_L_cups": ("down", "L", "cup", "cup"),
    "downs_cups": ("down", "down", "cup", "cup", "cup"),
    "down_Ys": ("down", "Y", "Y", "Y"),
}

_PIECE_WEBS = {"strand": identity(1), "cup": cup(), "cap": cap(), "up": up(), "down": down(), "Y": Y(), "L": L()}


def pattern_web(name: str) -> Web:
    out = None
    for k in PATTERNS[name]:
        out = _PIECE_WEBS[k] if out is None else tensor(out, _PIECE_WEBS[k])
    return out


_MIRROR_KIND = {"cup": "cap", "cap": "cup", "up": "down", "down": "up", "Y": "L", "L": "Y", "strand": "strand"}


def plan_base_case(counts: GeneratorCounts) -> list[tuple[str, bool]]:
    """Catalogue entries covering a web with these counts.

    Returns ``(name, mirrored)`` pairs; a mirrored entry is the top-bottom
    reflection of the catalogue web.  Opposite pairs are split off first.
    Whenever the leftover has caps but no cups, or ups but neither cups nor
    downs, the rest is planned on the reflection instead.
    """
    a, b, c, d, e, f = counts.as_tuple()
    if 2 * a + 3 * c + e != 2 * b + 3 * d + f:
        raise SurjectionError(f"counts {counts.as_tuple()} do not describe an endomorphism")
    plan: list[tuple[str, bool]] = []
    flip = False
    while a or b or c or d or e or f:
        for name, x, y in (("capcup", a, b), ("downup", c, d), ("LY", f, e)):
            plan += [(name, flip)] * min(x, y)
        m = min(a, b)
        a, b = a - m, b - m
        m = min(c, d)
        c, d = c - m, d - m
        m = min(e, f)
        e, f = e - m, f - m
        if b or (a == 0 and c):
            flip = not flip
            a, b, c, d, e, f = b, a, d, c, f, e
        if not (a or c or d or e or f):
            break
        if a > 0 and f >= 2:
            plan.append(("L_L_cup", flip))
            a, f = a - 1, f - 2
        elif a > 0 and f == 1 and a >= 2 and d >= 1:
            plan.append(("down_L_cups", flip))
            a, d, f = a - 2, d - 1, 0
        elif a > 0 and f == 0 and a >= 3 and d >= 2:
            plan.append(("downs_cups", flip))
            a, d = a - 3, d - 2
        elif f == 0 and e >= 3 and d >= 1:
            plan.append(("down_Ys", flip))
            d, e = d - 1, e - 3
        elif a > 0 and f == 0 and e >= 1 and d >= 1:
            plan.append(("down_Y_cup", flip))
            a, d, e = a - 1, d - 1, e - 1
        else:
            raise SurjectionError(f"no catalogue cover for counts {counts.as_tuple()}")
    return plan


def entry_pattern(name: str, mirrored: bool) -> tuple[str, ...]:
    pat = PATTERNS[name]
    return tuple(_MIRROR_KIND[k] for k in pat) if mirrored else pat


# ---------------------------------------------------------------------------
# the catalogue
# ---------------------------------------------------------------------------


@dataclass
class CatalogEntry:
    """A small endomorphism web together with a braid algebra preimage."""

    name: str
    n: int
    web: Web
    element: FactoredElement
    recipe: str


def _word(n: int, *letters: int) -> BraidWord:
    return BraidWord(n, letters)


def _solve_preimage(target: Web, words: Sequence[BraidWord], ev: BraidEvaluator) -> BraidAlgebraElement:
    from .enumeration import basis_webs
    from .linalg import solve_in_span, to_coords

    basis = basis_webs(target.bottom, target.top)
    gens = [to_coords(ev.evaluate(w), basis) for w in words]
    res = solve_in_span(to_coords(WebCombo.from_web(target), basis), gens, fast=len(words) > 4)
    if not res.ok:
        raise SurjectionError(f"{len(words)} braid words do not span a preimage of the target")
    return BraidAlgebraElement.from_terms(target.bottom, [(w, c) for w, c in zip(words, res.coeffs)])


def _serialize(el: FactoredElement) -> list:
    from .qfield import format_rf

    return [
        [format_rf(c), [[[str(w), format_rf(x)] for w, x in f.items()] for f in fs]]
        for c, fs in el.terms
    ]


def _deserialize(n: int, data: list) -> FactoredElement:
    from .braid import parse_braid
    from .qfield import parse_rf

    terms = []
    for c, fs in data:
        factors = tuple(
            BraidAlgebraElement.from_terms(n, [(parse_braid(w), parse_rf(x)) for w, x in f]) for f in fs
        )
        terms.append((parse_rf(c), factors))
    return FactoredElement(n, terms)


class Catalog:
    """Braid algebra preimages of the webs used by the decomposition."""

    def __init__(self, entries: Iterable[CatalogEntry] = ()):
        self.entries: dict[str, CatalogEntry] = {e.name: e for e in entries}

    def __getitem__(self, name: str) -> CatalogEntry:
        return self.entries[name]

    def __contains__(self, name: str) -> bool:
        return name in self.entries

    def __iter__(self):
        return iter(self.entries.values())

    def __len__(self):
        return len(self.entries)

    def add(self, entry: CatalogEntry) -> None:
        self.entries[entry.name] = entry

    def element(self, name: str, offset: int = 0, n: int | None = None, mirrored: bool = False) -> FactoredElement:
        e = self.entries[name]
        el = e.element.reversed() if mirrored else e.element
        if n is not None and (offset or n != e.n):
            el = el.shifted(offset, n)
        return el

    def to_json(self, version: str) -> str:
        return json.dumps(
            {
                "schema": 1,
                "version": version,
                "entries": [
                    {"name": e.name, "n": e.n, "recipe": e.recipe, "element": _serialize(e.element)}
                    for e in self
                ],
            }
        )

    @classmethod
    def from_json(cls, text: str, version: str | None = None) -> "Catalog | None":
        """Load a saved catalogue; ``None`` if it was built for another relation table."""
        data = json.loads(text)
        if version is not None and data.get("version") != version:
            return None
        out = cls()
        for rec in data["entries"]:
            name = rec["name"]
            out.add(CatalogEntry(name, rec["n"], _target_web(name), _deserialize(rec["n"], rec["element"]), rec["recipe"]))
        return out


def _target_web(name: str) -> Web:
    fixed = {"I": I_web, "H": H_web, "capcup": capcup_web}
    if name in fixed:
        return fixed[name]()
    if name == "downup":
        return compose(down(), up())
    return pattern_web(name)


# recipes over earlier entries: (entry name, offset) factors applied bottom to top
_RECIPES: dict[str, tuple[int, tuple[tuple[str, int], ...]]] = {
    "down_Y_cup": (4, (("downup", 0), ("capcup", 2))),
    "L_L_cup": (4, (("LY", 0), ("capcup", 2))),
    "down_L_cups": (5, (("downup", 0), ("capcup", 2), ("capcup", 1), ("capcup", 3))),
    "downs_cups": (
        6,
        (("downup", 0), ("capcup", 2), ("capcup", 1), ("capcup", 3), ("capcup", 0), ("capcup", 2), ("capcup", 4)),
    ),
    "down_Ys": (6, (("down_Y_cup", 0), ("LY", 3))),
}


def _round_trip(entry: CatalogEntry, ev: BraidEvaluator) -> bool:
    got = ev.evaluate(entry.element)
    return got == WebCombo.from_web(entry.web)


def build_catalog(
    evaluator: BraidEvaluator | None = None,
    *,
    verify: bool = True,
    path: str | os.PathLike | None = None,
) -> Catalog:
    """Solve for the small entries, assemble the rest by recipe, verify each.

    Args:
        evaluator: braid evaluator (its reducer fixes the relation table).
        verify: check that every entry evaluates back to its web.
        path: optional JSON file; reused when it was written for the same
            relation table, rewritten otherwise.
    """
    ev = evaluator or default_evaluator()
    version = ev.reducer.table.fingerprint()
    if path is not None and os.path.exists(path):
        with open(path) as fh:
            cat = Catalog.from_json(fh.read(), version)
        if cat is not None and all(k in cat for k in ("I", "H", "capcup", *PATTERNS)):
            return cat

    from .reference_formulas import THREE_STRAND_WORDS
    from .braid import parse_word_body

    cat = Catalog()
    powers = [_word(2, *([1] * k)) for k in range(4)]
    for name in ("capcup", "I", "H"):
        el = _solve_preimage(_target_web(name), powers, ev)
        cat.add(CatalogEntry(name, 2, _target_web(name), FactoredElement.of(el), "solve over s1^0..s1^3"))
    words = [parse_word_body(3, w) for w in THREE_STRAND_WORDS]
    for name in ("downup", "LY"):
        el = _solve_preimage(_target_web(name), words, ev)
        cat.add(CatalogEntry(name, 3, _target_web(name), FactoredElement.of(el), "solve over 35 words in B3"))
    for name, (n, steps) in _RECIPES.items():
        el = FactoredElement.of(BraidAlgebraElement.identity(n))
        for sub, off in steps:
            el = el * cat.element(sub, off, n)
        recipe = " * ".join(f"{sub}@{off}" for sub, off in steps)
        cat.add(CatalogEntry(name, n, _target_web(name), el, recipe))
    if verify:
        for e in cat:
            if not _round_trip(e, ev):
                raise SurjectionError(f"catalogue entry {e.name} does not evaluate to its web")
    if path is not None:
        with open(path, "w") as fh:
            fh.write(cat.to_json(version))
    return cat


# ---------------------------------------------------------------------------
# decomposition
# ---------------------------------------------------------------------------

_CATALOG: dict[str, Catalog] = {}


def default_catalog() -> Catalog:
    if "c" not in _CATALOG:
        _CATALOG["c"] = build_catalog()
    return _CATALOG["c"]


def factor_as_braid(kind: str, i: int, n: int, catalog: Catalog | None = None) -> FactoredElement:
    """Preimage of ``I`` or ``H`` on strands ``i, i+1`` of ``n``."""
    if kind not in ("I", "H"):
        raise ValueError(f"kind must be 'I' or 'H', not {kind!r}")
    if not 1 <= i < n:
        raise ValueError(f"position {i} out of range for {n} strands")
    return (catalog or default_catalog()).element(kind, i - 1, n)


def _word_factor(w: BraidWord) -> FactoredElement:
    return FactoredElement.of(BraidAlgebraElement.word(w))


def base_case_decompose(
    w: Web, counts: GeneratorCounts | None = None, catalog: Catalog | None = None
) -> FactoredElement:
    """Preimage of an endomorphism web whose components have at most one vertex.

    The components are grouped into catalogue entries (see
    :func:`plan_base_case`), slid into side-by-side blocks by
    :func:`separate`, and the entries' preimages are placed on their blocks.
    """
    if w.bottom != w.top:
        raise SurjectionError(f"not an endomorphism: {w.bottom} -> {w.top}")
    cat = catalog or default_catalog()
    found = generator_counts(w)
    if found is None:
        raise SurjectionError("some component has more than one vertex")
    if counts is not None and counts.as_tuple() != found.as_tuple():
        raise SurjectionError("counts do not match the web")
    comps = w.components()
    if any(not pts for _, pts in comps):
        raise SurjectionError("closed components are not allowed")
    pools: dict[str, list[int]] = {k: [] for k in _KINDS}
    for ci, comp in enumerate(comps):
        pools[component_kind(w, comp)].append(ci)
    entries: list[tuple[str | None, bool, list[int]]] = []
    for name, mirrored in plan_base_case(found):
        entries.append((name, mirrored, [pools[k].pop(0) for k in entry_pattern(name, mirrored)]))
    entries += [(None, False, [ci]) for ci in pools["strand"]]
    entries.sort(key=lambda e: min(e[2]))

    pieces = [[ci] for _, _, cis in entries for ci in cis]
    below, block, above = separate(w, pieces)
    n = w.bottom
    out = _word_factor(below)
    offset = 0
    for name, mirrored, cis in entries:
        width = sum(1 for ci in cis for p in comps[ci][1] if p[0] == "B")
        if name is not None:
            out = out * cat.element(name, offset, n, mirrored)
        offset += width
    return out * _word_factor(above)


class Decomposer:
    """Writes endomorphism webs as images of braid algebra elements.

    Results are kept unexpanded as sums of products (:class:`FactoredElement`)
    and memoized per basis web.

    Args:
        catalog: preimages of the small webs; built on first use if omitted.
        reducer: reducer used for remainders; the default one if omitted.
        budget: maximum number of peeling and sliding steps per call, or None.
    """

    def __init__(self, catalog: Catalog | None = None, reducer: Reducer | None = None, budget: int | None = None):
        self.catalog = catalog or default_catalog()
        self.reducer = reducer or default_evaluator().reducer
        self.budget = budget
        self._memo: dict[bytes, FactoredElement] = {}
        self._steps = 0
        self.max_depth = 0

    def _tick(self) -> None:
        self._steps += 1
        if self.budget is not None and self._steps > self.budget:
            raise SurjectionError(f"decomposition budget of {self.budget} steps exceeded")

    def decompose_web(self, w: Web, _depth: int = 0) -> FactoredElement:
        if w.bottom != w.top:
            raise SurjectionError(f"not an endomorphism: {w.bottom} -> {w.top}")
        self.max_depth = max(self.max_depth, _depth)
        hit = self._memo.get(w.code)
        if hit is not None:
            return hit
        if generator_counts(w) is not None:
            out = base_case_decompose(w, catalog=self.catalog)
        else:
            self._tick()
            site = find_peel_site(w)
            if site is not None:
                factor, rem = peel(w, site)
                f = factor_as_braid(site.kind, site.i, w.bottom, self.catalog)
                sub = self._decompose_vec(self.reducer.reduce_web(rem), w.bottom, _depth + 1)
                out = f * sub if site.wall == "bottom" else sub * f
            else:
                comps = w.components()
                big = next(ci for ci, c in enumerate(comps) if len(c[0]) >= 2)
                rest = [ci for ci in range(len(comps)) if ci != big]
                below, block, above = separate(w, [[big], rest] if rest else [[big]])
                if find_peel_site(block) is None:
                    raise SurjectionError("no peelable piece after sliding a component clear")
                out = _word_factor(below) * self.decompose_web(block, _depth) * _word_factor(above)
        self._memo[w.code] = out
        return out

    def _decompose_vec(self, vec: dict, n: int, depth: int) -> FactoredElement:
        from .web import web_from_code

        out = FactoredElement(n)
        for code, c in vec.items():
            out = out + self.decompose_web(web_from_code(code), depth) * c
        return out

    def decompose(self, x) -> FactoredElement:
        """Preimage of a web or a combination of webs in some ``End(V^n)``."""
        self._steps = 0
        if isinstance(x, Web):
            x = WebCombo.from_web(x)
        if x.arity is not None and x.arity[0] != x.arity[1]:
            raise SurjectionError(f"not an endomorphism: {x.arity[0]} -> {x.arity[1]}")
        vec: dict[bytes, RationalFunction] = {}
        n = None
        for w, c in x.items():
            if w.bottom != w.top:
                raise SurjectionError(f"not an endomorphism: {w.bottom} -> {w.top}")
            n = w.bottom
            for k, v in self.reducer.reduce_web(w).items():
                vec[k] = vec[k] + c * v if k in vec else c * v
        if n is None:
            n = x.arity[0] if x.arity else 0
        return self._decompose_vec({k: v for k, v in vec.items() if not v.is_zero()}, n, 0)


def decompose(x, *, catalog: Catalog | None = None, budget: int | None = None) -> FactoredElement:
    """Braid algebra preimage of a web or combination (see :class:`Decomposer`)."""
    return Decomposer(catalog, budget=budget).decompose(x)
