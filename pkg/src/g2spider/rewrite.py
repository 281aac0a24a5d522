"""Reduction of webs to the basis by the local skein relations.

The relations remove, in this priority order: free circles, lollipops,
and internal faces with 2, 3, 4 or 5 sides.  Each face relation cuts the
face and its vertices out of the web and glues in a small template on the
face's outgoing legs.  Legs are numbered counterclockwise around the face,
and a template vertex joining consecutive legs ``Li, Li+1`` with an inner
neighbour ``c`` has rotation ``(Li, Li+1, c)``.

Results are memoized by canonical code, closed components are split off as
scalars, and a :class:`Reducer` can optionally keep a persistent cache and
record a replayable trace.
"""
from __future__ import annotations

import hashlib
import json
import os
import random
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .qfield import ONE, ZERO, RationalFunction, format_rf, parse_laurent, parse_rf
from .web import Web, WebCombo, WebError, _splice, canonicalize, is_slot, web_from_code

__all__ = [
    "RelationTable",
    "RELATIONS",
    "Site",
    "Reducer",
    "ReductionTrace",
    "ReductionError",
    "BudgetExceeded",
    "list_sites",
    "find_site",
    "apply_site",
    "reduce",
    "evaluate_closed",
    "default_reducer",
    "random_chooser",
]


class BudgetExceeded(RuntimeError):
    """The configured number of rewrite steps ran out."""


class ReductionError(RuntimeError):
    """Raised when a reduction step fails to make progress or a trace cannot be replayed."""


def _lp(text: str) -> RationalFunction:
    return parse_laurent(text).to_rf()


# ---------------------------------------------------------------------------
# relation table
# ---------------------------------------------------------------------------

# a template is (number of new vertices, pairs); a pair joins two of
#   ("L", i)     -- the i-th leg of the face, counterclockwise
#   ("N", j, s)  -- slot s of new vertex j


def _tree_template(k: int, i: int):
    """Trivalent tree on k legs (k = 2..5) rooted at leg i."""
    Lg = lambda t: ("L", (i + t) % k)  # noqa: E731
    if k == 2:
        return (0, [(Lg(0), Lg(1))])
    if k == 3:
        return (1, [(("N", 0, 0), Lg(0)), (("N", 0, 1), Lg(1)), (("N", 0, 2), Lg(2))])
    if k == 4:
        return (
            2,
            [
                (("N", 0, 0), Lg(0)),
                (("N", 0, 1), Lg(1)),
                (("N", 0, 2), ("N", 1, 2)),
                (("N", 1, 0), Lg(2)),
                (("N", 1, 1), Lg(3)),
            ],
        )
    if k == 5:
        # caterpillar: (L0 L1 b) (a L2 c) (L3 L4 b)
        return (
            3,
            [
                (("N", 0, 0), Lg(0)),
                (("N", 0, 1), Lg(1)),
                (("N", 0, 2), ("N", 1, 0)),
                (("N", 1, 1), Lg(2)),
                (("N", 1, 2), ("N", 2, 2)),
                (("N", 2, 0), Lg(3)),
                (("N", 2, 1), Lg(4)),
            ],
        )
    raise ValueError(k)


def _matching_template(i: int):
    Lg = lambda t: ("L", (i + t) % 4)  # noqa: E731
    return (0, [(Lg(0), Lg(1)), (Lg(2), Lg(3))])


def _forest_template(i: int):
    Lg = lambda t: ("L", (i + t) % 5)  # noqa: E731
    return (1, [(Lg(0), Lg(1)), (("N", 0, 0), Lg(2)), (("N", 0, 1), Lg(3)), (("N", 0, 2), Lg(4))])


@dataclass(frozen=True)
class RelationTable:
    """Constants and right-hand sides of the skein relations."""

    delta: RationalFunction
    bigon: RationalFunction
    triangle: RationalFunction
    square_tree: RationalFunction
    square_matching: RationalFunction
    pentagon_tree: RationalFunction
    pentagon_forest: RationalFunction

    def rhs(self, k: int) -> list:
        """``(coefficient, template)`` pairs for an internal k-gon, k = 2..5."""
        if k == 2:
            return [(self.bigon, _tree_template(2, 0))]
        if k == 3:
            return [(self.triangle, _tree_template(3, 0))]
        if k == 4:
            return [
                (self.square_tree, _tree_template(4, 0)),
                (self.square_tree, _tree_template(4, 1)),
                (self.square_matching, _matching_template(0)),
                (self.square_matching, _matching_template(1)),
            ]
        if k == 5:
            return [(self.pentagon_tree, _tree_template(5, i)) for i in range(5)] + [
                (self.pentagon_forest, _forest_template(i)) for i in range(5)
            ]
        raise ValueError(k)

    @property
    def square_rhs(self) -> list:
        return self.rhs(4)

    @property
    def pentagon_rhs(self) -> list:
        return self.rhs(5)

    def fingerprint(self) -> str:
        parts = [format_rf(getattr(self, f)) for f in self.__dataclass_fields__]
        for k in range(2, 6):
            parts.append(repr([t for _, t in self.rhs(k)]))
        return hashlib.sha256("|".join(parts).encode()).hexdigest()[:16]


RELATIONS = RelationTable(
    delta=_lp("q^10 + q^8 + q^2 + 1 + q^-2 + q^-8 + q^-10"),
    bigon=-_lp("q^6 + q^4 + q^2 + q^-2 + q^-4 + q^-6"),
    triangle=_lp("q^4 + 1 + q^-4"),
    square_tree=-_lp("q^2 + q^-2"),
    square_matching=_lp("q^2 + 1 + q^-2"),
    pentagon_tree=ONE,
    pentagon_forest=-ONE,
)

_FACE_RELATION = {2: "bigon", 3: "triangle", 4: "square", 5: "pentagon"}
_PRIORITY = {"loop": 0, "lollipop": 1, "bigon": 2, "triangle": 3, "square": 4, "pentagon": 5}


# ---------------------------------------------------------------------------
# sites
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Site:
    """A place where a relation applies.

    ``key`` identifies the site within a fixed labelling of the web: the first
    dart of the face (or of the lollipop edge); ``()`` for a free circle.
    """

    relation: str
    key: tuple
    vertices: tuple = ()
    legs: tuple = ()  # leg slots on the removed vertices, counterclockwise


def list_sites(w: Web) -> list[Site]:
    """All relation sites of ``w`` in priority order (ties in face order)."""
    out: list[Site] = []
    if w.loops:
        out.append(Site("loop", ()))
    for a, b in sorted(w.adj.items(), key=lambda ab: _key(ab[0])):
        if is_slot(a) and is_slot(b) and a[0] == b[0] and a[1] < b[1]:
            out.append(Site("lollipop", a, (a[0],)))
    faces = []
    for f in w.faces():
        k = f.size
        if not 2 <= k <= 5 or not f.internal:
            continue
        verts = tuple(d[0] for d in f.darts)
        if len(set(verts)) != k:
            continue
        legs = tuple((d[0], (d[1] + 1) % 3) for d in f.darts)
        faces.append(Site(_FACE_RELATION[k], f.darts[0], verts, tuple(reversed(legs))))
    faces.sort(key=lambda s: _PRIORITY[s.relation])
    out.extend(faces)
    return out


def _key(e):
    return (0, e[0], e[1]) if is_slot(e) else (1, e[0], e[1])


def find_site(w: Web) -> Site | None:
    """Highest-priority site, or ``None`` for a basis web."""
    sites = list_sites(w)
    return sites[0] if sites else None


def _graft(w: Web, site: Site, template) -> Web:
    n_new, pairs = template
    removed = set(site.vertices)
    legidx = {slot: i for i, slot in enumerate(site.legs)}

    def outer(e):
        if e in legidx:
            return ("P", "o", legidx[e])
        if is_slot(e) and e[0] in removed:
            return None
        return e

    adj = {}
    for a, b in w.adj.items():
        fa, fb = outer(a), outer(b)
        if fa is None or fb is None:
            continue
        adj[fa] = fb
    off = (w.vertices[-1] + 1) if w.vertices else 0

    def inner(e):
        return ("P", "t", e[1]) if e[0] == "L" else (off + e[1], e[2])

    for x, y in pairs:
        tx, ty = inner(x), inner(y)
        adj[tx] = ty
        adj[ty] = tx
    links = {}
    for i in range(len(site.legs)):
        links[("P", "o", i)] = ("P", "t", i)
        links[("P", "t", i)] = ("P", "o", i)
    glued, loops = _splice(adj, links)
    return Web(w.bottom, w.top, glued, w.loops + loops, validate=False)


def apply_site(w: Web, site: Site, table: RelationTable = RELATIONS) -> list[tuple[RationalFunction, Web]]:
    """Right-hand side of the relation at ``site``, grafted into ``w``."""
    if site.relation == "loop":
        return [(table.delta, Web(w.bottom, w.top, w.adj, w.loops - 1, validate=False))]
    if site.relation == "lollipop":
        return []
    k = len(site.vertices)
    return [(c, _graft(w, site, t)) for c, t in table.rhs(k)]


# ---------------------------------------------------------------------------
# traces
# ---------------------------------------------------------------------------


@dataclass
class ReductionTrace:
    """Every rewrite performed, as ``(web code, relation, site key)``."""

    steps: list = field(default_factory=list)

    def record(self, code: bytes, site: Site) -> None:
        self.steps.append((code, site.relation, site.key))

    def choices(self) -> dict:
        return {code: (rel, key) for code, rel, key in self.steps}

    def __len__(self):
        return len(self.steps)


# ---------------------------------------------------------------------------
# the reducer
# ---------------------------------------------------------------------------


def _measure(w: Web) -> tuple[int, int, int]:
    small = sum(1 for f in w.faces() if f.internal and f.size < 6)
    return (w.n_vertices, small, w.loops)


class Reducer:
    """Reduces webs to basis combinations, with memoization.

    Args:
        table: relation constants and templates.
        split_closed: evaluate closed components separately as scalars.
        chooser: optional ``(web, sites) -> site``; by default the first site
            in priority order is used.
        cache_path: optional JSON-lines file of previously computed reductions.
        trace: record every rewrite in :attr:`trace`.
        check_progress: assert that every step decreases
            ``(vertices, small faces, circles)`` lexicographically.
        budget: maximum number of rewrite steps over the reducer's lifetime;
            :class:`BudgetExceeded` is raised beyond it.
    """

    def __init__(
        self,
        table: RelationTable = RELATIONS,
        *,
        split_closed: bool = True,
        chooser: Callable[[Web, list], Site] | None = None,
        cache_path: str | os.PathLike | None = None,
        trace: bool = False,
        check_progress: bool = True,
        budget: int | None = None,
    ):
        if budget is not None and budget <= 0:
            raise ValueError("budget must be positive")
        self.budget = budget
        self.table = table
        self.split_closed = split_closed
        self.chooser = chooser
        self.memo: dict[bytes, dict[bytes, RationalFunction]] = {}
        self.trace = ReductionTrace() if trace else None
        self.check_progress = check_progress
        self.cache_path = os.fspath(cache_path) if cache_path else None
        self._dirty: set[bytes] = set()
        self.stats = {"rewrites": 0, "memo_hits": 0, "cache_loaded": 0}
        if self.cache_path:
            self._load_cache()

    # -- persistent cache ----------------------------------------------------

    def _load_cache(self) -> None:
        if not os.path.exists(self.cache_path):
            return
        fp = self.table.fingerprint()
        with open(self.cache_path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                try:
                    rec = json.loads(line)
                except json.JSONDecodeError:
                    continue
                if rec.get("table") != fp:
                    continue
                vec = {bytes.fromhex(k): parse_rf(v) for k, v in rec["vec"].items()}
                self.memo[bytes.fromhex(rec["code"])] = vec
                self.stats["cache_loaded"] += 1

    def flush(self) -> None:
        """Append newly computed reductions to the cache file."""
        if not self.cache_path or not self._dirty:
            return
        fp = self.table.fingerprint()
        with open(self.cache_path, "a", encoding="utf-8") as fh:
            for code in sorted(self._dirty):
                vec = self.memo[code]
                rec = {"code": code.hex(), "vec": {k.hex(): format_rf(v) for k, v in vec.items()}, "table": fp}
                fh.write(json.dumps(rec) + "\n")
        self._dirty.clear()

    # -- core ------------------------------------------------------------------

    def reduce_web(self, w: Web) -> dict[bytes, RationalFunction]:
        """Basis expansion of one web as ``{basis code: coefficient}``."""
        code = w.code
        hit = self.memo.get(code)
        if hit is not None:
            self.stats["memo_hits"] += 1
            return hit
        w = canonicalize(w)
        result = self._reduce_canonical(w)
        self.memo[code] = result
        if self.cache_path:
            self._dirty.add(code)
        return result

    def _reduce_canonical(self, w: Web) -> dict[bytes, RationalFunction]:
        scalar = ONE
        if self.split_closed:
            had_loops = bool(w.loops)
            if had_loops:
                scalar = self.table.delta**w.loops
                w = Web(w.bottom, w.top, w.adj, 0, validate=False)
            comps = w.components()
            closed = [c for c in comps if not c[1]]
            if closed and len(comps) > 1:
                for verts, _ in closed:
                    scalar = scalar * self.evaluate_closed(w.restrict(verts, ()))
                    if scalar.is_zero():
                        return {}
                open_verts = set().union(*(c[0] for c in comps if c[1])) if len(comps) > len(closed) else set()
                rest = w.restrict(open_verts, w.boundary_points())
                return _scaled(self.reduce_web(rest), scalar)
            if had_loops:
                return _scaled(self.reduce_web(w), scalar)
        sites = list_sites(w)
        if not sites:
            return {w.code: ONE}
        site = self.chooser(w, sites) if self.chooser else sites[0]
        if self.trace is not None:
            self.trace.record(w.code, site)
        self.stats["rewrites"] += 1
        if self.budget is not None and self.stats["rewrites"] > self.budget:
            raise BudgetExceeded(f"more than {self.budget} rewrite steps")
        before = _measure(w) if self.check_progress else None
        out: dict[bytes, RationalFunction] = {}
        for c, term in apply_site(w, site, self.table):
            if before is not None and not _measure(term) < before:
                raise ReductionError(f"{site.relation} step did not decrease the web measure")
            for k, v in self.reduce_web(term).items():
                _acc(out, k, c * v)
        return out

    def evaluate_closed(self, w: Web) -> RationalFunction:
        """Scalar value of a closed web."""
        if w.bottom or w.top:
            raise WebError("evaluate_closed needs a web without boundary points")
        vec = self.reduce_web(w)
        if not vec:
            return ZERO
        if len(vec) != 1:
            raise ReductionError("closed web did not reduce to a scalar")
        (k, v), = vec.items()
        if web_from_code(k).n_vertices or web_from_code(k).loops:
            raise ReductionError("closed web did not reduce to the empty web")
        return v

    def reduce(self, x: Web | WebCombo) -> WebCombo:
        """Basis expansion of a web or a combination of webs."""
        if isinstance(x, Web):
            x = WebCombo.from_web(x)
        out = WebCombo(x.arity)
        for code, c in x.terms.items():
            for k, v in self.reduce_web(x.webs[code]).items():
                out.add_code(k, c * v)
        return out

    # -- traces ------------------------------------------------------------------

    @staticmethod
    def replay(trace: ReductionTrace, x: Web | WebCombo, table: RelationTable = RELATIONS) -> WebCombo:
        """Re-run a reduction forcing the recorded site at every step."""
        choices = trace.choices()

        def chooser(w, sites):
            want = choices.get(w.code)
            if want is None:
                raise ReductionError("trace has no step for an intermediate web")
            for s in sites:
                if (s.relation, s.key) == want:
                    return s
            raise ReductionError(f"recorded site {want} not found")

        return Reducer(table, chooser=chooser).reduce(x)


def _acc(d: dict, k, v) -> None:
    if v.is_zero():
        return
    new = d.get(k, ZERO) + v
    if new.is_zero():
        d.pop(k, None)
    else:
        d[k] = new


def _scaled(vec: dict, c: RationalFunction) -> dict:
    if c.is_zero():
        return {}
    return {k: v * c for k, v in vec.items()}


def random_chooser(seed: int) -> Callable[[Web, list], Site]:
    """Site chooser picking uniformly among all sites, for order-independence tests."""
    rng = random.Random(seed)
    return lambda w, sites: sites[rng.randrange(len(sites))]


_DEFAULT: dict[str, Reducer] = {}


def default_reducer() -> Reducer:
    """Process-wide reducer with an in-memory memo."""
    if "r" not in _DEFAULT:
        _DEFAULT["r"] = Reducer()
    return _DEFAULT["r"]


def reduce(x: Web | WebCombo, reducer: Reducer | None = None) -> WebCombo:
    return (reducer or default_reducer()).reduce(x)


def evaluate_closed(w: Web, reducer: Reducer | None = None) -> RationalFunction:
    return (reducer or default_reducer()).evaluate_closed(w)
