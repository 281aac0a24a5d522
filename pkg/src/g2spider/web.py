"""Planar trivalent webs in a rectangle, as combinatorial maps.

A :class:`Web` is stored as an involution ``adj`` on *endpoints*:

* ``("B", j)`` -- the j-th bottom boundary point (1-based, left to right);
* ``("T", j)`` -- the j-th top boundary point;
* ``(v, s)`` -- slot ``s`` in ``{0, 1, 2}`` of internal vertex ``v``.  The
  three slots of a vertex are listed counterclockwise.

Contracting the outside of the rectangle to one point turns the boundary into
an extra vertex whose rotation is the cyclic order
``B1, T1, T2, ..., Tm, Bn, ..., B2``; faces are the orbits of
``dart -> rotate(partner(dart))`` and planarity is Euler's formula.
Closed circles without vertices are kept as a counter (``loops``).

Isotopy classes rel boundary are identified by :func:`canonical_form`, a
byte string produced by a traversal rooted at the boundary (closed
components are rooted at every dart and the minimum taken).  Closed
components only ever matter through their scalar value, so the face they
sit in is not recorded.
"""
from __future__ import annotations

import json
import re
from array import array
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

from .qfield import RationalFunction, parse_rf

__all__ = [
    "Web",
    "WebCombo",
    "WebError",
    "Face",
    "FaceCensus",
    "parse_web",
    "print_web",
    "canonical_form",
    "web_from_code",
    "compose",
    "tensor",
    "mirror",
    "trace_closure",
    "partial_trace",
    "face_census",
    "is_basis_web",
    "pair",
    "strand",
    "identity",
    "empty",
    "cup",
    "cap",
    "up",
    "down",
    "Y",
    "L",
    "I_web",
    "H_web",
    "capcup_web",
    "polygon",
    "circle",
    "theta",
]


class WebError(ValueError):
    """Malformed or non-planar web data, or mismatched arities."""


Endpoint = tuple


def is_slot(e: Endpoint) -> bool:
    return type(e[0]) is int


def is_boundary(e: Endpoint) -> bool:
    return e[0] == "B" or e[0] == "T"


# ---------------------------------------------------------------------------
# boundary geometry
# ---------------------------------------------------------------------------

_CYCLE_CACHE: dict[tuple[int, int], tuple[dict, dict, dict]] = {}


def boundary_cycle(n: int, m: int) -> list[Endpoint]:
    """Rotation of the outside vertex: ``B1, T1..Tm, Bn..B2``."""
    if n == 0:
        return [("T", j) for j in range(1, m + 1)]
    return [("B", 1)] + [("T", j) for j in range(1, m + 1)] + [("B", j) for j in range(n, 1, -1)]


def _boundary_tables(n: int, m: int):
    key = (n, m)
    if key not in _CYCLE_CACHE:
        cyc = boundary_cycle(n, m)
        nxt = {p: cyc[(i + 1) % len(cyc)] for i, p in enumerate(cyc)}
        prv = {p: cyc[i - 1] for i, p in enumerate(cyc)}
        # walk the rectangle in the same direction: bottom right-to-left,
        # left wall up, top left-to-right, right wall down
        tokens: list = []
        tokens.append("bottom")
        for j in range(n, 0, -1):
            tokens += [("B", j), "bottom"]
        tokens.append("left")
        tokens.append("top")
        for j in range(1, m + 1):
            tokens += [("T", j), "top"]
        tokens.append("right")
        pos = {t: i for i, t in enumerate(tokens) if isinstance(t, tuple)}
        walls = {}
        for p in cyc:
            a = pos[prv[p]]
            b = pos[p]
            seen: list[str] = []
            i = (a + 1) % len(tokens)
            while True:
                t = tokens[i]
                if isinstance(t, str):
                    if t not in seen:
                        seen.append(t)
                elif i == b:
                    break
                i = (i + 1) % len(tokens)
            walls[p] = tuple(seen)
        _CYCLE_CACHE[key] = (nxt, prv, walls)
    return _CYCLE_CACHE[key]


# ---------------------------------------------------------------------------
# the web type
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Face:
    darts: tuple
    walls: tuple  # wall names touched, in traversal order; empty for internal faces

    @property
    def size(self) -> int:
        return len(self.darts)

    @property
    def internal(self) -> bool:
        return not any(is_boundary(d) for d in self.darts)

    @property
    def boundary_contacts(self) -> int:
        return sum(1 for d in self.darts if is_boundary(d))


class Web:
    """A planar trivalent graph in a rectangle; see the module docstring."""

    __slots__ = ("bottom", "top", "adj", "loops", "_code", "_faces", "_vertices")

    def __init__(
        self,
        bottom: int,
        top: int,
        adj: Mapping[Endpoint, Endpoint],
        loops: int = 0,
        *,
        validate: bool = True,
    ):
        self.bottom = int(bottom)
        self.top = int(top)
        self.adj = dict(adj)
        self.loops = int(loops)
        self._code = None
        self._faces = None
        self._vertices = None
        if validate:
            self.validate()

    # -- basic structure ----------------------------------------------------

    @property
    def vertices(self) -> list[int]:
        if self._vertices is None:
            self._vertices = sorted({e[0] for e in self.adj if is_slot(e)})
        return self._vertices

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    def boundary_points(self) -> list[Endpoint]:
        return [("B", j) for j in range(1, self.bottom + 1)] + [("T", j) for j in range(1, self.top + 1)]

    @property
    def arity(self) -> tuple[int, int]:
        return (self.bottom, self.top)

    def edges(self) -> list[tuple[Endpoint, Endpoint]]:
        out = []
        seen = set()
        for a, b in self.adj.items():
            if a in seen:
                continue
            seen.add(a)
            seen.add(b)
            out.append((a, b))
        return out

    def validate(self) -> None:
        """Check endpoint bookkeeping and Euler's formula; raise :class:`WebError`."""
        if self.bottom < 0 or self.top < 0 or self.loops < 0:
            raise WebError("negative arity or loop count")
        for a, b in self.adj.items():
            if a == b:
                raise WebError(f"endpoint {a} joined to itself")
            if self.adj.get(b) != a:
                raise WebError(f"adjacency is not symmetric at {a} -- {b}")
            for e in (a, b):
                if is_slot(e):
                    if e[1] not in (0, 1, 2):
                        raise WebError(f"bad slot {e}")
                elif e[0] == "B":
                    if not 1 <= e[1] <= self.bottom:
                        raise WebError(f"bottom point {e} out of range")
                elif e[0] == "T":
                    if not 1 <= e[1] <= self.top:
                        raise WebError(f"top point {e} out of range")
                else:
                    raise WebError(f"unknown endpoint {e}")
        for p in self.boundary_points():
            if p not in self.adj:
                raise WebError(f"boundary point {p} is not attached")
        for v in self.vertices:
            for s in range(3):
                if (v, s) not in self.adj:
                    raise WebError(f"vertex {v} is missing slot {s}")
        if self.euler_defect() != 0:
            raise WebError("rotation data is not planar (Euler's formula fails)")

    # -- faces --------------------------------------------------------------

    def _sigma(self):
        nxt, _, _ = _boundary_tables(self.bottom, self.top)

        def sigma(d):
            if is_slot(d):
                return (d[0], (d[1] + 1) % 3)
            return nxt[d]

        return sigma

    def faces(self) -> list[Face]:
        """All faces (orbits of the face permutation), in a deterministic order."""
        if self._faces is None:
            _, _, walls = _boundary_tables(self.bottom, self.top)
            sigma = self._sigma()
            adj = self.adj
            seen = set()
            out = []
            for d in sorted(adj, key=_endpoint_sort_key):
                if d in seen:
                    continue
                orbit = []
                x = d
                while x not in seen:
                    seen.add(x)
                    orbit.append(x)
                    x = sigma(adj[x])
                touched: list[str] = []
                for y in orbit:
                    if is_boundary(y):
                        for w in walls[y]:
                            if w not in touched:
                                touched.append(w)
                out.append(Face(tuple(orbit), tuple(touched)))
            self._faces = out
        return self._faces

    def components(self) -> list[tuple[frozenset, tuple]]:
        """Connected components as ``(vertex set, boundary points)``; the outside is not a node."""
        parent: dict = {}

        def node(e):
            return ("v", e[0]) if is_slot(e) else e

        def find(x):
            parent.setdefault(x, x)
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in self.adj.items():
            ra, rb = find(node(a)), find(node(b))
            if ra != rb:
                parent[ra] = rb
        groups: dict = {}
        for x in list(parent):
            groups.setdefault(find(x), []).append(x)
        comps = []
        for members in groups.values():
            verts = frozenset(x[1] for x in members if x[0] == "v")
            pts = tuple(sorted((x for x in members if x[0] != "v"), key=_endpoint_sort_key))
            comps.append((verts, pts))
        comps.sort(key=lambda c: (_endpoint_sort_key(c[1][0]) if c[1] else (9, min(c[0]))))
        return comps

    def euler_defect(self) -> int:
        """``V - E + F - 2C`` with the outside counted as one vertex; zero iff planar."""
        has_bnd = self.bottom + self.top > 0
        V = self.n_vertices + (1 if has_bnd else 0)
        E = len(self.adj) // 2
        F = len(self.faces())
        comps = self.components()
        closed = sum(1 for c in comps if not c[1])
        C = closed + (1 if has_bnd else 0)
        return V - E + F - 2 * C

    def has_lollipop(self) -> bool:
        return any(is_slot(a) and is_slot(b) and a[0] == b[0] for a, b in self.adj.items())

    def closed_components(self) -> list[frozenset]:
        return [c[0] for c in self.components() if not c[1]]

    # -- canonical form ----------------------------------------------------

    @property
    def code(self) -> bytes:
        if self._code is None:
            self._code = canonical_form(self)
        return self._code

    def __eq__(self, other):
        if not isinstance(other, Web):
            return NotImplemented
        return self.code == other.code

    def __hash__(self):
        return hash(self.code)

    def __repr__(self):
        return f"Web({self.bottom}->{self.top}, V={self.n_vertices}, loops={self.loops})"

    def __str__(self):
        return print_web(self)

    # -- convenience ---------------------------------------------------------

    def restrict(self, vertices: Iterable[int], points: Iterable[Endpoint]) -> "Web":
        """Sub-web on a union of components, boundary points renumbered in order."""
        vertices = set(vertices)
        points = list(points)
        bmap = {}
        bs = sorted((p for p in points if p[0] == "B"), key=lambda p: p[1])
        ts = sorted((p for p in points if p[0] == "T"), key=lambda p: p[1])
        for i, p in enumerate(bs, 1):
            bmap[p] = ("B", i)
        for i, p in enumerate(ts, 1):
            bmap[p] = ("T", i)

        def keep(e):
            return e[0] in vertices if is_slot(e) else e in bmap

        def rename(e):
            return e if is_slot(e) else bmap[e]

        adj = {rename(a): rename(b) for a, b in self.adj.items() if keep(a)}
        return Web(len(bs), len(ts), adj, 0, validate=False)


def _endpoint_sort_key(e):
    if is_slot(e):
        return (2, e[0], e[1])
    return (0 if e[0] == "B" else 1, e[1], 0)


# ---------------------------------------------------------------------------
# canonical form
# ---------------------------------------------------------------------------


def _token_boundary(e) -> int:
    return -(2 * e[1]) if e[0] == "B" else -(2 * e[1] + 1)


def _traverse(adj, roots_boundary, root_slot=None):
    """Breadth-first relabelling. Returns (order, rootslot, token function)."""
    label: dict[int, int] = {}
    rootslot: dict[int, int] = {}
    order: list[int] = []

    def visit(e):
        if is_slot(e) and e[0] not in label:
            label[e[0]] = len(order)
            rootslot[e[0]] = e[1]
            order.append(e[0])

    if root_slot is not None:
        visit(root_slot)
    for bp in roots_boundary:
        visit(adj[bp])
    i = 0
    while i < len(order):
        v = order[i]
        r = rootslot[v]
        for t in range(3):
            visit(adj[(v, (r + t) % 3)])
        i += 1

    def token(e):
        if is_slot(e):
            return 3 * label[e[0]] + (e[1] - rootslot[e[0]]) % 3
        return _token_boundary(e)

    return order, rootslot, token


def _closed_code(adj, verts) -> tuple:
    best = None
    for v in sorted(verts):
        for s in range(3):
            order, rootslot, token = _traverse(adj, (), (v, s))
            code = tuple(token(adj[(u, (rootslot[u] + t) % 3)]) for u in order for t in range(3))
            if best is None or code < best:
                best = code
    return best


def canonical_form(w: Web) -> bytes:
    """Isotopy invariant (rel boundary) byte string; equal iff isotopic."""
    bpts = w.boundary_points()
    order, rootslot, token = _traverse(w.adj, bpts)
    reached = set(order)
    body = [token(w.adj[p]) for p in bpts]
    for v in order:
        r = rootslot[v]
        body.extend(token(w.adj[(v, (r + t) % 3)]) for t in range(3))
    rest = [v for v in w.vertices if v not in reached]
    closed = []
    if rest:
        for comp in w.components():
            if not comp[1]:
                closed.append(_closed_code(w.adj, comp[0]))
    closed.sort()
    flat = [w.bottom, w.top, w.loops, len(order)] + body + [len(closed)]
    for c in closed:
        flat.append(len(c) // 3)
        flat.extend(c)
    return array("q", flat).tobytes()


def web_from_code(code: bytes) -> Web:
    """Rebuild the canonically labelled web from its code."""
    flat = array("q")
    flat.frombytes(code)
    flat = list(flat)
    n, m, loops, k = flat[:4]
    pos = 4
    adj: dict = {}

    def ep(tok, offset):
        if tok >= 0:
            return (tok // 3 + offset, tok % 3)
        tok = -tok
        return ("B", tok // 2) if tok % 2 == 0 else ("T", (tok - 1) // 2)

    bpts = [("B", j) for j in range(1, n + 1)] + [("T", j) for j in range(1, m + 1)]
    for p in bpts:
        adj[p] = ep(flat[pos], 0)
        pos += 1
    for v in range(k):
        for s in range(3):
            adj[(v, s)] = ep(flat[pos], 0)
            pos += 1
    offset = k
    nclosed = flat[pos]
    pos += 1
    for _ in range(nclosed):
        size = flat[pos]
        pos += 1
        for v in range(size):
            for s in range(3):
                adj[(v + offset, s)] = ep(flat[pos], offset)
                pos += 1
        offset += size
    return Web(n, m, adj, loops, validate=False)


def canonicalize(w: Web) -> Web:
    """Same web with vertices renumbered in canonical order (slot 0 = root slot)."""
    c = web_from_code(w.code)
    c._code = w.code
    return c


# ---------------------------------------------------------------------------
# gluing
# ---------------------------------------------------------------------------


def _splice(adj: Mapping, links: Mapping) -> tuple[dict, int]:
    """Resolve placeholder endpoints.

    ``adj`` is an involution on real endpoints and placeholders (tuples whose
    first entry is ``"P"``); ``links`` pairs placeholders that are the same
    point seen from two glued pieces.  Returns the glued involution on real
    endpoints and the number of closed circles formed purely of placeholders.
    """
    out = {}
    visited = set()
    for e in adj:
        if e[0] == "P" or e in out:
            continue
        p = adj[e]
        while p[0] == "P":
            visited.add(p)
            l = links[p]
            visited.add(l)
            p = adj[l]
        out[e] = p
        out[p] = e
    loops = 0
    for p in adj:
        if p[0] == "P" and p not in visited:
            loops += 1
            x = p
            while x not in visited:
                visited.add(x)
                l = links[x]
                visited.add(l)
                x = adj[l]
    return out, loops


def _shift_vertices(adj: Mapping, offset: int) -> dict:
    if offset == 0:
        return dict(adj)

    def f(e):
        return (e[0] + offset, e[1]) if is_slot(e) else e

    return {f(a): f(b) for a, b in adj.items()}


def _next_vertex_id(w: Web) -> int:
    return (w.vertices[-1] + 1) if w.vertices else 0


def compose(lower: Web, upper: Web) -> Web:
    """Stack ``upper`` on top of ``lower``."""
    if lower.top != upper.bottom:
        raise WebError(f"cannot compose: top arity {lower.top} != bottom arity {upper.bottom}")
    off = _next_vertex_id(lower)
    up_adj = _shift_vertices(upper.adj, off)

    def lo(e):
        return ("P", 0, e[1]) if e[0] == "T" else e

    def hi(e):
        return ("P", 1, e[1]) if e[0] == "B" else e

    adj = {lo(a): lo(b) for a, b in lower.adj.items()}
    adj.update({hi(a): hi(b) for a, b in up_adj.items()})
    links = {}
    for j in range(1, lower.top + 1):
        links[("P", 0, j)] = ("P", 1, j)
        links[("P", 1, j)] = ("P", 0, j)
    glued, new_loops = _splice(adj, links)
    return Web(lower.bottom, upper.top, glued, lower.loops + upper.loops + new_loops, validate=False)


def tensor(left: Web, right: Web) -> Web:
    """Place ``right`` to the right of ``left``."""
    off = _next_vertex_id(left)
    nb, nt = left.bottom, left.top

    def f(e):
        if is_slot(e):
            return (e[0] + off, e[1])
        return ("B", e[1] + nb) if e[0] == "B" else ("T", e[1] + nt)

    adj = dict(left.adj)
    adj.update({f(a): f(b) for a, b in right.adj.items()})
    return Web(left.bottom + right.bottom, left.top + right.top, adj, left.loops + right.loops, validate=False)


_MIRROR_SLOT = (0, 2, 1)


def mirror(w: Web) -> Web:
    """Reflect across a horizontal line: swaps bottom/top, reverses rotations."""

    def f(e):
        if is_slot(e):
            return (e[0], _MIRROR_SLOT[e[1]])
        return ("T", e[1]) if e[0] == "B" else ("B", e[1])

    return Web(w.top, w.bottom, {f(a): f(b) for a, b in w.adj.items()}, w.loops, validate=False)


def partial_trace(w: Web, k: int) -> Web:
    """Close the rightmost ``k`` strands of an endomorphism by arcs around the right side."""
    if w.bottom != w.top:
        raise WebError("partial trace needs an endomorphism web")
    n = w.bottom
    if not 0 <= k <= n:
        raise WebError("cannot close more strands than exist")
    keep = n - k

    def f(e):
        if is_slot(e) or e[1] <= keep:
            return e
        return ("P", e[0], e[1])

    adj = {f(a): f(b) for a, b in w.adj.items()}
    links = {}
    for j in range(keep + 1, n + 1):
        links[("P", "B", j)] = ("P", "T", j)
        links[("P", "T", j)] = ("P", "B", j)
    glued, new_loops = _splice(adj, links)
    return Web(keep, keep, glued, w.loops + new_loops, validate=False)


def trace_closure(w: Web) -> Web:
    return partial_trace(w, w.bottom)


# ---------------------------------------------------------------------------
# face census and the basis predicate
# ---------------------------------------------------------------------------


@dataclass
class FaceRecord:
    size: int
    internal: bool
    walls: tuple


@dataclass
class FaceCensus:
    faces: list[FaceRecord] = field(default_factory=list)

    @property
    def internal_sizes(self) -> list[int]:
        return sorted(f.size for f in self.faces if f.internal)

    @property
    def boundary_sizes(self) -> list[int]:
        return sorted(f.size for f in self.faces if not f.internal)


def face_census(w: Web) -> FaceCensus:
    return FaceCensus([FaceRecord(f.size, f.internal, f.walls) for f in w.faces()])


def is_basis_web(w: Web) -> bool:
    """No circles, no lollipops, and every internal face has at least 6 sides."""
    if w.loops or w.has_lollipop():
        return False
    return all(f.size >= 6 for f in w.faces() if f.internal)


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------


def _ep_text(e, label) -> str:
    if is_slot(e):
        return f"v{label[e[0]]}.{e[1] + 1}"
    return f"{e[0]}{e[1]}"


def print_web(w: Web) -> str:
    """Canonical text, ``web { bottom: n; top: m; vertices: k; rot: ...; edges: ...; loops: c }``."""
    c = canonicalize(w)
    label = {v: i + 1 for i, v in enumerate(c.vertices)}
    rot = " ".join(
        f"v{label[v]} = ({', '.join(_ep_text(c.adj[(v, s)], label) for s in range(3))})" for v in c.vertices
    )
    arcs = []
    for p in c.boundary_points():
        o = c.adj[p]
        if is_boundary(o) and _endpoint_sort_key(p) < _endpoint_sort_key(o):
            arcs.append(f"{_ep_text(p, label)}-{_ep_text(o, label)}")
    return (
        f"web {{ bottom: {c.bottom}; top: {c.top}; vertices: {len(label)}; "
        f"rot: {rot}; edges: {' '.join(arcs)}; loops: {c.loops} }}"
    )


_EP_RE = re.compile(r"^(?:([BT])(\d+)|v(\d+)\.([123]))$")


def _parse_ep(tok: str, nverts: int):
    m = _EP_RE.match(tok)
    if not m:
        raise WebError(f"bad endpoint {tok!r}")
    if m.group(1):
        return (m.group(1), int(m.group(2)))
    v = int(m.group(3))
    if not 1 <= v <= nverts:
        raise WebError(f"vertex {tok!r} out of range")
    return (v - 1, int(m.group(4)) - 1)


def parse_web(text: str) -> Web:
    s = re.sub(r"\s+", "", text)
    m = re.fullmatch(r"web\{(.*)\}", s)
    if not m:
        raise WebError("expected 'web { ... }'")
    fields: dict[str, str] = {}
    for part in m.group(1).split(";"):
        if not part:
            continue
        if ":" not in part:
            raise WebError(f"malformed field {part!r}")
        k, v = part.split(":", 1)
        if k in fields:
            raise WebError(f"duplicate field {k!r}")
        fields[k] = v
    for req in ("bottom", "top", "vertices", "rot"):
        if req not in fields:
            raise WebError(f"missing field {req!r}")
    unknown = set(fields) - {"bottom", "top", "vertices", "rot", "edges", "loops"}
    if unknown:
        raise WebError(f"unknown fields {sorted(unknown)}")
    try:
        n, mm, k = int(fields["bottom"]), int(fields["top"]), int(fields["vertices"])
        loops = int(fields.get("loops", "0") or 0)
    except ValueError as exc:
        raise WebError(str(exc)) from None
    rot: dict[int, list] = {}
    for vm in re.finditer(r"v(\d+)=\(([^)]*)\)", fields["rot"]):
        v = int(vm.group(1)) - 1
        if v in rot or not 0 <= v < k:
            raise WebError(f"bad or repeated vertex v{v + 1}")
        toks = vm.group(2).split(",")
        if len(toks) != 3:
            raise WebError(f"vertex v{v + 1} must list exactly 3 neighbours")
        rot[v] = [_parse_ep(t, k) for t in toks]
    leftover = re.sub(r"v(\d+)=\(([^)]*)\)", "", fields["rot"])
    if leftover:
        raise WebError(f"unparsed rotation data {leftover!r}")
    if len(rot) != k:
        raise WebError(f"expected {k} vertices in rot, found {len(rot)}")
    adj: dict = {}

    def link(a, b):
        for x, y in ((a, b), (b, a)):
            if x in adj and adj[x] != y:
                raise WebError(f"endpoint {x} used twice")
            adj[x] = y

    for v, nbrs in rot.items():
        for s, e in enumerate(nbrs):
            link((v, s), e)
    edges_text = fields.get("edges", "")
    arcs = re.findall(r"([BT]\d+)-([BT]\d+)", edges_text)
    if re.sub(r"[BT]\d+-[BT]\d+|,", "", edges_text):
        raise WebError(f"unparsed edge data {edges_text!r}")
    for a, b in arcs:
        link(_parse_ep(a, k), _parse_ep(b, k))
    w = Web(n, mm, adj, loops, validate=True)
    return w


# ---------------------------------------------------------------------------
# linear combinations
# ---------------------------------------------------------------------------


class WebCombo:
    """Finite Q(q)-linear combination of webs sharing one arity, keyed by canonical code."""

    __slots__ = ("terms", "webs", "arity")

    def __init__(self, arity: tuple[int, int] | None = None):
        self.terms: dict[bytes, RationalFunction] = {}
        self.webs: dict[bytes, Web] = {}
        self.arity = arity

    @classmethod
    def from_web(cls, w: Web, coeff=1) -> "WebCombo":
        c = cls(w.arity)
        c.add(w, coeff)
        return c

    @classmethod
    def from_terms(cls, items: Iterable[tuple[Web, object]], arity=None) -> "WebCombo":
        c = cls(arity)
        for w, k in items:
            c.add(w, k)
        return c

    def add(self, w: Web, coeff) -> None:
        coeff = coeff if isinstance(coeff, RationalFunction) else RationalFunction(coeff)
        if coeff.is_zero():
            return
        if self.arity is None:
            self.arity = w.arity
        elif self.arity != w.arity:
            raise WebError(f"arity mismatch in combination: {self.arity} vs {w.arity}")
        k = w.code
        new = self.terms.get(k, RationalFunction.ZERO) + coeff
        if new.is_zero():
            self.terms.pop(k, None)
            self.webs.pop(k, None)
        else:
            self.terms[k] = new
            self.webs.setdefault(k, w)

    def add_code(self, code: bytes, coeff, web: Web | None = None) -> None:
        if coeff.is_zero():
            return
        new = self.terms.get(code, RationalFunction.ZERO) + coeff
        if new.is_zero():
            self.terms.pop(code, None)
            self.webs.pop(code, None)
        else:
            self.terms[code] = new
            if code not in self.webs:
                self.webs[code] = web if web is not None else web_from_code(code)

    def items(self) -> Iterator[tuple[Web, RationalFunction]]:
        for k in sorted(self.terms):
            yield self.webs[k], self.terms[k]

    def coeff(self, w: Web) -> RationalFunction:
        return self.terms.get(w.code, RationalFunction.ZERO)

    def __len__(self):
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def copy(self) -> "WebCombo":
        c = WebCombo(self.arity)
        c.terms = dict(self.terms)
        c.webs = dict(self.webs)
        return c

    def __add__(self, other: "WebCombo") -> "WebCombo":
        out = self.copy()
        for k, v in other.terms.items():
            out._check_arity(other)
            out.add_code(k, v, other.webs[k])
        return out

    def _check_arity(self, other):
        if self.arity is None:
            self.arity = other.arity
        elif other.arity is not None and other.arity != self.arity:
            raise WebError("arity mismatch in combination")

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "WebCombo":
        c = c if isinstance(c, RationalFunction) else RationalFunction(c)
        out = WebCombo(self.arity)
        if c.is_zero():
            return out
        out.terms = {k: v * c for k, v in self.terms.items()}
        out.webs = dict(self.webs)
        return out

    def __rmul__(self, c):
        return self.scale(c)

    def __eq__(self, other):
        if not isinstance(other, WebCombo):
            return NotImplemented
        return self.terms == other.terms

    def __repr__(self):
        return f"WebCombo({self.arity}, {len(self.terms)} terms)"

    def map_bilinear(self, other: "WebCombo", op) -> "WebCombo":
        out = WebCombo()
        for ka, ca in self.terms.items():
            for kb, cb in other.terms.items():
                out.add(op(self.webs[ka], other.webs[kb]), ca * cb)
        return out

    def compose(self, upper: "WebCombo") -> "WebCombo":
        return self.map_bilinear(upper, compose)

    def tensor(self, right: "WebCombo") -> "WebCombo":
        return self.map_bilinear(right, tensor)

    def mirror(self) -> "WebCombo":
        out = WebCombo()
        for k, c in self.terms.items():
            out.add(mirror(self.webs[k]), c)
        return out

    # -- serialization -----------------------------------------------------

    def to_jsonl(self) -> str:
        lines = [json.dumps({"coeff": str(c), "web": print_web(w)}) for w, c in self.items()]
        return "\n".join(lines) + ("\n" if lines else "")

    @classmethod
    def from_jsonl(cls, text: str) -> "WebCombo":
        out = cls()
        for line in text.splitlines():
            if not line.strip():
                continue
            rec = json.loads(line)
            out.add(parse_web(rec["web"]), parse_rf(str(rec["coeff"])))
        return out


def pair(x, y) -> RationalFunction:
    """Bilinear pairing: evaluate the trace closure of ``mirror(y) o x``."""
    from .rewrite import evaluate_closed

    x = x if isinstance(x, WebCombo) else WebCombo.from_web(x)
    y = y if isinstance(y, WebCombo) else WebCombo.from_web(y)
    if x.arity != y.arity:
        raise WebError("pairing needs matching arities")
    total = RationalFunction.ZERO
    for a, ca in x.items():
        for b, cb in y.items():
            total = total + ca * cb * evaluate_closed(trace_closure(compose(a, mirror(b))))
    return total


# ---------------------------------------------------------------------------
# small named webs
# ---------------------------------------------------------------------------


def _mk(n, m, pairs, loops=0) -> Web:
    adj = {}
    for a, b in pairs:
        adj[a] = b
        adj[b] = a
    return Web(n, m, adj, loops)


def empty() -> Web:
    return Web(0, 0, {}, 0)


def circle() -> Web:
    return Web(0, 0, {}, 1)


def strand() -> Web:
    return _mk(1, 1, [(("B", 1), ("T", 1))])


def identity(n: int) -> Web:
    return _mk(n, n, [(("B", j), ("T", j)) for j in range(1, n + 1)])


def cup() -> Web:
    """0 -> 2."""
    return _mk(0, 2, [(("T", 1), ("T", 2))])


def cap() -> Web:
    """2 -> 0."""
    return _mk(2, 0, [(("B", 1), ("B", 2))])


def up() -> Web:
    """0 -> 3: one vertex joined to three top points."""
    return _mk(0, 3, [((0, 0), ("T", 1)), ((0, 1), ("T", 3)), ((0, 2), ("T", 2))])


def down() -> Web:
    """3 -> 0."""
    return _mk(3, 0, [((0, 0), ("B", 1)), ((0, 1), ("B", 2)), ((0, 2), ("B", 3))])


def Y() -> Web:
    """1 -> 2."""
    return _mk(1, 2, [((0, 0), ("B", 1)), ((0, 1), ("T", 2)), ((0, 2), ("T", 1))])


def L() -> Web:
    """2 -> 1."""
    return _mk(2, 1, [((0, 0), ("B", 1)), ((0, 1), ("B", 2)), ((0, 2), ("T", 1))])


def I_web() -> Web:
    """2 -> 2 with a vertical internal edge (an L followed by a Y)."""
    return compose(L(), Y())


def H_web() -> Web:
    """2 -> 2 with a horizontal internal edge joining the two strands."""
    return _mk(
        2,
        2,
        [
            ((0, 0), ("B", 1)),
            ((0, 1), (1, 2)),
            ((0, 2), ("T", 1)),
            ((1, 0), ("B", 2)),
            ((1, 1), ("T", 2)),
        ],
    )


def capcup_web() -> Web:
    """2 -> 2: a cap on the bottom points and a cup on the top points."""
    return compose(cap(), cup())


def theta() -> Web:
    """Closed theta graph: two vertices joined by three edges."""
    return _mk(0, 0, [((0, 0), (1, 0)), ((0, 1), (1, 2)), ((0, 2), (1, 1))])


def polygon(k: int) -> Web:
    """0 -> k: an internal k-gon (k >= 2) with one leg from each corner to the top."""
    if k < 2:
        raise WebError("a polygon needs at least two sides")
    for leg, nxt, prv in ((0, 1, 2), (0, 2, 1)):
        for flip in (False, True):
            pairs = []
            for i in range(k):
                pairs.append(((i, leg), ("T", k - i if flip else i + 1)))
                pairs.append(((i, nxt), ((i + 1) % k, prv)))
            try:
                return _mk(0, k, pairs)
            except WebError:
                continue
    raise WebError("no planar polygon")  # pragma: no cover
