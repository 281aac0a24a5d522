"""Enumeration of basis webs.

A web with ``n`` bottom and ``m`` top points is the same thing as a disk web
with ``n + m`` points read around the boundary circle, so everything is built
in the disk first.  Disk webs are grown from the empty web by gluing
elementary pieces (a cup, a trivalent vertex splitting one point into two,
an H, or a vertex merging two points) onto adjacent boundary points, together
with rotations of the boundary, keeping only webs without circles,
lollipops, or internal faces with fewer than six sides.  Every such web is
reachable this way because removing a boundary arc, a boundary vertex or a
boundary H from a basis web leaves a basis web.
"""
from __future__ import annotations

from functools import lru_cache

from .web import Web, WebError, boundary_cycle, compose, cup, H_web, identity, is_basis_web, L, tensor, Y

__all__ = ["disk_basis", "basis_webs", "basis_dimension", "rotate_disk", "random_web", "random_closed_web"]

_LEVELS: dict[int, dict[bytes, Web]] = {0: {}}
_DONE = {"n": -1}


def rotate_disk(w: Web, k: int = 1) -> Web:
    """Rotate the points of a disk web (no bottom points) by ``k`` positions."""
    N = w.top
    if N == 0:
        return w
    perm = {j: ((j - 1 + k) % N) + 1 for j in range(1, N + 1)}

    def f(e):
        return ("T", perm[e[1]]) if e[0] == "T" else e

    return Web(0, N, {f(a): f(b) for a, b in w.adj.items()}, w.loops, validate=False)


def _padded(g: Web, i: int, N: int) -> Web:
    return tensor(tensor(identity(i), g), identity(N - i - g.bottom))


def _grow(Nmax: int) -> None:
    if _DONE["n"] >= Nmax:
        return
    pieces = [cup(), Y(), H_web(), L()]
    levels: dict[int, dict[bytes, Web]] = {N: {} for N in range(Nmax + 1)}
    e = Web(0, 0, {})
    levels[0][e.code] = e
    frontier = [e]
    while frontier:
        nxt = []
        for w in frontier:
            N = w.top
            cands = [rotate_disk(w)] if N else []
            for g in pieces:
                M = N - g.bottom + g.top
                if g.bottom > N or M > Nmax:
                    continue
                for i in range(N - g.bottom + 1):
                    cands.append(compose(w, _padded(g, i, N)))
            for c in cands:
                lvl = levels[c.top]
                if c.code not in lvl and is_basis_web(c):
                    lvl[c.code] = c
                    nxt.append(c)
        frontier = nxt
    _LEVELS.clear()
    _LEVELS.update(levels)
    _DONE["n"] = Nmax


def disk_basis(N: int) -> list[Web]:
    """Basis webs with ``N`` points on a circle (as ``0 -> N`` webs), sorted by code."""
    _grow(N)
    return [_LEVELS[N][k] for k in sorted(_LEVELS[N])]


@lru_cache(maxsize=None)
def _basis(n: int, m: int) -> tuple[Web, ...]:
    cyc = boundary_cycle(n, m)
    out = {}
    for w in disk_basis(n + m):

        def f(e):
            return cyc[e[1] - 1] if e[0] == "T" else e

        r = Web(n, m, {f(a): f(b) for a, b in w.adj.items()}, 0, validate=False)
        out[r.code] = r
    return tuple(out[k] for k in sorted(out))


def basis_webs(n: int, m: int) -> list[Web]:
    """Basis webs from ``n`` bottom to ``m`` top points, sorted by canonical code."""
    return list(_basis(n, m))


def basis_dimension(n: int, m: int) -> int:
    return len(_basis(n, m))


# ---------------------------------------------------------------------------
# random webs
# ---------------------------------------------------------------------------

_PIECES = None


def _pieces():
    global _PIECES
    if _PIECES is None:
        from .web import cap, down, strand, up

        _PIECES = {
            "strand": strand(),
            "cup": cup(),
            "cap": cap(),
            "Y": Y(),
            "L": L(),
            "up": up(),
            "down": down(),
            "H": H_web(),
        }
    return _PIECES


def _random_layer(rng, width: int, names) -> Web:
    P = _pieces()
    layer = None
    left = width
    while left > 0 or layer is None:
        fits = [nm for nm in names if P[nm].bottom <= left and (left > 0 or P[nm].bottom == 0)]
        if not fits:
            fits = ["cup"]
        nm = rng.choice(fits)
        g = P[nm]
        layer = g if layer is None else tensor(layer, g)
        left -= g.bottom
        if left == 0 and rng.random() < 0.5:
            break
    return layer


def random_web(rng, bottom: int, top: int, max_vertices: int = 12, layers: int = 4) -> Web:
    """Random web built by stacking layers of elementary pieces.

    Pieces are strands, cups, caps, the two trivalent vertices with one input
    or one output, the vertices with three inputs or three outputs, and H.
    Layers are added while the vertex count stays within ``max_vertices``,
    then the width is brought to ``top`` with caps, merges and splits.
    """
    grow = ["strand", "strand", "cup", "Y", "L", "H", "cap", "up", "down"]
    w = identity(bottom)
    for _ in range(layers):
        lay = _random_layer(rng, w.top, grow)
        if w.top > 8 and lay.top > lay.bottom:
            continue
        nxt = compose(w, lay)
        if nxt.n_vertices > max_vertices:
            break
        w = nxt
    guard = 0
    while w.top != top and guard < 50:
        guard += 1
        d = w.top - top
        if d >= 2:
            names = ["strand", "cap", "L", "down"]
        elif d == 1:
            names = ["strand", "L", "down"] if w.n_vertices < max_vertices else ["strand", "L"]
        elif d == -1:
            names = ["strand", "Y"]
        else:
            names = ["strand", "cup", "Y"]
        lay = _random_layer(rng, w.top, names)
        if abs(w.top - lay.bottom + lay.top - top) > abs(d):
            continue
        w = compose(w, lay)
    if w.top != top:
        if w.top > top:
            w = compose(w, tensor(identity(top), _close(w.top - top)))
        else:
            w = compose(w, tensor(identity(w.top), _open(top - w.top)))
    return w


def _close(k: int) -> Web:
    """A web from k points to none (a cap chain, finishing with a lollipop-free merge)."""
    from .web import cap

    if k == 1:
        return compose(Y(), cap())
    if k % 2 == 0:
        out = cap()
        for _ in range(k // 2 - 1):
            out = tensor(out, cap())
        return out
    # odd: merge the last three with a trivalent vertex
    from .web import down

    out = down()
    for _ in range((k - 3) // 2):
        out = tensor(cap(), out)
    return out


def _open(k: int) -> Web:
    from .web import mirror

    return mirror(_close(k))


def random_closed_web(rng, max_vertices: int = 12) -> Web:
    """Random closed web: a stacked web, or a theta graph grown by random chords."""
    if rng.random() < 0.5:
        while True:
            w = random_web(rng, 0, 0, max_vertices, layers=rng.randint(2, 6))
            if 2 <= w.n_vertices <= max_vertices:
                return w
    from .web import theta

    w = theta()
    target = rng.randrange(2, max_vertices + 1, 2)
    while w.n_vertices < target:
        w = _add_chord(rng, w)
    return w


def _add_chord(rng, w: Web) -> Web:
    """Join two edge midpoints on a common face by a new edge."""
    f = rng.choice(w.faces())
    i, j = rng.randrange(len(f.darts)), rng.randrange(len(f.darts))
    d1, d2 = f.darts[i], f.darts[j]
    x = (w.vertices[-1] + 1) if w.vertices else 0
    y = x + 1
    for rx in rng.sample([0, 1], 2):
        for ry in rng.sample([0, 1], 2):
            adj = dict(w.adj)
            ends = []
            for v, d, r in ((x, d1, rx), (y, d2, ry)):
                a = adj[d]
                # subdivide edge d -- a with vertex v
                adj[d] = (v, 0)
                adj[(v, 0)] = d
                adj[a] = (v, 1)
                adj[(v, 1)] = a
                ends.append((v, 2))
                if r:
                    adj[(v, 0)], adj[(v, 1)] = a, d
                    adj[a], adj[d] = (v, 0), (v, 1)
            adj[ends[0]] = ends[1]
            adj[ends[1]] = ends[0]
            cand = Web(w.bottom, w.top, adj, w.loops, validate=False)
            try:
                cand.validate()
            except WebError:
                continue
            return cand
    return w
