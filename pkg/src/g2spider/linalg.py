"""Exact linear algebra over Q(q) and over specializations of q.

Symbolic systems are cleared of denominators and powers of q row by row and
eliminated fraction-free (Bareiss) over Z[q]; the echelon form is then
back-substituted in Q(q).  Specialized systems (q a rational number or an
algebraic number) use plain Gaussian elimination in that field.
"""
from __future__ import annotations

import random
from math import lcm
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

import flint

from .qfield import ONE, ZERO, PoleError, RationalFunction, specialize
from .web import WebCombo

__all__ = [
    "CoordVector",
    "SolveResult",
    "to_coords",
    "from_coords",
    "solve_in_span",
    "solve_specialized",
    "rank",
    "rank_at",
    "gram_matrix",
]


CoordVector = dict  # basis code -> RationalFunction


class LinalgError(ValueError):
    """A combination has support outside the basis it is expressed in."""


def to_coords(combo: WebCombo, basis: Sequence) -> list[RationalFunction]:
    """Coordinates of a reduced combination in an ordered basis of webs (or codes)."""
    codes = [b if isinstance(b, bytes) else b.code for b in basis]
    index = {c: i for i, c in enumerate(codes)}
    out = [ZERO] * len(codes)
    for code, c in combo.terms.items():
        if code not in index:
            raise LinalgError("combination is not supported on the given basis")
        out[index[code]] = c
    return out


def from_coords(coords: Sequence[RationalFunction], basis: Sequence) -> WebCombo:
    out = WebCombo()
    for c, w in zip(coords, basis):
        out.add(w, c)
    return out


@dataclass
class SolveResult:
    """Outcome of ``A x = b``.

    ``coeffs`` is a particular solution (free variables set to zero) when the
    system is consistent; otherwise ``inconsistent_row`` names a row of the
    echelon form reading ``0 = nonzero``.
    """

    coeffs: list | None
    rank: int
    pivots: list[int] = field(default_factory=list)
    inconsistent_row: int | None = None

    @property
    def ok(self) -> bool:
        return self.coeffs is not None

    @property
    def unique(self) -> bool:
        return self.ok and self.rank == len(self.coeffs)


# ---------------------------------------------------------------------------
# symbolic: fraction-free elimination over Z[q]
# ---------------------------------------------------------------------------


def _poly_lcm(a: flint.fmpq_poly, b: flint.fmpq_poly) -> flint.fmpq_poly:
    if a.degree() <= 0:
        return b
    if b.degree() <= 0:
        return a
    return a * b / a.gcd(b)


def _clear_row(row: Sequence[RationalFunction]) -> list[flint.fmpz_poly]:
    """Scale a row of rational functions into a row of integer polynomials."""
    nz = [x for x in row if not x.is_zero()]
    if not nz:
        return [flint.fmpz_poly(0)] * len(row)
    smin = min(x._shift for x in nz)
    D = flint.fmpq_poly(1)
    for x in nz:
        D = _poly_lcm(D, x._den)
    scaled = []
    for x in row:
        if x.is_zero():
            scaled.append(None)
            continue
        scaled.append((x._num * (D / x._den)) * flint.fmpq_poly([0] * (x._shift - smin) + [1]))
    den = 1
    for p in scaled:
        if p is not None:
            den = lcm(den, int(p.denom()))
    return [flint.fmpz_poly(0) if p is None else (p * den).numer() for p in scaled]


def _from_poly(p: flint.fmpz_poly) -> RationalFunction:
    if p.is_zero():
        return ZERO
    return RationalFunction._make(flint.fmpq_poly(p.coeffs()), flint.fmpq_poly(1), 0)


def _bareiss(M: list[list[flint.fmpz_poly]], ncols: int):
    """Fraction-free row echelon form in place; returns pivot (row, col) pairs.

    Pivot choice is deterministic: among candidate rows, fewest nonzero
    entries, then lowest degree, then lowest index.
    """
    rows = len(M)
    pivots = []
    prev = flint.fmpz_poly(1)
    r = 0
    for c in range(ncols):
        if r >= rows:
            break
        cands = [i for i in range(r, rows) if not M[i][c].is_zero()]
        if not cands:
            continue
        best = min(cands, key=lambda i: (sum(1 for x in M[i] if not x.is_zero()), M[i][c].degree(), i))
        M[r], M[best] = M[best], M[r]
        piv = M[r][c]
        for i in range(r + 1, rows):
            a = M[i][c]
            for j in range(c + 1, len(M[i])):
                val = piv * M[i][j] - a * M[r][j]
                M[i][j] = val // prev if val else val
            M[i][c] = flint.fmpz_poly(0)
        # rows above the current pivot keep their scale; exactness of the
        # Bareiss division only concerns rows below
        prev = piv
        pivots.append((r, c))
        r += 1
    return pivots


def solve_in_span(
    target: Sequence[RationalFunction],
    generators: Sequence[Sequence[RationalFunction]],
    *,
    fast: bool = False,
    seed: int = 0,
) -> SolveResult:
    """Solve ``sum_j x_j generators[j] = target`` exactly in Q(q).

    Args:
        target: coordinate vector of length ``n``.
        generators: ``k`` coordinate vectors of length ``n`` (the columns).
        fast: first solve at two random rational values of q to predict which
            unknowns vanish, solve the smaller symbolic system, and confirm the
            answer exactly; falls back to the full solve if confirmation fails.
        seed: seed for the random specializations of the fast path.
    """
    k = len(generators)
    n = len(target)
    if fast and k > 4:
        guess = _predict_support(target, generators, seed)
        if guess is not None and len(guess) < k:
            sub = solve_in_span(target, [generators[j] for j in guess])
            if sub.ok:
                x = [ZERO] * k
                for j, v in zip(guess, sub.coeffs):
                    x[j] = v
                if _check(target, generators, x):
                    return SolveResult(x, sub.rank, sorted(guess))
    rows = [[generators[j][i] for j in range(k)] + [target[i]] for i in range(n)]
    M = [_clear_row(r) for r in rows]
    piv = _bareiss(M, k)
    rk = len(piv)
    for i in range(rk, n):
        if not M[i][k].is_zero():
            return SolveResult(None, rk, [c for _, c in piv], inconsistent_row=i)
    x = [ZERO] * k
    for r, c in reversed(piv):
        acc = _from_poly(M[r][k])
        for j in range(c + 1, k):
            if not M[r][j].is_zero() and not x[j].is_zero():
                acc = acc - _from_poly(M[r][j]) * x[j]
        x[c] = acc / _from_poly(M[r][c])
    return SolveResult(x, rk, [c for _, c in piv])


def _check(target, generators, x) -> bool:
    for i in range(len(target)):
        s = ZERO
        for j, g in enumerate(generators):
            if not x[j].is_zero() and not g[i].is_zero():
                s = s + x[j] * g[i]
        if s != target[i]:
            return False
    return True


def _predict_support(target, generators, seed) -> list[int] | None:
    rng = random.Random(seed)
    supports = []
    for _ in range(2):
        q0 = Fraction(rng.randint(2, 97), rng.randint(2, 97))
        try:
            res = solve_specialized(target, generators, q0)
        except PoleError:
            return None
        if not res.ok:
            return None
        supports.append({j for j, v in enumerate(res.coeffs) if v != 0})
    return sorted(supports[0] | supports[1])


def rank(vectors: Sequence[Sequence[RationalFunction]]) -> int:
    """Symbolic rank of a list of coordinate vectors."""
    if not vectors:
        return 0
    M = [_clear_row(v) for v in vectors]
    return len(_bareiss(M, len(vectors[0])))


# ---------------------------------------------------------------------------
# specialized elimination
# ---------------------------------------------------------------------------


def _gauss(M: list[list], ncols: int, is_zero: Callable) -> list[tuple[int, int]]:
    rows = len(M)
    pivots = []
    r = 0
    for c in range(ncols):
        if r >= rows:
            break
        p = next((i for i in range(r, rows) if not is_zero(M[i][c])), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(rows):
            if i != r and not is_zero(M[i][c]):
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append((r, c))
        r += 1
    return pivots


def _is_zero(x) -> bool:
    return x == 0 if not hasattr(x, "is_zero") else x.is_zero()


def solve_specialized(target, generators, q0) -> SolveResult:
    """Specialize every entry at ``q0`` and solve in that field.

    Raises:
        PoleError: if an entry of the system has a pole at ``q0``.
    """
    k = len(generators)
    n = len(target)
    M = [[specialize(generators[j][i], q0) for j in range(k)] + [specialize(target[i], q0)] for i in range(n)]
    piv = _gauss(M, k, _is_zero)
    rk = len(piv)
    for i in range(rk, n):
        if not _is_zero(M[i][k]):
            return SolveResult(None, rk, [c for _, c in piv], inconsistent_row=i)
    zero = M[0][k] * 0 if n else Fraction(0)
    x = [zero] * k
    for r, c in piv:
        x[c] = M[r][k]
    return SolveResult(x, rk, [c for _, c in piv])


def rank_at(vectors: Sequence[Sequence], q0) -> int:
    """Rank after specializing at ``q0`` (entries may already be numbers)."""
    if not vectors:
        return 0
    M = [[specialize(x, q0) if isinstance(x, RationalFunction) else x for x in v] for v in vectors]
    return len(_gauss(M, len(M[0]), _is_zero))


def gram_matrix(basis: Sequence, pair: Callable | None = None) -> list[list[RationalFunction]]:
    """Matrix of pairings ``pair(x, y)`` over a list of webs (symmetric, upper triangle computed)."""
    if pair is None:
        from .web import pair as _pair

        pair = _pair
    n = len(basis)
    G = [[ZERO] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            v = pair(basis[i], basis[j])
            G[i][j] = v
            G[j][i] = v
    return G
