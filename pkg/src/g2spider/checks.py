"""Self-checks run by ``g2spider verify``.

Each suite returns a list of :class:`Check` records.  Expected values are
either the tabulated constants in :mod:`g2spider.reference_formulas` and the
relation table, or independently computed quantities (dimensions of
invariant spaces from the weights of the 7-dimensional representation).
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .qfield import AlgebraicPoint, PoleError, RationalFunction, cyclotomic_point, q, specialize

__all__ = ["Check", "SUITES", "run_suite", "invariant_dimensions", "singular_locus", "on_singular_locus"]


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


# ---------------------------------------------------------------------------
# independent oracles
# ---------------------------------------------------------------------------

# simple roots and the weights of the 7-dimensional representation, in the
# basis of fundamental weights (first = short root)
_ALPHA = ((2, -1), (-3, 2))
_WEIGHTS = ((1, 0), (-1, 1), (2, -1), (0, 0), (-2, 1), (1, -1), (-1, 0))


def _tensor_with_v(dec: dict) -> dict:
    out: dict = {}
    for lam, mult in dec.items():
        for mu in _WEIGHTS:
            nu = [lam[0] + mu[0] + 1, lam[1] + mu[1] + 1]
            sign = 1
            while sign:
                if 0 in nu:
                    sign = 0
                elif nu[0] < 0 or nu[1] < 0:
                    i = 0 if nu[0] < 0 else 1
                    c = nu[i]
                    nu = [nu[0] - c * _ALPHA[i][0], nu[1] - c * _ALPHA[i][1]]
                    sign = -sign
                else:
                    break
            if sign:
                key = (nu[0] - 1, nu[1] - 1)
                out[key] = out.get(key, 0) + sign * mult
    return {k: v for k, v in out.items() if v}


def invariant_dimensions(N: int) -> list[int]:
    """Dimensions of invariants in ``V^{(x)k}``, ``k = 0..N`` (Brauer-Klimyk rule)."""
    dec = {(0, 0): 1}
    out = [1]
    for _ in range(N):
        dec = _tensor_with_v(dec)
        out.append(dec.get((0, 0), 0))
    return out


def singular_locus() -> RationalFunction:
    return (q**8 - 1) * (q**4 - q**2 + 1) * (q**6 + q**4 + q**2 + 1)


def on_singular_locus(q0) -> bool:
    if isinstance(q0, AlgebraicPoint):
        return specialize(singular_locus(), q0).is_zero()
    q0 = Fraction(q0)
    return q0 == 0 or specialize(singular_locus(), q0) == 0


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------


def _rf_list(xs) -> str:
    return "[" + ", ".join(str(x) for x in xs) + "]"


def suite_relations(cfg) -> list[Check]:
    from .rewrite import RELATIONS, evaluate_closed, reduce
    from .web import circle, polygon

    T = RELATIONS
    out = [Check("circle", evaluate_closed(circle()) == T.delta, f"delta = {T.delta}")]
    expected = {
        2: [T.bigon],
        3: [T.triangle],
        4: sorted([T.square_tree] * 2 + [T.square_matching] * 2, key=str),
        5: sorted([T.pentagon_tree] * 5 + [T.pentagon_forest] * 5, key=str),
    }
    names = {2: "bigon", 3: "triangle", 4: "square", 5: "pentagon"}
    for k, exp in expected.items():
        got = reduce(polygon(k))
        coeffs = sorted((c for _, c in got.items()), key=str)
        ok = coeffs == exp and all(w.n_vertices <= k - 2 for w, _ in got.items())
        out.append(Check(names[k], ok, _rf_list(coeffs)))
    return out


def _power_images(n_powers: int = 5):
    from .braid import BraidWord, eval_braid
    from .enumeration import basis_webs
    from .linalg import to_coords

    basis = basis_webs(2, 2)
    return basis, [to_coords(eval_braid(BraidWord(2, (1,) * k)), basis) for k in range(n_powers)]


def suite_charpoly(cfg) -> list[Check]:
    from .linalg import solve_in_span
    from .reference_formulas import CHARPOLY, evaluate

    _, imgs = _power_images(5)
    res = solve_in_span(imgs[4], imgs[:4])
    exp = [evaluate(e) for e in CHARPOLY]
    ok = res.unique and res.coeffs == exp
    return [Check("sigma^4 in sigma^0..sigma^3", ok, _rf_list(res.coeffs or []))]


def _two_strand_targets():
    from .web import H_web, I_web, capcup_web

    return {"capcup": capcup_web(), "I": I_web(), "H": H_web()}


def suite_lemma4(cfg) -> list[Check]:
    from .linalg import solve_in_span, to_coords
    from .reference_formulas import CAPCUP_POWERS_FIXED, H_POWERS, I_POWERS, POWER_DENOMINATOR, evaluate
    from .web import WebCombo

    basis, imgs = _power_images(4)
    den = evaluate(POWER_DENOMINATOR)
    tables = {"capcup": CAPCUP_POWERS_FIXED, "I": I_POWERS, "H": H_POWERS}
    out = []
    for name, web in _two_strand_targets().items():
        res = solve_in_span(to_coords(WebCombo.from_web(web), basis), imgs)
        exp = [evaluate(e) / den for e in tables[name]]
        got = [c * den for c in res.coeffs] if res.ok else []
        out.append(Check(name, res.unique and res.coeffs == exp, "numerators " + _rf_list(got)))
    return out


def suite_lemma5(cfg) -> list[Check]:
    from .braid import BraidAlgebraElement, eval_braid
    from .reference_formulas import DOWN_UP_DENOMINATOR, DOWN_UP_TERMS, LY_DENOMINATOR, LY_TERMS, combination
    from .web import L, WebCombo, Y, compose, down, identity, tensor, up

    targets = {
        "down-up": (DOWN_UP_TERMS, DOWN_UP_DENOMINATOR, compose(down(), up())),
        "LY": (LY_TERMS, LY_DENOMINATOR, compose(tensor(L(), identity(1)), tensor(identity(1), Y()))),
    }
    out = []
    for name, (terms, den, web) in targets.items():
        el = BraidAlgebraElement.from_terms(3, combination(terms, den))
        got = eval_braid(el)
        out.append(Check(name, got == WebCombo.from_web(web), f"{len(el)} words"))
    return out


def _random_rational(rng: random.Random) -> Fraction:
    while True:
        x = Fraction(rng.randint(-60, 60), rng.randint(1, 60))
        if not on_singular_locus(x):
            return x


def suite_counts(cfg) -> list[Check]:
    from .enumeration import basis_dimension, basis_webs, disk_basis
    from .linalg import gram_matrix, rank_at

    dims = invariant_dimensions(8)
    got = [len(disk_basis(N)) for N in range(9)]
    out = [Check("disk webs, 0..8 points", got == dims, f"{got} vs {dims}")]
    rng = random.Random(cfg.seed)
    for n, exp in ((1, 1), (2, 4), (3, 35)):
        d = basis_dimension(n, n)
        q0 = _random_rational(rng)
        r = rank_at(gram_matrix(basis_webs(n, n)), q0)
        out.append(Check(f"End(V^{n})", d == exp and r == exp, f"dimension {d}, Gram rank {r} at q = {q0}"))
    return out


def suite_euler(cfg) -> list[Check]:
    from .enumeration import basis_webs
    from .surject import euler_census, find_peel_site

    comps = bad = slid = 0
    for N in range(9):
        for n in range(N + 1):
            for w in basis_webs(n, N - n):
                big = [c for c in euler_census(w) if len(c.vertices) >= 2]
                if big and find_peel_site(w) is None:
                    slid += 1
                for c in big:
                    comps += 1
                    sub = w.restrict(c.vertices, c.points)
                    ok = (
                        c.boundary.get(1, 0) == 0
                        and c.small_boundary_faces >= 3
                        and c.measure() == 1
                        and find_peel_site(sub) is not None
                    )
                    bad += not ok
    detail = f"{comps} components checked, {bad} failures; {slid} webs need a component slid clear first"
    return [Check("components with >= 2 vertices, <= 8 boundary points", bad == 0 and comps > 0, detail)]


def suite_roundtrip(cfg) -> list[Check]:
    from .braid import eval_braid
    from .enumeration import basis_webs
    from .surject import Decomposer
    from .web import WebCombo

    dec = Decomposer(budget=cfg.budget)
    rng = random.Random(cfg.seed)
    out = []
    for n, sample in ((2, None), (3, None), (4, 20)):
        ws = basis_webs(n, n)
        if sample is not None:
            ws = rng.sample(ws, sample)
        bad = sum(eval_braid(dec.decompose(w)) != WebCombo.from_web(w) for w in ws)
        out.append(Check(f"End(V^{n})", bad == 0, f"{len(ws)} webs, {bad} mismatches"))
    return out


def suite_confluence(cfg) -> list[Check]:
    from .enumeration import random_closed_web, random_web
    from .rewrite import Reducer, random_chooser

    rng = random.Random(cfg.seed)
    bad = 0
    for i in range(100):
        w = random_closed_web(rng, 12)
        a = Reducer(chooser=random_chooser(2 * i), split_closed=False).evaluate_closed(w)
        b = Reducer(chooser=random_chooser(2 * i + 1), split_closed=False).evaluate_closed(w)
        bad += a != b
    out = [Check("100 closed webs", bad == 0, f"{bad} disagreements")]
    bad = 0
    for i in range(100):
        n, m = rng.randint(0, 4), rng.randint(0, 4)
        if n + m == 0:
            m = 2
        w = random_web(rng, n, m, 12)
        a = Reducer(chooser=random_chooser(2 * i), split_closed=False).reduce(w)
        b = Reducer(chooser=random_chooser(2 * i + 1), split_closed=False).reduce(w)
        bad += a != b
    out.append(Check("100 open webs", bad == 0, f"{bad} disagreements"))
    return out


def _point_name(q0) -> str:
    return q0.name if isinstance(q0, AlgebraicPoint) else f"q = {q0}"


def specialized_power_solve(q0) -> tuple[bool, str]:
    """Whether cap-cup, I and H are uniquely combinations of sigma^0..sigma^3 at ``q0``.

    Returns ``(solvable, reason)``.  Failure is either a pole of the exact
    coefficients at ``q0`` or a singular specialized system.
    """
    from .linalg import solve_in_span, solve_specialized, to_coords
    from .web import WebCombo

    basis, imgs = _power_images(4)
    poles = []
    singular = []
    for name, web in _two_strand_targets().items():
        tgt = to_coords(WebCombo.from_web(web), basis)
        exact = solve_in_span(tgt, imgs)
        try:
            vals = [specialize(c, q0) for c in exact.coeffs]
        except PoleError:
            poles.append(name)
            vals = None
        try:
            res = solve_specialized(tgt, imgs, q0)
            if not res.unique or (vals is not None and res.coeffs != vals):
                singular.append(name)
        except PoleError:
            singular.append(name)
    if poles or singular:
        return False, f"coefficient poles in {poles}, singular or undefined system for {singular}"
    return True, "unique solution, equal to the exact coefficients specialized"


def suite_specialization(cfg) -> list[Check]:
    from .qfield import parse_laurent

    if cfg.q0 is not None:
        points = [cfg.q0]
    else:
        rng = random.Random(cfg.seed)
        points = [
            cyclotomic_point(8),
            AlgebraicPoint(parse_laurent("q^4 - q^2 + 1"), name="root of q^4 - q^2 + 1"),
            cyclotomic_point(4),
        ] + [_random_rational(rng) for _ in range(5)]
    out = []
    for q0 in points:
        expect = not on_singular_locus(q0)
        ok, why = specialized_power_solve(q0)
        label = "solvable" if ok else "fails"
        out.append(
            Check(
                _point_name(q0),
                ok == expect,
                f"{label} ({'expected' if ok == expect else 'unexpected'}): {why}",
            )
        )
    return out


SUITES = {
    "relations": suite_relations,
    "lemma4": suite_lemma4,
    "lemma5": suite_lemma5,
    "charpoly": suite_charpoly,
    "counts": suite_counts,
    "euler": suite_euler,
    "roundtrip": suite_roundtrip,
    "confluence": suite_confluence,
    "specialization": suite_specialization,
}


@dataclass
class SuiteConfig:
    seed: int = 0
    q0: object = None
    budget: int | None = None


def run_suite(name: str, cfg: SuiteConfig | None = None) -> list[Check]:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    return SUITES[name](cfg or SuiteConfig())
