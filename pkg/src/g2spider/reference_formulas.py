"""Closed-form braid expansions used as regression targets.

Each formula expresses a web as a Q(q)-combination of braid words.  Words
are written as in the :mod:`g2spider.braid` text format without the strand
prefix (``"s1 s2^-1"``; ``""`` is the identity).  Coefficients are Python
expressions in ``q``, evaluated exactly in Q(q) by :func:`evaluate`.
"""
from __future__ import annotations

from .qfield import RationalFunction, q as _q

__all__ = [
    "CHARPOLY",
    "POWER_DENOMINATOR",
    "CAPCUP_POWERS",
    "CAPCUP_POWERS_FIXED",
    "I_POWERS",
    "H_POWERS",
    "THREE_STRAND_WORDS",
    "DOWN_UP_DENOMINATOR",
    "DOWN_UP_TERMS",
    "LY_DENOMINATOR",
    "LY_TERMS",
    "evaluate",
    "combination",
]


def evaluate(expr: str) -> RationalFunction:
    """Evaluate a coefficient expression in q exactly."""
    return RationalFunction(eval(expr, {"__builtins__": {}}, {"q": _q}))


# sigma^4 = sum_k CHARPOLY[k] sigma^k on two strands
CHARPOLY = [
    "-q**-16",
    "q**-18 - q**-16 - q**-10 + q**-4",
    "q**-18 + q**-12 - q**-10 - q**-6 + q**-4 + q**2",
    "q**-12 - q**-6 - 1 + q**2",
]

# two-strand webs as combinations of sigma^0..sigma^3, over a common denominator
POWER_DENOMINATOR = "(q**2 - 1)*(q**4 - q**2 + 1)*(q**6 + q**4 + q**2 + 1)"
CAPCUP_POWERS = [
    "q**22",
    "-q**20 + q**22 + q**28",
    "-q**20 - q**26 - q**28",
    "-q**26",
]
# CAPCUP_POWERS as tabulated carries a sign slip in the q**28 term of the
# sigma^2 coefficient; with it, the I, H and cap-cup expansions substituted
# into the crossing formula do not return sigma.  The fixed vector does.
CAPCUP_POWERS_FIXED = [
    "q**22",
    "-q**20 + q**22 + q**28",
    "-q**20 - q**26 + q**28",
    "-q**26",
]
I_POWERS = [
    "-q**8 - q**12",
    "q**6 - q**8 + q**10 - q**12 + q**20 + q**24",
    "q**6 + q**10 - q**18 + q**20 - q**22 + q**24",
    "-q**18 - q**22",
]
H_POWERS = [
    "q**2 - q**4 + 2*q**6 + q**12 - q**14 - q**18",
    "-q**-2 - 2*q**4 + 2*q**6 - q**8 + q**10 + q**12 + q**16 - 2*q**18 - q**22 - q**24",
    "-q**4 - q**8 + 2*q**16 - q**18 + q**20 - q**24",
    "q**16 + q**20 + q**22",
]

# 35 three-strand words whose images span the three-strand endomorphisms
THREE_STRAND_WORDS = [
    "",
    "s1",
    "s1^-1",
    "s2",
    "s2^-1",
    "s1 s1",
    "s1 s2",
    "s1 s2^-1",
    "s1^-1 s2",
    "s1^-1 s2^-1",
    "s2 s1",
    "s2 s1^-1",
    "s2 s2",
    "s2^-1 s1",
    "s2^-1 s1^-1",
    "s1 s1 s2",
    "s1 s1 s2^-1",
    "s1 s2 s1",
    "s1 s2 s1^-1",
    "s1 s2 s2",
    "s1 s2^-1 s1",
    "s1 s2^-1 s1^-1",
    "s1^-1 s2 s1",
    "s1^-1 s2 s1^-1",
    "s1^-1 s2 s2",
    "s1^-1 s2^-1 s1",
    "s1^-1 s2^-1 s1^-1",
    "s2 s1 s1",
    "s2 s2 s1",
    "s2 s2 s1^-1",
    "s2^-1 s1 s1",
    "s1 s1 s2 s1",
    "s1 s2 s1 s1",
    "s1 s2 s2 s1",
    "s2 s1 s1 s2",
]

DOWN_UP_DENOMINATOR = "(q**2-1)**2*(q**2+1)*(q**4-q**2+1)**2"
DOWN_UP_TERMS = [
    ("", "-q**2*(q**2-1)*(q**26-q**24+q**22+q**20-2*q**18+4*q**16-3*q**14+2*q**10-4*q**8+q**6-q**4-1)"),
    ("s1", "q**8*(-q**22+3*q**20-5*q**18+4*q**16-3*q**12+7*q**10-6*q**8+2*q**6+q**4-4*q**2+2)"),
    ("s1^-1", "-q**4*(q**2-1)*(q**18-q**16+2*q**14+2*q**8-q**6+q**4+1)"),
    ("s2", "q**2*(q**2-1)*(q**22-q**20+q**18+3*q**12-2*q**10+3*q**8+q**6-2*q**4+2*q**2-1)"),
    ("s2^-1", "-q**4*(q**2-1)*(2*q**14+q**10+3*q**8-q**6+q**4+1)"),
    ("s1 s1", "q**10*(q**2-1)**2*(q**2+1)*(q**12-q**10+3*q**8-q**6+3*q**4+1)"),
    ("s1 s2", "(-q**24+3*q**22-3*q**20+q**18+q**16-5*q**14+5*q**12-4*q**10+q**8+2*q**6-2*q**4+q**2)"),
    ("s1 s2^-1", "-q**10*(q**10-2*q**8+q**6-q**4-q**2+1)"),
    ("s1^-1 s2", "q**4*(q**4-q**2+1)*(q**8+q**2-1)"),
    ("s1^-1 s2^-1", "-q**6*(q**8-q**6+q**4-q**2+1)"),
    ("s2 s1", "(-q**24+3*q**22-3*q**20+q**18+q**16-5*q**14+5*q**12-4*q**10+q**8+2*q**6-2*q**4+q**2)"),
    ("s2 s1^-1", "q**4*(q**4-q**2+1)*(q**8+q**2-1)"),
    ("s2 s2", "(q**22-q**24)"),
    ("s2^-1 s1", "-q**10*(q**10-2*q**8+q**6-q**4-q**2+1)"),
    ("s2^-1 s1^-1", "-q**6*(q**8-q**6+q**4-q**2+1)"),
    ("s1 s1 s2", "0"),
    ("s1 s1 s2^-1", "q**16*(q**2-1)"),
    ("s1 s2 s1", "(3*q**22-6*q**20+4*q**18-q**16-2*q**14+5*q**12-3*q**10+3*q**8-q**4+q**2)"),
    ("s1 s2 s1^-1", "q**4*(q**12-2*q**10+q**8-q**6-q**4+q**2-1)"),
    ("s1 s2 s2", "q**20*(q**2-1)"),
    ("s1 s2^-1 s1", "-q**12"),
    ("s1 s2^-1 s1^-1", "0"),
    ("s1^-1 s2 s1", "q**4*(q**12-2*q**10+q**8-q**6-q**4+q**2-1)"),
    ("s1^-1 s2 s1^-1", "(q**10-q**8+q**6)"),
    ("s1^-1 s2 s2", "0"),
    ("s1^-1 s2^-1 s1", "0"),
    ("s1^-1 s2^-1 s1^-1", "q**8*(q**4-q**2+1)"),
    ("s2 s1 s1", "0"),
    ("s2 s2 s1", "q**20*(q**2-1)"),
    ("s2 s2 s1^-1", "0"),
    ("s2^-1 s1 s1", "q**16*(q**2-1)"),
    ("s1 s1 s2 s1", "(q**18-q**20)"),
    ("s1 s2 s1 s1", "(q**18-q**20)"),
    ("s1 s2 s2 s1", "(q**18-q**20)"),
    ("s2 s1 s1 s2", "0"),
]

LY_DENOMINATOR = "(q**2-1)**2*(q**2+1)*(q**4+1)*(q**4-q**2+1)**2"
LY_TERMS = [
    ("", "-q**2*(q**2-1)*(q**4+1)*(q**24-q**22+2*q**18-2*q**16+q**12-2*q**10-q**4+q**2-1)"),
    ("s1", "-q**2*(q**30-3*q**28+5*q**26-4*q**24+2*q**20-3*q**18+q**16+2*q**14-q**12+2*q**10-2*q**6+2*q**4-2*q**2+1)"),
    ("s1^-1", "(-q**26+2*q**24-2*q**22+q**20+q**18-q**16+q**14-q**10+q**8-q**6+q**4)"),
    ("s2", "q**2*(q**26-2*q**24+2*q**22-4*q**18+8*q**16-9*q**14+5*q**12-5*q**8+6*q**6-5*q**4+3*q**2-1)"),
    ("s2^-1", "-q**4*(q**18-q**16+q**12-2*q**10+q**6-q**4+q**2-1)"),
    ("s1 s1", "(q**30-2*q**28+3*q**26-2*q**24-q**18+q**12)"),
    ("s1 s2", "-q**2*(q**24-3*q**22+3*q**20+q**18-5*q**16+9*q**14-7*q**12+3*q**10-3*q**6+3*q**4-2*q**2+1)"),
    ("s1 s2^-1", "(q**18-q**10+q**8-q**6+q**4)"),
    ("s1^-1 s2", "q**4*(q**4-q**2+1)*(q**14-q**12+q**10-q**6+q**4-q**2+1)"),
    ("s1^-1 s2^-1", "-q**6"),
    ("s2 s1", "-q**6*(q**20-2*q**18+2*q**16-q**12+3*q**10-2*q**8+q**4-2*q**2+1)"),
    ("s2 s1^-1", "q**6*(q**4-q**2+1)*(q**8+q**2-1)"),
    ("s2 s2", "-q**14*(q**2-1)*(q**4+1)*(q**6-q**2+1)"),
    ("s2^-1 s1", "-q**12*(q**10-2*q**8+q**6-q**4-q**2+1)"),
    ("s2^-1 s1^-1", "-q**2*(q**14-q**10+q**8+q**6-2*q**4+2*q**2-1)"),
    ("s1 s1 s2", "q**14*(q**4-q**2+1)"),
    ("s1 s1 s2^-1", "-q**16"),
    ("s1 s2 s1", "q**6*(2*q**18-4*q**16+2*q**14+q**12-3*q**10+5*q**8-2*q**6+q**4-1)"),
    ("s1 s2 s1^-1", "q**6*(q**4+1)*(q**8-2*q**6+q**2-1)"),
    ("s1 s2 s2", "q**14*(q**10-q**8+q**4-q**2+1)"),
    ("s1 s2^-1 s1", "-q**14"),
    ("s1 s2^-1 s1^-1", "(q**2+1)*(q**5-q**3+q)**2"),
    ("s1^-1 s2 s1", "-q**8*(q**2-1)*(q**4+1)"),
    ("s1^-1 s2 s1^-1", "q**8*(q**4-q**2+1)"),
    ("s1^-1 s2 s2", "-q**16*(q**4-q**2+1)"),
    ("s1^-1 s2^-1 s1", "0"),
    ("s1^-1 s2^-1 s1^-1", "(-q**8+q**6-q**4)"),
    ("s2 s1 s1", "0"),
    ("s2 s2 s1", "q**22*(q**2-1)"),
    ("s2 s2 s1^-1", "0"),
    ("s2^-1 s1 s1", "q**18*(q**2-1)"),
    ("s1 s1 s2 s1", "q**12*(q**2-1)*(q**4+1)"),
    ("s1 s2 s1 s1", "(q**20-q**22)"),
    ("s1 s2 s2 s1", "(q**20-q**22)"),
    ("s2 s1 s1 s2", "0"),
]


def combination(terms, denominator: str = "1") -> list[tuple[str, RationalFunction]]:
    """``[(word, coefficient)]`` with the common denominator divided out."""
    d = evaluate(denominator)
    return [(w, evaluate(c) / d) for w, c in terms]
