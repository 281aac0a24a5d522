"""Exact computations with G2 spider webs over Q(q).

Submodules:

* :mod:`g2spider.qfield` -- Laurent polynomials and rational functions in q.
* :mod:`g2spider.web` -- planar trivalent webs, gluing, canonical forms.
* :mod:`g2spider.enumeration` -- basis (non-elliptic) webs of a given arity.
* :mod:`g2spider.rewrite` -- reduction of webs by the local skein relations.
* :mod:`g2spider.braid` -- braid words, the crossing, and braid evaluation.
* :mod:`g2spider.linalg` -- exact linear algebra over Q(q).
* :mod:`g2spider.surject` -- writing webs as images of braid algebra elements.
* :mod:`g2spider.checks` -- self-check suites behind ``g2spider verify``.
* :mod:`g2spider.cli` -- the ``g2spider`` command.
"""
from .qfield import LaurentPoly, RationalFunction, PoleError, q
from .web import Web, WebCombo, parse_web, print_web
from .rewrite import evaluate_closed, reduce
from .braid import BraidAlgebraElement, BraidWord, eval_braid, parse_braid
from .surject import decompose

__all__ = [
    "LaurentPoly",
    "RationalFunction",
    "PoleError",
    "q",
    "Web",
    "WebCombo",
    "parse_web",
    "print_web",
    "reduce",
    "evaluate_closed",
    "BraidWord",
    "BraidAlgebraElement",
    "parse_braid",
    "eval_braid",
    "decompose",
]
__version__ = "0.1.0"
