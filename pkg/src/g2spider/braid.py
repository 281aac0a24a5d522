"""Braid words, the braid group algebra, and their evaluation as webs.

A positive crossing between strands ``i`` and ``i+1`` expands as

    X = 1/(1+q^2) I + 1/(1+q^-2) H + 1/(q^2+q^4) capcup + 1/(q^-2+q^-4) id

where ``I`` is a merge followed by a split (an internal edge running
bottom to top) and ``H`` has its internal edge running across.  The
negative crossing is the image of ``X`` under ``q -> q^-1``.  With this
assignment the crossing satisfies the braid relations and its fourth power
obeys the expected characteristic equation.

Words are read left to right from the bottom of the diagram up, so the
product ``x * y`` of two words or elements means "first x, then y".
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .qfield import ONE, ZERO, RationalFunction, format_rf, parse_rf, q
from .rewrite import Reducer, default_reducer
from .web import (
    H_web,
    I_web,
    Web,
    WebCombo,
    WebError,
    capcup_web,
    compose,
    identity,
    partial_trace,
    tensor,
    web_from_code,
)

__all__ = [
    "BraidWord",
    "BraidAlgebraElement",
    "FactoredElement",
    "BraidEvaluator",
    "crossing_coefficients",
    "crossing_combo",
    "eval_braid",
    "block_swap_braid",
    "curl_factor",
    "parse_braid",
]


class BraidError(ValueError):
    """Malformed braid text or mismatched strand counts."""


# ---------------------------------------------------------------------------
# words
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BraidWord:
    """A word in the generators ``s_i^{+-1}`` on ``n`` strands; letters are signed indices."""

    n: int
    letters: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(int(x) for x in self.letters))
        for x in self.letters:
            if x == 0 or not 1 <= abs(x) < self.n:
                raise BraidError(f"generator s{abs(x)} does not exist on {self.n} strands")

    def __mul__(self, other: "BraidWord") -> "BraidWord":
        if isinstance(other, BraidWord):
            _same_n(self.n, other.n)
            return BraidWord(self.n, self.letters + other.letters)
        return NotImplemented

    def __len__(self):
        return len(self.letters)

    def inverse(self) -> "BraidWord":
        return BraidWord(self.n, tuple(-x for x in reversed(self.letters)))

    def reversed(self) -> "BraidWord":
        return BraidWord(self.n, tuple(reversed(self.letters)))

    def shifted(self, offset: int, n: int) -> "BraidWord":
        """The same word acting on strands ``offset+1..`` of an ``n``-strand braid."""
        return BraidWord(n, tuple(x + offset if x > 0 else x - offset for x in self.letters))

    def body(self) -> str:
        return " ".join(f"s{abs(x)}" + ("" if x > 0 else "^-1") for x in self.letters)

    def __str__(self):
        b = self.body()
        return f"B{self.n}: {b}" if b else f"B{self.n}:"


_LETTER_RE = re.compile(r"s(\d+)(?:\^(-?1))?$")


def parse_word_body(n: int, body: str) -> BraidWord:
    letters = []
    for tok in body.split():
        if tok in ("1", "e"):
            continue
        m = _LETTER_RE.match(tok)
        if not m:
            raise BraidError(f"bad braid letter {tok!r}")
        i = int(m.group(1))
        letters.append(i if m.group(2) in (None, "1") else -i)
    return BraidWord(n, tuple(letters))


def parse_braid(text: str) -> BraidWord:
    """Parse ``"B3: s1 s2^-1"``."""
    m = re.fullmatch(r"\s*B(\d+)\s*:(.*)", text, re.S)
    if not m:
        raise BraidError(f"expected 'B<n>: ...', got {text!r}")
    return parse_word_body(int(m.group(1)), m.group(2))


def _same_n(a: int, b: int) -> None:
    if a != b:
        raise BraidError(f"strand counts differ: {a} vs {b}")


# ---------------------------------------------------------------------------
# the braid group algebra
# ---------------------------------------------------------------------------


class BraidAlgebraElement:
    """Finite Q(q)-combination of braid words on ``n`` strands (words are not reduced)."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: dict | None = None):
        self.n = n
        self.terms: dict[tuple, RationalFunction] = {}
        for w, c in (terms or {}).items():
            self._add(tuple(w), c)

    @classmethod
    def word(cls, w: BraidWord | str, coeff=ONE, n: int | None = None) -> "BraidAlgebraElement":
        if isinstance(w, str):
            w = parse_braid(w) if n is None else parse_word_body(n, w)
        return cls(w.n, {w.letters: coeff})

    @classmethod
    def identity(cls, n: int) -> "BraidAlgebraElement":
        return cls(n, {(): ONE})

    @classmethod
    def from_terms(cls, n: int, items: Iterable[tuple]) -> "BraidAlgebraElement":
        """From ``(word, coeff)`` pairs where a word is a body string or a :class:`BraidWord`."""
        out = cls(n)
        for w, c in items:
            if isinstance(w, str):
                w = parse_word_body(n, w)
            _same_n(n, w.n)
            out._add(w.letters, c)
        return out

    def _add(self, letters: tuple, c) -> None:
        c = c if isinstance(c, RationalFunction) else RationalFunction(c)
        if c.is_zero():
            return
        BraidWord(self.n, letters)  # validates
        new = self.terms.get(letters, ZERO) + c
        if new.is_zero():
            self.terms.pop(letters, None)
        else:
            self.terms[letters] = new

    def items(self) -> Iterator[tuple[BraidWord, RationalFunction]]:
        for k in sorted(self.terms, key=lambda t: (len(t), t)):
            yield BraidWord(self.n, k), self.terms[k]

    def __len__(self):
        return len(self.terms)

    def __add__(self, other: "BraidAlgebraElement") -> "BraidAlgebraElement":
        _same_n(self.n, other.n)
        out = BraidAlgebraElement(self.n, self.terms)
        for k, c in other.terms.items():
            out._add(k, c)
        return out

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "BraidAlgebraElement":
        c = c if isinstance(c, RationalFunction) else RationalFunction(c)
        return BraidAlgebraElement(self.n, {k: v * c for k, v in self.terms.items()})

    def __rmul__(self, c):
        return self.scale(c)

    def __mul__(self, other):
        if isinstance(other, BraidAlgebraElement):
            _same_n(self.n, other.n)
            out = BraidAlgebraElement(self.n)
            for a, ca in self.terms.items():
                for b, cb in other.terms.items():
                    out._add(a + b, ca * cb)
            return out
        if isinstance(other, BraidWord):
            return self * BraidAlgebraElement.word(other)
        if isinstance(other, FactoredElement):
            return FactoredElement.of(self) * other
        return self.scale(other)

    def __eq__(self, other):
        if not isinstance(other, BraidAlgebraElement):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def shifted(self, offset: int, n: int) -> "BraidAlgebraElement":
        """Place this element on strands ``offset+1..offset+self.n`` of ``n`` strands."""
        out = BraidAlgebraElement(n)
        for w, c in self.items():
            out._add(w.shifted(offset, n).letters, c)
        return out

    def reversed(self) -> "BraidAlgebraElement":
        return BraidAlgebraElement(self.n, {tuple(reversed(k)): c for k, c in self.terms.items()})

    def bar(self) -> "BraidAlgebraElement":
        """Apply ``q -> q^-1`` to coefficients and invert every crossing."""
        return BraidAlgebraElement(self.n, {tuple(-x for x in k): c.bar() for k, c in self.terms.items()})

    def __repr__(self):
        return f"BraidAlgebraElement(B{self.n}, {len(self.terms)} words)"

    def to_jsonl(self) -> str:
        lines = [json.dumps({"coeff": format_rf(c), "word": str(w)}) for w, c in self.items()]
        return "\n".join(lines) + ("\n" if lines else "")

    @classmethod
    def from_jsonl(cls, text: str, n: int | None = None) -> "BraidAlgebraElement":
        out = None
        for line in text.splitlines():
            if not line.strip():
                continue
            rec = json.loads(line)
            w = parse_braid(rec["word"])
            if out is None:
                out = cls(w.n if n is None else n)
            _same_n(out.n, w.n)
            out._add(w.letters, parse_rf(str(rec["coeff"])))
        if out is None:
            if n is None:
                raise BraidError("empty element needs an explicit strand count")
            out = cls(n)
        return out


class FactoredElement:
    """A sum of products of braid algebra elements, kept unexpanded.

    ``terms`` is a list of ``(coeff, (F1, F2, ...))`` meaning
    ``coeff * F1 * F2 * ...`` (first ``F1``, then ``F2``, ...).
    """

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: list | None = None):
        self.n = n
        self.terms: list[tuple[RationalFunction, tuple]] = []
        for c, fs in terms or []:
            for f in fs:
                _same_n(n, f.n)
            c = c if isinstance(c, RationalFunction) else RationalFunction(c)
            if not c.is_zero():
                self.terms.append((c, tuple(fs)))

    @classmethod
    def of(cls, x) -> "FactoredElement":
        if isinstance(x, FactoredElement):
            return x
        if isinstance(x, BraidWord):
            x = BraidAlgebraElement.word(x)
        return cls(x.n, [(ONE, (x,))])

    def __mul__(self, other) -> "FactoredElement":
        other = FactoredElement.of(other) if not isinstance(other, (int, RationalFunction)) else other
        if not isinstance(other, FactoredElement):
            return FactoredElement(self.n, [(c * other, fs) for c, fs in self.terms])
        _same_n(self.n, other.n)
        return FactoredElement(self.n, [(a * b, fa + fb) for a, fa in self.terms for b, fb in other.terms])

    def __rmul__(self, other):
        if isinstance(other, (BraidAlgebraElement, BraidWord)):
            return FactoredElement.of(other) * self
        return self * other

    def __add__(self, other) -> "FactoredElement":
        other = FactoredElement.of(other)
        _same_n(self.n, other.n)
        return FactoredElement(self.n, self.terms + other.terms)

    def shifted(self, offset: int, n: int) -> "FactoredElement":
        return FactoredElement(n, [(c, tuple(f.shifted(offset, n) for f in fs)) for c, fs in self.terms])

    def reversed(self) -> "FactoredElement":
        return FactoredElement(self.n, [(c, tuple(f.reversed() for f in reversed(fs))) for c, fs in self.terms])

    def expand(self) -> BraidAlgebraElement:
        total = BraidAlgebraElement(self.n)
        for c, fs in self.terms:
            prod = BraidAlgebraElement.identity(self.n)
            for f in fs:
                prod = prod * f
            total = total + prod.scale(c)
        return total

    def factor_count(self) -> int:
        return sum(len(fs) for _, fs in self.terms)

    def __repr__(self):
        return f"FactoredElement(B{self.n}, {len(self.terms)} products)"


# ---------------------------------------------------------------------------
# the crossing
# ---------------------------------------------------------------------------


def crossing_coefficients(sign: int = 1) -> dict[str, RationalFunction]:
    """Coefficients of I, H, capcup and id in the crossing of the given sign."""
    qi = q.inverse()
    c = {
        "I": ONE / (1 + q**2),
        "H": ONE / (1 + qi**2),
        "capcup": ONE / (q**2 + q**4),
        "id": ONE / (qi**2 + qi**4),
    }
    if sign < 0:
        c = {k: v.bar() for k, v in c.items()}
    return c


def crossing_combo(sign: int = 1) -> WebCombo:
    """The crossing as a combination of four webs from two points to two points."""
    c = crossing_coefficients(sign)
    return WebCombo.from_terms(
        [(I_web(), c["I"]), (H_web(), c["H"]), (capcup_web(), c["capcup"]), (identity(2), c["id"])]
    )


def curl_factor(sign: int = 1) -> RationalFunction:
    """Scalar by which a kink (a crossing with one strand closed up) acts on a strand."""
    from .rewrite import reduce

    out = reduce(WebCombo.from_terms((partial_trace(w, 1), c) for w, c in crossing_combo(sign).items()))
    if len(out) != 1:
        raise WebError("kink did not reduce to a multiple of the strand")
    (_, c), = out.items()
    return c


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------


class BraidEvaluator:
    """Evaluates braid words and elements as reduced webs, sharing work across calls."""

    def __init__(self, reducer: Reducer | None = None):
        self.reducer = reducer or default_reducer()
        self._layers: dict[tuple[int, int], list[tuple[RationalFunction, Web]]] = {}
        self._letter: dict[tuple[bytes, int], dict[bytes, RationalFunction]] = {}

    def _layer(self, n: int, letter: int) -> list[tuple[RationalFunction, Web]]:
        key = (n, letter)
        if key not in self._layers:
            i = abs(letter)
            out = []
            for w, c in crossing_combo(1 if letter > 0 else -1).items():
                out.append((c, tensor(tensor(identity(i - 1), w), identity(n - i - 1))))
            self._layers[key] = out
        return self._layers[key]

    def letter_image(self, code: bytes, n: int, letter: int) -> dict[bytes, RationalFunction]:
        """Reduced image of a basis web followed by one crossing."""
        key = (code, letter)
        hit = self._letter.get(key)
        if hit is not None:
            return hit
        w = web_from_code(code)
        out: dict[bytes, RationalFunction] = {}
        for c, g in self._layer(n, letter):
            for k, v in self.reducer.reduce_web(compose(w, g)).items():
                _acc(out, k, c * v)
        self._letter[key] = out
        return out

    def apply_letter(self, vec: dict, n: int, letter: int) -> dict:
        out: dict[bytes, RationalFunction] = {}
        for code, c in vec.items():
            for k, v in self.letter_image(code, n, letter).items():
                _acc(out, k, c * v)
        return out

    def apply_element(self, vec: dict, el: BraidAlgebraElement) -> dict:
        """``vec`` followed by ``el``; words sharing a prefix share its evaluation."""
        trie: dict = {}
        for letters, c in el.terms.items():
            node = trie
            for x in letters:
                node = node.setdefault(x, {})
            node[None] = node.get(None, ZERO) + c
        out: dict[bytes, RationalFunction] = {}
        stack = [(trie, vec)]
        while stack:
            node, cur = stack.pop()
            for key, child in node.items():
                if key is None:
                    for k, v in cur.items():
                        _acc(out, k, child * v)
                else:
                    stack.append((child, self.apply_letter(cur, el.n, key)))
        return out

    def evaluate(self, x) -> WebCombo:
        """Reduced image of a :class:`BraidWord`, element or factored element."""
        if isinstance(x, BraidWord):
            x = BraidAlgebraElement.word(x)
        n = x.n
        start = {identity(n).code: ONE}
        if isinstance(x, BraidAlgebraElement):
            vec = self.apply_element(start, x)
        elif isinstance(x, FactoredElement):
            vec = {}
            for c, fs in x.terms:
                cur = start
                for f in fs:
                    cur = self.apply_element(cur, f)
                    if not cur:
                        break
                for k, v in cur.items():
                    _acc(vec, k, c * v)
        else:
            raise TypeError(f"cannot evaluate {type(x).__name__}")
        out = WebCombo((n, n))
        for k, v in vec.items():
            out.add_code(k, v)
        return out


def _acc(d: dict, k, v) -> None:
    if v.is_zero():
        return
    new = d.get(k, ZERO) + v
    if new.is_zero():
        d.pop(k, None)
    else:
        d[k] = new


_EVAL: dict[str, BraidEvaluator] = {}


def default_evaluator() -> BraidEvaluator:
    if "e" not in _EVAL:
        _EVAL["e"] = BraidEvaluator()
    return _EVAL["e"]


def eval_braid(x, evaluator: BraidEvaluator | None = None) -> WebCombo:
    """Reduced web combination of a braid word or braid algebra element."""
    return (evaluator or default_evaluator()).evaluate(x)


def block_swap_braid(k: int, l: int) -> BraidWord:
    """Positive braid on ``k + l`` strands carrying the left ``k`` strands past the right ``l``."""
    letters = []
    for j in range(k, 0, -1):
        letters.extend(range(j, j + l))
    return BraidWord(k + l, tuple(letters))
