"""Exact arithmetic in the rational function field Q(q).

Two value types live here:

* :class:`LaurentPoly` -- a finite sum of rational multiples of powers of ``q``
  (negative exponents allowed).  Mostly an I/O and inspection type.
* :class:`RationalFunction` -- the scalar field of every computation in the
  package.  Internally a value is ``q**shift * num / den`` with ``num`` and
  ``den`` FLINT rational polynomials, kept in a canonical form so that equal
  values have equal representations and equal hashes.

Numeric specialization at rational points and at roots of irreducible
polynomials (e.g. primitive roots of unity) is provided by :func:`specialize`.
"""
from __future__ import annotations

import re
from fractions import Fraction
from functools import total_ordering
from typing import Iterable, Mapping, Union

import flint

__all__ = [
    "LaurentPoly",
    "RationalFunction",
    "AlgebraicPoint",
    "AlgebraicNumber",
    "PoleError",
    "q",
    "specialize",
    "cyclotomic_point",
    "parse_point",
]

Scalar = Union[int, Fraction]


def _to_fmpq(c) -> flint.fmpq:
    if isinstance(c, Fraction):
        return flint.fmpq(c.numerator, c.denominator)
    return flint.fmpq(c)


def _fmpq_to_fraction(c: flint.fmpq) -> Fraction:
    return Fraction(int(c.p), int(c.q))


# ---------------------------------------------------------------------------
# Laurent polynomials
# ---------------------------------------------------------------------------


class LaurentPoly:
    """Immutable Laurent polynomial ``sum(c_k q^k)`` with rational coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, Scalar] | None = None):
        clean = {}
        for k, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                clean[int(k)] = c
        self._terms = dict(sorted(clean.items()))
        self._hash = None

    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def min_degree(self) -> int:
        return min(self._terms) if self._terms else 0

    def max_degree(self) -> int:
        return max(self._terms) if self._terms else 0

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == LaurentPoly({0: other})
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def __add__(self, other):
        other = _as_laurent(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, 0) + c
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-_as_laurent(other))

    def __rsub__(self, other):
        return _as_laurent(other) - self

    def __mul__(self, other):
        other = _as_laurent(other)
        out: dict[int, Fraction] = {}
        for i, a in self._terms.items():
            for j, b in other._terms.items():
                out[i + j] = out.get(i + j, 0) + a * b
        return LaurentPoly(out)

    __rmul__ = __mul__

    def bar(self) -> "LaurentPoly":
        return LaurentPoly({-k: c for k, c in self._terms.items()})

    def __call__(self, x):
        return sum((c * x**k for k, c in self._terms.items()), Fraction(0))

    def to_rf(self) -> "RationalFunction":
        return RationalFunction.from_laurent(self)

    def __repr__(self):
        return f"LaurentPoly({format_laurent(self)!r})"

    def __str__(self):
        return format_laurent(self)


def _as_laurent(x) -> LaurentPoly:
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, (int, Fraction)):
        return LaurentPoly({0: x})
    raise TypeError(f"cannot interpret {x!r} as a Laurent polynomial")


def format_laurent(p: LaurentPoly) -> str:
    """Print with descending exponents, e.g. ``q^10 + q^8 + 1 + q^-2``."""
    if p.is_zero():
        return "0"
    pieces = []
    for k in sorted(p._terms, reverse=True):
        c = p._terms[k]
        sign = "-" if c < 0 else "+"
        a = -c if c < 0 else c
        if k == 0:
            body = str(a)
        else:
            mono = "q" if k == 1 else f"q^{k}"
            body = mono if a == 1 else f"{a}*{mono}"
        pieces.append((sign, body))
    first_sign, first = pieces[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


_TERM_RE = re.compile(
    r"""\s*(?P<sign>[+-])?\s*
        (?:(?P<coef>\d+(?:/\d+)?)\s*(?P<star>\*)?\s*)?
        (?P<q>q(?:\s*\^\s*(?P<exp>-?\d+))?)?\s*""",
    re.VERBOSE,
)


def parse_laurent(text: str) -> LaurentPoly:
    """Parse a Laurent expression such as ``q^2 - 3*q^-1 + 1``."""
    s = text.strip()
    if s.startswith("(") and s.endswith(")") and _balanced(s[1:-1]):
        s = s[1:-1].strip()
    if not s:
        raise ValueError("empty Laurent polynomial")
    terms: dict[int, Fraction] = {}
    pos = 0
    first = True
    while pos < len(s):
        m = _TERM_RE.match(s, pos)
        if m is None or m.end() == pos:
            raise ValueError(f"malformed Laurent polynomial at {s[pos:]!r}")
        if not first and m.group("sign") is None:
            raise ValueError(f"missing operator in {text!r}")
        if m.group("coef") is None and m.group("q") is None:
            raise ValueError(f"malformed term in {text!r}")
        if m.group("star") and m.group("q") is None:
            raise ValueError(f"dangling '*' in {text!r}")
        coef = Fraction(m.group("coef")) if m.group("coef") else Fraction(1)
        if m.group("sign") == "-":
            coef = -coef
        if m.group("q") is None:
            exp = 0
        else:
            exp = int(m.group("exp")) if m.group("exp") is not None else 1
        terms[exp] = terms.get(exp, 0) + coef
        pos = m.end()
        first = False
    return LaurentPoly(terms)


def _balanced(s: str) -> bool:
    depth = 0
    for ch in s:
        depth += ch == "("
        depth -= ch == ")"
        if depth < 0:
            return False
    return depth == 0


# ---------------------------------------------------------------------------
# Rational functions
# ---------------------------------------------------------------------------


class PoleError(ZeroDivisionError):
    """Raised when a specialization hits a zero of the denominator.

    ``factor`` is the vanishing factor: ``q - q0`` for a rational point, the
    minimal polynomial for an algebraic point, or ``q`` at ``q0 = 0``.
    """

    def __init__(self, message: str, factor: LaurentPoly):
        super().__init__(message)
        self.factor = factor


def _valuation(p: flint.fmpq_poly) -> int:
    for i, c in enumerate(p.coeffs()):
        if c != 0:
            return i
    return 0


_ONE_POLY = flint.fmpq_poly([1])


@total_ordering
class RationalFunction:
    """Element of Q(q) in canonical form.

    The value is ``q**shift * num / den`` where

    * ``num`` is zero, or has a nonzero constant term;
    * ``den`` has integer coefficients with content 1, a positive leading
      coefficient and a nonzero constant term;
    * ``gcd(num, den) = 1``.

    Zero is stored as ``num = 0, den = 1, shift = 0``.  Instances are
    immutable and hashable.
    """

    __slots__ = ("_num", "_den", "_shift", "_hash")

    def __init__(self, value: Scalar | "RationalFunction" | LaurentPoly = 0):
        if isinstance(value, RationalFunction):
            self._num, self._den, self._shift = value._num, value._den, value._shift
        elif isinstance(value, LaurentPoly):
            r = RationalFunction.from_laurent(value)
            self._num, self._den, self._shift = r._num, r._den, r._shift
        else:
            c = _to_fmpq(Fraction(value))
            self._num = flint.fmpq_poly([c]) if c != 0 else flint.fmpq_poly([])
            self._den = _ONE_POLY
            self._shift = 0
        self._hash = None

    # -- construction -----------------------------------------------------

    @classmethod
    def _raw(cls, num, den, shift) -> "RationalFunction":
        obj = cls.__new__(cls)
        obj._num, obj._den, obj._shift, obj._hash = num, den, shift, None
        return obj

    @classmethod
    def _make(cls, num: flint.fmpq_poly, den: flint.fmpq_poly, shift: int, reduced=False):
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            return ZERO
        if not reduced and den.degree() > 0:
            g = num.gcd(den)
            if g.degree() > 0:
                num = num // g
                den = den // g
        k = _valuation(num)
        if k:
            num = num.right_shift(k)
            shift += k
        k = _valuation(den)
        if k:
            den = den.right_shift(k)
            shift -= k
        if den.degree() == 0:
            num = num / den.coeffs()[0]
            den = _ONE_POLY
        else:
            zden = den.numer()
            c = zden.content()
            if c != 1:
                zden = zden // c
            if zden.leading_coefficient() < 0:
                zden = -zden
            new_den = flint.fmpq_poly(zden)
            # den = ratio * new_den
            ratio = den.leading_coefficient() / new_den.leading_coefficient()
            if ratio != 1:
                num = num / ratio
            den = new_den
        return cls._raw(num, den, shift)

    @classmethod
    def from_laurent(cls, p: LaurentPoly | Mapping[int, Scalar]) -> "RationalFunction":
        terms = p.terms if isinstance(p, LaurentPoly) else {k: Fraction(c) for k, c in p.items() if c}
        if not terms:
            return ZERO
        lo = min(terms)
        coeffs = [flint.fmpq(0)] * (max(terms) - lo + 1)
        for k, c in terms.items():
            coeffs[k - lo] = _to_fmpq(Fraction(c))
        return cls._raw(flint.fmpq_poly(coeffs), _ONE_POLY, lo)

    @classmethod
    def monomial(cls, k: int, c: Scalar = 1) -> "RationalFunction":
        return cls.from_laurent({k: c})

    @classmethod
    def from_parts(cls, num: LaurentPoly, den: LaurentPoly) -> "RationalFunction":
        return cls.from_laurent(num) / cls.from_laurent(den)

    # -- inspection ---------------------------------------------------------

    @property
    def numerator(self) -> LaurentPoly:
        """Canonical numerator as a Laurent polynomial (includes the q-shift)."""
        return LaurentPoly(
            {i + self._shift: _fmpq_to_fraction(c) for i, c in enumerate(self._num.coeffs()) if c != 0}
        )

    @property
    def denominator(self) -> LaurentPoly:
        return LaurentPoly({i: _fmpq_to_fraction(c) for i, c in enumerate(self._den.coeffs()) if c != 0})

    def is_zero(self) -> bool:
        return self._num.is_zero()

    def is_laurent(self) -> bool:
        return self._den.degree() == 0

    def is_one(self) -> bool:
        return self._shift == 0 and self._den.degree() == 0 and self._num == _ONE_POLY

    def __bool__(self):
        return not self._num.is_zero()

    def _key(self):
        return (self._shift, tuple(self._num.coeffs()), tuple(self._den.coeffs()))

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def __eq__(self, other):
        if not isinstance(other, RationalFunction):
            if isinstance(other, (int, Fraction, LaurentPoly)):
                other = RationalFunction(other)
            else:
                return NotImplemented
        return self._shift == other._shift and self._num == other._num and self._den == other._den

    def __lt__(self, other):
        # Arbitrary but fixed total order on canonical representations.
        if not isinstance(other, RationalFunction):
            other = RationalFunction(other)
        return _order_key(self) < _order_key(other)

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        s = min(self._shift, other._shift)
        a = self._num.left_shift(self._shift - s) if self._shift != s else self._num
        b = other._num.left_shift(other._shift - s) if other._shift != s else other._num
        if self._den == other._den:
            return RationalFunction._make(a + b, self._den, s)
        return RationalFunction._make(a * other._den + b * self._den, self._den * other._den, s)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction._raw(-self._num, self._den, self._shift)

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return ZERO
        if self._den.degree() == 0 and other._den.degree() == 0:
            return RationalFunction._raw(self._num * other._num, _ONE_POLY, self._shift + other._shift)
        # cross-cancel before multiplying keeps operands small
        g1 = self._num.gcd(other._den) if other._den.degree() > 0 else _ONE_POLY
        g2 = other._num.gcd(self._den) if self._den.degree() > 0 else _ONE_POLY
        n1 = self._num // g1 if g1.degree() > 0 else self._num
        d2 = other._den // g1 if g1.degree() > 0 else other._den
        n2 = other._num // g2 if g2.degree() > 0 else other._num
        d1 = self._den // g2 if g2.degree() > 0 else self._den
        return RationalFunction._make(n1 * n2, d1 * d2, self._shift + other._shift, reduced=True)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(q)")
        return RationalFunction._make(self._den, self._num, -self._shift, reduced=True)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by zero in Q(q)")
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        if self.is_zero():
            return ONE if k == 0 else ZERO
        return RationalFunction._raw(self._num**k, self._den**k, self._shift * k)

    def bar(self) -> "RationalFunction":
        """The involution ``q -> q^{-1}``."""
        if self.is_zero():
            return self
        dn, dd = self._num.degree(), self._den.degree()
        num = flint.fmpq_poly(list(reversed(self._num.coeffs())))
        den = flint.fmpq_poly(list(reversed(self._den.coeffs())))
        return RationalFunction._make(num, den, -self._shift - dn + dd, reduced=True)

    # -- evaluation -------------------------------------------------------

    def __call__(self, x):
        return specialize(self, x)

    # -- text -------------------------------------------------------------

    def to_text(self) -> str:
        return format_rf(self)

    @classmethod
    def parse(cls, text: str) -> "RationalFunction":
        return parse_rf(text)

    def __repr__(self):
        return f"RationalFunction({format_rf(self)!r})"

    def __str__(self):
        return format_rf(self)


def _order_key(r: RationalFunction):
    return (
        r._den.degree(),
        [_fmpq_to_fraction(c) for c in r._den.coeffs()],
        r._shift,
        r._num.degree(),
        [_fmpq_to_fraction(c) for c in r._num.coeffs()],
    )


def _coerce(x) -> RationalFunction | None:
    if isinstance(x, RationalFunction):
        return x
    if isinstance(x, (int, Fraction, LaurentPoly)):
        return RationalFunction(x)
    return None


ZERO = RationalFunction._raw(flint.fmpq_poly([]), _ONE_POLY, 0)
ONE = RationalFunction._raw(flint.fmpq_poly([1]), _ONE_POLY, 0)
q = RationalFunction._raw(flint.fmpq_poly([1]), _ONE_POLY, 1)
RationalFunction.ZERO = ZERO
RationalFunction.ONE = ONE
RationalFunction.q = q


def format_rf(r: RationalFunction) -> str:
    """Integer-coefficient text form, ``num`` or ``(num)/(den)``."""
    num = r.numerator
    if r.is_laurent() and all(c.denominator == 1 for c in num._terms.values()):
        return format_laurent(num)
    # scale numerator and denominator by the lcm of numerator denominators
    lcm = 1
    for c in num._terms.values():
        lcm = lcm * c.denominator // _gcd(lcm, c.denominator)
    num = num * lcm
    den = r.denominator * lcm
    ntext = format_laurent(num)
    if len(num._terms) > 1:
        ntext = f"({ntext})"
    return f"{ntext}/({format_laurent(den)})"


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def parse_rf(text: str) -> RationalFunction:
    """Inverse of :func:`format_rf`; also accepts any ``laurent / (laurent)``."""
    s = text.strip()
    depth = 0
    split = None
    for i, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "/" and depth == 0:
            # a '/' directly between digits is a rational coefficient
            if i > 0 and i + 1 < len(s) and s[i - 1].isdigit() and s[i + 1].isdigit():
                continue
            if split is not None:
                raise ValueError(f"more than one top-level '/' in {text!r}")
            split = i
    if split is None:
        return RationalFunction.from_laurent(parse_laurent(s))
    num = parse_laurent(s[:split])
    den_text = s[split + 1 :].strip()
    if not (den_text.startswith("(") and den_text.endswith(")")):
        raise ValueError(f"denominator must be parenthesized in {text!r}")
    den = parse_laurent(den_text)
    if den.is_zero():
        raise ZeroDivisionError(f"zero denominator in {text!r}")
    return RationalFunction.from_parts(num, den)


# ---------------------------------------------------------------------------
# Specialization
# ---------------------------------------------------------------------------


class AlgebraicPoint:
    """A root of an irreducible polynomial over Q, used as an evaluation point."""

    def __init__(self, minpoly: LaurentPoly | Iterable[Scalar], name: str | None = None):
        if isinstance(minpoly, LaurentPoly):
            if minpoly.min_degree() < 0:
                raise ValueError("minimal polynomial must be an ordinary polynomial")
            coeffs = [minpoly.terms.get(i, 0) for i in range(minpoly.max_degree() + 1)]
        else:
            coeffs = list(minpoly)
        poly = flint.fmpq_poly([_to_fmpq(Fraction(c)) for c in coeffs])
        if poly.degree() < 1:
            raise ValueError("minimal polynomial must have positive degree")
        _, factors = poly.factor()
        if len(factors) != 1 or factors[0][1] != 1:
            raise ValueError("evaluation polynomial must be irreducible over Q")
        self.poly = poly / poly.leading_coefficient()
        self.name = name or f"root of {format_laurent(self.minpoly)}"

    @property
    def minpoly(self) -> LaurentPoly:
        return LaurentPoly({i: _fmpq_to_fraction(c) for i, c in enumerate(self.poly.coeffs())})

    def __repr__(self):
        return f"AlgebraicPoint({self.name!r})"

    def generator(self) -> "AlgebraicNumber":
        return AlgebraicNumber(self, flint.fmpq_poly([0, 1]))


def cyclotomic_point(k: int) -> AlgebraicPoint:
    """A primitive ``k``-th root of unity."""
    phi = flint.fmpz_poly.cyclotomic(k)
    return AlgebraicPoint([int(c) for c in phi.coeffs()], name=f"zeta{k}")


class AlgebraicNumber:
    """Element of Q[q]/(p) for an irreducible ``p``: an exact field element."""

    __slots__ = ("point", "poly")

    def __init__(self, point: AlgebraicPoint, poly: flint.fmpq_poly):
        self.point = point
        self.poly = poly % point.poly

    def _wrap(self, other):
        if isinstance(other, AlgebraicNumber):
            if other.point.poly != self.point.poly:
                raise ValueError("mixing different algebraic points")
            return other.poly
        if isinstance(other, (int, Fraction)):
            return flint.fmpq_poly([_to_fmpq(Fraction(other))])
        return None

    def __add__(self, other):
        o = self._wrap(other)
        return NotImplemented if o is None else AlgebraicNumber(self.point, self.poly + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._wrap(other)
        return NotImplemented if o is None else AlgebraicNumber(self.point, self.poly - o)

    def __rsub__(self, other):
        o = self._wrap(other)
        return NotImplemented if o is None else AlgebraicNumber(self.point, o - self.poly)

    def __neg__(self):
        return AlgebraicNumber(self.point, -self.poly)

    def __mul__(self, other):
        o = self._wrap(other)
        return NotImplemented if o is None else AlgebraicNumber(self.point, self.poly * o)

    __rmul__ = __mul__

    def inverse(self) -> "AlgebraicNumber":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero algebraic number")
        g, s, _ = self.poly.xgcd(self.point.poly)
        return AlgebraicNumber(self.point, s / g.coeffs()[0])

    def __truediv__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        return self * AlgebraicNumber(self.point, o).inverse()

    def __rtruediv__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        return AlgebraicNumber(self.point, o) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = AlgebraicNumber(self.point, flint.fmpq_poly([1]))
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def __bool__(self):
        return not self.poly.is_zero()

    def __eq__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        return self.poly == o % self.point.poly

    def __hash__(self):
        return hash(tuple(self.poly.coeffs()))

    def __repr__(self):
        body = format_laurent(
            LaurentPoly({i: _fmpq_to_fraction(c) for i, c in enumerate(self.poly.coeffs())})
        )
        return f"<{body} at {self.point.name}>"


def _poly_at(p: flint.fmpq_poly, x):
    if isinstance(x, AlgebraicNumber):
        return AlgebraicNumber(x.point, _compose_mod(p, x))
    return _fmpq_to_fraction(p(_to_fmpq(x)))


def _compose_mod(p: flint.fmpq_poly, x: AlgebraicNumber) -> flint.fmpq_poly:
    # Horner evaluation modulo the minimal polynomial
    acc = flint.fmpq_poly([])
    for c in reversed(p.coeffs()):
        acc = (acc * x.poly + c) % x.point.poly
    return acc


def specialize(a: RationalFunction, q0) -> Fraction | AlgebraicNumber:
    """Exact value of ``a`` at ``q = q0``.

    ``q0`` may be an ``int``/``Fraction`` or an :class:`AlgebraicPoint`.
    Raises :class:`PoleError` when the denominator vanishes at ``q0``.
    """
    a = _coerce(a)
    if isinstance(q0, AlgebraicPoint):
        x = q0.generator()
        den = _poly_at(a._den, x)
        if den.is_zero():
            raise PoleError(f"pole of {a} at {q0.name}", q0.minpoly)
        val = _poly_at(a._num, x) / den
        return val * x**a._shift
    q0 = Fraction(q0)
    if q0 == 0:
        if a._shift < 0 and not a.is_zero():
            raise PoleError(f"pole of {a} at q = 0", LaurentPoly({1: 1}))
        if a._shift > 0:
            return Fraction(0)
    den = _poly_at(a._den, q0)
    if den == 0:
        raise PoleError(f"pole of {a} at q = {q0}", LaurentPoly({1: 1, 0: -q0}))
    val = _poly_at(a._num, q0) / den
    return val * q0**a._shift if a._shift else val


def parse_point(text: str) -> Fraction | AlgebraicPoint:
    """Parse ``3/2``, ``zeta8`` (primitive 8th root of unity) or ``root(q^4 - q^2 + 1)``."""
    s = text.strip()
    m = re.fullmatch(r"zeta(\d+)", s)
    if m:
        return cyclotomic_point(int(m.group(1)))
    m = re.fullmatch(r"root\((.*)\)", s)
    if m:
        return AlgebraicPoint(parse_laurent(m.group(1)), name=s)
    return Fraction(s)
