"""
Exact univariate Laurent polynomials over Q.

A polynomial is stored as a valuation (lowest exponent) plus a dense tuple of
``Fraction`` coefficients starting at that exponent. Leading and trailing
zeros are trimmed on construction, so equal polynomials have equal storage.

>>> y = LaurentPoly.gen("y")
>>> (1 - y**2) * (1 + y**2)
LaurentPoly('1 - 1*y^4')
>>> lp_canonical(1 - y**4)
LaurentPoly('-1 + 1*y^4')

Two Euclidean rings share the same element type: ``QY`` is the polynomial
ring Q[y] (measure = degree, units = nonzero constants) and ``QLAURENT`` is
Q[y, y^-1] (measure = exponent span, units = nonzero monomials).
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Union

__all__ = [
    "RingError",
    "VariableMismatch",
    "DivisionByZeroPoly",
    "BothZero",
    "ZeroInput",
    "EvalAtZeroWithNegativeExponent",
    "OddExponentPresent",
    "PolyParseError",
    "LaurentPoly",
    "EuclideanRing",
    "QY",
    "QLAURENT",
    "ring_from_tag",
    "lp_add",
    "lp_sub",
    "lp_mul",
    "lp_neg",
    "lp_divrem",
    "lp_gcd",
    "lp_canonical",
    "lp_eval",
    "lp_eval_even",
    "delta",
    "parse_poly",
    "format_poly",
    "to_rational",
]

RationalLike = Union[int, Fraction, str]


class RingError(ArithmeticError):
    pass


class VariableMismatch(RingError):
    pass


class DivisionByZeroPoly(RingError, ZeroDivisionError):
    pass


class BothZero(RingError):
    pass


class ZeroInput(RingError):
    pass


class EvalAtZeroWithNegativeExponent(RingError, ZeroDivisionError):
    pass


class OddExponentPresent(RingError):
    pass


class PolyParseError(ValueError):
    pass


def to_rational(x: RationalLike) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"not an exact rational: {x!r}")


_ZERO = Fraction(0)
_ONE = Fraction(1)


def _unpickle_poly(var, val, coeffs):
    return LaurentPoly._raw(var, val, coeffs)


class LaurentPoly:
    """Immutable Laurent polynomial with rational coefficients in one variable."""

    __slots__ = ("var", "val", "coeffs", "_hash")

    def __init__(self, terms: Mapping[int, RationalLike] | None = None, var: str = "y"):
        if not terms:
            self._set(var, 0, ())
            return
        items = {}
        for e, c in terms.items():
            c = to_rational(c)
            if c:
                items[int(e)] = items.get(int(e), _ZERO) + c
        items = {e: c for e, c in items.items() if c}
        if not items:
            self._set(var, 0, ())
            return
        lo, hi = min(items), max(items)
        self._set(var, lo, tuple(items.get(e, _ZERO) for e in range(lo, hi + 1)))

    def _set(self, var: str, val: int, coeffs: tuple):
        object.__setattr__(self, "var", var)
        object.__setattr__(self, "val", val)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPoly is immutable")

    def __reduce__(self):
        # pickle through the trusted constructor; slot state cannot be set directly
        return (_unpickle_poly, (self.var, self.val, self.coeffs))

    @classmethod
    def _raw(cls, var: str, val: int, coeffs: Iterable[Fraction]) -> LaurentPoly:
        # Trusted constructor: trims zeros but skips conversion.
        c = list(coeffs)
        lo, hi = 0, len(c)
        while lo < hi and not c[lo]:
            lo += 1
        while hi > lo and not c[hi - 1]:
            hi -= 1
        p = cls.__new__(cls)
        if lo == hi:
            p._set(var, 0, ())
        else:
            p._set(var, val + lo, tuple(c[lo:hi]))
        return p

    @classmethod
    def zero(cls, var: str = "y") -> LaurentPoly:
        return cls._raw(var, 0, ())

    @classmethod
    def one(cls, var: str = "y") -> LaurentPoly:
        return cls._raw(var, 0, (_ONE,))

    @classmethod
    def constant(cls, c: RationalLike, var: str = "y") -> LaurentPoly:
        return cls._raw(var, 0, (to_rational(c),))

    @classmethod
    def monomial(cls, c: RationalLike, exp: int, var: str = "y") -> LaurentPoly:
        return cls._raw(var, exp, (to_rational(c),))

    @classmethod
    def gen(cls, var: str = "y") -> LaurentPoly:
        return cls.monomial(1, 1, var)

    # -- inspection -------------------------------------------------------

    @property
    def terms(self) -> dict[int, Fraction]:
        return {self.val + i: c for i, c in enumerate(self.coeffs) if c}

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def is_monomial(self) -> bool:
        return sum(1 for c in self.coeffs if c) == 1

    def is_constant(self) -> bool:
        return not self.coeffs or (len(self.coeffs) == 1 and self.val == 0)

    @property
    def degree(self) -> int:
        """Highest exponent; -1 for zero by convention."""
        return self.val + len(self.coeffs) - 1 if self.coeffs else -1

    @property
    def min_exp(self) -> int:
        return self.val

    @property
    def delta(self) -> int:
        if not self.coeffs:
            raise ZeroInput("delta of the zero polynomial")
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else _ZERO

    @property
    def trailing(self) -> Fraction:
        return self.coeffs[0] if self.coeffs else _ZERO

    def coeff(self, e: int) -> Fraction:
        i = e - self.val
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return _ZERO

    def bitsize(self) -> int:
        return sum(c.numerator.bit_length() + c.denominator.bit_length() for c in self.coeffs)

    def exponent_gcd(self) -> int:
        from math import gcd

        g = 0
        for i, c in enumerate(self.coeffs):
            if c:
                g = gcd(g, self.val + i)
        return g

    # -- arithmetic -------------------------------------------------------

    def _check(self, other: LaurentPoly):
        if other.var != self.var:
            raise VariableMismatch(f"{self.var!r} vs {other.var!r}")

    def _coerce(self, other) -> LaurentPoly:
        if isinstance(other, LaurentPoly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentPoly.constant(other, self.var)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other.coeffs:
            return self
        if not self.coeffs:
            return other
        lo = min(self.val, other.val)
        hi = max(self.degree, other.degree)
        out = [_ZERO] * (hi - lo + 1)
        for i, c in enumerate(self.coeffs, self.val - lo):
            out[i] = c
        for i, c in enumerate(other.coeffs, other.val - lo):
            out[i] += c
        return LaurentPoly._raw(self.var, lo, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw(self.var, self.val, [-c for c in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return LaurentPoly.zero(self.var)
        if len(b) == 1:
            k = b[0]
            return LaurentPoly._raw(self.var, self.val + other.val, [c * k for c in a])
        if len(a) == 1:
            k = a[0]
            return LaurentPoly._raw(self.var, self.val + other.val, [c * k for c in b])
        out = [_ZERO] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, z in enumerate(b):
                    out[i + j] += x * z
        return LaurentPoly._raw(self.var, self.val + other.val, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            if not self.is_monomial():
                raise RingError("only monomials have inverses")
            return LaurentPoly.monomial(1 / self.coeffs[0], -self.val, self.var) ** (-k)
        result = LaurentPoly.one(self.var)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c: RationalLike) -> LaurentPoly:
        c = to_rational(c)
        return LaurentPoly._raw(self.var, self.val, [x * c for x in self.coeffs])

    def shift(self, k: int) -> LaurentPoly:
        """Multiply by y^k."""
        if not self.coeffs:
            return self
        return LaurentPoly._raw(self.var, self.val + k, self.coeffs)

    def substitute_power(self, g: int) -> LaurentPoly:
        """Return p(y^g)."""
        if g == 1 or not self.coeffs:
            return self
        return LaurentPoly({e * g: c for e, c in self.terms.items()}, self.var)

    def compress_power(self, g: int) -> LaurentPoly:
        """Inverse of substitute_power; every exponent must be divisible by g."""
        if g == 1 or not self.coeffs:
            return self
        t = self.terms
        if any(e % g for e in t):
            raise OddExponentPresent(f"exponent not divisible by {g}")
        return LaurentPoly({e // g: c for e, c in t.items()}, self.var)

    def with_var(self, var: str) -> LaurentPoly:
        return LaurentPoly._raw(var, self.val, self.coeffs)

    # -- comparison and display --------------------------------------------

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            if not self.coeffs and not other.coeffs:
                return True
            return self.var == other.var and self.val == other.val and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            if not other:
                return not self.coeffs
            return self.val == 0 and self.coeffs == (other,)
        return NotImplemented

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.var, self.val, self.coeffs)) if self.coeffs else hash(0)
            object.__setattr__(self, "_hash", h)
        return h

    def sort_key(self) -> tuple:
        """Order used for reporting torsion: by delta, then coefficients low to high."""
        return (len(self.coeffs), self.val, self.coeffs)

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"LaurentPoly('{format_poly(self)}')"

    def pretty(self) -> str:
        """Human-readable form, e.g. ``1 - y^2``."""
        if not self.coeffs:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items()):
            mono = "" if e == 0 else (self.var if e == 1 else f"{self.var}^{e}")
            mag = abs(c)
            if mono:
                body = mono if mag == 1 else f"{mag}*{mono}"
            else:
                body = str(mag)
            if not parts:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append((" - " if c < 0 else " + ") + body)
        return "".join(parts)

    def __call__(self, point: RationalLike) -> Fraction:
        return lp_eval(self, point)


# -- textual format ---------------------------------------------------------

def _fmt_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_poly(p: LaurentPoly) -> str:
    """
    Print ``p`` as ascending ``c*y^k`` terms; the constant term has no monomial.

    >>> y = LaurentPoly.gen("y")
    >>> format_poly(y**-1 - Fraction(1, 2) * y**3)
    '1*y^-1 - 1/2*y^3'
    """
    if not p.coeffs:
        return "0"
    out = []
    for e, c in sorted(p.terms.items()):
        body = _fmt_coeff(abs(c)) + ("" if e == 0 else f"*{p.var}^{e}")
        if not out:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out)


_TERM = re.compile(
    r"""\s*(?P<sign>[+-])?\s*
        (?:(?P<coef>\d+(?:/\d+)?)\s*(?P<star>\*)?\s*)?
        (?:(?P<var>[A-Za-z_]\w*)(?:\s*\^\s*(?P<exp>[+-]?\d+))?)?\s*""",
    re.VERBOSE,
)


def parse_poly(text: str, var: str | None = None) -> LaurentPoly:
    """
    Parse the textual polynomial format. Accepts the canonical printed form
    and the obvious shorthands (``y^2``, ``-q^-1``, ``3*y``).

    >>> parse_poly("1 - 1*y^2")
    LaurentPoly('1 - 1*y^2')
    >>> parse_poly("q - 2*q^-1 + 1*q^-3")
    LaurentPoly('1*q^-3 - 2*q^-1 + 1*q^1')
    """
    s = text.strip()
    if not s:
        raise PolyParseError("empty polynomial")
    terms: dict[int, Fraction] = {}
    seen_var = var
    pos = 0
    first = True
    while pos < len(s):
        m = _TERM.match(s, pos)
        if m is None or m.end() == pos:
            raise PolyParseError(f"cannot parse {text!r} at offset {pos}")
        sign, coef, star, v, exp = m.group("sign", "coef", "star", "var", "exp")
        if sign is None and not first:
            raise PolyParseError(f"missing operator in {text!r} at offset {pos}")
        if coef is None and v is None:
            raise PolyParseError(f"empty term in {text!r} at offset {pos}")
        if star and v is None:
            raise PolyParseError(f"dangling '*' in {text!r}")
        if exp is not None and v is None:
            raise PolyParseError(f"exponent without variable in {text!r}")
        c = Fraction(coef) if coef is not None else _ONE
        if sign == "-":
            c = -c
        e = 0
        if v is not None:
            if seen_var is None:
                seen_var = v
            elif v != seen_var:
                raise VariableMismatch(f"{v!r} in polynomial over {seen_var!r}")
            e = int(exp) if exp is not None else 1
        terms[e] = terms.get(e, _ZERO) + c
        pos = m.end()
        first = False
    return LaurentPoly(terms, seen_var or "y")


# -- functional API -------------------------------------------------------------

def lp_add(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    a._check(b)
    return a + b


def lp_sub(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    a._check(b)
    return a - b


def lp_mul(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    a._check(b)
    return a * b


def lp_neg(a: LaurentPoly) -> LaurentPoly:
    return -a


def delta(p: LaurentPoly) -> int:
    return p.delta


def _poly_divmod(a: tuple, b: tuple) -> tuple[list, list]:
    # Dense division of ordinary polynomials, coefficient lists low to high.
    if len(a) < len(b):
        return [], list(a)
    r = list(a)
    lb = b[-1]
    nb = len(b)
    q = [_ZERO] * (len(a) - nb + 1)
    for k in range(len(q) - 1, -1, -1):
        c = r[k + nb - 1]
        if c:
            c = c / lb
            q[k] = c
            for j in range(nb):
                bj = b[j]
                if bj:
                    r[k + j] -= c * bj
    return q, r[: nb - 1]


def lp_divrem(a: LaurentPoly, b: LaurentPoly, laurent: bool = True) -> tuple[LaurentPoly, LaurentPoly]:
    """
    Euclidean division ``a = q*b + r``.

    With ``laurent=True`` the measure is the exponent span and monomials are
    units, so ``r`` is zero or has strictly smaller span than ``b``.
    With ``laurent=False`` both inputs must be ordinary polynomials and this is
    the usual division by degree.
    """
    a._check(b)
    if not b.coeffs:
        raise DivisionByZeroPoly("division by the zero polynomial")
    var = a.var
    if not a.coeffs:
        return LaurentPoly.zero(var), LaurentPoly.zero(var)
    if laurent:
        # divide a*y^-b.val by the ordinary part of b; pad so this agrees with
        # Q[y] division whenever both sides are ordinary and b(0) != 0
        rel = a.val - b.val
        k = min(0, rel)
        ad = (_ZERO,) * (rel - k) + a.coeffs
        q, r = _poly_divmod(ad, b.coeffs)
        return LaurentPoly._raw(var, k, q), LaurentPoly._raw(var, k + b.val, r)
    if a.val < 0 or b.val < 0:
        raise RingError("negative exponent in Q[y] division")
    # pad to ordinary dense polynomials from exponent 0
    ad = (_ZERO,) * a.val + a.coeffs
    bd = (_ZERO,) * b.val + b.coeffs
    q, r = _poly_divmod(ad, bd)
    return LaurentPoly._raw(var, 0, q), LaurentPoly._raw(var, 0, r)


def lp_canonical(p: LaurentPoly) -> LaurentPoly:
    """Monic associate with minimum exponent zero (Laurent units are c*y^k)."""
    if not p.coeffs:
        raise ZeroInput("canonical form of zero")
    lc = p.coeffs[-1]
    if p.val == 0 and lc == 1:
        return p
    return LaurentPoly._raw(p.var, 0, [c / lc for c in p.coeffs])


def _monic(p: LaurentPoly) -> LaurentPoly:
    if not p.coeffs:
        raise ZeroInput("canonical form of zero")
    lc = p.coeffs[-1]
    if lc == 1:
        return p
    return LaurentPoly._raw(p.var, p.val, [c / lc for c in p.coeffs])


def lp_gcd(a: LaurentPoly, b: LaurentPoly, laurent: bool = True) -> LaurentPoly:
    """Canonical gcd; Laurent-canonical by default, monic in Q[y] mode."""
    a._check(b)
    if not a.coeffs and not b.coeffs:
        raise BothZero("gcd(0, 0)")
    norm = lp_canonical if laurent else _monic
    if laurent:
        # units y^k drop out: work with the min-exponent-0 associates
        a = a.shift(-a.val) if a.coeffs else a
        b = b.shift(-b.val) if b.coeffs else b
    while b.coeffs:
        _, r = lp_divrem(a, b, laurent=False)
        a, b = b, r
    return norm(a)


def lp_eval(p: LaurentPoly, point: RationalLike) -> Fraction:
    x = to_rational(point)
    if not p.coeffs:
        return _ZERO
    if x == 0:
        if p.val < 0:
            raise EvalAtZeroWithNegativeExponent(str(p))
        return p.coeff(0)
    acc = _ZERO
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return acc * x**p.val


def lp_eval_even(p: LaurentPoly, tsq: RationalLike) -> Fraction:
    """Evaluate a polynomial in even powers of the variable by assigning its square."""
    t = p.terms
    if any(e % 2 for e in t):
        raise OddExponentPresent(str(p))
    return lp_eval(LaurentPoly({e // 2: c for e, c in t.items()}, p.var), tsq)


# -- Euclidean ring objects ------------------------------------------------------

class EuclideanRing:
    """Euclidean structure on LaurentPoly: either Q[y] or Q[y, y^-1]."""

    def __init__(self, tag: str, laurent: bool):
        self.tag = tag
        self.laurent = laurent

    def __repr__(self):
        return f"<EuclideanRing {self.tag}>"

    def measure(self, p: LaurentPoly) -> int:
        if self.laurent:
            return len(p.coeffs) - 1
        return p.degree

    def is_unit(self, p: LaurentPoly) -> bool:
        if not p.coeffs:
            return False
        if self.laurent:
            return len(p.coeffs) == 1
        return p.val == 0 and len(p.coeffs) == 1

    def check(self, p: LaurentPoly):
        if not self.laurent and p.coeffs and p.val < 0:
            raise RingError(f"{p} is not in Q[{p.var}]")

    def divrem(self, a: LaurentPoly, b: LaurentPoly):
        return lp_divrem(a, b, laurent=self.laurent)

    def gcd(self, a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
        return lp_gcd(a, b, laurent=self.laurent)

    def canonical(self, p: LaurentPoly) -> LaurentPoly:
        return lp_canonical(p) if self.laurent else _monic(p)

    def unit_inverse(self, u: LaurentPoly) -> LaurentPoly:
        if not self.is_unit(u):
            raise RingError(f"{u} is not a unit in {self.tag}")
        return LaurentPoly.monomial(1 / u.coeffs[0], -u.val, u.var)

    def divides(self, a: LaurentPoly, b: LaurentPoly) -> bool:
        """True iff a | b."""
        if not a.coeffs:
            return not b.coeffs
        return not self.divrem(b, a)[1].coeffs

    def exact_div(self, b: LaurentPoly, a: LaurentPoly) -> LaurentPoly:
        q, r = self.divrem(b, a)
        if r.coeffs:
            raise RingError(f"{a} does not divide {b}")
        return q

    def xgcd(self, a: LaurentPoly, b: LaurentPoly):
        """Return (g, s, t) with s*a + t*b = g, g a gcd (not normalized)."""
        var = a.var
        one, zero = LaurentPoly.one(var), LaurentPoly.zero(var)
        r0, r1 = a, b
        s0, s1 = one, zero
        t0, t1 = zero, one
        while r1.coeffs:
            q, r = self.divrem(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
            t0, t1 = t1, t0 - q * t1
        return r0, s0, t0


QY = EuclideanRing("Q[y]", laurent=False)
QLAURENT = EuclideanRing("Q[y,y^-1]", laurent=True)


def ring_from_tag(tag: str) -> EuclideanRing:
    key = tag.lower().replace(" ", "")
    if key in ("qy", "q[y]"):
        return QY
    if key in ("laurent", "q[y,y^-1]", "q[y,1/y]"):
        return QLAURENT
    raise ValueError(f"unknown ring tag {tag!r}")
