"""Exact arithmetic over Q(sigma), sigma standing for sqrt(pi).

Because pi is transcendental, Q(sqrt(pi)) is isomorphic to the rational
function field Q(sigma) in one indeterminate, so equality of two values is a
polynomial identity and never needs floating point.

Layers:

* ``Poly``            dense univariate polynomial over any field-like coefficients
* ``PiScalar``        normalized ratio of polynomials in sigma with rational coefficients
* ``RationalFunction`` normalized ratio of polynomials over a coefficient field
* ``XiFunction``      rational function in xi with ``PiScalar`` coefficients
* ``LaurentSeries``   truncated expansion about xi = 1
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterable, Sequence

import mpmath

__all__ = [
    "BigRational",
    "Poly",
    "PiScalar",
    "RationalFunction",
    "XiFunction",
    "LaurentSeries",
    "SIGMA",
    "gamma_half",
    "expand_at_one",
    "eval_numeric",
    "bareiss_det",
]

BigRational = Fraction

SIGMA_SYMBOL = "σ"


def _div(a, b):
    """Field division that keeps integer results integral."""
    if isinstance(a, int) and isinstance(b, int):
        q, r = divmod(a, b)
        return q if r == 0 else Fraction(a, b)
    return a / b


class Poly:
    """Dense polynomial, coefficients stored lowest degree first.

    Coefficients may be ``int``, ``Fraction`` or ``PiScalar``; anything that
    supports field arithmetic and a falsy zero works.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        c = list(coeffs)
        while c and not c[-1]:
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def monomial(cls, k: int, c=1) -> "Poly":
        return cls([0] * k + [c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self):
        return self.coeffs[-1] if self.coeffs else 0

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, i: int):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __iter__(self):
        return iter(self.coeffs)

    def valuation(self) -> int:
        """Index of the lowest nonzero coefficient (0 for the zero polynomial)."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return 0

    def is_monomial(self) -> bool:
        return bool(self.coeffs) and not any(self.coeffs[:-1])

    @staticmethod
    def _lift(other) -> "Poly":
        return other if isinstance(other, Poly) else Poly((other,))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            try:
                other = Poly((other,))
            except TypeError:
                return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __neg__(self) -> "Poly":
        return Poly(-c for c in self.coeffs)

    def __add__(self, other) -> "Poly":
        other = self._lift(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Poly(out)

    __radd__ = __add__

    def __sub__(self, other) -> "Poly":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "Poly":
        return self._lift(other) - self

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            if not other:
                return Poly()
            return Poly(c * other for c in self.coeffs)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly()
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                if y:
                    out[i + j] = out[i + j] + x * y
        return Poly(out)

    def __rmul__(self, other) -> "Poly":
        return self * other

    def __pow__(self, k: int) -> "Poly":
        result = Poly((1,))
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c) -> "Poly":
        return Poly(_div(x, c) for x in self.coeffs)

    def __divmod__(self, other) -> tuple["Poly", "Poly"]:
        other = self._lift(other)
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        db = other.degree
        if len(r) - 1 < db:
            return Poly(), Poly(r)
        lc = other.lead
        b = other.coeffs
        q = [0] * (len(r) - db)
        for i in range(len(r) - 1 - db, -1, -1):
            c = r[i + db]
            if not c:
                continue
            c = _div(c, lc)
            q[i] = c
            for j in range(db):
                if b[j]:
                    r[i + j] = r[i + j] - c * b[j]
            r[i + db] = 0
        return Poly(q), Poly(r)

    def __floordiv__(self, other) -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other) -> "Poly":
        return divmod(self, other)[1]

    def exquo(self, other) -> "Poly":
        """Exact division; raises ``ArithmeticError`` on a nonzero remainder."""
        if not isinstance(other, Poly):
            return self.scale(other)
        q, r = divmod(self, other)
        if r:
            raise ArithmeticError("inexact polynomial division")
        return q

    def monic(self) -> "Poly":
        if not self.coeffs:
            return self
        lc = self.lead
        if lc == 1:
            return self
        return self.scale(lc)

    @staticmethod
    def gcd(a: "Poly", b: "Poly") -> "Poly":
        """Monic greatest common divisor (Euclid)."""
        while b:
            a, b = b, a % b
        return a.monic() if a else Poly((1,))

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def deriv(self) -> "Poly":
        return Poly(i * c for i, c in enumerate(self.coeffs) if i)

    def shift(self, a) -> "Poly":
        """Coefficients of p(x + a)."""
        c = list(self.coeffs)
        n = len(c)
        for i in range(n - 1):
            for j in range(n - 2, i - 1, -1):
                c[j] = c[j] + a * c[j + 1]
        return Poly(c)

    def to_str(self, var: str = "x") -> str:
        if not self.coeffs:
            return "0"
        parts: list[tuple[str, str]] = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            c = Fraction(c)
            sign = "-" if c < 0 else "+"
            c = abs(c)
            if c.denominator == 1:
                cs = str(c.numerator)
            else:
                cs = f"({c.numerator}/{c.denominator})"
            mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
            if not mono:
                body = cs
            elif c == 1:
                body = mono
            else:
                body = f"{cs}*{mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self) -> str:
        return f"Poly({list(self.coeffs)!r})"


def bareiss_det(matrix: Sequence[Sequence]):
    """Fraction-free determinant over an integral domain.

    Entries must support ``+ - *`` and exact division by a previous pivot,
    either through ``exquo`` (``Poly``) or ``/`` (field elements).
    """
    a = [list(row) for row in matrix]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if not a[k][k]:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0 * a[0][0]
        pivot = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                val = row_i[j] * pivot - aik * row_k[j]
                row_i[j] = val.exquo(prev) if hasattr(val, "exquo") else _div(val, prev)
            row_i[k] = 0
        prev = pivot
    det = a[n - 1][n - 1]
    return -det if sign < 0 else det


# ---------------------------------------------------------------------------
# Q(sigma)
# ---------------------------------------------------------------------------

_ONE = Poly((1,))


def _as_fraction_poly(p: Poly) -> Poly:
    return Poly(Fraction(c) for c in p.coeffs)


class PiScalar:
    """Exact element of Q(sqrt(pi)) as num(sigma)/den(sigma).

    Canonical form: coprime numerator and denominator, monic denominator,
    rational coefficients.  ``str`` gives the serialized form used in JSON.
    """

    __slots__ = ("num", "den")

    def __init__(self, num=0, den=None, *, _canonical: bool = False):
        if not isinstance(num, Poly):
            num = Poly(num) if isinstance(num, (list, tuple)) else Poly((Fraction(num),))
        if den is None:
            den = _ONE
        elif not isinstance(den, Poly):
            den = Poly(den) if isinstance(den, (list, tuple)) else Poly((Fraction(den),))
        if _canonical:
            self.num, self.den = num, den
            return
        if not den:
            raise ZeroDivisionError("PiScalar with zero denominator")
        if not num:
            self.num, self.den = Poly(), _ONE
            return
        if den.degree > 0:
            if den.is_monomial():
                k = min(den.degree, num.valuation())
                if k:
                    num = Poly(num.coeffs[k:])
                    den = Poly(den.coeffs[k:])
            else:
                g = Poly.gcd(num, den)
                if g.degree > 0:
                    num, den = num.exquo(g), den.exquo(g)
        lc = den.lead
        if lc != 1:
            num, den = num.scale(lc), den.scale(lc)
        self.num, self.den = _as_fraction_poly(num), _as_fraction_poly(den)

    # construction -----------------------------------------------------
    @classmethod
    def coerce(cls, x) -> "PiScalar":
        if isinstance(x, PiScalar):
            return x
        if isinstance(x, (int, Fraction)):
            return cls(Poly((Fraction(x),)), _ONE, _canonical=True) if x else cls()
        if isinstance(x, str):
            return cls.parse(x)
        raise TypeError(f"cannot convert {type(x).__name__} to PiScalar")

    @classmethod
    def sigma(cls, k: int = 1) -> "PiScalar":
        """sigma**k for any integer k."""
        if k >= 0:
            return cls(Poly.monomial(k, Fraction(1)), _ONE, _canonical=True)
        return cls(Poly((Fraction(1),)), Poly.monomial(-k, Fraction(1)), _canonical=True)

    @classmethod
    def pi(cls) -> "PiScalar":
        return cls.sigma(2)

    # predicates -------------------------------------------------------
    def __bool__(self) -> bool:
        return bool(self.num)

    @property
    def is_rational(self) -> bool:
        return self.num.degree <= 0 and self.den.degree == 0

    def to_fraction(self) -> Fraction:
        if not self.is_rational:
            raise ValueError(f"{self} is not rational")
        return Fraction(self.num[0])

    # arithmetic -------------------------------------------------------
    def __neg__(self) -> "PiScalar":
        return PiScalar(-self.num, self.den, _canonical=True)

    def __add__(self, other) -> "PiScalar":
        try:
            other = PiScalar.coerce(other)
        except TypeError:
            return NotImplemented
        if not other:
            return self
        if not self:
            return other
        if self.den == other.den:
            return PiScalar(self.num + other.num, self.den)
        return PiScalar(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other) -> "PiScalar":
        try:
            other = PiScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "PiScalar":
        return PiScalar.coerce(other) - self

    def __mul__(self, other) -> "PiScalar":
        if isinstance(other, (int, Fraction)):
            if not other:
                return PiScalar()
            return PiScalar(self.num * Fraction(other), self.den, _canonical=True)
        try:
            other = PiScalar.coerce(other)
        except TypeError:
            return NotImplemented
        if not self or not other:
            return PiScalar()
        return PiScalar(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "PiScalar":
        try:
            other = PiScalar.coerce(other)
        except TypeError:
            return NotImplemented
        if not other:
            raise ZeroDivisionError("division of PiScalar by zero")
        return PiScalar(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other) -> "PiScalar":
        return PiScalar.coerce(other) / self

    def __pow__(self, k: int) -> "PiScalar":
        if k < 0:
            return PiScalar(1) / (self ** (-k))
        return PiScalar(self.num ** k, self.den ** k, _canonical=True)

    def __eq__(self, other) -> bool:
        try:
            other = PiScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        if self.is_rational:
            return hash(self.to_fraction())
        return hash((self.num, self.den))

    # serialization ----------------------------------------------------
    def __str__(self) -> str:
        n = self.num.to_str(SIGMA_SYMBOL)
        if self.den == _ONE:
            return n
        return f"({n})/({self.den.to_str(SIGMA_SYMBOL)})"

    def __repr__(self) -> str:
        return f"PiScalar({str(self)!r})"

    @classmethod
    def parse(cls, text: str) -> "PiScalar":
        """Inverse of ``str``: accepts ``"P"`` or ``"(P)/(Q)"``."""
        s = text.strip()
        m = re.fullmatch(r"\((.*)\)\s*/\s*\((.*)\)", s)
        if m and _balanced(m.group(1)) and _balanced(m.group(2)):
            return cls(_parse_poly(m.group(1)), _parse_poly(m.group(2)))
        return cls(_parse_poly(s))

    def evaluate(self, digits: int = 64):
        return eval_numeric(self, digits)


def _balanced(s: str) -> bool:
    depth = 0
    for ch in s:
        depth += ch == "("
        depth -= ch == ")"
        if depth < 0:
            return False
    return depth == 0


_TERM = re.compile(
    r"^(?:(?P<c>\d+|\(\d+/\d+\))(?:\*)?)?(?P<v>σ(?:\^(?P<k>\d+))?)?$"
)


def _parse_poly(s: str) -> Poly:
    s = s.replace(" ", "")
    if s in ("", "0"):
        return Poly()
    terms: list[tuple[int, str]] = []
    sign, start, depth = 1, 0, 0
    if s[0] in "+-":
        sign = -1 if s[0] == "-" else 1
        start = 1
    for i in range(start, len(s)):
        ch = s[i]
        depth += ch == "("
        depth -= ch == ")"
        if depth == 0 and ch in "+-":
            terms.append((sign, s[start:i]))
            sign = -1 if ch == "-" else 1
            start = i + 1
    terms.append((sign, s[start:]))
    coeffs: dict[int, Fraction] = {}
    for sgn, body in terms:
        m = _TERM.match(body)
        if not m or not body:
            raise ValueError(f"cannot parse term {body!r}")
        c = m.group("c")
        coef = Fraction(c.strip("()")) if c else Fraction(1)
        k = 0
        if m.group("v"):
            k = int(m.group("k") or 1)
        coeffs[k] = coeffs.get(k, Fraction(0)) + sgn * coef
    deg = max(coeffs)
    return Poly(coeffs.get(i, Fraction(0)) for i in range(deg + 1))


SIGMA = PiScalar.sigma(1)


def gamma_half(k) -> PiScalar:
    """Exact Gamma(k) for positive integer or half-integer ``k``."""
    k = Fraction(k)
    two_k = 2 * k
    if k <= 0 or two_k.denominator != 1:
        raise ValueError(f"gamma_half needs a positive half-integer, got {k}")
    if k.denominator == 1:
        return PiScalar(factorial(int(k) - 1))
    j = int(k - Fraction(1, 2))
    return PiScalar(Fraction(factorial(2 * j), 4 ** j * factorial(j))) * SIGMA


# ---------------------------------------------------------------------------
# rational functions
# ---------------------------------------------------------------------------


class RationalFunction:
    """num/den over a coefficient field, coprime with monic denominator."""

    __slots__ = ("num", "den")

    @staticmethod
    def _coef(c):
        return Fraction(c) if isinstance(c, int) else c

    def __init__(self, num, den=None, *, reduce: bool = True):
        if not isinstance(num, Poly):
            num = Poly(map(self._coef, num)) if isinstance(num, (list, tuple)) else Poly((self._coef(num),))
        if den is None:
            den = Poly((self._coef(1),))
        elif not isinstance(den, Poly):
            den = Poly(map(self._coef, den)) if isinstance(den, (list, tuple)) else Poly((self._coef(den),))
        if not den:
            raise ZeroDivisionError(f"{type(self).__name__} with zero denominator")
        if not num:
            self.num, self.den = Poly(), Poly((self._coef(1),))
            return
        if reduce and den.degree > 0:
            g = Poly.gcd(num, den)
            if g.degree > 0:
                num, den = num.exquo(g), den.exquo(g)
        lc = den.lead
        if lc != 1:
            num, den = num.scale(lc), den.scale(lc)
        self.num, self.den = num, den

    @classmethod
    def _make(cls, num: Poly, den: Poly, reduce: bool = True):
        return cls(num, den, reduce=reduce)

    def _lift(self, other):
        if isinstance(other, type(self)):
            return other
        if isinstance(other, RationalFunction):
            return type(self)(other.num, other.den, reduce=False)
        if isinstance(other, Poly):
            return type(self)(other)
        return type(self)(Poly((self._coef(other),)))

    def __bool__(self) -> bool:
        return bool(self.num)

    @property
    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def __neg__(self):
        return self._make(-self.num, self.den, reduce=False)

    def __add__(self, other):
        other = self._lift(other)
        if not other:
            return self
        if not self:
            return other
        if self.den == other.den:
            return self._make(self.num + other.num, self.den)
        return self._make(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        if not self or not other:
            return self._make(Poly(), Poly((self._coef(1),)))
        # cross-cancel keeps intermediate degrees low
        g1 = Poly.gcd(self.num, other.den) if other.den.degree > 0 else _ONE
        g2 = Poly.gcd(other.num, self.den) if self.den.degree > 0 else _ONE
        n1 = self.num.exquo(g1) if g1.degree > 0 else self.num
        d2 = other.den.exquo(g1) if g1.degree > 0 else other.den
        n2 = other.num.exquo(g2) if g2.degree > 0 else other.num
        d1 = self.den.exquo(g2) if g2.degree > 0 else self.den
        return self._make(n1 * n2, d1 * d2, reduce=False)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._lift(other)
        if not other:
            raise ZeroDivisionError(f"division of {type(self).__name__} by zero")
        return self * self._make(other.den, other.num, reduce=False)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return self._make(self.den ** (-k), self.num ** (-k), reduce=False)
        return self._make(self.num ** k, self.den ** k, reduce=False)

    def __eq__(self, other) -> bool:
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __call__(self, x):
        d = self.den(x)
        if not d:
            raise ZeroDivisionError("pole at evaluation point")
        return self.num(x) / d

    def to_str(self, var: str = "x") -> str:
        n = self.num.to_str(var) if not self.num or isinstance(self.num.lead, (int, Fraction)) else _poly_str(self.num, var)
        if self.is_polynomial:
            return n
        d = self.den.to_str(var) if isinstance(self.den.lead, (int, Fraction)) else _poly_str(self.den, var)
        return f"({n})/({d})"

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.to_str()!r})"


def _poly_str(p: Poly, var: str) -> str:
    parts = []
    for k in range(len(p) - 1, -1, -1):
        c = p[k]
        if not c:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        cs = str(c)
        if not (isinstance(c, PiScalar) and c.is_rational and c.to_fraction().denominator == 1):
            cs = f"({cs})"
        parts.append(f"{cs}*{mono}" if mono else cs)
    return " + ".join(parts) or "0"


class XiFunction(RationalFunction):
    """Rational function in xi with ``PiScalar`` coefficients."""

    __slots__ = ()

    @staticmethod
    def _coef(c):
        return PiScalar.coerce(c)

    @classmethod
    def xi(cls) -> "XiFunction":
        return cls(Poly((PiScalar(0), PiScalar(1))))

    def __str__(self) -> str:
        return self.to_str("ξ")


# ---------------------------------------------------------------------------
# Laurent series about xi = 1
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LaurentSeries:
    """Coefficients of (xi - 1)**j for j = min_order .. order."""

    min_order: int
    coeffs: tuple

    @property
    def order(self) -> int:
        return self.min_order + len(self.coeffs) - 1

    def __getitem__(self, j: int):
        if j < self.min_order:
            return PiScalar(0)
        if j > self.order:
            raise IndexError(f"series truncated at order {self.order}, asked for {j}")
        return self.coeffs[j - self.min_order]

    def __mul__(self, other: "LaurentSeries") -> "LaurentSeries":
        lo = self.min_order + other.min_order
        hi = min(self.order + other.min_order, other.order + self.min_order)
        out = []
        for j in range(lo, hi + 1):
            acc = PiScalar(0)
            for i in range(self.min_order, j - other.min_order + 1):
                if i > self.order:
                    break
                acc = acc + self[i] * other[j - i]
            out.append(acc)
        return LaurentSeries(lo, tuple(out))

    def truncate(self, order: int) -> "LaurentSeries":
        return LaurentSeries(self.min_order, self.coeffs[: max(0, order - self.min_order + 1)])


def expand_at_one(f, order: int) -> LaurentSeries:
    """Laurent expansion of ``f`` about xi = 1 through (xi-1)**order.

    ``f`` may have at most a simple pole at xi = 1; anything worse signals an
    upstream error and raises ``ValueError``.
    """
    if not isinstance(f, RationalFunction):
        f = XiFunction(Poly((PiScalar.coerce(f),)))
    if not f:
        return LaurentSeries(0, tuple(PiScalar(0) for _ in range(max(order + 1, 0))))
    num = f.num.shift(1)
    den = f.den.shift(1)
    vn, vd = num.valuation(), den.valuation()
    if vd - vn > 1:
        raise ValueError(f"pole of order {vd - vn} at xi = 1")
    n1 = num.coeffs[vn:]
    d1 = den.coeffs[vd:]
    lo = vn - vd
    count = order - lo + 1
    out: list = []
    d0 = d1[0]
    for i in range(max(count, 0)):
        acc = n1[i] if i < len(n1) else 0
        for l in range(1, min(i, len(d1) - 1) + 1):
            acc = acc - d1[l] * out[i - l]
        out.append(PiScalar.coerce(acc / d0 if not isinstance(acc, int) else Fraction(acc) / d0))
    return LaurentSeries(lo, tuple(out))


# ---------------------------------------------------------------------------
# numerics
# ---------------------------------------------------------------------------


def eval_numeric(x, digits: int = 64):
    """Evaluate a ``PiScalar`` (or rational) at sigma = sqrt(pi) to ``digits``."""
    if digits < 16:
        raise ValueError("digits must be at least 16")
    x = PiScalar.coerce(x)
    if not x:
        return mpmath.mpf(0)
    with mpmath.workdps(digits + 10):
        s = mpmath.sqrt(mpmath.pi)
        num = _eval_poly(x.num, s)
        den = _eval_poly(x.den, s)
        val = num / den
    with mpmath.workdps(digits):
        return +val


def _eval_poly(p: Poly, s):
    acc = mpmath.mpf(0)
    for c in reversed(p.coeffs):
        c = Fraction(c)
        acc = acc * s + mpmath.mpf(c.numerator) / c.denominator
    return acc
