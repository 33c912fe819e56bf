"""Tau-function sequence, index distribution and the symmetric f/g variables.

At t = 0 every Hankel entry (xi + (-1)**(i+j)) Gamma((i+j+1)/2) is either
``u * q`` (i+j even) or ``v * r`` (i+j odd) with rational q, r, where

    u = sigma * (xi + 1),    v = xi - 1,    w = v / u.

Factoring ``u`` out of every entry gives tau_n = u**n T_n(w) with T_n a
rational polynomial, and every f_{j,n}, g_n is homogeneous of degree zero in
(u, v), i.e. an element of Q(w).  The heavy exact work therefore runs over Q
in the single variable w; the map back to ``XiFunction`` is exact and
injective, so identities verified in Q(w) hold in Q(sigma)(xi).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from math import comb, factorial

from .algebra import (
    SIGMA,
    LaurentSeries,
    PiScalar,
    Poly,
    RationalFunction,
    XiFunction,
    bareiss_det,
    expand_at_one,
    gamma_half,
)
from .report import Report

__all__ = [
    "TauSequence",
    "IndexDistribution",
    "SymmetricTriple",
    "FGSystem",
    "LaurentCoefficientTable",
    "build_tau",
    "tau_hankel_direct",
    "barnes_g",
    "tau_at_one_closed_form",
    "index_distribution",
    "build_fg",
    "verify_identities",
    "laurent_table",
    "verify_laurent",
    "xi_from_w",
    "expand_w_at_one",
]

_ZERO_W = RationalFunction(Poly())


# ---------------------------------------------------------------------------
# w <-> xi
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _binomial_basis(a: int, b: int) -> tuple[int, ...]:
    """Integer coefficients of (xi + 1)**a (xi - 1)**b."""
    return (Poly((1, 1)) ** a * Poly((-1, 1)) ** b).coeffs


def _homogenize(p: Poly, d: int) -> Poly:
    """sum_i p_i u**(d-i) v**i as a xi-polynomial with PiScalar coefficients."""
    by_xi: dict[int, dict[int, Fraction]] = {}
    for i, c in enumerate(p.coeffs):
        if not c:
            continue
        basis = _binomial_basis(d - i, i)
        for k, b in enumerate(basis):
            if b:
                slot = by_xi.setdefault(k, {})
                slot[d - i] = slot.get(d - i, Fraction(0)) + c * b
    out = []
    for k in range(d + 1):
        slot = by_xi.get(k, {})
        if slot:
            top = max(slot)
            out.append(PiScalar(Poly(slot.get(j, Fraction(0)) for j in range(top + 1))))
        else:
            out.append(PiScalar(0))
    return Poly(out)


def xi_from_w(f: RationalFunction, weight: int = 0) -> XiFunction:
    """Substitute w = (xi - 1)/(sigma (xi + 1)) into u**weight * f(w).

    Coprime P, Q in Q[w] stay coprime after homogenization, so no gcd is
    needed; only the denominator is made monic.
    """
    if not f:
        return XiFunction(Poly())
    dp, dq = f.num.degree, f.den.degree
    num = _homogenize(f.num, dp)
    den = _homogenize(f.den, dq)
    k = weight + dq - dp
    if k:
        u_k = _homogenize(Poly((Fraction(1),)), abs(k))
        if k > 0:
            num = num * u_k
        else:
            den = den * u_k
    return XiFunction(num, den, reduce=False)


class _SigmaLaurent(dict):
    """Finite sum of c * sigma**k (k may be negative) with rational c."""

    def __add__(self, other):
        out = _SigmaLaurent(self)
        for k, c in other.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return out

    def __neg__(self):
        return _SigmaLaurent({k: -c for k, c in self.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        out = _SigmaLaurent()
        for k1, c1 in self.items():
            for k2, c2 in other.items():
                k = k1 + k2
                v = out.get(k, 0) + c1 * c2
                if v:
                    out[k] = v
                else:
                    out.pop(k, None)
        return out

    def div_monomial(self, other):
        ((k0, c0),) = other.items()
        return _SigmaLaurent({k - k0: Fraction(c) / c0 for k, c in self.items()})

    def to_piscalar(self) -> PiScalar:
        if not self:
            return PiScalar(0)
        lo, hi = min(self), max(self)
        num = Poly(Fraction(self.get(lo + j, 0)) for j in range(hi - lo + 1))
        if lo >= 0:
            return PiScalar(Poly([Fraction(0)] * lo + list(num.coeffs)))
        return PiScalar(num, Poly.monomial(-lo, Fraction(1)), _canonical=True)


def _poly_w_series(p: Poly, start: int, count: int) -> list:
    """Coefficients of eps**j, j = start .. start+count-1, of p(w(eps)).

    w(eps) = eps / (sigma (2 + eps)), and [eps**k] (2 + eps)**(-i) is
    (-1)**k C(i+k-1, k) / 2**(i+k).
    """
    out = []
    for j in range(start, start + count):
        acc = _SigmaLaurent()
        for i in range(0, min(j, p.degree) + 1):
            c = p[i]
            if not c:
                continue
            k = j - i
            if i == 0:
                if k:
                    continue
                coef = Fraction(c)
            else:
                coef = Fraction(c) * (-1) ** k * comb(i + k - 1, k) / 2 ** (i + k)
            acc = acc + _SigmaLaurent({-i: coef})
        out.append(acc)
    return out


def expand_w_at_one(f: RationalFunction, order: int) -> LaurentSeries:
    """Laurent expansion about xi = 1 of a function given in the reduced variable.

    Same result as ``expand_at_one(xi_from_w(f), order)`` but every leading
    denominator is a monomial in sigma, so no polynomial gcds are needed.
    """
    if not f:
        return LaurentSeries(0, tuple(PiScalar(0) for _ in range(max(order + 1, 0))))
    vp, vq = f.num.valuation(), f.den.valuation()
    lo = vp - vq
    if lo < -1:
        raise ValueError(f"pole of order {-lo} at xi = 1")
    count = max(order - lo + 1, 0)
    ns = _poly_w_series(f.num, vp, count)
    ds = _poly_w_series(f.den, vq, count)
    d0 = ds[0]
    out: list = []
    for i in range(count):
        acc = ns[i]
        for l in range(1, i + 1):
            acc = acc - ds[l] * out[i - l]
        out.append(acc.div_monomial(d0))
    return LaurentSeries(lo, tuple(c.to_piscalar() for c in out))


# ---------------------------------------------------------------------------
# tau sequence
# ---------------------------------------------------------------------------


def barnes_g(n_plus_1: int) -> int:
    """Barnes G at a positive integer: G(n+1) = prod_{j<n} j!."""
    out = 1
    for j in range(n_plus_1 - 1):
        out *= factorial(j)
    return out


def tau_at_one_closed_form(n: int) -> PiScalar:
    """2**(n(n-1)/2) sigma**n G(n+1)."""
    return PiScalar(Fraction(2) ** (n * (n - 1) // 2) * barnes_g(n + 1)) * SIGMA ** n


def _reduced_hankel(n: int) -> list[list[Poly]]:
    """Hankel matrix divided by u and scaled by 2**(n-1) to integer entries."""
    scale = 2 ** (n - 1)
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            s = i + j
            k = s // 2
            if s % 2 == 0:
                # Gamma(k + 1/2)/sigma = (2k-1)!!/2**k
                val = factorial(2 * k) // (factorial(k) * 2 ** k) * scale // 2 ** k
                row.append(Poly((val,)))
            else:
                row.append(Poly((0, factorial(k) * scale)))
        rows.append(row)
    return rows


def _tau_reduced(n: int) -> Poly:
    if n == 0:
        return Poly((Fraction(1),))
    det = bareiss_det(_reduced_hankel(n))
    # undo the 2**(n-1) row scaling and apply the 2**(n(n-2)) prefactor
    return Poly(Fraction(c, 2 ** n) for c in det.coeffs)


@dataclass(frozen=True)
class TauSequence:
    """tau_0 .. tau_{n_max} at t = 0, alpha_1 = 0.

    ``reduced[n]`` is T_n(w) with tau_n = (sigma (xi+1))**n T_n(w).
    """

    n_max: int
    reduced: tuple

    def T(self, n: int) -> Poly:
        if n < 0:
            return Poly()
        return self.reduced[n]

    @cached_property
    def entries(self) -> tuple:
        return tuple(xi_from_w(RationalFunction(t), weight=n) for n, t in enumerate(self.reduced))

    def __getitem__(self, n: int) -> XiFunction:
        if n < 0:
            return XiFunction(Poly())
        return self.entries[n]

    def polynomial(self, n: int) -> Poly:
        """tau_n as a xi-polynomial with PiScalar coefficients."""
        return self[n].num

    def at_one(self, n: int) -> PiScalar:
        # v = 0 at xi = 1, leaving T_n(0) (2 sigma)**n
        return PiScalar(self.T(n)[0] * 2 ** n) * SIGMA ** n


def build_tau(n_max: int) -> TauSequence:
    """Exact tau_n(xi) for n = 0 .. n_max from fraction-free Hankel determinants."""
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    return TauSequence(n_max, tuple(_tau_reduced(n) for n in range(n_max + 1)))


def tau_hankel_direct(n: int) -> XiFunction:
    """tau_n straight from 2**(n(n-2)) det[(xi + (-1)**(i+j)) Gamma((i+j+1)/2)].

    Bareiss over Q(sigma)[xi] without the u-factorization; slow, meant as an
    independent cross-check for small n.
    """
    if n == 0:
        return XiFunction(Poly((PiScalar(1),)))
    rows = []
    for i in range(n):
        rows.append(
            [
                Poly((PiScalar((-1) ** (i + j)), PiScalar(1))) * gamma_half(Fraction(i + j + 1, 2))
                for j in range(n)
            ]
        )
    det = bareiss_det(rows)
    return XiFunction(det * PiScalar(Fraction(2) ** (n * (n - 2))))


# ---------------------------------------------------------------------------
# index distribution
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IndexDistribution:
    """Exact p(0, n) .. p(n, n)."""

    n: int
    probs: tuple

    def __getitem__(self, k: int) -> PiScalar:
        return self.probs[k]

    def total(self) -> PiScalar:
        return sum(self.probs, PiScalar(0))

    def mean(self) -> PiScalar:
        return sum((p * k for k, p in enumerate(self.probs)), PiScalar(0))

    def variance(self) -> PiScalar:
        mu = self.mean()
        second = sum((p * (k * k) for k, p in enumerate(self.probs)), PiScalar(0))
        return second - mu * mu

    def numeric(self, digits: int = 64) -> list:
        return [p.evaluate(digits) for p in self.probs]


def index_distribution(n: int, tau: TauSequence | None = None) -> IndexDistribution:
    """p(k, n) = [xi**k] tau_n(xi) / tau_n(1)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if tau is None or tau.n_max < n:
        tau = build_tau(n)
    poly = tau.polynomial(n)
    norm = tau.at_one(n)
    return IndexDistribution(n, tuple(PiScalar.coerce(poly[k]) / norm for k in range(n + 1)))


# ---------------------------------------------------------------------------
# symmetric variables f_{0,n}, f_{1,n}, f_{2,n} and g_n
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SymmetricTriple:
    n: int
    f0: XiFunction
    f1: XiFunction
    f2: XiFunction


@dataclass(frozen=True)
class FGSystem:
    """f-triples and g_n in the reduced variable w, up to ``n_max``."""

    n_max: int
    f_w: tuple  # ((f0, f1, f2), ...)
    g_w: tuple

    def f(self, j: int, n: int) -> RationalFunction:
        return self.f_w[n][j]

    def triple(self, n: int) -> SymmetricTriple:
        return SymmetricTriple(n, *(xi_from_w(f) for f in self.f_w[n]))

    def g(self, n: int) -> XiFunction:
        return xi_from_w(self.g_w[n])

    @property
    def triples(self) -> list[SymmetricTriple]:
        return [self.triple(n) for n in range(self.n_max + 1)]


def _w() -> RationalFunction:
    return RationalFunction(Poly((Fraction(0), Fraction(1))))


def build_fg(n_max: int) -> FGSystem:
    """Run the coupled first-order recurrences at t = 0, alpha_0 = 1.

    Seeds: f_{1,0} = 2(xi-1)/(sqrt(pi)(xi+1)) = 2w, f_{0,0} = -2w, f_{2,0} = 0.
    Each step advances f_2 first, then f_0; f_1 closes the triple.
    """
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    w = _w()
    f0, f2 = -2 * w, _ZERO_W
    triples = [(f0, -f0 - f2, f2)]
    for n in range(n_max):
        if not f0:
            raise ZeroDivisionError(f"f_0 vanishes identically at n={n}")
        f2 = -f2 - f0 + Fraction(2 * (n + 1)) / f0
        if not f2:
            raise ZeroDivisionError(f"f_2 vanishes identically at n={n + 1}")
        f0 = -f0 - f2 + Fraction(2 * (n + 1)) / f2
        triples.append((f0, -f0 - f2, f2))
    g = tuple(f1 * f2 for _, f1, f2 in triples)
    return FGSystem(n_max, tuple(triples), g)


def _g_from_tau(tau: TauSequence, n: int) -> RationalFunction:
    """-2n + tau_{n+1} tau_{n-1} / tau_n**2 in the reduced variable."""
    tn = tau.T(n)
    return RationalFunction(tau.T(n + 1) * tau.T(n - 1), tn * tn) - 2 * n


def _tau_r_residual(T, n: int) -> Poly:
    a, b, c, d, e = T(n - 2), T(n - 1), T(n), T(n + 1), T(n + 2)
    c2 = c * c
    return (
        e * c2 * c * a
        + e * b * b * (d * b - (4 * n - 2) * c2)
        + a * d * d * (d * b - (4 * n + 2) * c2)
        - 4 * (2 * n * n + 1) * d * d * c * b * b
        + 32 * n ** 3 * d * c2 * c * b
        - 16 * n ** 4 * c2 * c2 * c
    )


def verify_identities(
    n_max: int, tau: TauSequence | None = None, fg: FGSystem | None = None
) -> Report:
    """Check every exact recurrence identity of the tau/f/g system up to n_max."""
    if tau is None or tau.n_max < n_max + 2:
        tau = build_tau(n_max + 2)
    if fg is None or fg.n_max < n_max + 1:
        fg = build_fg(n_max + 1)
    rep = Report()

    for n in range(0, n_max + 1):
        rep.add("tau_degree", n, tau.polynomial(n).degree == n)
        rep.add("tau_at_one_barnes_g", n, tau.at_one(n) == tau_at_one_closed_form(n))

    for n in range(2, n_max + 1):
        r = _tau_r_residual(tau.T, n)
        rep.add("tau_recurrence", n, not r, "" if not r else f"residual degree {r.degree}")

    for n in range(0, n_max + 1):
        f0, f1, f2 = fg.f_w[n]
        rep.add("f_sum_zero", n, not (f0 + f1 + f2))
        if n >= 1:
            rep.add("g_product_equals_tau_ratio", n, fg.g_w[n] == _g_from_tau(tau, n))
        else:
            rep.add("g_product_equals_tau_ratio", n, not fg.g_w[0])

    for n in range(1, n_max + 1):
        g, gm, gp = fg.g_w[n], fg.g_w[n - 1], fg.g_w[n + 1]
        lhs = g ** 4
        rhs = (g + 2 * n) ** 2 * (g + gm) * (g + gp)
        rep.add("g_recurrence", n, lhs == rhs)

        s = g + 2 * n
        up = s * gp + 2 * n * g
        down = s * gm + 2 * n * g
        f0, f1, f2 = fg.f_w[n]
        rep.add("f1_squared_recovery", n, f1 * f1 == g * g / s * up / down)
        rep.add("f2_squared_recovery", n, f2 * f2 == s * down / up)

    for n in range(0, n_max + 1):
        poly = tau.polynomial(n)
        x = PiScalar.coerce(poly.deriv()(1)) / tau.at_one(n)
        rep.add("mean_X_n", n, x == Fraction(n, 2), str(x))

    g2 = {}
    for n in range(0, n_max + 1):
        ser = expand_w_at_one(fg.g_w[n], 2)
        rep.add("g_at_one_zero", n, not ser[0])
        rep.add("g_prime_at_one_zero", n, not ser[1])
        g2[n] = 2 * ser[2]
    for m in range(0, (n_max - 2) // 2 + 1):
        if 2 * m + 2 <= n_max:
            rep.add("g2_odd_even_cancel", 2 * m + 1, not (g2[2 * m + 1] + g2[2 * m + 2]))
    return rep


def g_second_derivative_at_one(fg: FGSystem, n: int) -> PiScalar:
    return 2 * expand_w_at_one(fg.g_w[n], 2)[2]


# ---------------------------------------------------------------------------
# Laurent coefficients about xi = 1
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LaurentCoefficientTable:
    m: int
    A1: PiScalar
    A2: PiScalar
    Bm1: PiScalar
    B0: PiScalar
    C1: PiScalar
    C2: PiScalar
    Dm1: PiScalar
    D0: PiScalar
    E1: PiScalar
    F3: PiScalar


def _central(m: int) -> Fraction:
    """C(2m, m)/4**m = Gamma(m+1/2)/(sqrt(pi) m!)."""
    return Fraction(comb(2 * m, m), 4 ** m)


def _structured(ser: LaurentSeries, lowest: int, name: str, m: int) -> None:
    for j in range(ser.min_order, lowest):
        if ser[j]:
            raise ValueError(f"{name} at m={m} has a nonzero (xi-1)^{j} term")


def laurent_table(m_max: int, fg: FGSystem | None = None) -> list[LaurentCoefficientTable]:
    """Leading Laurent coefficients of f_{j,2m}, f_{j,2m+1} for m = 0 .. m_max."""
    need = 2 * m_max + 2
    if fg is None or fg.n_max < need:
        fg = build_fg(need)
    out = []
    for m in range(m_max + 1):
        a = expand_w_at_one(fg.f(2, 2 * m), 2)
        b = expand_w_at_one(fg.f(2, 2 * m + 1), 0)
        c = expand_w_at_one(fg.f(0, 2 * m), 2)
        d = expand_w_at_one(fg.f(0, 2 * m + 1), 0)
        e = expand_w_at_one(fg.f(1, 2 * m), 1)
        f = expand_w_at_one(fg.f(1, 2 * m + 1), 3)
        _structured(a, 1, "f_{2,2m}", m)
        _structured(c, 1, "f_{0,2m}", m)
        _structured(e, 1, "f_{1,2m}", m)
        _structured(f, 3, "f_{1,2m+1}", m)
        out.append(
            LaurentCoefficientTable(
                m=m, A1=a[1], A2=a[2], Bm1=b[-1], B0=b[0], C1=c[1], C2=c[2],
                Dm1=d[-1], D0=d[0], E1=e[1], F3=f[3],
            )
        )
    return out


def a1_closed_form(m: int) -> PiScalar:
    """Gamma(m+1)/(pi Gamma(m+1/2)) sum_{r<m} Gamma(r+1/2)**2/Gamma(r+1)**2."""
    s = sum((_central(r) ** 2 for r in range(m)), Fraction(0))
    return PiScalar(s / _central(m)) / SIGMA


def e1_closed_form(m: int) -> PiScalar:
    return PiScalar(_central(m)) / SIGMA


def verify_laurent(m_max: int, fg: FGSystem | None = None) -> Report:
    """Compare extracted Laurent coefficients with their closed forms."""
    need = 2 * m_max + 4
    if fg is None or fg.n_max < need:
        fg = build_fg(need)
    tables = laurent_table(m_max + 1, fg)
    rep = Report()
    for m in range(m_max + 1):
        t, nxt = tables[m], tables[m + 1]
        a1_next = nxt.A1
        rep.add("A1_closed_form", m, t.A1 == a1_closed_form(m), str(t.A1), label="m")
        rep.add("E1_closed_form", m, t.E1 == e1_closed_form(m), str(t.E1), label="m")
        rep.add("Bm1_closed_form", m, t.Bm1 == -4 * (m + 1) / a1_next, str(t.Bm1), label="m")
        rep.add("Dm1_closed_form", m, t.Dm1 == 4 * (m + 1) / a1_next, label="m")
        rep.add("B_equals_minus_D", m, t.Bm1 == -t.Dm1, label="m")
        rep.add("C1_closed_form", m, t.C1 == -Fraction(2 * m + 1, 2 * m + 2) * a1_next, label="m")
        rep.add("A1_plus_C1", m, t.A1 + t.C1 == -e1_closed_form(m), label="m")
        f3 = PiScalar(_central(m + 1) / (4 * (m + 1))) / SIGMA * a1_next * a1_next
        rep.add("F3_closed_form", m, t.F3 == f3, str(t.F3), label="m")
        rep.add("D0_from_A2", m, t.D0 == -4 * (m + 1) * nxt.A2 / (a1_next * a1_next), label="m")
        rep.add("C2_from_B0", m, t.C2 == -t.B0 * t.C1 * t.C1 / (4 * m + 2), label="m")
        g2_even = 2 * t.E1 * t.A1
        g2_odd = 2 * t.F3 * t.Bm1
        g2e = g_second_derivative_at_one(fg, 2 * m)
        g2o = g_second_derivative_at_one(fg, 2 * m + 1)
        rep.add("g2_even_from_coefficients", 2 * m, g2e == g2_even)
        rep.add("g2_odd_from_coefficients", 2 * m + 1, g2o == g2_odd)
        e = (g2e + g2o) / 2
        rep.add("e_term_from_g2", m, e == PiScalar(-_central(m) ** 2) / SIGMA ** 2, str(e), label="m")
    return rep
