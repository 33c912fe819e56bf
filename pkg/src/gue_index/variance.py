"""Variance of the GUE index by several independent routes.

Every exact route returns a :class:`VarianceValue` ``a + b/pi`` with
rational a, b.  The closed-form, asymptotic and integral routes are
numeric and return mpmath reals.

Shorthand used throughout: c_l = (C(2l, l)/4**l)**2, so that
Gamma(l+1/2)**2 / Gamma(l+1)**2 = pi * c_l.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from mpmath import mp, mpf

from .algebra import SIGMA, PiScalar, Poly
from .report import Report
from .special import (
    DEFAULT_CONTEXT,
    PrecisionContext,
    digamma,
    elliptic_k_complement,
    hyp2f1_half,
    hyp4f3_unit,
    hyp4f3_unit_dm,
    integrate,
    rounded,
    sum_positive_series,
    trigamma,
)
from .tau import TauSequence, build_tau, index_distribution

__all__ = [
    "VarianceValue",
    "ETerm",
    "e_term",
    "central_square",
    "delta_sum",
    "delta_sum_table",
    "delta_voisum",
    "delta_from_distribution",
    "delta_recurrence_table",
    "j_m_closed",
    "j_m_closed_dm",
    "delta_closed_form",
    "delta_asymptotic",
    "j_m_quadrature",
    "log_kernel_integral",
    "delta_beta_integral",
    "gamma_ratio_series",
    "homogeneous_check",
    "even_odd_holds",
    "auxd_residual",
    "EXACT_METHODS",
    "NUMERIC_METHODS",
]


@dataclass(frozen=True)
class VarianceValue:
    """Delta_n = rat + inv_pi / pi."""

    n: int
    rat: Fraction
    inv_pi: Fraction
    method: str = ""

    @classmethod
    def from_piscalar(cls, n: int, x: PiScalar, method: str = "") -> "VarianceValue":
        """Read off (a, b) from a + b sigma**-2; anything else is an error."""
        x = PiScalar.coerce(x)
        num, den = x.num, x.den
        if den == Poly((Fraction(1),)):
            if any(num[k] for k in range(1, len(num))):
                raise ValueError(f"not of the form a + b/pi: {x}")
            return cls(n, Fraction(num[0]), Fraction(0), method)
        if den != Poly((0, 0, Fraction(1))) or num.degree > 2 or num[1]:
            raise ValueError(f"not of the form a + b/pi: {x}")
        return cls(n, Fraction(num[2]), Fraction(num[0]), method)

    def to_piscalar(self) -> PiScalar:
        return PiScalar(self.rat) + PiScalar(self.inv_pi) / SIGMA ** 2

    def key(self) -> tuple:
        return (self.rat, self.inv_pi)

    def same_value(self, other: "VarianceValue") -> bool:
        return self.n == other.n and self.key() == other.key()

    def decimal(self, digits: int = 64):
        with mp.workdps(digits + 10):
            v = mpf(self.rat.numerator) / self.rat.denominator
            v += mpf(self.inv_pi.numerator) / (self.inv_pi.denominator * mp.pi)
        with mp.workdps(digits):
            return +v

    def decimal_str(self, digits: int = 64) -> str:
        with mp.workdps(digits):
            return mp.nstr(self.decimal(digits), digits)

    def __str__(self) -> str:
        a, b = self.rat, self.inv_pi
        if not b:
            return str(a)
        sign = "-" if b < 0 else "+"
        b = abs(b)
        tail = f"{b.numerator}/π" if b.denominator == 1 else f"{b.numerator}/({b.denominator}·π)"
        if not a:
            return f"-{tail}" if sign == "-" else tail
        return f"{a} {sign} {tail}"

    def to_dict(self, digits: int = 64) -> dict:
        return {
            "n": self.n,
            "rat": str(self.rat),
            "inv_pi": str(self.inv_pi),
            "decimal": self.decimal_str(digits),
            "method": self.method,
        }

    def csv_row(self, digits: int = 64) -> list:
        return [self.n, str(self.rat), str(self.inv_pi), self.decimal_str(digits)]


@dataclass(frozen=True)
class ETerm:
    """e_{2m+1} = value / pi."""

    m: int
    value: Fraction


def central_square(m: int) -> Fraction:
    """c_m = (C(2m, m)/4**m)**2."""
    return Fraction(comb(2 * m, m) ** 2, 16 ** m)


def e_term(m: int) -> ETerm:
    if m < 0:
        raise ValueError("m must be non-negative")
    return ETerm(m, -central_square(m))


# ---------------------------------------------------------------------------
# exact routes


def _split_sum(terms, lo: int, hi: int) -> tuple:
    """Binary-splitting sum of terms[lo:hi], each (p, q, e) = p / (q 16**e).

    Returns (p, q, e) for the partial sum without any gcd; the e are
    non-decreasing along the list.
    """
    if hi - lo == 1:
        return terms[lo]
    mid = (lo + hi) // 2
    p1, q1, e1 = _split_sum(terms, lo, mid)
    p2, q2, e2 = _split_sum(terms, mid, hi)
    return (p1 * q2 << (4 * (e2 - e1))) + p2 * q1, q1 * q2, e2


def _sum_kernel(k_max: int) -> Fraction:
    """sum_{k=0}^{k_max} S_k / ((2k+1)(2k+2)) with S_k = c_0 + ... + c_k.

    16**k S_k is an integer T_k with T_k = 16 T_{k-1} + C(2k, k)**2; the
    sum is formed by binary splitting and reduced once at the end.
    """
    if k_max < 0:
        return Fraction(0)
    terms = []
    t = 0
    central = 1  # C(2k, k)
    for k in range(k_max + 1):
        if k:
            central = central * 2 * (2 * k - 1) // k
        t = 16 * t + central * central
        terms.append((t, (2 * k + 1) * (2 * k + 2), k))
    p, q, e = _split_sum(terms, 0, len(terms))
    return Fraction(p, q << (4 * e))


def delta_sum(n: int) -> VarianceValue:
    """Delta_n from the discrete-quadrature solution of the difference equation.

    Only odd j contribute; with j = 2k+1 the bracket is -S_k/pi.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    return VarianceValue(n, Fraction(n, 4), -n * _sum_kernel((n - 2) // 2), "sum")


def delta_sum_table(n_max: int) -> list[VarianceValue]:
    """delta_sum(0) .. delta_sum(n_max) in a single pass."""
    out = []
    acc = Fraction(0)
    s = Fraction(0)
    partial = [Fraction(0)]  # partial[k+1] = kernel up to k
    for k in range(0, max((n_max - 2) // 2 + 1, 0)):
        s += central_square(k)
        acc += s / ((2 * k + 1) * (2 * k + 2))
        partial.append(acc)
    for n in range(n_max + 1):
        k = (n - 2) // 2
        val = partial[k + 1] if k >= 0 else Fraction(0)
        out.append(VarianceValue(n, Fraction(n, 4), -n * val, "sum"))
    return out


def delta_voisum(n: int) -> VarianceValue:
    """Delta_n = n/4 - (n/2) sum_l c_l h_l / pi, m = floor(n/2).

    h_l = sum_{k=l+1}^{m} (2/(2k-1) - 1/k) is the digamma bracket
    psi(m+1/2) - psi(l+1/2) - psi(m+1) + psi(l+1) in exact form.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    m = n // 2
    h = Fraction(0)
    total = Fraction(0)
    for l in range(m, -1, -1):
        total += central_square(l) * h
        # h_{l-1} = h_l + 2/(2l-1) - 1/l
        if l:
            h += Fraction(2, 2 * l - 1) - Fraction(1, l)
    return VarianceValue(n, Fraction(n, 4), -Fraction(n, 2) * total, "voisum")


class ConsistencyError(RuntimeError):
    """Two exact forms of the same quantity disagree."""


def delta_from_distribution(n: int, tau: TauSequence | None = None) -> VarianceValue:
    """Delta_n from the exact index distribution and from tau_n''(1)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if tau is None or tau.n_max < n:
        tau = build_tau(n)
    dist = index_distribution(n, tau)
    p1 = sum((p * k for k, p in enumerate(dist.probs)), PiScalar(0))
    p2 = sum((p * (k * (k - 1)) for k, p in enumerate(dist.probs)), PiScalar(0))
    from_dist = p2 + p1 - p1 * p1

    poly = tau.polynomial(n)
    second = PiScalar.coerce(poly.deriv().deriv()(1)) / tau.at_one(n)
    from_tau = second - Fraction(n * n, 4) + Fraction(n, 2)
    if from_dist != from_tau:
        raise ConsistencyError(f"distribution and tau'' forms differ at n={n}")
    return VarianceValue.from_piscalar(n, from_dist, "tau")


def delta_recurrence_table(n_max: int) -> list[VarianceValue]:
    """Delta_2 .. Delta_{n_max} from the two second-order recurrences.

    The even chain starts from Delta_2, Delta_4 and steps from m = 2 (the
    m = 1 equation has a 0 * infinity term).  The odd chain starts from
    Delta_3, Delta_5 and steps from m = 2; its m = 1 equation, which ties in
    Delta_1, is checked instead of used.
    """
    if n_max < 5:
        raise ValueError("n_max must be at least 5")
    seeds = {k: delta_sum(k) for k in (1, 2, 3, 4, 5)}
    val = {k: (v.rat, v.inv_pi) for k, v in seeds.items()}

    def even_coeffs(m):
        return (Fraction(2 * m + 1, 2 * m - 1),
                1 + Fraction((2 * m + 2) * (2 * m + 1), (2 * m) * (2 * m - 1)),
                Fraction(2 * m, 2 * m - 2),
                -central_square(m) / (2 * m - 1))

    def odd_coeffs(m):
        return (Fraction(2 * m + 1, 2 * m + 3),
                1 + Fraction((2 * m) * (2 * m - 1), (2 * m + 2) * (2 * m + 1)),
                Fraction(2 * m, 2 * m + 2),
                -central_square(m) / (2 * (m + 1)))

    def step(coeffs, mid, low):
        a, b, c, rhs = coeffs
        rat = (b * mid[0] - c * low[0]) / a
        inv = (rhs + b * mid[1] - c * low[1]) / a
        return rat, inv

    # odd m = 1 equation as a check on the seeds
    a, b, c, rhs = odd_coeffs(1)
    res = tuple(a * val[5][i] - b * val[3][i] + c * val[1][i] for i in (0, 1))
    if res != (0, rhs):
        raise ConsistencyError("odd recurrence fails at m=1 on the seeds")

    m = 2
    while 2 * m + 2 <= n_max or 2 * m + 3 <= n_max:
        if 2 * m + 2 <= n_max:
            val[2 * m + 2] = step(even_coeffs(m), val[2 * m], val[2 * m - 2])
        if 2 * m + 3 <= n_max:
            val[2 * m + 3] = step(odd_coeffs(m), val[2 * m + 1], val[2 * m - 1])
        m += 1

    for mm in range(1, (n_max - 1) // 2 + 1):
        ratio = Fraction(2 * mm + 1, 2 * mm)
        if val[2 * mm + 1] != (ratio * val[2 * mm][0], ratio * val[2 * mm][1]):
            raise ConsistencyError(f"even-odd relation fails at m={mm}")
    return [VarianceValue(k, *val[k], "recurrence") for k in range(2, n_max + 1)]


def even_odd_holds(d_even: VarianceValue, d_odd: VarianceValue) -> bool:
    """2m Delta_{2m+1} == (2m+1) Delta_{2m}."""
    m = d_even.n // 2
    if d_even.n != 2 * m or d_odd.n != 2 * m + 1 or m < 1:
        raise ValueError("need Delta_{2m} and Delta_{2m+1} with m >= 1")
    return all(2 * m * x == (2 * m + 1) * y for x, y in zip(d_odd.key(), d_even.key()))


def auxd_residual(values: dict, n: int) -> tuple:
    """n D_{n+1} - (n+1) D_n - (n-2) D_{n-1} + (n-1) D_{n-2} - [n odd] e_n.

    ``values`` maps index -> VarianceValue.  Returns (rat, inv_pi) parts,
    both zero when the third-order relation holds.
    """
    d = {k: values[k].key() for k in (n + 1, n, n - 1, n - 2)}
    out = []
    for i in (0, 1):
        out.append(n * d[n + 1][i] - (n + 1) * d[n][i] - (n - 2) * d[n - 1][i]
                   + (n - 1) * d[n - 2][i])
    if n % 2:
        out[1] -= e_term((n - 1) // 2).value
    return tuple(out)


# ---------------------------------------------------------------------------
# numeric routes

def _psi_gap(m, ctx: PrecisionContext):
    """psi(m+1) - psi(m+1/2)."""
    return digamma(mpf(m) + 1, ctx) - digamma(mpf(m) + mpf(1) / 2, ctx)


def j_m_closed(m, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """J_m from the digamma + 4F3 evaluation."""
    with mp.workdps(ctx.working_digits + 10):
        m = mpf(m)
        half = mpf(1) / 2
        out = (mp.pi / 2 * (digamma(m + half, ctx) - digamma(half, ctx))
               + mp.pi / 2 * mp.log(4)
               - mp.pi / (4 * (2 * m + 1)) * hyp4f3_unit(m, ctx))
    return rounded(out, ctx)


def j_m_closed_dm(m, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """dJ_m/dm, differentiating the closed form term by term."""
    with mp.workdps(ctx.working_digits + 10):
        m = mpf(m)
        f = hyp4f3_unit(m, ctx)
        df = hyp4f3_unit_dm(m, ctx)
        out = (mp.pi / 2 * trigamma(m + mpf(1) / 2, ctx)
               + mp.pi / (2 * (2 * m + 1) ** 2) * f
               - mp.pi / (4 * (2 * m + 1)) * df)
    return rounded(out, ctx)


def delta_closed_form(n: int, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """Delta_n = (n/pi^3)[psi(m+1) - psi(m+1/2)] J_m + (n/(2 pi^3)) J_m'."""
    if n < 2:
        raise ValueError("closed form needs n >= 2")
    m = n // 2
    with mp.workdps(ctx.working_digits + 10):
        pi3 = mp.pi ** 3
        out = (n / pi3 * _psi_gap(m, ctx) * j_m_closed(m, ctx)
               + n / (2 * pi3) * j_m_closed_dm(m, ctx))
    return rounded(out, ctx)


# (constant, coefficient of L = log(c k) + gamma) pairs for k^0 .. k^-6,
# all over pi^2
_ASY_EVEN = (
    (Fraction(1, 2), Fraction(1, 2)),
    (Fraction(0), Fraction(-1, 8)),
    (Fraction(7, 384), Fraction(0)),
    (Fraction(-41, 1536), Fraction(24, 1536)),
    (Fraction(-219, 81920), Fraction(0)),
    (Fraction(6247, 327680), Fraction(-2560, 327680)),
    (Fraction(19129, 16515072), Fraction(0)),
)
_ASY_ODD = (
    (Fraction(1, 2), Fraction(1, 2)),
    (Fraction(2, 8), Fraction(1, 8)),
    (Fraction(7, 384), Fraction(-24, 384)),
    (Fraction(-9, 512), Fraction(8, 512)),
    (Fraction(-3937, 245760), Fraction(1920, 245760)),
    (Fraction(5809, 327680), Fraction(-2560, 327680)),
    (Fraction(882767, 82575360), Fraction(-322560, 82575360)),
)


def delta_asymptotic(n: int, log_factor: int = 16, digits: int = 64):
    """Large-n expansion of Delta_n through k^-6, n = 2k or 2k+1.

    The logarithm enters as log(16 k) = log(8 n) for even n; ``log_factor``
    exists only to evaluate alternative normalizations of that argument.
    """
    if n < 6:
        raise ValueError("asymptotic form needs n >= 6")
    k = n // 2
    table = _ASY_EVEN if n % 2 == 0 else _ASY_ODD
    with mp.workdps(digits + 10):
        big_l = mp.log(log_factor * k) + mp.euler
        out = mpf(0)
        for p, (c0, c1) in enumerate(table):
            coef = mpf(c0.numerator) / c0.denominator + big_l * c1.numerator / c1.denominator
            out += coef / mpf(k) ** p
        out /= mp.pi ** 2
    with mp.workdps(digits):
        return +out


def _beta_integrand(m: int, ctx: PrecisionContext):
    # t = s^2 turns t^(-1/2)(1 - t^m)/(1 - t) K(sqrt(1-t)) dt into
    # 2 (1 + s^2 + ... + s^(2m-2)) K'(s) ds
    def f(s):
        s2 = s * s
        poly = mpf(0)
        for _ in range(m):
            poly = poly * s2 + 1
        return 2 * poly * elliptic_k_complement(s, ctx)
    return f


def _sinh_integrand(m: int, ctx: PrecisionContext):
    with mp.workdps(ctx.working_digits + 10):
        pref = mp.rf(mpf(1) / 2, m) / mp.factorial(m)

    def f(x):
        c = 1 / mp.cosh(x) ** 2
        bracket = 1 - pref * c ** m * hyp2f1_half(m, c, ctx)
        return mp.pi * bracket / mp.sinh(x)
    return f


def j_m_quadrature(m: int, route: str = "beta", ctx: PrecisionContext = DEFAULT_CONTEXT):
    """J_m by direct quadrature, over (0, 1) ("beta") or (0, inf) ("sinh").

    The sinh route uses J_m = pi int_0^inf {1 - (1/2)_m/m! c^m 2F1(1/2, m; m+1; c)}
    dx / sinh x with c = cosh(x)^-2; at m = 1 the bracket is tanh x and the
    integral is pi^2/2.
    """
    if m < 1:
        raise ValueError("j_m_quadrature needs m >= 1")
    with mp.workdps(ctx.working_digits + 10):
        if route == "beta":
            # log singularity at s = 0 only
            out = integrate(_beta_integrand(m, ctx), 0, 1, "log", ctx)
        elif route == "sinh":
            out = integrate(_sinh_integrand(m, ctx), 0, mp.inf, "exp_decay", ctx)
        else:
            raise ValueError(f"unknown route {route!r}")
    return rounded(out, ctx)


def log_kernel_integral(ctx: PrecisionContext = DEFAULT_CONTEXT):
    """int_0^1 t^(-1/2) (1-t)^(-1) log(t) K(sqrt(1-t)) dt; exact value -pi^3/2."""
    def f(s):
        # log(s^2)/(1 - s^2) -> -1 as s -> 1
        return 4 * mp.log(s) / (1 - s * s) * elliptic_k_complement(s, ctx)
    with mp.workdps(ctx.working_digits + 10):
        out = integrate(f, 0, 1, "log", ctx)
    return rounded(out, ctx)


def delta_beta_integral(n: int, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """Delta_n from the quasi-Beta integral over t in (0, 1), n >= 2."""
    if n < 2:
        raise ValueError("needs n >= 2 (m = 0 makes the integrand vanish)")
    m = n // 2
    with mp.workdps(ctx.working_digits + 10):
        gap = _psi_gap(m, ctx)

        def f(s):
            s2 = s * s
            geo = mpf(0)
            for _ in range(m):
                geo = geo * s2 + 1
            sm = s2 ** m
            body = 2 * gap * geo - sm * 2 * mp.log(s) / (1 - s2)
            return 2 * body * elliptic_k_complement(s, ctx)

        val = integrate(f, 0, 1, "log", ctx)
        out = mpf(n) / 4 * 2 / mp.pi ** 3 * val
    return rounded(out, ctx)


def gamma_ratio_series(ctx: PrecisionContext = DEFAULT_CONTEXT):
    """sum_l Gamma(l+1/2)^2/Gamma(l+1)^2 [psi(l+1) - psi(l+1/2)]; equals pi^2/2."""
    with mp.workdps(ctx.working_digits + 10):
        def t(x):
            r = mp.exp(2 * (mp.loggamma(x + mpf(1) / 2) - mp.loggamma(x + 1)))
            return r * (mp.digamma(x + 1) - mp.digamma(x + mpf(1) / 2))
        val, _ = sum_positive_series(t, ctx, corrections=4)
    return rounded(val, ctx)


# ---------------------------------------------------------------------------
# homogeneous solutions

def _to_mpf(q: Fraction):
    return mpf(q.numerator) / q.denominator


def _even_op(x, m):
    return (mpf(2 * m + 1) / (2 * m - 1) * x(m + 1)
            - (1 + mpf((2 * m + 2) * (2 * m + 1)) / ((2 * m) * (2 * m - 1))) * x(m)
            + mpf(2 * m) / (2 * m - 2) * x(m - 1))


def _odd_op(x, m):
    return (mpf(2 * m + 1) / (2 * m + 3) * x(m + 1)
            - (1 + mpf((2 * m) * (2 * m - 1)) / ((2 * m + 2) * (2 * m + 1))) * x(m)
            + mpf(2 * m) / (2 * m + 2) * x(m - 1))


def _even_op_exact(x, m):
    return (Fraction(2 * m + 1, 2 * m - 1) * x(m + 1)
            - (1 + Fraction((2 * m + 2) * (2 * m + 1), (2 * m) * (2 * m - 1))) * x(m)
            + Fraction(2 * m, 2 * m - 2) * x(m - 1))


def _odd_op_exact(x, m):
    return (Fraction(2 * m + 1, 2 * m + 3) * x(m + 1)
            - (1 + Fraction((2 * m) * (2 * m - 1), (2 * m + 2) * (2 * m + 1))) * x(m)
            + Fraction(2 * m, 2 * m + 2) * x(m - 1))


def homogeneous_check(m_max: int, ctx: PrecisionContext = DEFAULT_CONTEXT,
                      bound: float = 1e-12) -> Report:
    """Plug the two general-solution families into both homogeneous recurrences."""
    if m_max < 3:
        raise ValueError("m_max must be at least 3")
    rep = Report()
    with mp.workdps(ctx.working_digits + 10):
        half = mpf(1) / 2

        def log_part(m):
            return mp.log(4) + digamma(m + half, ctx) - digamma(mpf(m) + 1, ctx)

        fam = {
            "even": (_even_op, _even_op_exact, lambda m: Fraction(m),
                     lambda m: m * log_part(m), 2),
            "odd": (_odd_op, _odd_op_exact, lambda m: Fraction(2 * m + 1, 2),
                    lambda m: (m + half) * log_part(m), 1),
        }
        for parity, (op, op_exact, lin, logsol, m_lo) in fam.items():
            for m in range(m_lo, m_max + 1):
                r1 = op_exact(lin, m)
                rep.add(f"homogeneous_{parity}_linear", m, r1 == 0, str(r1), "m")
                r2 = abs(op(logsol, m))
                rep.add(f"homogeneous_{parity}_log", m, r2 <= bound, mp.nstr(r2, 3), "m")
                combo = lambda k: 3 * _to_mpf(lin(k)) - 2 * logsol(k)  # noqa: E731
                r3 = abs(op(combo, m))
                rep.add(f"homogeneous_{parity}_combination", m, r3 <= bound, mp.nstr(r3, 3), "m")
    return rep


EXACT_METHODS = ("sum", "voisum", "tau", "recurrence")
NUMERIC_METHODS = ("closed", "asymptotic")
