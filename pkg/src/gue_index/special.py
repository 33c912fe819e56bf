"""High-precision special functions and quadrature.

All routines take a :class:`PrecisionContext` and run inside an mpmath
``workdps`` block, so callers never need to touch the global precision.
Results are returned as ``mpf`` values at the context precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from mpmath import mp, mpf

__all__ = [
    "PrecisionContext",
    "DEFAULT_CONTEXT",
    "rounded",
    "SeriesError",
    "QuadratureError",
    "digamma",
    "trigamma",
    "elliptic_k",
    "elliptic_k_complement",
    "hyp2f1_half",
    "hyp4f3_unit",
    "hyp4f3_unit_dm",
    "sum_positive_series",
    "integrate",
]


@dataclass(frozen=True)
class PrecisionContext:
    working_digits: int = 64
    series_term_cap: int = 20000
    quadrature_tolerance: float = 1e-30

    def __post_init__(self):
        if self.working_digits < 16:
            raise ValueError("working_digits must be at least 16")
        if self.series_term_cap < 1000:
            raise ValueError("series_term_cap must be at least 1000")
        if not self.quadrature_tolerance > 0:
            raise ValueError("quadrature_tolerance must be positive")

    @property
    def tol(self) -> mpf:
        return mpf(self.quadrature_tolerance)

    def workdps(self):
        return mp.workdps(self.working_digits)


DEFAULT_CONTEXT = PrecisionContext()


def rounded(x, ctx: PrecisionContext):
    """x rounded to the context precision (independent of the global dps)."""
    with mp.workdps(ctx.working_digits):
        return +x


class SeriesError(ArithmeticError):
    """Term cap reached before the tail bound met the tolerance."""

    def __init__(self, message: str, partial_sum, error_bound):
        super().__init__(message)
        self.partial_sum = partial_sum
        self.error_bound = error_bound


class QuadratureError(ArithmeticError):
    """Quadrature failed to reach tolerance; carries the best estimate."""

    def __init__(self, message: str, estimate, error_bound):
        super().__init__(message)
        self.estimate = estimate
        self.error_bound = error_bound


# ---------------------------------------------------------------------------
# polygamma

@lru_cache(maxsize=None)
def _bernoulli_even(count: int, dps: int) -> tuple:
    with mp.workdps(dps):
        return tuple(mp.bernoulli(2 * k) for k in range(1, count + 1))


def _shift_point(ctx: PrecisionContext) -> int:
    # Asymptotic terms behave like (2k)!/(2 pi x)^(2k); x >= digits gives
    # enough decay for the full precision before the series turns.
    return max(20, ctx.working_digits)


def _check_positive(x, name: str):
    x = mpf(x)
    if not x > 0:
        raise ValueError(f"{name} needs x > 0, got {x}")
    return x


def digamma(x, ctx: PrecisionContext = DEFAULT_CONTEXT) -> mpf:
    """psi(x) for real x > 0: upward recurrence, then the Bernoulli series."""
    with mp.workdps(ctx.working_digits + 10):
        x = _check_positive(x, "digamma")
        acc = mpf(0)
        big = _shift_point(ctx)
        while x < big:
            acc -= 1 / x
            x += 1
        eps = mpf(10) ** (-(ctx.working_digits + 5))
        res = mp.log(x) - 1 / (2 * x)
        x2 = x * x
        xp = x2
        for k, b in enumerate(_bernoulli_even(60, ctx.working_digits + 10), start=1):
            term = b / (2 * k * xp)
            res -= term
            if abs(term) < eps:
                break
            xp *= x2
        out = acc + res
    return rounded(out, ctx)


def trigamma(x, ctx: PrecisionContext = DEFAULT_CONTEXT) -> mpf:
    """psi'(x) for real x > 0."""
    with mp.workdps(ctx.working_digits + 10):
        x = _check_positive(x, "trigamma")
        acc = mpf(0)
        big = _shift_point(ctx)
        while x < big:
            acc += 1 / (x * x)
            x += 1
        eps = mpf(10) ** (-(ctx.working_digits + 5))
        res = 1 / x + 1 / (2 * x * x)
        x2 = x * x
        xp = x2 * x
        for b in _bernoulli_even(60, ctx.working_digits + 10):
            term = b / xp
            res += term
            if abs(term) < eps:
                break
            xp *= x2
        out = acc + res
    return rounded(out, ctx)


# ---------------------------------------------------------------------------
# elliptic and Gauss functions

def elliptic_k(z, ctx: PrecisionContext = DEFAULT_CONTEXT) -> mpf:
    """K(z) = (pi/2) 2F1(1/2, 1/2; 1; z^2), first kind, by the AGM."""
    with mp.workdps(ctx.working_digits + 10):
        z = mpf(z)
        if z < 0 or z >= 1:
            raise ValueError(f"elliptic_k needs 0 <= z < 1, got {z}")
        out = mp.pi / (2 * mp.agm(1, mp.sqrt(1 - z * z)))
    return rounded(out, ctx)


def elliptic_k_complement(s, ctx: PrecisionContext = DEFAULT_CONTEXT) -> mpf:
    """K(sqrt(1 - s^2)) given the complementary modulus s in (0, 1].

    Avoids forming 1 - s^2 near s = 0, where the integrands live.
    """
    with mp.workdps(ctx.working_digits + 10):
        s = mpf(s)
        if not 0 < s <= 1:
            raise ValueError(f"complementary modulus must lie in (0, 1], got {s}")
        out = mp.pi / (2 * mp.agm(1, s))
    return rounded(out, ctx)


def hyp2f1_half(m: int, z, ctx: PrecisionContext = DEFAULT_CONTEXT) -> mpf:
    """2F1(1/2, m; m+1; z) for integer m >= 1 and 0 <= z <= 1.

    Equals m * I_m with I_k = int_0^1 t^(k-1) (1 - z t)^(-1/2) dt.  For
    z <= 1/2 the power series converges geometrically; above that the I_k
    obey the upward recurrence I_{k+1} = (k I_k - sqrt(1-z)) / (z (k + 1/2)),
    which is stable there because the multiplier k / (z (k + 1/2)) stays
    below 2 and the I_k are bounded.
    """
    if m < 1 or int(m) != m:
        raise ValueError(f"hyp2f1_half needs integer m >= 1, got {m}")
    m = int(m)
    with mp.workdps(ctx.working_digits + 15):
        z = mpf(z)
        if z < 0 or z > 1:
            raise ValueError(f"hyp2f1_half needs 0 <= z <= 1, got {z}")
        if z == 1:
            out = mp.gamma(m + 1) * mp.sqrt(mp.pi) / mp.gamma(m + mpf(1) / 2)
        elif z <= mpf(1) / 2:
            eps = mpf(10) ** (-(ctx.working_digits + 10))
            term = mpf(1)  # (1/2)_k z^k / k!
            out = mpf(1)
            k = 0
            while True:
                term *= (k + mpf(1) / 2) * z / (k + 1)
                k += 1
                add = term * m / (m + k)
                out += add
                if add < eps:
                    break
                if k > ctx.series_term_cap:
                    raise SeriesError("hyp2f1_half series cap", out, add)
        else:
            r = mp.sqrt(1 - z)
            i_k = 2 / (1 + r)
            for k in range(1, m):
                i_k = (k * i_k - r) / (z * (k + mpf(1) / 2))
            out = m * i_k
    return rounded(out, ctx)


# ---------------------------------------------------------------------------
# slowly convergent positive series

def _em_tail(term, start: int, n_corr: int, derivatives=None):
    """Euler-Maclaurin estimate of sum_{k >= start} term(k).

    Returns (tail, error estimate); the estimate is the size of the last
    correction used plus the quadrature error.
    """
    integral, qerr = mp.quad(term, [start, 2 * start, mp.inf], error=True)
    if derivatives is None:
        ders = [term(start)] + [mp.diff(term, start, k) for k in range(1, 2 * n_corr)]
    else:
        ders = derivatives(mpf(start), 2 * n_corr - 1)
    tail = integral + ders[0] / 2
    last = mpf(0)
    for j in range(1, n_corr + 1):
        corr = mp.bernoulli(2 * j) / mp.factorial(2 * j) * ders[2 * j - 1]
        tail -= corr
        last = abs(corr)
    return tail, last + abs(qerr)


def sum_positive_series(term, ctx: PrecisionContext = DEFAULT_CONTEXT,
                        start: int = 64, corrections: int = 6, derivatives=None):
    """Sum term(0) + term(1) + ... for a smooth, slowly decaying term.

    ``term`` must accept real arguments.  The first K terms are added
    directly and the rest is handled by an Euler-Maclaurin tail; K doubles
    until the error estimate drops below the tolerance.  ``derivatives``,
    if given, maps (x, n) to [term(x), term'(x), ..., term^(n)(x)];
    otherwise numerical differentiation is used.  Returns
    (value, error estimate).
    """
    tol = ctx.tol
    head = mpf(0)
    k_done = 0
    err = None
    k = start
    while True:
        if k > ctx.series_term_cap:
            raise SeriesError(
                f"term cap {ctx.series_term_cap} reached before tail bound met",
                head, err)
        for i in range(k_done, k):
            head += term(i)
        k_done = k
        tail, err = _em_tail(term, k, corrections, derivatives)
        if err <= tol:
            return head + tail, err
        k *= 2


def _exp_derivatives(value, log_ders):
    """Derivatives 0..n of exp(l) from value = exp(l) and l', ..., l^(n)."""
    out = [value]
    for n in range(1, len(log_ders) + 1):
        out.append(sum(mp.binomial(n - 1, k) * log_ders[k] * out[n - 1 - k]
                       for k in range(n)))
    return out


def _pfq_logterm(m, x):
    # log of t_x = ((3/2)_x)^2 / ((3/2 + m)_x x! (x+1)^2), the 4F3 summand
    h = mpf(3) / 2
    return (2 * (mp.loggamma(x + h) - mp.loggamma(h)) - mp.loggamma(x + 1)
            + mp.loggamma(h + m) - mp.loggamma(h + m + x) - 2 * mp.log(x + 1))


def _pfq_log_derivatives(m, x, n):
    h = mpf(3) / 2
    out = []
    for j in range(1, n + 1):
        d = (2 * mp.psi(j - 1, x + h) - mp.psi(j - 1, x + 1) - mp.psi(j - 1, x + h + m)
             - 2 * (-1) ** (j - 1) * mp.factorial(j - 1) / (x + 1) ** j)
        out.append(d)
    return out


@lru_cache(maxsize=256)
def _hyp4f3_pair(m, ctx: PrecisionContext):
    with mp.workdps(ctx.working_digits + 15):
        m = mpf(m)
        h = mpf(3) / 2
        psi0 = mp.digamma(h + m)

        def t(x):
            return mp.exp(_pfq_logterm(m, x))

        def t_ders(x, n):
            return _exp_derivatives(t(x), _pfq_log_derivatives(m, x, n))

        # d/dm t = -t u with u(x) = psi(3/2 + m + x) - psi(3/2 + m)
        def dt(x):
            return -t(x) * (mp.digamma(h + m + x) - psi0)

        def dt_ders(x, n):
            td = t_ders(x, n)
            u = [mp.digamma(h + m + x) - psi0] + [mp.psi(j, h + m + x) for j in range(1, n + 1)]
            return [-sum(mp.binomial(k, j) * u[j] * td[k - j] for j in range(k + 1))
                    for k in range(n + 1)]

        f, ef = sum_positive_series(t, ctx, derivatives=t_ders)
        d, ed = sum_positive_series(dt, ctx, derivatives=dt_ders)
    return (rounded(f, ctx), ef), (rounded(d, ctx), ed)


def hyp4f3_unit(m, ctx: PrecisionContext = DEFAULT_CONTEXT) -> mpf:
    """4F3(1, 1, 3/2, 3/2; 2, 2, 3/2 + m; 1) for m >= 0.

    Terms decay like k^(-3/2-m), so the tail is summed with Euler-Maclaurin.
    """
    if m < 0:
        raise ValueError("hyp4f3_unit needs m >= 0")
    return _hyp4f3_pair(m, ctx)[0][0]


def hyp4f3_unit_dm(m, ctx: PrecisionContext = DEFAULT_CONTEXT) -> mpf:
    """Termwise d/dm of :func:`hyp4f3_unit`."""
    if m < 0:
        raise ValueError("hyp4f3_unit_dm needs m >= 0")
    return _hyp4f3_pair(m, ctx)[1][0]


# ---------------------------------------------------------------------------
# quadrature

_SINGULARITIES = (None, "inv_sqrt_left", "log", "exp_decay")


def integrate(f, a, b, singularity: str | None = None,
              ctx: PrecisionContext = DEFAULT_CONTEXT) -> mpf:
    """Integrate f over [a, b] with tanh-sinh nodes.

    ``singularity`` declares the endpoint behaviour:

    * ``"inv_sqrt_left"``: f ~ (t-a)^(-1/2) (possibly times a log); the
      substitution t = a + s^2 removes the square root;
    * ``"log"``: integrable log singularity at an endpoint, which the
      double-exponential nodes handle as is;
    * ``"exp_decay"``: b is infinite and f decays exponentially.

    Raises :class:`QuadratureError` when the error estimate exceeds the
    tolerance after refinement.
    """
    if singularity not in _SINGULARITIES:
        raise ValueError(f"unknown singularity kind {singularity!r}")
    tol = ctx.tol
    with mp.workdps(ctx.working_digits + 10):
        a = mpf(a)
        b = mp.inf if b in (mp.inf, float("inf")) else mpf(b)
        if singularity == "inv_sqrt_left":
            if b == mp.inf:
                raise ValueError("inv_sqrt_left needs a finite interval")
            g = lambda s: 2 * s * f(a + s * s)  # noqa: E731
            pts = [0, mp.sqrt(b - a)]
        elif b == mp.inf:
            g = f
            pts = [a, a + 1, mp.inf]
        else:
            g = f
            pts = [a, b]
        value, err = mp.quad(g, pts, error=True, maxdegree=10)
        if err > tol:
            # split once more before giving up
            mid = [pts[0]] + [(pts[i] + pts[i + 1]) / 2 if pts[i + 1] != mp.inf else pts[i] + 8
                              for i in range(len(pts) - 1)]
            pts2 = sorted(set(pts) | set(mid), key=lambda p: (p == mp.inf, p))
            value, err = mp.quad(g, pts2, error=True, maxdegree=12)
            if err > tol:
                raise QuadratureError("quadrature did not reach tolerance", +value, err)
    return rounded(value, ctx)

