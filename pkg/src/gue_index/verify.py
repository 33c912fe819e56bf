"""The full verification suite, as run by ``gue-index verify``."""

from __future__ import annotations

from fractions import Fraction

import numpy as np
from mpmath import mp, mpf

from .algebra import PiScalar, XiFunction
from .report import Report
from .sampler import TridiagonalMatrix, estimate, positive_count, sample_tridiagonal, sturm_positive_count
from .special import DEFAULT_CONTEXT, PrecisionContext, digamma, elliptic_k, hyp2f1_half
from .tau import build_fg, build_tau, g_second_derivative_at_one, index_distribution, verify_identities, verify_laurent
from .variance import (
    auxd_residual,
    delta_asymptotic,
    delta_closed_form,
    delta_from_distribution,
    delta_recurrence_table,
    delta_sum,
    delta_sum_table,
    delta_voisum,
    even_odd_holds,
    gamma_ratio_series,
    homogeneous_check,
    j_m_closed,
    j_m_quadrature,
    log_kernel_integral,
)

__all__ = ["KNOWN_VARIANCES", "run_suite", "check_tables", "check_routes", "check_numeric",
           "check_special", "check_sampler", "check_distribution"]

# reference values Delta_n = a + b/pi
KNOWN_VARIANCES = {
    1: (Fraction(1, 4), Fraction(0)),
    2: (Fraction(1, 2), Fraction(-1)),
    3: (Fraction(3, 4), Fraction(-3, 2)),
    4: (Fraction(1), Fraction(-29, 12)),
    5: (Fraction(5, 4), Fraction(-145, 48)),
    6: (Fraction(3, 2), Fraction(-1249, 320)),
    18: (Fraction(9, 2), Fraction(-1198597830455957, 91359323095040)),
    19: (Fraction(19, 4), Fraction(-22773358778663183, 1644467815710720)),
    20: (Fraction(5), Fraction(-183365193212828149, 12497955399401472)),
}

# exact hand-checked anchors for the tau/f/g construction
_XI = XiFunction.xi()


def _tau_anchors() -> dict:
    s = PiScalar.sigma()
    u = _XI + 1
    v = _XI - 1
    return {
        "tau_1": s * u / 2,
        "tau_2": (s * s * u * u - 2 * v * v) / 2,
        "g_1": -4 * v * v / (s * s * u * u),
        "f_2_1": -(s * s * u * u - 2 * v * v) / (s * u * v),
    }


def check_tables(rep: Report) -> Report:
    for n, (a, b) in KNOWN_VARIANCES.items():
        d = delta_sum(n)
        rep.add("variance_table", n, d.key() == (a, b), str(d))
    tau = build_tau(3)
    fg = build_fg(2)
    anchors = _tau_anchors()
    rep.add("tau_1_table", 1, tau[1] == anchors["tau_1"], str(tau[1]))
    rep.add("tau_2_table", 2, tau[2] == anchors["tau_2"], str(tau[2]))
    rep.add("g_1_table", 1, fg.g(1) == anchors["g_1"], str(fg.g(1)))
    rep.add("g_0_table", 0, not fg.g(0))
    rep.add("f_2_1_table", 1, fg.triple(1).f2 == anchors["f_2_1"], str(fg.triple(1).f2))
    return rep


def check_distribution(rep: Report, n_max: int, tau=None) -> Report:
    tau = tau if tau is not None and tau.n_max >= n_max else build_tau(n_max)
    for n in range(n_max + 1):
        dist = index_distribution(n, tau)
        rep.add("distribution_sums_to_one", n, dist.total() == 1)
        rep.add("distribution_symmetric", n, all(dist[k] == dist[n - k] for k in range(n + 1)))
        rep.add("distribution_mean_half_n", n, dist.mean() == Fraction(n, 2))
    return rep


def check_routes(rep: Report, n_max: int, tau=None, hankel_limit: int = 24) -> Report:
    """Exact agreement of the summation, digamma, distribution and recurrence routes."""
    top = max(n_max, 5)
    rec = {v.n: v for v in delta_recurrence_table(top)}
    lim = min(n_max, hankel_limit)
    tau = tau if tau is not None and tau.n_max >= lim else build_tau(lim)
    for n in range(2, n_max + 1):
        s = delta_sum(n)
        ok = delta_voisum(n).same_value(s) and rec[n].same_value(s)
        if n <= hankel_limit:
            ok = ok and delta_from_distribution(n, tau).same_value(s)
        rep.add("exact_route_agreement", n, ok, str(s))

    table = delta_sum_table(102)
    vals = {v.n: v for v in table}
    for m in range(1, 51):
        rep.add("even_odd_relation", m, even_odd_holds(vals[2 * m], vals[2 * m + 1]), label="m")
    for n in range(2, 101):
        res = auxd_residual(vals, n)
        rep.add("third_order_relation", n, res == (0, 0), str(res))
    for n in range(0, 99):
        rep.add("monotone_growth", n, vals[n + 2].decimal(30) > vals[n].decimal(30))
    return rep


def check_g_second_derivative(rep: Report, n_max: int, fg=None) -> Report:
    fg = fg if fg is not None and fg.n_max >= n_max else build_fg(n_max)
    d = {v.n: v for v in delta_sum_table(n_max + 1)}
    for n in range(1, n_max + 1):
        g2 = g_second_derivative_at_one(fg, n)
        rhs = (d[n + 1].to_piscalar() + d[n - 1].to_piscalar() - 2 * d[n].to_piscalar()) * (2 * n)
        rep.add("g_second_derivative_vs_variance", n, g2 == rhs, str(g2))
    return rep


def check_numeric(rep: Report, n_max: int, ctx: PrecisionContext = DEFAULT_CONTEXT) -> Report:
    with mp.workdps(ctx.working_digits):
        for n in range(2, n_max + 1):
            err = abs(delta_closed_form(n, ctx) - delta_sum(n).decimal(ctx.working_digits))
            rep.add("closed_form_vs_exact", n, err <= 1e-8, mp.nstr(err, 3))
        prev = {}
        for k in (5, 10, 20):
            for parity, n in (("even", 2 * k), ("odd", 2 * k + 1)):
                err = abs(delta_asymptotic(n, digits=ctx.working_digits)
                          - delta_sum(n).decimal(ctx.working_digits))
                ok = parity not in prev or err < prev[parity]
                if k == 20:
                    ok = ok and err < 1e-8
                rep.add(f"asymptotic_{parity}_error_decreasing", n, ok, mp.nstr(err, 3))
                prev[parity] = err
        rep.extend(homogeneous_check(max(3, n_max // 2), ctx))
    return rep


def check_special(rep: Report, ctx: PrecisionContext = DEFAULT_CONTEXT, m_max: int = 1) -> Report:
    with mp.workdps(ctx.working_digits):
        for i in range(1, 10):
            z = mpf(i) / 10
            series = mp.pi / 2 * mp.hyp2f1(mpf(1) / 2, mpf(1) / 2, 1, z * z)
            err = abs(elliptic_k(z, ctx) - series)
            rep.add("elliptic_k_agm_vs_series", i, err <= 1e-12, mp.nstr(err, 3), label="10z")
        for x in ("0.1", "0.5", "1", "2.5", "7", "40.25"):
            x = mpf(x)
            err = abs(digamma(x + 1, ctx) - digamma(x, ctx) - 1 / x)
            rep.add("digamma_recurrence", None, err <= 1e-40, f"x={mp.nstr(x, 5)} err={mp.nstr(err, 3)}")
        for m, z in ((1, 1), (1, 0), (3, mpf(1) / 2)):
            val = hyp2f1_half(m, z, ctx)
            ref = mp.hyp2f1(mpf(1) / 2, m, m + 1, z)
            rep.add("hyp2f1_half", m, abs(val - ref) <= 1e-12, f"z={mp.nstr(z, 3)}", label="m")
        err = abs(gamma_ratio_series(ctx) - mp.pi ** 2 / 2)
        rep.add("gamma_ratio_identity", None, err <= 1e-10, mp.nstr(err, 3))
        err = abs(log_kernel_integral(ctx) + mp.pi ** 3 / 2)
        rep.add("log_kernel_integral", None, err <= 1e-8, mp.nstr(err, 3))
        for m in range(1, m_max + 1):
            jc = j_m_closed(m, ctx)
            for route in ("beta", "sinh"):
                err = abs(j_m_quadrature(m, route, ctx) - jc)
                rep.add(f"j_m_{route}_vs_closed", m, err <= 1e-8, mp.nstr(err, 3), label="m")
    return rep


def check_sampler(rep: Report, instances: int = 1000, seed: int = 2024) -> Report:
    rng = np.random.default_rng(seed)
    bad = 0
    scale_bad = 0
    for _ in range(instances):
        t = sample_tridiagonal(int(rng.integers(1, 9)), rng)
        k = positive_count(t)
        bad += k != sturm_positive_count(t)
        c = float(rng.uniform(0.01, 100))
        scale_bad += k != positive_count(TridiagonalMatrix(t.diag * c, t.offdiag * c))
    rep.add("inertia_vs_sturm", None, bad == 0, f"{bad} mismatches in {instances}")
    rep.add("inertia_scale_invariant", None, scale_bad == 0, f"{scale_bad} mismatches")
    a, b = estimate(3, 20000, seed), estimate(3, 20000, seed, workers=2)
    rep.add("sampler_seed_determinism", None, a == b)
    return rep


def run_suite(max_n: int = 10, ctx: PrecisionContext = DEFAULT_CONTEXT, numeric: bool = True) -> Report:
    """Every exact and numeric invariant at the requested scale."""
    if max_n < 2:
        raise ValueError("max_n must be at least 2")
    rep = Report()
    tau = build_tau(max(max_n + 2, min(max_n, 24)))
    fg = build_fg(max(max_n + 1, 2 * ((max_n - 2) // 2 + 1) + 4))
    check_tables(rep)
    rep.extend(verify_identities(max_n, tau, fg))
    rep.extend(verify_laurent(max(0, (max_n - 2) // 2), fg))
    check_distribution(rep, max_n, tau)
    check_routes(rep, max_n, tau)
    check_g_second_derivative(rep, max_n, fg)
    check_sampler(rep)
    if numeric:
        check_numeric(rep, max_n, ctx)
        check_special(rep, ctx)
    return rep

