"""Acceptance criteria 1-8, one test each.

Every test records a ``PASS``/``FAIL`` line (also shown in the pytest
terminal summary) before asserting, so a failing criterion still reports
its measured numbers.  Run standalone with ``python3 tests/test_acceptance.py``.
"""

import time
from fractions import Fraction

import pytest
from mpmath import mp

from gue_index.sampler import chi_square, estimate, positive_count, sample_tridiagonal, sturm_positive_count
from gue_index.special import PrecisionContext
from gue_index.tau import build_tau, index_distribution, verify_identities, verify_laurent
from gue_index.variance import (
    auxd_residual,
    delta_asymptotic,
    delta_closed_form,
    delta_from_distribution,
    delta_recurrence_table,
    delta_sum,
    delta_voisum,
    even_odd_holds,
    j_m_closed,
    j_m_quadrature,
    log_kernel_integral,
)
from gue_index.verify import KNOWN_VARIANCES

import numpy as np


def record(log, k: int, title: str, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {k} ({title}): {detail}"
    log.append(line)
    print(line)
    assert ok, line


def test_criterion_1_exact_tables(acceptance_log):
    t0 = time.perf_counter()
    bad = [n for n, ab in KNOWN_VARIANCES.items() if delta_sum(n).key() != ab]
    dt = time.perf_counter() - t0
    ok = not bad and dt < 1.0
    record(acceptance_log, 1, "exact table", ok,
           f"{len(KNOWN_VARIANCES) - len(bad)}/{len(KNOWN_VARIANCES)} exact, {dt:.3f} s (limit 1 s)")


def test_criterion_2_route_agreement(acceptance_log):
    t0 = time.perf_counter()
    tau = build_tau(24)
    rec = {v.n: v for v in delta_recurrence_table(24)}
    ctx = PrecisionContext(working_digits=40)
    worst = 0
    mismatched = []
    with mp.workdps(40):
        for n in range(2, 25):
            s = delta_sum(n)
            same = (delta_voisum(n).same_value(s) and delta_from_distribution(n, tau).same_value(s)
                    and rec[n].same_value(s))
            if not same:
                mismatched.append(n)
            worst = max(worst, abs(delta_closed_form(n, ctx) - s.decimal(40)))
    dt = time.perf_counter() - t0
    ok = not mismatched and worst <= 1e-8 and dt < 120
    record(acceptance_log, 2, "five routes", ok,
           f"exact mismatches {mismatched}, max closed-form error {mp.nstr(worst, 3)}, {dt:.1f} s (limit 120 s)")


def test_criterion_3_identities(acceptance_log):
    rep = verify_identities(10)
    needed = {"tau_recurrence", "g_recurrence", "f_sum_zero", "g_product_equals_tau_ratio"}
    tau = build_tau(20)
    means_bad = [n for n in range(0, 21) if index_distribution(n, tau).mean() != Fraction(n, 2)]
    ok = rep.ok and needed <= set(rep.names()) and not means_bad
    record(acceptance_log, 3, "identity suite", ok,
           f"{rep.summary()} for n <= 10; mean n/2 fails at {means_bad} for n <= 20")


def test_criterion_4_laurent(acceptance_log):
    rep = verify_laurent(5)
    needed = {"A1_closed_form", "E1_closed_form", "Bm1_closed_form", "C1_closed_form",
              "F3_closed_form", "e_term_from_g2"}
    ok = rep.ok and needed <= set(rep.names()) and {c.n for c in rep.checks if c.name == "e_term_from_g2"} == set(range(6))
    record(acceptance_log, 4, "Laurent closed forms", ok, f"{rep.summary()} for m = 0..5")


def test_criterion_5_asymptotics(acceptance_log):
    details = []
    ok = True
    with mp.workdps(70):
        for parity, off in (("even", 0), ("odd", 1)):
            errs, scaled = [], []
            for k in (5, 10, 20):
                n = 2 * k + off
                e = abs(delta_asymptotic(n, digits=64) - delta_sum(n).decimal(64))
                errs.append(e)
                scaled.append(e * k ** 7 / mp.log(8 * k))
            decreasing = errs[0] > errs[1] > errs[2]
            spread = max(scaled) / min(scaled)
            ok = ok and decreasing and errs[2] < 1e-8 and spread <= 10
            details.append(f"{parity}: errors {[mp.nstr(e, 2) for e in errs]}, scaled spread {mp.nstr(spread, 3)}")
    record(acceptance_log, 5, "asymptotics", ok, "; ".join(details))


def test_criterion_6_integrals(acceptance_log):
    ctx = PrecisionContext(working_digits=30, quadrature_tolerance=1e-15)
    worst = 0
    with mp.workdps(30):
        for m in range(1, 7):
            jc = j_m_closed(m, ctx)
            for route in ("beta", "sinh"):
                worst = max(worst, abs(j_m_quadrature(m, route, ctx) - jc))
        lk = abs(log_kernel_integral(ctx) + mp.pi ** 3 / 2)
    ok = worst <= 1e-8 and lk <= 1e-8
    record(acceptance_log, 6, "integral representations", ok,
           f"max |J quadrature - closed| over m = 1..6 = {mp.nstr(worst, 3)}, log kernel error {mp.nstr(lk, 3)}")


def test_criterion_7_monte_carlo(acceptance_log):
    t0 = time.perf_counter()
    parts = []
    ok = True
    for n in (2, 4, 6, 8):
        est = estimate(n, 1_000_000, seed=20240 + n)
        exact = float(delta_sum(n).decimal(30))
        z = (est.variance - exact) / est.stderr_variance
        p = chi_square(est, index_distribution(n)).p_value
        ok = ok and abs(z) <= 4 and p > 1e-3
        parts.append(f"n={n} z={z:+.2f} p={p:.3g}")
    rng = np.random.default_rng(7)
    mismatches = 0
    for _ in range(1000):
        t = sample_tridiagonal(int(rng.integers(1, 9)), rng)
        mismatches += positive_count(t) != sturm_positive_count(t)
    dt = time.perf_counter() - t0
    ok = ok and mismatches == 0 and dt < 60
    record(acceptance_log, 7, "Monte Carlo", ok,
           f"{', '.join(parts)}; oracle mismatches {mismatches}/1000; {dt:.1f} s (limit 60 s)")


def test_criterion_8_scaling(acceptance_log):
    t0 = time.perf_counter()
    top = delta_sum(10_000)
    dt = time.perf_counter() - t0
    vals = {n: delta_sum(n) for n in range(9997, 10002)}
    assert vals[10_000].same_value(top)
    eo = even_odd_holds(vals[10_000], vals[10_001])
    aux = [auxd_residual(vals, n) == (0, 0) for n in (9999, 10_000)]
    ok = dt < 10 and eo and all(aux)
    record(acceptance_log, 8, "scaling", ok,
           f"delta_sum(10000) in {dt:.2f} s (limit 10 s), even-odd {eo}, third-order relation at 9999/10000 {aux}")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
