"""Command line entry point: ``gue-index <command> [options]``.

Exit status is 0 on success, 1 when a verification fails and 2 on usage
errors.  JSON output is sorted and indented so identical flags give
byte-identical files.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass

from mpmath import mp

from .algebra import PiScalar
from .report import Report
from .sampler import chi_square, estimate
from .special import PrecisionContext
from .tau import build_tau, index_distribution
from .variance import (
    delta_asymptotic,
    delta_closed_form,
    delta_from_distribution,
    delta_recurrence_table,
    delta_sum,
    delta_voisum,
    j_m_closed,
    j_m_quadrature,
    log_kernel_integral,
)
from .verify import run_suite

__all__ = ["RunConfig", "build_parser", "run", "main"]

METHODS = ("sum", "voisum", "tau", "recurrence", "closed", "asymptotic")
# above this the Hankel route is refused unless asked for explicitly
_TAU_DEFAULT_LIMIT = 24
_MC_EXACT_LIMIT = 24


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    n: int | None = None
    max_n: int | None = None
    m: int | None = None
    method: str = "all"
    digits: int = 64
    samples: int = 100_000
    seed: int = 0
    workers: int = 1
    fmt: str = "text"
    out: str | None = None
    numeric: bool = True

    def validate(self) -> "RunConfig":
        if self.digits < 16:
            raise UsageError("--digits must be at least 16")
        if self.n is not None and self.n < 0:
            raise UsageError("--n must be non-negative")
        if self.command in ("mc",) and self.n is not None and self.n < 1:
            raise UsageError("mc needs --n >= 1")
        if self.command == "mc" and self.samples < 1000:
            raise UsageError("--samples must be at least 1000")
        if self.command == "verify" and self.max_n is not None and self.max_n < 2:
            raise UsageError("--max-n must be at least 2")
        if self.command == "integrals" and (self.m is None or self.m < 1):
            raise UsageError("--m must be at least 1")
        if self.workers < 1:
            raise UsageError("--workers must be positive")
        return self

    @property
    def ctx(self) -> PrecisionContext:
        return PrecisionContext(working_digits=self.digits)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="fmt", choices=("text", "json", "csv"), default="text")
    common.add_argument("--digits", type=int, default=64, help="working decimal digits (default 64)")
    common.add_argument("--out", help="write output to this file instead of stdout")

    p = argparse.ArgumentParser(prog="gue-index",
                                description="Exact and numeric statistics of the GUE index.")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("variance", parents=[common], help="variance of the index")
    v.add_argument("--n", type=int, required=True)
    v.add_argument("--method", choices=METHODS + ("all",), default="all")

    d = sub.add_parser("dist", parents=[common], help="exact index distribution")
    d.add_argument("--n", type=int, required=True)

    t = sub.add_parser("tau", parents=[common], help="tau_n(xi) polynomial")
    t.add_argument("--n", type=int, required=True)

    ver = sub.add_parser("verify", parents=[common], help="run the identity suite")
    ver.add_argument("--max-n", type=int, default=10)
    ver.add_argument("--no-numeric", dest="numeric", action="store_false",
                     help="skip the high-precision numeric checks")

    mc = sub.add_parser("mc", parents=[common], help="Monte Carlo estimate")
    mc.add_argument("--n", type=int, required=True)
    mc.add_argument("--samples", type=int, default=100_000)
    mc.add_argument("--seed", type=int, default=0)
    mc.add_argument("--workers", type=int, default=1)

    it = sub.add_parser("integrals", parents=[common], help="quadrature cross-checks for J_m")
    it.add_argument("--m", type=int, required=True)
    return p


def _config(ns: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=ns.command,
        n=getattr(ns, "n", None),
        max_n=getattr(ns, "max_n", None),
        m=getattr(ns, "m", None),
        method=getattr(ns, "method", "all"),
        digits=ns.digits,
        samples=getattr(ns, "samples", 100_000),
        seed=getattr(ns, "seed", 0),
        workers=getattr(ns, "workers", 1),
        fmt=ns.fmt,
        out=ns.out,
        numeric=getattr(ns, "numeric", True),
    ).validate()


# ---------------------------------------------------------------------------
# rendering helpers

def _dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _dump_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _num(x, digits: int) -> str:
    with mp.workdps(digits):
        return mp.nstr(x, digits)


# ---------------------------------------------------------------------------
# commands

def _variance_records(cfg: RunConfig) -> list[dict]:
    n = cfg.n
    wanted = METHODS if cfg.method == "all" else (cfg.method,)
    explicit = cfg.method != "all"
    out = []
    for method in wanted:
        if method == "sum":
            val = delta_sum(n)
        elif method == "voisum":
            val = delta_voisum(n)
        elif method == "tau":
            if n > _TAU_DEFAULT_LIMIT and not explicit:
                continue
            val = delta_from_distribution(n)
        elif method == "recurrence":
            if n < 2:
                if explicit:
                    raise UsageError("the recurrence route needs n >= 2")
                continue
            val = {v.n: v for v in delta_recurrence_table(max(n, 5))}[n]
        elif method == "closed":
            if n < 2:
                if explicit:
                    raise UsageError("the closed form needs n >= 2")
                continue
            out.append({"n": n, "method": method, "rat": None, "inv_pi": None,
                        "decimal": _num(delta_closed_form(n, cfg.ctx), cfg.digits)})
            continue
        else:
            if n < 6:
                if explicit:
                    raise UsageError("the asymptotic form needs n >= 6")
                continue
            out.append({"n": n, "method": method, "rat": None, "inv_pi": None,
                        "decimal": _num(delta_asymptotic(n, digits=cfg.digits), cfg.digits)})
            continue
        rec = val.to_dict(cfg.digits)
        rec["exact"] = str(val)
        out.append(rec)
    return out


def cmd_variance(cfg: RunConfig) -> tuple[int, str]:
    recs = _variance_records(cfg)
    if cfg.fmt == "json":
        return 0, _dump_json(recs)
    if cfg.fmt == "csv":
        rows = [[r["n"], r["rat"] or "", r["inv_pi"] or "", r["decimal"], r["method"]] for r in recs]
        return 0, _dump_csv(["n", "a", "b", "decimal", "method"], rows)
    lines = []
    for r in recs:
        exact = r.get("exact")
        shown = f"{exact}  ≈ {r['decimal']}" if exact else r["decimal"]
        lines.append(f"Δ_{r['n']} [{r['method']}]: {shown}")
    return 0, "\n".join(lines) + "\n"


def cmd_dist(cfg: RunConfig) -> tuple[int, str]:
    dist = index_distribution(cfg.n)
    rows = [(k, str(p), _num(p.evaluate(cfg.digits), cfg.digits)) for k, p in enumerate(dist.probs)]
    if cfg.fmt == "json":
        return 0, _dump_json({"n": cfg.n, "probs": [
            {"k": k, "exact": e, "decimal": d} for k, e, d in rows]})
    if cfg.fmt == "csv":
        return 0, _dump_csv(["k", "exact", "decimal"], rows)
    return 0, "".join(f"p({k},{cfg.n}) = {e}  ≈ {d}\n" for k, e, d in rows)


def cmd_tau(cfg: RunConfig) -> tuple[int, str]:
    tau = build_tau(cfg.n)
    poly = tau.polynomial(cfg.n)
    coeffs = [PiScalar.coerce(poly[k]) for k in range(cfg.n + 1)]
    rows = [(k, str(c), _num(c.evaluate(cfg.digits), cfg.digits)) for k, c in enumerate(coeffs)]
    if cfg.fmt == "json":
        return 0, _dump_json({"n": cfg.n, "tau": str(tau[cfg.n]), "at_one": str(tau.at_one(cfg.n)),
                              "coefficients": [c for _, c, _ in rows]})
    if cfg.fmt == "csv":
        return 0, _dump_csv(["k", "coefficient", "decimal"], rows)
    return 0, f"τ_{cfg.n}(ξ) = {tau[cfg.n]}\n"


def cmd_verify(cfg: RunConfig) -> tuple[int, str]:
    rep = run_suite(cfg.max_n, cfg.ctx, numeric=cfg.numeric)
    code = 0 if rep.ok else 1
    if cfg.fmt == "json":
        body = rep.to_dict()
        body["summary"] = rep.summary()
        return code, _dump_json(body)
    if cfg.fmt == "csv":
        rows = [(c.name, c.n if c.n is not None else "", "PASS" if c.ok else "FAIL", c.detail)
                for c in rep.checks]
        return code, _dump_csv(["check", "index", "status", "detail"], rows)
    lines = [c.line() for c in rep.checks]
    lines.append(rep.summary())
    return code, "\n".join(lines) + "\n"


def cmd_mc(cfg: RunConfig) -> tuple[int, str]:
    est = estimate(cfg.n, cfg.samples, cfg.seed, cfg.workers)
    rec = est.to_dict()
    if cfg.n <= _MC_EXACT_LIMIT:
        dist = index_distribution(cfg.n)
        try:
            res = chi_square(est, dist)
            rec["chi2"], rec["p_value"], rec["dof"] = res.statistic, res.p_value, res.dof
        except ValueError as exc:
            rec["chi2_error"] = str(exc)
    exact_var = delta_sum(cfg.n)
    rec["exact_variance"] = exact_var.decimal_str(cfg.digits)
    rec["z_score"] = (est.variance - float(exact_var.decimal(30))) / est.stderr_variance \
        if est.stderr_variance else None
    if cfg.fmt == "json":
        return 0, _dump_json(rec)
    if cfg.fmt == "csv":
        return 0, _dump_csv(["k", "count"], list(enumerate(est.counts)))
    lines = [
        f"n={cfg.n} samples={cfg.samples} seed={cfg.seed}",
        f"counts: {list(est.counts)}",
        f"variance: {est.variance:.6f} ± {est.stderr_variance:.6f} (exact {exact_var.decimal_str(12)})",
    ]
    if rec.get("chi2") is not None:
        lines.append(f"chi2: {rec['chi2']:.4f} on {rec['dof']} dof, p = {rec['p_value']:.4g}")
    if est.flagged:
        lines.append(f"zero pivots nudged: {est.flagged}")
    return 0, "\n".join(lines) + "\n"


def cmd_integrals(cfg: RunConfig) -> tuple[int, str]:
    ctx = cfg.ctx
    rep = Report()
    recs = []
    with mp.workdps(cfg.digits):
        for m in range(1, cfg.m + 1):
            jc = j_m_closed(m, ctx)
            row = {"m": m, "closed": _num(jc, cfg.digits)}
            for route in ("beta", "sinh"):
                val = j_m_quadrature(m, route, ctx)
                err = abs(val - jc)
                row[route] = _num(val, cfg.digits)
                row[f"{route}_error"] = mp.nstr(err, 3)
                rep.add(f"j_m_{route}_vs_closed", m, err <= 1e-8, mp.nstr(err, 3), label="m")
            recs.append(row)
        lk = log_kernel_integral(ctx)
        err = abs(lk + mp.pi ** 3 / 2)
        rep.add("log_kernel_integral", None, err <= 1e-8, mp.nstr(err, 3))
    code = 0 if rep.ok else 1
    if cfg.fmt == "json":
        return code, _dump_json({"J": recs, "log_kernel": _num(lk, cfg.digits), "ok": rep.ok})
    if cfg.fmt == "csv":
        rows = [[r["m"], r["closed"], r["beta"], r["sinh"], r["beta_error"], r["sinh_error"]] for r in recs]
        return code, _dump_csv(["m", "closed", "beta", "sinh", "beta_error", "sinh_error"], rows)
    lines = [f"J_{r['m']}: closed {r['closed']}\n    beta error {r['beta_error']}, "
             f"sinh error {r['sinh_error']}" for r in recs]
    lines += [c.line() for c in rep.checks if c.name == "log_kernel_integral"]
    return code, "\n".join(lines) + "\n"


_COMMANDS = {
    "variance": cmd_variance,
    "dist": cmd_dist,
    "tau": cmd_tau,
    "verify": cmd_verify,
    "mc": cmd_mc,
    "integrals": cmd_integrals,
}


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if not exc.code else 2
    try:
        cfg = _config(ns)
        code, text = _COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        print(f"gue-index: error: {exc}", file=stderr)
        return 2
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    if code == 1:
        for line in text.splitlines():
            if line.startswith("FAIL") or '"ok": false' in line:
                print(line.strip(), file=stderr)
        print("verification failed", file=stderr)
    return code


def main(argv=None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
