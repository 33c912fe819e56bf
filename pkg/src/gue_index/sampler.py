"""Monte Carlo index sampler on the tridiagonal beta = 2 Hermite model.

The index only depends on eigenvalue signs, so any positive rescaling of
the matrix model is harmless.  Signs are read from the pivots of the
LDL^T factorization at shift 0 (Sylvester inertia), O(n) per sample and
vectorized across samples.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import isfinite, sqrt

import numpy as np
from scipy.stats import chi2 as chi2_dist

from .algebra import Poly

__all__ = [
    "TridiagonalMatrix",
    "McEstimate",
    "ChiSquareResult",
    "sample_tridiagonal",
    "positive_count",
    "inertia",
    "batch_positive_counts",
    "sturm_positive_count",
    "estimate",
    "chi_square",
]

# relative size of the nudge applied to an exactly zero pivot
_ZERO_PIVOT_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class TridiagonalMatrix:
    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.diag, dtype=float)
        e = np.asarray(self.offdiag, dtype=float)
        if d.ndim != 1 or e.ndim != 1 or len(d) < 1 or len(e) != len(d) - 1:
            raise ValueError("need n diagonal and n-1 off-diagonal entries")
        if not (np.all(np.isfinite(d)) and np.all(np.isfinite(e))):
            raise ValueError("matrix entries must be finite")
        if np.any(e < 0):
            raise ValueError("off-diagonal entries must be non-negative")
        object.__setattr__(self, "diag", d)
        object.__setattr__(self, "offdiag", e)

    @property
    def n(self) -> int:
        return len(self.diag)

    def dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)


def _offdiag_shapes(n: int) -> np.ndarray:
    # chi_{2(n-k)} / sqrt(2) = sqrt(Gamma(n-k, 1)), k = 1 .. n-1
    return np.arange(n - 1, 0, -1, dtype=float)


def sample_tridiagonal(n: int, rng: np.random.Generator) -> TridiagonalMatrix:
    """One draw: N(0,1) diagonal, chi_{2(n-k)}/sqrt(2) off-diagonal."""
    if n < 1:
        raise ValueError("n must be positive")
    diag = rng.standard_normal(n)
    off = np.sqrt(rng.gamma(_offdiag_shapes(n)))
    return TridiagonalMatrix(diag, off)


def inertia(t: TridiagonalMatrix) -> tuple[int, bool]:
    """(number of positive eigenvalues, whether a zero pivot was nudged)."""
    counts, flags = batch_positive_counts(t.diag[None, :], t.offdiag[None, :])
    return int(counts[0]), bool(flags[0])


def positive_count(t: TridiagonalMatrix) -> int:
    if not isinstance(t, TridiagonalMatrix):
        t = TridiagonalMatrix(*t)
    return inertia(t)[0]


def batch_positive_counts(diag: np.ndarray, off: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Positive-eigenvalue counts for a batch of tridiagonal matrices.

    ``diag`` has shape (S, n), ``off`` shape (S, n-1).  Pivots follow
    d'_1 = d_1, d'_k = d_k - e_{k-1}^2 / d'_{k-1}.
    """
    diag = np.asarray(diag, dtype=float)
    off = np.asarray(off, dtype=float)
    if not (np.all(np.isfinite(diag)) and np.all(np.isfinite(off))):
        raise ValueError("NaN or Inf in matrix entries")
    s, n = diag.shape
    negatives = np.zeros(s, dtype=np.int64)
    flagged = np.zeros(s, dtype=bool)
    scale = np.maximum(np.max(np.abs(diag), axis=1), 1.0)
    if n > 1:
        scale = np.maximum(scale, np.max(off, axis=1))
    pivot = diag[:, 0].copy()
    for k in range(n):
        if k:
            pivot = diag[:, k] - off[:, k - 1] ** 2 / pivot
        zero = pivot == 0
        if zero.any():
            pivot = np.where(zero, _ZERO_PIVOT_EPS * scale, pivot)
            flagged |= zero
        negatives += pivot < 0
    return n - negatives, flagged


def _char_poly(t: TridiagonalMatrix) -> Poly:
    """det(x I - T) with exact rational coefficients."""
    d = [Fraction(float(x)) for x in t.diag]
    e2 = [Fraction(float(x)) ** 2 for x in t.offdiag]
    x = Poly((Fraction(0), Fraction(1)))
    prev, cur = Poly((Fraction(1),)), x - d[0]
    for k in range(1, t.n):
        prev, cur = cur, (x - d[k]) * cur - prev * Poly((e2[k - 1],))
    return cur


def _sign_changes(values) -> int:
    signs = [v > 0 for v in values if v]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _sturm_distinct_positive(p: Poly) -> tuple[int, Poly]:
    """Distinct roots of p in (0, inf), and gcd(p, p')."""
    chain = [p, p.deriv()]
    while chain[-1].degree > 0:
        r = chain[-2] % chain[-1]
        if not r:
            break
        chain.append(-r)
    at_zero = _sign_changes([q[0] for q in chain])
    at_inf = _sign_changes([q.lead for q in chain])
    g = chain[-1] if chain[-1].degree > 0 else Poly((Fraction(1),))
    return at_zero - at_inf, g


def sturm_positive_count(t: TridiagonalMatrix) -> int:
    """Positive eigenvalues counted with multiplicity via Sturm chains.

    Works on the exact characteristic polynomial; repeated roots are picked
    up by recursing on gcd(p, p').
    """
    p = _char_poly(t)
    total = 0
    while p.degree > 0:
        v = p.valuation()
        if v:
            p = Poly(p.coeffs[v:])
            if p.degree == 0:
                break
        k, g = _sturm_distinct_positive(p)
        total += k
        p = g
    return total


@dataclass(frozen=True)
class ChiSquareResult:
    statistic: float
    dof: int
    p_value: float
    cells: tuple = field(default=())


@dataclass(frozen=True)
class McEstimate:
    n: int
    samples: int
    seed: int
    counts: tuple
    mean: float
    variance: float
    stderr_variance: float
    flagged: int = 0
    chi2: ChiSquareResult | None = None

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "samples": self.samples,
            "seed": self.seed,
            "counts": list(self.counts),
            "mean": self.mean,
            "variance": self.variance,
            "stderr": self.stderr_variance,
            "flagged": self.flagged,
            "chi2": None if self.chi2 is None else self.chi2.statistic,
            "p_value": None if self.chi2 is None else self.chi2.p_value,
        }


def _moments(counts: np.ndarray, samples: int) -> tuple[float, float, float]:
    k = np.arange(len(counts), dtype=float)
    c = counts.astype(float)
    mean = float(np.dot(k, c) / samples)
    dev = k - mean
    m2 = float(np.dot(dev ** 2, c) / samples)
    m4 = float(np.dot(dev ** 4, c) / samples)
    var = m2 * samples / (samples - 1)
    # Var(s^2) = (mu4 - sigma^4 (N-3)/(N-1)) / N
    se = sqrt(max(m4 - var * var * (samples - 3) / (samples - 1), 0.0) / samples)
    return mean, var, se


def _chunk_size(n: int) -> int:
    return max(1024, (1 << 21) // max(n, 1))


def _run_chunk(n: int, size: int, seed_seq: np.random.SeedSequence) -> tuple[np.ndarray, int]:
    rng = np.random.default_rng(seed_seq)
    diag = rng.standard_normal((size, n))
    off = np.sqrt(rng.gamma(_offdiag_shapes(n), size=(size, n - 1)))
    counts, flags = batch_positive_counts(diag, off)
    return np.bincount(counts, minlength=n + 1), int(flags.sum())


def estimate(n: int, samples: int, seed: int, workers: int = 1) -> McEstimate:
    """Histogram of the index over ``samples`` draws.

    Work is cut into fixed-size chunks, each with its own stream spawned
    from ``seed``, so the result does not depend on ``workers``.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if samples < 1000:
        raise ValueError("samples must be at least 1000")
    size = _chunk_size(n)
    sizes = [size] * (samples // size)
    if samples % size:
        sizes.append(samples % size)
    streams = np.random.SeedSequence(seed).spawn(len(sizes))
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda a: _run_chunk(n, *a), zip(sizes, streams)))
    else:
        parts = [_run_chunk(n, s, q) for s, q in zip(sizes, streams)]
    counts = np.zeros(n + 1, dtype=np.int64)
    flagged = 0
    for c, f in parts:
        counts += c
        flagged += f
    mean, var, se = _moments(counts, samples)
    return McEstimate(n, samples, seed, tuple(int(c) for c in counts), mean, var, se, flagged)


def _pool(expected: np.ndarray, observed: np.ndarray, minimum: float):
    """Merge adjacent cells left to right until each expected count >= minimum."""
    cells, e_out, o_out = [], [], []
    start, e_acc, o_acc = 0, 0.0, 0.0
    for i, (e, o) in enumerate(zip(expected, observed)):
        e_acc += e
        o_acc += o
        if e_acc >= minimum:
            cells.append((start, i))
            e_out.append(e_acc)
            o_out.append(o_acc)
            start, e_acc, o_acc = i + 1, 0.0, 0.0
    if start < len(expected):
        if not cells:
            cells.append((start, len(expected) - 1))
            e_out.append(e_acc)
            o_out.append(o_acc)
        else:
            a, _ = cells[-1]
            cells[-1] = (a, len(expected) - 1)
            e_out[-1] += e_acc
            o_out[-1] += o_acc
    return cells, np.array(e_out), np.array(o_out)


def chi_square(est: McEstimate, exact, digits: int = 30, minimum: float = 5.0) -> ChiSquareResult:
    """Pearson test of the histogram against exact probabilities.

    ``exact`` is an IndexDistribution or a plain sequence of probabilities.
    """
    probs = getattr(exact, "probs", exact)
    p = np.array([float(x.evaluate(digits)) if hasattr(x, "evaluate") else float(x)
                  for x in probs])
    if len(p) != len(est.counts):
        raise ValueError("probability vector and histogram differ in length")
    if not all(isfinite(x) and x >= 0 for x in p):
        raise ValueError("probabilities must be finite and non-negative")
    if abs(p.sum() - 1) > 1e-9:
        raise ValueError("probabilities must sum to 1")
    expected = p * est.samples
    observed = np.array(est.counts, dtype=float)
    cells, e, o = _pool(expected, observed, minimum)
    if len(cells) < 2:
        raise ValueError("pooling left a single cell; the test is degenerate")
    stat = float(np.sum((o - e) ** 2 / e))
    dof = len(cells) - 1
    return ChiSquareResult(stat, dof, float(chi2_dist.sf(stat, dof)), tuple(cells))
