"""Rank-based comparison of algorithms over per-fold scores.

Friedman's test asks whether K algorithms scored over N folds are
distinguishable at all; when it fires, the Nemenyi procedure compares them
pairwise through the studentized range distribution of mean-rank gaps.
The two distribution tails it needs (upper chi-square tail, studentized
range CDF at infinite degrees of freedom) are computed here directly so the
module has no dependency beyond numpy.

Ranks run 1 = best score. Ties receive average ranks and the Friedman
statistic is deflated by the standard tie-correction factor; a matrix whose
blocks are all fully tied is reported as Q=0, p=1 with a flag instead of a
division by zero.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError

__all__ = [
    "ScoreMatrix",
    "FriedmanResult",
    "NemenyiResult",
    "friedman_test",
    "nemenyi_pairwise",
    "chi2_upper_tail",
    "studentized_range_cdf",
    "studentized_range_quantile",
]


@dataclass(frozen=True)
class ScoreMatrix:
    """N blocks (folds) x K treatments (algorithms) of real-valued scores."""

    values: np.ndarray
    treatments: tuple[str, ...]

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "treatments", tuple(self.treatments))
        if values.ndim != 2:
            raise ValidationError("score matrix must be two-dimensional")
        n, k = values.shape
        if n < 2 or k < 2:
            raise ValidationError(f"score matrix needs at least 2 blocks and 2 treatments, got {n}x{k}")
        if len(self.treatments) != k:
            raise ValidationError(f"{k} treatment columns but {len(self.treatments)} names")
        if not np.all(np.isfinite(values)):
            raise ValidationError("score matrix contains non-finite values")

    @property
    def n_blocks(self) -> int:
        return self.values.shape[0]

    @property
    def n_treatments(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class FriedmanResult:
    q_statistic: float
    p_value: float
    mean_ranks: tuple[float, ...]
    tie_correction: float
    fully_tied: bool = False


@dataclass(frozen=True)
class NemenyiResult:
    p_matrix: np.ndarray
    critical_difference: float
    mean_ranks: tuple[float, ...] = field(default=())


def _rank_block(row: np.ndarray) -> np.ndarray:
    """Average ranks for one block, rank 1 = highest score."""
    order = np.argsort(-row, kind="stable")
    ranks = np.empty(len(row), dtype=float)
    i = 0
    while i < len(row):
        j = i
        while j + 1 < len(row) and row[order[j + 1]] == row[order[i]]:
            j += 1
        # positions i..j share a value; all get the average of ranks i+1..j+1
        avg = (i + j + 2) / 2.0
        for t in range(i, j + 1):
            ranks[order[t]] = avg
        i = j + 1
    return ranks


def _tie_term(row: np.ndarray) -> int:
    """Sum of t^3 - t over groups of tied scores in one block."""
    _, counts = np.unique(row, return_counts=True)
    return int(np.sum(counts.astype(np.int64) ** 3 - counts))


def friedman_test(m: ScoreMatrix) -> FriedmanResult:
    """Friedman omnibus test over per-block ranks, with tie correction."""
    n, k = m.values.shape
    ranks = np.vstack([_rank_block(row) for row in m.values])
    mean_ranks = ranks.mean(axis=0)

    correction = 1.0 - sum(_tie_term(row) for row in m.values) / (n * (k**3 - k))
    rank_tuple = tuple(float(r) for r in mean_ranks)
    raw_q = (12.0 * n / (k * (k + 1))) * float(np.sum((mean_ranks - (k + 1) / 2.0) ** 2))
    if correction == 0.0:
        # every block fully tied: no information, report the degenerate result
        return FriedmanResult(0.0, 1.0, rank_tuple, 0.0, fully_tied=True)
    q = raw_q / correction
    p = chi2_upper_tail(q, k - 1)
    return FriedmanResult(q, p, rank_tuple, correction)


def nemenyi_pairwise(m: ScoreMatrix, alpha: float = 0.05) -> NemenyiResult:
    """Pairwise mean-rank comparison via the studentized range distribution."""
    n, k = m.values.shape
    fr = friedman_test(m)
    mean_ranks = np.array(fr.mean_ranks)
    scale = math.sqrt(k * (k + 1) / (6.0 * n))

    p = np.ones((k, k), dtype=float)
    for i in range(k):
        for j in range(i + 1, k):
            q_ij = abs(mean_ranks[i] - mean_ranks[j]) / scale * math.sqrt(2.0)
            p_ij = 1.0 - studentized_range_cdf(q_ij, k)
            p[i, j] = p[j, i] = p_ij
    cd = studentized_range_quantile(1.0 - alpha, k) / math.sqrt(2.0) * scale
    return NemenyiResult(p_matrix=p, critical_difference=cd, mean_ranks=fr.mean_ranks)


# ---------------------------------------------------------------------------
# Distribution numerics
# ---------------------------------------------------------------------------

_GAMMA_EPS = 1e-15
_GAMMA_MAX_ITER = 500


def _lower_gamma_series(a: float, x: float) -> float:
    """Regularized lower incomplete gamma P(a, x) by power series (x < a + 1 regime)."""
    term = 1.0 / a
    total = term
    for i in range(1, _GAMMA_MAX_ITER):
        term *= x / (a + i)
        total += term
        if abs(term) < abs(total) * _GAMMA_EPS:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _upper_gamma_cf(a: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(a, x) by Lentz continued fraction."""
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b if b != 0 else 1.0 / tiny
    h = d
    for i in range(1, _GAMMA_MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _GAMMA_EPS:
            break
    return h * math.exp(-x + a * math.log(x) - math.lgamma(a))


def chi2_upper_tail(x: float, df: int) -> float:
    """P(X >= x) for a chi-square variable with df degrees of freedom."""
    if df < 1:
        raise ValidationError(f"degrees of freedom must be positive, got {df}")
    if x < 0:
        raise ValidationError(f"chi-square statistic must be non-negative, got {x}")
    if x == 0.0:
        return 1.0
    a = df / 2.0
    half = x / 2.0
    # series converges fastest left of the mean, continued fraction right of it
    if half < a + 1.0:
        return min(1.0, max(0.0, 1.0 - _lower_gamma_series(a, half)))
    return min(1.0, max(0.0, _upper_gamma_cf(a, half)))


_PHI_SQRT2 = math.sqrt(2.0)


def _phi(z: float) -> float:
    return math.exp(-0.5 * z * z) / math.sqrt(2.0 * math.pi)


def _Phi(z: float) -> float:
    return 0.5 * (1.0 + math.erf(z / _PHI_SQRT2))


_GL_ORDER = 64
_GL_PANEL = 2.0
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(_GL_ORDER)


def studentized_range_cdf(q: float, k: int) -> float:
    """CDF of the studentized range of k standard normals (infinite df).

    F(q; k) = k * int phi(z) * [Phi(z) - Phi(z - q)]^(k-1) dz, integrated by
    fixed-order Gauss-Legendre panels over z in [-8, 8 + q].
    """
    if k < 2:
        raise ValidationError(f"studentized range needs k >= 2 groups, got {k}")
    if q < 0:
        raise ValidationError(f"studentized range statistic must be non-negative, got {q}")
    if q == 0.0:
        return 0.0
    lo, hi = -8.0, 8.0 + q
    n_panels = max(1, int(math.ceil((hi - lo) / _GL_PANEL)))
    total = 0.0
    for p in range(n_panels):
        a = lo + (hi - lo) * p / n_panels
        b = lo + (hi - lo) * (p + 1) / n_panels
        mid = 0.5 * (a + b)
        halfw = 0.5 * (b - a)
        for node, weight in zip(_GL_NODES, _GL_WEIGHTS):
            z = mid + halfw * node
            inner = _Phi(z) - _Phi(z - q)
            if inner <= 0.0:
                continue
            total += weight * halfw * _phi(z) * inner ** (k - 1)
    return min(1.0, k * total)


def studentized_range_quantile(prob: float, k: int, tol: float = 1e-9) -> float:
    """Inverse of studentized_range_cdf in q, by bisection."""
    if not 0.0 < prob < 1.0:
        raise ValidationError(f"quantile probability must lie in (0, 1), got {prob}")
    lo, hi = 0.0, 1.0
    while studentized_range_cdf(hi, k) < prob:
        hi *= 2.0
        if hi > 1e4:
            raise ValidationError("studentized range quantile did not bracket")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if studentized_range_cdf(mid, k) < prob:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
