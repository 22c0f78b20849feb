"""Feature ranking, workload signatures, and nonparametric tests.

Signatures sum polarity-aligned z-normalized feature values into a single
workload index. The test battery is the Wilcoxon signed-rank test (exact up
to 25 nonzero differences, tie-corrected normal approximation above), a
paired sign-flip bootstrap F-test, and Benjamini-Hochberg FDR adjustment.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from .errors import LabelNotFoundError, ParameterError, ZeroVarianceWarning
from .features import FeatureVector


@dataclass(frozen=True, eq=False)
class FeatureScore:
    """One feature's ANOVA F value; +inf marks zero within-class variance."""

    feature_name: str
    f_value: float

    def __post_init__(self):
        if math.isnan(self.f_value) or self.f_value < 0:
            raise ParameterError(f"f_value must be >= 0, got {self.f_value}")


@dataclass(frozen=True, eq=False)
class SignatureEntry:
    feature_name: str
    polarity: int
    mean: float
    std: float

    def __post_init__(self):
        if self.polarity not in (1, -1):
            raise ParameterError("polarity must be +1 or -1")
        if not self.std > 0:
            raise ParameterError("std must be positive")


@dataclass(frozen=True, eq=False)
class SignatureDef:
    """(feature, polarity, mean, std) entries summed into one scalar index."""

    entries: tuple

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        if not self.entries:
            raise ParameterError("signature needs at least one entry")

    @property
    def feature_names(self) -> tuple:
        return tuple(e.feature_name for e in self.entries)


@dataclass(frozen=True, eq=False)
class TestResult:
    statistic: float
    p_value: float
    method: str
    resamples: int | None = None
    seed: int | None = None
    n_used: int | None = None
    degenerate: bool = False

    def __post_init__(self):
        if not (0.0 <= self.p_value <= 1.0):
            raise ParameterError(f"p-value {self.p_value} outside [0, 1]")


def anova_f_values(X, y) -> np.ndarray:
    """Two-group one-way F statistic per column.

    Zero within-group variance yields 0 when the group means agree and +inf
    when they differ (the sentinel ranks first).
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=int)
    if X.ndim != 2 or len(y) != X.shape[0]:
        raise ParameterError("X must be (n, d) with one label per row")
    g0 = X[y == 0]
    g1 = X[y == 1]
    if g0.shape[0] < 2 or g1.shape[0] < 2:
        raise ParameterError("each class needs at least 2 samples")
    n = X.shape[0]
    grand = X.mean(axis=0)
    m0 = g0.mean(axis=0)
    m1 = g1.mean(axis=0)
    between = g0.shape[0] * (m0 - grand) ** 2 + g1.shape[0] * (m1 - grand) ** 2
    within = ((g0 - m0) ** 2).sum(axis=0) + ((g1 - m1) ** 2).sum(axis=0)
    f = np.empty(X.shape[1])
    zero_within = within == 0
    with np.errstate(divide="ignore", invalid="ignore"):
        f[~zero_within] = between[~zero_within] / (within[~zero_within] / (n - 2))
    f[zero_within & (between == 0)] = 0.0
    f[zero_within & (between > 0)] = np.inf
    return f


def anova_f_scores(X, y, feature_names=None) -> list:
    """Per-feature FeatureScore list, aligned with X's columns."""
    f = anova_f_values(X, y)
    if feature_names is None:
        feature_names = tuple(f"f{i}" for i in range(len(f)))
    if len(feature_names) != len(f):
        raise ParameterError("feature_names must match X columns")
    return [FeatureScore(name, float(v)) for name, v in zip(feature_names, f)]


def top_k_from_percent(d: int, pct: float) -> int:
    """ceil(pct/100 * d), the number of features a percentage keeps."""
    if not (0 < pct <= 100):
        raise ParameterError("pct must be in (0, 100]")
    return min(d, max(1, math.ceil(pct * d / 100.0 - 1e-9)))


def _ranked_indices(scores) -> list:
    return sorted(range(len(scores)), key=lambda i: (-scores[i].f_value, i))


def select_top_percent(scores, pct: float) -> list:
    """Names of the top ceil(pct/100 * d) features by F, ties by input order."""
    scores = list(scores)
    if not scores:
        raise ParameterError("empty score list")
    k = top_k_from_percent(len(scores), pct)
    return [scores[i].feature_name for i in _ranked_indices(scores)[:k]]


def build_signature(X, y, scores, k: int = 5) -> SignatureDef:
    """Top-k features by score, stored with pooled mean/std and polarity.

    Polarity is sign(mean over HIGH - mean over LOW), +1 at zero difference,
    so the signature increases with workload on the build data. Zero-variance
    features are skipped with a ZeroVarianceWarning and the next-ranked
    feature is promoted.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=int)
    scores = list(scores)
    if X.ndim != 2 or X.shape[1] != len(scores):
        raise ParameterError("scores must align with X's columns")
    if k < 1 or k > len(scores):
        raise ParameterError(f"k must be in [1, {len(scores)}]")
    if not (np.any(y == 0) and np.any(y == 1)):
        raise ParameterError("both classes must be present")
    entries = []
    for idx in _ranked_indices(scores):
        if len(entries) == k:
            break
        col = X[:, idx]
        std = float(col.std())
        if std == 0:
            warnings.warn(
                f"feature {scores[idx].feature_name!r} has zero variance; "
                "promoting the next-ranked feature",
                ZeroVarianceWarning,
                stacklevel=2,
            )
            continue
        diff = float(col[y == 1].mean() - col[y == 0].mean())
        entries.append(
            SignatureEntry(
                feature_name=scores[idx].feature_name,
                polarity=1 if diff >= 0 else -1,
                mean=float(col.mean()),
                std=std,
            )
        )
    if len(entries) < k:
        raise ParameterError(
            f"only {len(entries)} usable features available for a k={k} signature"
        )
    return SignatureDef(entries=tuple(entries))


def _feature_lookup(vector, name: str) -> float:
    if isinstance(vector, FeatureVector):
        return vector.value(name)
    try:
        return float(vector[name])
    except (KeyError, IndexError):
        raise LabelNotFoundError(f"feature {name!r} not in vector") from None


def signature_value(sig: SignatureDef, vector) -> float:
    """Sum of polarity * (value - mean) / std over the signature's entries."""
    return float(
        sum(
            e.polarity * (_feature_lookup(vector, e.feature_name) - e.mean) / e.std
            for e in sig.entries
        )
    )


def literature_signature(vector) -> float:
    """Fz delta + Fz theta - Fz alpha band power."""
    return (
        _feature_lookup(vector, "bp_delta_Fz")
        + _feature_lookup(vector, "bp_theta_Fz")
        - _feature_lookup(vector, "bp_alpha_Fz")
    )


def _exact_signed_rank_p(ranks: np.ndarray, w_plus: float) -> float:
    # doubled ranks are integers even with ties (average ranks end in .5)
    r2 = np.rint(2.0 * ranks).astype(np.int64)
    total2 = int(r2.sum())
    counts = np.zeros(total2 + 1)
    counts[0] = 1.0
    for r in r2:
        shifted = np.zeros_like(counts)
        shifted[r:] = counts[: len(counts) - r]
        counts = counts + shifted
    observed2 = int(round(2.0 * w_plus))
    sums2 = np.arange(total2 + 1)
    extreme = np.abs(2 * sums2 - total2) >= abs(2 * observed2 - total2)
    return float(min(counts[extreme].sum() / 2.0 ** len(r2), 1.0))


def wilcoxon_signed_rank(a, b) -> TestResult:
    """Two-sided Wilcoxon signed-rank test on paired values.

    Zero differences are dropped. With at most 25 nonzero differences the p
    comes from exact enumeration of all sign assignments (via the rank-sum
    distribution); larger samples use the normal approximation with tie and
    continuity corrections. The statistic is the positive-rank sum W+.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise ParameterError("a and b must be 1-D arrays of equal length")
    d = a - b
    d = d[d != 0]
    m = len(d)
    if m == 0:
        return TestResult(
            statistic=0.0,
            p_value=1.0,
            method="wilcoxon-signed-rank",
            n_used=0,
            degenerate=True,
        )
    ranks = rankdata(np.abs(d))
    w_plus = float(ranks[d > 0].sum())
    if m <= 25:
        p = _exact_signed_rank_p(ranks, w_plus)
    else:
        mean = m * (m + 1) / 4.0
        _, tie_counts = np.unique(np.abs(d), return_counts=True)
        var = m * (m + 1) * (2 * m + 1) / 24.0 - np.sum(
            tie_counts**3 - tie_counts
        ) / 48.0
        if var <= 0:
            return TestResult(
                statistic=w_plus,
                p_value=1.0,
                method="wilcoxon-signed-rank",
                n_used=m,
                degenerate=True,
            )
        z = max(abs(w_plus - mean) - 0.5, 0.0) / math.sqrt(var)
        p = min(1.0, math.erfc(z / math.sqrt(2.0)))
    return TestResult(
        statistic=w_plus, p_value=p, method="wilcoxon-signed-rank", n_used=m
    )


def paired_bootstrap_f_test(a, b, resamples: int = 10000, seed: int = 0) -> TestResult:
    """Sign-flip bootstrap of the paired F statistic (t squared).

    Differences are sorted up front, so the statistic and p are invariant
    under pair reordering at the same seed. p uses the add-one rule
    (1 + #{F* >= F_obs}) / (1 + resamples).
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise ParameterError("a and b must be 1-D arrays of equal length")
    n = len(a)
    if n < 2:
        raise ParameterError("need at least 2 pairs")
    if resamples < 1:
        raise ParameterError("resamples must be >= 1")
    # sorting fixes the summation order, so the observed statistic and the
    # resampled null are both invariant under pair reordering
    d = np.sort(a - b)
    mean = float(d.mean())
    sd = float(d.std(ddof=1))
    if sd == 0:
        if mean == 0:
            return TestResult(
                statistic=0.0,
                p_value=1.0,
                method="paired-bootstrap-f",
                resamples=resamples,
                seed=seed,
                degenerate=True,
            )
        return TestResult(
            statistic=math.inf,
            p_value=1.0 / (1.0 + resamples),
            method="paired-bootstrap-f",
            resamples=resamples,
            seed=seed,
            degenerate=True,
        )
    f_obs = (mean / (sd / math.sqrt(n))) ** 2
    rng = np.random.default_rng(seed)
    signs = rng.integers(0, 2, size=(resamples, n)) * 2 - 1
    flipped = signs * d[None, :]
    means = flipped.mean(axis=1)
    sds = flipped.std(axis=1, ddof=1)
    f_null = np.empty(resamples)
    ok = sds > 0
    f_null[ok] = (means[ok] / (sds[ok] / math.sqrt(n))) ** 2
    f_null[~ok] = np.where(means[~ok] == 0, 0.0, np.inf)
    count = int(np.sum(f_null >= f_obs))
    return TestResult(
        statistic=float(f_obs),
        p_value=(1.0 + count) / (1.0 + resamples),
        method="paired-bootstrap-f",
        resamples=resamples,
        seed=seed,
    )


def benjamini_hochberg(p_values) -> np.ndarray:
    """Step-up FDR adjustment, returned in the input order.

    q_(i) = min over j >= i of p_(j) * m / j, clipped to 1.
    """
    p = np.asarray(p_values, dtype=float)
    if p.ndim != 1:
        raise ParameterError("p_values must be 1-D")
    if len(p) == 0:
        return np.array([])
    if np.any(np.isnan(p)) or np.any(p < 0) or np.any(p > 1):
        raise ParameterError("p-values must lie in [0, 1]")
    m = len(p)
    order = np.argsort(p, kind="stable")
    scaled = p[order] * m / np.arange(1, m + 1)
    adjusted_sorted = np.minimum.accumulate(scaled[::-1])[::-1]
    adjusted_sorted = np.minimum(adjusted_sorted, 1.0)
    out = np.empty(m)
    out[order] = adjusted_sorted
    return out
