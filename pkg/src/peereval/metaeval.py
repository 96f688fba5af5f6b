"""Meta-evaluation of metric scores against human judgments.

Median-absolute-deviation outlier filtering, Pearson correlation, Fisher
Z-transformed weighted averaging across language pairs, the Williams/Steiger
test for the difference of two correlations sharing the human variable,
pairwise system comparisons (rank-sum on human, paired t on metric), and
test-set-size subsampling curves.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Dict, Mapping, Optional, Sequence, Tuple

import numpy as np
from scipy import stats as scipy_stats

from .data import lang_pair_group
from .errors import DomainError, InsufficientDataError

MAD_SCALE = 1.483  # normal-consistency constant for the MAD
MAD_CUTOFF = 2.5
GROUPS = ("all", "en-xx", "xx-en", "xx-yy")

# Correlations are clamped this close to +/-1 before the Fisher transform.
FISHER_CLAMP = 1.0 - 1e-15

# Minimum post-filter systems for a pair to enter weighted averages and for
# the correlation-difference test (which needs n - 3 > 0).
MIN_RELIABLE_SYSTEMS = 4


def mad_outliers(human_scores: Mapping[str, float]) -> Tuple[set, set]:
    """Split systems into (kept, outliers) by scaled MAD distance from the
    median.

    A system is an outlier iff |h - median| / (1.483 * MAD) > 2.5. When the
    MAD is zero, any nonzero deviation counts as an outlier.
    """
    if not human_scores:
        raise DomainError("no human scores")
    names = sorted(human_scores)
    values = np.array([human_scores[n] for n in names], dtype=np.float64)
    med = np.median(values)
    deviations = np.abs(values - med)
    mad = np.median(deviations)
    if mad == 0.0:
        mask = deviations > 0.0
    else:
        mask = deviations / (MAD_SCALE * mad) > MAD_CUTOFF
    outliers = {n for n, bad in zip(names, mask) if bad}
    return set(names) - outliers, outliers


def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    """Product-moment correlation; raises on zero variance."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise DomainError("pearson needs two equal-length vectors")
    if len(x) < 2:
        raise DomainError(f"pearson needs n >= 2, got {len(x)}")
    xc = x - x.mean()
    yc = y - y.mean()
    denom = math.sqrt(float(xc @ xc) * float(yc @ yc))
    if denom == 0.0:
        raise DomainError("undefined correlation: zero variance input")
    return float(np.clip(float(xc @ yc) / denom, -1.0, 1.0))


def fisher_weighted_average(results: Sequence[Tuple[float, float]]) -> float:
    """tanh of the weighted mean of atanh-transformed correlations.

    ``results`` holds (r, weight) pairs with positive weights; |r| = 1 is
    clamped just inside the open interval with a warning.
    """
    if not results:
        raise DomainError("no correlations to average")
    num = 0.0
    den = 0.0
    for r, w in results:
        if w <= 0:
            raise DomainError(f"non-positive weight {w}")
        if abs(r) > 1.0:
            raise DomainError(f"correlation {r} outside [-1, 1]")
        if abs(r) >= FISHER_CLAMP:
            warnings.warn(f"correlation {r} clamped before Fisher transform")
            r = math.copysign(FISHER_CLAMP, r)
        num += w * math.atanh(r)
        den += w
    return math.tanh(num / den)


def williams_test(r1h: float, r2h: float, r12: float, n: int,
                  tails: int = 1) -> Tuple[float, float]:
    """Significance of the difference between two correlations with a shared
    variable (the human scores).

    Returns (t, p) with n - 3 degrees of freedom; positive t favors the
    first correlation. ``tails`` selects one- or two-tailed p.
    """
    if tails not in (1, 2):
        raise DomainError(f"tails must be 1 or 2, got {tails}")
    if n < MIN_RELIABLE_SYSTEMS:
        raise InsufficientDataError(f"need n >= 4 systems, got {n}")
    for r in (r1h, r2h, r12):
        if abs(r) > 1.0:
            raise DomainError(f"correlation {r} outside [-1, 1]")
    if r1h == r2h:
        # symmetric null; defined even when the matrix degenerates (r12 = 1)
        return 0.0, 0.5 if tails == 1 else 1.0
    det = 1.0 - r12 ** 2 - r1h ** 2 - r2h ** 2 + 2.0 * r12 * r1h * r2h
    if det <= 0.0:
        raise InsufficientDataError(
            f"degenerate correlation matrix (determinant {det:.3g})"
        )
    rbar = 0.5 * (r1h + r2h)
    denom = math.sqrt(2.0 * det * (n - 1) / (n - 3)
                      + rbar ** 2 * (1.0 - r12) ** 3)
    t = (r1h - r2h) * math.sqrt((n - 1) * (1.0 + r12)) / denom
    df = n - 3
    if tails == 1:
        p = float(scipy_stats.t.sf(t, df))
    else:
        p = float(2.0 * scipy_stats.t.sf(abs(t), df))
    return t, p


# ---------------------------------------------------------------------------
# Two-sample tests for pairwise system comparison
# ---------------------------------------------------------------------------

# Largest per-sample size for which the rank-sum test uses the exact null
# distribution (only without ties; midranks have no exact distribution).
EXACT_RANKSUM_MAX_N = 25


def wilcoxon_ranksum(x: Sequence[float], y: Sequence[float]) -> Tuple[float, float]:
    """Two-sided Wilcoxon rank-sum test.

    Returns (W, p) where W is the rank sum of ``x`` with midranks. Small
    untied samples (both n <= 25) get the exact null distribution; otherwise
    the tie-corrected normal approximation without continuity correction.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if len(x) == 0 or len(y) == 0:
        raise DomainError("rank-sum test needs nonempty samples")
    n1, n2 = len(x), len(y)
    combined = np.concatenate([x, y])
    ranks = scipy_stats.rankdata(combined)
    w = float(ranks[:n1].sum())

    has_ties = len(np.unique(combined)) != len(combined)
    if not has_ties and n1 <= EXACT_RANKSUM_MAX_N and n2 <= EXACT_RANKSUM_MAX_N:
        res = scipy_stats.mannwhitneyu(x, y, alternative="two-sided",
                                       method="exact")
        return w, float(res.pvalue)

    mean_w = n1 * (n1 + n2 + 1) / 2.0
    _, tie_counts = np.unique(combined, return_counts=True)
    n = n1 + n2
    tie_term = float(((tie_counts ** 3 - tie_counts).sum()) / (n * (n - 1)))
    var_w = n1 * n2 / 12.0 * ((n + 1) - tie_term)
    if var_w <= 0.0:
        return w, 1.0  # all observations identical
    z = (w - mean_w) / math.sqrt(var_w)
    return w, float(2.0 * scipy_stats.norm.sf(abs(z)))


def paired_ttest(x: Sequence[float], y: Sequence[float]) -> Tuple[float, float]:
    """Two-sided paired t-test on per-segment differences.

    Degenerate cases: identical vectors give (0, 1); a constant nonzero
    difference gives (+/-inf, 0).
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or len(x) < 2:
        raise DomainError("paired t-test needs equal-length samples, n >= 2")
    d = x - y
    mean = float(d.mean())
    sd = float(d.std(ddof=1))
    if sd == 0.0:
        if mean == 0.0:
            return 0.0, 1.0
        return math.copysign(math.inf, mean), 0.0
    t = mean / (sd / math.sqrt(len(d)))
    return t, float(2.0 * scipy_stats.t.sf(abs(t), len(d) - 1))


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CorrelationResult:
    lang_pair: str
    r: float
    n_systems: int
    outliers: tuple

    @property
    def reliable(self) -> bool:
        return self.n_systems >= MIN_RELIABLE_SYSTEMS


@dataclass(frozen=True)
class MetricReport:
    per_pair: tuple
    weighted_average: Optional[float]
    group_averages: dict

    def result_for(self, lang_pair: str) -> Optional[CorrelationResult]:
        for res in self.per_pair:
            if res.lang_pair == lang_pair:
                return res
        return None


def correlate_pair(human_scores: Mapping[str, float],
                   metric_scores: Mapping[str, float],
                   lang_pair: str) -> CorrelationResult:
    """Outlier-filtered Pearson correlation for one language pair."""
    kept, outliers = mad_outliers(human_scores)
    kept = sorted(kept)
    missing = [s for s in kept if s not in metric_scores]
    if missing:
        raise InsufficientDataError(
            f"{lang_pair}: no metric score for " + ", ".join(missing)
        )
    h = [human_scores[s] for s in kept]
    m = [metric_scores[s] for s in kept]
    return CorrelationResult(lang_pair, pearson(m, h), len(kept),
                             tuple(sorted(outliers)))


def metric_report(human_scores_by_pair: Mapping[str, Mapping[str, float]],
                  metric_scores: Mapping[Tuple[str, str], float]) -> MetricReport:
    """Per-pair outlier-filtered correlations plus group averages.

    ``human_scores_by_pair`` maps lang_pair -> {system: human score};
    ``metric_scores`` maps (lang_pair, system) -> metric score. Averages are
    Fisher-combined with n-system weights over the reliable pairs (>= 4 kept
    systems).
    """
    per_pair = []
    for lp in sorted(human_scores_by_pair):
        metric_lp = {
            system: score
            for (pair, system), score in metric_scores.items() if pair == lp
        }
        per_pair.append(correlate_pair(human_scores_by_pair[lp], metric_lp, lp))

    def average(results):
        usable = [(res.r, float(res.n_systems)) for res in results
                  if res.reliable]
        return fisher_weighted_average(usable) if usable else None

    group_averages = {"all": average(per_pair)}
    for group in GROUPS[1:]:
        group_averages[group] = average(
            [res for res in per_pair if lang_pair_group(res.lang_pair) == group]
        )
    return MetricReport(tuple(per_pair), group_averages["all"], group_averages)


@dataclass(frozen=True)
class WilliamsComparison:
    lang_pair: str
    r_first: float
    r_second: float
    r_between: float
    n_systems: int
    t: float
    p: float


def compare_metrics(human_scores_by_pair: Mapping[str, Mapping[str, float]],
                    first_scores: Mapping[Tuple[str, str], float],
                    second_scores: Mapping[Tuple[str, str], float],
                    tails: int = 1) -> list:
    """Williams-test comparison of two metrics on every language pair."""
    comparisons = []
    for lp in sorted(human_scores_by_pair):
        human = human_scores_by_pair[lp]
        kept, _ = mad_outliers(human)
        kept = sorted(kept)
        if len(kept) < MIN_RELIABLE_SYSTEMS:
            continue
        h = [human[s] for s in kept]
        a = [first_scores[(lp, s)] for s in kept]
        b = [second_scores[(lp, s)] for s in kept]
        r1h, r2h, r12 = pearson(a, h), pearson(b, h), pearson(a, b)
        t, p = williams_test(r1h, r2h, r12, len(kept), tails=tails)
        comparisons.append(
            WilliamsComparison(lp, r1h, r2h, r12, len(kept), t, p)
        )
    return comparisons


# ---------------------------------------------------------------------------
# Pairwise system comparison
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PairDecision:
    system_a: str
    system_b: str
    human_significant: bool
    metric_significant: bool
    agree: bool  # sign of metric difference matches sign of human difference


@dataclass(frozen=True)
class PairwiseTally:
    """Six-way tally of pairwise ranking decisions (Human-S/NS x C/IC/NS)."""

    sig_correct: int = 0
    sig_incorrect: int = 0
    sig_metric_ns: int = 0
    ns_correct: int = 0
    ns_incorrect: int = 0
    ns_metric_ns: int = 0

    @property
    def total(self) -> int:
        return (self.sig_correct + self.sig_incorrect + self.sig_metric_ns
                + self.ns_correct + self.ns_incorrect + self.ns_metric_ns)

    def __add__(self, other: "PairwiseTally") -> "PairwiseTally":
        return PairwiseTally(
            self.sig_correct + other.sig_correct,
            self.sig_incorrect + other.sig_incorrect,
            self.sig_metric_ns + other.sig_metric_ns,
            self.ns_correct + other.ns_correct,
            self.ns_incorrect + other.ns_incorrect,
            self.ns_metric_ns + other.ns_metric_ns,
        )


def pairwise_decisions(metric_segment_scores: Mapping[str, Sequence[float]],
                       human_segment_scores: Mapping[str, Sequence[float]],
                       alpha: float = 0.05) -> list:
    """Per-pair ranking decisions over all unordered system pairs.

    Human significance comes from the two-sided rank-sum test on the two
    systems' human segment scores; metric significance from the two-sided
    paired t-test on per-segment metric differences. Scores must be aligned
    on the same segments across systems.
    """
    systems = sorted(metric_segment_scores)
    if sorted(human_segment_scores) != systems:
        raise InsufficientDataError(
            "metric and human segment scores cover different systems"
        )
    if len(systems) < 2:
        raise DomainError("pairwise comparison needs >= 2 systems")
    lengths = {len(metric_segment_scores[s]) for s in systems}
    lengths |= {len(human_segment_scores[s]) for s in systems}
    if len(lengths) != 1:
        raise InsufficientDataError("segment score vectors differ in length")

    decisions = []
    for i, sys_a in enumerate(systems):
        for sys_b in systems[i + 1:]:
            h_a = np.asarray(human_segment_scores[sys_a], dtype=np.float64)
            h_b = np.asarray(human_segment_scores[sys_b], dtype=np.float64)
            m_a = np.asarray(metric_segment_scores[sys_a], dtype=np.float64)
            m_b = np.asarray(metric_segment_scores[sys_b], dtype=np.float64)
            _, human_p = wilcoxon_ranksum(h_a, h_b)
            _, metric_p = paired_ttest(m_a, m_b)
            human_sign = np.sign(h_a.mean() - h_b.mean())
            metric_sign = np.sign(m_a.mean() - m_b.mean())
            decisions.append(PairDecision(
                sys_a, sys_b,
                human_significant=bool(human_p < alpha),
                metric_significant=bool(metric_p < alpha),
                agree=bool(human_sign == metric_sign),
            ))
    return decisions


def pairwise_compare(metric_segment_scores, human_segment_scores,
                     alpha: float = 0.05) -> PairwiseTally:
    """Tally pairwise ranking decisions into the six-way table."""
    tally = PairwiseTally()
    for dec in pairwise_decisions(metric_segment_scores,
                                  human_segment_scores, alpha):
        if dec.human_significant:
            if not dec.metric_significant:
                add = PairwiseTally(sig_metric_ns=1)
            elif dec.agree:
                add = PairwiseTally(sig_correct=1)
            else:
                add = PairwiseTally(sig_incorrect=1)
        else:
            if not dec.metric_significant:
                add = PairwiseTally(ns_metric_ns=1)
            elif dec.agree:
                add = PairwiseTally(ns_correct=1)
            else:
                add = PairwiseTally(ns_incorrect=1)
        tally = tally + add
    return tally


# ---------------------------------------------------------------------------
# Test-set-size analysis
# ---------------------------------------------------------------------------

def subsample_correlations(human_scores: Mapping[str, float],
                           metric_segment_scores: Mapping[str, Sequence[float]],
                           sizes: Sequence[int], draws: int = 10,
                           seed: int = 0) -> Dict[int, float]:
    """Mean outlier-filtered correlation at each subsampled test-set size.

    For every size, ``draws`` segment subsets are drawn without replacement
    (seed derived per (seed, size, draw), so draws are order-independent),
    system scores are recomputed as subset means, and the Pearson correlation
    with the human scores is averaged over draws.
    """
    kept, _ = mad_outliers(human_scores)
    kept = sorted(kept)
    missing = [s for s in kept if s not in metric_segment_scores]
    if missing:
        raise InsufficientDataError(
            "no metric segment scores for " + ", ".join(missing)
        )
    if draws < 1:
        raise DomainError(f"draws must be >= 1, got {draws}")
    matrix = np.stack([np.asarray(metric_segment_scores[s], dtype=np.float64)
                       for s in kept])
    n_segments = matrix.shape[1]
    h = np.array([human_scores[s] for s in kept])
    result = {}
    for size in sizes:
        size = int(size)
        if not 1 <= size <= n_segments:
            raise DomainError(
                f"subset size {size} outside [1, {n_segments}]"
            )
        rs = []
        for draw in range(draws):
            rng = np.random.default_rng([seed, size, draw])
            idx = rng.choice(n_segments, size=size, replace=False)
            rs.append(pearson(matrix[:, idx].mean(axis=1), h))
        result[size] = float(np.mean(rs))
    return result
