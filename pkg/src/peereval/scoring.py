"""Segment and system scores from token log-probabilities.

Five aggregation statistics over a segment's token log-probs (sum, mean,
median, min, negated population std-dev), K-sample regularized averaging,
confidence-threshold scoring into {-1, 0, +1}, and the grid search that
tunes the threshold band on development data.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from . import kernels
from .data import TokenScoredSegment
from .errors import ConfigError, DomainError, StructureError


class Aggregation(str, Enum):
    SUM = "sum"
    MEAN = "mean"
    MEDIAN = "median"
    MIN = "min"
    NEG_STD = "negstd"


@dataclass(frozen=True)
class SegmentScore:
    seg_id: int
    value: float

    def __post_init__(self):
        if not np.isfinite(self.value):
            raise DomainError(f"segment {self.seg_id}: non-finite score")


@dataclass(frozen=True)
class SystemScore:
    system_name: str
    lang_pair: str
    value: float
    method: str
    n_segments: int

    def __post_init__(self):
        if self.n_segments < 1:
            raise DomainError("system score over zero segments")
        if not np.isfinite(self.value):
            raise DomainError(f"{self.system_name}: non-finite system score")


def _stats_arrays(segments: Sequence[TokenScoredSegment]):
    offsets = np.zeros(len(segments) + 1, dtype=np.int64)
    for i, seg in enumerate(segments):
        offsets[i + 1] = offsets[i] + len(seg)
    values = np.empty(offsets[-1], dtype=np.float64)
    for i, seg in enumerate(segments):
        values[offsets[i]:offsets[i + 1]] = seg.logprobs
    return values, offsets


def aggregate_segments(segments: Sequence[TokenScoredSegment],
                       method: Aggregation) -> list:
    """Batch aggregation of many segments (single kernel pass)."""
    if not segments:
        return []
    method = Aggregation(method)
    values, offsets = _stats_arrays(segments)
    sums, means, medians, mins, stds = kernels.segment_stats(values, offsets)
    chosen = {
        Aggregation.SUM: sums,
        Aggregation.MEAN: means,
        Aggregation.MEDIAN: medians,
        Aggregation.MIN: mins,
        Aggregation.NEG_STD: -stds,
    }[method]
    return [SegmentScore(seg.seg_id, float(v))
            for seg, v in zip(segments, chosen)]


def aggregate_segment(seg: TokenScoredSegment,
                      method: Aggregation) -> SegmentScore:
    """Aggregate one segment's token log-probs into a scalar score."""
    return aggregate_segments([seg], method)[0]


def mean_token_logprobs(segments: Sequence[TokenScoredSegment]) -> np.ndarray:
    """Per-segment mean token log-prob, ordered like ``segments``."""
    if not segments:
        return np.empty(0)
    values, offsets = _stats_arrays(segments)
    return kernels.segment_stats(values, offsets)[1]


def threshold_value(mean_logprob: float, low: float, high: float) -> int:
    """Map a mean token log-prob to {-1, 0, +1}; boundary values map to 0."""
    if mean_logprob < low:
        return -1
    if mean_logprob > high:
        return 1
    return 0


def threshold_segment(seg: TokenScoredSegment, low: float,
                      high: float) -> SegmentScore:
    """Confidence-threshold score of one segment."""
    if not low < high:
        raise ConfigError(f"thresholds need low < high, got ({low}, {high})")
    m = float(np.mean(seg.logprob_array))
    return SegmentScore(seg.seg_id, float(threshold_value(m, low, high)))


def regularize(samples: Sequence[TokenScoredSegment], mode: str,
               length_normalize: bool = False):
    """Average K scored samples of the same segment.

    ``mode="token"`` requires identical tokenizations across samples and
    returns a smoothed TokenScoredSegment of per-token means. ``mode="segment"``
    permits differing tokenizations and returns a SegmentScore whose value is
    the mean of the samples' segment log-probs; with ``length_normalize`` the
    value is divided by the mean sample length.
    """
    if not samples:
        raise DomainError("no samples to regularize")
    seg_id = samples[0].seg_id
    if any(s.seg_id != seg_id for s in samples):
        raise StructureError("samples mix different seg_ids")
    if mode == "token":
        tokens = samples[0].tokens
        if any(s.tokens != tokens for s in samples):
            raise StructureError(
                f"segment {seg_id}: tokenizations differ across samples; "
                "use segment mode"
            )
        stacked = np.stack([s.logprob_array for s in samples])
        return TokenScoredSegment(seg_id, tokens, stacked.mean(axis=0).tolist())
    if mode == "segment":
        sums = np.array([sum(s.logprobs) for s in samples])
        value = float(sums.mean())
        if length_normalize:
            value /= float(np.mean([len(s) for s in samples]))
        return SegmentScore(seg_id, value)
    raise ConfigError(f"unknown regularization mode {mode!r}")


def system_score(segment_scores: Sequence[SegmentScore], system_name: str,
                 lang_pair: str, method: str) -> SystemScore:
    """System score = arithmetic mean over segment scores."""
    if not segment_scores:
        raise DomainError(f"{system_name}: no segment scores")
    value = float(np.mean([s.value for s in segment_scores]))
    return SystemScore(system_name, lang_pair, value, method,
                       len(segment_scores))


DEFAULT_THRESHOLD_GRID = tuple(np.linspace(-3.0, 0.0, 16))


def tune_thresholds(datasets, grid: Optional[Sequence[float]] = None):
    """Grid-search the threshold band maximizing dev-set correlation.

    Every (low, high) pair with low < high from the grid is scored by the
    weighted average correlation (outlier-filtered Pearson per dataset,
    Fisher-combined with n-system weights). Ties prefer smaller high, then
    larger low. Returns (low, high).
    """
    from .metaeval import fisher_weighted_average, mad_outliers, pearson

    if grid is None:
        grid = DEFAULT_THRESHOLD_GRID
    grid = [float(g) for g in grid]
    if len(grid) < 2:
        raise ConfigError("grid needs at least 2 points")
    if sorted(grid) != grid:
        raise ConfigError("grid must be sorted ascending")

    # Mean token log-probs and outlier-filtered human vectors never change
    # across candidates, so compute them once per dataset.
    prepared = []
    for ds in datasets:
        lp = str(ds.lang_pair)
        human = ds.human.scores_for(lp)
        kept, _ = mad_outliers(human)
        kept = sorted(kept)
        per_system = {}
        for out in ds.systems:
            if out.token_scores is None:
                raise ConfigError(f"{out.system_name}: no token scores loaded")
            per_system[out.system_name] = mean_token_logprobs(out.token_scores)
        h_vec = np.array([human[s] for s in kept])
        prepared.append((kept, per_system, h_vec))

    best = None
    for j, high in enumerate(grid):
        for low in grid[:j]:
            rs = []
            for kept, per_system, h_vec in prepared:
                m_vec = np.array([
                    np.mean([threshold_value(m, low, high)
                             for m in per_system[s]])
                    for s in kept
                ])
                try:
                    rs.append((pearson(m_vec, h_vec), len(kept)))
                except DomainError:
                    continue  # constant metric vector on this candidate
            if not rs:
                continue
            score = fisher_weighted_average(rs)
            # maximize score; tie-break: smaller high, then larger low
            key = (score, -high, low)
            if best is None or key > best[0]:
                best = (key, (low, high))
    if best is None:
        raise ConfigError("no valid (low, high) pair on the grid")
    return best[1]
