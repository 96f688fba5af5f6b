"""Unigram-LM subword segmentation: n-best search, temperature sampling,
and a small self-contained trainer.

The n-best search is exact beam-per-prefix dynamic programming: the i-th
best path into any prefix extends one of the top-i paths into a shorter
prefix, so per-prefix hypothesis lists of size n yield the true global
top-n for additive scores.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import ConfigError, CoverageError, DomainError, ParseError


@dataclass(frozen=True)
class Segmentation:
    pieces: tuple
    score: float

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple(self.pieces))

    def text(self) -> str:
        return "".join(self.pieces)


@dataclass(frozen=True)
class UnigramSubwordModel:
    """Subword vocabulary with unigram log-probabilities (nats)."""

    vocab: dict

    def __post_init__(self):
        vocab = dict(self.vocab)
        if not vocab:
            raise DomainError("empty subword vocabulary")
        total = 0.0
        for piece, logp in vocab.items():
            if not piece:
                raise DomainError("empty piece in vocabulary")
            if logp > 0.0 or not math.isfinite(logp):
                raise DomainError(f"piece {piece!r} has log-prob {logp} > 0")
            total += math.exp(logp)
        if total > 1.0 + 1e-6:
            raise DomainError(f"vocabulary probabilities sum to {total} > 1")
        object.__setattr__(self, "vocab", vocab)
        object.__setattr__(self, "max_piece_len",
                           max(len(p) for p in vocab))

    def __contains__(self, piece: str) -> bool:
        return piece in self.vocab


def nbest_segmentations(model: UnigramSubwordModel, text: str,
                        n: int) -> list:
    """Up to n distinct segmentations of ``text``, best score first."""
    if n < 1:
        raise ConfigError(f"n must be >= 1, got {n}")
    if not text:
        raise DomainError("cannot segment empty text")
    vocab = model.vocab
    max_len = model.max_piece_len
    # ends[i] holds up to n (score, pieces) hypotheses covering text[:i]
    ends = [[] for _ in range(len(text) + 1)]
    ends[0].append((0.0, ()))
    for i in range(1, len(text) + 1):
        cands = []
        for j in range(max(0, i - max_len), i):
            piece = text[j:i]
            logp = vocab.get(piece)
            if logp is None:
                continue
            for score, pieces in ends[j]:
                cands.append((score + logp, pieces + (piece,)))
        if cands:
            cands.sort(key=lambda sp: (-sp[0], sp[1]))
            ends[i] = cands[:n]
        elif i <= len(text):
            # keep going: a longer piece may still bridge this position
            ends[i] = []
    final = ends[len(text)]
    if not final:
        bad = next((ch for ch in text if ch not in vocab), None)
        detail = f"character {bad!r} not in vocabulary" if bad else "no path"
        raise CoverageError(f"cannot segment {text!r}: {detail}")
    return [Segmentation(pieces, score) for score, pieces in final]


def viterbi_segmentation(model: UnigramSubwordModel, text: str) -> Segmentation:
    return nbest_segmentations(model, text, 1)[0]


def sample_segmentation(model: UnigramSubwordModel, text: str, n: int = 10,
                        alpha: float = 1.0, seed: Optional[int] = None,
                        rng: Optional[np.random.Generator] = None) -> Segmentation:
    """Sample from the n-best list with weights exp(alpha * score).

    alpha = 0 is uniform over the list; large alpha collapses to the top
    segmentation. Deterministic given ``seed`` (or a caller-owned ``rng``).
    """
    if alpha < 0:
        raise ConfigError(f"alpha must be >= 0, got {alpha}")
    candidates = nbest_segmentations(model, text, n)
    if rng is None:
        rng = np.random.default_rng(seed)
    weights = alpha * np.array([c.score for c in candidates])
    weights -= weights.max()
    probs = np.exp(weights)
    probs /= probs.sum()
    return candidates[int(rng.choice(len(candidates), p=probs))]


def segmentation_probabilities(model: UnigramSubwordModel, text: str,
                               n: int = 10, alpha: float = 1.0) -> list:
    """The (segmentation, probability) pairs sample_segmentation draws from."""
    candidates = nbest_segmentations(model, text, n)
    weights = alpha * np.array([c.score for c in candidates])
    weights -= weights.max()
    probs = np.exp(weights)
    probs /= probs.sum()
    return list(zip(candidates, probs.tolist()))


# ---------------------------------------------------------------------------
# Training
# ---------------------------------------------------------------------------

def _substring_counts(corpus: Sequence[str], max_piece_len: int) -> Counter:
    counts = Counter()
    for line in corpus:
        for i in range(len(line)):
            for ln in range(1, min(max_piece_len, len(line) - i) + 1):
                counts[line[i:i + ln]] += 1
    return counts


def _viterbi_with_vocab(vocab: dict, max_len: int, text: str,
                        skip_full_span: Optional[str] = None):
    """Best segmentation (pieces, score) under a raw vocab dict.

    ``skip_full_span`` forbids covering the whole text with that one piece
    (used to price a piece's removal during pruning).
    """
    neg_inf = -math.inf
    best = [neg_inf] * (len(text) + 1)
    back = [None] * (len(text) + 1)
    best[0] = 0.0
    for i in range(1, len(text) + 1):
        for j in range(max(0, i - max_len), i):
            piece = text[j:i]
            if piece == skip_full_span and j == 0 and i == len(text):
                continue
            logp = vocab.get(piece)
            if logp is None or best[j] == neg_inf:
                continue
            score = best[j] + logp
            if score > best[i]:
                best[i] = score
                back[i] = j
    if best[len(text)] == neg_inf:
        return None, neg_inf
    pieces = []
    i = len(text)
    while i > 0:
        j = back[i]
        pieces.append(text[j:i])
        i = j
    pieces.reverse()
    return pieces, best[len(text)]


# Probability assigned to characters the Viterbi pass stopped using; keeps
# every string segmentable without disturbing the ML estimates of used pieces.
_CHAR_FLOOR_LOGP = math.log(1e-100)


def train_unigram(corpus: Sequence[str], vocab_size: int, rounds: int = 10,
                  max_piece_len: int = 8, min_count: int = 2,
                  return_history: bool = False):
    """Train a unigram subword model by Viterbi EM with utility pruning.

    Seeds the vocabulary with all substrings up to ``max_piece_len`` seen at
    least ``min_count`` times plus every character, then alternates Viterbi
    re-segmentation and count re-estimation, pruning the lowest-utility
    pieces each round until ``vocab_size`` is reached. Characters are never
    pruned. With ``return_history`` also returns a list of per-round
    ``(viterbi_loglik, n_pruned)`` entries.
    """
    corpus = [line for line in corpus if line]
    if not corpus:
        raise DomainError("empty training corpus")
    alphabet = sorted({ch for line in corpus for ch in line})
    if vocab_size < len(alphabet):
        raise ConfigError(
            f"vocab_size {vocab_size} below alphabet size {len(alphabet)}"
        )

    counts = _substring_counts(corpus, max_piece_len)
    pieces = {p for p, c in counts.items() if len(p) == 1 or c >= min_count}
    pieces.update(alphabet)
    # keep the seed bounded; characters always survive
    cap = max(vocab_size * 10, 1000)
    if len(pieces) > cap:
        multi = sorted((p for p in pieces if len(p) > 1),
                       key=lambda p: (-counts[p], p))
        pieces = set(alphabet) | set(multi[:cap - len(alphabet)])

    total = sum(counts[p] for p in pieces)
    vocab = {p: math.log(counts[p] / total) for p in sorted(pieces)}

    history = []
    for rnd in range(rounds):
        max_len = max(len(p) for p in vocab)
        # E-step: Viterbi-segment the corpus, collect piece counts
        piece_counts = Counter()
        for line in corpus:
            segs, _ = _viterbi_with_vocab(vocab, max_len, line)
            piece_counts.update(segs)
        used_total = sum(piece_counts.values())
        new_vocab = {}
        for p in vocab:
            c = piece_counts[p]
            if c > 0:
                new_vocab[p] = math.log(c / used_total)
            elif len(p) == 1:
                new_vocab[p] = _CHAR_FLOOR_LOGP
            # unused multi-character pieces drop out here
        vocab = new_vocab

        # Pruning: walk down to vocab_size on a linear schedule
        n_pruned = 0
        excess = len(vocab) - vocab_size
        if excess > 0:
            if rnd == rounds - 1:
                quota = excess
            else:
                quota = math.ceil(excess * 0.5)
            max_len = max(len(p) for p in vocab)
            utilities = []
            for p in vocab:
                if len(p) == 1:
                    continue
                _, alt = _viterbi_with_vocab(vocab, max_len, p,
                                             skip_full_span=p)
                loss = piece_counts[p] * (vocab[p] - alt)
                utilities.append((loss, piece_counts[p], p))
            utilities.sort()
            for _, _, p in utilities[:quota]:
                del vocab[p]
                n_pruned += 1

        max_len = max(len(p) for p in vocab)
        ll = 0.0
        for line in corpus:
            _, score = _viterbi_with_vocab(vocab, max_len, line)
            ll += score
        history.append((ll, n_pruned))

    model = UnigramSubwordModel(vocab)
    if return_history:
        return model, history
    return model


def corpus_viterbi_loglik(model: UnigramSubwordModel,
                          corpus: Iterable[str]) -> float:
    return sum(viterbi_segmentation(model, line).score
               for line in corpus if line)


# ---------------------------------------------------------------------------
# Model files: TSV piece<TAB>logprob
# ---------------------------------------------------------------------------

def save_unigram_model(model: UnigramSubwordModel, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for piece in sorted(model.vocab):
            if "\t" in piece or "\n" in piece:
                raise DomainError(f"piece {piece!r} not representable in TSV")
            fh.write(f"{piece}\t{model.vocab[piece]!r}\n")


def load_unigram_model(path) -> UnigramSubwordModel:
    vocab = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            raw = raw.rstrip("\n")
            if not raw:
                continue
            fields = raw.split("\t")
            if len(fields) != 2:
                raise ParseError("expected piece<TAB>logprob", path, lineno)
            try:
                vocab[fields[0]] = float(fields[1])
            except ValueError as exc:
                raise ParseError(f"bad log-prob {fields[1]!r}", path,
                                 lineno) from exc
    return UnigramSubwordModel(vocab)
