"""Synthetic noise benchmark.

Builds a controllable end-to-end fixture: a toy parallel corpus with a
deterministic word-for-word lexicon, plus "MT systems" produced by
corrupting the reference translations with token-replacement noise at
chosen rates. Higher noise means worse output, so scorer quality can be
checked against the known ordering.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .data import HumanJudgments, LanguagePair, SegmentPair, SystemOutput


def _vocabulary(n_words: int, prefix: str) -> list:
    return [f"{prefix}{i:03d}" for i in range(n_words)]


@dataclass(frozen=True)
class NoiseBenchmark:
    """Parallel corpus plus noise-corrupted system outputs."""

    lang_pair: LanguagePair
    sources: tuple          # token lists
    references: tuple       # token lists, aligned with sources
    system_outputs: dict    # system name -> tuple of token lists
    noise_rates: dict       # system name -> rate


def make_noise_benchmark(n_segments: int = 1000,
                         noise_rates: Sequence[float] = (0.0, 0.1, 0.2, 0.3, 0.4, 0.5),
                         vocab_size: int = 60,
                         min_len: int = 4, max_len: int = 14,
                         seed: int = 0) -> NoiseBenchmark:
    """Generate the benchmark corpus and systems.

    Each source token ``s###`` translates deterministically to ``t###``; the
    system at rate r replaces each reference token with a uniformly random
    target-vocabulary token with probability r.
    """
    rng = np.random.default_rng([seed, 2025])
    src_vocab = _vocabulary(vocab_size, "s")
    tgt_vocab = _vocabulary(vocab_size, "t")
    sources, references = [], []
    for _ in range(n_segments):
        length = int(rng.integers(min_len, max_len + 1))
        ids = rng.integers(0, vocab_size, size=length)
        sources.append(tuple(src_vocab[i] for i in ids))
        references.append(tuple(tgt_vocab[i] for i in ids))

    system_outputs = {}
    rates = {}
    for k, rate in enumerate(noise_rates):
        name = f"sys-noise{int(round(rate * 100)):02d}"
        sys_rng = np.random.default_rng([seed, 77, k])
        outputs = []
        for ref in references:
            toks = list(ref)
            for i in range(len(toks)):
                if sys_rng.random() < rate:
                    toks[i] = tgt_vocab[int(sys_rng.integers(0, vocab_size))]
            outputs.append(tuple(toks))
        system_outputs[name] = tuple(outputs)
        rates[name] = float(rate)

    return NoiseBenchmark(
        LanguagePair("xa", "xb"),
        tuple(sources), tuple(references), system_outputs, rates,
    )


def benchmark_system_outputs(bench: NoiseBenchmark) -> list:
    """The benchmark as SystemOutput objects (texts are space-joined)."""
    outputs = []
    for name in sorted(bench.system_outputs):
        segments = tuple(
            SegmentPair(i, " ".join(src), " ".join(out))
            for i, (src, out) in enumerate(
                zip(bench.sources, bench.system_outputs[name]))
        )
        outputs.append(SystemOutput(name, bench.lang_pair, segments))
    return outputs


def benchmark_human_judgments(bench: NoiseBenchmark) -> HumanJudgments:
    """Ground-truth judgments: system score is the negated noise rate."""
    lp = str(bench.lang_pair)
    return HumanJudgments({
        (lp, name): -rate for name, rate in bench.noise_rates.items()
    })


def write_benchmark_files(bench: NoiseBenchmark, directory) -> dict:
    """Write the benchmark as plain-text and TSV files; returns the paths."""
    import os

    os.makedirs(directory, exist_ok=True)
    paths = {}
    src_path = os.path.join(directory, "source.txt")
    with open(src_path, "w", encoding="utf-8", newline="\n") as fh:
        for toks in bench.sources:
            fh.write(" ".join(toks) + "\n")
    paths["source"] = src_path
    ref_path = os.path.join(directory, "reference.txt")
    with open(ref_path, "w", encoding="utf-8", newline="\n") as fh:
        for toks in bench.references:
            fh.write(" ".join(toks) + "\n")
    paths["reference"] = ref_path
    for name in sorted(bench.system_outputs):
        out_path = os.path.join(directory, f"{name}.txt")
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            for toks in bench.system_outputs[name]:
                fh.write(" ".join(toks) + "\n")
        paths[name] = out_path
    lp = str(bench.lang_pair)
    human_path = os.path.join(directory, "human-sys.tsv")
    with open(human_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("lang_pair\tsystem\tscore\n")
        for name in sorted(bench.noise_rates):
            fh.write(f"{lp}\t{name}\t{-bench.noise_rates[name]!r}\n")
    paths["human"] = human_path
    return paths
