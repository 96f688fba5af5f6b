"""Command-line interface.

Subcommands wire ingestion -> scoring -> meta-evaluation:

  score            token-score files -> system score TSV
  meta-eval        metric scores vs human judgments, per-pair + group report
  pairwise         pairwise ranking agreement tally
  outliers         per-pair outlier systems under the MAD filter
  bleu / chrf      corpus metrics over plain-text files
  cross-bleu       proximity between system outputs (pair or matrix)
  subsample        correlation versus test-set size
  tune-thresholds  grid search for the confidence-threshold band
  subword          train / nbest / sample for the unigram segmenter
  toy-scorer       train / score for the lexical-table scorer

Everything is deterministic for a fixed seed; machine-readable outputs keep
full float precision, printed tables use 3 decimals.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Optional

import numpy as np

from . import metaeval, model1, ngram, scoring, subword
from .data import (
    HumanJudgments,
    LanguagePair,
    SegmentPair,
    SystemOutput,
    load_human_scores,
    load_token_scores,
    read_lines_with_ids,
    write_token_scores,
)
from .errors import (
    AlignmentError,
    ConfigError,
    DomainError,
    ParseError,
    PeerEvalError,
)


def _read_text(path) -> list:
    return [text for _, text in read_lines_with_ids(path)]


def _open_out(path):
    if path is None:
        return sys.stdout
    return open(path, "w", encoding="utf-8", newline="\n")


def _write_rows(path, header, rows):
    out = _open_out(path)
    try:
        out.write("\t".join(header) + "\n")
        for row in rows:
            out.write("\t".join(str(c) for c in row) + "\n")
    finally:
        if out is not sys.stdout:
            out.close()


def read_scores_tsv(path) -> dict:
    """Read a metric-score TSV with named columns into {(lp, system): score}.

    Accepts any column order as long as the header names lang_pair, system,
    and score.
    """
    scores = {}
    with open(path, encoding="utf-8") as fh:
        header = None
        for lineno, raw in enumerate(fh, start=1):
            raw = raw.rstrip("\n")
            if not raw:
                continue
            fields = raw.split("\t")
            if header is None:
                header = {name: i for i, name in enumerate(fields)}
                for required in ("lang_pair", "system", "score"):
                    if required not in header:
                        raise ParseError(f"missing column {required!r}",
                                         path, 1)
                continue
            try:
                lp = fields[header["lang_pair"]]
                system = fields[header["system"]]
                score = float(fields[header["score"]])
            except (IndexError, ValueError) as exc:
                raise ParseError(f"bad row {raw!r}", path, lineno) from exc
            key = (lp, system)
            if key in scores:
                raise ParseError(f"duplicate row for {lp}/{system}", path,
                                 lineno)
            scores[key] = score
    if header is None:
        raise ParseError("empty scores file", path)
    return scores


def read_segment_scores_tsv(path) -> dict:
    """Read segment-level scores into {lp: {system: {seg_id: score}}}."""
    human = load_human_scores_like_segments(path)
    nested = {}
    for (lp, system, seg), score in human.items():
        nested.setdefault(lp, {}).setdefault(system, {})[seg] = score
    return nested


def load_human_scores_like_segments(path) -> dict:
    flat = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            raw = raw.rstrip("\n")
            if not raw:
                continue
            fields = raw.split("\t")
            if lineno == 1:
                if [f.strip() for f in fields] != ["lang_pair", "system",
                                                   "seg", "score"]:
                    raise ParseError(
                        "expected header lang_pair/system/seg/score", path, 1)
                continue
            if len(fields) != 4:
                raise ParseError(f"expected 4 columns, got {len(fields)}",
                                 path, lineno)
            try:
                key = (fields[0], fields[1], int(fields[2]))
                score = float(fields[3])
            except ValueError as exc:
                raise ParseError(f"bad row {raw!r}", path, lineno) from exc
            if key in flat:
                raise ParseError(f"duplicate row {key}", path, lineno)
            flat[key] = score
    return flat


def _aligned_segment_matrix(per_system: dict) -> dict:
    """{system: {seg: score}} -> {system: np.ndarray} on the shared seg set."""
    seg_sets = {s: set(v) for s, v in per_system.items()}
    shared = set.intersection(*seg_sets.values()) if seg_sets else set()
    if not shared:
        raise AlignmentError("no shared segments across systems")
    for system, segs in seg_sets.items():
        if segs != shared:
            raise AlignmentError(
                f"system {system} scored on a different segment set"
            )
    order = sorted(shared)
    return {s: np.array([per_system[s][i] for i in order])
            for s in per_system}


# ---------------------------------------------------------------------------
# score
# ---------------------------------------------------------------------------

def _cmd_score(args) -> int:
    sample_lists = [load_token_scores(p) for p in args.samples]
    id_sets = [{s.seg_id for s in lst} for lst in sample_lists]
    if any(ids != id_sets[0] for ids in id_sets):
        raise AlignmentError("sample files cover different seg_ids")
    if not id_sets[0]:
        raise DomainError("sample files contain no segments")
    by_id = [dict((s.seg_id, s) for s in lst) for lst in sample_lists]
    seg_ids = sorted(id_sets[0])

    method = args.method
    segment_scores = []
    if method == "threshold" and not args.low < args.high:
        raise ConfigError(f"need --low < --high, got ({args.low}, {args.high})")

    if args.sample_mode == "token" or len(sample_lists) == 1:
        if len(sample_lists) == 1:
            merged = [by_id[0][i] for i in seg_ids]
        else:
            merged = [scoring.regularize([b[i] for b in by_id], "token")
                      for i in seg_ids]
        if method == "threshold":
            segment_scores = [
                scoring.threshold_segment(seg, args.low, args.high)
                for seg in merged
            ]
        else:
            segment_scores = scoring.aggregate_segments(
                merged, scoring.Aggregation(method))
    else:  # segment-level regularization
        if method not in ("sum", "mean", "threshold"):
            raise ConfigError(
                f"--sample-mode segment supports sum, mean, threshold; "
                f"got {method}"
            )
        for i in seg_ids:
            samples = [b[i] for b in by_id]
            normalized = method in ("mean", "threshold")
            score = scoring.regularize(samples, "segment",
                                       length_normalize=normalized)
            if method == "threshold":
                score = scoring.SegmentScore(
                    i, float(scoring.threshold_value(score.value, args.low,
                                                     args.high)))
            segment_scores.append(score)

    method_label = method
    if method == "threshold":
        method_label = f"threshold({args.low},{args.high})"
    sys_score = scoring.system_score(segment_scores, args.system,
                                     args.lang_pair, method_label)
    _write_rows(args.output,
                ["system", "lang_pair", "score", "n_segments"],
                [[sys_score.system_name, sys_score.lang_pair,
                  repr(sys_score.value), sys_score.n_segments]])
    return 0


# ---------------------------------------------------------------------------
# meta-eval / outliers
# ---------------------------------------------------------------------------

def _human_by_pair(human: HumanJudgments) -> dict:
    return {lp: human.scores_for(lp) for lp in human.lang_pairs()}


def _format_r(value) -> str:
    return "-" if value is None else f"{value:.3f}"


def _cmd_meta_eval(args) -> int:
    human = load_human_scores(args.human)
    metric_scores = read_scores_tsv(args.scores)
    report = metaeval.metric_report(_human_by_pair(human), metric_scores)

    comparisons = {}
    if args.baseline:
        baseline_scores = read_scores_tsv(args.baseline)
        for comp in metaeval.compare_metrics(_human_by_pair(human),
                                             metric_scores, baseline_scores,
                                             tails=args.tails):
            comparisons[comp.lang_pair] = comp

    print("lang_pair\tr\tn_systems\toutliers"
          + ("\tbaseline_r\twilliams_p" if comparisons else ""))
    for res in report.per_pair:
        row = (f"{res.lang_pair}\t{res.r:.3f}\t{res.n_systems}\t"
               f"{','.join(res.outliers) or '-'}")
        comp = comparisons.get(res.lang_pair)
        if comparisons:
            row += (f"\t{comp.r_second:.3f}\t{comp.p:.3f}"
                    if comp else "\t-\t-")
        if not res.reliable:
            row += "\t(unreliable: <4 systems)"
        print(row)
    print()
    print("group\taverage")
    for group in metaeval.GROUPS:
        print(f"{group}\t{_format_r(report.group_averages[group])}")

    if args.output:
        if args.format == "json":
            import json

            payload = {
                "per_pair": [
                    {"lang_pair": res.lang_pair, "r": res.r,
                     "n_systems": res.n_systems,
                     "outliers": list(res.outliers)}
                    for res in report.per_pair
                ],
                "group_averages": report.group_averages,
            }
            with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
                json.dump(payload, fh, indent=2, sort_keys=True)
                fh.write("\n")
        else:
            rows = [[res.lang_pair, repr(res.r), res.n_systems,
                     ",".join(res.outliers) or "-"]
                    for res in report.per_pair]
            rows += [[group, "-" if avg is None else repr(avg), "-", "-"]
                     for group, avg in report.group_averages.items()]
            _write_rows(args.output,
                        ["lang_pair", "r", "n_systems", "outliers"], rows)
    return 0


def _cmd_outliers(args) -> int:
    human = load_human_scores(args.human)
    rows = []
    for lp in human.lang_pairs():
        _, outliers = metaeval.mad_outliers(human.scores_for(lp))
        rows.append([lp, ", ".join(sorted(outliers)) or "-"])
    _write_rows(args.output, ["lang_pair", "outliers"], rows)
    return 0


# ---------------------------------------------------------------------------
# pairwise
# ---------------------------------------------------------------------------

def _cmd_pairwise(args) -> int:
    metric = read_segment_scores_tsv(args.metric_seg)
    human = read_segment_scores_tsv(args.human_seg)
    shared_pairs = sorted(set(metric) & set(human))
    if not shared_pairs:
        raise AlignmentError("metric and human files share no language pairs")

    tallies = {}
    for lp in shared_pairs:
        if sorted(metric[lp]) != sorted(human[lp]):
            raise AlignmentError(f"{lp}: metric and human systems differ")
        tallies[lp] = metaeval.pairwise_compare(
            _aligned_segment_matrix(metric[lp]),
            _aligned_segment_matrix(human[lp]),
            alpha=args.alpha,
        )

    def tally_row(name, tally):
        return [name, tally.sig_correct, tally.sig_incorrect,
                tally.sig_metric_ns, tally.ns_correct, tally.ns_incorrect,
                tally.ns_metric_ns]

    rows = [tally_row(lp, tallies[lp]) for lp in shared_pairs]
    for group in metaeval.GROUPS:
        members = [lp for lp in shared_pairs
                   if group == "all" or LanguagePair.parse(lp).group == group]
        if not members:
            continue
        combined = metaeval.PairwiseTally()
        for lp in members:
            combined = combined + tallies[lp]
        rows.append(tally_row(f"[{group}]", combined))
    _write_rows(args.output,
                ["pair", "human_s_correct", "human_s_incorrect",
                 "human_s_metric_ns", "human_ns_correct",
                 "human_ns_incorrect", "human_ns_metric_ns"], rows)
    return 0


# ---------------------------------------------------------------------------
# bleu / chrf / cross-bleu
# ---------------------------------------------------------------------------

def _cmd_bleu(args) -> int:
    cfg = ngram.BleuConfig(max_order=args.max_order, smoothing=args.smoothing,
                           tokenizer=args.tokenizer)
    value = ngram.bleu(_read_text(args.hyp), _read_text(args.ref), cfg)
    print(f"{value:.3f}")
    if args.output:
        _write_rows(args.output, ["metric", "score"], [["bleu", repr(value)]])
    return 0


def _cmd_chrf(args) -> int:
    cfg = ngram.ChrfConfig(char_order=args.char_order, beta=args.beta)
    value = ngram.chrf(_read_text(args.hyp), _read_text(args.ref), cfg)
    print(f"{value:.3f}")
    if args.output:
        _write_rows(args.output, ["metric", "score"], [["chrf", repr(value)]])
    return 0


def _cmd_cross_bleu(args) -> int:
    cfg = ngram.BleuConfig(max_order=args.max_order, tokenizer=args.tokenizer)
    texts = {os.path.splitext(os.path.basename(p))[0]: _read_text(p)
             for p in args.outputs}
    if len(texts) != len(args.outputs):
        raise ConfigError("output files must have distinct basenames")
    if args.matrix:
        names, matrix, averages = ngram.cross_bleu_matrix(texts, cfg)
        rows = [[name] + [repr(v) for v in row]
                for name, row in zip(names, matrix)]
        rows += [["[average]"] + [repr(a) for a in averages]]
        _write_rows(args.output, ["hyp\\ref"] + names, rows)
    else:
        if len(args.outputs) != 2:
            raise ConfigError("pair mode needs exactly 2 output files")
        name_a, name_b = (os.path.splitext(os.path.basename(p))[0]
                          for p in args.outputs)
        forward = ngram.cross_bleu(texts[name_a], texts[name_b], cfg)
        print(f"{name_a}->{name_b}\t{forward:.3f}")
        if args.both:
            backward = ngram.cross_bleu(texts[name_b], texts[name_a], cfg)
            print(f"{name_b}->{name_a}\t{backward:.3f}")
    return 0


# ---------------------------------------------------------------------------
# subsample
# ---------------------------------------------------------------------------

def _cmd_subsample(args) -> int:
    human = load_human_scores(args.human)
    metric = read_segment_scores_tsv(args.metric_seg)
    sizes = [int(s) for s in args.sizes.split(",") if s]
    if not sizes:
        raise ConfigError("no sizes given")

    rows = []
    per_size_all = {size: [] for size in sizes}
    for lp in sorted(metric):
        human_lp = human.scores_for(lp)
        if not human_lp:
            raise AlignmentError(f"no human scores for {lp}")
        matrix = _aligned_segment_matrix(metric[lp])
        curve = metaeval.subsample_correlations(
            human_lp, matrix, sizes, draws=args.draws, seed=args.seed)
        kept, _ = metaeval.mad_outliers(human_lp)
        for size in sizes:
            rows.append([lp, size, repr(curve[size])])
            per_size_all[size].append((curve[size], float(len(kept))))
    for size in sizes:
        avg = metaeval.fisher_weighted_average(per_size_all[size])
        rows.append(["[all]", size, repr(avg)])
        print(f"{size}\t{avg:.3f}")
    _write_rows(args.output, ["lang_pair", "size", "mean_r"], rows)
    if args.curves:
        with open(args.curves, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("lang_pair,size,mean_r\n")
            for lp, size, r in rows:
                fh.write(f"{lp},{size},{r}\n")
    return 0


# ---------------------------------------------------------------------------
# tune-thresholds
# ---------------------------------------------------------------------------

def _parse_grid(text: str) -> list:
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError(f"bad grid spec {text!r}, expected lo:hi:n")
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
        return list(np.linspace(lo, hi, n))
    return [float(v) for v in text.split(",") if v]


def _cmd_tune_thresholds(args) -> int:
    from .data import assemble_dataset

    human = load_human_scores(args.human)
    datasets = []
    for lp in sorted(os.listdir(args.scores_dir)):
        lp_dir = os.path.join(args.scores_dir, lp)
        if not os.path.isdir(lp_dir):
            continue
        lang_pair = LanguagePair.parse(lp)
        outputs = []
        for fname in sorted(os.listdir(lp_dir)):
            if not fname.endswith(".jsonl"):
                continue
            system = fname[:-len(".jsonl")]
            token_scores = load_token_scores(os.path.join(lp_dir, fname))
            segments = tuple(SegmentPair(s.seg_id, "", "")
                             for s in token_scores)
            outputs.append(SystemOutput(system, lang_pair, segments,
                                        tuple(token_scores)))
        if outputs:
            datasets.append(assemble_dataset(outputs, human))
    if not datasets:
        raise ConfigError(f"no token-score files under {args.scores_dir}")
    low, high = scoring.tune_thresholds(datasets, _parse_grid(args.grid))
    print(f"low\t{low!r}")
    print(f"high\t{high!r}")
    return 0


# ---------------------------------------------------------------------------
# subword
# ---------------------------------------------------------------------------

def _cmd_subword_train(args) -> int:
    tokens = []
    for line in _read_text(args.corpus):
        tokens.extend(line.split())
    model = subword.train_unigram(tokens, args.vocab_size, rounds=args.rounds,
                                  max_piece_len=args.max_piece_len,
                                  min_count=args.min_count)
    subword.save_unigram_model(model, args.output)
    print(f"vocabulary size\t{len(model.vocab)}")
    return 0


def _cmd_subword_nbest(args) -> int:
    model = subword.load_unigram_model(args.model)
    for seg in subword.nbest_segmentations(model, args.text, args.n):
        print(f"{seg.score:.3f}\t{' '.join(seg.pieces)}")
    return 0


def _cmd_subword_sample(args) -> int:
    model = subword.load_unigram_model(args.model)
    lines = _read_text(args.input)
    for k in range(1, args.k + 1):
        rng = np.random.default_rng([args.seed, k])
        path = f"{args.output}.{k}.txt"
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for line in lines:
                pieces = []
                for token in line.split():
                    seg = subword.sample_segmentation(
                        model, token, n=args.n, alpha=args.alpha, rng=rng)
                    pieces.extend(seg.pieces)
                fh.write(" ".join(pieces) + "\n")
        print(path)
    return 0


# ---------------------------------------------------------------------------
# toy-scorer
# ---------------------------------------------------------------------------

def _cmd_toy_train(args) -> int:
    sources = [line.split() for line in _read_text(args.source)]
    targets = [line.split() for line in _read_text(args.target)]
    if len(sources) != len(targets):
        raise AlignmentError(
            f"{len(sources)} source lines vs {len(targets)} target lines"
        )
    table = model1.train_model1(list(zip(sources, targets)),
                                iterations=args.iterations)
    model1.save_lexical_table(table, args.output)
    print(f"targets\t{len(table.target_index)}")
    print(f"sources\t{len(table.source_index)}")
    return 0


def _cmd_toy_score(args) -> int:
    table = model1.load_lexical_table(args.model)
    sources = read_lines_with_ids(args.source, args.ids)
    targets = read_lines_with_ids(args.target, args.ids)
    if [i for i, _ in sources] != [i for i, _ in targets]:
        raise AlignmentError("source and target segment ids differ")
    segments = [
        model1.score_tokens(table, src.split(), tgt.split(), seg_id=seg_id)
        for (seg_id, src), (_, tgt) in zip(sources, targets)
    ]
    write_token_scores(args.output, segments)
    print(args.output)
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="peereval",
        description="Reference-free MT scoring and metric meta-evaluation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("score", help="aggregate token scores into a system score")
    p.add_argument("--samples", nargs="+", required=True,
                   help="token-score JSONL files, one per regularization sample")
    p.add_argument("--method", required=True,
                   choices=["sum", "mean", "median", "min", "negstd",
                            "threshold"])
    p.add_argument("--low", type=float, default=-1.0,
                   help="lower confidence threshold (default -1.0)")
    p.add_argument("--high", type=float, default=-0.6,
                   help="upper confidence threshold (default -0.6)")
    p.add_argument("--sample-mode", choices=["token", "segment"],
                   default="token")
    p.add_argument("--system", default="system")
    p.add_argument("--lang-pair", default="xx-yy")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_score)

    p = sub.add_parser("meta-eval",
                       help="correlate metric scores with human judgments")
    p.add_argument("--human", required=True)
    p.add_argument("--scores", required=True)
    p.add_argument("--baseline", default=None,
                   help="second metric score TSV for the significance test")
    p.add_argument("--tails", type=int, choices=[1, 2], default=1)
    p.add_argument("--format", choices=["tsv", "json"], default="tsv")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_meta_eval)

    p = sub.add_parser("outliers", help="per-pair MAD outlier systems")
    p.add_argument("--human", required=True)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_outliers)

    p = sub.add_parser("pairwise",
                       help="pairwise ranking agreement with human decisions")
    p.add_argument("--human-seg", required=True)
    p.add_argument("--metric-seg", required=True)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_pairwise)

    p = sub.add_parser("bleu", help="corpus BLEU")
    p.add_argument("--hyp", required=True)
    p.add_argument("--ref", required=True)
    p.add_argument("--tokenizer", choices=sorted(ngram.TOKENIZERS),
                   default="intl")
    p.add_argument("--max-order", type=int, default=4)
    p.add_argument("--smoothing", choices=["none", "exp-floor"],
                   default="none")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_bleu)

    p = sub.add_parser("chrf", help="corpus chrF")
    p.add_argument("--hyp", required=True)
    p.add_argument("--ref", required=True)
    p.add_argument("--char-order", type=int, default=6)
    p.add_argument("--beta", type=float, default=2.0)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_chrf)

    p = sub.add_parser("cross-bleu",
                       help="BLEU between system outputs (proximity)")
    p.add_argument("--outputs", nargs="+", required=True)
    p.add_argument("--matrix", action="store_true",
                   help="emit the full matrix plus per-system averages")
    p.add_argument("--both", action="store_true",
                   help="in pair mode, also report the reverse direction")
    p.add_argument("--tokenizer", choices=sorted(ngram.TOKENIZERS),
                   default="intl")
    p.add_argument("--max-order", type=int, default=4)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_cross_bleu)

    p = sub.add_parser("subsample",
                       help="correlation versus subsampled test-set size")
    p.add_argument("--human", required=True)
    p.add_argument("--metric-seg", required=True)
    p.add_argument("--sizes", default="100,200,400,800")
    p.add_argument("--draws", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--curves", default=None, help="plot-ready CSV path")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_subsample)

    p = sub.add_parser("tune-thresholds",
                       help="grid-search the confidence-threshold band")
    p.add_argument("--human", required=True)
    p.add_argument("--scores-dir", required=True,
                   help="directory with <lang-pair>/<system>.jsonl files")
    p.add_argument("--grid", default="-3:0:16",
                   help="lo:hi:n for a linear grid, or comma-separated points")
    p.set_defaults(func=_cmd_tune_thresholds)

    p = sub.add_parser("subword", help="unigram subword model")
    sw = p.add_subparsers(dest="subword_command", required=True)

    q = sw.add_parser("train")
    q.add_argument("--corpus", required=True)
    q.add_argument("--vocab-size", type=int, required=True)
    q.add_argument("--rounds", type=int, default=10)
    q.add_argument("--max-piece-len", type=int, default=8)
    q.add_argument("--min-count", type=int, default=2)
    q.add_argument("-o", "--output", required=True)
    q.set_defaults(func=_cmd_subword_train)

    q = sw.add_parser("nbest")
    q.add_argument("--model", required=True)
    q.add_argument("--text", required=True)
    q.add_argument("--n", type=int, default=10)
    q.set_defaults(func=_cmd_subword_nbest)

    q = sw.add_parser("sample")
    q.add_argument("--model", required=True)
    q.add_argument("--input", required=True)
    q.add_argument("--k", type=int, required=True,
                   help="number of sample files to emit")
    q.add_argument("--alpha", type=float, default=1.0)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--n", type=int, default=10)
    q.add_argument("-o", "--output", required=True,
                   help="output prefix; files are <prefix>.<k>.txt")
    q.set_defaults(func=_cmd_subword_sample)

    p = sub.add_parser("toy-scorer", help="lexical-table scorer")
    ts = p.add_subparsers(dest="toy_command", required=True)

    q = ts.add_parser("train")
    q.add_argument("--source", required=True)
    q.add_argument("--target", required=True)
    q.add_argument("--iterations", type=int, default=10)
    q.add_argument("-o", "--output", required=True)
    q.set_defaults(func=_cmd_toy_train)

    q = ts.add_parser("score")
    q.add_argument("--model", required=True)
    q.add_argument("--source", required=True)
    q.add_argument("--target", required=True)
    q.add_argument("--ids", default=None,
                   help="sidecar id file (default: 0-based line numbers)")
    q.add_argument("-o", "--output", required=True)
    q.set_defaults(func=_cmd_toy_score)

    return parser


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except PeerEvalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
