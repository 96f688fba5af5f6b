"""Data model and file ingestion.

Wire formats:
  * token scores: JSON lines, one object per segment,
    ``{"seg": <int>, "tokens": [<str>...], "logp": [<float>...]}``.
    K regularization samples are K separate files.
  * human scores: TSV with header ``lang_pair<TAB>system<TAB>score``
    (system level) and optionally ``lang_pair<TAB>system<TAB>seg<TAB>score``
    (segment level). UTF-8, LF.
  * system outputs / references: plain text, one segment per line, ids either
    implicit (0-based line number) or from a sidecar id file.

All types are immutable after construction and safe to share across workers.
Log-probabilities are natural logs (nats) throughout.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .errors import (
    AlignmentError,
    DomainError,
    ParseError,
    StructureError,
)


@dataclass(frozen=True, order=True)
class LanguagePair:
    source: str
    target: str

    def __post_init__(self):
        for name in ("source", "target"):
            code = getattr(self, name)
            norm = code.strip().lower()
            if len(norm) < 2 or not norm.isalpha():
                raise DomainError(f"bad language code {code!r}")
            object.__setattr__(self, name, norm)
        if self.source == self.target:
            raise DomainError(f"source and target coincide: {self.source}")

    @classmethod
    def parse(cls, text: str) -> "LanguagePair":
        parts = text.split("-")
        if len(parts) != 2:
            raise DomainError(f"bad language pair {text!r}, expected 'xx-yy'")
        return cls(parts[0], parts[1])

    def __str__(self) -> str:
        return f"{self.source}-{self.target}"

    @property
    def group(self) -> str:
        """Reporting group: en-xx, xx-en, or xx-yy."""
        if self.source == "en":
            return "en-xx"
        if self.target == "en":
            return "xx-en"
        return "xx-yy"


def lang_pair_group(lang_pair: str) -> str:
    return LanguagePair.parse(lang_pair).group


@dataclass(frozen=True)
class SegmentPair:
    seg_id: int
    source_text: str
    target_text: str

    def __post_init__(self):
        if self.seg_id < 0:
            raise DomainError(f"negative seg_id {self.seg_id}")


@dataclass(frozen=True)
class TokenScoredSegment:
    """Tokens of one hypothesis segment with their log-probabilities."""

    seg_id: int
    tokens: tuple
    logprobs: tuple

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))
        object.__setattr__(self, "logprobs", tuple(float(v) for v in self.logprobs))
        if len(self.tokens) != len(self.logprobs):
            raise StructureError(
                f"segment {self.seg_id}: {len(self.tokens)} tokens vs "
                f"{len(self.logprobs)} log-probs"
            )
        if len(self.tokens) == 0:
            raise StructureError(f"segment {self.seg_id} is empty")
        for v in self.logprobs:
            if not math.isfinite(v):
                raise DomainError(f"segment {self.seg_id}: non-finite log-prob {v}")
            if v > 0.0:
                raise DomainError(f"segment {self.seg_id}: positive log-prob {v}")

    def __len__(self) -> int:
        return len(self.tokens)

    @property
    def logprob_array(self) -> np.ndarray:
        return np.asarray(self.logprobs, dtype=np.float64)


@dataclass(frozen=True)
class SystemOutput:
    system_name: str
    lang_pair: LanguagePair
    segments: tuple
    token_scores: Optional[tuple] = None

    def __post_init__(self):
        segs = tuple(sorted(self.segments, key=lambda s: s.seg_id))
        object.__setattr__(self, "segments", segs)
        ids = [s.seg_id for s in segs]
        if len(set(ids)) != len(ids):
            raise StructureError(f"{self.system_name}: duplicate seg_id in segments")
        if self.token_scores is not None:
            scores = tuple(sorted(self.token_scores, key=lambda s: s.seg_id))
            object.__setattr__(self, "token_scores", scores)
            if {s.seg_id for s in scores} != set(ids):
                raise AlignmentError(
                    f"{self.system_name}: token-score seg_ids do not match segments"
                )

    @property
    def seg_ids(self) -> frozenset:
        return frozenset(s.seg_id for s in self.segments)


@dataclass(frozen=True)
class HumanJudgments:
    """System-level human scores, optionally with segment-level scores.

    ``system_scores`` maps (lang_pair, system) to a score; ``segment_scores``
    maps (lang_pair, system, seg_id) likewise.
    """

    system_scores: Mapping
    segment_scores: Optional[Mapping] = None

    def __post_init__(self):
        object.__setattr__(self, "system_scores", dict(self.system_scores))
        if self.segment_scores is not None:
            object.__setattr__(self, "segment_scores", dict(self.segment_scores))
            known = set(self.system_scores)
            for lp, system, _seg in self.segment_scores:
                if (lp, system) not in known:
                    raise StructureError(
                        f"segment scores for {lp}/{system} without a "
                        "system-level score"
                    )

    def lang_pairs(self) -> list:
        return sorted({lp for lp, _ in self.system_scores})

    def systems_for(self, lang_pair: str) -> list:
        return sorted(s for lp, s in self.system_scores if lp == lang_pair)

    def scores_for(self, lang_pair: str) -> dict:
        return {
            s: v for (lp, s), v in self.system_scores.items() if lp == lang_pair
        }

    def segment_vector(self, lang_pair: str, system: str) -> dict:
        """Map seg_id -> human segment score for one system, or None."""
        if self.segment_scores is None:
            return None
        vec = {
            seg: v
            for (lp, s, seg), v in self.segment_scores.items()
            if lp == lang_pair and s == system
        }
        return vec or None

    def restrict(self, lang_pair: str) -> "HumanJudgments":
        sys_scores = {
            k: v for k, v in self.system_scores.items() if k[0] == lang_pair
        }
        seg_scores = None
        if self.segment_scores is not None:
            seg_scores = {
                k: v for k, v in self.segment_scores.items() if k[0] == lang_pair
            }
        return HumanJudgments(sys_scores, seg_scores or None)


@dataclass(frozen=True)
class EvalDataset:
    """Aligned system outputs for one language pair, with human judgments."""

    lang_pair: LanguagePair
    systems: tuple
    human: HumanJudgments
    references: Optional[tuple] = None

    def __post_init__(self):
        systems = tuple(sorted(self.systems, key=lambda s: s.system_name))
        object.__setattr__(self, "systems", systems)
        if len(systems) < 2:
            raise StructureError("an evaluation dataset needs at least 2 systems")
        base = systems[0].seg_ids
        for sys_out in systems[1:]:
            if sys_out.seg_ids != base:
                raise AlignmentError(
                    f"system {sys_out.system_name} disagrees on segment ids"
                )
        if self.references is not None:
            object.__setattr__(self, "references", tuple(self.references))
            if len(self.references) != len(base):
                raise AlignmentError(
                    f"{len(self.references)} references for {len(base)} segments"
                )

    @property
    def seg_ids(self) -> list:
        return sorted(self.systems[0].seg_ids)

    @property
    def system_names(self) -> list:
        return [s.system_name for s in self.systems]


# ---------------------------------------------------------------------------
# Loading
# ---------------------------------------------------------------------------

def load_token_scores(path) -> list:
    """Read a token-score JSONL file, sorted by seg_id."""
    segments = []
    seen = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            raw = raw.strip()
            if not raw:
                continue
            try:
                obj = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise ParseError(f"bad JSON ({exc.msg})", path, lineno) from exc
            try:
                seg_id = int(obj["seg"])
                tokens = obj["tokens"]
                logps = obj["logp"]
            except (KeyError, TypeError, ValueError) as exc:
                raise ParseError(
                    "record must have integer 'seg', list 'tokens', list 'logp'",
                    path,
                    lineno,
                ) from exc
            if seg_id in seen:
                raise StructureError(f"{path}:{lineno}: duplicate seg_id {seg_id}")
            seen.add(seg_id)
            try:
                segments.append(TokenScoredSegment(seg_id, tokens, logps))
            except (StructureError, DomainError) as exc:
                raise type(exc)(f"{path}:{lineno}: {exc}") from exc
    segments.sort(key=lambda s: s.seg_id)
    return segments


def write_token_scores(path, segments: Iterable) -> None:
    """Write token-score JSONL; floats keep shortest round-trip precision."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for seg in sorted(segments, key=lambda s: s.seg_id):
            fh.write(
                json.dumps(
                    {"seg": seg.seg_id, "tokens": list(seg.tokens),
                     "logp": list(seg.logprobs)},
                    ensure_ascii=False,
                )
                + "\n"
            )


def _parse_header(fields, expected, path):
    if [f.strip() for f in fields] != expected:
        raise ParseError(
            f"expected header {chr(9).join(expected)!r}", path, 1
        )


def load_human_scores(system_path, segment_path=None) -> HumanJudgments:
    """Read system-level (and optionally segment-level) human score TSVs."""
    system_scores = {}
    with open(system_path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            raw = raw.rstrip("\n")
            if not raw:
                continue
            fields = raw.split("\t")
            if lineno == 1:
                _parse_header(fields, ["lang_pair", "system", "score"], system_path)
                continue
            if len(fields) != 3:
                raise ParseError(f"expected 3 columns, got {len(fields)}",
                                 system_path, lineno)
            lp, system, score_text = fields
            LanguagePair.parse(lp)
            try:
                score = float(score_text)
            except ValueError as exc:
                raise ParseError(f"non-numeric score {score_text!r}",
                                 system_path, lineno) from exc
            if (lp, system) in system_scores:
                raise StructureError(
                    f"{system_path}:{lineno}: duplicate row for {lp}/{system}"
                )
            system_scores[(lp, system)] = score

    segment_scores = None
    if segment_path is not None:
        segment_scores = {}
        with open(segment_path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                raw = raw.rstrip("\n")
                if not raw:
                    continue
                fields = raw.split("\t")
                if lineno == 1:
                    _parse_header(fields, ["lang_pair", "system", "seg", "score"],
                                  segment_path)
                    continue
                if len(fields) != 4:
                    raise ParseError(f"expected 4 columns, got {len(fields)}",
                                     segment_path, lineno)
                lp, system, seg_text, score_text = fields
                try:
                    seg_id = int(seg_text)
                    score = float(score_text)
                except ValueError as exc:
                    raise ParseError(f"bad seg/score in {fields!r}",
                                     segment_path, lineno) from exc
                key = (lp, system, seg_id)
                if key in segment_scores:
                    raise StructureError(
                        f"{segment_path}:{lineno}: duplicate row for "
                        f"{lp}/{system}/seg {seg_id}"
                    )
                segment_scores[key] = score

    return HumanJudgments(system_scores, segment_scores)


def write_human_scores(system_path, judgments: HumanJudgments,
                       segment_path=None) -> None:
    with open(system_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("lang_pair\tsystem\tscore\n")
        for (lp, system), score in sorted(judgments.system_scores.items()):
            fh.write(f"{lp}\t{system}\t{score!r}\n")
    if segment_path is not None and judgments.segment_scores is not None:
        with open(segment_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("lang_pair\tsystem\tseg\tscore\n")
            for (lp, system, seg), score in sorted(judgments.segment_scores.items()):
                fh.write(f"{lp}\t{system}\t{seg}\t{score!r}\n")


def read_lines_with_ids(path, ids_path=None) -> list:
    """Read plain-text segments as (seg_id, text) pairs.

    With ids_path, ids come from the sidecar file (one integer per line,
    same length); otherwise they are 0-based line numbers.
    """
    with open(path, encoding="utf-8") as fh:
        lines = [ln.rstrip("\n") for ln in fh]
    if lines and lines[-1] == "":
        lines.pop()
    if ids_path is None:
        return list(enumerate(lines))
    with open(ids_path, encoding="utf-8") as fh:
        id_lines = [ln.strip() for ln in fh if ln.strip()]
    if len(id_lines) != len(lines):
        raise AlignmentError(
            f"{ids_path} has {len(id_lines)} ids for {len(lines)} lines in {path}"
        )
    ids = []
    for lineno, text in enumerate(id_lines, start=1):
        try:
            ids.append(int(text))
        except ValueError as exc:
            raise ParseError(f"bad segment id {text!r}", ids_path, lineno) from exc
    if len(set(ids)) != len(ids):
        raise StructureError(f"{ids_path}: duplicate segment ids")
    return list(zip(ids, lines))


def load_system_output(output_path, system_name, lang_pair,
                       source_path=None, ids_path=None,
                       token_scores=None) -> SystemOutput:
    """Build a SystemOutput from plain-text files."""
    if isinstance(lang_pair, str):
        lang_pair = LanguagePair.parse(lang_pair)
    targets = read_lines_with_ids(output_path, ids_path)
    sources = dict(read_lines_with_ids(source_path, ids_path)) if source_path else {}
    segments = [
        SegmentPair(seg_id, sources.get(seg_id, ""), text)
        for seg_id, text in targets
    ]
    return SystemOutput(system_name, lang_pair, tuple(segments),
                        tuple(token_scores) if token_scores else None)


def assemble_dataset(outputs: Sequence, human: HumanJudgments,
                     references=None) -> EvalDataset:
    """Validate alignment across systems and attach human judgments.

    Order-insensitive in ``outputs``: any permutation produces an equal
    dataset (systems are stored sorted by name).
    """
    if not outputs:
        raise DomainError("no system outputs given")
    lang_pair = outputs[0].lang_pair
    for out in outputs:
        if out.lang_pair != lang_pair:
            raise AlignmentError(
                f"mixed language pairs: {out.system_name} is {out.lang_pair}, "
                f"expected {lang_pair}"
            )
    base = outputs[0].seg_ids
    misaligned = sorted(
        out.system_name for out in outputs if out.seg_ids != base
    )
    if misaligned:
        raise AlignmentError(
            "segment ids differ across systems: " + ", ".join(misaligned)
        )
    lp = str(lang_pair)
    missing = sorted(
        out.system_name
        for out in outputs
        if (lp, out.system_name) not in human.system_scores
    )
    if missing:
        raise StructureError(
            "no human system score for: " + ", ".join(missing)
        )
    return EvalDataset(lang_pair, tuple(outputs), human.restrict(lp),
                       tuple(references) if references is not None else None)
