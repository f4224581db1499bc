"""Build pair records from sentence-aligned bitext.

Inputs are two plain-text files (one sentence per line), an alignment file
with one ``i j - k`` line per alignment (0-based line numbers, Moses style),
and a translation sidecar: a TSV of ``segment-id<TAB>English text`` holding
an English rendering of every foreign sentence that is used.  Segment ids
are ``<doc_id>:<side>:<line>``, with side ``src`` or ``tgt``.
"""

from __future__ import annotations

import logging
import os
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Mapping

from .corpus import PairRecord, RecordError, Sentence
from .text import SENTENCE_FINAL, simple_tokenize

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AlignmentRecord:
    src_indices: tuple[int, ...]
    tgt_indices: tuple[int, ...]
    doc_id: str
    src_texts: tuple[str, ...] = ()
    tgt_texts: tuple[str, ...] = ()
    lineno: int = 0

    def __post_init__(self):
        for name in ("src_indices", "tgt_indices"):
            idx = tuple(getattr(self, name))
            if not idx:
                raise ValueError(f"{name} is empty")
            if any(b <= a for a, b in zip(idx, idx[1:])):
                raise ValueError(f"{name} not strictly increasing: {idx}")
            object.__setattr__(self, name, idx)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.src_indices), len(self.tgt_indices)

    def segment_ids(self, side: str) -> list[str]:
        indices = self.src_indices if side == "src" else self.tgt_indices
        return [segment_id(self.doc_id, side, i) for i in indices]


def segment_id(doc_id: str, side: str, index: int) -> str:
    return f"{doc_id}:{side}:{index}"


def parse_alignment(line: str) -> tuple[list[int], list[int]]:
    left, dash, right = line.partition("-")
    if not dash:
        raise ValueError("expected '<src indices> - <tgt indices>'")
    try:
        return [int(t) for t in left.split()], [int(t) for t in right.split()]
    except ValueError:
        raise ValueError(f"non-integer index in {line.strip()!r}") from None


def _read_lines(path) -> list[str]:
    with open(path, encoding="utf-8") as fh:
        return [line.rstrip("\n").rstrip("\r") for line in fh]


def load_bitext(
    src_path: str | os.PathLike,
    tgt_path: str | os.PathLike,
    align_path: str | os.PathLike,
    doc_id: str | None = None,
    errors: list[RecordError] | None = None,
) -> Iterator[AlignmentRecord]:
    """Yield alignments with their sentence texts attached.

    Bad alignment lines (out-of-range or malformed indices) are reported as
    :class:`RecordError` through ``errors`` (or logged) and skipped.
    """
    src = _read_lines(src_path)
    tgt = _read_lines(tgt_path)
    if len(src) != len(tgt):
        logger.warning("bitext length mismatch: %d source vs %d target lines", len(src), len(tgt))
    doc_id = doc_id or Path(align_path).stem
    with open(align_path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                s_idx, t_idx = parse_alignment(line)
                for side, idx, lines in (("source", s_idx, src), ("target", t_idx, tgt)):
                    bad = [i for i in idx if not 0 <= i < len(lines)]
                    if bad:
                        raise ValueError(
                            f"{side} index {bad[0]} out of range for {len(lines)} lines"
                        )
                rec = AlignmentRecord(
                    tuple(s_idx),
                    tuple(t_idx),
                    doc_id,
                    tuple(src[i] for i in s_idx),
                    tuple(tgt[i] for i in t_idx),
                    lineno,
                )
            except ValueError as exc:
                err = RecordError(lineno, str(exc))
                if errors is None:
                    logger.warning("%s: %s", align_path, err)
                else:
                    errors.append(err)
                continue
            yield rec


def read_translations(path: str | os.PathLike) -> dict[str, str]:
    out: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            key, tab, text = line.rstrip("\n").partition("\t")
            if not tab:
                raise ValueError(f"{path}:{lineno}: expected '<segment-id>\\t<text>'")
            out[key] = text
    return out


def _looks_multi_sentence(tokens) -> bool:
    return any(t in SENTENCE_FINAL for t in tokens[:-1])


def select_one_to_two(
    records: Iterable[AlignmentRecord],
    translations: Mapping[str, str],
    english_side: str = "src",
    pivot_language: str = "",
    source_corpus: str = "",
    counts: Counter | None = None,
) -> Iterator[PairRecord]:
    """Keep 1-2 and 2-1 alignments and orient them as (long, split).

    The English side is used as-is; the foreign side is replaced by its
    sidecar translation.  Dropped alignments are tallied in ``counts`` under
    ``not_1_2`` or ``missing_translation``.  Records whose long sentence
    still looks like two sentences are tagged ``ambiguous_long``.
    """
    if english_side not in ("src", "tgt"):
        raise ValueError("english_side must be 'src' or 'tgt'")
    foreign_side = "tgt" if english_side == "src" else "src"
    counts = counts if counts is not None else Counter()
    for rec in records:
        counts["input"] += 1
        n_src, n_tgt = rec.shape
        n_en, n_fr = (n_src, n_tgt) if english_side == "src" else (n_tgt, n_src)
        if sorted((n_en, n_fr)) != [1, 2]:
            counts["not_1_2"] += 1
            continue
        english = rec.src_texts if english_side == "src" else rec.tgt_texts
        ids = rec.segment_ids(foreign_side)
        missing = [i for i in ids if i not in translations]
        if missing:
            logger.warning("no translation for segment %s", missing[0])
            counts["missing_translation"] += 1
            continue
        translated = tuple(translations[i] for i in ids)
        if n_en == 1:
            long_text, split_texts, tag = english[0], translated, "split_from_translation"
        else:
            long_text, split_texts, tag = translated[0], english, "long_from_translation"
        long = Sentence.from_text(long_text)
        tags = [tag]
        if _looks_multi_sentence(long.tokens):
            tags.append("ambiguous_long")
        counts["kept"] += 1
        yield PairRecord(
            id=f"{rec.doc_id}:{rec.lineno}",
            long=long,
            split=(Sentence.from_text(split_texts[0]), Sentence.from_text(split_texts[1])),
            pivot_language=pivot_language,
            source_corpus=source_corpus or rec.doc_id,
            tags=tuple(tags),
        )
