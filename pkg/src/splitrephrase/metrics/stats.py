"""New-word rate and length statistics for corpora and system outputs."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from statistics import fmean
from typing import Iterable, Sequence

from ..corpus import PairRecord, Status
from ..text import SEP
from .readability import split_sentences


def pct_new(source: Sequence[str], output: Sequence[str]) -> float:
    """Share (0-100) of output token occurrences whose type is not in the
    source. Tokens are compared lowercased; ``[SEP]`` is ignored."""
    out = [t.lower() for t in output if t != SEP]
    if not out:
        raise ValueError("empty output")
    vocab = {t.lower() for t in source}
    return 100.0 * sum(1 for t in out if t not in vocab) / len(out)


@dataclass(frozen=True)
class CorpusStats:
    n_pairs: int
    n_unique: int
    pct_new: float
    long_len: float
    split_len: float
    slen: float
    olen: float

    def as_dict(self) -> dict:
        return asdict(self)


def length_stats(records: Iterable[PairRecord], include_rejected: bool = False) -> CorpusStats:
    """Pair count, distinct long sentences, %new of the split against the long
    sentence, mean long length and mean length of each split sentence.

    ``slen`` equals ``split_len`` here; ``olen`` is the mean joint length of
    both split sentences.
    """
    n = 0
    longs: set[str] = set()
    new, long_lens, split_lens, out_lens = [], [], [], []
    for rec in records:
        if rec.status is Status.REJECTED and not include_rejected:
            continue
        n += 1
        longs.add(rec.long.text)
        joined = rec.s1.tokens + rec.s2.tokens
        new.append(pct_new(rec.long.tokens, joined))
        long_lens.append(len(rec.long.tokens))
        split_lens.extend((len(rec.s1.tokens), len(rec.s2.tokens)))
        out_lens.append(len(joined))
    if not n:
        raise ValueError("no records to summarise")
    split_len = fmean(split_lens)
    return CorpusStats(
        n_pairs=n,
        n_unique=len(longs),
        pct_new=fmean(new),
        long_len=fmean(long_lens),
        split_len=split_len,
        slen=split_len,
        olen=fmean(out_lens),
    )


def output_lengths(outputs: Sequence[Sequence[str]]) -> tuple[float, float]:
    """(SLen, OLen) for tokenised outputs: mean words per sentence and mean
    words per output. Sentences break at ``[SEP]`` and final punctuation."""
    if not outputs:
        raise ValueError("empty corpus")
    sent_lens = []
    out_lens = []
    for tokens in outputs:
        sents = split_sentences(tokens)
        sent_lens.extend(len(s) for s in sents)
        out_lens.append(sum(len(s) for s in sents))
    return (fmean(sent_lens) if sent_lens else 0.0), fmean(out_lens)
