from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from statistics import fmean
from typing import Sequence

from ..text import metric_tokens, simple_tokenize
from .bleu import bleu, self_bleu
from .ppdb import ParaphraseTable
from .readability import fkgl
from .sari import corpus_sari
from .stats import CorpusStats, output_lengths, pct_new

# Column order of the printed evaluation table.
COLUMNS = (
    ("SARI", "sari"), ("add", "sari_add"), ("keep", "sari_keep"), ("del", "sari_del"),
    ("BScore", "bert_score"), ("FK", "fkgl"), ("BLEU", "bleu"), ("SLen", "slen"),
    ("OLen", "olen"), ("sBLEU", "self_bleu"), ("%new", "pct_new"),
)
STATS_COLUMNS = (
    ("#pairs", "n_pairs"), ("#unique", "n_unique"), ("%new", "pct_new"),
    ("Long", "long_len"), ("Split", "split_len"),
)


@dataclass(frozen=True)
class MetricReport:
    sari: float
    sari_add: float
    sari_keep: float
    sari_del: float
    fkgl: float
    bleu: float
    slen: float
    olen: float
    self_bleu: float
    pct_new: float
    bert_score: float | None = None

    def __post_init__(self):
        if not math.isclose(
            self.sari, (self.sari_add + self.sari_keep + self.sari_del) / 3, abs_tol=1e-9
        ):
            raise ValueError("sari must be the mean of its components")

    def as_dict(self) -> dict:
        return asdict(self)


def evaluate(
    sources: Sequence[str],
    outputs: Sequence[str],
    references: Sequence[Sequence[str]],
    table: ParaphraseTable | None = None,
    bert_scores: Sequence[float] | None = None,
    max_n: int = 4,
) -> MetricReport:
    """Score system outputs against sources and per-sentence reference lists.

    ``bert_scores`` are taken as given (one per output) and averaged.
    """
    s, add, keep, dele = corpus_sari(sources, outputs, references, table, max_n)
    slen, olen = output_lengths([simple_tokenize(o) for o in outputs])
    new = fmean(pct_new(metric_tokens(src), metric_tokens(out)) for src, out in zip(sources, outputs))
    bert = None
    if bert_scores is not None:
        if len(bert_scores) != len(outputs):
            raise ValueError("one external score per output is required")
        bert = fmean(bert_scores)
    return MetricReport(
        sari=s,
        sari_add=add,
        sari_keep=keep,
        sari_del=dele,
        fkgl=fkgl(outputs),
        bleu=bleu(outputs, references, max_n),
        slen=slen,
        olen=olen,
        self_bleu=self_bleu(outputs, sources, max_n),
        pct_new=new,
        bert_score=bert,
    )


def _fmt(value) -> str:
    if value is None:
        return "-"
    if isinstance(value, int):
        return str(value)
    return f"{value:.1f}"


def format_table(rows: dict[str, object], columns=COLUMNS) -> str:
    """Plain-text table; ``rows`` maps a row name to a report or stats object."""
    header = ["System"] + [name for name, _ in columns]
    lines = [header]
    for name, row in rows.items():
        data = row.as_dict()
        lines.append([name] + [_fmt(data.get(attr)) for _, attr in columns])
    widths = [max(len(line[i]) for line in lines) for i in range(len(header))]
    return "\n".join(
        "  ".join(cell.rjust(w) if i else cell.ljust(w) for i, (cell, w) in enumerate(zip(line, widths)))
        for line in lines
    )


def format_stats(name: str, stats: CorpusStats) -> str:
    return format_table({name: stats}, STATS_COLUMNS)
