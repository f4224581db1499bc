from .bleu import bleu, bleu_tokens, modified_precisions, self_bleu
from .ppdb import ParaphraseTable
from .readability import count_syllables, fkgl
from .report import COLUMNS, STATS_COLUMNS, MetricReport, evaluate, format_stats, format_table
from .sari import corpus_sari, sari, sari_tokens
from .stats import CorpusStats, length_stats, output_lengths, pct_new

__all__ = [
    "COLUMNS",
    "STATS_COLUMNS",
    "CorpusStats",
    "MetricReport",
    "ParaphraseTable",
    "bleu",
    "bleu_tokens",
    "corpus_sari",
    "count_syllables",
    "evaluate",
    "fkgl",
    "format_stats",
    "format_table",
    "length_stats",
    "modified_precisions",
    "output_lengths",
    "pct_new",
    "sari",
    "sari_tokens",
    "self_bleu",
]
