"""Split-and-rephrase corpus toolkit: pair filtering, split categories,
edit labels, loss evaluation and evaluation metrics."""

from .categorize import choose_split, classify, classify_with_rule
from .corpus import (
    EditAlignment,
    PairRecord,
    RecordError,
    Sentence,
    SplitCategory,
    Status,
    read_pairs,
    write_pairs,
)
from .diff import DiffScript, token_diff
from .edit_align import build_delta, locate_split, pad_align
from .estimators import EditLabeler, PairFilter, SplitCategorizer
from .filters import FilterConfig, run_filters
from .loss import ClassProbs, ProbMatrix, joint_loss, mix_history, seq_loss
from .parse_io import ConstituencyTree, DependencyGraph, parse_bracketed, read_conllu

__version__ = "0.1.0"

__all__ = [
    "ClassProbs",
    "ConstituencyTree",
    "DependencyGraph",
    "DiffScript",
    "EditAlignment",
    "EditLabeler",
    "FilterConfig",
    "PairFilter",
    "PairRecord",
    "ProbMatrix",
    "RecordError",
    "Sentence",
    "SplitCategorizer",
    "SplitCategory",
    "Status",
    "build_delta",
    "choose_split",
    "classify",
    "classify_with_rule",
    "joint_loss",
    "locate_split",
    "mix_history",
    "pad_align",
    "parse_bracketed",
    "read_conllu",
    "read_pairs",
    "run_filters",
    "seq_loss",
    "token_diff",
    "write_pairs",
]
