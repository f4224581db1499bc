"""Rule-based split categories.

Rules are tried in order and the first match wins:

1. Direct insertion: the top level of the source tree contains ``S CC S``,
   the source has a colon/semicolon, or the only differences are the split
   itself (final punctuation, separator, re-capitalisation next to the split).
2. Changes across sentence: ``S NP VP`` or ``SBAR NP VP`` at the top level.
3. Changes near split: ``VP CC VP`` at the top level, or the first and last
   five source words are copied.
4. Anything else: changes across sentence.
"""

from __future__ import annotations

from typing import Sequence

from .corpus import PairRecord, Sentence, SplitCategory
from .diff import DiffScript, token_diff
from .parse_io import ConstituencyTree, first_level_labels, matches_pattern, parse_bracketed, unwrap_root
from .text import RESERVED, SENTENCE_FINAL, SEP, is_punct_token

DIRECT_PATTERNS = (("S", "CC", "S"),)
ACROSS_PATTERNS = (("S", "NP", "VP"), ("SBAR", "NP", "VP"))
NEAR_PATTERNS = (("VP", "CC", "VP"),)
CLAUSE_DELIMITERS = frozenset({":", ";"})


def join_split(s1: Sequence[str], s2: Sequence[str]) -> list[str]:
    return list(s1) + [SEP] + list(s2)


def source_target(pair: PairRecord) -> tuple[list[str], list[str]]:
    """Source tokens and ``s1 [SEP] s2`` target tokens of a record."""
    x = list(pair.long.tokens)
    for seq in (x, pair.s1.tokens, pair.s2.tokens):
        bad = RESERVED.intersection(seq)
        if bad:
            raise ValueError(f"{pair.id}: reserved token {sorted(bad)[0]} in input")
    return x, join_split(pair.s1.tokens, pair.s2.tokens)


def has_clause_delimiter(x: Sequence[str]) -> bool:
    return any(tok in CLAUSE_DELIMITERS for tok in x[:-1])


def only_split_changes(x: Sequence[str], y: Sequence[str], diff: DiffScript, radius: int = 3) -> bool:
    """True when every edit is punctuation, the separator or a case change
    located within ``radius`` positions of the separator in ``y``."""
    split_y = list(y).index(SEP)
    for hunk in diff.hunks():
        ys = range(hunk.y_start, hunk.y_end) or [hunk.y_start]
        if any(abs(pos - split_y) > radius for pos in ys):
            return False
        deleted = x[hunk.x_start : hunk.x_end]
        inserted = y[hunk.y_start : hunk.y_end]
        del_lower = {t.lower() for t in deleted}
        ins_lower = {t.lower() for t in inserted}
        for tok in inserted:
            if tok not in SENTENCE_FINAL and tok != SEP and tok.lower() not in del_lower:
                return False
        for tok in deleted:
            if not is_punct_token(tok) and tok.lower() not in ins_lower:
                return False
    return True


def ends_copied(x: Sequence[str], diff: DiffScript, n_words: int = 5) -> bool:
    copied = diff.copied_x()
    n = len(x)
    edges = set(range(min(n_words, n))) | set(range(max(0, n - n_words), n))
    return edges <= copied


def _any_pattern(labels, patterns) -> tuple[str, ...] | None:
    for pattern in patterns:
        if matches_pattern(labels, pattern):
            return pattern
    return None


def classify_with_rule(
    pair: PairRecord,
    tree_x: ConstituencyTree | str | None = None,
    *,
    split_radius: int = 3,
    edge_words: int = 5,
) -> tuple[SplitCategory, str]:
    """Category plus a short name of the rule that fired."""
    if tree_x is None:
        tree_x = pair.long.tree
    if tree_x is None:
        raise ValueError(f"{pair.id}: no constituency tree for the long sentence")
    if isinstance(tree_x, str):
        tree_x = parse_bracketed(tree_x)
    labels = first_level_labels(unwrap_root(tree_x), skip_punct=True)
    x, y = source_target(pair)
    diff = token_diff(x, y)

    pattern = _any_pattern(labels, DIRECT_PATTERNS)
    if pattern:
        return SplitCategory.DIRECT_INSERTION, "pattern:" + " ".join(pattern)
    if has_clause_delimiter(x):
        return SplitCategory.DIRECT_INSERTION, "colon_semicolon"
    if only_split_changes(x, y, diff, split_radius):
        return SplitCategory.DIRECT_INSERTION, "split_only"
    pattern = _any_pattern(labels, ACROSS_PATTERNS)
    if pattern:
        return SplitCategory.CHANGES_ACROSS_SENTENCE, "pattern:" + " ".join(pattern)
    pattern = _any_pattern(labels, NEAR_PATTERNS)
    if pattern:
        return SplitCategory.CHANGES_NEAR_SPLIT, "pattern:" + " ".join(pattern)
    if ends_copied(x, diff, edge_words):
        return SplitCategory.CHANGES_NEAR_SPLIT, "copied_ends"
    return SplitCategory.CHANGES_ACROSS_SENTENCE, "default"


def classify(pair: PairRecord, tree_x: ConstituencyTree | str | None = None) -> SplitCategory:
    return classify_with_rule(pair, tree_x)[0]


def _reference_length(reference) -> int:
    first = reference[0]
    if isinstance(first, Sentence):
        return len(first.tokens)
    return len(first)


def choose_split(candidates: Sequence[int], reference) -> int:
    """Pick the cut whose left segment length is closest to ``len(s1)``.

    ``reference`` is the split pair (sentences or token lists); ties go to the
    leftmost candidate.
    """
    if not candidates:
        raise ValueError("no split candidates")
    target = _reference_length(reference)
    return min(sorted(candidates), key=lambda c: abs(c - target))
