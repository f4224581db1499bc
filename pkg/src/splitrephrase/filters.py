"""Noise and misalignment filters for aligned long/split pairs.

The cascade runs in a fixed order and records the first failure:

1. ``intratoken_punct``: two sentences glued together without a space.
2. ``disconnected``: the long sentence's dependency parse has more than one
   component (two sentences joined without punctuation).
3. ``low_overlap``: lemma overlap ratio below ``min_overlap``.
4. ``no_verb``: one of the three sentences has no VERB/AUX token.
5. ``low_similarity``: semantic similarity below ``min_similarity``.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from typing import Iterable

from .corpus import PairRecord, Sentence, Status
from .parse_io import DependencyGraph
from .text import is_alpha_char, is_punct_char

logger = logging.getLogger(__name__)

REASONS = ("intratoken_punct", "disconnected", "low_overlap", "no_verb", "low_similarity")
VERB_TAGS = frozenset({"VERB", "AUX"})


class MissingAnnotationError(ValueError):
    pass


@dataclass(frozen=True)
class FilterConfig:
    min_overlap: float = 0.25
    min_similarity: float = 0.4
    require_verb: bool = True
    # Records without a dependency parse fail hard unless this is False.
    require_parse: bool = True
    # What to do when UPOS tags are missing and no lexicon is set: "fail" or "pass".
    missing_upos: str = "fail"
    verb_lexicon: frozenset[str] | None = None
    # Score records lacking scores["similarity"] with token F1 (not BERTScore).
    similarity_fallback: bool = False
    # Characters exempt from the intra-token punctuation rule, e.g. "-'".
    punct_exempt: str = ""

    def __post_init__(self):
        for name in ("min_overlap", "min_similarity"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {value}")
        if self.missing_upos not in ("fail", "pass"):
            raise ValueError("missing_upos must be 'fail' or 'pass'")
        if self.verb_lexicon is not None:
            object.__setattr__(
                self, "verb_lexicon", frozenset(w.lower() for w in self.verb_lexicon)
            )


def token_has_intratoken_punct(token: str, exempt: str = "") -> bool:
    n_alpha = sum(1 for c in token if is_alpha_char(c))
    seen = 0
    for ch in token:
        if is_alpha_char(ch):
            seen += 1
        elif is_punct_char(ch) and ch not in exempt:
            if seen >= 2 and n_alpha - seen >= 2:
                return True
    return False


def has_intratoken_punct(sentence: Sentence, exempt: str = "") -> bool:
    """True if a token has punctuation with at least two letters before it and
    at least two after it, e.g. ``ramp.The``; ``U.S.`` and ``end.`` pass."""
    return any(token_has_intratoken_punct(t, exempt) for t in sentence.tokens)


def dependency_graph(sentence: Sentence) -> DependencyGraph:
    if sentence.heads is None:
        raise MissingAnnotationError("sentence has no dependency heads")
    return DependencyGraph(len(sentence.tokens), sentence.heads, sentence.deprels or ())


def is_connected(dep: DependencyGraph) -> bool:
    """True iff head-dependent edges link all tokens into one component.

    The artificial root is not a node, so two root-attached tokens with no
    path between them are two components.
    """
    if dep.n == 0:
        return False
    adjacency: list[list[int]] = [[] for _ in range(dep.n)]
    for i, head in enumerate(dep.heads):
        if head:
            adjacency[i].append(head - 1)
            adjacency[head - 1].append(i)
    seen = {0}
    frontier = [0]
    while frontier:
        node = frontier.pop()
        for nxt in adjacency[node]:
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return len(seen) == dep.n


def lemma_set(sentence: Sentence) -> tuple[frozenset[str], bool]:
    """Unique lemmas, falling back to lowercased tokens.

    Returns the set and whether the fallback was used.
    """
    if sentence.lemmas is not None:
        return frozenset(sentence.lemmas), False
    return frozenset(t.lower() for t in sentence.tokens), True


def overlap_from_sets(long_set, s1_set, s2_set) -> float:
    if not long_set or not s1_set or not s2_set:
        raise ValueError("overlap ratio needs non-empty lemma sets")
    union = s1_set | s2_set
    return min(
        len(long_set & s1_set) / len(s1_set),
        len(long_set & s2_set) / len(s2_set),
        len(long_set & union) / len(union),
    )


def overlap_ratio(long: Sentence, s1: Sentence, s2: Sentence) -> float:
    return overlap_from_sets(lemma_set(long)[0], lemma_set(s1)[0], lemma_set(s2)[0])


def contains_verb(sentence: Sentence, cfg: FilterConfig | None = None) -> bool:
    cfg = cfg or FilterConfig()
    if sentence.upos is not None:
        return any(tag in VERB_TAGS for tag in sentence.upos)
    if cfg.verb_lexicon is not None:
        return any(t.lower() in cfg.verb_lexicon for t in sentence.tokens)
    logger.warning("no UPOS tags for %r; treating as %s", sentence.text[:40], cfg.missing_upos)
    return cfg.missing_upos == "pass"


def token_f1(long: Sentence, s1: Sentence, s2: Sentence) -> float:
    """Bag-of-tokens F1 between the long sentence and the joined split.

    Only a crude stand-in for a neural similarity score.
    """
    a = Counter(t.lower() for t in long.tokens)
    b = Counter(t.lower() for t in s1.tokens + s2.tokens)
    common = sum((a & b).values())
    if not common:
        return 0.0
    precision = common / sum(b.values())
    recall = common / sum(a.values())
    return 2 * precision * recall / (precision + recall)


def run_filters(
    pair: PairRecord, cfg: FilterConfig | None = None, sim: float | None = None
) -> PairRecord:
    """Run the cascade and return the record marked filtered or rejected.

    ``sim`` overrides ``pair.scores["similarity"]``; when neither exists the
    similarity check is skipped unless ``cfg.similarity_fallback`` is set.
    """
    cfg = cfg or FilterConfig()
    long, s1, s2 = pair.long, pair.s1, pair.s2
    for sent in (long, s1, s2):
        if not sent.tokens:
            raise MissingAnnotationError(f"{pair.id}: empty sentence")

    scores: dict[str, float] = {}
    tags = list(pair.tags)

    sets = [lemma_set(s) for s in (long, s1, s2)]
    if any(fallback for _, fallback in sets) and "fallback_lemmas" not in tags:
        tags.append("fallback_lemmas")
    r = overlap_from_sets(*(s for s, _ in sets))
    scores["overlap_r"] = r

    if sim is None:
        sim = pair.scores.get("similarity")
    if sim is None and cfg.similarity_fallback:
        sim = token_f1(long, s1, s2)
        if "fallback_similarity" not in tags:
            tags.append("fallback_similarity")
    if sim is not None:
        scores["similarity"] = float(sim)

    reason = None
    if has_intratoken_punct(long, cfg.punct_exempt):
        reason = "intratoken_punct"
    elif long.heads is not None or cfg.require_parse:
        if long.heads is None:
            raise MissingAnnotationError(f"{pair.id}: long sentence has no dependency parse")
        if not is_connected(dependency_graph(long)):
            reason = "disconnected"
    if reason is None:
        if r < cfg.min_overlap:
            reason = "low_overlap"
        elif cfg.require_verb and not all(contains_verb(s, cfg) for s in (long, s1, s2)):
            reason = "no_verb"
        elif sim is not None and sim < cfg.min_similarity:
            reason = "low_similarity"

    return pair.replace(
        scores={**pair.scores, **scores},
        tags=tuple(tags),
        status=Status.REJECTED if reason else Status.FILTERED,
        reason=reason,
    )


def filter_pairs(
    pairs: Iterable[PairRecord], cfg: FilterConfig | None = None
) -> Iterable[PairRecord]:
    for pair in pairs:
        yield run_filters(pair, cfg)
