"""Corpus-level BLEU (uniform weights, brevity penalty, no smoothing)."""

from __future__ import annotations

import math
from collections import Counter
from typing import Sequence

from ..text import metric_tokens


def _counts(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def _closest_ref_len(hyp_len: int, ref_lens: Sequence[int]) -> int:
    return min(ref_lens, key=lambda r: (abs(r - hyp_len), r))


def corpus_stats(
    hyps: Sequence[Sequence[str]], refs: Sequence[Sequence[Sequence[str]]], max_n: int = 4
) -> tuple[list[int], list[int], int, int]:
    """Clipped matches and totals per order, hypothesis length, reference length."""
    matches = [0] * max_n
    totals = [0] * max_n
    hyp_len = ref_len = 0
    for hyp, hyp_refs in zip(hyps, refs):
        if not hyp_refs:
            raise ValueError("every hypothesis needs at least one reference")
        hyp_len += len(hyp)
        ref_len += _closest_ref_len(len(hyp), [len(r) for r in hyp_refs])
        for n in range(1, max_n + 1):
            counts = _counts(hyp, n)
            max_ref: Counter = Counter()
            for r in hyp_refs:
                max_ref |= _counts(r, n)
            matches[n - 1] += sum(min(c, max_ref[g]) for g, c in counts.items())
            totals[n - 1] += sum(counts.values())
    return matches, totals, hyp_len, ref_len


def modified_precisions(hyps, refs, max_n: int = 4) -> list[float | None]:
    """Per-order clipped precision; ``None`` where the corpus has no n-grams
    of that order."""
    matches, totals, _, _ = corpus_stats(hyps, refs, max_n)
    return [m / t if t else None for m, t in zip(matches, totals)]


def bleu_tokens(
    hyps: Sequence[Sequence[str]], refs: Sequence[Sequence[Sequence[str]]], max_n: int = 4
) -> float:
    """BLEU on 0-100.

    Orders with no hypothesis n-grams anywhere in the corpus (all outputs
    shorter than n) are left out of the geometric mean.
    """
    if not hyps:
        raise ValueError("empty corpus")
    if len(hyps) != len(refs):
        raise ValueError("hypotheses and references must align")
    matches, totals, hyp_len, ref_len = corpus_stats(hyps, refs, max_n)
    logs = []
    for m, t in zip(matches, totals):
        if t == 0:
            continue
        if m == 0:
            return 0.0
        logs.append(math.log(m / t))
    if not logs or hyp_len == 0:
        return 0.0
    bp = 1.0 if hyp_len > ref_len else math.exp(1 - ref_len / hyp_len)
    return 100.0 * bp * math.exp(sum(logs) / len(logs))


def _as_ref_lists(references, n: int) -> list[list[str]]:
    """Accept one reference string per output or a list of them."""
    out = []
    for r in references:
        out.append([r] if isinstance(r, str) else list(r))
    if len(out) != n:
        raise ValueError("outputs and references must have equal length")
    return out


def bleu(outputs: Sequence[str], references, max_n: int = 4) -> float:
    refs = _as_ref_lists(references, len(outputs))
    return bleu_tokens(
        [metric_tokens(o) for o in outputs],
        [[metric_tokens(r) for r in rs] for rs in refs],
        max_n,
    )


def self_bleu(outputs: Sequence[str], sources: Sequence[str], max_n: int = 4) -> float:
    return bleu(outputs, sources, max_n)
