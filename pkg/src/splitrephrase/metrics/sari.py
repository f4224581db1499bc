"""SARI with optional paraphrase-relaxed matching.

Follows the reference SARI formulation: per n-gram order, keep is F1 over
source n-grams retained in the output, delete is precision over source
n-grams removed from the output, add is F1 over output n-grams absent from the
source.  Source and output counts are multiplied by the number of references
before clipping against the pooled reference counts.  The three components
are averaged over orders 1..max_n and SARI is their mean.

With a :class:`ParaphraseTable`, an *output* n-gram also counts as present in
the references when one of its paraphrases is.  Deletion scoring only looks
at source n-grams and is unaffected, so a table can never lower SARI.
"""

from __future__ import annotations

from collections import Counter
from typing import Sequence

from ..text import metric_tokens
from .ppdb import ParaphraseTable


def ngrams(tokens: Sequence[str], n: int) -> list[str]:
    return [" ".join(tokens[i : i + n]) for i in range(len(tokens) - n + 1)]


def _f1(p: float, r: float) -> float:
    return 2 * p * r / (p + r) if p > 0 or r > 0 else 0.0


def sari_ngram(
    sgrams: Sequence[str],
    cgrams: Sequence[str],
    rgrams_list: Sequence[Sequence[str]],
    table: ParaphraseTable | None = None,
) -> tuple[float, float, float]:
    """(keep F1, delete precision, add F1) for one n-gram order, in [0, 1]."""
    numref = len(rgrams_list)
    rcount = Counter(g for rgrams in rgrams_list for g in rgrams)
    s_rep = Counter({g: c * numref for g, c in Counter(sgrams).items()})
    c_rep = Counter({g: c * numref for g, c in Counter(cgrams).items()})

    def ref_count(gram: str) -> int:
        best = rcount[gram]
        if table is not None:
            for para in table.paraphrases(gram):
                best = max(best, rcount[para])
        return best

    # keep
    keep = s_rep & c_rep
    keep_all = s_rep & rcount
    keep_good = Counter()
    for g, c in keep.items():
        matched = min(c, ref_count(g))
        if matched:
            keep_good[g] = matched
    keep_p = sum(keep_good[g] / keep[g] for g in keep_good) / len(keep) if keep else 0.0
    keep_r = (
        sum(min(keep_good[g], keep_all[g]) / keep_all[g] for g in keep_all) / len(keep_all)
        if keep_all
        else 0.0
    )
    keep_score = _f1(keep_p, keep_r)

    # delete (precision only)
    deleted = s_rep - c_rep
    del_good = deleted - rcount
    del_score = sum(del_good[g] / deleted[g] for g in del_good) / len(deleted) if deleted else 0.0

    # add
    source_set = set(s_rep)
    added = set(c_rep) - source_set
    add_all = set(rcount) - source_set
    add_good = {g for g in added if ref_count(g) > 0}
    covered = add_all & added
    if table is not None:
        for g in added:
            covered |= add_all & table.paraphrases(g)
    add_p = len(add_good) / len(added) if added else 0.0
    add_r = len(covered) / len(add_all) if add_all else 0.0
    add_score = _f1(add_p, add_r)

    return keep_score, del_score, add_score


def sari_tokens(
    source: Sequence[str],
    output: Sequence[str],
    references: Sequence[Sequence[str]],
    table: ParaphraseTable | None = None,
    max_n: int = 4,
) -> tuple[float, float, float, float]:
    """Sentence SARI on token lists: ``(sari, add, keep, del)`` on 0-100."""
    if not references:
        raise ValueError("SARI needs at least one reference")
    keep = dele = add = 0.0
    for n in range(1, max_n + 1):
        k, d, a = sari_ngram(
            ngrams(source, n), ngrams(output, n), [ngrams(r, n) for r in references], table
        )
        keep += k
        dele += d
        add += a
    keep, dele, add = (100 * v / max_n for v in (keep, dele, add))
    return (add + keep + dele) / 3, add, keep, dele


def sari(
    source: str,
    output: str,
    references: Sequence[str],
    table: ParaphraseTable | None = None,
    max_n: int = 4,
) -> tuple[float, float, float, float]:
    """Sentence SARI on raw strings (lowercased, ``[SEP]`` removed)."""
    if not output.strip():
        raise ValueError("empty output")
    return sari_tokens(
        metric_tokens(source),
        metric_tokens(output),
        [metric_tokens(r) for r in references],
        table,
        max_n,
    )


def corpus_sari(
    sources: Sequence[str],
    outputs: Sequence[str],
    references: Sequence[Sequence[str]],
    table: ParaphraseTable | None = None,
    max_n: int = 4,
) -> tuple[float, float, float, float]:
    """Mean of sentence-level components; ``references[i]`` lists the
    references for sentence ``i``."""
    if not (len(sources) == len(outputs) == len(references)):
        raise ValueError("sources, outputs and references must align")
    if not outputs:
        raise ValueError("empty corpus")
    totals = [0.0, 0.0, 0.0]
    for src, out, refs in zip(sources, outputs, references):
        _, a, k, d = sari(src, out, refs, table, max_n)
        totals[0] += a
        totals[1] += k
        totals[2] += d
    add, keep, dele = (t / len(outputs) for t in totals)
    return (add + keep + dele) / 3, add, keep, dele
