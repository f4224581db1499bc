"""Join parser output (CoNLL-U, bracketed trees) onto pair records by id.

CoNLL-U ``sent_id`` values name the record and the sentence role:
``<record id>.long``, ``<record id>.s1`` and ``<record id>.s2``; a bare
``<record id>`` is taken as the long sentence. Tree sidecars are keyed by
record id (``<record id>.long`` also accepted).
"""

from __future__ import annotations

import dataclasses
from typing import Iterable, Iterator, Mapping

from .corpus import PairRecord, Sentence
from .parse_io import ConllSentence, ConstituencyTree

ROLES = ("long", "s1", "s2")


def apply_conll(sentence: Sentence, conll: ConllSentence) -> Sentence:
    """Take tokens, lemmas, UPOS and heads from the parse; keep the text."""
    return Sentence(
        text=sentence.text,
        tokens=conll.tokens,
        lemmas=conll.lemmas,
        upos=conll.upos,
        heads=conll.graph.heads,
        deprels=conll.graph.deprels,
        tree=sentence.tree,
    )


def attach_conllu(record: PairRecord, parses: Mapping[str, ConllSentence]) -> PairRecord:
    sents = {"long": record.long, "s1": record.s1, "s2": record.s2}
    for role in ROLES:
        conll = parses.get(f"{record.id}.{role}")
        if conll is None and role == "long":
            conll = parses.get(record.id)
        if conll is not None:
            sents[role] = apply_conll(sents[role], conll)
    return record.replace(long=sents["long"], split=(sents["s1"], sents["s2"]))


def attach_tree(record: PairRecord, trees: Mapping[str, ConstituencyTree | str]) -> PairRecord:
    tree = trees.get(record.id, trees.get(f"{record.id}.long"))
    if tree is None:
        return record
    text = tree if isinstance(tree, str) else tree.to_bracketed()
    return record.replace(long=dataclasses.replace(record.long, tree=text))


def annotate(
    records: Iterable[PairRecord],
    parses: Mapping[str, ConllSentence] | None = None,
    trees: Mapping[str, ConstituencyTree | str] | None = None,
) -> Iterator[PairRecord]:
    for rec in records:
        if parses:
            rec = attach_conllu(rec, parses)
        if trees:
            rec = attach_tree(rec, trees)
        yield rec
