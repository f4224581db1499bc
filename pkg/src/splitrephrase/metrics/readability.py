"""Flesch-Kincaid grade level with a deterministic syllable heuristic."""

from __future__ import annotations

import re
from typing import Iterable, Sequence

from ..text import SENTENCE_FINAL, SEP, simple_tokenize

_VOWEL_GROUPS = re.compile(r"[aeiouy]+")
_LETTERS = re.compile(r"[^a-z]")


def count_syllables(word: str) -> int:
    """Vowel groups (``y`` counts as a vowel), minus one for a silent final
    ``e`` unless the word ends in consonant + ``le``. Never below 1."""
    w = _LETTERS.sub("", word.lower())
    if not w:
        return 1
    count = len(_VOWEL_GROUPS.findall(w))
    if (
        count > 1
        and w.endswith("e")
        and not (w.endswith("le") and len(w) > 2 and w[-3] not in "aeiouy")
    ):
        count -= 1
    return max(count, 1)


def is_word(token: str) -> bool:
    return any(c.isalnum() for c in token)


def split_sentences(tokens: Sequence[str]) -> list[list[str]]:
    """Break at ``[SEP]`` and sentence-final punctuation; keep word tokens."""
    sentences: list[list[str]] = []
    current: list[str] = []
    for tok in tokens:
        if tok == SEP or tok in SENTENCE_FINAL:
            if current:
                sentences.append(current)
            current = []
        elif is_word(tok):
            current.append(tok)
    if current:
        sentences.append(current)
    return sentences


def text_sentences(text: str) -> list[list[str]]:
    return split_sentences(simple_tokenize(text))


def fkgl(outputs: Iterable[str]) -> float:
    """Corpus FKGL: 0.39 * words/sentences + 11.8 * syllables/words - 15.59,
    with counts pooled over all outputs."""
    n_sent = n_words = n_syll = 0
    for text in outputs:
        for sent in text_sentences(text):
            n_sent += 1
            n_words += len(sent)
            n_syll += sum(count_syllables(w) for w in sent)
    if n_words == 0:
        raise ValueError("FKGL needs at least one word")
    return 0.39 * (n_words / n_sent) + 11.8 * (n_syll / n_words) - 15.59
