"""Token-level helpers shared across the pipeline."""

from __future__ import annotations

import re
import unicodedata

SEP = "[SEP]"
PAD = "[PAD]"
RESERVED = frozenset({SEP, PAD})

SENTENCE_FINAL = frozenset({".", "!", "?"})

# Bracket tags used by Penn-style treebanks in place of literal parentheses.
BRACKET_TAGS = frozenset({"-LRB-", "-RRB-", "-LCB-", "-RCB-", "-LSB-", "-RSB-"})

_LEADING = "\"'([{«“‘"
_TRAILING = "\"'.,;:!?)]}»”’"
_EDGE = re.compile(
    r"^([{lead}]*)(.*?)([{trail}]*)$".format(
        lead=re.escape(_LEADING), trail=re.escape(_TRAILING)
    ),
    re.DOTALL,
)


def is_punct_char(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def is_alpha_char(ch: str) -> bool:
    return unicodedata.category(ch).startswith("L")


def is_punct_token(token: str) -> bool:
    """True when every character of ``token`` is Unicode punctuation."""
    return bool(token) and all(is_punct_char(c) for c in token)


def simple_tokenize(text: str) -> list[str]:
    """Whitespace tokenization that peels quotes, brackets and trailing
    punctuation off each chunk.

    Punctuation *inside* a chunk is left alone, so ``"left.She"`` stays one
    token; this is what the intra-token punctuation filter relies on.
    """
    tokens: list[str] = []
    for chunk in text.split():
        if chunk in RESERVED:
            tokens.append(chunk)
            continue
        lead, core, trail = _EDGE.match(chunk).groups()
        tokens.extend(lead)
        if core:
            tokens.append(core)
        tokens.extend(trail)
    return tokens


def metric_tokens(text: str, sep: str = SEP) -> list[str]:
    """Lowercased whitespace tokens with separator tokens removed."""
    return [t for t in text.lower().split() if t != sep.lower()]
