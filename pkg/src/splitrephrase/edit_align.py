"""Padded source/target alignment and binary edit labels.

The target is ``s1 [SEP] s2``.  The source is cut at the edit nearest the
separator, and both halves are padded with ``[PAD]`` so the separator sits at
the same index in both sequences.  Edit labels then depend on the category:

* direct insertion: the split position and its two neighbours;
* changes near split: a window grown outwards from the split until it meets
  a run of ``run_length`` copied positions (or a copied run touching the
  sequence edge);
* changes across sentence: every position.
"""

from __future__ import annotations

from typing import Sequence

from .categorize import choose_split, source_target
from .corpus import EditAlignment, PairRecord, SplitCategory
from .diff import DiffScript, token_diff
from .text import PAD, SEP

ESCALATION = (
    SplitCategory.DIRECT_INSERTION,
    SplitCategory.CHANGES_NEAR_SPLIT,
    SplitCategory.CHANGES_ACROSS_SENTENCE,
)


def _sep_index(y: Sequence[str]) -> int:
    n = sum(1 for t in y if t == SEP)
    if n != 1:
        raise ValueError(f"target must contain exactly one {SEP}, found {n}")
    return list(y).index(SEP)


def _split_hunk(diff: DiffScript, split_y: int):
    hunks = diff.hunks()
    for hunk in hunks:
        if hunk.y_start <= split_y < hunk.y_end:
            return hunk
    if not hunks:
        return None

    def distance(h):
        if split_y < h.y_start:
            return h.y_start - split_y
        return max(0, split_y - max(h.y_end - 1, h.y_start))

    return min(hunks, key=distance)


def locate_split(diff: DiffScript, y: Sequence[str]) -> tuple[int, int]:
    """Return ``(split_x, split_y)``.

    ``split_y`` is the separator index.  ``split_x`` is the x offset of the
    edit whose y-span holds the separator (nearest edit otherwise, leftmost
    on ties).
    """
    split_y = _sep_index(y)
    hunk = _split_hunk(diff, split_y)
    if hunk is not None:
        return hunk.x_start, split_y
    # No edits at all: map the separator through the copy ops.
    for op, xi, yi in diff.spans():
        if yi <= split_y < yi + len(op.tokens):
            return xi + (split_y - yi), split_y
    return len(diff.source()), split_y


def split_candidates(diff: DiffScript, y: Sequence[str]) -> list[int]:
    """Every cut point inside the x-span of the split edit."""
    split_y = _sep_index(y)
    hunk = _split_hunk(diff, split_y)
    if hunk is None:
        return [locate_split(diff, y)[0]]
    return list(range(hunk.x_start, hunk.x_end + 1))


def pad_align(
    x: Sequence[str], y: Sequence[str], split_x: int, split_y: int
) -> tuple[list[str], list[str]]:
    """Cut ``x`` before index ``split_x`` and ``y`` at its separator, then pad.

    Pre-split pads go at the tail of the shorter left half; post-split pads
    at the head of the shorter right half (after the separator in ``y``).
    The separator ends up at index ``max(split_x, split_y)`` of both.
    """
    if y[split_y] != SEP:
        raise ValueError(f"y[{split_y}] is not {SEP}")
    if not 0 <= split_x <= len(x):
        raise ValueError(f"split_x {split_x} outside [0, {len(x)}]")
    x_pre, x_post = list(x[:split_x]), list(x[split_x:])
    y_pre, y_post = list(y[:split_y]), list(y[split_y + 1 :])
    left = max(len(x_pre), len(y_pre))
    right = max(len(x_post), len(y_post) + 1)
    x_pad = x_pre + [PAD] * (left - len(x_pre)) + [PAD] * (right - len(x_post)) + x_post
    y_pad = (
        y_pre + [PAD] * (left - len(y_pre)) + [SEP] + [PAD] * (right - 1 - len(y_post)) + y_post
    )
    return x_pad, y_pad


def align_pair(pair: PairRecord) -> tuple[list[str], list[str], int]:
    """Padded x, padded y and the shared split index for a record."""
    x, y = source_target(pair)
    diff = token_diff(x, y)
    split_y = _sep_index(y)
    cut = choose_split(split_candidates(diff, y), (pair.s1.tokens, pair.s2.tokens))
    x_pad, y_pad = pad_align(x, y, cut, split_y)
    return x_pad, y_pad, max(cut, split_y)


def _window_edge(copied: list[bool], start: int, step: int, run_length: int) -> int:
    """Walk from ``start`` in direction ``step``; return the last index that
    belongs to the window."""
    n = len(copied)
    i = start
    last = start - step
    while 0 <= i < n:
        if not copied[i]:
            last = i
            i += step
            continue
        j = i
        while 0 <= j + step < n and copied[j + step]:
            j += step
        run = abs(j - i) + 1
        hits_edge = not (0 <= j + step < n)
        if run >= run_length or hits_edge:
            return last
        last = j
        i = j + step
    return last


def delta_for(
    category: SplitCategory,
    x_padded: Sequence[str],
    y_padded: Sequence[str],
    split: int,
    run_length: int = 3,
) -> list[int]:
    n = len(x_padded)
    if len(y_padded) != n:
        raise ValueError(f"padded lengths differ: {n} vs {len(y_padded)}")
    if not 0 <= split < n:
        raise ValueError(f"split {split} outside sequence of length {n}")
    category = SplitCategory(category)
    if category is SplitCategory.CHANGES_ACROSS_SENTENCE:
        return [1] * n
    if category is SplitCategory.DIRECT_INSERTION:
        return [1 if abs(i - split) <= 1 else 0 for i in range(n)]
    copied = [a == b for a, b in zip(x_padded, y_padded)]
    lo = _window_edge(copied, split - 1, -1, run_length)
    hi = _window_edge(copied, split + 1, 1, run_length)
    lo, hi = min(lo, split), max(hi, split)
    return [1 if lo <= i <= hi else 0 for i in range(n)]


def uncovered_edits(x_padded, y_padded, delta) -> list[int]:
    """Positions labelled 0 whose tokens differ."""
    return [i for i, (a, b, d) in enumerate(zip(x_padded, y_padded, delta)) if not d and a != b]


def build_delta(
    pair: PairRecord,
    category: SplitCategory | None = None,
    alignment: tuple[Sequence[str], Sequence[str], int] | None = None,
    *,
    run_length: int = 3,
    on_violation: str = "escalate",
) -> EditAlignment:
    """Edit labels for a categorised pair.

    If the category's labelling would leave a changed position at 0 (say a
    direct-insertion pair that also rewrites a word far from the split),
    ``on_violation="escalate"`` retries with the next wider scheme (near
    split, then across sentence).  ``"keep"`` returns the labels as-is, so
    those positions fall back to copying the source.  The scheme actually
    used is stored in ``EditAlignment.category``.
    """
    if on_violation not in ("escalate", "keep"):
        raise ValueError("on_violation must be 'escalate' or 'keep'")
    if category is None:
        category = pair.category
    if category is None:
        raise ValueError(f"{pair.id}: no category")
    category = SplitCategory(category)
    x_pad, y_pad, split = alignment if alignment is not None else align_pair(pair)
    schemes = ESCALATION[ESCALATION.index(category):] if on_violation == "escalate" else (category,)
    for scheme in schemes:
        delta = delta_for(scheme, x_pad, y_pad, split, run_length)
        if not uncovered_edits(x_pad, y_pad, delta):
            break
    return EditAlignment(x_pad, y_pad, split, split, delta, category=scheme)
