"""Input checks used at estimator and CLI boundaries."""

from __future__ import annotations

import json
from typing import Any, Iterable

from .corpus import EditAlignment, PairRecord, SplitCategory
from .text import PAD, SEP


def check_record(obj: Any) -> PairRecord:
    """Coerce a record, its dict form, or a JSON line into a PairRecord."""
    if isinstance(obj, PairRecord):
        return obj
    if isinstance(obj, str):
        obj = json.loads(obj)
    if isinstance(obj, dict):
        return PairRecord.from_dict(obj)
    raise TypeError(f"expected a PairRecord, dict or JSON string, got {type(obj).__name__}")


def check_records(X: Iterable[Any]) -> list[PairRecord]:
    if X is None or isinstance(X, (str, bytes, dict, PairRecord)):
        raise TypeError("expected an iterable of records")
    records = [check_record(x) for x in X]
    ids = [r.id for r in records]
    if len(set(ids)) != len(ids):
        seen: set[str] = set()
        dup = next(i for i in ids if i in seen or seen.add(i))
        raise ValueError(f"duplicate record id {dup!r}")
    return records


def check_alignment(alignment: EditAlignment) -> EditAlignment:
    """Raise ValueError unless the alignment satisfies its structural
    invariants, including the category-specific label shapes."""
    x, y, d = alignment.x_padded, alignment.y_padded, alignment.delta
    n = len(d)
    if not (len(x) == len(y) == n):
        raise ValueError("padded sequences and labels differ in length")
    if any(v not in (0, 1) for v in d):
        raise ValueError("labels must be 0/1")
    if alignment.split_x != alignment.split_y:
        raise ValueError("split positions are not aligned")
    if not 0 <= alignment.split_y < n or y[alignment.split_y] != SEP:
        raise ValueError(f"{SEP} is not at the split position")
    if sum(1 for t in y if t == SEP) != 1:
        raise ValueError(f"target must contain exactly one {SEP}")
    for i, (a, b, v) in enumerate(zip(x, y, d)):
        if v == 0 and a != b:
            raise ValueError(f"position {i} is labelled copy but {a!r} != {b!r}")
        if a == PAD and b == PAD:
            raise ValueError(f"position {i} is padding on both sides")
    support = [i for i, v in enumerate(d) if v]
    cat = alignment.category
    if cat is SplitCategory.DIRECT_INSERTION and len(support) > 3:
        raise ValueError("direct insertion labels more than three positions")
    if cat is SplitCategory.CHANGES_ACROSS_SENTENCE and len(support) != n:
        raise ValueError("changes-across-sentence must label every position")
    if cat is SplitCategory.CHANGES_NEAR_SPLIT:
        if not support or support != list(range(support[0], support[-1] + 1)):
            raise ValueError("near-split labels are not contiguous")
        if alignment.split_y not in support:
            raise ValueError("near-split window misses the split")
    return alignment
