"""Pair records and their JSON Lines persistence.

Every pipeline stage reads and writes the same line-delimited format::

    {"id": "...", "long": {...}, "split": [{...}, {...}],
     "pivot_language": "de", "source_corpus": "EMEA", "scores": {...},
     "category": "ChangesNearSplit", "status": "filtered", "reason": null, ...}

Optional keys are omitted when empty so fixtures stay readable.
"""

from __future__ import annotations

import dataclasses
import enum
import json
import logging
import os
from dataclasses import dataclass, field
from typing import Any, Iterable, Iterator, Mapping, Sequence

from .text import simple_tokenize

logger = logging.getLogger(__name__)


class SplitCategory(str, enum.Enum):
    DIRECT_INSERTION = "DirectInsertion"
    CHANGES_NEAR_SPLIT = "ChangesNearSplit"
    CHANGES_ACROSS_SENTENCE = "ChangesAcrossSentence"

    @property
    def index(self) -> int:
        """Position of the category in classifier probability vectors."""
        return list(SplitCategory).index(self)


class Status(str, enum.Enum):
    RAW = "raw"
    FILTERED = "filtered"
    REJECTED = "rejected"


class RecordError(ValueError):
    """A single malformed input record; carries the 1-based line number."""

    def __init__(self, lineno: int | None, message: str):
        self.lineno = lineno
        self.message = message
        where = f"line {lineno}: " if lineno is not None else ""
        super().__init__(where + message)


def _opt_tuple(values):
    return None if values is None else tuple(values)


@dataclass(frozen=True)
class Sentence:
    """One sentence with optional token-aligned annotations.

    ``heads``/``deprels`` hold a dependency parse (0 = root, 1-based heads)
    and ``tree`` a bracketed constituency parse; both are filled in by the
    annotation join and travel with the record afterwards.
    """

    text: str
    tokens: tuple[str, ...]
    lemmas: tuple[str, ...] | None = None
    upos: tuple[str, ...] | None = None
    heads: tuple[int, ...] | None = None
    deprels: tuple[str, ...] | None = None
    tree: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))
        for name in ("lemmas", "upos", "heads", "deprels"):
            value = _opt_tuple(getattr(self, name))
            object.__setattr__(self, name, value)
            if value is not None and len(value) != len(self.tokens):
                raise ValueError(
                    f"{name} has {len(value)} entries for {len(self.tokens)} tokens"
                )

    @classmethod
    def from_text(cls, text: str) -> "Sentence":
        return cls(text=text, tokens=tuple(simple_tokenize(text)))

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"text": self.text, "tokens": list(self.tokens)}
        for name in ("lemmas", "upos", "heads", "deprels"):
            value = getattr(self, name)
            if value is not None:
                out[name] = list(value)
        if self.tree is not None:
            out["tree"] = self.tree
        return out

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "Sentence":
        if not isinstance(data, Mapping):
            raise TypeError("sentence must be an object")
        text = data.get("text")
        tokens = data.get("tokens")
        if tokens is None:
            if text is None:
                raise KeyError("sentence needs 'text' or 'tokens'")
            tokens = simple_tokenize(text)
        if text is None:
            text = " ".join(tokens)
        return cls(
            text=text,
            tokens=tuple(tokens),
            lemmas=data.get("lemmas"),
            upos=data.get("upos"),
            heads=data.get("heads"),
            deprels=data.get("deprels"),
            tree=data.get("tree"),
        )


@dataclass(frozen=True)
class EditAlignment:
    """Padded source/target sequences with per-position edit labels.

    ``split_x`` and ``split_y`` are indices into the padded sequences; the
    padding keeps them equal.  ``category`` is the labelling scheme that
    produced ``delta`` (it can differ from the record's original category
    when the labeller had to widen the scheme).
    """

    x_padded: tuple[str, ...]
    y_padded: tuple[str, ...]
    split_x: int
    split_y: int
    delta: tuple[int, ...]
    category: SplitCategory | None = None

    def __post_init__(self):
        object.__setattr__(self, "x_padded", tuple(self.x_padded))
        object.__setattr__(self, "y_padded", tuple(self.y_padded))
        object.__setattr__(self, "delta", tuple(int(d) for d in self.delta))
        if self.category is not None:
            object.__setattr__(self, "category", SplitCategory(self.category))
        n = len(self.delta)
        if not (len(self.x_padded) == len(self.y_padded) == n):
            raise ValueError(
                f"length mismatch: x={len(self.x_padded)} y={len(self.y_padded)} delta={n}"
            )

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "x_padded": list(self.x_padded),
            "y_padded": list(self.y_padded),
            "split_x": self.split_x,
            "split_y": self.split_y,
            "delta": list(self.delta),
        }
        if self.category is not None:
            out["category"] = self.category.value
        return out

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "EditAlignment":
        return cls(
            x_padded=data["x_padded"],
            y_padded=data["y_padded"],
            split_x=int(data["split_x"]),
            split_y=int(data["split_y"]),
            delta=data["delta"],
            category=data.get("category"),
        )


@dataclass(frozen=True)
class PairRecord:
    """An aligned long sentence and its two-sentence split.

    ``scores`` is treated as read-only; use :meth:`with_scores` to extend it.
    """

    id: str
    long: Sentence
    split: tuple[Sentence, Sentence]
    pivot_language: str = ""
    source_corpus: str = ""
    scores: dict[str, float] = field(default_factory=dict)
    category: SplitCategory | None = None
    alignment: EditAlignment | None = None
    status: Status = Status.RAW
    reason: str | None = None
    tags: tuple[str, ...] = ()

    def __post_init__(self):
        split = tuple(self.split)
        if len(split) != 2:
            raise ValueError(f"split must have exactly two sentences, got {len(split)}")
        object.__setattr__(self, "split", split)
        object.__setattr__(self, "status", Status(self.status))
        object.__setattr__(self, "tags", tuple(self.tags))
        object.__setattr__(self, "scores", dict(self.scores))
        if self.category is not None:
            object.__setattr__(self, "category", SplitCategory(self.category))
        if self.status is Status.REJECTED and not self.reason:
            raise ValueError("rejected records need a reason")
        if self.status is not Status.REJECTED and self.reason is not None:
            raise ValueError("only rejected records carry a reason")

    @property
    def s1(self) -> Sentence:
        return self.split[0]

    @property
    def s2(self) -> Sentence:
        return self.split[1]

    def replace(self, **changes) -> "PairRecord":
        return dataclasses.replace(self, **changes)

    def with_scores(self, **scores: float) -> "PairRecord":
        return self.replace(scores={**self.scores, **scores})

    def with_tag(self, tag: str) -> "PairRecord":
        if tag in self.tags:
            return self
        return self.replace(tags=self.tags + (tag,))

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "id": self.id,
            "long": self.long.to_dict(),
            "split": [s.to_dict() for s in self.split],
            "pivot_language": self.pivot_language,
            "source_corpus": self.source_corpus,
            "scores": dict(sorted(self.scores.items())),
            "status": self.status.value,
        }
        if self.reason is not None:
            out["reason"] = self.reason
        if self.category is not None:
            out["category"] = self.category.value
        if self.alignment is not None:
            out["alignment"] = self.alignment.to_dict()
        if self.tags:
            out["tags"] = list(self.tags)
        return out

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "PairRecord":
        for key in ("id", "long", "split"):
            if key not in data:
                raise KeyError(f"missing field {key!r}")
        split = data["split"]
        if not isinstance(split, Sequence) or len(split) != 2:
            raise ValueError("'split' must be a list of two sentences")
        alignment = data.get("alignment")
        return cls(
            id=str(data["id"]),
            long=Sentence.from_dict(data["long"]),
            split=(Sentence.from_dict(split[0]), Sentence.from_dict(split[1])),
            pivot_language=data.get("pivot_language", ""),
            source_corpus=data.get("source_corpus", ""),
            scores={k: float(v) for k, v in data.get("scores", {}).items()},
            category=data.get("category"),
            alignment=None if alignment is None else EditAlignment.from_dict(alignment),
            status=data.get("status", Status.RAW.value),
            reason=data.get("reason"),
            tags=data.get("tags", ()),
        )


def dumps_record(record: PairRecord) -> str:
    return json.dumps(record.to_dict(), ensure_ascii=False)


def loads_record(line: str, lineno: int | None = None) -> PairRecord:
    try:
        data = json.loads(line)
    except json.JSONDecodeError as exc:
        raise RecordError(lineno, f"invalid JSON: {exc.msg}") from None
    if not isinstance(data, dict):
        raise RecordError(lineno, "record must be a JSON object")
    try:
        return PairRecord.from_dict(data)
    except (KeyError, TypeError, ValueError) as exc:
        msg = exc.args[0] if exc.args else str(exc)
        raise RecordError(lineno, str(msg)) from None


def read_pairs(
    path: str | os.PathLike, errors: list[RecordError] | None = None
) -> Iterator[PairRecord]:
    """Yield records from a JSON Lines file in file order.

    Malformed lines do not stop the stream. Each one becomes a
    :class:`RecordError`; it is appended to ``errors`` when a list is given,
    otherwise logged as a warning. Blank lines are skipped.
    """
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = loads_record(line, lineno)
                if record.id in seen:
                    raise RecordError(lineno, f"duplicate id {record.id!r}")
            except RecordError as err:
                if errors is None:
                    logger.warning("%s: %s", path, err)
                else:
                    errors.append(err)
                continue
            seen.add(record.id)
            yield record


def write_pairs(records: Iterable[PairRecord], path: str | os.PathLike) -> int:
    """Write one JSON object per line and return how many were written."""
    n = 0
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(dumps_record(record))
            fh.write("\n")
            n += 1
    return n
