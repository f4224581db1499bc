"""Read-only paraphrase lookup backed by PPDB-style rule files."""

from __future__ import annotations

import gzip
import os
from collections import defaultdict
from typing import Iterable


class ParaphraseTable:
    """Symmetric phrase -> paraphrases map. Keys are lowercased and
    whitespace-normalised."""

    def __init__(self, pairs: Iterable[tuple[str, str]] = ()):
        self._entries: dict[str, set[str]] = defaultdict(set)
        for a, b in pairs:
            self.add(a, b)

    @staticmethod
    def _norm(phrase: str) -> str:
        return " ".join(phrase.lower().split())

    def add(self, a: str, b: str) -> None:
        a, b = self._norm(a), self._norm(b)
        if not a or not b or a == b:
            return
        self._entries[a].add(b)
        self._entries[b].add(a)

    def paraphrases(self, phrase: str) -> frozenset[str]:
        return frozenset(self._entries.get(self._norm(phrase), ()))

    def __contains__(self, phrase: str) -> bool:
        return self._norm(phrase) in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    @property
    def entries(self) -> dict[str, frozenset[str]]:
        return {k: frozenset(v) for k, v in self._entries.items()}

    @classmethod
    def load(cls, path: str | os.PathLike) -> "ParaphraseTable":
        """Load ``LHS ||| PHRASE ||| PARAPHRASE ||| ...`` lines (gzip ok).

        Only the phrase and paraphrase fields are used.
        """
        opener = gzip.open if str(path).endswith(".gz") else open
        table = cls()
        with opener(path, "rt", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                fields = [f.strip() for f in line.split("|||")]
                if len(fields) < 3:
                    raise ValueError(f"{path}:{lineno}: expected at least 3 '|||' fields")
                table.add(fields[1], fields[2])
        return table
