"""Evaluate the split-focused sequence loss on externally produced
probabilities. Nothing here trains a model.

Per position ``i`` the target is the source token where ``delta[i] == 0`` and
the target token where ``delta[i] == 1``; the loss is the mean negative log
probability of those targets. The probabilities are expected to have been
computed with the mixed history from :func:`mix_history` as decoder input.

Probability archives are ``.npz`` files holding::

    vocab          1-D str array, column labels shared by every matrix
    <record id>    float array (positions x vocab)
    cls/<id>       optional float array of 3 category probabilities
"""

from __future__ import annotations

import logging
import math
import os
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .corpus import EditAlignment, SplitCategory

logger = logging.getLogger(__name__)

ROW_TOL = 1e-6


@dataclass(frozen=True)
class ProbMatrix:
    rows: np.ndarray
    vocab: tuple[str, ...]

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=np.float64)
        if rows.ndim != 2:
            raise ValueError("probability rows must be 2-D")
        if rows.shape[1] != len(self.vocab):
            raise ValueError(f"{rows.shape[1]} columns for a vocabulary of {len(self.vocab)}")
        if np.any(rows < 0):
            raise ValueError("negative probability")
        bad = np.flatnonzero(np.abs(rows.sum(axis=1) - 1.0) > ROW_TOL)
        if bad.size:
            raise ValueError(f"row {bad[0]} does not sum to 1")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "vocab", tuple(self.vocab))
        object.__setattr__(self, "_index", {tok: i for i, tok in enumerate(self.vocab)})

    def column(self, token: str) -> int:
        try:
            return self._index[token]
        except KeyError:
            raise KeyError(f"token {token!r} not in vocabulary") from None


@dataclass(frozen=True)
class ClassProbs:
    probs: tuple[float, float, float]

    def __post_init__(self):
        probs = tuple(float(p) for p in self.probs)
        if len(probs) != len(SplitCategory):
            raise ValueError(f"expected {len(SplitCategory)} class probabilities")
        if any(p < 0 for p in probs) or abs(sum(probs) - 1.0) > ROW_TOL:
            raise ValueError("class probabilities must be non-negative and sum to 1")
        object.__setattr__(self, "probs", probs)

    def __getitem__(self, category: SplitCategory) -> float:
        return self.probs[SplitCategory(category).index]


def mix_history(alignment: EditAlignment) -> list[str]:
    return [
        y if d else x
        for x, y, d in zip(alignment.x_padded, alignment.y_padded, alignment.delta)
    ]


def selected_probs(alignment: EditAlignment, probs: ProbMatrix) -> np.ndarray:
    """Probability assigned to each position's target token."""
    targets = mix_history(alignment)
    if probs.rows.shape[0] != len(targets):
        raise ValueError(
            f"{probs.rows.shape[0]} probability rows for {len(targets)} positions"
        )
    cols = [probs.column(t) for t in targets]
    return probs.rows[np.arange(len(cols)), cols]


def seq_loss(alignment: EditAlignment, probs: ProbMatrix) -> float:
    p = selected_probs(alignment, probs)
    with np.errstate(divide="ignore"):
        return float(np.mean(-np.log(p)))


def joint_loss(seq: float, cls: ClassProbs, gold: SplitCategory, weight: float = 1.0) -> float:
    """``seq + weight * -log P(gold)``; infinite if the gold class has zero mass."""
    if weight < 0:
        raise ValueError("weight must be non-negative")
    p = cls[gold]
    if weight == 0:
        return float(seq)
    if p == 0.0:
        logger.warning("gold class %s has zero probability; loss is infinite", gold.value)
        return math.inf
    return float(seq) - weight * math.log(p)


def corpus_loss(losses: Sequence[float]) -> float:
    if not losses:
        raise ValueError("no losses to average")
    return float(np.mean(losses))


def load_prob_archive(
    path: str | os.PathLike,
) -> tuple[dict[str, ProbMatrix], dict[str, ClassProbs]]:
    with np.load(path, allow_pickle=False) as data:
        if "vocab" not in data.files:
            raise ValueError(f"{path}: missing 'vocab' array")
        vocab = tuple(str(v) for v in data["vocab"])
        seqs: dict[str, ProbMatrix] = {}
        classes: dict[str, ClassProbs] = {}
        for key in data.files:
            if key == "vocab":
                continue
            if key.startswith("cls/"):
                classes[key[4:]] = ClassProbs(tuple(data[key]))
            else:
                seqs[key] = ProbMatrix(data[key], vocab)
    return seqs, classes


def save_prob_archive(
    path: str | os.PathLike,
    vocab: Sequence[str],
    seqs: Mapping[str, np.ndarray],
    classes: Mapping[str, Sequence[float]] | None = None,
) -> None:
    arrays = {"vocab": np.asarray(list(vocab), dtype=str)}
    for key, rows in seqs.items():
        if key == "vocab" or key.startswith("cls/"):
            raise ValueError(f"reserved archive key {key!r}")
        arrays[key] = np.asarray(rows, dtype=np.float64)
    for key, probs in (classes or {}).items():
        arrays["cls/" + key] = np.asarray(probs, dtype=np.float64)
    with open(path, "wb") as fh:
        np.savez(fh, **arrays)
