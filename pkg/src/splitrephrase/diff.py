"""Recursive longest-common-substring token diff.

Same strategy as the classic ``simplediff`` recipe: take the longest common
contiguous block, emit it as a copy, recurse on what lies left and right of
it. Ties go to the block starting earliest in ``x``, then earliest in ``y``.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Sequence

COPY = "copy"
DELETE = "delete"
INSERT = "insert"


@dataclass(frozen=True)
class DiffOp:
    kind: str
    tokens: tuple[str, ...]

    def __repr__(self) -> str:
        return f"{self.kind.capitalize()}({', '.join(self.tokens)})"


@dataclass(frozen=True)
class Hunk:
    """A maximal run of non-copy ops with its half-open spans in x and y."""

    x_start: int
    x_end: int
    y_start: int
    y_end: int


class DiffScript(tuple):
    """Ordered tuple of :class:`DiffOp` with span helpers."""

    def source(self) -> list[str]:
        return [t for op in self if op.kind != INSERT for t in op.tokens]

    def target(self) -> list[str]:
        return [t for op in self if op.kind != DELETE for t in op.tokens]

    def spans(self) -> list[tuple[DiffOp, int, int]]:
        """Each op with its start offset in x and in y."""
        out = []
        xi = yi = 0
        for op in self:
            out.append((op, xi, yi))
            if op.kind != INSERT:
                xi += len(op.tokens)
            if op.kind != DELETE:
                yi += len(op.tokens)
        return out

    def copied_x(self) -> set[int]:
        """Indices of x tokens that sit inside copy ops."""
        out: set[int] = set()
        for op, xi, _ in self.spans():
            if op.kind == COPY:
                out.update(range(xi, xi + len(op.tokens)))
        return out

    def hunks(self) -> list[Hunk]:
        result: list[Hunk] = []
        current: list[int] | None = None
        for op, xi, yi in self.spans():
            nx = 0 if op.kind == INSERT else len(op.tokens)
            ny = 0 if op.kind == DELETE else len(op.tokens)
            if op.kind == COPY:
                if current is not None:
                    result.append(Hunk(*current))
                    current = None
                continue
            if current is None:
                current = [xi, xi, yi, yi]
            current[1] = xi + nx
            current[3] = yi + ny
        if current is not None:
            result.append(Hunk(*current))
        return result


def _longest_block(x: Sequence[str], y: Sequence[str]) -> tuple[int, int, int]:
    positions: dict[str, list[int]] = defaultdict(list)
    for i, tok in enumerate(x):
        positions[tok].append(i)

    best_len = best_x = best_y = 0
    prev: dict[int, int] = {}
    for j, tok in enumerate(y):
        cur: dict[int, int] = {}
        for i in positions.get(tok, ()):
            length = prev.get(i - 1, 0) + 1
            cur[i] = length
            if length < best_len:
                continue
            sx, sy = i - length + 1, j - length + 1
            if length > best_len or (sx, sy) < (best_x, best_y):
                best_len, best_x, best_y = length, sx, sy
        prev = cur
    return best_x, best_y, best_len


def _diff(x, y, out: list[DiffOp]) -> None:
    if not x and not y:
        return
    sx, sy, length = _longest_block(x, y)
    if length == 0:
        if x:
            out.append(DiffOp(DELETE, tuple(x)))
        if y:
            out.append(DiffOp(INSERT, tuple(y)))
        return
    _diff(x[:sx], y[:sy], out)
    out.append(DiffOp(COPY, tuple(x[sx : sx + length])))
    _diff(x[sx + length :], y[sy + length :], out)


def token_diff(x: Sequence[str], y: Sequence[str]) -> DiffScript:
    ops: list[DiffOp] = []
    _diff(list(x), list(y), ops)
    merged: list[DiffOp] = []
    for op in ops:
        if merged and merged[-1].kind == op.kind:
            merged[-1] = DiffOp(op.kind, merged[-1].tokens + op.tokens)
        else:
            merged.append(op)
    return DiffScript(merged)
