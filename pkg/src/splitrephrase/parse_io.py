"""Bracketed constituency trees, CoNLL-U dependency files, and first-level
pattern matching over trees."""

from __future__ import annotations

import os
import re
from dataclasses import dataclass
from typing import Iterator, Sequence

from .text import BRACKET_TAGS, is_punct_token


class BracketParseError(ValueError):
    def __init__(self, message: str, offset: int):
        self.offset = offset
        super().__init__(f"{message} at offset {offset}")


class ConllError(ValueError):
    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        where = f"line {lineno}: " if lineno is not None else ""
        super().__init__(where + message)


@dataclass(frozen=True)
class ConstituencyTree:
    """A tree node. Pre-terminals are leaves: ``(DT the)`` is a node labelled
    ``DT`` with ``leaf_token='the'`` and no children."""

    label: str
    children: tuple["ConstituencyTree", ...] = ()
    leaf_token: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        if not self.label:
            raise ValueError("tree labels must be non-empty")
        if self.leaf_token is not None and self.children:
            raise ValueError("a leaf cannot have children")
        if self.leaf_token is None and not self.children:
            raise ValueError("an internal node needs at least one child")

    @property
    def is_leaf(self) -> bool:
        return self.leaf_token is not None

    def leaves(self) -> list[str]:
        if self.is_leaf:
            return [self.leaf_token]
        out: list[str] = []
        for child in self.children:
            out.extend(child.leaves())
        return out

    def to_bracketed(self) -> str:
        if self.is_leaf:
            return f"({self.label} {self.leaf_token})"
        return "({} {})".format(self.label, " ".join(c.to_bracketed() for c in self.children))

    def __str__(self) -> str:
        return self.to_bracketed()


_TOKEN_RE = re.compile(r"\(|\)|[^\s()]+")

# Label used for the unlabelled outer bracket of "( (S ...) )" treebank lines.
ROOT_LABEL = "ROOT"


def parse_bracketed(text: str) -> ConstituencyTree:
    """Parse one Penn-Treebank style tree.

    Whitespace between tokens is irrelevant. An unlabelled outer bracket gets
    the label ``ROOT``.

    Raises:
        BracketParseError: on empty input, unbalanced parentheses (the offset
            of the offending bracket is reported) or malformed nodes.
    """
    tokens = [(m.group(), m.start()) for m in _TOKEN_RE.finditer(text)]
    if not tokens:
        raise BracketParseError("empty tree", 0)
    if tokens[0][0] != "(":
        raise BracketParseError("tree must start with '('", tokens[0][1])

    # Each frame: [label, children, offset of its "(", leaf token]
    stack: list[list] = []
    root: ConstituencyTree | None = None
    i = 0
    while i < len(tokens):
        tok, off = tokens[i]
        if root is not None:
            raise BracketParseError("trailing content after tree", off)
        if tok == "(":
            label = ""
            if i + 1 < len(tokens) and tokens[i + 1][0] not in "()":
                label = tokens[i + 1][0]
                i += 1
            stack.append([label, [], off, None])
        elif tok == ")":
            if not stack:
                raise BracketParseError("unmatched ')'", off)
            label, children, start, leaf = stack.pop()
            if not label:
                if stack:
                    raise BracketParseError("unlabelled inner node", start)
                label = ROOT_LABEL
            if leaf is None and not children:
                raise BracketParseError(f"empty node {label!r}", start)
            if leaf is not None and children:
                raise BracketParseError(f"node {label!r} mixes a token and subtrees", start)
            node = ConstituencyTree(label, tuple(children), leaf)
            if stack:
                stack[-1][1].append(node)
            else:
                root = node
        else:
            if not stack:
                raise BracketParseError("token outside brackets", off)
            frame = stack[-1]
            if frame[1] or frame[3] is not None:
                raise BracketParseError(f"unexpected token {tok!r}", off)
            frame[3] = tok
        i += 1
    if stack:
        raise BracketParseError("unclosed '('", stack[0][2])
    return root


def unwrap_root(tree: ConstituencyTree) -> ConstituencyTree:
    """Strip ROOT/TOP wrappers that have a single child."""
    while tree.label in (ROOT_LABEL, "TOP") and len(tree.children) == 1:
        tree = tree.children[0]
    return tree


def base_label(label: str) -> str:
    """Drop functional suffixes: ``S-TPC-1`` -> ``S``, ``NP=2`` -> ``NP``."""
    if label in BRACKET_TAGS or label.startswith("-"):
        return label
    return re.split(r"[-=]", label, maxsplit=1)[0] or label


def is_punct_label(label: str) -> bool:
    return label in BRACKET_TAGS or label in ("``", "''") or is_punct_token(label)


def first_level_labels(tree: ConstituencyTree, skip_punct: bool = True) -> list[str]:
    labels = [base_label(child.label) for child in tree.children]
    if skip_punct:
        labels = [lab for lab in labels if not is_punct_label(lab)]
    return labels


def matches_pattern(labels: Sequence[str], pattern: Sequence[str]) -> bool:
    """True iff ``pattern`` occurs contiguously inside ``labels``."""
    labels, pattern = list(labels), list(pattern)
    k = len(pattern)
    return any(labels[i : i + k] == pattern for i in range(len(labels) - k + 1))


# --------------------------------------------------------------------------
# Dependencies


@dataclass(frozen=True)
class DependencyGraph:
    """Heads are 1-based token indices; 0 marks the artificial root."""

    n: int
    heads: tuple[int, ...]
    deprels: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "heads", tuple(int(h) for h in self.heads))
        deprels = tuple(self.deprels) or ("",) * self.n
        object.__setattr__(self, "deprels", deprels)
        if len(self.heads) != self.n or len(self.deprels) != self.n:
            raise ValueError(
                f"graph has n={self.n} but {len(self.heads)} heads / {len(self.deprels)} deprels"
            )
        if any(h < 0 or h > self.n for h in self.heads):
            raise ValueError(f"head index out of range [0, {self.n}]")
        if self.n and 0 not in self.heads:
            raise ValueError("no token is attached to the root")


@dataclass(frozen=True)
class ConllSentence:
    sent_id: str
    text: str | None
    tokens: tuple[str, ...]
    lemmas: tuple[str, ...]
    upos: tuple[str, ...]
    graph: DependencyGraph


def _finish(block, comments, start_line, seen) -> ConllSentence:
    sent_id = comments.get("sent_id")
    if sent_id is None:
        raise ConllError("sentence without '# sent_id'", start_line)
    if sent_id in seen:
        raise ConllError(f"duplicate sent_id {sent_id!r}", start_line)
    seen.add(sent_id)
    tokens, lemmas, upos, heads, deprels = [], [], [], [], []
    for lineno, cols in block:
        if not cols[0].isdigit():
            raise ConllError(f"bad token id {cols[0]!r}", lineno)
        if int(cols[0]) != len(tokens) + 1:
            raise ConllError(f"token id {cols[0]} out of sequence", lineno)
        try:
            head = int(cols[6])
        except ValueError:
            raise ConllError(f"non-integer head {cols[6]!r}", lineno) from None
        tokens.append(cols[1])
        lemmas.append(cols[2])
        upos.append(cols[3])
        heads.append(head)
        deprels.append(cols[7])
    try:
        graph = DependencyGraph(len(tokens), heads, deprels)
    except ValueError as exc:
        raise ConllError(str(exc), start_line) from None
    return ConllSentence(
        sent_id, comments.get("text"), tuple(tokens), tuple(lemmas), tuple(upos), graph
    )


def iter_conllu(path: str | os.PathLike) -> Iterator[ConllSentence]:
    """Stream sentences from a CoNLL-U file.

    Multiword-token ranges (``3-4``) and empty nodes (``5.1``) are skipped.
    """
    seen: set[str] = set()
    block: list[tuple[int, list[str]]] = []
    comments: dict[str, str] = {}
    start = 1
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n").rstrip("\r")
            if not line.strip():
                if block:
                    yield _finish(block, comments, start, seen)
                block, comments = [], {}
                continue
            if line.startswith("#"):
                if not block and not comments:
                    start = lineno
                key, eq, value = line[1:].partition("=")
                if eq:
                    comments[key.strip()] = value.strip()
                continue
            if not block and not comments:
                start = lineno
            cols = line.split("\t")
            if len(cols) != 10:
                raise ConllError(f"expected 10 tab-separated columns, got {len(cols)}", lineno)
            if "-" in cols[0] or "." in cols[0]:
                continue
            block.append((lineno, cols))
    if block:
        yield _finish(block, comments, start, seen)


def read_conllu(path: str | os.PathLike) -> dict[str, ConllSentence]:
    return {s.sent_id: s for s in iter_conllu(path)}


def write_conllu(sentences: Sequence[ConllSentence], path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for sent in sentences:
            fh.write(f"# sent_id = {sent.sent_id}\n")
            if sent.text is not None:
                fh.write(f"# text = {sent.text}\n")
            for i, tok in enumerate(sent.tokens):
                cols = [
                    str(i + 1), tok, sent.lemmas[i], sent.upos[i], "_", "_",
                    str(sent.graph.heads[i]), sent.graph.deprels[i] or "_", "_", "_",
                ]
                fh.write("\t".join(cols) + "\n")
            fh.write("\n")


def read_trees(path: str | os.PathLike) -> dict[str, ConstituencyTree]:
    """Read a tree sidecar: one ``<id>\\t<bracketed tree>`` per line."""
    trees: dict[str, ConstituencyTree] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            key, tab, text = line.rstrip("\n").partition("\t")
            if not tab:
                raise ValueError(f"{path}:{lineno}: expected '<id>\\t<tree>'")
            if key in trees:
                raise ValueError(f"{path}:{lineno}: duplicate id {key!r}")
            try:
                trees[key] = parse_bracketed(text)
            except BracketParseError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from None
    return trees
