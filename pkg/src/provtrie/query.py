"""Query engine over the trie: wildcard path search, next-step suggestion,
per-depth frequent-pattern lookup.

All queries are read-only and root-anchored: a pattern matches indexed
label sequences from their beginning (mid-run matching is obtained by
building the index from n-gram windows instead).  A wildcard stands for
exactly one arbitrary identifier.  In DG mode traversal follows both
child edges and cycle-edges, so matches may loop through cyclic
structure; label lookup stays unambiguous because the two edge kinds can
never carry the same label from one node.

A match is scored by the product of per-step conditional probabilities,
each step contributing (times this step was taken) / (times the current
node was visited).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .trie import Trie, TrieMode, TrieNode


class EmptyDepth(Exception):
    """No node exists at the requested depth."""


@dataclass(frozen=True)
class QueryPattern:
    """Anchored prefix, a number of single-step wildcards, optional terminal."""

    prefix: tuple[str, ...]
    wildcards: int = 0
    terminal: str | None = None

    def __post_init__(self) -> None:
        if not self.prefix:
            raise ValueError("pattern prefix must be nonempty")
        if self.wildcards < 0:
            raise ValueError(f"wildcard count must be >= 0, got {self.wildcards}")
        if self.terminal is not None and not self.terminal:
            raise ValueError("terminal must be a nonempty identifier when present")

    @property
    def total_length(self) -> int:
        return len(self.prefix) + self.wildcards + (1 if self.terminal is not None else 0)

    def labels(self) -> list[str | None]:
        """Pattern positions in order; None marks a wildcard."""
        out: list[str | None] = list(self.prefix)
        out.extend([None] * self.wildcards)
        if self.terminal is not None:
            out.append(self.terminal)
        return out


@dataclass(frozen=True)
class PathMatch:
    """One concrete matched sequence with its statistics."""

    path: tuple[str, ...]
    freq: int
    likelihood: float


def _step(node: TrieNode, label: str, follow_cycles: bool) -> tuple[TrieNode, float] | None:
    child = node.children.get(label)
    if child is not None:
        return child, child.entry_count / node.freq
    if follow_cycles:
        edge = node.cycles.get(label)
        if edge is not None:
            return edge.target, edge.count / node.freq
    return None


def _transitions(node: TrieNode, follow_cycles: bool) -> Iterator[tuple[str, TrieNode, float]]:
    """All outgoing steps of a node in label order, with step probabilities."""
    if follow_cycles and node.cycles:
        labels = sorted(set(node.children) | set(node.cycles))
    else:
        labels = sorted(node.children)
    for label in labels:
        child = node.children.get(label)
        if child is not None:
            yield label, child, child.entry_count / node.freq
        else:
            edge = node.cycles[label]
            yield label, edge.target, edge.count / node.freq


def locate(trie: Trie, labels: Sequence[str]) -> tuple[TrieNode | None, int]:
    """Position the cursor at a fully anchored label path.

    Returns (node, nodes visited); node is None when the path is absent.
    The visit count is bounded by len(labels): one lookup per symbol.
    """
    follow_cycles = trie.mode is TrieMode.DG
    node = trie.root
    visited = 0
    for label in labels:
        step = _step(node, label, follow_cycles)
        if step is None:
            return None, visited
        node = step[0]
        visited += 1
    return node, visited


def _check_strict(trie: Trie, strict: bool) -> None:
    if strict and trie.n != 0:
        raise ValueError("strict terminal matching applies to whole-sequence indexes only (n=0)")


def q1(trie: Trie, pattern: QueryPattern, strict: bool = False) -> list[PathMatch]:
    """All distinct root-anchored label sequences matching the pattern.

    The result set is exact and complete; only the pattern is
    approximate.  Matches are ordered by likelihood descending, ties
    broken by path.  An unknown first anchor is a no-match result (empty
    list), not an error.  With ``strict`` (whole-sequence indexes only)
    the final node must additionally have ended an inserted sequence.
    """
    if pattern.terminal is None:
        raise ValueError("q1 patterns require a terminal identifier")
    _check_strict(trie, strict)
    labels = pattern.labels()
    follow_cycles = trie.mode is TrieMode.DG
    matches: list[PathMatch] = []
    path: list[str] = []

    def walk(node: TrieNode, i: int, likelihood: float) -> None:
        if i == len(labels):
            if strict and node.terminal_count == 0:
                return
            matches.append(PathMatch(tuple(path), node.freq, likelihood))
            return
        want = labels[i]
        if want is None:
            for label, nxt, p in _transitions(node, follow_cycles):
                path.append(label)
                walk(nxt, i + 1, likelihood * p)
                path.pop()
        else:
            step = _step(node, want, follow_cycles)
            if step is not None:
                path.append(want)
                walk(step[0], i + 1, likelihood * step[1])
                path.pop()

    walk(trie.root, 0, 1.0)
    matches.sort(key=lambda m: (-m.likelihood, m.path))
    return matches


def count_paths(trie: Trie, pattern: QueryPattern, strict: bool = False) -> int:
    """Number of q1 matches, computed without materializing them.

    Counts label sequences by memoizing on (node, pattern position):
    lookup from any node is label-deterministic, so distinct label
    sequences correspond one-to-one to distinct traversals and the counts
    compose.
    """
    if pattern.terminal is None:
        raise ValueError("q1 patterns require a terminal identifier")
    _check_strict(trie, strict)
    labels = pattern.labels()
    total = len(labels)
    follow_cycles = trie.mode is TrieMode.DG
    memo: dict[tuple[int, int], int] = {}

    def count(node: TrieNode, i: int) -> int:
        if i == total:
            if strict and node.terminal_count == 0:
                return 0
            return 1
        key = (id(node), i)
        cached = memo.get(key)
        if cached is not None:
            return cached
        want = labels[i]
        if want is None:
            result = 0
            for child in node.children.values():
                result += count(child, i + 1)
            if follow_cycles:
                for edge in node.cycles.values():
                    result += count(edge.target, i + 1)
        else:
            step = _step(node, want, follow_cycles)
            result = count(step[0], i + 1) if step is not None else 0
        memo[key] = result
        return result

    return count(trie.root, 0)


def q2_suggest(
    trie: Trie, prefix: Sequence[str], ahead: int, top: int
) -> list[tuple[tuple[str, ...], float]]:
    """Most likely length-``ahead`` continuations of ``prefix``.

    Enumerates every continuation reachable from the prefix cursor and
    scores it by the product of step probabilities; the maximization is
    exact over all bounded continuations, not a greedy chain of argmax
    steps.  Returns at most ``top`` results, likelihood descending with
    lexicographic tie-break; an absent prefix yields no suggestions.
    """
    if not prefix:
        raise ValueError("suggestion prefix must be nonempty")
    if ahead < 1:
        raise ValueError(f"lookahead must be >= 1, got {ahead}")
    if top < 1:
        raise ValueError(f"result limit must be >= 1, got {top}")
    cursor, _ = locate(trie, prefix)
    if cursor is None:
        return []
    follow_cycles = trie.mode is TrieMode.DG
    results: list[tuple[tuple[str, ...], float]] = []
    labels: list[str] = []

    def walk(node: TrieNode, left: int, likelihood: float) -> None:
        if left == 0:
            results.append((tuple(labels), likelihood))
            return
        for label, nxt, p in _transitions(node, follow_cycles):
            labels.append(label)
            walk(nxt, left - 1, likelihood * p)
            labels.pop()

    walk(cursor, ahead, 1.0)
    results.sort(key=lambda r: (-r[1], r[0]))
    return results[:top]


def most_probable_at_depth(trie: Trie, depth: int) -> tuple[str, int, float]:
    """The dominant identifier at a depth level.

    Returns (identifier, cumulative frequency, share of the level total);
    frequency ties go to the lexicographically smaller identifier.
    """
    if depth < 1:
        raise ValueError(f"depth must be >= 1, got {depth}")
    table = trie.depth_stats.at(depth)
    if not table:
        raise EmptyDepth(f"no node at depth {depth}")
    rid, freq = min(table.items(), key=lambda kv: (-kv[1], kv[0]))
    return rid, freq, freq / trie.depth_stats.total(depth)
