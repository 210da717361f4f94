"""Shared test utilities: independent oracles and random structure generators.

The oracles here intentionally re-derive results from first principles
(raw field arithmetic, recursive scans) instead of calling the package's
own validation helpers, so that a bug cannot hide on both sides of a
comparison.
"""
from __future__ import annotations

import random
from typing import Iterable, Sequence

from provtrie.graph import GraphKind, ProvGraph
from provtrie.trie import Trie, TrieMode, TrieNode


def has_cycle_dfs(g: ProvGraph) -> bool:
    """Classic three-color DFS back-edge finder."""
    WHITE, GREY, BLACK = 0, 1, 2
    color = {rid: WHITE for rid in g.node_ids}

    def visit(u: str) -> bool:
        color[u] = GREY
        for v in g.successors(u):
            if color[v] == GREY:
                return True
            if color[v] == WHITE and visit(v):
                return True
        color[u] = BLACK
        return False

    return any(visit(u) for u in g.node_ids if color[u] == WHITE)


def random_dag(rng: random.Random, max_nodes: int = 10, p: float | None = None) -> ProvGraph:
    """Random DAG: edges drawn from the upper triangle of a shuffled order."""
    n = rng.randint(1, max_nodes)
    if p is None:
        p = rng.uniform(0.0, 0.6)
    names = [f"urn:n{i:02d}" for i in range(n)]
    rng.shuffle(names)
    g = ProvGraph(GraphKind.DAG)
    for name in names:
        g.add_node(name)
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                g.add_edge(names[i], names[j])
    return g


def random_dg(rng: random.Random, max_nodes: int = 8, p: float | None = None) -> ProvGraph:
    """Random directed graph, cycles and self-loops allowed."""
    n = rng.randint(2, max_nodes)
    if p is None:
        p = rng.uniform(0.1, min(0.5, 3.0 / n))
    names = [f"urn:n{i:02d}" for i in range(n)]
    g = ProvGraph(GraphKind.DG)
    for name in names:
        g.add_node(name)
    for u in names:
        for v in names:
            if rng.random() < (p * 0.3 if u == v else p):
                g.add_edge(u, v)
    return g


def insert_all(mode: TrieMode, corpus: Iterable[Sequence[str]], n: int = 0) -> Trie:
    trie = Trie(mode, n=n)
    add = trie.insert if mode is TrieMode.DAG else trie.insert_dg
    for seq in corpus:
        add(seq)
    return trie


def prefix_match_oracle(
    windows: Iterable[Sequence[str]],
    prefix: Sequence[str],
    wildcards: int,
    terminal: str,
) -> set[tuple[str, ...]]:
    """Brute-force wildcard matching over an indexed window list.

    A root-anchored label sequence of length L exists in a DAG trie iff
    some inserted window starts with it; matching is plain positional
    string comparison on those prefixes.
    """
    k = len(prefix)
    total = k + wildcards + 1
    out: set[tuple[str, ...]] = set()
    for window in windows:
        if len(window) < total:
            continue
        head = tuple(window[:total])
        if list(head[:k]) == list(prefix) and head[-1] == terminal:
            out.add(head)
    return out


def walk_conservation_report(trie: Trie) -> list[str]:
    """Independently recheck the per-node bookkeeping; returns violations.

    Recomputes, from raw fields only: freq == terminal + descents into
    children + cycle traversals out, and the sibling probability sum rule
    (== 1 exactly when nothing terminated or cycled away, < 1 otherwise),
    at 1e-12 float tolerance.
    """
    problems: list[str] = []
    stack: list[TrieNode] = [trie.root]
    while stack:
        node = stack.pop()
        stack.extend(node.children.values())
        descents = sum(child.entry_count for child in node.children.values())
        cycles_out = sum(edge.count for edge in node.cycles.values())
        if node.freq != node.terminal_count + descents + cycles_out:
            problems.append(f"conservation broken at {node!r}")
        if node.freq > 0:
            sibling_sum = sum(child.entry_count / node.freq for child in node.children.values())
            if sibling_sum > 1.0 + 1e-12:
                problems.append(f"sibling probabilities exceed 1 at {node!r}")
            if node.terminal_count == 0 and cycles_out == 0:
                if abs(sibling_sum - 1.0) > 1e-12 and node.children:
                    problems.append(f"sibling probabilities do not sum to 1 at {node!r}")
            elif node.children and sibling_sum >= 1.0 - 1e-12 and (node.terminal_count or cycles_out):
                problems.append(f"sibling probabilities not strictly below 1 at {node!r}")
    return problems


def all_node_freqs(trie: Trie) -> dict[tuple[str, ...], tuple[int, int, int]]:
    """Map each node's root path to (freq, entry_count, terminal_count)."""
    out: dict[tuple[str, ...], tuple[int, int, int]] = {}

    def go(node: TrieNode, path: tuple[str, ...]) -> None:
        out[path] = (node.freq, node.entry_count, node.terminal_count)
        for child in node.children.values():
            go(child, path + (child.id,))

    go(trie.root, ())
    return out
