#!/usr/bin/env python3
"""Print wildcard path counts from clique indexes next to the closed form.

For each clique size the DG index is queried between :r0 and :r1 with
1..N wildcards; every count must equal ((n-1)^(M+1) - (-1)^(M+1)) / n.

Example:
    python scripts/show_clique_counts.py --sizes 4,8 --max-wildcards 9
"""
import argparse

from provtrie.graph import gen_clique
from provtrie.oracle import clique_walk_count
from provtrie.query import QueryPattern, count_paths
from provtrie.trie import Trie, TrieMode


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="4,8", help="comma-separated clique sizes")
    parser.add_argument("--max-wildcards", type=int, default=9)
    args = parser.parse_args()

    sizes = [int(s) for s in args.sizes.split(",")]
    mismatches = 0
    print("size\twildcards\tindexed\tclosed_form")
    for size in sizes:
        trie = Trie(TrieMode.DG)
        trie.index_graph_dg(gen_clique(size))
        for wildcards in range(1, args.max_wildcards + 1):
            indexed = count_paths(trie, QueryPattern((":r0",), wildcards, ":r1"))
            closed = clique_walk_count(size, wildcards + 1)
            marker = "" if indexed == closed else "\tMISMATCH"
            mismatches += indexed != closed
            print(f"{size}\t{wildcards}\t{indexed}\t{closed}{marker}")
    return 1 if mismatches else 0


if __name__ == "__main__":
    raise SystemExit(main())
