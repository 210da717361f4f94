"""Directed provenance graphs: resources, dependency edges, role typing.

A graph holds resources identified by URI strings and directed edges
between them.  Every resource carries a role (input, output, or process);
roles may be left unassigned during construction and filled in later by
``infer_roles``.  Graphs come in two kinds: DAG (acyclic, self-loops
rejected) and DG (arbitrary directed graph, cycles allowed).

Resource identifiers are compared with plain string ordering; that
ordering is the single tie-breaking rule used by every deterministic
traversal in this package.  Identifiers are never normalized (no case
folding, no percent-decoding), so two spellings of the same URI are two
different resources.
"""
from __future__ import annotations

from enum import Enum
from typing import Iterator


class GraphError(Exception):
    """Base class for graph construction and validation failures."""


class RoleConflict(GraphError):
    """A resource was re-added with a different explicit role."""


class MissingNode(GraphError):
    """An operation referenced a resource that is not in the graph."""


class SelfLoopInDag(GraphError):
    """A self-loop edge was added to a DAG-kind graph."""


class InvalidSize(GraphError):
    """A generator was asked for a graph below its minimum size."""


class CyclicInput(GraphError):
    """An acyclic graph was required but the edge relation has a cycle."""


class Role(Enum):
    INPUT = "input"
    OUTPUT = "output"
    PROCESS = "process"


class GraphKind(Enum):
    DAG = "dag"
    DG = "dg"


class ProvGraph:
    """Directed graph of resources with role typing.

    Construction is single-threaded; once built, a graph is treated as
    read-only and may be shared freely across threads.  Node and edge
    insertion are idempotent, so replaying the same construction calls
    always yields an equal graph.
    """

    __slots__ = ("kind", "_roles", "_succ", "_pred", "_edge_count")

    def __init__(self, kind: GraphKind = GraphKind.DAG) -> None:
        self.kind = kind
        self._roles: dict[str, Role | None] = {}
        self._succ: dict[str, set[str]] = {}
        self._pred: dict[str, set[str]] = {}
        self._edge_count = 0

    # ---- construction ----------------------------------------------------

    def add_node(self, rid: str, role: Role | None = None) -> None:
        """Add resource ``rid``.

        Re-adding with the same role (or with no role) is a no-op.  A node
        whose role is still unassigned may be upgraded to an explicit role;
        changing one explicit role to another raises ``RoleConflict``.
        """
        if not isinstance(rid, str) or not rid:
            raise ValueError("resource identifier must be a nonempty string")
        if rid in self._roles:
            current = self._roles[rid]
            if role is None or role is current:
                return
            if current is None:
                self._roles[rid] = role
                return
            raise RoleConflict(f"{rid!r} already has role {current.value}, got {role.value}")
        self._roles[rid] = role
        self._succ[rid] = set()
        self._pred[rid] = set()

    def add_edge(self, src: str, dst: str) -> None:
        """Add the directed edge src -> dst (set semantics, idempotent)."""
        if src not in self._roles:
            raise MissingNode(f"edge endpoint {src!r} is not in the graph")
        if dst not in self._roles:
            raise MissingNode(f"edge endpoint {dst!r} is not in the graph")
        if src == dst and self.kind is GraphKind.DAG:
            raise SelfLoopInDag(f"self-loop on {src!r} not allowed in a DAG")
        if dst not in self._succ[src]:
            self._succ[src].add(dst)
            self._pred[dst].add(src)
            self._edge_count += 1

    def infer_roles(self) -> "ProvGraph":
        """Assign roles to untyped nodes from their degrees.

        Sources (in-degree 0, including isolated nodes) become inputs,
        sinks become outputs, everything else a process.  Explicitly
        assigned roles are left untouched.
        """
        for rid, role in self._roles.items():
            if role is not None:
                continue
            if not self._pred[rid]:
                self._roles[rid] = Role.INPUT
            elif not self._succ[rid]:
                self._roles[rid] = Role.OUTPUT
            else:
                self._roles[rid] = Role.PROCESS
        return self

    # ---- inspection --------------------------------------------------------

    def __contains__(self, rid: str) -> bool:
        return rid in self._roles

    @property
    def node_ids(self) -> tuple[str, ...]:
        """All resource identifiers, sorted."""
        return tuple(sorted(self._roles))

    @property
    def node_count(self) -> int:
        return len(self._roles)

    @property
    def edge_count(self) -> int:
        return self._edge_count

    def role_of(self, rid: str) -> Role | None:
        if rid not in self._roles:
            raise MissingNode(f"{rid!r} is not in the graph")
        return self._roles[rid]

    def roles(self) -> dict[str, Role | None]:
        return dict(self._roles)

    def successors(self, rid: str) -> tuple[str, ...]:
        """Successors of ``rid``, sorted."""
        if rid not in self._succ:
            raise MissingNode(f"{rid!r} is not in the graph")
        return tuple(sorted(self._succ[rid]))

    def predecessors(self, rid: str) -> tuple[str, ...]:
        if rid not in self._pred:
            raise MissingNode(f"{rid!r} is not in the graph")
        return tuple(sorted(self._pred[rid]))

    def has_edge(self, src: str, dst: str) -> bool:
        return src in self._succ and dst in self._succ[src]

    def in_degree(self, rid: str) -> int:
        if rid not in self._pred:
            raise MissingNode(f"{rid!r} is not in the graph")
        return len(self._pred[rid])

    def out_degree(self, rid: str) -> int:
        if rid not in self._succ:
            raise MissingNode(f"{rid!r} is not in the graph")
        return len(self._succ[rid])

    def edges(self) -> Iterator[tuple[str, str]]:
        """All edges as (src, dst) pairs, in sorted pair order."""
        for src in sorted(self._succ):
            for dst in sorted(self._succ[src]):
                yield (src, dst)

    def edge_set(self) -> frozenset[tuple[str, str]]:
        return frozenset((u, v) for u, vs in self._succ.items() for v in vs)

    # ---- validation --------------------------------------------------------

    def validate_dag(self) -> bool:
        """True iff the edge relation admits a topological order.

        Kahn-style peeling of zero in-degree nodes; pure, no mutation;
        independent of the declared ``kind``.
        """
        indeg = {rid: len(preds) for rid, preds in self._pred.items()}
        frontier = [rid for rid, d in indeg.items() if d == 0]
        emitted = 0
        while frontier:
            rid = frontier.pop()
            emitted += 1
            for nxt in self._succ[rid]:
                indeg[nxt] -= 1
                if indeg[nxt] == 0:
                    frontier.append(nxt)
        return emitted == len(self._roles)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ProvGraph):
            return NotImplemented
        return (
            self.kind is other.kind
            and self._roles == other._roles
            and self._succ == other._succ
        )

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"<ProvGraph kind={self.kind.value} nodes={self.node_count} edges={self.edge_count}>"


def gen_clique(n: int) -> ProvGraph:
    """Complete graph on ``n`` process resources, as symmetric directed edges.

    Nodes are labeled ``:r0`` .. ``:r(n-1)``.  The undirected clique is
    encoded as both directed edges of every distinct pair, so the graph
    has n*(n-1) edges and the DG trie / walk enumerator see every
    traversal direction.
    """
    if n < 2:
        raise InvalidSize(f"clique needs at least 2 nodes, got {n}")
    g = ProvGraph(GraphKind.DG)
    ids = [f":r{i}" for i in range(n)]
    for rid in ids:
        g.add_node(rid, Role.PROCESS)
    for u in ids:
        for v in ids:
            if u != v:
                g.add_edge(u, v)
    return g
