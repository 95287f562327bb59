"""Directed acyclic graphs over named variables.

Dag values are immutable: every edit returns a fresh graph, so a search
can evaluate candidates without mutation-rollback bugs. Acyclicity is
enforced on construction and on every edit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Sequence

from .errors import EdgeAbsent, EdgeExists, SelfLoop, UnknownNode, WouldCreateCycle

Edge = tuple[str, str]


class EditKind(Enum):
    ADD = "add"
    DELETE = "delete"
    REVERSE = "reverse"


@dataclass(frozen=True)
class EdgeEdit:
    kind: EditKind
    parent: str
    child: str

    def __post_init__(self):
        if self.parent == self.child:
            raise SelfLoop(self.parent)


@dataclass(frozen=True)
class Dag:
    """Immutable DAG with declaration-ordered nodes and domain tags.

    ``domains`` maps each node to its domain tag; nodes without a known
    tag carry the empty string.
    """

    nodes: tuple[str, ...]
    edges: frozenset[Edge] = frozenset()
    domains: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        nodes = tuple(self.nodes)
        if len(set(nodes)) != len(nodes):
            raise ValueError("duplicate node ids")
        edges = frozenset(tuple(e) for e in self.edges)
        declared = set(nodes)
        for u, v in edges:
            if u == v:
                raise SelfLoop(u)
            if u not in declared or v not in declared:
                raise UnknownNode(u if u not in declared else v)
        domains = {n: self.domains.get(n, "") for n in nodes}
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "domains", domains)
        if _has_cycle(nodes, edges):
            u, v = next(iter(edges))
            raise WouldCreateCycle(u, v)

    def parents(self, v: str) -> frozenset[str]:
        if v not in self.domains:
            raise UnknownNode(v)
        return frozenset(u for u, w in self.edges if w == v)

    def children(self, v: str) -> frozenset[str]:
        if v not in self.domains:
            raise UnknownNode(v)
        return frozenset(w for u, w in self.edges if u == v)

    def has_edge(self, u: str, v: str) -> bool:
        return (u, v) in self.edges

    def to_json(self) -> dict:
        return {
            "nodes": [{"name": n, "domain": self.domains[n]} for n in self.nodes],
            "edges": [[u, v] for u, v in sorted(self.edges)],
        }

    @staticmethod
    def from_json(doc: dict) -> "Dag":
        nodes = tuple(entry["name"] for entry in doc["nodes"])
        domains = {entry["name"]: entry.get("domain", "") for entry in doc["nodes"]}
        edges = frozenset((u, v) for u, v in doc["edges"])
        return Dag(nodes=nodes, edges=edges, domains=domains)


def _has_cycle(nodes: Sequence[str], edges: frozenset[Edge]) -> bool:
    children: dict[str, list[str]] = {n: [] for n in nodes}
    indeg = {n: 0 for n in nodes}
    for u, v in edges:
        children[u].append(v)
        indeg[v] += 1
    queue = [n for n in nodes if indeg[n] == 0]
    seen = 0
    while queue:
        n = queue.pop()
        seen += 1
        for c in children[n]:
            indeg[c] -= 1
            if indeg[c] == 0:
                queue.append(c)
    return seen != len(nodes)


def _reachable(edges: Iterable[Edge], start: str, goal: str) -> bool:
    children: dict[str, list[str]] = {}
    for u, v in edges:
        children.setdefault(u, []).append(v)
    stack = [start]
    seen = {start}
    while stack:
        n = stack.pop()
        if n == goal:
            return True
        for c in children.get(n, ()):
            if c not in seen:
                seen.add(c)
                stack.append(c)
    return False


def apply_edit(g: Dag, e: EdgeEdit) -> Dag:
    """Return a new DAG with the edit applied; the original is unchanged."""
    u, v = e.parent, e.child
    if u not in g.domains:
        raise UnknownNode(u)
    if v not in g.domains:
        raise UnknownNode(v)

    if e.kind is EditKind.ADD:
        if (u, v) in g.edges:
            raise EdgeExists(u, v)
        # u -> v closes a cycle iff u is already reachable from v
        if _reachable(g.edges, v, u):
            raise WouldCreateCycle(u, v)
        edges = g.edges | {(u, v)}
    elif e.kind is EditKind.DELETE:
        if (u, v) not in g.edges:
            raise EdgeAbsent(u, v)
        edges = g.edges - {(u, v)}
    else:  # REVERSE
        if (u, v) not in g.edges:
            raise EdgeAbsent(u, v)
        remaining = g.edges - {(u, v)}
        if _reachable(remaining, u, v):
            raise WouldCreateCycle(v, u)
        edges = remaining | {(v, u)}

    return Dag(nodes=g.nodes, edges=edges, domains=g.domains)


def parents(g: Dag, v: str) -> frozenset[str]:
    return g.parents(v)


def topological_order(g: Dag) -> list[str]:
    """Kahn's algorithm with ties broken by node declaration order."""
    index = {n: i for i, n in enumerate(g.nodes)}
    children: dict[str, list[str]] = {n: [] for n in g.nodes}
    indeg = {n: 0 for n in g.nodes}
    for u, v in g.edges:
        children[u].append(v)
        indeg[v] += 1
    ready = sorted((n for n in g.nodes if indeg[n] == 0), key=index.__getitem__)
    order: list[str] = []
    while ready:
        n = ready.pop(0)
        order.append(n)
        freed = []
        for c in children[n]:
            indeg[c] -= 1
            if indeg[c] == 0:
                freed.append(c)
        ready = sorted(ready + freed, key=index.__getitem__)
    return order


def enumerate_paths(
    g: Dag,
    sources: Iterable[str],
    targets: Iterable[str],
    max_hops: int,
) -> list[list[str]]:
    """All simple directed source-to-target paths with 1..max_hops edges.

    Results are ordered lexicographically by node sequence. A node that is
    both source and target does not yield a zero-edge path.
    """
    if max_hops < 1:
        raise ValueError("max_hops must be >= 1")
    src = set(sources)
    tgt = set(targets)
    for n in src | tgt:
        if n not in g.domains:
            raise UnknownNode(n)

    children: dict[str, list[str]] = {n: [] for n in g.nodes}
    for u, v in g.edges:
        children[u].append(v)
    for n in children:
        children[n].sort()

    found: list[list[str]] = []

    def walk(path: list[str], visited: set[str]) -> None:
        here = path[-1]
        if here in tgt and len(path) > 1:
            found.append(list(path))
        if len(path) - 1 >= max_hops:
            return
        for nxt in children[here]:
            if nxt not in visited:
                path.append(nxt)
                visited.add(nxt)
                walk(path, visited)
                visited.remove(nxt)
                path.pop()

    for s in sorted(src):
        walk([s], {s})

    found.sort()
    return found
