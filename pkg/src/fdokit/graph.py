"""PID triples and the directed FDO graph built from them."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, NamedTuple, Optional

from fdokit.errors import UnknownNode
from fdokit.model import InformationRecord
from fdokit.pid import is_pid
from fdokit.typesys import REFERENCE_TYPES, TypeRegistry


class PidTriple(NamedTuple):
    subject: str
    predicate: str
    object: str


class ExternalEdge(NamedTuple):
    """A reference that leaves the record set (URL or out-of-scope PID)."""

    subject: str
    predicate: str
    target: str


class Direction(str, Enum):
    OUT = "out"
    IN = "in"
    BOTH = "both"


@dataclass(frozen=True)
class FdoGraph:
    nodes: frozenset[str] = frozenset()
    predicates: frozenset[str] = frozenset()
    triples: frozenset[PidTriple] = frozenset()
    external_edges: frozenset[ExternalEdge] = frozenset()

    def __post_init__(self) -> None:
        for t in self.triples:
            if t.subject not in self.nodes or t.object not in self.nodes:
                raise ValueError(f"triple {t} leaves the node set")
            if t.predicate not in self.predicates:
                raise ValueError(f"predicate {t.predicate} not declared")

    def _require(self, pid: str) -> None:
        if pid not in self.nodes:
            raise UnknownNode(pid)

    def successors(self, pid: str) -> list[str]:
        return sorted({t.object for t in self.triples if t.subject == pid})

    def __len__(self) -> int:
        return len(self.nodes)


def _scan(records: Iterable[InformationRecord], types: TypeRegistry):
    records = [r for r in records if r.pid is not None]
    in_scope = {r.pid for r in records}
    triples, external = set(), set()
    for record in records:
        for key, value in record.pairs:
            if types.value_type_of(key) not in REFERENCE_TYPES:
                continue
            if value == record.pid:
                continue
            if is_pid(value) and value in in_scope:
                triples.add(PidTriple(record.pid, key, value))
            else:
                external.add(ExternalEdge(record.pid, key, value))
    return in_scope, triples, external


def extract_triples(records: Iterable[InformationRecord], types: TypeRegistry) -> frozenset[PidTriple]:
    """PID triples between records of the given set.

    A referencing pair becomes a triple only if its value is a PID of another
    record in the set; everything else is an external edge.
    """
    return frozenset(_scan(records, types)[1])


def external_edges(records: Iterable[InformationRecord], types: TypeRegistry) -> frozenset[ExternalEdge]:
    return frozenset(_scan(records, types)[2])


def build_graph(records: Iterable[InformationRecord], types: TypeRegistry) -> FdoGraph:
    nodes, triples, external = _scan(records, types)
    return FdoGraph(
        nodes=frozenset(nodes),
        predicates=frozenset(t.predicate for t in triples),
        triples=frozenset(triples),
        external_edges=frozenset(external),
    )


def graph_from_triples(triples: Iterable[PidTriple], nodes: Iterable[str] = ()) -> FdoGraph:
    triples = frozenset(PidTriple(*t) for t in triples)
    all_nodes = set(nodes) | {t.subject for t in triples} | {t.object for t in triples}
    return FdoGraph(frozenset(all_nodes), frozenset(t.predicate for t in triples), triples)


def neighbors(
    graph: FdoGraph,
    pid: str,
    direction: Direction | str = Direction.OUT,
    predicate: Optional[str] = None,
) -> frozenset[str]:
    graph._require(pid)
    direction = Direction(direction)
    found = set()
    for t in graph.triples:
        if predicate is not None and t.predicate != predicate:
            continue
        if direction in (Direction.OUT, Direction.BOTH) and t.subject == pid:
            found.add(t.object)
        if direction in (Direction.IN, Direction.BOTH) and t.object == pid:
            found.add(t.subject)
    return frozenset(found)


def _adjacency(graph: FdoGraph) -> dict[str, list[str]]:
    adj: dict[str, set[str]] = {n: set() for n in graph.nodes}
    for t in graph.triples:
        adj[t.subject].add(t.object)
    return {n: sorted(s) for n, s in adj.items()}


def strongly_connected_components(graph: FdoGraph) -> list[list[str]]:
    """Tarjan's algorithm, iterative. Components and their members are sorted."""
    adj = _adjacency(graph)
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    components: list[list[str]] = []
    counter = 0

    for root in sorted(adj):
        if root in index:
            continue
        work = [(root, 0)]
        while work:
            node, i = work.pop()
            if i == 0:
                index[node] = low[node] = counter
                counter += 1
                stack.append(node)
                on_stack.add(node)
            recurse = False
            succ = adj[node]
            while i < len(succ):
                nxt = succ[i]
                i += 1
                if nxt not in index:
                    work.append((node, i))
                    work.append((nxt, 0))
                    recurse = True
                    break
                if nxt in on_stack:
                    low[node] = min(low[node], index[nxt])
            if recurse:
                continue
            if low[node] == index[node]:
                component = []
                while True:
                    member = stack.pop()
                    on_stack.discard(member)
                    component.append(member)
                    if member == node:
                        break
                components.append(sorted(component))
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
    return sorted(components, key=lambda c: c[0])


def path(graph: FdoGraph, source: str, target: str) -> Optional[list[PidTriple]]:
    """Shortest path by edge count; ties go to the lexicographically smallest next hop.

    Returns ``[]`` for ``source == target`` and ``None`` if unreachable.
    """
    graph._require(source)
    graph._require(target)
    if source == target:
        return []
    # distances to target over reversed edges
    incoming: dict[str, set[str]] = {n: set() for n in graph.nodes}
    for t in graph.triples:
        incoming[t.object].add(t.subject)
    dist = {target: 0}
    queue = deque([target])
    while queue:
        node = queue.popleft()
        for prev in incoming[node]:
            if prev not in dist:
                dist[prev] = dist[node] + 1
                queue.append(prev)
    if source not in dist:
        return None
    edges: dict[tuple[str, str], str] = {}
    for t in sorted(graph.triples):
        edges.setdefault((t.subject, t.object), t.predicate)
    adj = _adjacency(graph)
    hops = []
    node = source
    while node != target:
        nxt = next(n for n in adj[node] if dist.get(n) == dist[node] - 1)
        hops.append(PidTriple(node, edges[(node, nxt)], nxt))
        node = nxt
    return hops


def reachable(graph: FdoGraph, source: str, target: str) -> bool:
    return path(graph, source, target) is not None


def export_graph(graph: FdoGraph, fmt: str = "triples") -> str:
    """Render as sorted ``subject predicate object`` lines or as a DOT digraph."""
    if fmt == "triples":
        return "".join(f"{t.subject} {t.predicate} {t.object}\n" for t in sorted(graph.triples))
    if fmt == "dot":
        lines = ["digraph fdo {"]
        lines += [f'  "{n}";' for n in sorted(graph.nodes)]
        lines += [f'  "{t.subject}" -> "{t.object}" [label="{t.predicate}"];' for t in sorted(graph.triples)]
        lines.append("}")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown export format {fmt!r}")


def parse_triples(text: str) -> frozenset[PidTriple]:
    """Inverse of the ``triples`` export."""
    triples = set()
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 3 or not all(is_pid(p) for p in parts):
            raise ValueError(f"line {lineno}: expected three PIDs, got {line!r}")
        triples.add(PidTriple(*parts))
    return frozenset(triples)
