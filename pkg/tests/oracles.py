"""Brute-force reference implementations shared by the graph tests."""

from collections import deque


def closure_sccs(nodes, triples):
    """u and v share a component iff each reaches the other."""
    reach = {n: {n} for n in nodes}
    changed = True
    while changed:
        changed = False
        for s, _, o in triples:
            for n in nodes:
                if s in reach[n] and o not in reach[n]:
                    reach[n].add(o)
                    changed = True
    comps = {frozenset(m for m in nodes if m in reach[n] and n in reach[m]) for n in nodes}
    return sorted((sorted(c) for c in comps), key=lambda c: c[0])


def bfs_distance(triples, source, target):
    adj = {}
    for s, _, o in triples:
        adj.setdefault(s, set()).add(o)
    seen, queue = {source: 0}, deque([source])
    while queue:
        n = queue.popleft()
        for m in adj.get(n, ()):
            if m not in seen:
                seen[m] = seen[n] + 1
                queue.append(m)
    return seen.get(target)
