"""Directed-graph helpers: Tarjan SCCs, condensation order, shortest paths."""

from __future__ import annotations

from collections import deque


def tarjan_scc(vertices, successors):
    """Strongly connected components, iterative Tarjan.

    ``successors(v)`` returns an iterable of out-neighbours.  Components are
    emitted in reverse topological order of the condensation (sinks first).
    """
    index: dict = {}
    lowlink: dict = {}
    on_stack: set = set()
    stack: list = []
    out: list = []
    counter = 0

    for root in vertices:
        if root in index:
            continue
        work = [(root, iter(successors(root)))]
        index[root] = lowlink[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = lowlink[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(successors(w))))
                    advanced = True
                    break
                if w in on_stack:
                    lowlink[v] = min(lowlink[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                u = work[-1][0]
                lowlink[u] = min(lowlink[u], lowlink[v])
            if lowlink[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                out.append(comp)
    return out


def is_strongly_connected(vertices, successors) -> bool:
    vertices = list(vertices)
    if not vertices:
        return True
    return len(tarjan_scc(vertices, successors)) == 1


def shortest_path(source, target, successors):
    """BFS path ``[source, ..., target]`` of length >= 1 edge, or None.

    ``source == target`` asks for the shortest directed cycle through source.
    """
    parent = {}
    queue = deque()
    for w in successors(source):
        if w not in parent:
            parent[w] = source
            queue.append(w)
    while queue:
        v = queue.popleft()
        if v == target:
            path = [v]
            while True:
                p = parent[path[-1]]
                path.append(p)
                if p == source and len(path) > 1:
                    break
            return path[::-1]
        for w in successors(v):
            if w not in parent:
                parent[w] = v
                queue.append(w)
    return None
