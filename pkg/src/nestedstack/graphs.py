"""Small graph routines shared across modules: strongly connected
components, max-weight paths over edge-weighted digraphs, fundamental
cycles of undirected graphs, and BFS distances."""

from __future__ import annotations

from collections import deque
from typing import Dict, Hashable, Iterable, List, Optional, Sequence, Set, Tuple

Node = Hashable


def strongly_connected_components(
    nodes: Iterable[Node], successors: Dict[Node, List[Node]]
) -> List[List[Node]]:
    """Tarjan's algorithm, iterative.  Components are emitted with all
    descendants of a component appearing before it (reverse topological
    order of the condensation)."""
    index: Dict[Node, int] = {}
    lowlink: Dict[Node, int] = {}
    on_stack: Set[Node] = set()
    stack: List[Node] = []
    components: List[List[Node]] = []

    for root in nodes:
        if root in index:
            continue
        work = [(root, 0)]
        while work:
            v, i = work.pop()
            if i == 0:
                index[v] = lowlink[v] = len(index)
                stack.append(v)
                on_stack.add(v)
            succ = successors.get(v, [])
            recurse = False
            while i < len(succ):
                w = succ[i]
                i += 1
                if w not in index:
                    work.append((v, i))
                    work.append((w, 0))
                    recurse = True
                    break
                if w in on_stack:
                    lowlink[v] = min(lowlink[v], index[w])
            if recurse:
                continue
            if lowlink[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.remove(w)
                    comp.append(w)
                    if w == v:
                        break
                components.append(comp)
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[v])
    return components


def weighted_path_bound(edges: Sequence[Tuple[Node, Node, int, object]]):
    """Maximum total weight over all directed paths in a digraph.

    Edges are (src, dst, weight, payload) with weights >= 0.  Returns
    (bound, None) when every cycle has total weight zero, otherwise
    (None, cycle_payloads) where the cycle contains a positive-weight edge.
    """
    nodes: Set[Node] = set()
    succ: Dict[Node, List[Node]] = {}
    for u, v, _, _ in edges:
        nodes.update((u, v))
        succ.setdefault(u, []).append(v)

    components = strongly_connected_components(nodes, succ)
    comp_of = {v: i for i, comp in enumerate(components) for v in comp}

    for u, v, w, payload in edges:
        if w > 0 and comp_of[u] == comp_of[v]:
            return None, _close_cycle(u, v, payload, edges, comp_of)

    # condensation is acyclic; components arrive descendants-first, so a
    # single pass computes the best path weight starting in each component
    best = [0] * len(components)
    comp_edges: Dict[int, List[Tuple[int, int]]] = {}
    for u, v, w, _ in edges:
        cu, cv = comp_of[u], comp_of[v]
        if cu != cv:
            comp_edges.setdefault(cu, []).append((cv, w))
    for ci in range(len(components)):
        for cv, w in comp_edges.get(ci, []):
            best[ci] = max(best[ci], w + best[cv])
    return (max(best) if best else 0), None


def _close_cycle(u, v, payload, edges, comp_of):
    """Path of payloads from v back to u inside their common component,
    prefixed by the u->v edge payload."""
    if u == v:
        return [payload]
    comp = comp_of[u]
    prev: Dict[Node, Tuple[Node, object]] = {v: None}
    queue = deque([v])
    while queue:
        x = queue.popleft()
        if x == u:
            break
        for a, b, _, pl in edges:
            if a == x and comp_of[b] == comp and b not in prev:
                prev[b] = (x, pl)
                queue.append(b)
    path = []
    x = u
    while prev[x] is not None:
        x, pl = prev[x]
        path.append(pl)
    path.reverse()
    return [payload] + path


def fundamental_cycle(adjacency: Dict[Node, Set[Node]]) -> Optional[List[Node]]:
    """A simple cycle of an undirected simple graph as a vertex list, or
    None when the graph is a forest.

    Builds a BFS spanning forest and closes each non-tree edge through the
    lowest common ancestor; the longest such cycle is returned, which gives
    informative witnesses on grid-like graphs."""
    parent: Dict[Node, Optional[Node]] = {}
    depth: Dict[Node, int] = {}
    extra: List[Tuple[Node, Node]] = []
    seen_edges: Set[frozenset] = set()

    for root in adjacency:
        if root in parent:
            continue
        parent[root] = None
        depth[root] = 0
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for w in sorted(adjacency[v], key=repr):
                key = frozenset((v, w))
                if key in seen_edges:
                    continue
                seen_edges.add(key)
                if w not in parent:
                    parent[w] = v
                    depth[w] = depth[v] + 1
                    queue.append(w)
                else:
                    extra.append((v, w))

    best: Optional[List[Node]] = None
    for v, w in extra:
        a, b = v, w
        left, right = [a], [b]
        while depth[a] > depth[b]:
            a = parent[a]
            left.append(a)
        while depth[b] > depth[a]:
            b = parent[b]
            right.append(b)
        while a != b:
            a, b = parent[a], parent[b]
            left.append(a)
            right.append(b)
        cycle = left + right[-2::-1]  # meet at the LCA once
        if best is None or len(cycle) > len(best):
            best = cycle
    return best


def bfs_distances(
    adjacency: Dict[Node, Iterable[Node]],
    sources: Iterable[Node],
    blocked: Optional[Set[Node]] = None,
) -> Dict[Node, int]:
    """Unweighted distances from any source, skipping blocked vertices."""
    blocked = blocked or set()
    dist = {s: 0 for s in sources if s not in blocked}
    queue = deque(dist)
    while queue:
        v = queue.popleft()
        for w in adjacency.get(v, ()):
            if w not in dist and w not in blocked:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist
