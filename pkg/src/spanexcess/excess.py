"""Total k-excess of spanning trees and the cut condition that bounds it."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from . import kernels
from .errors import GraphError, ScopeError
from .graph import Graph, VertexSet, components_after_deletion, is_connected

EXACT_MAX_ORDER = 12
ORACLE_MAX_ORDER = 8
WIN_MAX_ORDER = 22


@dataclass(frozen=True)
class SpanningTree:
    host: Graph
    parent: tuple[int, ...]  # parent[0] == -1, rooted at vertex 0
    edges: tuple[tuple[int, int], ...]  # sorted, u < v

    @classmethod
    def from_edges(cls, host: Graph, edges: Iterable[tuple[int, int]]) -> SpanningTree:
        es = tuple(sorted((min(u, v), max(u, v)) for u, v in edges))
        n = host.n
        if len(es) != max(n - 1, 0) or len(set(es)) != len(es):
            raise GraphError(f"a spanning tree on {n} vertices has {max(n - 1, 0)} edges, got {len(es)}")
        for u, v in es:
            if not host.has_edge(u, v):
                raise GraphError(f"tree edge ({u}, {v}) is not an edge of the host graph")
        nbrs: list[list[int]] = [[] for _ in range(n)]
        for u, v in es:
            nbrs[u].append(v)
            nbrs[v].append(u)
        parent = [-2] * n
        if n:
            parent[0] = -1
            queue = deque([0])
            while queue:
                u = queue.popleft()
                for w in nbrs[u]:
                    if parent[w] == -2:
                        parent[w] = u
                        queue.append(w)
        if any(p == -2 for p in parent):
            raise GraphError("edges do not span the host graph")
        return cls(host, tuple(parent), es)

    @property
    def degrees(self) -> list[int]:
        deg = [0] * self.host.n
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def as_graph(self) -> Graph:
        return Graph.from_edges(self.host.n, self.edges)


def total_excess(T: SpanningTree, k: int) -> int:
    if k < 0:
        raise ValueError("k must be nonnegative")
    return sum(max(0, d - k) for d in T.degrees)


def _excess_of_degrees(deg, k) -> int:
    return sum(max(0, d - k) for d in deg)


@dataclass(frozen=True)
class ExcessResult:
    value: int
    tree: SpanningTree
    method: str  # "exact" | "heuristic" | "oracle"
    nodes: int

    def to_json(self) -> dict:
        return {"value": self.value, "witness": [list(e) for e in self.tree.edges],
                "method": self.method, "nodes": self.nodes}


def _require_connected(g: Graph) -> None:
    if not is_connected(g):
        raise GraphError("graph is not connected")


def _require_exact_scope(g: Graph) -> None:
    if g.n > EXACT_MAX_ORDER:
        raise ScopeError(
            f"exact search is limited to {EXACT_MAX_ORDER} vertices; use min_total_excess_heuristic"
        )


def _tree_from_status(g, eu, ev, status) -> SpanningTree:
    return SpanningTree.from_edges(g, [(int(eu[e]), int(ev[e])) for e in range(len(eu)) if status[e] == 1])


def min_total_excess_exact(g: Graph, k: int, upper_bound: int | None = None) -> ExcessResult | None:
    """Minimum te(T, k) over spanning trees of ``g`` by branch and bound.

    The witness is the optimal tree with the lexicographically smallest sorted
    edge list. With ``upper_bound`` the search runs in decision mode: it stops
    at the first tree with te <= upper_bound and returns it (not necessarily
    optimal), or returns None when no such tree exists.
    """
    _require_connected(g)
    _require_exact_scope(g)
    if k < 1:
        raise ValueError("k must be at least 1")
    adj = g.masks()
    eu, ev = kernels.search_order(adj, g.n)
    status = np.full(len(eu), -1, dtype=np.int8)

    if upper_bound is not None:
        best, st, nodes, found = kernels.bnb_search(adj, g.n, eu, ev, status, k, upper_bound + 1, upper_bound)
        if not found:
            return None
        tree = _tree_from_status(g, eu, ev, st)
        return ExcessResult(int(best), tree, "exact", int(nodes))

    best, st, nodes, found = kernels.bnb_search(adj, g.n, eu, ev, status, k, kernels.BIG, -1)
    opt = int(best)
    total_nodes = int(nodes)

    # lexicographically smallest optimal tree: fix edges greedily in lex order
    position = {(int(eu[e]), int(ev[e])): e for e in range(len(eu))}
    included = [0] * g.n
    for u, v in sorted(position):
        e = position[(u, v)]
        full = (1 << g.n) - 1
        if kernels.flood(np.array(included, dtype=np.int64), g.n, full, 1 << u) >> v & 1:
            status[e] = 0
            continue
        status[e] = 1
        _, _, nodes, ok = kernels.bnb_search(adj, g.n, eu, ev, status, k, opt + 1, opt)
        total_nodes += int(nodes)
        if ok:
            included[u] |= 1 << v
            included[v] |= 1 << u
        else:
            status[e] = 0
    tree = _tree_from_status(g, eu, ev, status)
    assert total_excess(tree, k) == opt
    return ExcessResult(opt, tree, "exact", total_nodes)


def has_bounded_excess_tree(g: Graph, k: int, b: int) -> bool:
    """Whether some spanning tree of ``g`` has te(T, k) <= b."""
    _require_connected(g)
    _require_exact_scope(g)
    return bool(kernels.has_tree_within(g.masks(), g.n, k, b))


def prufer_oracle_min_excess(g: Graph, k: int) -> int:
    """Minimum te(T, k) by enumerating all n^(n-2) labelled trees."""
    _require_connected(g)
    if g.n > ORACLE_MAX_ORDER:
        raise ScopeError(f"Prufer enumeration is limited to {ORACLE_MAX_ORDER} vertices")
    value = int(kernels.prufer_min_excess(g.masks(), g.n, k))
    assert value >= 0
    return value


# ---------------------------------------------------------------------------
# edge-swap local search
# ---------------------------------------------------------------------------


def _bfs_tree(g: Graph, root: int, rotate: int) -> list[tuple[int, int]]:
    seen = 1 << root
    queue = deque([root])
    edges = []
    while queue:
        u = queue.popleft()
        nbrs = list(VertexSet(g.rows[u]))
        if nbrs:
            r = rotate % len(nbrs)
            nbrs = nbrs[r:] + nbrs[:r]
        for w in nbrs:
            if not seen >> w & 1:
                seen |= 1 << w
                edges.append((u, w))
                queue.append(w)
    return edges


def _tree_path(nbrs: list[set[int]], u: int, v: int) -> list[tuple[int, int]]:
    prev = {u: -1}
    queue = deque([u])
    while queue:
        a = queue.popleft()
        if a == v:
            break
        for c in nbrs[a]:
            if c not in prev:
                prev[c] = a
                queue.append(c)
    path = []
    while prev[v] != -1:
        path.append((prev[v], v))
        v = prev[v]
    return path


def _local_search(g: Graph, edges, k: int) -> tuple[list[tuple[int, int]], int]:
    nbrs: list[set[int]] = [set() for _ in range(g.n)]
    for u, v in edges:
        nbrs[u].add(v)
        nbrs[v].add(u)
    deg = [len(x) for x in nbrs]
    te = _excess_of_degrees(deg, k)
    evaluated = 0
    improved = True
    while improved and te > 0:
        improved = False
        for u, v in g.edges():
            if v in nbrs[u]:
                continue
            for a, c in _tree_path(nbrs, u, v):
                evaluated += 1
                delta = {}
                for w, step in ((u, 1), (v, 1), (a, -1), (c, -1)):
                    delta[w] = delta.get(w, 0) + step
                new_te = te + sum(max(0, deg[w] + dw - k) - max(0, deg[w] - k) for w, dw in delta.items())
                if new_te < te:
                    nbrs[a].discard(c)
                    nbrs[c].discard(a)
                    nbrs[u].add(v)
                    nbrs[v].add(u)
                    for w, dw in delta.items():
                        deg[w] += dw
                    te = new_te
                    improved = True
                    break
            if improved:
                break
    tree_edges = [(a, c) for a in range(g.n) for c in nbrs[a] if a < c]
    return tree_edges, evaluated


def min_total_excess_heuristic(g: Graph, k: int, restarts: int = 4) -> ExcessResult:
    """Upper bound on the minimum te(T, k) by edge-swap local search.

    Restart ``r`` grows a BFS tree from vertex ``r mod n`` with neighbour
    lists rotated by ``r // n``, then applies strictly improving swaps
    ``T - f + e`` (``f`` on the fundamental cycle of ``e``) until none is left.
    """
    _require_connected(g)
    if restarts < 1:
        raise ValueError("restarts must be at least 1")
    best = None
    evaluated = 0
    for r in range(restarts):
        edges, ev = _local_search(g, _bfs_tree(g, r % g.n, r // g.n), k)
        evaluated += ev
        tree = SpanningTree.from_edges(g, edges)
        te = total_excess(tree, k)
        if best is None or te < best[0]:
            best = (te, tree)
    return ExcessResult(best[0], best[1], "heuristic", evaluated)


# ---------------------------------------------------------------------------
# cut condition
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WinViolation:
    """Worst subset for the cut condition ``c(G - S) <= (k - 2)|S| + b + 2``.

    ``slack`` is ``c(G - S)`` minus the right-hand side; the condition fails
    at ``subset`` exactly when ``slack > 0``.
    """

    subset: VertexSet
    slack: int
    components: int

    @property
    def violated(self) -> bool:
        return self.slack > 0

    def to_json(self) -> dict:
        return {"subset": sorted(self.subset), "slack": self.slack, "components": self.components,
                "condition_holds": not self.violated}


def win_condition_worst_violator(g: Graph, k: int, b: int, include_empty: bool = False) -> WinViolation:
    """Scan all proper subsets (nonempty unless ``include_empty``) for maximum slack.

    Ties go to the smaller subset, then the lexicographically first one.
    """
    _require_connected(g)
    if k < 2:
        raise ValueError("k must be at least 2")
    if g.n > WIN_MAX_ORDER:
        raise ScopeError(f"subset scan is limited to {WIN_MAX_ORDER} vertices; sample subsets instead")
    if g.n == 1 and not include_empty:
        raise GraphError("a single vertex has no nonempty proper subset")
    mask, slack = kernels.win_scan(g.masks(), g.n, k, b, include_empty)
    S = VertexSet(int(mask))
    c, _ = components_after_deletion(g, S)
    return WinViolation(S, int(slack), c)


def cut_condition_holds(g: Graph, k: int, b: int, include_empty: bool = False) -> bool:
    return not win_condition_worst_violator(g, k, b, include_empty).violated


def win_condition_report(g: Graph, k: int, b: int) -> dict:
    """Worst violator under both readings of the subset quantifier."""
    nonempty = win_condition_worst_violator(g, k, b, include_empty=False)
    anyset = win_condition_worst_violator(g, k, b, include_empty=True)
    return {
        "nonempty": nonempty.to_json(),
        "any_subset": anyset.to_json(),
        "worst_is_empty_set": anyset.subset.mask == 0,
    }
