"""Simple undirected graphs stored as per-vertex neighbourhood bitsets."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import GraphError, ScopeError

ISO_MAX_ORDER = 9


@dataclass(frozen=True)
class VertexSet:
    """Subset of ``0..n-1`` held as an integer bitmask."""

    mask: int = 0

    @classmethod
    def of(cls, vertices: Iterable[int]) -> VertexSet:
        m = 0
        for v in vertices:
            m |= 1 << v
        return cls(m)

    def __iter__(self) -> Iterator[int]:
        m, v = self.mask, 0
        while m:
            if m & 1:
                yield v
            m >>= 1
            v += 1

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def __contains__(self, v: int) -> bool:
        return bool(self.mask >> v & 1)

    def __repr__(self) -> str:
        return f"VertexSet({sorted(self)})"


def _as_mask(S) -> int:
    if S is None:
        return 0
    if isinstance(S, VertexSet):
        return S.mask
    if isinstance(S, int):
        return S
    return VertexSet.of(S).mask


@dataclass(frozen=True)
class Graph:
    """Immutable simple graph on vertices ``0..n-1``.

    ``rows[v]`` is the neighbourhood of ``v`` as a bitmask. Use the module
    constructors or :meth:`from_edges` rather than building rows by hand.
    """

    n: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if self.n < 0 or len(self.rows) != self.n:
            raise GraphError("row count does not match order")
        full = (1 << self.n) - 1
        for v, r in enumerate(self.rows):
            if r >> v & 1:
                raise GraphError(f"loop at vertex {v}")
            if r & ~full:
                raise GraphError(f"vertex {v} has a neighbour outside the vertex range")
            w = r
            while w:
                u = (w & -w).bit_length() - 1
                if not self.rows[u] >> v & 1:
                    raise GraphError(f"adjacency not symmetric at ({v}, {u})")
                w &= w - 1

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Graph:
        rows = [0] * n
        for u, v in edges:
            if u == v:
                raise GraphError(f"loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) outside vertex range")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, tuple(rows))

    @classmethod
    def from_matrix(cls, a) -> Graph:
        a = np.asarray(a)
        n = a.shape[0]
        return cls.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n) if a[i, j]])

    def degree(self, v: int) -> int:
        return self.degrees[v]

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(bin(r).count("1") for r in self.rows)

    @property
    def num_edges(self) -> int:
        return sum(self.degrees) // 2

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    def neighbors(self, v: int) -> VertexSet:
        return VertexSet(self.rows[v])

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in range(u + 1, self.n) if self.rows[u] >> v & 1]

    @cached_property
    def matrix(self) -> np.ndarray:
        """Dense 0/1 adjacency matrix (``uint8``)."""
        a = np.zeros((self.n, self.n), dtype=np.uint8)
        for u, v in self.edges():
            a[u, v] = a[v, u] = 1
        return a

    def masks(self) -> np.ndarray:
        """Rows as an ``int64`` array for the compiled kernels."""
        if self.n > 62:
            raise ScopeError("bitmask kernels support at most 62 vertices")
        return np.array(self.rows, dtype=np.int64)

    def add_edge(self, u: int, v: int) -> Graph:
        return Graph.from_edges(self.n, self.edges() + [(u, v)])

    def remove_edge(self, u: int, v: int) -> Graph:
        rows = list(self.rows)
        rows[u] &= ~(1 << v)
        rows[v] &= ~(1 << u)
        return Graph(self.n, tuple(rows))

    def relabel(self, perm: Sequence[int]) -> Graph:
        """Graph with vertex ``v`` renamed ``perm[v]``."""
        return Graph.from_edges(self.n, [(perm[u], perm[v]) for u, v in self.edges()])

    def induced(self, vertices: Iterable[int]) -> Graph:
        vs = list(vertices)
        index = {v: i for i, v in enumerate(vs)}
        return Graph.from_edges(
            len(vs), [(index[u], index[v]) for u, v in self.edges() if u in index and v in index]
        )

    def is_subgraph_of(self, other: Graph) -> bool:
        """Same vertex labels, edge set contained in ``other``'s."""
        return self.n <= other.n and all(r & ~o == 0 for r, o in zip(self.rows, other.rows))


def empty_graph(m: int) -> Graph:
    """``m`` isolated vertices (``mK_1``)."""
    if m < 0:
        raise GraphError("order must be nonnegative")
    return Graph(m, (0,) * m)


def complete_graph(m: int) -> Graph:
    if m < 0:
        raise GraphError("order must be nonnegative")
    full = (1 << m) - 1
    return Graph(m, tuple(full & ~(1 << v) for v in range(m)))


def disjoint_union(*graphs: Graph) -> Graph:
    """Union with the blocks laid out left to right."""
    rows: list[int] = []
    offset = 0
    for g in graphs:
        rows.extend(r << offset for r in g.rows)
        offset += g.n
    return Graph(offset, tuple(rows))


def join(g1: Graph, g2: Graph) -> Graph:
    """``g1`` and ``g2`` side by side plus every edge between them; ``g1`` comes first."""
    n1, n2 = g1.n, g2.n
    left = ((1 << n2) - 1) << n1
    right = (1 << n1) - 1
    rows = tuple(r | left for r in g1.rows) + tuple((r << n1) | right for r in g2.rows)
    return Graph(n1 + n2, rows)


def star(leaves: int) -> Graph:
    return join(complete_graph(1), empty_graph(leaves))


def path_graph(m: int) -> Graph:
    return Graph.from_edges(m, [(i, i + 1) for i in range(m - 1)])


def cycle_graph(m: int) -> Graph:
    return Graph.from_edges(m, [(i, (i + 1) % m) for i in range(m)])


def _flood(g: Graph, alive: int, seed: int) -> int:
    comp = frontier = seed
    while frontier:
        nxt = 0
        w = frontier
        while w:
            low = w & -w
            nxt |= g.rows[low.bit_length() - 1]
            w ^= low
        frontier = nxt & alive & ~comp
        comp |= frontier
    return comp


def components_after_deletion(g: Graph, S=None) -> tuple[int, list[VertexSet]]:
    """Number of components of ``G - S`` and their vertex sets.

    ``S`` may be a :class:`VertexSet`, a bitmask, an iterable of vertices, or
    ``None`` for the empty set.
    """
    full = (1 << g.n) - 1
    alive = full & ~_as_mask(S)
    if alive == 0:
        raise GraphError("empty residual graph")
    comps = []
    rem = alive
    while rem:
        comp = _flood(g, alive, rem & -rem)
        comps.append(VertexSet(comp))
        rem &= ~comp
    return len(comps), comps


def is_connected(g: Graph) -> bool:
    if g.n == 0:
        raise GraphError("connectivity of the null graph is undefined")
    full = (1 << g.n) - 1
    return _flood(g, full, 1) == full


# ---------------------------------------------------------------------------
# isomorphism
# ---------------------------------------------------------------------------


def _signature(g: Graph) -> list[tuple[int, tuple[int, ...]]]:
    deg = g.degrees
    return [(deg[v], tuple(sorted(deg[u] for u in VertexSet(g.rows[v])))) for v in range(g.n)]


def is_isomorphic(g1: Graph, g2: Graph) -> bool:
    """Backtracking isomorphism test for graphs of order at most 9.

    Candidates for each vertex are restricted to vertices with the same degree
    and the same multiset of neighbour degrees.
    """
    if max(g1.n, g2.n) > ISO_MAX_ORDER:
        raise ScopeError("order exceeds isomorphism scope")
    if g1.n != g2.n or g1.num_edges != g2.num_edges:
        return False
    sig1, sig2 = _signature(g1), _signature(g2)
    if sorted(sig1) != sorted(sig2):
        return False
    n = g1.n
    # most constrained first: high degree, then rare signatures
    order = sorted(range(n), key=lambda v: (-sig1[v][0], sig1.count(sig1[v]), v))
    candidates = {v: [w for w in range(n) if sig2[w] == sig1[v]] for v in range(n)}
    mapping: dict[int, int] = {}
    used = [False] * n

    def extend(i: int) -> bool:
        if i == n:
            return True
        v = order[i]
        for w in candidates[v]:
            if used[w]:
                continue
            if any(g1.has_edge(v, u) != g2.has_edge(w, mapping[u]) for u in mapping):
                continue
            mapping[v] = w
            used[w] = True
            if extend(i + 1):
                return True
            del mapping[v]
            used[w] = False
        return False

    return extend(0)
