"""The extremal join graphs and what can be certified about them.

Every constructor lays vertices out block by block: the joined clique first,
then the large clique, then the independent vertices, so the three-cell
partition used for quotient matrices is positional.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import GraphError
from .excess import EXACT_MAX_ORDER, SpanningTree, min_total_excess_exact, total_excess
from .graph import (Graph, complete_graph, components_after_deletion, disjoint_union, empty_graph,
                    is_connected, is_isomorphic, ISO_MAX_ORDER, join)
from .spectral import Partition

FAMILIES = ("gstar", "b1", "star")


def build_B1_family(n: int, s: int, k: int, b: int) -> Graph:
    """K_s joined to K_{n-(k-1)s-b-2} plus (k-2)s+b+2 isolated vertices."""
    if s < 1:
        raise GraphError("s must be at least 1")
    if k < 1 or b < 0:
        raise GraphError("need k >= 1 and b >= 0")
    clique = n - (k - 1) * s - b - 2
    indep = (k - 2) * s + b + 2
    if clique < 1 or indep < 0:
        raise GraphError(f"order {n} too small: need n >= (k-1)s+b+3 = {(k - 1) * s + b + 3}")
    return join(complete_graph(s), disjoint_union(complete_graph(clique), empty_graph(indep)))


def build_Gstar(n: int, k: int, b: int) -> Graph:
    """K_1 joined to K_{n-k-b-1} plus k+b isolated vertices."""
    if n - k - b - 1 < 1:
        raise GraphError("clique block empty: need n >= k+b+2")
    return build_B1_family(n, 1, k, b)


def build_star_family(s: int, k: int, b: int) -> Graph:
    """Complete split graph K_s joined to (k-2)s+b+3 isolated vertices."""
    if s < 1 or k < 2 or b < 0:
        raise GraphError("need s >= 1, k >= 2, b >= 0")
    return join(complete_graph(s), empty_graph((k - 2) * s + b + 3))


def b1_partition(n: int, s: int, k: int, b: int) -> Partition:
    return Partition.consecutive([s, n - (k - 1) * s - b - 2, (k - 2) * s + b + 2])


def gstar_partition(n: int, k: int, b: int) -> Partition:
    return b1_partition(n, 1, k, b)


def star_partition(s: int, k: int, b: int) -> Partition:
    return Partition.consecutive([s, (k - 2) * s + b + 3])


@dataclass(frozen=True)
class FamilySpec:
    family: str
    n: int | None = None
    s: int = 1
    k: int = 5
    b: int = 0

    def build(self) -> Graph:
        if self.family == "gstar":
            return build_Gstar(self._order(), self.k, self.b)
        if self.family == "b1":
            return build_B1_family(self._order(), self.s, self.k, self.b)
        if self.family == "star":
            return build_star_family(self.s, self.k, self.b)
        raise ValueError(f"unknown family {self.family!r}; expected one of {FAMILIES}")

    def partition(self) -> Partition:
        if self.family == "star":
            return star_partition(self.s, self.k, self.b)
        s = 1 if self.family == "gstar" else self.s
        return b1_partition(self._order(), s, self.k, self.b)

    def _order(self) -> int:
        if self.n is None:
            raise ValueError(f"family {self.family!r} needs n")
        return self.n


def is_gstar(g: Graph, k: int, b: int) -> bool:
    """Structural recogniser for K_1 v (K_{n-k-b-1} u (k+b)K_1), any labelling.

    Needs a dominating vertex whose removal leaves exactly k+b isolated
    vertices and one clique on the remaining n-k-b-1 >= 1 vertices.
    """
    n = g.n
    big = n - k - b - 1
    if big < 1 or g.num_edges != (n - 1) + big * (big - 1) // 2:
        return False
    for hub in range(n):
        if g.degree(hub) != n - 1:
            continue
        c, comps = components_after_deletion(g, [hub])
        sizes = sorted(len(cm) for cm in comps)
        if c == k + b + 1 and sizes == [1] * (k + b) + [big]:
            return True
    return False


def is_isomorphic_to_gstar(g: Graph, k: int, b: int) -> bool:
    """Isomorphism to G* by backtracking when n <= 9, structurally above that."""
    if g.n <= ISO_MAX_ORDER:
        if g.n < k + b + 2:
            return False
        return is_isomorphic(g, build_Gstar(g.n, k, b))
    return is_gstar(g, k, b)


@dataclass(frozen=True)
class ExceptionCertificate:
    is_exception: bool
    min_excess: int
    mode: str  # "exact" | "structural"
    hub_components: int | None = None


def gstar_exception_certificate(n: int, k: int, b: int, mode: str = "auto") -> ExceptionCertificate:
    """Minimum te(T, k) of G* and whether it exceeds b.

    ``exact`` runs the branch and bound (n <= 12). ``structural`` needs no
    search: deleting the hub leaves k+b+1 components, so every spanning tree
    gives the hub degree at least k+b+1, and the hub star plus a Hamilton path
    through the clique block attains exactly that.
    """
    g = build_Gstar(n, k, b)
    if mode == "auto":
        mode = "exact" if n <= EXACT_MAX_ORDER else "structural"
    if mode == "exact":
        res = min_total_excess_exact(g, k)
        return ExceptionCertificate(res.value > b, res.value, "exact")
    if mode != "structural":
        raise ValueError(f"unknown mode {mode!r}")
    hub = 0
    c, comps = components_after_deletion(g, [hub])
    lower = max(0, c - k)
    clique = sorted(max(comps, key=len))
    tree_edges = [(hub, min(cm)) for cm in comps]
    tree_edges += list(zip(clique, clique[1:]))
    tree = SpanningTree.from_edges(g, tree_edges)
    upper = total_excess(tree, k)
    if not is_connected(g) or lower != upper:
        raise AssertionError("structural certificate failed to close")
    return ExceptionCertificate(lower > b, lower, "structural", c)


def verify_Gstar_is_exception(n: int, k: int, b: int, mode: str = "auto") -> bool:
    return gstar_exception_certificate(n, k, b, mode).is_exception
