"""Adjacency spectra, quotient matrices and equitable partitions."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .errors import ConvergenceError, GraphError, SpanExcessError
from .graph import Graph, VertexSet

DEFAULT_TOL = 1e-10
MAX_SWEEPS = 100
POWER_MAX_ITER = 20000


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: tuple[float, ...]  # descending
    tolerance: float

    @property
    def radius(self) -> float:
        return self.eigenvalues[0]


@dataclass(frozen=True)
class Partition:
    """Ordered cells covering ``0..n-1`` without overlap."""

    cells: tuple[VertexSet, ...]

    @classmethod
    def of(cls, cells: Iterable[Iterable[int]]) -> Partition:
        return cls(tuple(c if isinstance(c, VertexSet) else VertexSet.of(c) for c in cells))

    @classmethod
    def consecutive(cls, sizes: Sequence[int]) -> Partition:
        """Cells of the given sizes laid out over ``0..n-1`` in order."""
        cells, start = [], 0
        for size in sizes:
            cells.append(VertexSet.of(range(start, start + size)))
            start += size
        return cls(tuple(cells))

    def validate(self, n: int) -> None:
        seen = 0
        for i, cell in enumerate(self.cells):
            if cell.mask == 0:
                raise GraphError(f"cell {i} is empty")
            if cell.mask & seen:
                raise GraphError(f"cell {i} overlaps an earlier cell")
            seen |= cell.mask
        if seen != (1 << n) - 1:
            raise GraphError("cells do not cover the vertex set")


@dataclass(frozen=True)
class QuotientMatrix:
    """Average block row sums, kept as exact fractions."""

    entries: tuple[tuple[Fraction, ...], ...]
    partition: Partition | None = None

    @property
    def size(self) -> int:
        return len(self.entries)

    @property
    def is_integral(self) -> bool:
        return all(x.denominator == 1 for row in self.entries for x in row)

    def as_int(self) -> list[list[int]]:
        if not self.is_integral:
            raise ValueError("quotient matrix has non-integer entries")
        return [[int(x) for x in row] for row in self.entries]

    def as_float(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.entries])


def _dense(g: Graph) -> np.ndarray:
    return g.matrix.astype(np.float64)


def _jacobi(a: np.ndarray, tol: float):
    d, off, sweeps, ok = kernels.jacobi_eigenvalues(a, tol, MAX_SWEEPS)
    if not ok:
        top = float(d.max())
        raise ConvergenceError(f"Jacobi did not converge in {MAX_SWEEPS} sweeps", (top - off, top + off))
    return d, float(off)


def spectrum(g: Graph, tol: float = DEFAULT_TOL) -> Spectrum:
    if g.n < 1:
        raise GraphError("spectrum of the null graph")
    if tol <= 0:
        raise ValueError("tol must be positive")
    d, off = _jacobi(_dense(g), tol)
    return Spectrum(tuple(sorted((float(x) for x in d), reverse=True)), off)


def perron_bracket(a: np.ndarray, tol: float = DEFAULT_TOL, max_iter: int = POWER_MAX_ITER):
    """Certified interval around the spectral radius of a nonnegative matrix.

    Power iteration on ``a + I`` from the all-ones vector; the shift keeps the
    iteration from oscillating on bipartite structure.
    """
    lo, hi, _ = kernels.collatz_wielandt(np.ascontiguousarray(a, dtype=np.float64), 1.0, tol, max_iter)
    return float(lo), float(hi)


def spectral_radius(g: Graph, tol: float = DEFAULT_TOL, cross_check: bool = True) -> float:
    """Largest adjacency eigenvalue, accurate to ``tol``.

    Computed by cyclic Jacobi; with ``cross_check`` the value must also fall in
    the Collatz-Wielandt bracket from power iteration.
    """
    if g.n < 1:
        raise GraphError("spectral radius of the null graph")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if g.n == 1:
        return 0.0
    a = _dense(g)
    d, _ = _jacobi(a, tol)
    rho = float(d.max())
    if cross_check:
        lo, hi = perron_bracket(a, tol)
        slack = 1e-9 + tol
        if not lo - slack <= rho <= hi + slack:
            raise SpanExcessError(f"Jacobi radius {rho!r} outside power-iteration bracket [{lo!r}, {hi!r}]")
    return rho


def _check_partition(g: Graph, P: Partition) -> None:
    P.validate(g.n)


def _block_counts(g: Graph, P: Partition) -> list[list[list[int]]]:
    """counts[i][j] = neighbour counts into cell j for each vertex of cell i."""
    return [[[bin(g.rows[v] & cj.mask).count("1") for v in ci] for cj in P.cells] for ci in P.cells]


def quotient_matrix(g: Graph, P: Partition) -> QuotientMatrix:
    _check_partition(g, P)
    counts = _block_counts(g, P)
    entries = tuple(
        tuple(Fraction(sum(c), len(c)) for c in row) for row in counts
    )
    return QuotientMatrix(entries, P)


def is_equitable(g: Graph, P: Partition) -> bool:
    _check_partition(g, P)
    return all(len(set(c)) == 1 for row in _block_counts(g, P) for c in row)


def largest_eigenvalue_of_quotient(B, tol: float = DEFAULT_TOL) -> float:
    """Perron root of a nonnegative quotient matrix.

    Power iteration with an all-ones start; for matrices of size at most 3 with
    integer entries the result is checked against the largest real root of
    the exact characteristic polynomial.
    """
    entries = B.entries if isinstance(B, QuotientMatrix) else tuple(tuple(Fraction(x) for x in row) for row in B)
    a = np.array([[float(x) for x in row] for row in entries])
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("quotient matrix must be square")
    if (a < 0).any():
        raise ValueError("quotient matrix has a negative entry; Perron theory needs a nonnegative matrix")
    if not a.any():
        return 0.0
    lo, hi = perron_bracket(a, tol)
    if hi - lo >= tol:
        raise ConvergenceError("power iteration on the quotient matrix did not converge", (lo, hi))
    rho = 0.5 * (lo + hi)
    m = a.shape[0]
    if m <= 3 and all(x.denominator == 1 for row in entries for x in row):
        from .polynomials import char_poly_exact, largest_real_root

        p = char_poly_exact([[int(x) for x in row] for row in entries])
        root = largest_real_root(p, hi=float(a.sum(axis=1).max()) + 1.0, tol=1e-12)
        if abs(root - rho) > 10 * tol + 1e-11:
            raise SpanExcessError(f"power iteration {rho!r} disagrees with characteristic root {root!r}")
    return rho
