"""Theorem verification runs, lemma property suites and their reports."""

from __future__ import annotations

import itertools
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import kernels
from ._jit import default_backend, py
from .errors import ScopeError
from .excess import (EXACT_MAX_ORDER, cut_condition_holds, has_bounded_excess_tree,
                     min_total_excess_exact)
from .extremal import (b1_partition, build_B1_family, build_Gstar, build_star_family, gstar_partition,
                       is_isomorphic_to_gstar, star_partition)
from .graph import Graph, complete_graph, disjoint_union, empty_graph, is_connected, join
from .graph6 import emit_graph6, parse_graph6
from .polynomials import largest_real_root, phi_Bstar
from .spectral import (DEFAULT_TOL, MAX_SWEEPS, is_equitable, largest_eigenvalue_of_quotient,
                       quotient_matrix, spectral_radius)

SCHEMA = "spanexcess.theorem-report/1"
LEMMA_SCHEMA = "spanexcess.lemma-report/1"
MODES = ("exhaustive-labeled", "graph6-stream", "random-sample")
EXHAUSTIVE_MAX_ORDER = 7
FILTER_TOL = 1e-9
CHUNK = 1 << 16
EXCEPTION_CAP = 1 << 16
PROBABILITIES = (0.3, 0.5, 0.7)


@dataclass
class RunConfig:
    n: int
    k: int
    b: int
    mode: str = "exhaustive-labeled"
    tolerance: float = FILTER_TOL
    workers: int = 1
    output: str | None = None
    use_filter: bool = True
    samples: int = 1000
    seed: int = 0
    backend: str | None = None

    def validate(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.k < max(5, self.b + 3) or self.b < 0:
            raise ValueError("theorem context needs k >= max(5, b+3) and b >= 0")
        if (self.b, self.k) == (2, 5):
            raise ValueError("(b, k) = (2, 5) is excluded from the theorem")
        if self.n < self.k + self.b + 2:
            raise ValueError("theorem context needs n >= k + b + 2")
        if self.mode == "exhaustive-labeled" and self.n > EXHAUSTIVE_MAX_ORDER:
            raise ScopeError(f"exhaustive-labeled mode is limited to n <= {EXHAUSTIVE_MAX_ORDER}")
        if self.n > EXACT_MAX_ORDER:
            raise ScopeError(f"the excess decision is exact only up to n = {EXACT_MAX_ORDER}")
        if self.workers < 1:
            raise ValueError("workers must be positive")

    def report_view(self) -> dict:
        """Fields that determine the result (execution details excluded)."""
        d = {"n": self.n, "k": self.k, "b": self.b, "mode": self.mode,
             "tolerance": self.tolerance, "spectral_filter": self.use_filter}
        if self.mode == "random-sample":
            d.update(samples=self.samples, seed=self.seed)
        return d


@dataclass
class VerificationRecord:
    graph6: str
    rho: float
    threshold: float
    passes_filter: bool
    min_te: int | None
    is_exception: bool
    iso_to_gstar: bool
    rho1: float | None = None

    def check(self, b: int, filter_tol: float = FILTER_TOL, use_filter: bool = True) -> None:
        if self.is_exception:
            if use_filter and not self.passes_filter:
                raise AssertionError(f"{self.graph6}: exception below the spectral threshold")
            if self.min_te is not None and self.min_te <= b:
                raise AssertionError(f"{self.graph6}: exception has a tree with te <= b")
        if self.passes_filter != (self.rho >= self.threshold - filter_tol):
            raise AssertionError(f"{self.graph6}: filter flag inconsistent with rho")


# ---------------------------------------------------------------------------
# random graphs
# ---------------------------------------------------------------------------


def random_graph(rng: np.random.Generator, n: int, p: float) -> Graph:
    pu, pv = kernels.pair_order(n)
    keep = rng.random(pu.shape[0]) < p
    return Graph.from_edges(n, zip(pu[keep].tolist(), pv[keep].tolist()))


def random_connected_graphs(count: int, n_min: int, n_max: int, seed: int,
                            probabilities: Sequence[float] = PROBABILITIES) -> Iterator[Graph]:
    """Seeded connected samples; order uniform in [n_min, n_max], p cycled."""
    rng = np.random.default_rng(seed)
    made = 0
    draws = 0
    while made < count:
        n = int(rng.integers(n_min, n_max + 1))
        p = probabilities[draws % len(probabilities)]
        draws += 1
        g = random_graph(rng, n, p)
        if is_connected(g):
            made += 1
            yield g


# ---------------------------------------------------------------------------
# theorem verification
# ---------------------------------------------------------------------------


def gstar_threshold(n: int, k: int, b: int, tol: float = DEFAULT_TOL) -> tuple[float, float]:
    """rho(G*) by eigensolve and as the largest root of phi_Bstar."""
    rho = spectral_radius(build_Gstar(n, k, b), tol)
    root = largest_real_root(phi_Bstar().substitute(n=n, k=k, b=b).to_unipoly(), hi=float(n))
    return rho, root


def _scan_codes(args):
    n, start, stop, k, b, thr, use_filter, backend = args
    if backend == "numba":
        pu, pv = kernels.pair_order(n)
        out = kernels.theorem_scan_chunk(n, start, stop, k, b, thr, FILTER_TOL, use_filter, DEFAULT_TOL,
                                         MAX_SWEEPS, pu, pv, EXCEPTION_CAP)
    else:
        out = kernels.theorem_scan_chunk_numpy(n, start, stop, k, b, thr, FILTER_TOL, use_filter, DEFAULT_TOL,
                                               MAX_SWEEPS, EXCEPTION_CAP)
    counts, codes, rhos, best_pass, max_fail, bad = out
    pu, pv = kernels.pair_order(n)
    g6 = [emit_graph6(Graph(n, tuple(int(m) for m in kernels.masks_from_code(np.int64(c), n, pu, pv))))
          for c in codes]
    return counts.tolist(), list(zip(g6, rhos.tolist())), float(best_pass), float(max_fail), int(bad)


def _scan_lines(args):
    lines, n, k, b, thr, use_filter, backend = args
    jac = kernels.jacobi_max_eigenvalue if backend == "numba" else py(kernels.jacobi_max_eigenvalue)
    decide = kernels.has_tree_within if backend == "numba" else py(kernels.has_tree_within)
    counts = [0, 0, 0, 0]
    skipped = 0
    exceptions = []
    best_pass, max_fail, bad = np.inf, -np.inf, 0
    for line in lines:
        g = parse_graph6(line)
        if g.n != n:
            skipped += 1
            continue
        counts[0] += 1
        if not is_connected(g):
            continue
        counts[1] += 1
        rho, _, ok = jac(g.matrix.astype(np.float64), DEFAULT_TOL, MAX_SWEEPS)
        rho = float(rho)
        bad += 0 if ok else 1
        if use_filter and rho < thr - FILTER_TOL:
            continue
        counts[2] += 1
        if decide(g.masks(), n, k, b):
            best_pass = min(best_pass, rho - thr)
        else:
            counts[3] += 1
            exceptions.append((line, rho))
            max_fail = max(max_fail, rho)
    return counts, exceptions, float(best_pass), float(max_fail), bad, skipped


def _run_chunks(func, jobs, workers):
    if workers == 1 or len(jobs) <= 1:
        return [func(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, jobs))


def _warm_up(backend):
    if backend == "numba":
        pu, pv = kernels.pair_order(3)
        kernels.theorem_scan_chunk(3, 0, 8, 1, 0, 0.0, FILTER_TOL, True, DEFAULT_TOL, MAX_SWEEPS, pu, pv, 8)


def _finite(x):
    return None if x is None or not np.isfinite(x) else float(x)


def verify_theorem(config: RunConfig, lines: Iterable[str] | None = None, timing: bool = False) -> dict:
    """Scan graphs of order n and check that every spectral survivor without
    a spanning tree of total k-excess at most b is isomorphic to G*.

    ``lines`` supplies graph6 text for ``graph6-stream`` mode. The returned
    report is plain JSON data; it does not depend on ``workers``.
    """
    config.validate()
    backend = config.backend or default_backend()
    n, k, b = config.n, config.k, config.b
    t0 = time.perf_counter()
    thr, thr_root = gstar_threshold(n, k, b)
    _warm_up(backend)

    skipped = 0
    if config.mode == "exhaustive-labeled":
        total = 1 << (n * (n - 1) // 2)
        jobs = [(n, a, min(a + CHUNK, total), k, b, thr, config.use_filter, backend) for a in range(0, total, CHUNK)]
        parts = _run_chunks(_scan_codes, jobs, config.workers)
    else:
        if config.mode == "random-sample":
            graphs = random_connected_graphs(config.samples, n, n, config.seed)
            text = [emit_graph6(g) for g in graphs]
        else:
            if lines is None:
                raise ValueError("graph6-stream mode needs input lines")
            text = [ln.strip() for ln in lines if ln.strip()]
        size = max(1, min(4096, -(-len(text) // config.workers)))
        jobs = [(text[a:a + size], n, k, b, thr, config.use_filter, backend) for a in range(0, len(text), size)]
        raw = _run_chunks(_scan_lines, jobs, config.workers)
        parts = []
        for counts, exc, bp, mf, bad, sk in raw:
            skipped += sk
            parts.append((counts, exc, bp, mf, bad))

    counts = [0, 0, 0, 0]
    exceptions: list[tuple[str, float]] = []
    best_pass, bad = np.inf, 0
    for c, exc, bp, mf, bd in parts:
        counts = [x + y for x, y in zip(counts, c)]
        exceptions.extend(exc)
        best_pass = min(best_pass, bp)
        bad += bd

    records = []
    for g6, rho in exceptions:
        g = parse_graph6(g6)
        res = min_total_excess_exact(g, k)
        rec = VerificationRecord(
            graph6=g6, rho=rho, threshold=thr,
            passes_filter=rho >= thr - FILTER_TOL, min_te=res.value,
            is_exception=True, iso_to_gstar=is_isomorphic_to_gstar(g, k, b))
        rec.check(b, use_filter=config.use_filter)
        records.append(rec)

    counterexamples = [r.graph6 for r in records if not r.iso_to_gstar and r.passes_filter]
    failing_other = [r.rho for r in records if not r.iso_to_gstar]
    max_other = max(failing_other) if failing_other else None
    report = {
        "schema": SCHEMA,
        "config": config.report_view(),
        "threshold": {"rho_gstar": thr, "rho_gstar_char_root": thr_root},
        "counts": {
            "graphs_scanned": counts[0],
            "connected": counts[1],
            "filter_survivors": counts[2],
            "exceptions": counts[3],
            "exceptions_recorded": len(records),
            "counterexamples": len(counterexamples),
            "skipped_wrong_order": skipped,
            "jacobi_unconverged": bad,
        },
        "exceptions": [asdict(r) for r in records],
        "counterexamples": counterexamples,
        "margins": {
            "closest_passing_survivor": _finite(best_pass),
            "max_rho_failing_non_gstar": _finite(max_other),
            "spectral_gap": None if max_other is None else thr - max_other,
        },
        "verified": not counterexamples and counts[3] == len(records) and bad == 0,
    }
    if timing:
        report["timing"] = {"seconds": time.perf_counter() - t0, "workers": config.workers, "backend": backend}
    return report


# ---------------------------------------------------------------------------
# lemma suites
# ---------------------------------------------------------------------------


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    failures: int = 0
    margin: float | None = None
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.failures == 0 and self.checked > 0


def suite_cut_condition_exhaustive(n: int, k: int, b: int, workers: int = 1, backend: str | None = None) -> SuiteResult:
    """Every labelled connected graph on n vertices satisfying the cut condition
    (nonempty subsets) must have a spanning tree with te(T, k) <= b."""
    if n > EXHAUSTIVE_MAX_ORDER:
        raise ScopeError(f"exhaustive scan limited to n <= {EXHAUSTIVE_MAX_ORDER}")
    backend = backend or default_backend()
    total = 1 << (n * (n - 1) // 2)
    jobs = [(n, a, min(a + CHUNK, total), k, b, backend) for a in range(0, total, CHUNK)]
    parts = _run_chunks(_cut_chunk, jobs, workers)
    counts = np.sum([p[0] for p in parts], axis=0)
    firsts = [p[1] for p in parts if p[1] >= 0]
    res = SuiteResult(f"cut-condition exhaustive n={n} k={k} b={b}", int(counts[1]), int(counts[2]))
    res.details = {"connected": int(counts[0]), "condition_holds": int(counts[1]),
                   "converse_gaps": int(counts[3]), "first_failure_code": firsts[0] if firsts else None}
    return res


def _cut_chunk(args):
    n, start, stop, k, b, backend = args
    if backend == "numba":
        pu, pv = kernels.pair_order(n)
        counts, first = kernels.cut_condition_scan_chunk(n, start, stop, k, b, pu, pv)
    else:
        counts, first = kernels.cut_condition_scan_chunk_numpy(n, start, stop, k, b)
    return np.asarray(counts).tolist(), int(first)


def suite_cut_condition_random(samples: int, n_max: int, k_values: Sequence[int], b_values: Sequence[int],
                               seed: int, n_min: int = 3) -> SuiteResult:
    res = SuiteResult(f"cut-condition random x{samples}")
    gaps = 0
    for g in random_connected_graphs(samples, n_min, n_max, seed):
        for k in k_values:
            for b in b_values:
                holds = cut_condition_holds(g, k, b)
                tree = has_bounded_excess_tree(g, k, b)
                if holds:
                    res.checked += 1
                    if not tree:
                        res.failures += 1
                        res.details.setdefault("failures", []).append([emit_graph6(g), k, b])
                elif tree:
                    gaps += 1
    res.details["converse_gaps"] = gaps
    return res


def suite_monotonicity(pairs: int, n_max: int, seed: int, n_min: int = 2, strict_margin: float = 1e-9) -> SuiteResult:
    """Deleting an edge from a connected graph lowers the spectral radius,
    strictly when the result stays connected."""
    rng = np.random.default_rng(seed + 1)
    res = SuiteResult(f"edge-deletion monotonicity x{pairs}")
    smallest = np.inf
    for g in random_connected_graphs(pairs, n_min, n_max, seed):
        edges = g.edges()
        u, v = edges[int(rng.integers(len(edges)))]
        h = g.remove_edge(u, v)
        drop = spectral_radius(g) - spectral_radius(h)
        res.checked += 1
        if is_connected(h):
            smallest = min(smallest, drop)
            if not drop > strict_margin:
                res.failures += 1
        elif drop < -DEFAULT_TOL:
            res.failures += 1
    res.margin = _finite(smallest)
    return res


def _profiles(total: int, t: int, cap: int) -> Iterator[tuple[int, ...]]:
    """Partitions of ``total`` into exactly ``t`` parts, nonincreasing, each <= cap."""
    if t == 0:
        if total == 0:
            yield ()
        return
    for first in range(min(cap, total - (t - 1)), 0, -1):
        for rest in _profiles(total - first, t - 1, first):
            yield (first,) + rest


def clique_join(s: int, parts: Sequence[int]) -> Graph:
    return join(complete_graph(s), disjoint_union(*(complete_graph(p) for p in parts)))


def suite_clique_merging(s_values=(1, 2), t_values=(2, 3), n_max: int = 10, strict_margin: float = 1e-9) -> SuiteResult:
    """Merging all but t-1 singleton cliques into one strictly raises rho."""
    res = SuiteResult("clique-merging")
    smallest = np.inf
    for s, t in itertools.product(s_values, t_values):
        for n in range(s + t, n_max + 1):
            extreme = spectral_radius(clique_join(s, (n - s - t + 1,) + (1,) * (t - 1)))
            for parts in _profiles(n - s, t, n - s):
                if parts[0] >= n - s - t + 1:
                    continue
                gap = extreme - spectral_radius(clique_join(s, parts))
                res.checked += 1
                smallest = min(smallest, gap)
                if not gap > strict_margin:
                    res.failures += 1
    res.margin = _finite(smallest)
    return res


def family_grid() -> Iterator[tuple[str, Graph, object]]:
    for k, b in ((5, 0), (5, 1), (6, 2), (7, 3), (8, 0)):
        for n in range(k + b + 2, k + b + 13):
            yield f"gstar(n={n},k={k},b={b})", build_Gstar(n, k, b), gstar_partition(n, k, b)
    for s in range(1, 4):
        for k in (5, 6, 7):
            for b in range(0, k - 2):
                n0 = (k - 1) * s + b + 3
                for n in (n0, n0 + 4):
                    yield f"b1(n={n},s={s},k={k},b={b})", build_B1_family(n, s, k, b), b1_partition(n, s, k, b)
                yield f"star(s={s},k={k},b={b})", build_star_family(s, k, b), star_partition(s, k, b)


def suite_quotient(tolerance: float = 1e-8) -> SuiteResult:
    """Quotient Perron root equals the graph's spectral radius on the family grid."""
    res = SuiteResult("equitable-quotient")
    worst = 0.0
    for name, g, part in family_grid():
        res.checked += 1
        if not is_equitable(g, part):
            res.failures += 1
            res.details.setdefault("not_equitable", []).append(name)
            continue
        diff = abs(largest_eigenvalue_of_quotient(quotient_matrix(g, part)) - spectral_radius(g))
        worst = max(worst, diff)
        if diff > tolerance:
            res.failures += 1
    res.margin = worst
    return res


SUITES = ("cut-condition", "monotonicity", "clique-merging", "quotient")


def verify_lemma_suite(config: RunConfig, suites: Sequence[str] = SUITES, random_samples: int = 500,
                       pairs: int = 1000) -> dict:
    """Run the property suites and aggregate their pass/fail counts."""
    results = []
    if "cut-condition" in suites:
        n = min(config.n, EXHAUSTIVE_MAX_ORDER)
        results.append(suite_cut_condition_exhaustive(n, config.k, config.b, config.workers, config.backend))
        results.append(suite_cut_condition_random(random_samples, 10, (3, 4, 5), (0, 1, 2), config.seed))
    if "monotonicity" in suites:
        results.append(suite_monotonicity(pairs, 12, config.seed))
    if "clique-merging" in suites:
        results.append(suite_clique_merging())
    if "quotient" in suites:
        results.append(suite_quotient())
    return {
        "schema": LEMMA_SCHEMA,
        "config": config.report_view(),
        "suites": [dict(asdict(r), passed=r.passed) for r in results],
        "passed": all(r.passed for r in results),
    }
