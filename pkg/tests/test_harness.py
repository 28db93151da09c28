import json
from math import comb

import numpy as np
import pytest

from spanexcess import kernels
from spanexcess.errors import ScopeError
from spanexcess.extremal import build_Gstar
from spanexcess.graph import complete_graph, join, empty_graph, star, path_graph
from spanexcess.graph6 import emit_graph6
from spanexcess.harness import (RunConfig, VerificationRecord, clique_join, random_connected_graphs,
                                suite_clique_merging, suite_cut_condition_exhaustive, suite_cut_condition_random,
                                suite_monotonicity, suite_quotient, verify_lemma_suite, verify_theorem)
from spanexcess.spectral import DEFAULT_TOL, MAX_SWEEPS


def connected_labelled(n):
    c = [0, 1]
    for m in range(2, n + 1):
        c.append(2 ** comb(m, 2) - sum(comb(m - 1, j - 1) * c[j] * 2 ** comb(m - j, 2) for j in range(1, m)))
    return c[n]


def test_recurrence_oracle():
    assert [connected_labelled(m) for m in range(1, 8)] == [1, 1, 4, 38, 728, 26704, 1866256]


@pytest.mark.parametrize("n", [4, 5, 6])
def test_chunk_connected_counts(n):
    pu, pv = kernels.pair_order(n)
    counts = kernels.theorem_scan_chunk(n, 0, 1 << comb(n, 2), 5, 0, 1e9, 1e-9, True, DEFAULT_TOL, MAX_SWEEPS,
                                        pu, pv, 16)[0]
    assert counts[0] == 1 << comb(n, 2) and counts[1] == connected_labelled(n) and counts[2] == 0


def test_config_validation():
    with pytest.raises(ValueError):
        RunConfig(7, 4, 0).validate()
    with pytest.raises(ValueError):
        RunConfig(9, 5, 2).validate()
    with pytest.raises(ValueError):
        RunConfig(6, 5, 0).validate()
    with pytest.raises(ScopeError):
        RunConfig(8, 5, 0).validate()
    with pytest.raises(ScopeError):
        RunConfig(13, 5, 0, mode="random-sample").validate()
    RunConfig(8, 5, 0, mode="graph6-stream").validate()


def test_record_check():
    rec = VerificationRecord("FsaC?", 2.0, 2.5, False, 1, True, True)
    with pytest.raises(AssertionError):
        rec.check(0)
    rec.check(0, use_filter=False)


def control_corpus():
    gs = [star(7), build_Gstar(8, 5, 0), complete_graph(8), path_graph(8),
          join(complete_graph(1), empty_graph(7)).add_edge(1, 2).add_edge(3, 4)]
    return [emit_graph6(g) + "\n" for g in gs] + ["Bw\n"]


def test_stream_control_run_without_filter():
    cfg = RunConfig(8, 5, 0, mode="graph6-stream", use_filter=False)
    rep = verify_theorem(cfg, control_corpus())
    assert rep["verified"]
    assert rep["counts"]["skipped_wrong_order"] == 1
    assert rep["counts"]["exceptions"] == 2  # K_{1,7} fails, below the threshold
    others = [e for e in rep["exceptions"] if not e["iso_to_gstar"]]
    assert [e["graph6"] for e in others] == [emit_graph6(star(7))]
    assert rep["margins"]["spectral_gap"] > 0


def test_stream_with_filter_only_gstar_survives():
    rep = verify_theorem(RunConfig(8, 5, 0, mode="graph6-stream"), control_corpus())
    assert rep["verified"] and rep["counts"]["exceptions"] == 1
    assert rep["exceptions"][0]["iso_to_gstar"] and rep["exceptions"][0]["min_te"] == 1


def test_random_mode_is_deterministic_across_workers():
    base = dict(n=9, k=5, b=1, mode="random-sample", samples=120, seed=7)
    r1 = verify_theorem(RunConfig(workers=1, **base))
    r2 = verify_theorem(RunConfig(workers=2, **base))
    assert json.dumps(r1, sort_keys=True) == json.dumps(r2, sort_keys=True)
    assert r1["verified"] and r1["counts"]["connected"] == 120


def test_random_graphs_seeded():
    a = [emit_graph6(g) for g in random_connected_graphs(20, 3, 9, seed=1)]
    b = [emit_graph6(g) for g in random_connected_graphs(20, 3, 9, seed=1)]
    assert a == b and len(set(a)) > 10


def test_suites_small():
    assert suite_cut_condition_exhaustive(5, 3, 0).passed
    assert suite_cut_condition_random(30, 8, (3, 4), (0, 1), seed=2).passed
    assert suite_monotonicity(50, 9, seed=3).passed
    res = suite_clique_merging(n_max=8)
    assert res.passed and res.margin > 1e-9
    assert suite_quotient().passed


def test_clique_join():
    g = clique_join(2, (3, 1))
    assert g.n == 6 and g.num_edges == 1 + 3 + 2 * 4


def test_lemma_report_shape():
    rep = verify_lemma_suite(RunConfig(7, 5, 0), suites=("clique-merging", "quotient"))
    assert rep["passed"] and [s["name"] for s in rep["suites"]] == ["clique-merging", "equitable-quotient"]
