import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings

from spanexcess.errors import GraphError
from spanexcess.extremal import build_B1_family, build_Gstar, b1_partition, gstar_partition
from spanexcess.graph import complete_graph, cycle_graph, empty_graph, path_graph, star
from spanexcess.spectral import (Partition, QuotientMatrix, is_equitable, largest_eigenvalue_of_quotient,
                                 perron_bracket, quotient_matrix, spectral_radius, spectrum)

from conftest import graphs


def test_known_radii():
    assert spectral_radius(star(6)) == pytest.approx(math.sqrt(6), abs=1e-10)
    assert spectral_radius(complete_graph(7)) == pytest.approx(6, abs=1e-10)
    assert spectral_radius(cycle_graph(9)) == pytest.approx(2, abs=1e-10)
    assert spectral_radius(path_graph(5)) == pytest.approx(2 * math.cos(math.pi / 6), abs=1e-10)
    assert spectral_radius(empty_graph(1)) == 0


def test_spectrum_of_complete_graph():
    ev = spectrum(complete_graph(5)).eigenvalues
    assert ev[0] == pytest.approx(4)
    assert np.allclose(ev[1:], -1)


@settings(max_examples=80, deadline=None)
@given(graphs(min_n=2, max_n=10))
def test_spectrum_matches_numpy_and_trace(g):
    ev = np.asarray(spectrum(g).eigenvalues)
    ref = np.sort(np.linalg.eigvalsh(g.matrix.astype(float)))[::-1]
    assert np.allclose(ev, ref, atol=1e-8)
    assert abs(ev.sum()) < 1e-8
    assert (ev ** 2).sum() == pytest.approx(2 * g.num_edges, abs=1e-7)


@settings(max_examples=80, deadline=None)
@given(graphs(min_n=2, max_n=10, connected=True))
def test_radius_between_average_and_max_degree(g):
    rho = spectral_radius(g)
    assert 2 * g.num_edges / g.n - 1e-9 <= rho <= max(g.degrees) + 1e-9
    assert rho >= math.sqrt(max(g.degrees)) - 1e-9


@settings(max_examples=60, deadline=None)
@given(graphs(min_n=2, max_n=9, connected=True))
def test_perron_bracket_contains_radius(g):
    lo, hi = perron_bracket(g.matrix.astype(float))
    rho = float(np.linalg.eigvalsh(g.matrix.astype(float))[-1])
    assert lo - 1e-9 <= rho <= hi + 1e-9


@pytest.mark.parametrize("n,k,b", [(7, 5, 0), (9, 5, 1), (12, 6, 2)])
def test_gstar_partition_is_equitable(n, k, b):
    g = build_Gstar(n, k, b)
    P = gstar_partition(n, k, b)
    assert is_equitable(g, P)
    B = quotient_matrix(g, P)
    assert largest_eigenvalue_of_quotient(B) == pytest.approx(spectral_radius(g), abs=1e-9)


def test_quotient_entries_gstar_9_5_1():
    B = quotient_matrix(build_Gstar(9, 5, 1), gstar_partition(9, 5, 1))
    assert B.as_int() == [[0, 2, 6], [1, 1, 0], [1, 0, 0]]


def test_b1_quotient_matches_radius():
    g = build_B1_family(13, 2, 5, 0)
    B = quotient_matrix(g, b1_partition(13, 2, 5, 0))
    assert B.as_int() == [[1, 3, 8], [2, 2, 0], [2, 0, 0]]
    assert largest_eigenvalue_of_quotient(B) == pytest.approx(spectral_radius(g), abs=1e-9)


def test_non_equitable_partition():
    P = Partition.consecutive([1, 3])
    assert not is_equitable(path_graph(4), P)
    B = quotient_matrix(path_graph(4), P)
    assert B.entries[1][1] == Fraction(4, 3)


def test_partition_must_cover():
    with pytest.raises(GraphError):
        quotient_matrix(path_graph(4), Partition.consecutive([1, 2]))


def test_quotient_rejects_negative_entries():
    with pytest.raises(ValueError):
        largest_eigenvalue_of_quotient([[0, -1], [1, 0]])


def test_lemma_deleting_edge_lowers_radius():
    g = complete_graph(6)
    h = g.remove_edge(0, 1)
    assert spectral_radius(g) - spectral_radius(h) > 1e-9
