import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings

from spanexcess import kernels
from spanexcess._jit import py
from spanexcess.harness import FILTER_TOL, _scan_codes, gstar_threshold
from spanexcess.spectral import DEFAULT_TOL, MAX_SWEEPS

from conftest import graphs


@settings(max_examples=40, deadline=None)
@given(graphs(min_n=2, max_n=7, connected=True))
def test_python_bodies_agree_with_compiled(g):
    adj, n = g.masks(), g.n
    for k in (1, 2, 3):
        assert py(kernels.has_tree_within)(adj, n, k, 0) == kernels.has_tree_within(adj, n, k, 0)
        assert py(kernels.prufer_min_excess)(adj, n, k) == kernels.prufer_min_excess(adj, n, k)
    assert tuple(py(kernels.win_scan)(adj, n, 3, 1, False)) == tuple(kernels.win_scan(adj, n, 3, 1, False))
    a = g.matrix.astype(np.float64)
    r1 = py(kernels.jacobi_max_eigenvalue)(a, DEFAULT_TOL, MAX_SWEEPS)[0]
    r2 = kernels.jacobi_max_eigenvalue(a, DEFAULT_TOL, MAX_SWEEPS)[0]
    assert abs(r1 - r2) < 1e-10


@settings(max_examples=30, deadline=None)
@given(graphs(min_n=2, max_n=9))
def test_batched_numpy_jacobi(g):
    a = g.matrix.astype(np.float64)[None]
    vals = kernels.jacobi_max_numpy(np.repeat(a, 3, axis=0), DEFAULT_TOL, MAX_SWEEPS)[0]
    assert np.allclose(vals, np.linalg.eigvalsh(a[0])[-1], atol=1e-9)


def test_batched_connectivity():
    codes = np.arange(1 << 10, dtype=np.int64)
    dense = kernels.dense_stack_numpy(codes, 5)
    pu, pv = kernels.pair_order(5)
    expect = [kernels.is_connected_masks(kernels.masks_from_code(c, 5, pu, pv), 5) for c in codes]
    assert kernels.connected_numpy(dense).tolist() == [bool(e) for e in expect]


@pytest.mark.parametrize("use_filter", [True, False])
def test_chunk_scanners_agree(use_filter):
    thr, _ = gstar_threshold(7, 5, 0)
    start = (1 << 20) + 12345
    args = (7, start, start + 6000, 5, 0, thr, use_filter)
    a = _scan_codes(args + ("numba",))
    b = _scan_codes(args + ("numpy",))
    assert a[0] == b[0]
    assert [g for g, _ in a[1]] == [g for g, _ in b[1]]
    assert np.allclose([r for _, r in a[1]], [r for _, r in b[1]], atol=1e-9)


def test_cut_scanners_agree():
    pu, pv = kernels.pair_order(6)
    c1, f1 = kernels.cut_condition_scan_chunk(6, 0, 1 << 15, 4, 0, pu, pv)
    c2, f2 = kernels.cut_condition_scan_chunk_numpy(6, 0, 1 << 15, 4, 0)
    assert np.asarray(c1).tolist() == np.asarray(c2).tolist() and int(f1) == int(f2)


def test_env_flag_disables_numba():
    code = "from spanexcess import _jit, kernels; print(_jit.USE_NUMBA, _jit.default_backend(), " \
           "hasattr(kernels.flood, 'py_func'))"
    env = dict(os.environ, SPANEXCESS_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["False", "numpy", "False"]
