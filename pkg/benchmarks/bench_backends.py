"""Compare the numba kernels with the numpy fallback.

Each backend runs in its own interpreter so the ``SPANEXCESS_DISABLE_NUMBA``
flag takes effect at import time. Timings exclude compilation (one warm-up
call per kernel).

    python benchmarks/bench_backends.py --codes 16384 --repeat 3
"""

import argparse
import json
import os
import subprocess
import sys
import time

CHILD = r"""
import json, sys, time
import numpy as np
from spanexcess import kernels
from spanexcess._jit import default_backend
from spanexcess.harness import FILTER_TOL, gstar_threshold
from spanexcess.spectral import DEFAULT_TOL, MAX_SWEEPS

codes, repeat = int(sys.argv[1]), int(sys.argv[2])
backend = default_backend()
n, k, b = 7, 5, 0
thr, _ = gstar_threshold(n, k, b)
start = 1 << 20
pu, pv = kernels.pair_order(n)

def scan(lo, hi):
    if backend == "numba":
        return kernels.theorem_scan_chunk(n, lo, hi, k, b, thr, FILTER_TOL, True, DEFAULT_TOL, MAX_SWEEPS,
                                          pu, pv, 1 << 16)
    return kernels.theorem_scan_chunk_numpy(n, lo, hi, k, b, thr, FILTER_TOL, True, DEFAULT_TOL,
                                            MAX_SWEEPS, 1 << 16)

rng = np.random.default_rng(0)
mats = (rng.random((512, 10, 10)) < 0.5).astype(np.float64)
mats = np.triu(mats, 1)
mats = mats + mats.transpose(0, 2, 1)

def jacobi():
    if backend == "numba":
        return [kernels.jacobi_max_eigenvalue(a, DEFAULT_TOL, MAX_SWEEPS)[0] for a in mats]
    return kernels.jacobi_max_numpy(mats, DEFAULT_TOL, MAX_SWEEPS)[0]

scan(0, 64); jacobi()
out = {"backend": backend}
for name, fn in (("theorem_scan", lambda: scan(start, start + codes)), ("jacobi_batch_512x10", jacobi)):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter(); fn(); best = min(best, time.perf_counter() - t0)
    out[name] = best
out["counts"] = np.asarray(scan(start, start + codes)[0]).tolist()
print(json.dumps(out))
"""


def run(flag: bool, codes: int, repeat: int) -> dict:
    env = dict(os.environ)
    env.pop("SPANEXCESS_DISABLE_NUMBA", None)
    if flag:
        env["SPANEXCESS_DISABLE_NUMBA"] = "1"
    out = subprocess.run([sys.executable, "-c", CHILD, str(codes), str(repeat)], env=env,
                         capture_output=True, text=True, check=True)
    return json.loads(out.stdout)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--codes", type=int, default=1 << 14, help="labelled 7-vertex graphs per scan")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    t0 = time.perf_counter()
    fast, slow = run(False, args.codes, args.repeat), run(True, args.codes, args.repeat)
    if fast["counts"] != slow["counts"]:
        raise SystemExit(f"backends disagree: {fast['counts']} vs {slow['counts']}")
    print(f"{'kernel':<22}{'numba [s]':>12}{'numpy [s]':>12}{'ratio':>9}")
    for key in ("theorem_scan", "jacobi_batch_512x10"):
        print(f"{key:<22}{fast[key]:>12.4f}{slow[key]:>12.4f}{slow[key] / fast[key]:>9.1f}")
    full = fast["theorem_scan"] * (1 << 21) / args.codes
    print(f"counts agree {fast['counts']}; extrapolated full n=7 scan on numba: {full:.0f}s "
          f"(wall {time.perf_counter() - t0:.0f}s)")


if __name__ == "__main__":
    main()
