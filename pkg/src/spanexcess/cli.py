"""Command line entry point: ``spanexcess <subcommand> ...``.

Exit codes: 0 verified/ok, 2 usage error, 3 counterexample or failed check,
4 input outside an exhaustive routine's scope.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Iterator, Sequence

from .errors import Graph6Error, GraphError, ScopeError
from .excess import (min_total_excess_exact, min_total_excess_heuristic, prufer_oracle_min_excess,
                     win_condition_worst_violator)
from .extremal import FAMILIES, FamilySpec
from .graph6 import emit_graph6, parse_graph6
from .harness import SUITES, RunConfig, verify_lemma_suite, verify_theorem
from .polynomials import (b1_template, b2_template, bstar_template, char_poly_symbolic, check_f1_negativity,
                          f1_grid, phi_B1, phi_B2, phi_Bstar, verify_difference_identity)
from .spectral import DEFAULT_TOL, spectral_radius

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_COUNTEREXAMPLE = 3
EXIT_SCOPE = 4

MODE_ALIASES = {"exhaustive": "exhaustive-labeled", "graph6": "graph6-stream", "random": "random-sample"}


def int_range(text: str) -> list[int]:
    """``"2:6"`` (inclusive) or ``"0,1,3"``."""
    out: list[int] = []
    for part in text.split(","):
        if ":" in part:
            lo, hi = part.split(":")
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    return out


def _graphs(arg: str, stdin) -> Iterator[tuple[str, object]]:
    lines = stdin if arg == "-" else [arg]
    for raw in lines:
        line = raw.strip()
        if line:
            yield line, parse_graph6(line)


def _emit(text: str, out_path: str | None, stdout) -> None:
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="spanexcess", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("spectral-radius", help="adjacency spectral radius of graph6 input")
    sp.add_argument("graph", help="graph6 string, or - for one per line on stdin")
    sp.add_argument("--tol", type=float, default=DEFAULT_TOL)

    me = sub.add_parser("min-excess", help="minimum total k-excess over spanning trees")
    me.add_argument("graph")
    me.add_argument("--k", type=int, required=True)
    me.add_argument("--method", choices=("exact", "heuristic", "oracle"), default="exact")
    me.add_argument("--restarts", type=int, default=4)

    wc = sub.add_parser("win-check", help="worst subset for c(G-S) <= (k-2)|S|+b+2")
    wc.add_argument("graph")
    wc.add_argument("--k", type=int, required=True)
    wc.add_argument("--b", type=int, required=True)
    wc.add_argument("--include-empty", action="store_true")

    be = sub.add_parser("build-extremal", help="emit an extremal family graph as graph6")
    be.add_argument("--family", choices=FAMILIES, required=True)
    be.add_argument("--n", type=int)
    be.add_argument("--s", type=int, default=1)
    be.add_argument("--k", type=int, required=True)
    be.add_argument("--b", type=int, required=True)

    sub.add_parser("verify-identities", help="exact checks of the characteristic-polynomial identities")

    cf = sub.add_parser("check-f1", help="sign of f1 at the largest root of phi_B1 over a grid (CSV)")
    cf.add_argument("--s", type=int_range, default=int_range("2:6"))
    cf.add_argument("--k", type=int_range, default=int_range("5:10"))
    cf.add_argument("--b", type=int_range, default=None, help="default 0..k-3 for each k")
    cf.add_argument("--n-offsets", type=int_range, default=[0, 5],
                    help="n = (k-1)s+b+3+offset; default 0,5")
    cf.add_argument("--grid", nargs="+", metavar="AXIS=RANGE",
                    help="shorthand, e.g. --grid s=2:6 k=5:10 b=0:2 n-offsets=0,5")
    cf.add_argument("--out")

    vt = sub.add_parser("verify-theorem", help="search for counterexamples at order n")
    vt.add_argument("--n", type=int, required=True)
    vt.add_argument("--k", type=int, required=True)
    vt.add_argument("--b", type=int, required=True)
    vt.add_argument("--mode", choices=sorted(MODE_ALIASES) + sorted(MODE_ALIASES.values()), default="exhaustive")
    vt.add_argument("--input", default="-", help="graph6 file for graph6 mode (- for stdin)")
    vt.add_argument("--samples", type=int, default=1000)
    vt.add_argument("--seed", type=int, default=0)
    vt.add_argument("--workers", type=int, default=1)
    vt.add_argument("--no-filter", action="store_true", help="control run: test every connected graph")
    vt.add_argument("--backend", choices=("numba", "numpy"))
    vt.add_argument("--timing", action="store_true")
    vt.add_argument("--out")

    ls = sub.add_parser("lemma-suite", help="property suites behind the proof")
    ls.add_argument("--n", type=int, default=7)
    ls.add_argument("--k", type=int, default=5)
    ls.add_argument("--b", type=int, default=0)
    ls.add_argument("--suite", action="append", choices=SUITES)
    ls.add_argument("--samples", type=int, default=500)
    ls.add_argument("--pairs", type=int, default=1000)
    ls.add_argument("--seed", type=int, default=0)
    ls.add_argument("--workers", type=int, default=1)
    ls.add_argument("--out")
    return p


def _identities(stdout) -> int:
    checks = [
        ("identity phi_Bstar - phi_B1 = (s-1)*f1", verify_difference_identity().holds),
        ("phi_B1 at s=1 equals phi_Bstar", phi_B1().substitute(s=1) == phi_Bstar()),
        ("phi_B1 = det(xI - B1 template)", char_poly_symbolic(b1_template()) == phi_B1()),
        ("phi_B2 = det(xI - B2 template)", char_poly_symbolic(b2_template()) == phi_B2()),
        ("phi_Bstar = det(xI - Bstar template)", char_poly_symbolic(bstar_template()) == phi_Bstar()),
    ]
    for label, ok in checks:
        stdout.write(f"{label}: {'OK' if ok else 'FAILED'}\n")
    return EXIT_OK if all(ok for _, ok in checks) else EXIT_COUNTEREXAMPLE


def run(args, stdin, stdout) -> int:
    cmd = args.command
    if cmd == "spectral-radius":
        for line, g in _graphs(args.graph, stdin):
            stdout.write(json.dumps({"graph6": line, "n": g.n, "rho": spectral_radius(g, args.tol)}) + "\n")
        return EXIT_OK
    if cmd == "min-excess":
        for line, g in _graphs(args.graph, stdin):
            if args.method == "exact":
                out = min_total_excess_exact(g, args.k).to_json()
            elif args.method == "heuristic":
                out = min_total_excess_heuristic(g, args.k, args.restarts).to_json()
            else:
                out = {"value": prufer_oracle_min_excess(g, args.k), "method": "oracle"}
            stdout.write(json.dumps({"graph6": line, "k": args.k, **out}) + "\n")
        return EXIT_OK
    if cmd == "win-check":
        for line, g in _graphs(args.graph, stdin):
            v = win_condition_worst_violator(g, args.k, args.b, args.include_empty)
            stdout.write(json.dumps({"graph6": line, "k": args.k, "b": args.b,
                                     "include_empty": args.include_empty, **v.to_json()}) + "\n")
        return EXIT_OK
    if cmd == "build-extremal":
        g = FamilySpec(args.family, args.n, args.s, args.k, args.b).build()
        stdout.write(emit_graph6(g) + "\n")
        return EXIT_OK
    if cmd == "verify-identities":
        return _identities(stdout)
    if cmd == "check-f1":
        for item in args.grid or ():
            axis, _, text = item.partition("=")
            dest = axis.replace("-", "_")
            if dest not in ("s", "k", "b", "n_offsets") or not text:
                raise ValueError(f"bad grid axis {item!r}; expected s=, k=, b= or n-offsets=")
            setattr(args, dest, int_range(text))
        report = check_f1_negativity(f1_grid(args.s, args.k, args.b, args.n_offsets))
        _emit(report.to_csv(), args.out, stdout)
        for point, reason, val in report.skipped:
            sys.stderr.write(f"skipped s={point[0]} k={point[1]} b={point[2]} n={point[3]}: {reason}"
                             f"{'' if val is None else f' (f1={val:.6g}, not asserted)'}\n")
        if report.rows:
            sys.stderr.write(f"max f1(rho1) = {report.max_value!r}\n")
        return EXIT_OK if report.all_negative else EXIT_COUNTEREXAMPLE
    if cmd == "verify-theorem":
        cfg = RunConfig(args.n, args.k, args.b, MODE_ALIASES.get(args.mode, args.mode), workers=args.workers,
                        output=args.out, use_filter=not args.no_filter, samples=args.samples, seed=args.seed,
                        backend=args.backend)
        lines = None
        if cfg.mode == "graph6-stream":
            lines = stdin.readlines() if args.input == "-" else open(args.input).readlines()
        report = verify_theorem(cfg, lines, timing=args.timing)
        _emit(json.dumps(report, indent=2) + "\n", args.out, stdout)
        return EXIT_OK if report["verified"] else EXIT_COUNTEREXAMPLE
    if cmd == "lemma-suite":
        cfg = RunConfig(args.n, args.k, args.b, workers=args.workers, output=args.out, seed=args.seed)
        report = verify_lemma_suite(cfg, args.suite or SUITES, args.samples, args.pairs)
        _emit(json.dumps(report, indent=2) + "\n", args.out, stdout)
        return EXIT_OK if report["passed"] else EXIT_COUNTEREXAMPLE
    raise AssertionError(cmd)


def cli_dispatch(argv: Sequence[str] | None = None, stdin=None, stdout=None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return run(args, stdin, stdout)
    except ScopeError as exc:
        sys.stderr.write(f"scope: {exc}\n")
        return EXIT_SCOPE
    except (Graph6Error, GraphError, ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


def main() -> None:
    sys.exit(cli_dispatch())
