import io
import json
import subprocess
import sys

import pytest

from spanexcess.cli import EXIT_COUNTEREXAMPLE, EXIT_OK, EXIT_SCOPE, EXIT_USAGE, cli_dispatch, int_range


def run(argv, stdin=""):
    out = io.StringIO()
    code = cli_dispatch(argv, io.StringIO(stdin), out)
    return code, out.getvalue()


def test_int_range():
    assert int_range("2:4") == [2, 3, 4]
    assert int_range("0,3,5:6") == [0, 3, 5, 6]


def test_spectral_radius_stdin():
    code, out = run(["spectral-radius", "-"], "Bw\nFsaC?\n")
    rows = [json.loads(line) for line in out.splitlines()]
    assert code == EXIT_OK and [r["n"] for r in rows] == [3, 7]
    assert rows[0]["rho"] == pytest.approx(2)


def test_min_excess_methods():
    for method in ("exact", "heuristic", "oracle"):
        code, out = run(["min-excess", "FsaC?", "--k", "5", "--method", method])
        assert code == EXIT_OK and json.loads(out)["value"] == 1


def test_win_check():
    code, out = run(["win-check", "FsaC?", "--k", "5", "--b", "0"])
    row = json.loads(out)
    assert code == EXIT_OK and row["subset"] == [0] and not row["condition_holds"]


def test_build_extremal():
    code, out = run(["build-extremal", "--family", "gstar", "--n", "7", "--k", "5", "--b", "0"])
    assert code == EXIT_OK and out.strip() == "FsaC?"
    code, _ = run(["build-extremal", "--family", "gstar", "--n", "5", "--k", "5", "--b", "0"])
    assert code == EXIT_USAGE


def test_verify_identities():
    code, out = run(["verify-identities"])
    assert code == EXIT_OK
    assert "identity phi_Bstar - phi_B1 = (s-1)*f1: OK" in out
    assert "FAILED" not in out


def test_check_f1_csv(tmp_path):
    dest = tmp_path / "f1.csv"
    code, _ = run(["check-f1", "--s", "2:3", "--k", "5:6", "--out", str(dest)])
    lines = dest.read_text().splitlines()
    assert code == EXIT_OK and lines[0] == "s,k,b,n,rho1,f1_value,sign"
    assert all(line.endswith(",negative") for line in lines[1:])


def test_check_f1_grid_shorthand():
    code, out = run(["check-f1", "--grid", "s=2", "k=6", "b=0:1", "n-offsets=0"])
    assert code == EXIT_OK and len(out.splitlines()) == 3
    assert run(["check-f1", "--grid", "q=1"])[0] == EXIT_USAGE


def test_verify_theorem_stream_and_exit_codes():
    code, out = run(["verify-theorem", "--n", "7", "--k", "5", "--b", "0", "--mode", "graph6"], "FsaC?\n")
    rep = json.loads(out)
    assert code == EXIT_OK and rep["counts"]["exceptions"] == 1
    code, _ = run(["verify-theorem", "--n", "8", "--k", "5", "--b", "0"])
    assert code == EXIT_SCOPE
    code, _ = run(["verify-theorem", "--n", "7", "--k", "4", "--b", "0"])
    assert code == EXIT_USAGE


def test_lemma_suite(tmp_path):
    dest = tmp_path / "lemmas.json"
    code, _ = run(["lemma-suite", "--suite", "quotient", "--suite", "clique-merging", "--out", str(dest)])
    assert code == EXIT_OK and json.loads(dest.read_text())["passed"]


def test_usage_errors():
    assert run([])[0] == EXIT_USAGE
    assert run(["min-excess", "Bx", "--k", "2"])[0] == EXIT_USAGE
    assert run(["min-excess", "Bw"])[0] == EXIT_USAGE


def test_scope_exit():
    from spanexcess.graph import complete_graph
    from spanexcess.graph6 import emit_graph6
    big = emit_graph6(complete_graph(13))
    assert run(["min-excess", big, "--k", "2"])[0] == EXIT_SCOPE


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "spanexcess", "build-extremal", "--family", "star",
                          "--s", "1", "--k", "5", "--b", "0"], capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.strip() == "FsaC?"
