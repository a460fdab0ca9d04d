from __future__ import annotations

import json
import subprocess
import sys

import pytest

from netcode.adversary import nested_received_space, find_three_codeword_instance
from netcode.cli import main
from netcode.ffmat import GF2, Matrix, format_matrix


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def mat(tmp_path, name, rows, f=GF2):
    return write(tmp_path, name, format_matrix(Matrix.from_rows(f, rows)))


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def gen(tmp_path, capsys, m, n, k):
    path = str(tmp_path / f"g{m}{n}{k}.json")
    assert run(capsys, "gen-code", "--m", str(m), "--n", str(n), "--k", str(k), "-o", path)[0] == 0
    return path


def test_metric_rank_distance(tmp_path, capsys):
    x = mat(tmp_path, "x.mat", [[1, 0], [1, 1]])
    assert run(capsys, "metric", "rank-dist", x, x)[:2] == (0, "0\n")


def test_metric_injection_on_nested_instance(tmp_path, capsys):
    inst = find_three_codeword_instance()
    v1, v2, _ = inst.spaces
    u = nested_received_space(v1, v2)
    a = write(tmp_path, "v1.mat", format_matrix(v1.basis))
    b = write(tmp_path, "u.mat", format_matrix(u.basis))
    assert run(capsys, "metric", "injection", a, b)[1].strip() == str(inst.gamma)


def test_metric_delta_rho(tmp_path, capsys):
    x = mat(tmp_path, "x.mat", [[1, 0], [0, 1]])
    x2 = mat(tmp_path, "x2.mat", [[0, 0], [0, 0]])
    # d_I = 2, so [d_I − 1]⁺ = 1
    assert run(capsys, "metric", "delta-rho", "--rho", "1", x, x2)[1].strip() == "1"
    assert run(capsys, "metric", "disc-af", "--edges", x2, x, x2)[1].strip() == "inf"


def test_capability_records(tmp_path, capsys):
    code, out, _ = run(capsys, "capability", gen(tmp_path, capsys, 2, 2, 1))
    rec = json.loads(out)
    assert code == 0 and rec["delta"] == "2" and rec["tau"] == "0"
    assert rec["detection"] == [{"t": 0, "sigma": 1}]
    rec = json.loads(run(capsys, "capability", gen(tmp_path, capsys, 3, 3, 1))[1])
    assert rec["delta"] == "3" and rec["tau"] == "1"
    single = write(tmp_path, "one.mat", format_matrix(Matrix.identity(GF2, 2)))
    rec = json.loads(run(capsys, "capability", single)[1])
    assert rec["unbounded"] and rec["tau"] == "inf"


def test_decode_and_bounded(tmp_path, capsys):
    code = gen(tmp_path, capsys, 2, 2, 1)
    y = mat(tmp_path, "y.mat", [[0, 0], [0, 0]])
    rec = json.loads(run(capsys, "decode", code, y)[1])
    assert rec["discrepancy"] == 0 and rec["tie_count"] == 1
    noisy = mat(tmp_path, "n.mat", [[1, 0], [0, 0]])
    rec = json.loads(run(capsys, "decode", code, noisy, "--bounded", "0")[1])
    assert rec["failure"]


def test_simulate_and_replay(tmp_path, capsys):
    code = gen(tmp_path, capsys, 3, 3, 1)
    report = str(tmp_path / "r.json")
    status, _, err = run(capsys, "simulate", code, "--t", "1", "--rho", "1", "--family", "-o", report)
    assert status == 0 and "seed: 0" in err
    first = json.loads(open(report).read())
    assert first["verdict"] == "CONFIRMED" and first["predicted_success"] is False
    again = str(tmp_path / "again.json")
    assert run(capsys, "simulate", "--replay", report, "-o", again)[0] == 0
    assert open(again).read() == open(report).read()


def test_verify_suite(tmp_path, capsys):
    status, out, err = run(capsys, "verify", "lemma1")
    assert status == 0 and json.loads(out)["passed"] and "PASS" in err


def test_bounds(tmp_path, capsys):
    rec = json.loads(run(capsys, "bounds", gen(tmp_path, capsys, 3, 3, 1), "--rho", "1")[1])
    assert rec["mrd"] and rec["delta_A"] == 2 and rec["bound_coherent"] == "8" and rec["achieved_coherent"]


def test_exit_codes(tmp_path, capsys):
    bad = write(tmp_path, "bad.mat", "garbage\n")
    assert run(capsys, "metric", "rank-dist", bad, bad)[0] == 2
    a = mat(tmp_path, "a.mat", [[1, 0]])
    b = mat(tmp_path, "b.mat", [[1, 0, 0]])
    assert run(capsys, "metric", "rank-dist", a, b)[0] == 3
    assert run(capsys, "metric", "rank-dist", str(tmp_path / "missing.mat"), a)[0] == 4


def test_budget_refusal_and_force(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("NETCODE_BUDGET", "10")
    code = gen(tmp_path, capsys, 3, 3, 1)
    assert run(capsys, "simulate", code, "--t", "1", "--mode", "exhaustive")[0] == 4
    assert run(capsys, "--force", "simulate", code, "--t", "1", "--mode", "exhaustive")[0] == 0


def test_console_script_entry():
    proc = subprocess.run([sys.executable, "-m", "netcode.cli", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("netcode")
