import csv
import io
import json
import math

import pytest

from hlestim.cli import main
from hlestim.complexity import method1_queries


def _rows(text):
    return list(csv.reader(io.StringIO(text)))


def test_hs_degree_prints_q(capsys):
    assert main(["hs-degree", "--t", "1", "--eps", "0.0009765625"]) == 0
    assert capsys.readouterr().out == "5\n"


def test_complexity_shadow_anchor(capsys):
    assert main(["complexity", "--method", "shadow", "--N", "2", "--eta", "1", "--k", "1", "--eps", "0.1"]) == 0
    assert capsys.readouterr().out == "300\n"


def test_complexity_trace_json(capsys):
    argv = ["complexity", "--method", "method1", "--N", "20", "--eta", "10", "--k", "1", "--eps", "0.01", "--trace"]
    assert main(argv) == 0
    body = json.loads(capsys.readouterr().out)
    total, trace = method1_queries(20, 10, 1, 0.01)
    assert body["L"] == total
    assert len(body["trace"]) == len(trace)
    assert body["trace"][-1]["L_cum"] == total
    assert body["space"] == "O(N^(2k))"


def test_domain_error_exits_one(capsys):
    assert main(["complexity", "--method", "method1", "--N", "4", "--eta", "0", "--k", "1", "--eps", "0.1"]) == 1
    assert "k <= eta" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    ["hs-degree", "--t", "-1", "--eps", "0.1"],
    ["hs-degree", "--t", "1", "--eps", "2"],
    ["complexity", "--method", "magic", "--N", "2", "--eta", "1", "--k", "1", "--eps", "0.1"],
    ["qae-mse", "--q", "2"],
    ["probe-failure", "--grid", "1"],
    ["hs-degree", "--t", "1", "--eps", "0.1", "--bogus"],
    ["oracle"],
    [],
])
def test_usage_errors_exit_two(argv, capsys):
    assert main(argv) == 2
    assert capsys.readouterr().err


def test_full_range_uniform_qae_curve(capsys):
    assert main(["qae-mse", "--q", "8", "--probe", "uniform", "--points", "4096", "--full-range"]) == 0
    rows = _rows(capsys.readouterr().out)
    assert rows[0] == ["theta", "mse"]
    assert len(rows) == 4097
    assert max(float(r[1]) for r in rows[1:]) == pytest.approx(1 / 512, abs=1e-9)
    assert float(rows[-1][0]) == math.pi / 2


def test_qae_json_and_expectation(capsys):
    assert main(["qae-mse", "--q", "6", "--probe", "uniform", "--points", "129", "--full-range", "--json"]) == 0
    plain = json.loads(capsys.readouterr().out)
    assert main(["qae-mse", "--q", "6", "--probe", "uniform", "--points", "129", "--full-range", "--json",
                 "--expectation"]) == 0
    scaled = json.loads(capsys.readouterr().out)
    assert plain["max"] == pytest.approx(1 / 128, abs=1e-9)
    assert scaled["max"] == pytest.approx(4 * plain["max"])


def test_qae_compare_columns(capsys):
    assert main(["qae-mse", "--q", "4", "--points", "9", "--compare", "--solver", "jacobi"]) == 0
    rows = _rows(capsys.readouterr().out)
    assert rows[0] == ["theta", "mse_sine", "mse_uniform", "mse_optimal"]
    assert len(rows) == 10
    assert all(float(r[3]) <= float(r[1]) + 1e-12 for r in rows[1:])


def test_probe_failure_multi_family_csv(capsys):
    assert main(["probe-failure", "--p", "3", "--grid", "1000"]) == 0
    rows = _rows(capsys.readouterr().out)
    assert rows[0] == ["theta", "uniform", "cos1", "cos2", "kaiser(0.98)"]
    assert len(rows) == 502


def test_probe_failure_single_family_json(capsys):
    assert main(["probe-failure", "--family", "cos1", "--grid", "1000", "--json"]) == 0
    body = json.loads(capsys.readouterr().out)
    assert list(body["families"]) == ["cos1"]
    assert 0.1649 <= body["families"]["cos1"]["variance"] <= 0.1652


def test_probe_failure_alpha_scan(capsys):
    assert main(["probe-failure", "--scan-alpha", "0.5,1.5", "--grid", "500"]) == 0
    rows = _rows(capsys.readouterr().out)
    assert rows[0] == ["alpha", "max_failure"]
    assert [r[0] for r in rows[1:]] == ["0.5", "1.5"]


def test_sweep_femo_eps(capsys, tmp_path):
    out = tmp_path / "femo.csv"
    assert main(["sweep", "--mode", "femo", "--k", "1", "--axis", "eps", "--from", "1e-3", "--to", "1e-2",
                 "--points", "3", "--out", str(out)]) == 0
    assert capsys.readouterr().out == ""
    rows = _rows(out.read_text())
    assert rows[0] == ["eps", "shadow", "qae", "wyy", "method1", "method2"]
    assert len(rows) == 4
    assert all(len(r) == 6 for r in rows)


def test_sweep_hubbard_n(capsys):
    assert main(["sweep", "--mode", "hubbard", "--k", "1", "--axis", "N", "--from", "8", "--to", "24",
                 "--points", "3"]) == 0
    rows = _rows(capsys.readouterr().out)
    assert [r[0] for r in rows[1:]] == ["8", "16", "24"]
    assert rows[0] == ["N", "shadow", "qae", "wyy", "method1", "method2"]


def test_sweep_with_eta_adds_particle_column(capsys):
    assert main(["sweep", "--mode", "hubbard", "--k", "1", "--axis", "N", "--from", "8", "--to", "24",
                 "--points", "3", "--with-eta"]) == 0
    rows = _rows(capsys.readouterr().out)
    assert rows[0] == ["N", "eta", "shadow", "qae", "wyy", "method1", "method2"]
    assert [r[1] for r in rows[1:]] == ["7", "14", "21"]


def test_sweep_json_keeps_eta(capsys):
    assert main(["sweep", "--mode", "hubbard", "--k", "1", "--axis", "N", "--from", "8", "--to", "16",
                 "--points", "2", "--json"]) == 0
    body = json.loads(capsys.readouterr().out)
    assert [(r["N"], r["eta"]) for r in body["rows"]] == [(8, 7), (16, 14)]


def test_sweep_femo_rejects_n_axis(capsys):
    assert main(["sweep", "--mode", "femo", "--k", "1", "--axis", "N", "--from", "8", "--to", "24"]) == 2


def test_oracle_fermion_norm(capsys):
    assert main(["oracle", "fermion-norm", "--N", "2", "--eta", "1", "--k", "1"]) == 0
    body = json.loads(capsys.readouterr().out)
    assert body["brute_norm"] == pytest.approx(3.0, abs=1e-9)
    assert body["closed_coefficient"] == 3.0
    assert body["upper_bound"] == 4.0


def test_oracle_identity_table(capsys):
    assert main(["oracle", "identity", "--Nmax", "6"]) == 0
    rows = _rows(capsys.readouterr().out)
    assert rows[0] == ["N", "eta", "k", "lhs", "rhs", "pass"]
    assert all(r[-1] == "true" for r in rows[1:])


def test_oracle_bernstein_is_reproducible(capsys):
    argv = ["oracle", "bernstein", "--trials", "300", "--seed", "4"]
    assert main(argv) == 0
    first = capsys.readouterr().out
    assert main(argv) == 0
    assert capsys.readouterr().out == first
    body = json.loads(first)
    assert body["threshold"] == 19
    assert body["rate"] <= 10 * 2.0 ** -10


def test_outputs_are_byte_identical_across_runs(capsys):
    argv = ["complexity", "--method", "wyy", "--N", "30", "--eta", "15", "--k", "2", "--eps", "0.001", "--json"]
    main(argv)
    first = capsys.readouterr().out
    main(argv)
    assert capsys.readouterr().out == first


def test_hs_degree_huge_time_prints_integer(capsys):
    assert main(["hs-degree", "--t", "1e308", "--eps", "0.5"]) == 0
    Q = int(capsys.readouterr().out)
    assert Q == pytest.approx(math.e * 1e308 / 2, rel=1e-12)


def test_unexpected_failure_exits_one(capsys, monkeypatch):
    import hlestim.cli as cli

    def broken(t, eps):
        raise RuntimeError("boom")

    monkeypatch.setattr(cli, "hs_degree", broken)
    assert main(["hs-degree", "--t", "1", "--eps", "0.5"]) == 1
    err = capsys.readouterr().err
    assert "RuntimeError: boom" in err
    assert "Traceback" not in err
