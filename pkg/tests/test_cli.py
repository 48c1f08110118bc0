import json
import subprocess
import sys

import numpy as np
import pytest

from graphsamp.cli import main
from graphsamp.graph_model import gft_basis, read_edge_list, save_matrix_csv, write_edge_list

from conftest import weighted_graph


@pytest.fixture
def graph_file(tmp_path):
    path = tmp_path / "g.txt"
    write_edge_list(weighted_graph(n=20, p=0.3, seed=2), path)
    return path


def test_gen_graph_round_trip(tmp_path):
    out = tmp_path / "er.txt"
    assert main(["gen-graph", "--n", "15", "--edge-prob", "0.3", "--seed", "4", "--out", str(out)]) == 0
    assert read_edge_list(out).n == 15


def test_usage_errors_exit_1(capsys):
    assert main(["gen-graph", "--bogus"]) == 1
    assert main([]) == 1
    assert main(["gen-graph", "--n", "5", "--edge-prob", "2"]) == 1
    assert "error" in capsys.readouterr().err


def test_missing_file_exits_1(tmp_path):
    assert main(["sample", "--graph", str(tmp_path / "none.txt"), "--k", "2"]) == 1


def test_sample_then_reconstruct(graph_file, tmp_path, capsys):
    s_path = tmp_path / "s.json"
    assert main(["sample", "--graph", str(graph_file), "--k", "4", "--out", str(s_path)]) == 0
    s = json.loads(s_path.read_text())
    assert len(s["indices"]) == 4
    x = gft_basis(read_edge_list(graph_file)).v[:, :4] @ np.array([1.0, -2.0, 0.5, 3.0])
    save_matrix_csv(tmp_path / "x.csv", x[:, None])
    save_matrix_csv(tmp_path / "samples.csv", x[s["indices"]][:, None])
    for samples in ("samples.csv", "x.csv"):
        code = main(["reconstruct", "--graph", str(graph_file), "--k", "4", "--sampling", str(s_path),
                     "--samples", str(tmp_path / samples), "--truth", str(tmp_path / "x.csv")])
        assert code == 0
        res = json.loads(capsys.readouterr().out)
        assert res["relative_error"] <= 1e-20
        np.testing.assert_allclose(res["xhat"], x, atol=1e-10)


def test_reconstruct_with_noise_bound(graph_file, tmp_path, capsys):
    s_path = tmp_path / "s.json"
    main(["sample", "--graph", str(graph_file), "--k", "3", "--m", "6", "--out", str(s_path)])
    save_matrix_csv(tmp_path / "y.csv", np.ones((6, 1)))
    code = main(["reconstruct", "--graph", str(graph_file), "--k", "3", "--sampling", str(s_path),
                 "--samples", str(tmp_path / "y.csv"), "--noise-sigma", "0.1", "--eps-n", "0.5"])
    assert code == 0
    assert json.loads(capsys.readouterr().out)["bound"] > 0


def test_numerical_failure_exits_2(graph_file, tmp_path, capsys):
    # 20 nodes cannot host 20 greedy samples: the span is exhausted
    assert main(["sample", "--graph", str(graph_file), "--k", "3", "--m", "20"]) == 2
    (tmp_path / "s.json").write_text(json.dumps({"indices": [0, 1], "residual_node": None, "scores": []}))
    save_matrix_csv(tmp_path / "y.csv", np.ones((2, 1)))
    # two samples cannot determine three coefficients
    code = main(["reconstruct", "--graph", str(graph_file), "--k", "3", "--sampling", str(tmp_path / "s.json"),
                 "--samples", str(tmp_path / "y.csv")])
    assert code == 2
    assert "numerical failure" in capsys.readouterr().err


def test_recover_support(graph_file, tmp_path, capsys):
    basis = gft_basis(read_edge_list(graph_file))
    rng = np.random.default_rng(0)
    xbar = np.zeros((20, 3))
    xbar[[2, 5, 11]] = 10.0 + rng.standard_normal((3, 3))
    save_matrix_csv(tmp_path / "y.csv", basis.v @ xbar)
    code = main(["recover-support", "--signals", str(tmp_path / "y.csv"), "--basis-from", str(graph_file),
                 "--k", "3", "--xbar-out", str(tmp_path / "xbar.csv")])
    assert code == 0
    assert json.loads(capsys.readouterr().out)["support"] == [2, 5, 11]
    np.testing.assert_allclose(np.loadtxt(tmp_path / "xbar.csv", delimiter=","), xbar, atol=1e-9)


def test_experiment_writes_results(tmp_path, capsys):
    cfg = tmp_path / "exp.yaml"
    cfg.write_text(
        "experiment: sampling_vs_k\nn: 25\nedge_prob: 0.3\nk_grid: [3, 5]\ntrials: 3\n"
        "schemes: [iterative, uniform]\n"
    )
    assert main(["experiment", "--config", str(cfg), "--threads", "2"]) == 0
    paths = json.loads(capsys.readouterr().out)
    assert paths["rows"] == 4
    assert (tmp_path / "results.csv").is_file() and (tmp_path / "results.json").is_file()
    out = tmp_path / "other"
    assert main(["experiment", "--config", str(cfg), "--seed", "5", "--out", str(out)]) == 0
    assert (out / "results.csv").read_text() != (tmp_path / "results.csv").read_text()


def test_bad_config_exits_1(tmp_path):
    cfg = tmp_path / "exp.yaml"
    cfg.write_text("experiment: sampling_vs_k\ntrials: -1\n")
    assert main(["experiment", "--config", str(cfg)]) == 1


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "graphsamp", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "graphsamp" in proc.stdout
