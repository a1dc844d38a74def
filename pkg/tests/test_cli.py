"""Command-line interface: subcommands, exit codes and artefacts."""

import json

import pytest

from wrqnet.cli import main
from wrqnet.netgraph import load_network


def run(*argv):
    return main(list(argv))


def test_build_writes_deterministic_graph(tmp_path):
    out1 = tmp_path / "a.json"
    out2 = tmp_path / "b.json"
    assert run("build", "--family", "honeycomb", "--rings", "2",
               "--edge-scale", "40", "--out", str(out1)) == 0
    assert run("build", "--family", "honeycomb", "--rings", "2",
               "--edge-scale", "40", "--out", str(out2)) == 0
    assert out1.read_bytes() == out2.read_bytes()
    net = load_network(out1.read_text())
    assert net.n_nodes == 24
    assert max(e.length_km for e in net.edges) == pytest.approx(40.0)


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        run("build", "--family", "nosuch", "--rings", "2", "--out", "x.json")
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        run("build", "--family", "honeycomb", "--rings", "0", "--out", "x")
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        run("nosuchcommand")
    assert exc.value.code == 2
    capsys.readouterr()


def test_analyze_reports_characteristics(tmp_path, capsys):
    graph = tmp_path / "hc.json"
    assert run("build", "--family", "honeycomb", "--rings", "3",
               "--edge-scale", "40", "--out", str(graph)) == 0
    report_path = tmp_path / "report.json"
    assert run("analyze", "--graph", str(graph),
               "--out", str(report_path)) == 0
    report = json.loads(report_path.read_text())
    assert report["delta"] == 6
    assert report["omega"] == "2/3"
    assert report["lambda_star"] == [0, 0, 0]
    assert report["k_spectrum"]["3"] == 36  # the rest sit on the rim
    assert report["menger_cardinality"] == 3
    assert 0.0 < report["flooding_capacity"] <= \
        report["min_neighborhood_capacity"] + 1e-12
    assert len(report["cut_set"]) >= 3


def test_analyze_explicit_users(tmp_path):
    graph = tmp_path / "hc.json"
    run("build", "--family", "honeycomb", "--rings", "3",
        "--edge-scale", "40", "--out", str(graph))
    out = tmp_path / "r.json"
    assert run("analyze", "--graph", str(graph), "--users", "20", "33",
               "--out", str(out)) == 0
    assert json.loads(out.read_text())["users"] == [20, 33]


def test_analyze_malformed_json_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"nodes": [')
    assert run("analyze", "--graph", str(bad)) == 2
    err = capsys.readouterr().err
    assert "line" in err and "column" in err


def test_verify_success_and_report(tmp_path):
    out = tmp_path / "verify.json"
    assert run("--seed", "5", "verify", "--family", "honeycomb",
               "--rings", "3", "--trials", "10", "--mode", "equality",
               "--out", str(out)) == 0
    doc = json.loads(out.read_text())
    assert doc["passed"] is True
    assert doc["seed"] == 5
    assert doc["trials"] == 10
    assert doc["run"]["fibre"]["gamma"] == 0.02


def test_sweep_fig2_outputs(tmp_path):
    out = tmp_path / "fig2.csv"
    assert run("sweep-fig2", "--out", str(out), "--samples", "8") == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "family,c_target,d_max_km,rho_min"
    assert len(lines) == 1 + 5 * 8  # four lattices + the random-net line
    assert (tmp_path / "fig2_dmax.png").exists()
    assert (tmp_path / "fig2_density.png").exists()


def test_sweep_fig2_parallel_matches_serial(tmp_path):
    a = tmp_path / "serial.csv"
    b = tmp_path / "parallel.csv"
    assert run("sweep-fig2", "--out", str(a), "--samples", "6") == 0
    assert run("--jobs", "2", "sweep-fig2", "--out", str(b),
               "--samples", "6") == 0
    assert a.read_bytes() == b.read_bytes()


def test_sweep_fig3_outputs(tmp_path):
    out = tmp_path / "fig3.csv"
    assert run("sweep-fig3", "--out", str(out), "--samples", "8",
               "--preset", "down-night") == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "family,d_max_km,rho,delta_k_db,row_type"
    rows = [line.split(",") for line in lines[1:]]
    critical = {r[0]: float(r[1]) for r in rows if r[4] == "critical"}
    assert critical["chain"] == pytest.approx(215.0, abs=1e-3)
    assert critical["manhattan16"] == pytest.approx(320.36, abs=1e-2)
    assert (tmp_path / "fig3_advantage_distance.png").exists()
    assert (tmp_path / "fig3_advantage_density.png").exists()


def test_calibrate_prints_transit_time(capsys):
    assert run("calibrate", "--preset", "down-night") == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["t_Q_seconds"] == pytest.approx(203.7637920600222)


def test_config_file_overrides(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"fibre": {"gamma": 0.04}}))
    assert run("--config", str(cfg), "calibrate") == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["run"]["fibre"]["gamma"] == 0.04
    # flags beat the config file
    assert run("--config", str(cfg), "calibrate", "--gamma", "0.01") == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["run"]["fibre"]["gamma"] == 0.01


def test_unknown_config_keys_exit_2(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"fiber": {"gamma": 0.04}}))
    assert run("--config", str(cfg), "calibrate") == 2
    assert "unknown config keys" in capsys.readouterr().err
