import numpy as np
import pytest

from divbar.cli import main

CFG = """\
u = 10
c = 15
sigma = 2
lambda = 5
mu = 0.5
r = 0.2
T = 20
h_list = 0.5
alpha_list = 4
B = 2
grid = 10, 13, 0.5
master_seed = 11
output_dir = {out}
"""


@pytest.fixture
def cfg_file(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text(CFG.format(out=tmp_path / "out"), encoding="utf-8")
    return str(path)


def test_simulate_writes_path_csv(cfg_file, tmp_path, capsys):
    assert main(["simulate", "--config", cfg_file]) == 0
    out = capsys.readouterr().out
    assert "wrote" in out
    lines = (tmp_path / "out" / "path.csv").read_text().splitlines()
    assert lines[0] == "t,value"
    assert len(lines) == 1 + 41
    t0, v0 = lines[1].split(",")
    assert float(t0) == 0.0 and float(v0) == 10.0


def test_estimate_from_fresh_simulation(cfg_file, tmp_path, capsys):
    assert main(["estimate", "--config", cfg_file]) == 0
    out = capsys.readouterr().out
    assert "theta_hat = " in out
    curve = (tmp_path / "out" / "estimate_curve.csv").read_text().splitlines()
    assert curve[0] == "theta,value"
    assert len(curve) == 1 + 7  # the 10..13 step-0.5 grid


def test_estimate_round_trips_simulated_path(cfg_file, tmp_path, capsys):
    main(["simulate", "--config", cfg_file])
    capsys.readouterr()
    rc = main(["estimate", "--config", cfg_file, "--path-csv",
               str(tmp_path / "out" / "path.csv")])
    assert rc == 0
    out = capsys.readouterr().out
    theta = float(out.splitlines()[0].split("=")[1])
    assert 10.0 <= theta <= 13.0


def test_estimate_seed_reproducible(cfg_file, capsys):
    main(["estimate", "--config", cfg_file, "--seed", "314"])
    first = capsys.readouterr().out.splitlines()[0]
    main(["estimate", "--config", cfg_file, "--seed", "314"])
    second = capsys.readouterr().out.splitlines()[0]
    assert first == second and first.startswith("theta_hat = ")


def test_estimate_refine_flag(cfg_file, capsys):
    assert main(["estimate", "--config", cfg_file, "--refine"]) == 0
    assert "refined=True" in capsys.readouterr().out


def test_oracle_prints_roots_and_table(cfg_file, tmp_path, capsys):
    assert main(["oracle", "--config", cfg_file]) == 0
    out = capsys.readouterr().out
    assert "s_1 = " in out and "s_3 = " in out
    b_line = next(l for l in out.splitlines() if l.startswith("b_star"))
    assert abs(float(b_line.split("=")[1]) - 12.93958) < 1e-3
    assert "b,value" in out
    # --out also writes the table as a file
    assert main(["oracle", "--config", cfg_file, "--out",
                 str(tmp_path / "out")]) == 0
    table = (tmp_path / "out" / "oracle_values.csv").read_text().splitlines()
    assert table[0] == "b,value"
    assert len(table) == 1 + 7


def test_experiment_writes_tables(cfg_file, tmp_path, capsys):
    assert main(["experiment", "--config", cfg_file]) == 0
    out = capsys.readouterr().out
    assert "theta0 = " in out
    assert "mean" in out and "mse" in out
    assert (tmp_path / "out" / "table1.csv").exists()
    assert (tmp_path / "out" / "estimates.csv").exists()


def test_experiment_workers_do_not_change_bytes(cfg_file, tmp_path, capsys):
    main(["experiment", "--config", cfg_file, "--out", str(tmp_path / "w1")])
    main(["experiment", "--config", cfg_file, "--out", str(tmp_path / "w2"),
          "--workers", "2"])
    capsys.readouterr()
    for name in ("table1.csv", "estimates.csv"):
        assert ((tmp_path / "w1" / name).read_bytes()
                == (tmp_path / "w2" / name).read_bytes())


def test_figures_selector(cfg_file, tmp_path, capsys):
    assert main(["figures", "--config", cfg_file, "--which", "paths"]) == 0
    assert (tmp_path / "out" / "paths.csv").exists()
    assert not (tmp_path / "out" / "quasi.csv").exists()
    capsys.readouterr()


def test_missing_config_is_a_clean_error(tmp_path, capsys):
    rc = main(["simulate", "--config", str(tmp_path / "nope.cfg")])
    assert rc == 2
    assert capsys.readouterr().err.startswith("error:")


def test_invalid_config_is_a_clean_error(tmp_path, capsys):
    bad = tmp_path / "bad.cfg"
    bad.write_text(CFG.format(out=tmp_path / "out").replace("c = 15", "c = 9"),
                   encoding="utf-8")
    rc = main(["experiment", "--config", str(bad)])
    assert rc == 2
    assert "error:" in capsys.readouterr().err


def test_unknown_figure_is_a_clean_error(cfg_file, capsys):
    rc = main(["figures", "--config", cfg_file, "--which", "sparkline"])
    assert rc == 2
    assert "error:" in capsys.readouterr().err


def test_seed_override_changes_simulation(cfg_file, tmp_path, capsys):
    main(["simulate", "--config", cfg_file, "--seed", "1",
          "--out", str(tmp_path / "s1")])
    main(["simulate", "--config", cfg_file, "--seed", "2",
          "--out", str(tmp_path / "s2")])
    capsys.readouterr()
    a = (tmp_path / "s1" / "path.csv").read_bytes()
    b = (tmp_path / "s2" / "path.csv").read_bytes()
    assert a != b
