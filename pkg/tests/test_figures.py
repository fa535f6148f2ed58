import csv
from collections import defaultdict

import numpy as np
import pytest

from divbar.experiment import parse_config, run_experiment
from divbar.figures import FIGURES, emit_figures
from divbar.oracle import oracle_result

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
B = 3
grid = 10, 12, 0.5
master_seed = 3
output_dir = {out}
"""


@pytest.fixture
def cfg(tmp_path):
    path = tmp_path / "fig.cfg"
    path.write_text(CFG.format(out=tmp_path / "figs"), encoding="utf-8")
    return parse_config(path)


def _read(path):
    with open(path, newline="", encoding="utf-8") as f:
        rows = list(csv.reader(f))
    return rows[0], rows[1:]


def test_emit_all_figures(cfg, tmp_path):
    written = emit_figures(cfg)
    names = {p.split("/")[-1] for p in written}
    assert names == {"paths.csv", "quasi.csv", "valuecurves.csv",
                     "contrast.csv", "estimates.csv"}

    header, rows = _read(tmp_path / "figs" / "paths.csv")
    assert header == ["path_id", "t", "value"]
    ids = {r[0] for r in rows}
    assert ids == {"1", "2", "3"}  # B paths
    assert len(rows) == 3 * 41  # n + 1 grid values each
    first = rows[0]
    assert float(first[1]) == 0.0 and float(first[2]) == 10.0

    header, rows = _read(tmp_path / "figs" / "quasi.csv")
    assert header == ["perm_id", "t", "value"]
    series = defaultdict(list)
    for pid, t, v in rows:
        series[int(pid)].append(float(v))
    assert set(series) == {0, 1, 2, 3, 4}  # observed path + alpha quasi
    terminal = series[0][-1]
    for pid in (1, 2, 3, 4):
        assert series[pid][0] == 10.0
        assert series[pid][-1] == pytest.approx(terminal, abs=1e-9)

    header, rows = _read(tmp_path / "figs" / "valuecurves.csv")
    assert header == ["perm_id", "theta", "value"]
    curve_ids = {r[0] for r in rows}
    assert curve_ids == {"1", "2", "3", "4", "5"}  # five curves
    assert len(rows) == 5 * 5  # five-point barrier grid


def test_contrast_includes_oracle_series(cfg, tmp_path):
    emit_figures(cfg, which=("contrast",))
    header, rows = _read(tmp_path / "figs" / "contrast.csv")
    assert header == ["series_id", "theta", "mean_value"]
    series = defaultdict(dict)
    for sid, theta, v in rows:
        series[sid][float(theta)] = float(v)
    assert set(series) == {"alpha=4,h=0.5", "oracle"}
    orc = oracle_result(cfg.model, cfg.r)
    for theta, v in series["oracle"].items():
        # 17 significant digits round-trip the double exactly
        assert v == orc.value_at(cfg.model.u, theta)


def test_selector_validated_and_selective(cfg, tmp_path):
    emit_figures(cfg, which=("paths",))
    out = tmp_path / "figs"
    assert (out / "paths.csv").exists()
    assert not (out / "quasi.csv").exists()
    with pytest.raises(ValueError):
        emit_figures(cfg, which=("paths", "histogram"))
    assert set(FIGURES) == {"paths", "quasi", "valuecurves", "contrast", "boxplot"}


def test_boxplot_reuses_existing_estimates(cfg, tmp_path):
    run_experiment(cfg)
    target = tmp_path / "figs" / "estimates.csv"
    before = target.read_bytes()
    emit_figures(cfg, which=("boxplot",))
    assert target.read_bytes() == before


def test_boxplot_runs_experiment_when_missing(cfg, tmp_path):
    emit_figures(cfg, which=("boxplot",))
    assert (tmp_path / "figs" / "estimates.csv").exists()
    assert (tmp_path / "figs" / "table1.csv").exists()


def test_figure_csvs_deterministic(cfg, tmp_path):
    which = ("paths", "quasi", "valuecurves", "contrast")
    emit_figures(cfg, which=which)
    out = tmp_path / "figs"
    snapshot = {name: (out / f"{name}.csv").read_bytes() for name in which}
    emit_figures(cfg, which=which)
    for name in which:
        assert (out / f"{name}.csv").read_bytes() == snapshot[name]
