import json
import math

import numpy as np
import pytest

from tpa.cli import EXIT_CONFIG, EXIT_IO, EXIT_QUADRATURE, main
from tpa.dephasing import OUParams
from tpa.sweeps import (
    DEFAULT_DELTA_GRID,
    PRESETS,
    SWEEP_HEADER,
    ConfigError,
    GridSpec,
    SweepConfig,
    emit_csv,
    load_config,
    parallel_map,
    parse_config,
    parse_mc_config,
    run_mc_report,
    run_preset,
    run_sweep,
)

from helpers import OMEGA_E, default_mc_report

SMALL = {
    "beam": "coherent",
    "delta_grid": {"min": 1e11, "max": 1e14, "points": 4, "spacing": "log"},
    "intensity_grid": {"min": 1e3, "max": 1e9, "points": 3, "spacing": "log"},
}


def write(tmp_path, doc, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return path


def test_grid_values():
    assert GridSpec(1.0, 100.0, 3).values() == pytest.approx([1.0, 10.0, 100.0])
    assert GridSpec(0.0, 1.0, 5, "linear").values()[2] == 0.5
    assert GridSpec(2.0, 3.0, 1).values().tolist() == [2.0]
    for bad in [(1.0, 1.0, 3), (1.0, 2.0, 0), (0.0, 1.0, 3), (1.0, 2.0, 3, "cubic")]:
        with pytest.raises(ConfigError):
            GridSpec(*bad)


def test_unknown_keys_rejected():
    with pytest.raises(ConfigError):
        parse_config({"beam": "coherent", "intensty_grid": {}})
    with pytest.raises(ConfigError):
        parse_config({"molecule": {"gamma_eq": 1.0}})
    with pytest.raises(ConfigError):
        parse_config({"delta_grid": {"min": 1, "max": 2, "points": 2, "step": 1}})
    with pytest.raises(ConfigError):
        parse_config({"quadrature": {"rtol": 1e-6}})
    with pytest.raises(ConfigError):
        parse_config({"beam": "thermal"})
    with pytest.raises(ConfigError):
        parse_config({"preset": "fig7"})


def test_bad_molecule_override():
    cfg = parse_config({"molecule": {"gamma_bar_eg": 1e12}})
    with pytest.raises(ConfigError):
        cfg.molecule_at(0.0)


def test_sweep_shape_and_order():
    r = run_sweep(parse_config(SMALL))
    rows = r.table_rows()
    assert len(rows) == 4 * 3
    keys = [(row[0], row[1]) for row in rows]
    assert keys == sorted(keys)
    assert r.header == SWEEP_HEADER


def test_one_photon_monotone_in_intensity():
    r = run_preset("fig5", delta_points=5, intensity_points=12)
    rows = np.array([row[:8] for row in r.table_rows()], dtype=float)
    for d in np.unique(rows[:, 0]):
        a1 = rows[rows[:, 0] == d, 2]
        assert np.all(np.diff(a1) > 0)


def test_invalid_rows_kept():
    r = run_sweep(parse_config({**SMALL, "intensity_grid": {"min": 1e2, "max": 1e13, "points": 12}}))
    flags = [row[-1] for row in r.table_rows()]
    assert any(flags) and not all(flags)
    assert len(flags) == 4 * 12


def test_squeezed_sweep_reuses_sections(fresh_cache):
    from tpa import squeezed
    cfg = parse_config({**SMALL, "beam": "squeezed"})
    run_sweep(cfg)
    assert squeezed._sigma2d.cache_info().currsize == 4 * 8
    assert squeezed._sigma2d.cache_info().hits == 0


def test_csv_header_and_format(tmp_path):
    r = run_sweep(parse_config({**SMALL, "delta_grid": {"min": 1e12, "max": 2e12, "points": 1},
                                "intensity_grid": {"min": 1e4, "max": 2e4, "points": 1}}))
    path = emit_csv(r, tmp_path / "one.csv")
    raw = path.read_bytes()
    assert b"\r" not in raw
    lines = raw.decode().splitlines()
    assert len(lines) == 2
    assert lines[0] == ("delta_rad_s,intensity_W_m2,a1_W,a2_W,a3_W,a4_W,a5_W,"
                        "one_photon_W,two_photon_W,perturbation_valid")
    cells = lines[1].split(",")
    assert cells[-1] in ("true", "false")
    # every numeric cell round-trips exactly
    for cell, value in zip(cells[:-1], r.table_rows()[0][:-1]):
        assert "e" in cell and float(cell) == value
    meta = json.loads(path.with_suffix(".json").read_text())
    assert meta["constants_version"] and meta["quadrature"]["rel_tol"] == 1e-7


def test_valid_column_is_boolean_text(tmp_path):
    r = run_sweep(parse_config({**SMALL, "intensity_grid": {"min": 1e2, "max": 1e13, "points": 6}}))
    path = emit_csv(r, tmp_path / "s.csv")
    values = {line.rsplit(",", 1)[1] for line in path.read_text().splitlines()[1:]}
    assert values == {"true", "false"}


def test_rerun_byte_identical(tmp_path, monkeypatch):
    cfg = parse_config({**SMALL, "beam": "squeezed"})
    a = emit_csv(run_sweep(cfg), tmp_path / "a" / "s.csv")
    monkeypatch.setenv("TPA_THREADS", "3")
    b = emit_csv(run_sweep(cfg), tmp_path / "b" / "s.csv")
    assert a.read_bytes() == b.read_bytes()
    assert a.with_suffix(".json").read_bytes() == b.with_suffix(".json").read_bytes()


def test_parallel_map_keeps_order(monkeypatch):
    monkeypatch.setenv("TPA_THREADS", "4")
    assert parallel_map(lambda x: x * x, list(range(50))) == [x * x for x in range(50)]
    monkeypatch.setenv("TPA_THREADS", "many")
    with pytest.raises(ConfigError):
        parallel_map(lambda x: x, [1, 2])


def test_fig13_cusp():
    r = run_preset("fig13")
    d = r.column("delta_rad_s")
    k = int(np.argmax(r.column("sigma_sq_I")))
    j = int(np.argmin(np.abs(np.log(d / (OMEGA_E / 2)))))
    assert abs(k - j) <= 1


@pytest.fixture(scope="module")
def fig16():
    return run_preset("fig16")


def test_fig16_ratio_at_least_three_where_valid(fig16):
    ratio = fig16.column("ratio")
    valid = fig16.column("perturbation_valid").astype(bool)
    assert np.all(ratio[valid] >= 3)


def test_fig16_enhancement(fig16):
    d, i, ratio = fig16.column("delta_rad_s"), fig16.column("intensity_W_m2"), fig16.column("ratio")
    region = (d >= OMEGA_E / 4) & (d <= OMEGA_E / 2) & (i <= 1e4)
    assert ratio[region].max() >= 1e3


def test_fig16_masks_not_interpolated(fig16):
    sq = fig16.column("sq_valid").astype(bool)
    coh = fig16.column("coh_valid").astype(bool)
    assert np.array_equal(fig16.column("perturbation_valid").astype(bool), sq & coh)


@pytest.mark.parametrize("name", [p for p in PRESETS if p not in ("mc", "fig16")])
def test_presets_run(name, tmp_path):
    r = run_preset(name)
    path = emit_csv(r, tmp_path / f"{name}.csv")
    n = len(path.read_text().splitlines())
    assert n == len(r.rows) + 1 > 1
    if name in ("fig5", "fig6", "fig14", "fig15"):
        assert len(r.rows) == 80 * 80


def test_mc_report_zero_noise():
    p = OUParams(sigma_sq=0.0, tau_c=1.0, dt=0.1, horizon=5.0, n_traj=20)
    r = run_mc_report(p, 6)
    assert np.all(r.column("abs_kernel_mc") == 1.0)
    assert r.header == ("t_s", "abs_kernel_mc", "stderr", "kernel_analytic", "kernel_impact")


def test_mc_report_seed():
    base = dict(sigma_sq=0.1, tau_c=1.0, dt=0.1, horizon=10.0, n_traj=200)
    a = run_mc_report(OUParams(**base, seed=1), 5)
    b = run_mc_report(OUParams(**base, seed=2), 5)
    assert not np.array_equal(a.column("abs_kernel_mc")[1:], b.column("abs_kernel_mc")[1:])
    assert np.array_equal(a.column("kernel_analytic"), b.column("kernel_analytic"))


@pytest.mark.slow
def test_mc_report_defaults():
    p, rep = default_mc_report()
    assert p.n_traj == 100_000 and p.sigma_sq * p.tau_c**2 == pytest.approx(1e-2)
    mc, se, ana = rep.column("abs_kernel_mc"), rep.column("stderr"), rep.column("kernel_analytic")
    assert np.mean(np.abs(mc - ana) <= 3 * se) >= 0.95


def test_mc_config_parsing():
    p, n = parse_mc_config({"tau_c": 1e-12, "n_traj": 10, "seed": 4, "t_points": 7})
    assert n == 7 and p.seed == 4 and p.sigma_sq * p.tau_c**2 == pytest.approx(1e-2)
    with pytest.raises(ConfigError):
        parse_mc_config({"ntraj": 10})
    with pytest.raises(ConfigError):
        parse_mc_config({"tau_c": 1.0, "dt": 0.5})


# -- CLI ----------------------------------------------------------------------

def test_cli_sweep(tmp_path, capsys):
    cfg = write(tmp_path, {**SMALL, "output": "run.csv"})
    assert main(["sweep", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 0
    assert (tmp_path / "o" / "run.csv").exists() and (tmp_path / "o" / "run.json").exists()


def test_cli_config_errors(tmp_path, capsys):
    assert main(["sweep", "--config", str(write(tmp_path, {"typo": 1}))]) == EXIT_CONFIG
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["sweep", "--config", str(bad)]) == EXIT_CONFIG
    assert main(["sweep", "--config", str(tmp_path / "missing.json")]) == EXIT_CONFIG
    assert "config error" in capsys.readouterr().err


def test_cli_quadrature_failure(tmp_path, capsys):
    doc = {**SMALL, "beam": "squeezed", "quadrature": {"rel_tol": 1e-14, "max_subdivisions": 2}}
    assert main(["sweep", "--config", str(write(tmp_path, doc))]) == EXIT_QUADRATURE
    assert "delta =" in capsys.readouterr().err


def test_cli_io_error(tmp_path, capsys):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    cfg = write(tmp_path, SMALL)
    assert main(["sweep", "--config", str(cfg), "--out", str(blocker / "sub")]) == EXIT_IO


def test_cli_g2_and_xsec(tmp_path, capsys):
    assert main(["g2", "--time", "--out", str(tmp_path), "--points", "11"]) == 0
    assert main(["g2", "--freq", "--out", str(tmp_path), "--points", "11"]) == 0
    lines = (tmp_path / "g2_time.csv").read_text().splitlines()
    assert lines[0] == "tau_s,g2" and len(lines) == 12
    capsys.readouterr()
    assert main(["xsec", "--delta", "1e13"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert set(doc["squeezed"]) >= {"sigma1", "sigma5_I", "sigma5_II"}
    assert main(["g2", "--time", "--beta0", "-1"]) == EXIT_CONFIG


def test_cli_mc(tmp_path):
    cfg = write(tmp_path, {"sigma_sq": 0.01, "tau_c": 1.0, "horizon": 5.0, "n_traj": 50, "t_points": 4})
    assert main(["mc", "--config", str(cfg), "--out", str(tmp_path)]) == 0
    lines = (tmp_path / "mc.csv").read_text().splitlines()
    assert lines[0] == "t_s,abs_kernel_mc,stderr,kernel_analytic,kernel_impact" and len(lines) == 5


def test_cli_preset_small(tmp_path):
    assert main(["preset", "fig6", "--out", str(tmp_path), "--delta-points", "2", "--intensity-points", "2"]) == 0
    assert len((tmp_path / "fig6.csv").read_text().splitlines()) == 5


def test_default_config_round_trip(tmp_path):
    cfg = load_config(write(tmp_path, {}))
    assert cfg == SweepConfig()
    assert cfg.delta_grid == DEFAULT_DELTA_GRID
