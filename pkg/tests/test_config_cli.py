import math
import textwrap

import numpy as np
import pytest

from penaldg import experiments
from penaldg.cli import main
from penaldg.config import RunConfig, from_mapping, load_config, parse_value
from penaldg.errors import ConfigError

INI = textwrap.dedent("""
    [case]
    case_id = tiny
    dimension = 1
    [mesh]
    K = 10
    N = 2
    [penalization]
    eta1 = 1e-2
    eta2 = -1
    [time]
    dt = 1e-3
    t_final = 0.05
    [initial]
    omega = 2*pi
""")


@pytest.fixture
def ini(tmp_path):
    p = tmp_path / "run.ini"
    p.write_text(INI)
    return p


def test_parse_values():
    assert parse_value("omega", "8*pi") == pytest.approx(8 * math.pi)
    assert parse_value("eta2", "inf") is None
    assert parse_value("eta3", "none") is None
    assert parse_value("x_bounds", "-1, 1") == (-1.0, 1.0)
    assert parse_value("cancel_physical_flux", "False") is False
    with pytest.raises(ConfigError):
        parse_value("omega", "__import__('os')")
    with pytest.raises(ConfigError):
        parse_value("colour", "1")


def test_load_and_roundtrip(ini, tmp_path):
    cfg = load_config(ini)
    assert (cfg.K, cfg.N, cfg.eta2, cfg.case_id) == (10, 2, -1.0, "tiny")
    p2 = tmp_path / "again.ini"
    p2.write_text(cfg.to_ini())
    assert load_config(p2) == cfg


def test_config_validation():
    with pytest.raises(ConfigError):
        RunConfig(dimension=3)
    with pytest.raises(ConfigError):
        RunConfig(eta1=0.0)
    with pytest.raises(ConfigError):
        RunConfig(scheme="custom")
    with pytest.raises(ConfigError):
        from_mapping({"K": "ten"})


def test_duplicate_keys(tmp_path):
    p = tmp_path / "dup.ini"
    p.write_text("[a]\nK = 4\n[b]\nK = 5\n")
    with pytest.raises(ConfigError):
        load_config(p)


def test_zero_final_time_returns_initial_error():
    cfg = RunConfig(K=10, N=2, t_final=0.0, omega=2 * math.pi)
    res = experiments.run(cfg)
    np.testing.assert_array_equal(res.values, res.case.u0)
    case = experiments.build_case(cfg)
    assert res.report.error_fluid == pytest.approx(experiments.report_for(case, case.u0).error_fluid)


def test_custom_flux_matches_preset():
    a = experiments.run(RunConfig(K=8, N=2, nu=0.01, scheme="ldg", dt=1e-3, t_final=0.02))
    b = experiments.run(RunConfig(K=8, N=2, nu=0.01, scheme="custom", flux=(-1, -1, -1, 1),
                                  dt=1e-3, t_final=0.02))
    np.testing.assert_array_equal(a.values, b.values)


def test_smooth_mask_case_builds():
    case = experiments.build_case(RunConfig(K=10, N=3, mask_delta=0.01))
    chi = case.op.chi
    assert chi.max() <= 1 and chi.min() >= 0 and 0 < chi[5, 1] < 1


def test_2d_case_regions():
    cfg = experiments.fig9_base(K=10, Ky=10, N=2, t_final=0.0)
    case = experiments.build_case(cfg)
    assert case.solid_elements.sum() == 9       # arms one element wide reaching the upper bounds: 5 + 5 - 1
    assert case.fluid_region == ((0.02, 0.1), (0.02, 0.1))


def test_sweep_flags_optimum_and_records_failures():
    base = RunConfig(K=8, N=2, dt=1e-3, t_final=0.02, eta1=1e-2)
    rows = experiments.sweep(base, "eta2", [-0.5, -1.0, math.inf])
    assert [r["flag"] for r in rows] == ["", "eta2=-1/c", ""]
    assert rows[2]["eta2"] is None
    with pytest.raises(ConfigError):
        experiments.sweep(base, "omega", [1.0])
    bad = RunConfig(K=8, N=2, dt=1.0, t_final=2000.0, eta1=1e-3)
    row = experiments.sweep(bad, "eta1", [1e-3])[0]
    assert row["status"].startswith("diverged")


def test_cli_run_and_determinism(ini, tmp_path, capsys):
    out = tmp_path / "o"
    assert main(["run", "--config", str(ini), "--out", str(out), "--snapshot-every", "25"]) == 0
    first = (out / "report.csv").read_text()
    assert first.startswith("case_id,K,N,")
    snaps = sorted((out / "snapshots").iterdir())
    assert len(snaps) == 2 and snaps[0].read_text().startswith("x,u\n")
    assert main(["run", "--config", str(ini), "--out", str(out)]) == 0
    assert (out / "report.csv").read_text() == first


def test_cli_sweep(ini, capsys):
    assert main(["sweep", "--config", str(ini), "--param", "eta2", "--values=-0.5,-1,none"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 4 and "eta2=-1/c" in lines[2]


def test_cli_mea(capsys):
    assert main(["mea", "--family", "trivial", "--c", "1", "--nu", "0.001"]) == 0
    out = capsys.readouterr().out
    assert "infinite, infinite, infinite" in out and "j,m,zhe_value" in out
    assert main(["mea", "--family", "case1_upwind", "--order", "6"]) == 0
    assert "order per node: 2, 2, 2" in capsys.readouterr().out


def test_cli_exit_codes(tmp_path, capsys):
    assert main(["mea", "--family", "nonsense"]) == 2
    assert main(["run", "--config", str(tmp_path / "missing.ini")]) == 2
    assert main(["preset", "fig99"]) == 2
    bad = tmp_path / "bad.ini"
    bad.write_text("[time]\ndt = 1.0\nt_final = 2000\n[mesh]\nK = 8\nN = 2\n")
    assert main(["run", "--config", str(bad)]) == 3
    assert main([]) == 2
