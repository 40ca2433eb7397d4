import math
import pathlib

import numpy as np
import pytest

import nsfv

CONFIGS = pathlib.Path(__file__).resolve().parents[2] / "configs"


def test_reference_law_values():
    law = nsfv.reference()
    assert nsfv.pressure(law, 1.0, 1.0) == pytest.approx(2.0)
    assert nsfv.internal_energy(law, 2.0, 1.0) == pytest.approx(4.5)
    assert nsfv.good_unknown(law, 3.0, 2.0, 0.1) == pytest.approx(4.2)
    assert abs(nsfv.theta_of_g(law, 3.0, 4.2, 0.1) - 2.0) < 1e-10


def test_demo_law_is_nonmonotone():
    demo = nsfv.nonmonotone_demo()
    assert nsfv.pressure_drho(demo, 0.1, 1.0) == pytest.approx(-0.0495)
    report = nsfv.validate_law(demo, 1)
    assert report["nonmonotone_witness"] is not None
    assert "concavity-P5" in report["failures"]


def test_validator_reports():
    assert nsfv.validate_law(nsfv.reference(), 2)["failures"] == []
    assert nsfv.validate_law(nsfv.constant_b2(), 2)["failures"] == ["growth-P6bis"]
    csv = nsfv.validate_law(nsfv.reference())["csv"]
    assert csv.splitlines()[0] == "check-id,status,witness_rho,witness_theta,margin,fitted_C"


def test_coefficients_round_trip():
    law = nsfv.reference()
    law.set_coefficient(2, "power(-0.1, 0.5)")
    assert law.coefficient(2) == nsfv.concave().coefficient(2)
    with pytest.raises(nsfv.ConfigError):
        law.set_coefficient(2, "cosh(1)")


def test_small_run():
    cfg = nsfv.load_config(str(CONFIGS / "small_data.ini"))
    cfg.n = 32
    res = nsfv.run(cfg)
    assert res["exit_code"] == 0
    series = res["series"]
    assert list(series)[0] == "time"
    assert series["time"][-1] == pytest.approx(0.05)
    mass = series["mass"]
    assert np.max(np.abs(mass - mass[0])) < 1e-12
    assert res["theta"].shape == (32,)
    assert res["energy_pass"] and res["entropy_pass"] and res["g_balance_pass"]


def test_config_errors():
    with pytest.raises(nsfv.ConfigError, match="line 2"):
        nsfv.parse_config("[law]\ngama = 5\n")


def test_snapshot_read(tmp_path):
    cfg = nsfv.load_config(str(CONFIGS / "uniform.ini"))
    cfg.out_dir = str(tmp_path)
    assert nsfv.run(cfg, write_artifacts=True)["exit_code"] == 0
    snap = nsfv.read_snapshot(str(tmp_path / "snap_00000.nsfv"))
    assert snap["n"] == 32
    assert np.allclose(snap["rho"], 1.0)
    assert snap["time"] == pytest.approx(0.02)
    with pytest.raises(nsfv.Error):
        nsfv.read_snapshot(str(tmp_path / "config.ini"))


def test_hydro_mms_order():
    law = nsfv.reference()
    law.mu = 0.01
    rows = nsfv.hydro_mms(law, [32, 64, 128], 0.1)
    assert math.isnan(rows[0][3])
    assert all(r[3] >= 0.9 for r in rows[1:])
