import csv
import io
import json
import math

import jsonschema
import pytest

from mmthz import cli
from mmthz.config import load_schema

SCENARIO = """\
schema_version = 1

[scenario]
band = "mmwave"
freq_ghz = 28.0
bs_density_per_m2 = 1e-4
window_radius_m = 600.0

[scenario.los]
model = "uma"

[scenario.fading]
mu_los = 3.0
mu_nlos = 2.0

[scenario.tx_pattern]
model = "flattop"
gm_db = 20.0
gs_db = -10.0
theta_3db_rad = 0.17

[simulation]
trials = 1500
"""


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def ok_json(*argv, schema=None):
    code, out, err = run(*argv)
    assert code == 0, err
    doc = json.loads(out)
    if schema:
        jsonschema.validate(doc, load_schema(schema))
    return doc


def ok_csv(*argv):
    code, out, err = run(*argv)
    assert code == 0, err
    rows = list(csv.reader(io.StringIO(out)))
    return rows[0], rows[1:]


def error_of(*argv):
    code, out, err = run(*argv)
    doc = json.loads(err)
    jsonschema.validate(doc, load_schema("error"))
    assert doc["error"]["exit_code"] == code
    return code, doc["error"]


def test_bands_60_5():
    doc = ok_json("bands", "--freq", "60.5", schema="bands")
    assert [b["segments_ghz"] for b in doc["bands"]] == [[[57.0, 64.0]]]


def test_losprob_collapse():
    header, rows = ok_csv("losprob", "--model", "uma", "--d1", "18", "--d2", "63", "--dmax", "10")
    assert header == ["d", "p_los"]
    assert len(rows) == 11
    assert all(float(p) == 1.0 for _, p in rows)


def test_losprob_params_string():
    _, rows = ok_csv("losprob", "--model", "boolean", "--params", "mu=1e-3,mean_length=10,mean_width=5",
                     "--dmax", "100", "--step", "50")
    beta = 2 * 1e-3 * 15 / math.pi
    assert float(rows[2][1]) == pytest.approx(math.exp(-beta * 100), rel=1e-15)


def test_attenuate():
    doc = ok_json("attenuate", "--freq", "60", "--dist", "1000", "--rain", "50", schema="attenuate")
    assert doc["absorption_db"] == pytest.approx(15.0, abs=1e-12)
    assert doc["rain_db"] == pytest.approx(20.0, abs=1e-12)
    assert doc["total_db"] == pytest.approx(35.0, abs=1e-12)


def test_scatter():
    doc = ok_json("scatter", "--gamma-s", "0.8", "--hrms", "0.0002", "--alpha-r", "1", "--theta-i", "30",
                  "--theta-s", "30", "--ri", "5", "--rs", "5", "--freq", "300", schema="scatter")
    assert doc["F_alpha"] == pytest.approx(math.pi * (math.pi / 2 + 1), abs=1e-12)
    lin = 10 ** (doc["reflected_dB"] / 10) + 10 ** (doc["scattered_dB"] / 10)
    assert lin == pytest.approx(0.64, rel=1e-12)


def test_pattern_sweep():
    header, rows = ok_csv("pattern", "--model", "sinc", "--params", "n=8", "--sweep", "0:0.5:0.25")
    assert header == ["angle", "gain_dB"]
    assert [float(a) for a, _ in rows] == [0.0, 0.25, 0.5]
    assert float(rows[0][1]) == 0.0


def test_linkbudget_mmwave_warns_near_absorption_line():
    code, out, err = run("linkbudget", "--band", "mmwave", "--freq", "60", "--dist", "50", "--pt-dbm", "30")
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, load_schema("linkbudget"))
    assert doc["warnings"] and "warning" in err


def test_linkbudget_thz_sums_factors():
    doc = ok_json("linkbudget", "--band", "thz", "--freq", "300", "--dist", "10", "--pt-dbm", "20",
                  "--pattern-tx", "flattop:gm_db=25,gs_db=-5,theta_3db=0.05", schema="linkbudget")
    f = doc["factors_db"]
    total = 20 + f["spreading"] + f["absorption"] + f["tx_gain"] + f["rx_gain"] + f["fade"] + f["rain"]
    assert doc["pr_dbm"] == pytest.approx(total, abs=1e-9)
    assert doc["warnings"] == []


def test_simulate_byte_identical(tmp_path):
    cfg = tmp_path / "s.toml"
    cfg.write_text(SCENARIO)
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run("simulate", "--config", str(cfg), "--seed", "7", "--out", str(out1))[0] == 0
    assert run("simulate", "--config", str(cfg), "--seed", "7", "--workers", "2", "--out", str(out2))[0] == 0
    assert out1.read_bytes() == out2.read_bytes()
    assert out1.read_text().splitlines()[0] == "threshold_dB,coverage"


def test_simulate_json_summary(tmp_path):
    cfg = tmp_path / "s.toml"
    cfg.write_text(SCENARIO)
    doc = ok_json("simulate", "--config", str(cfg), "--seed", "3", "--format", "json", schema="simulate")
    assert doc["trials"] == 1500 and doc["seed"] == 3


def test_simulate_ci_requires_seed(tmp_path, monkeypatch):
    cfg = tmp_path / "s.toml"
    cfg.write_text(SCENARIO)
    monkeypatch.setenv("CI", "true")
    assert error_of("simulate", "--config", str(cfg))[0] == 1


@pytest.mark.parametrize("extra, where", [
    ("[scenario]\nbs_density_per_m2 = 1e-4\nfreq = 28\n", "freq"),
    ("[scenario]\nwindow_radius_m = 5.0\n", "bs_density_per_m2"),
])
def test_config_schema_errors(tmp_path, extra, where):
    cfg = tmp_path / "bad.toml"
    cfg.write_text("schema_version = 1\n" + extra)
    code, err = error_of("simulate", "--config", str(cfg), "--seed", "1")
    assert code == 2
    assert where in err["message"]


def test_exit_codes_are_distinct():
    assert error_of("nonsense")[0] == 1
    assert error_of("bands")[0] == 1
    assert error_of("bands", "--freq", "-3")[0] == 1
    assert error_of("attenuate", "--freq", "1000", "--dist", "5")[0] == 3
    assert error_of("attenuate", "--freq", "45", "--dist", "5", "--rain", "3")[0] == 3
    assert error_of("simulate", "--config", "/nonexistent/x.toml", "--seed", "1")[0] == 2


def test_table_dir_env(table_dir):
    (table_dir / "absorption.toml").write_text("version = 1\nanchors = [[50.0, 10.0], [70.0, 10.0]]\n")
    doc = ok_json("attenuate", "--freq", "60", "--dist", "500")
    assert doc["absorption_db"] == pytest.approx(5.0, abs=1e-12)


def test_format_mismatch():
    assert error_of("bands", "--freq", "60", "--format", "csv")[0] == 1
