"""Config parsing, CSV round-trips, and manifest schema validation."""

import numpy as np
import pytest

from thermobem import ConfigError, load_config, validate_manifest, write_csv
from thermobem.io_utils import (complex_header, complex_table, format_float,
                                load_manifest_schema)

GOOD = """
[problem]
kind = SD
side = exterior
seed = 0

[curve]
kind = circle
n = 64
radius = 1.0

[params]
rho = 1.0
lam = 1.0
mu = 1.0
kappa = 1.0
gamma = 1.0
eta = 1.0

[frequencies]
values = 2+3j, 1+0j

[data]
profile = trig
modes = 3

[observation]
points = 2.0 0.0; -1.8 -1.1
"""


def write_cfg(tmp_path, text, name="run.cfg"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_good_config_loads(tmp_path):
    cfg = load_config(write_cfg(tmp_path, GOOD))
    assert cfg.kind == "SD"
    assert not cfg.interior
    assert cfg.curve.n == 64
    assert cfg.frequencies == [2 + 3j, 1 + 0j]
    assert cfg.cq is None
    assert cfg.observation.shape == (2, 2)


def test_time_config_loads(tmp_path):
    text = GOOD.replace("[frequencies]\nvalues = 2+3j, 1+0j",
                        "[time]\ndt = 0.125\nn_steps = 32")
    cfg = load_config(write_cfg(tmp_path, text))
    assert cfg.frequencies is None
    assert cfg.cq.n_steps == 32


@pytest.mark.parametrize("mutation,field", [
    (("kind = SD", "kind = XX"), "problem.kind"),
    (("side = exterior", "side = above"), "problem.side"),
    (("n = 64", "n = sixty"), "curve.n"),
    (("rho = 1.0", "rho = -1.0"), "params"),
    (("values = 2+3j, 1+0j", "values = -1+0j"), "frequencies.values"),
    (("profile = trig", "profile = wavelet"), "data.profile"),
])
def test_field_level_errors(tmp_path, mutation, field):
    text = GOOD.replace(*mutation)
    with pytest.raises(ConfigError) as err:
        load_config(write_cfg(tmp_path, text))
    assert err.value.field == field


def test_missing_section_reported(tmp_path):
    text = GOOD.replace("[params]", "[paramsx]")
    with pytest.raises(ConfigError) as err:
        load_config(write_cfg(tmp_path, text))
    assert err.value.field == "params"


def test_frequency_time_exclusive(tmp_path):
    text = GOOD + "\n[time]\ndt = 0.1\nn_steps = 8\n"
    with pytest.raises(ConfigError):
        load_config(write_cfg(tmp_path, text))
    text = GOOD.replace("[frequencies]\nvalues = 2+3j, 1+0j", "")
    with pytest.raises(ConfigError):
        load_config(write_cfg(tmp_path, text))


def test_point_source_requires_location(tmp_path):
    text = GOOD.replace("profile = trig\nmodes = 3",
                        "profile = point_source")
    with pytest.raises(ConfigError) as err:
        load_config(write_cfg(tmp_path, text))
    assert err.value.field.startswith("data.")


def test_format_float_round_trips():
    rng = np.random.default_rng(0)
    for x in rng.normal(scale=1e3, size=200):
        assert float(format_float(x)) == x
    assert format_float(1.0) == "1"


def test_write_csv_round_trip(tmp_path):
    rng = np.random.default_rng(1)
    rows = rng.normal(size=(17, 4))
    path = tmp_path / "t.csv"
    write_csv(str(path), ["a", "b", "c", "d"], rows)
    text = path.read_text().splitlines()
    assert text[0] == "a,b,c,d"
    back = np.loadtxt(str(path), delimiter=",", skiprows=1)
    assert np.array_equal(back, rows)


def test_write_csv_header_mismatch(tmp_path):
    with pytest.raises(ValueError):
        write_csv(str(tmp_path / "t.csv"), ["a"], np.zeros((2, 3)))


def test_complex_table_layout():
    v = np.array([[1 + 2j, 3 - 4j]])
    assert np.array_equal(complex_table(v), [[1.0, 2.0, 3.0, -4.0]])
    assert complex_header(["u"]) == ["re_u", "im_u"]


def _minimal_manifest():
    return {"command": "solve-laplace", "kind": "SD", "side": "exterior",
            "curve": {"kind": "circle", "params": {}, "n": 64},
            "params": {"rho": 1.0, "lam": 1.0, "mu": 1.0, "kappa": 1.0,
                       "gamma": 1.0, "eta": 1.0},
            "seed": 0,
            "runs": [{"s": [2.0, 3.0], "n": 64, "residual": 1e-14,
                      "condition_estimate": 1e4, "wall_time_s": 0.1,
                      "density_csv": "d.csv", "field_csv": "f.csv"}]}


def test_manifest_schema_accepts_valid():
    validate_manifest(_minimal_manifest())


@pytest.mark.parametrize("mutate", [
    lambda m: m.pop("params"),
    lambda m: m.update(command="simulate"),
    lambda m: m["runs"][0].pop("residual"),
    lambda m: m["params"].update(rho="one"),
])
def test_manifest_schema_rejects_invalid(mutate):
    m = _minimal_manifest()
    mutate(m)
    with pytest.raises(ConfigError):
        validate_manifest(m)


def test_schema_file_well_formed():
    schema = load_manifest_schema()
    assert schema["type"] == "object"
    assert "command" in schema["properties"]
