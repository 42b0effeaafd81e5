import json
from pathlib import Path

import pytest

from euler_lab.cli import main
from euler_lab.config import config_from_dict, load_config


def _write(tmp_path, text, name="cfg.toml"):
    path = tmp_path / name
    path.write_text(text)
    return path


BASE = """
scenario = "linf-inflation"
n0 = 1
m = 2
resolution = 8
n_theta = 16
dt = 2.0
t_end = 8.0
cadence = 2
c1 = 1e6
output_dir = "{out}"
"""


def test_load_config_defaults(tmp_path):
    cfg = load_config(_write(tmp_path, BASE.format(out=tmp_path / "o")))
    assert cfg.scenario == "linf-inflation"
    assert cfg.bubble.alpha == 0.2        # scenario-dependent default
    assert cfg.kernel.n_theta == 16
    assert cfg.kernel.delta_scale == 0.5
    assert cfg.seed == 0


def test_sobolev_alpha_default():
    cfg = config_from_dict({"scenario": "sobolev-inflation"})
    assert cfg.bubble.alpha == 0.6


def test_unknown_key_rejected():
    with pytest.raises(ValueError):
        config_from_dict({"scenario": "key-lemma", "bogus": 1})


def test_unknown_scenario_rejected():
    with pytest.raises(ValueError):
        config_from_dict({"scenario": "nope"})


def test_cli_missing_file(capsys):
    assert main(["key-lemma", "--config", "/does/not/exist.toml"]) == 2


def test_cli_scenario_mismatch(tmp_path):
    path = _write(tmp_path, BASE.format(out=tmp_path / "o"))
    assert main(["key-lemma", "--config", str(path)]) == 2


def test_cli_linf_run_outputs(tmp_path, capsys):
    out = tmp_path / "run"
    path = _write(tmp_path, BASE.format(out=out))
    assert main(["linf-inflation", "--config", str(path)]) == 0
    frames = (out / "frames.csv").read_text().splitlines()
    header = frames[0].split(",")
    assert header[0] == "time"
    assert "In_1" in header and "r_sup_2" in header
    assert header[-2:] == ["ordering_ok", "region_ok"]
    # 17 significant digits, scientific notation, booleans as 0/1
    first = frames[1].split(",")
    assert first[0] == "0.0000000000000000e+00"
    assert first[-1] in ("0", "1")
    summary = json.loads((out / "summary.json").read_text())
    assert summary["version"]
    assert summary["config"]["scenario"] == "linf-inflation"
    assert "wall_seconds" in summary["timings"]


def test_cli_output_override(tmp_path):
    out = tmp_path / "elsewhere"
    path = _write(tmp_path, BASE.format(out=tmp_path / "ignored"))
    assert main(["linf-inflation", "--config", str(path),
                 "--output", str(out)]) == 0
    assert (out / "frames.csv").exists()
