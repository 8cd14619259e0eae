import subprocess
import sys

import pytest

from aerolink import SystemConfig, parse_config_text
from aerolink.cli import main
from aerolink.config import config_to_text
from aerolink.errors import ConfigurationError


def test_print_defaults_roundtrip(capsys):
    assert main(["print-defaults"]) == 0
    text = capsys.readouterr().out
    cfg = parse_config_text(text)
    assert cfg == SystemConfig()
    assert "fc_ghz = 2.0" in text
    assert "n_rbs = 10" in text
    assert "n_uavs = 8" in text
    assert "uav_altitude_m = 200.0" in text


def test_validate_good_config(tmp_path, capsys):
    path = tmp_path / "ok.conf"
    path.write_text(config_to_text(SystemConfig()))
    assert main(["validate-config", "--config", str(path)]) == 0


def test_validate_rejects_uav_overload(tmp_path, capsys):
    path = tmp_path / "bad.conf"
    path.write_text("n_uavs = 12\nn_rbs = 10\n")
    assert main(["validate-config", "--config", str(path)]) != 0
    err = capsys.readouterr().err
    assert "orthogonality" in err


def test_unknown_key_named_in_diagnostic(tmp_path, capsys):
    path = tmp_path / "bad.conf"
    path.write_text("fc_ghz = 2\nbogus_knob = 3\n")
    assert main(["validate-config", "--config", str(path)]) != 0
    assert "bogus_knob" in capsys.readouterr().err


def test_missing_config_file(capsys):
    assert main(["validate-config", "--config", "/nonexistent/path.conf"]) != 0
    assert "/nonexistent/path.conf" in capsys.readouterr().err


def test_unknown_flag_exits_nonzero():
    with pytest.raises(SystemExit) as exc:
        main(["simulate", "--confg", "x"])
    assert exc.value.code != 0


def test_simulate_end_to_end(tmp_path, capsys):
    conf = tmp_path / "run.conf"
    conf.write_text("n_ues = 4,8\nn_drops = 2\nmaster_seed = 5\nscheme = all\ndirection = both\n")
    out = tmp_path / "rates.csv"
    assert main(["simulate", "--config", str(conf), "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 1 + 5 * 2 * 2


def test_cli_overrides_file_values(tmp_path):
    conf = tmp_path / "run.conf"
    conf.write_text("n_ues = 4,8\nn_drops = 7\nmaster_seed = 5\nscheme = all\ndirection = both\n")
    out = tmp_path / "rates.csv"
    code = main([
        "simulate", "--config", str(conf), "--out", str(out),
        "--drops", "1", "--scheme", "2", "--direction", "ul", "--ues", "3", "--seed", "11",
    ])
    assert code == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 2
    row = lines[1].split(",")
    assert row[0] == "2" and row[1] == "uplink" and row[2] == "3" and row[3] == "1"


def test_config_comments_and_aliases():
    cfg = parse_config_text("# comment\nscheme = 1,3   # trailing\ndirection = dl\n")
    assert cfg.schemes == (1, 3)
    assert cfg.directions == ("downlink",)


def test_config_bad_value_messages():
    with pytest.raises(ConfigurationError, match="n_drops"):
        parse_config_text("n_drops = soon")
    with pytest.raises(ConfigurationError, match="direction"):
        parse_config_text("direction = sideways")
    with pytest.raises(ConfigurationError, match="line 1"):
        parse_config_text("just some words")


def test_console_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "aerolink.cli", "print-defaults"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert "master_seed" in proc.stdout
