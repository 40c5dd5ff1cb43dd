import subprocess
import sys

import numpy as np
import pytest

from dipolar_rotors import __version__
from dipolar_rotors.cli import main
from dipolar_rotors.config import ConfigError
from dipolar_rotors.io import (
    OUT_ENV,
    PRESETS,
    ExperimentSpec,
    parse_config,
    read_matrix_csv,
    write_columns_csv,
    write_matrix_csv,
    write_svg_heatmap,
)
from dipolar_rotors.runner import EXIT_CONFIG, EXIT_INVARIANT, EXIT_IO, EXIT_OK, run


def test_empty_config_defaults(monkeypatch):
    monkeypatch.delenv(OUT_ENV, raising=False)
    spec = parse_config("")
    assert spec.mode == "quantum"
    assert spec.arrangements == ("A",) and spec.gammas == (0.0,)
    assert spec.kick_strength == 10.0 and spec.grid_size == 256
    assert spec.levels == 96  # enlarged from 64 so a strong-coupling kick is fully captured
    assert spec.windows == ((0.15, 5e-4),)
    assert spec.out == "out"


@pytest.mark.parametrize(
    "text,key",
    [
        ("gamma = -1", "gamma"),
        ("bogus = 3", "bogus"),
        ("grid_size = big", "grid_size"),
        ("levels = 1.5", "levels"),
        ("kick_strength = x", "kick_strength"),
        ("arrangement = C", "arrangement"),
        ("mode = plot", "mode"),
        ("dt = 0", "dt"),
        ("grid_size = 100", "grid_size"),
        ("svg = maybe", "svg"),
        ("preset = fig9", "preset"),
    ],
)
def test_config_errors_name_key(text, key):
    with pytest.raises(ConfigError) as err:
        parse_config(text)
    assert err.value.key == key
    assert key in str(err.value)


def test_malformed_line_reports_line_number():
    with pytest.raises(ConfigError, match="line 2"):
        parse_config("gamma = 1\nnonsense\n")


def test_comments_and_overrides():
    spec = parse_config("gamma = 3  # strong\n# note\narrangement = B\n", {"gamma": "5", "out": None})
    assert spec.gammas == (5.0,) and spec.arrangements == ("B",)


def test_t_max_dt_make_single_window():
    spec = parse_config("mode = classical\nt_max = 2\n")
    assert spec.windows == ((2.0, 1e-3),)


def test_fig5_preset_expansion():
    spec = parse_config("preset = fig5")
    assert spec.mode == "squeeze" and spec.n_pulses == 7 and spec.kick_strength == 10.0
    assert spec.gammas == (0.0, 1.0, 3.0, 5.0, 10.0, 30.0)
    assert spec.arrangements == ("A", "B")


def test_fig2_and_fig3_presets():
    a = parse_config("preset = fig2a")
    assert a.arrangements == ("A",) and a.gammas == (0.0, 1.0, 3.0, 30.0) and len(a.windows) == 2
    c = parse_config("preset = fig3")
    assert c.mode == "classical" and set(c.arrangements) == {"A", "B"} and c.gammas == (0.0, 15.0, 30.0, 45.0)


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_echo_round_trip(name):
    spec = parse_config(f"preset = {name}\nout = /tmp/x\n")
    again = parse_config(spec.echo())
    assert again == spec
    assert again.echo() == spec.echo()


def test_mode_aliases():
    assert parse_config("mode = quantum-trace").mode == "quantum"
    assert parse_config("mode = classical-trace").mode == "classical"


def test_env_var_sets_out(monkeypatch, tmp_path):
    monkeypatch.setenv(OUT_ENV, str(tmp_path))
    assert parse_config("").out == str(tmp_path)


def test_csv_header_and_roundtrip(tmp_path):
    m = np.arange(12.0).reshape(3, 4) / 7
    path = write_matrix_csv(tmp_path / "m.csv", m, {"gamma": 30.0})
    text = path.read_text().splitlines()
    assert text[0] == f"# dipolar_rotors {__version__}"
    header, back = read_matrix_csv(path)
    assert header["gamma"] == "30.0"
    np.testing.assert_array_equal(back, m)


def test_columns_csv(tmp_path):
    path = write_columns_csv(tmp_path / "c.csv", {"t": [0.0, 0.5], "O": [2.0, 1.25]})
    rows = [r for r in path.read_text().splitlines() if not r.startswith("#")]
    assert rows == ["t,O", "0.0,2.0", "0.5,1.25"]


def test_svg_downsampling(tmp_path):
    svg = write_svg_heatmap(tmp_path / "h.svg", np.random.default_rng(0).random((256, 256))).read_text()
    assert svg.count("<rect") == 128 * 128


def test_write_to_unwritable_location_is_io_error(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    spec = parse_config(f"out = {blocker}/sub\ngamma = 0\nt_max = 0.01\ndt = 1e-3")
    status, files = run(spec, echo=lambda s: None)
    assert status == EXIT_IO and files == []


def test_run_quantum_writes_trace_and_summary(tmp_path):
    lines = []
    spec = parse_config(f"out = {tmp_path}\ngamma = 30\nt_max = 0.15\ndt = 5e-4")
    status, files = run(spec, echo=lines.append)
    assert status == EXIT_OK
    assert [f.name for f in files] == ["quantum_A_g30_t0p15.csv"]
    assert "t_c=0.091" in lines[0] and "O_min=0.1558" in lines[0]


def test_run_reports_missing_focal_point(tmp_path):
    # a window that ends before the focal time has no interior minimum
    spec = parse_config(f"out = {tmp_path}\nt_max = 0.02\ndt = 1e-3")
    status, _ = run(spec, echo=lambda s: None)
    assert status == EXIT_INVARIANT


def test_cli_bytes_identical(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        assert main(["quantum", "--gamma", "3", "--t-max", "0.15", "--out", str(d)]) == EXIT_OK
    fa = sorted(p.name for p in a.iterdir())
    assert fa == sorted(p.name for p in b.iterdir()) and fa
    for name in fa:
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_cli_classical_and_density(tmp_path):
    assert main(["classical", "--gamma", "15", "--ensemble-size", "64", "--t-max", "3", "--out", str(tmp_path)]) == 0
    assert main(["density", "--gamma", "30", "--svg", "--out", str(tmp_path)]) == 0
    names = {p.name for p in tmp_path.iterdir()}
    assert {"classical_A_g15.csv", "density_A_g30_t0.csv", "density_A_g30_focal.csv", "density_A_g30_focal.svg"} <= names


def test_cli_squeeze(tmp_path):
    assert main(["squeeze", "--gamma", "30", "--n-pulses", "2", "--out", str(tmp_path)]) == 0
    assert (tmp_path / "squeeze_A_g30_n2_schedule.csv").exists()


def test_cli_config_error_exit_code(tmp_path, capsys):
    assert main(["quantum", "--gamma", "-1", "--out", str(tmp_path)]) == EXIT_CONFIG
    assert "gamma" in capsys.readouterr().err


def test_cli_config_file_and_missing_file(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("gamma = 1\nt_max = 0.15\n")
    assert main(["quantum", "--config", str(cfg), "--out", str(tmp_path)]) == EXIT_OK
    assert (tmp_path / "quantum_A_g1_t0p15.csv").exists()
    assert main(["quantum", "--config", str(tmp_path / "missing.cfg")]) == EXIT_IO


def test_cli_validate_subprocess():
    proc = subprocess.run([sys.executable, "-m", "dipolar_rotors.cli", "validate"], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stdout + proc.stderr
    assert proc.stdout.count("PASS") == 5 and "FAIL" not in proc.stdout


def test_help_documents_defaults(capsys):
    with pytest.raises(SystemExit):
        main(["quantum", "--help"])
    out = capsys.readouterr().out
    for word in ("--gamma", "default 0", "--kick-strength", "default 10", "--grid-size", "default 256"):
        assert word in out


def test_spec_is_frozen():
    with pytest.raises(Exception):
        ExperimentSpec().mode = "classical"
