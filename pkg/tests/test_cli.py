import csv
import io
import json
import subprocess
import sys

import pytest

from extremal import __version__
from extremal.cli import ExperimentConfig, load_config, render_int, run


def _csv_rows(text):
    body = [line for line in text.splitlines() if not line.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(body))))


def _run(tmp_path, *argv, name="out"):
    path = tmp_path / name
    code = run([*argv, "-o", str(path)])
    return code, path.read_text() if path.exists() else ""


def test_generate_row_k4(tmp_path):
    code, text = _run(tmp_path, "generate", "--a", "1", "--b", "2", "--k-max", "10")
    assert code == 0
    rows = {int(r["k"]): r for r in _csv_rows(text)}
    assert rows[4]["Y"] == "576"
    assert rows[4]["det"] == "-1" and abs(int(rows[4]["d"])) == 1
    assert sorted(rows) == list(range(1, 11))


def test_header_block(tmp_path):
    _, text = _run(tmp_path, "generate", "--k-max", "5")
    lines = text.splitlines()
    assert lines[0] == f"# extremal {__version__}"
    assert lines[1] == "# command: generate"
    config = json.loads(lines[2].removeprefix("# config: "))
    assert config["k_max"] == 5 and config["a"] == 1


def test_commuting_seed_exit_code(tmp_path, capsys):
    code, _ = _run(tmp_path, "generate", "--a", "1", "--b", "1")
    assert code == 2
    assert "Commuting" in capsys.readouterr().err


def test_validation_exit_code(tmp_path, capsys):
    assert _run(tmp_path, "generate", "--k-max", "0")[0] == 2
    assert "k_max" in capsys.readouterr().err


def test_precision_exit_code(tmp_path, capsys):
    code, _ = _run(tmp_path, "minimal", "--eps", "1e-300", "--refinement-cap", "6")
    assert code == 3
    assert "PrecisionExhausted" in capsys.readouterr().err


def test_io_exit_code(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert run(["generate", "-o", str(blocker / "out.csv")]) == 4


def test_json_output(tmp_path):
    code, text = _run(tmp_path, "generate", "--k-max", "6", "--format", "json")
    assert code == 0
    rows = json.loads(text)
    assert isinstance(rows, list) and rows[3]["k"] == 4 and rows[3]["Y"] == "576"
    assert isinstance(rows[3]["q_lower"], float)


def test_output_dir_env(tmp_path, monkeypatch):
    monkeypatch.setenv("EXTREMAL_OUTPUT_DIR", str(tmp_path / "reports"))
    assert run(["generate", "--k-max", "5"]) == 0
    assert (tmp_path / "reports" / "generate.csv").exists()


def test_config_file_and_overrides(tmp_path):
    cfg = tmp_path / "c.yaml"
    cfg.write_text("seed: {a: 2, b: 1}\nk_max: 7\nformat: json\n")
    loaded = load_config(str(cfg), {"k_max": 5})
    assert (loaded.a, loaded.b, loaded.k_max, loaded.format) == (2, 1, 5, "json")
    bad = tmp_path / "bad.yaml"
    bad.write_text("k_max: 7\ncolour: blue\n")
    with pytest.raises(ValueError):
        load_config(str(bad), {})
    assert run(["generate", "--config", str(bad), "-o", str(tmp_path / "x")]) == 2


def test_matrix_seed_config(tmp_path):
    cfg = tmp_path / "m.yaml"
    cfg.write_text("A: [[1, 1], [1, 0]]\nB: [[3, 1], [1, 0]]\na: null\nb: null\nk_max: 6\n")
    code, text = _run(tmp_path, "generate", "--config", str(cfg))
    assert code == 0
    assert {abs(int(r["d"])) for r in _csv_rows(text)} == {2}


def test_experiment_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(format="xml").validate()
    with pytest.raises(ValueError):
        ExperimentConfig(A=[[1, 1], [1, 0]]).validate()


def test_render_int():
    assert render_int(576) == "576"
    assert render_int(-12) == "-12"
    assert render_int(10 ** 40 + 7) == "1.000000000e+40"
    assert render_int(123456789 * 10 ** 50) == "1.234567890e+58"
    assert render_int(-(10 ** 35 - 1)) == "-9.999999999e+34"
    assert render_int(3 ** 400).startswith("7.05507910")


def test_minimal_command_flags_sequence_points(tmp_path):
    code, text = _run(tmp_path, "minimal", "--x-max", "100000")
    assert code == 0
    rows = _csv_rows(text)
    flagged = {(r["x0"], r["x1"], r["x2"]) for r in rows if r["independent_flag"] == "1"}
    assert {("4", "3", "2"), ("25", "18", "13"), ("576", "415", "299")} <= flagged


def test_quadratic_command_seed_2_1(tmp_path):
    code, text = _run(tmp_path, "quadratic", "--a", "2", "--b", "1", "--k-max", "15")
    assert code == 0
    rows = _csv_rows(text)
    last = rows[-1]
    assert abs(float(last["exponent_lower"]) - 5.236) < 0.05


def test_module_entry_point(tmp_path):
    out = subprocess.run([sys.executable, "-m", "extremal", "generate", "--k-max", "4", "-o", "-"],
                         capture_output=True, text=True, check=True)
    assert "576" in out.stdout
