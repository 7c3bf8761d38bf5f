import json
import subprocess
import sys

import pytest

from epsverify.cli.config import load_config
from epsverify.cli.main import EXIT_ERROR, main, parse_u_range
from epsverify.cli.report import REPORT_KEYS

VERIFY = ["verify", "--p", "3", "--m", "1", "--d", "2", "--u", "2", "--precision", "16"]


def run_json(capsys, *extra):
    code = main([*VERIFY, "--json", "-", *extra])
    return code, capsys.readouterr().out


def test_json_report_has_stable_keys(capsys):
    code, out = run_json(capsys)
    report = json.loads(out)
    assert code == 0
    assert tuple(report) == REPORT_KEYS
    assert set(report["unit_check"]) >= {"forward_integral", "inverse_integral"}
    row = report["characters"][0]
    assert {"chi", "phi", "euler_valuation", "ucris", "theta_epsilon", "rtilde_valuation"} <= set(row)
    assert report["verdict"] == "CONJECTURE_VERIFIED_AT_PARAMS"
    assert report["omega"] == 1 and report["branch"] == "omega_pos"
    assert isinstance(report["runtime_ms"], int)


def test_json_is_byte_identical_without_timing(capsys):
    _, first = run_json(capsys, "--omit-timing")
    _, second = run_json(capsys, "--omit-timing")
    assert first == second
    assert json.loads(first)["runtime_ms"] is None


def test_text_report_is_delimited(capsys):
    assert main(VERIFY) == 0
    out = capsys.readouterr().out
    lines = out.splitlines()
    assert lines[0].startswith("=== verify")
    assert lines[-1] == "=== verdict: CONJECTURE_VERIFIED_AT_PARAMS ==="
    header = lines.index("chi\tphi\teuler_v\tucris_v\ttheta_eps_v\trtilde_v\trtildetilde_v")
    assert len(lines[header + 1].split("\t")) == 7


def test_json_file_written(tmp_path, capsys):
    path = tmp_path / "report.json"
    assert main([*VERIFY, "--json", str(path)]) == 0
    assert json.loads(path.read_text())["params"]["p"] == 3


def test_gcd_rejected(capsys):
    code = main(["verify", "--p", "3", "--m", "2", "--d", "2", "--u", "2"])
    assert code == EXIT_ERROR
    assert "relatively prime" in capsys.readouterr().err


def test_missing_parameter(capsys):
    assert main(["verify", "--p", "3", "--m", "1", "--d", "2"]) == EXIT_ERROR
    assert "--u" in capsys.readouterr().err


def test_twist_trivial_reported_as_error(capsys):
    assert main(["verify", "--p", "3", "--m", "2", "--d", "5", "--u", "teich:2"]) == EXIT_ERROR
    assert "TwistTrivialOnN" in capsys.readouterr().err


def test_config_file_and_flag_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# parameters\np = 3\nm = 1\nd = 2\nu = 2\nprecision = 12\ntower-degree = 4\nomit_timing = yes\n")
    assert load_config(cfg)["tower_degree"] == "4"
    assert main(["verify", "--config", str(cfg), "--precision", "14", "--json", "-"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["params"]["precision"] == 14
    assert report["params"]["tower_degree"] == 4
    assert report["runtime_ms"] is None


def test_config_with_section_header(tmp_path):
    cfg = tmp_path / "run.ini"
    cfg.write_text("[run]\np = 5\n")
    assert load_config(cfg) == {"p": "5"}


def test_unknown_config_key(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("p = 3\nbogus = 1\n")
    assert main(["verify", "--config", str(cfg)]) == EXIT_ERROR
    assert "bogus" in capsys.readouterr().err


def test_suite_formal(capsys):
    assert main(["suite", "formal"]) == 0
    out = capsys.readouterr().out
    assert "associativity (p=3, D=8)" in out
    assert "0 failed" in out


@pytest.mark.parametrize(
    "text,expected",
    [(None, ["teich:2", "teich:3", "teich:4"]), ("2-7", ["2", "3", "4", "6", "7"]), ("2, teich:3", ["2", "teich:3"])],
)
def test_parse_u_range(text, expected):
    assert parse_u_range(text, 5) == expected


def test_sweep_covers_branches(capsys):
    assert main(["sweep", "--p", "3", "--m", "1", "--d", "2", "--u-range", "2,4,5", "--precision", "12"]) == 0
    out = capsys.readouterr().out
    assert "omega_pos" in out
    assert "SKIPPED_TWIST_TRIVIAL" not in out


def test_sweep_skips_twist_trivial(capsys):
    assert main(["sweep", "--p", "5", "--m", "1", "--d", "2", "--precision", "12"]) == 0
    out = capsys.readouterr().out
    assert "teich:4\ttwist_trivial\t-\tSKIPPED_TWIST_TRIVIAL" in out


def test_sweep_with_worker_pool(capsys):
    assert main(["sweep", "--p", "5", "--m", "1", "--d", "2", "--precision", "12", "--jobs", "2"]) == 0


def test_figures(tmp_path, capsys):
    pytest.importorskip("matplotlib")
    assert main([*VERIFY, "--figures", str(tmp_path)]) == 0
    pngs = sorted(p.name for p in tmp_path.glob("*.png"))
    assert pngs == ["p3_m1_d2_u2_unit_grid.png", "p3_m1_d2_u2_valuations.png"]
    assert all((tmp_path / n).stat().st_size > 1000 for n in pngs)


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "epsverify", "suite", "gauss"], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout.startswith("=== suite gauss")
