import os
import xml.etree.ElementTree as ET

import pytest

from sparsespectra.cli import main
from sparsespectra.esd import ESD
from sparsespectra.reports import write_eigenvalues_csv


def run_cli(*argv):
    return main(list(argv))


def test_list_enumerates_experiments(capsys):
    assert run_cli("list") == 0
    out = capsys.readouterr().out.strip().splitlines()
    assert len(out) == 10
    assert any(line.startswith("circular-law") for line in out)


def test_run_missing_config_exits_2(capsys):
    assert run_cli("run", "missing.cfg") == 2
    assert "cannot read config" in capsys.readouterr().err


def test_run_bad_config_exits_2(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("n_values=100\nalpha=0\n")
    assert run_cli("run", str(cfg)) == 2
    assert "line 2" in capsys.readouterr().err


def test_run_unknown_key_exits_2(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("n_values=100\nwat=1\n")
    assert run_cli("run", str(cfg)) == 2


def test_run_writes_report_and_csvs(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        "experiment = circular-law\nn_values = 20,30\ntrials = 2\nmaster_seed = 11\n"
    )
    out = tmp_path / "out"
    assert run_cli("run", str(cfg), "-o", str(out)) == 0
    assert (out / "report.txt").exists()
    csvs = sorted(p.name for p in out.glob("*.csv"))
    assert csvs == [
        "esd_n20_t0.csv",
        "esd_n20_t1.csv",
        "esd_n30_t0.csv",
        "esd_n30_t1.csv",
    ]
    stdout = capsys.readouterr().out
    assert "flag exception-rate: pass" in stdout


def test_run_is_reproducible_and_seed_overrides(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        "experiment = distance-concentration\nn_values = 60\ntrials = 10\n"
        "master_seed = 11\n"
    )
    out1, out2, out3 = (tmp_path / d for d in ("o1", "o2", "o3"))
    assert run_cli("run", str(cfg), "-o", str(out1)) == 0
    assert run_cli("run", str(cfg), "-o", str(out2)) == 0
    assert run_cli("run", str(cfg), "-o", str(out3), "--seed", "12") == 0
    r1 = (out1 / "report.txt").read_bytes()
    r2 = (out2 / "report.txt").read_bytes()
    r3 = (out3 / "report.txt").read_bytes()
    assert r1 == r2
    assert r1 != r3


def test_run_exits_1_when_exception_rate_exceeded(tmp_path, capsys):
    # alpha near 0 at small n: most sparse draws are exactly singular,
    # so the -inf log-det policy trips the exceptional-trial limit.
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        "experiment = logdet-convergence\nn_values = 40\nalpha = 0.05\n"
        "trials = 6\nmaster_seed = 3\n"
    )
    assert run_cli("run", str(cfg), "-o", str(tmp_path / "out")) == 1
    assert "exceptional-trial rate" in capsys.readouterr().err
    assert (tmp_path / "out" / "report.txt").exists()


def test_run_out_dir_from_config(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        "experiment = distance-concentration\nn_values = 50\ntrials = 2\n"
        "[output]\nout_dir = results/demo\nwrite_esd_csv = false\n"
    )
    assert run_cli("run", str(cfg)) == 0
    assert (tmp_path / "results" / "demo" / "report.txt").exists()


def test_figure_renders_svg(tmp_path):
    csv_path = tmp_path / "esd.csv"
    write_eigenvalues_csv(ESD.from_points([0.5 + 0.5j, -0.25j]), csv_path)
    spec = tmp_path / "fig.cfg"
    svg_path = tmp_path / "fig.svg"
    spec.write_text(f"source = {csv_path}\noutput = {svg_path}\ntitle = demo\n")
    assert run_cli("figure", str(spec)) == 0
    first = svg_path.read_bytes()
    root = ET.fromstring(first.decode())
    assert root.get("version") == "1.1"
    assert run_cli("figure", str(spec)) == 0
    assert svg_path.read_bytes() == first


def test_figure_stdout_when_no_output(tmp_path, capsys):
    csv_path = tmp_path / "esd.csv"
    write_eigenvalues_csv(ESD.from_points([0.0]), csv_path)
    spec = tmp_path / "fig.cfg"
    spec.write_text(f"source = {csv_path}\n")
    assert run_cli("figure", str(spec)) == 0
    assert "<svg" in capsys.readouterr().out


def test_figure_missing_spec_exits_2(capsys):
    assert run_cli("figure", "nope.cfg") == 2


def test_figure_bad_spec_exits_2(tmp_path):
    spec = tmp_path / "fig.cfg"
    spec.write_text("output = x.svg\n")
    assert run_cli("figure", str(spec)) == 2


def test_verify_single_criterion(capsys):
    assert run_cli("verify", "--only", "1") == 0
    out = capsys.readouterr().out
    assert "PASS criterion-1" in out
    assert "1/1 criteria passed" in out


def test_verify_rejects_unknown_criteria(capsys):
    assert run_cli("verify", "--only", "99") == 2
    assert run_cli("verify", "--only", "abc") == 2


def test_verify_exit_1_when_a_criterion_fails(monkeypatch, capsys):
    from sparsespectra import acceptance

    monkeypatch.setitem(
        acceptance._CRITERIA, 1, ("forced-failure", lambda: (False, "forced"), 10.0)
    )
    assert run_cli("verify", "--only", "1") == 1
    out = capsys.readouterr().out
    assert "FAIL criterion-1" in out
