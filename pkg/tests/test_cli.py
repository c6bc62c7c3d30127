"""Command line driver: CSV schemas, configs, seeds and exit codes."""

import os
import subprocess
import sys
from fractions import Fraction

import pytest

from liegen import cli, estimate, matgrp
from liegen.errors import InvalidConfig
from liegen.rng import derive_seed


def run_cli(args):
    return cli.main(list(args))


def test_csv_round_trip_main_schema():
    rows = [
        cli.Row("SL2", 9, "mc", "", "", "ALL", "ALL", 1000, 700, 100, 50,
                100, 50, 0.7, 0.6712, 0.7281, 42),
        cli.Row("PSL2", 7, "exact", "2", "3", "ALL", "ALL", 1176, 336, 0,
                0, 840, 0, float(Fraction(2, 7)), None, None, None),
    ]
    text = cli.emit_csv(rows)
    assert text.splitlines()[0] == cli.CSV_HEADER
    back = cli.parse_csv(text)
    assert back == rows
    assert cli.emit_csv(back) == text


def test_csv_round_trip_decay_schema():
    rows = [cli.DecayCSVRow(2, 2, 4, "ABab", 3600, 17 / 30,
                            17 / 30 * 2.0)]
    text = cli.emit_csv(rows)
    assert text.splitlines()[0] == cli.DECAY_HEADER
    assert cli.parse_csv(text) == rows
    with pytest.raises(InvalidConfig):
        cli.parse_csv("nonsense,header\n1,2\n")


def test_config_round_trip():
    cfg = cli.default_config()
    text = cli.serialize_config(cfg)
    assert cli.parse_config(text) == cfg
    assert cli.serialize_config(cli.parse_config(text)) == text
    with pytest.raises(InvalidConfig):
        cli.parse_config("no_such_key=1\n")
    with pytest.raises(InvalidConfig):
        cli.parse_config("exact=maybe\n")
    # comments and blank lines are fine
    assert cli.parse_config("# note\n\ntrials=7\n").trials == 7


def test_exact_command_row(tmp_path):
    out = tmp_path / "exact.csv"
    assert run_cli(["exact", "--family", "SL2", "--q", "5",
                    "--out", str(out)]) == 0
    row, = cli.parse_csv(out.read_text())
    assert (row.family, row.q, row.mode) == ("SL2", 5, "exact")
    assert (row.trials, row.generates) == (14400, 9120)
    assert row.proper_other == 14400 - 9120
    assert row.point == float(Fraction(19, 30))
    assert row.lo95 is None and row.hi95 is None and row.seed is None


def test_exact_command_single_cell(tmp_path):
    out = tmp_path / "cell.csv"
    assert run_cli(["exact", "--family", "SL2", "--q", "5", "--class-c",
                    "4a", "--class-d", "3a", "--out", str(out)]) == 0
    row, = cli.parse_csv(out.read_text())
    assert (row.class_c, row.class_d) == ("4a", "3a")
    assert (row.trials, row.generates) == (600, 240)


def test_estimate_command_and_seeding(tmp_path, monkeypatch):
    out = tmp_path / "est.csv"
    monkeypatch.setenv("LIEGEN_SEED", "7")
    assert run_cli(["estimate", "--family", "SL2", "--q", "9",
                    "--trials", "500", "--out", str(out)]) == 0
    row, = cli.parse_csv(out.read_text())
    assert row.seed == 7                       # env variable is picked up
    assert run_cli(["estimate", "--family", "SL2", "--q", "9",
                    "--trials", "500", "--seed", "3",
                    "--out", str(out)]) == 0
    row, = cli.parse_csv(out.read_text())
    assert row.seed == 3                       # explicit flag wins
    assert row.trials == 500
    assert sum((row.generates, row.proper_reducible, row.proper_subfield,
                row.proper_other, row.inconclusive)) == 500


def test_rerun_is_byte_identical(tmp_path):
    args = ["liegen", "estimate", "--family", "SL2", "--q", "9",
            "--trials", "400", "--seed", "11", "--out", "-"]
    first = subprocess.run(args, capture_output=True, text=True)
    second = subprocess.run(args, capture_output=True, text=True)
    assert first.returncode == 0
    assert first.stdout == second.stdout
    assert first.stdout.splitlines()[0] == cli.CSV_HEADER
    mod = subprocess.run(
        [sys.executable, "-m", "liegen"] + args[1:],
        capture_output=True, text=True)
    assert mod.stdout == first.stdout


def test_save_and_reuse_config(tmp_path):
    saved = tmp_path / "run.cfg"
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    assert run_cli(["estimate", "--family", "SL2", "--q", "9", "--trials",
                    "300", "--seed", "5", "--save-config", str(saved),
                    "--out", str(out1)]) == 0
    cfg = cli.parse_config(saved.read_text())
    assert cfg.trials == 300 and cfg.q == "9" and cfg.seed == "5"
    assert run_cli(["estimate", "--config", str(saved),
                    "--out", str(out2)]) == 0
    assert out1.read_text() == out2.read_text()
    # explicit flags override values taken from the file
    out3 = tmp_path / "c.csv"
    assert run_cli(["estimate", "--config", str(saved), "--trials", "200",
                    "--out", str(out3)]) == 0
    assert cli.parse_csv(out3.read_text())[0].trials == 200


def test_sweep_rows_and_sub_seeds(tmp_path):
    out = tmp_path / "sweep.csv"
    assert run_cli(["sweep", "--family", "SL2", "--q", "5,9", "--trials",
                    "400", "--seed", "1", "--out", str(out)]) == 0
    rows = cli.parse_csv(out.read_text())
    assert [r.q for r in rows] == [5, 9]
    assert rows[0].seed == derive_seed(1, "SL2", 5)
    assert rows[1].seed == derive_seed(1, "SL2", 9)
    assert all(r.mode == "mc" for r in rows)


def test_sweep_exact_mode(tmp_path):
    out = tmp_path / "sweepx.csv"
    assert run_cli(["sweep", "--family", "PSL2", "--q", "5,7", "--r", "2",
                    "--s", "3", "--exact", "--out", str(out)]) == 0
    rows = cli.parse_csv(out.read_text())
    assert [r.mode for r in rows] == ["exact", "exact"]
    assert rows[0].generates * 5 == rows[0].trials * 2     # 2/5
    assert rows[1].generates * 7 == rows[1].trials * 2     # 2/7


def test_trace_field_command(capsys):
    assert run_cli(["trace-field", "--family", "SL2", "--q", "9",
                    "--rep", "0 2 ; 1 0,1", "--rep", "1 0 ; 0 1"]) == 0
    assert capsys.readouterr().out.strip() == "2"
    assert run_cli(["trace-field", "--family", "SL2", "--q", "9",
                    "--rep", "1 1 ; 0 1", "--rep", "1 0 ; 1 1"]) == 0
    assert capsys.readouterr().out.strip() == "1"


def test_scott_check_command(capsys):
    assert run_cli(["scott-check", "--group", "E7", "--dims", "70,70",
                    "--delta", "1"]) == 0
    assert capsys.readouterr().out.strip() == "true"
    assert run_cli(["scott-check", "--group", "G2", "--dims", "6,6"]) == 0
    assert capsys.readouterr().out.strip() == "false"
    assert run_cli(["scott-check", "--group", "G2", "--dims", "8,8"]) == 0
    assert capsys.readouterr().out.strip() == "true"


def test_decay_command(tmp_path):
    out = tmp_path / "decay.csv"
    assert run_cli(["decay", "--p", "2", "--a", "2", "--exact",
                    "--out", str(out)]) == 0
    row, = cli.parse_csv(out.read_text())
    assert (row.p, row.a, row.q, row.word) == (2, 2, 4, "ABab")
    assert row.trials == 3600
    assert row.fraction == 17 / 30
    assert row.scaled == 17 / 30 * 2.0
    multi = tmp_path / "multi.csv"
    assert run_cli(["decay", "--p", "2", "--a", "2,4", "--trials", "2000",
                    "--seed", "9", "--out", str(multi)]) == 0
    rows = cli.parse_csv(multi.read_text())
    assert [r.a for r in rows] == [2, 4]
    assert rows[0].fraction > rows[1].fraction


def test_audit_command(capsys):
    assert run_cli(["audit-table1"]) == 1
    out = capsys.readouterr().out
    lines = out.strip().splitlines()
    assert lines[0] == cli.AUDIT_HEADER
    assert len(lines) == 21
    bad = [ln for ln in lines if ln.endswith(",false")]
    assert len(bad) == 2
    assert any(ln.startswith("E7,p!=3,") and ",70,90," in ln for ln in bad)
    assert any(ln.startswith("F4,p!=3,") and ",34,36," in ln for ln in bad)
    assert sum(ln.endswith(",skip") for ln in lines) == 10


def test_exit_codes(tmp_path):
    # enumeration above the cap
    assert run_cli(["exact", "--family", "SL2", "--q", "25",
                    "--cap", "100", "--out", str(tmp_path / "x.csv")]) == 2
    # a field too large to construct
    assert run_cli(["exact", "--family", "SL2",
                    "--q", str(2 ** 61), "--out", "-"]) == 2
    # bad family
    assert run_cli(["exact", "--family", "SL9", "--q", "5",
                    "--out", "-"]) == 3
    # q that is not a prime power
    assert run_cli(["exact", "--family", "SL2", "--q", "6",
                    "--out", "-"]) == 3
    # usage errors also exit 3, not argparse's stock 2
    with pytest.raises(SystemExit) as ei:
        cli.main(["exact", "--no-such-flag"])
    assert ei.value.code == 3
    proc = subprocess.run(["liegen", "bogus-command"], capture_output=True)
    assert proc.returncode == 3


def test_zero_trials_writes_nothing(tmp_path):
    out = tmp_path / "never.csv"
    assert run_cli(["estimate", "--family", "SL2", "--q", "9", "--trials",
                    "0", "--out", str(out)]) == 3
    assert not out.exists()


def test_plot_scripts(tmp_path):
    csv = tmp_path / "sweep.csv"
    gp = tmp_path / "sweep.gp"
    assert run_cli(["sweep", "--family", "SL2", "--q", "5,9", "--trials",
                    "200", "--seed", "2", "--out", str(csv),
                    "--plot", str(gp)]) == 0
    script = gp.read_text()
    assert str(csv) in script
    assert "using 2:14:15:16" in script and "yerrorbars" in script
    dgp = tmp_path / "decay.gp"
    dcsv = tmp_path / "decay.csv"
    assert run_cli(["decay", "--p", "2", "--a", "2,4", "--trials", "500",
                    "--seed", "3", "--out", str(dcsv),
                    "--plot", str(dgp)]) == 0
    dscript = dgp.read_text()
    assert "logscale y" in dscript and "using 2:6" in dscript
    # plotting from stdout output has no file to point at
    assert run_cli(["decay", "--p", "2", "--a", "2", "--trials", "100",
                    "--plot", str(tmp_path / "no.gp")]) == 3
