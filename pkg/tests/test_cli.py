import csv
import subprocess
import sys
from pathlib import Path

import pytest

from definetti_sim.cli import EXIT_OK, EXIT_RUNTIME, EXIT_USAGE, SEED_ENV, main
from definetti_sim.presets import PRESETS
from definetti_sim.scenario import known_keys, parse_scenario, schema_text

BAD_SCENARIO = 'name = "broken"\nhorizon = 10\nseed = [1, 2\n'


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_run_is_byte_identical_across_invocations(tmp_path):
    for d in ("a", "b"):
        assert main(["run", "--preset", "everlasting-growth", "--seed", "42", "--out", str(tmp_path / d)]) == EXIT_OK
    for name in ("run.csv", "report.txt", "run.png"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_run_csv_columns_and_rows(tmp_path):
    assert main(["run", "--preset", "reference", "--out", str(tmp_path), "--format", "csv"]) == EXIT_OK
    rows = read_csv(tmp_path / "run.csv")
    assert list(rows[0]) == ["step", "region", "mutations", "productivity", "avg_profit_rate", "population"]
    assert len(rows) == 30
    assert not (tmp_path / "report.txt").exists()
    assert b"\r\n" not in (tmp_path / "run.csv").read_bytes()


def test_run_both_sources_is_usage_error(tmp_path, capsys):
    path = tmp_path / "s.scn"
    path.write_text("x = 1\n")
    assert main(["run", "--scenario", str(path), "--preset", "reference"]) == EXIT_USAGE


def test_run_requires_a_source():
    assert main(["run"]) == EXIT_USAGE


def test_ancien_regime_summary_shows_zero_mutations(tmp_path, capsys):
    assert main(["run", "--preset", "ancien-regime", "--seed", "1", "--out", str(tmp_path)]) == EXIT_OK
    assert "total_mutations=0 " in capsys.readouterr().out


def test_parse_error_reports_line_and_column(tmp_path, capsys):
    path = tmp_path / "bad.scn"
    path.write_text(BAD_SCENARIO)
    assert main(["run", "--scenario", str(path), "--out", str(tmp_path)]) == EXIT_USAGE
    assert "line 3, column 13" in capsys.readouterr().err


def test_schema_error_names_path(tmp_path, capsys):
    path = tmp_path / "bad.scn"
    path.write_text('name = "x"\nseed = 1\nregion.0.name = "a"\n')
    assert main(["run", "--scenario", str(path), "--out", str(tmp_path)]) == EXIT_USAGE
    assert "horizon" in capsys.readouterr().err


def test_missing_scenario_file_is_usage_error(tmp_path):
    assert main(["run", "--scenario", str(tmp_path / "nope.scn")]) == EXIT_USAGE


def test_unknown_preset_is_usage_error():
    assert main(["run", "--preset", "utopia"]) == EXIT_USAGE


def test_run_rejects_sweep_directive(tmp_path):
    assert main(["run", "--preset", "panglossian-sweep", "--out", str(tmp_path)]) == EXIT_USAGE


def test_unwritable_output_is_runtime_error(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert main(["run", "--preset", "reference", "--out", str(blocker / "sub")]) == EXIT_RUNTIME


def test_env_seed_fallback(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv(SEED_ENV, "123")
    main(["run", "--preset", "reference", "--out", str(tmp_path / "env"), "--format", "csv"])
    monkeypatch.delenv(SEED_ENV)
    main(["run", "--preset", "reference", "--seed", "123", "--out", str(tmp_path / "flag"), "--format", "csv"])
    out = capsys.readouterr().out.splitlines()
    assert out[0] == out[1] and "seed=123" in out[0]
    assert (tmp_path / "env" / "run.csv").read_bytes() == (tmp_path / "flag" / "run.csv").read_bytes()


def test_flag_seed_beats_env(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv(SEED_ENV, "123")
    main(["run", "--preset", "reference", "--seed", "5", "--out", str(tmp_path), "--format", "csv"])
    assert "seed=5 " in capsys.readouterr().out


def test_bad_env_seed_is_usage_error(tmp_path, monkeypatch):
    monkeypatch.setenv(SEED_ENV, "minus one")
    assert main(["run", "--preset", "reference", "--out", str(tmp_path)]) == EXIT_USAGE


def test_extended_horizon_is_a_fresh_run(tmp_path, capsys):
    main(["run", "--preset", "reference", "--horizon", "40", "--out", str(tmp_path / "same"), "--format", "csv"])
    main(["run", "--preset", "reference", "--horizon", "40", "--rerun-seed", "fresh",
          "--out", str(tmp_path / "fresh"), "--format", "csv"])
    assert len(read_csv(tmp_path / "same" / "run.csv")) == 40
    assert (tmp_path / "same" / "run.csv").read_bytes() != (tmp_path / "fresh" / "run.csv").read_bytes()


def test_sweep_writes_rows_and_monotone_mutations(tmp_path, capsys):
    args = ["sweep", "--preset", "reference", "--thetas", "0,20,60", "--reps", "100", "--seed", "7",
            "--workers", "1", "--out", str(tmp_path)]
    assert main(args) == EXIT_OK
    rows = read_csv(tmp_path / "sweep.csv")
    assert list(rows[0]) == ["theta", "reps", "mean_mutations", "mean_pace", "sd_pace"]
    assert [r["theta"] for r in rows] == ["0", "20", "60"]
    muts = [float(r["mean_mutations"]) for r in rows]
    assert all(a >= b for a, b in zip(muts, muts[1:]))
    summary = (tmp_path / "sweep_summary.txt").read_text()
    assert "spearman_theta_mean_pace = " in summary and summary == capsys.readouterr().out
    assert not (tmp_path / "sweep.png").exists()


def test_sweep_single_theta_reports_absent_correlation(tmp_path):
    assert main(["sweep", "--preset", "reference", "--thetas", "20", "--reps", "2", "--workers", "1",
                 "--out", str(tmp_path)]) == EXIT_OK
    assert "spearman_theta_mean_pace = absent" in (tmp_path / "sweep_summary.txt").read_text()


def test_sweep_worker_count_does_not_change_output(tmp_path):
    for w in ("1", "2"):
        main(["sweep", "--preset", "reference", "--thetas", "0,40", "--reps", "6", "--workers", w,
              "--out", str(tmp_path / w), "--figures"])
    for name in ("sweep.csv", "sweep_summary.txt", "sweep.png"):
        assert (tmp_path / "1" / name).read_bytes() == (tmp_path / "2" / name).read_bytes()


def test_sweep_uses_directive_by_default(tmp_path):
    assert main(["sweep", "--preset", "panglossian-sweep", "--reps", "2", "--workers", "1",
                 "--out", str(tmp_path)]) == EXIT_OK
    assert len(read_csv(tmp_path / "sweep.csv")) == 7


def test_sweep_needs_thetas_without_directive(tmp_path):
    assert main(["sweep", "--preset", "reference", "--out", str(tmp_path)]) == EXIT_USAGE


@pytest.mark.parametrize("thetas", ["5,3", "1,1", "a,b", "-1,2", ""])
def test_malformed_theta_list(tmp_path, thetas):
    assert main(["sweep", "--preset", "reference", "--thetas", thetas, "--out", str(tmp_path)]) == EXIT_USAGE


def test_schema_covers_every_parser_key(capsys):
    assert main(["scenario-schema"]) == EXIT_OK
    first = capsys.readouterr().out
    listed = {line.split(" | ")[0] for line in first.splitlines() if not line.startswith("#")}
    assert listed == set(known_keys())
    assert main(["scenario-schema"]) == EXIT_OK
    assert capsys.readouterr().out == first == schema_text()


def test_presets_and_show_preset(capsys):
    assert main(["presets"]) == EXIT_OK
    assert capsys.readouterr().out.split() == list(PRESETS)
    assert main(["show-preset", "collapse"]) == EXIT_OK
    assert parse_scenario(capsys.readouterr().out).name == "collapse"


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "definetti_sim", "presets"], capture_output=True, text=True)
    assert proc.returncode == 0 and "reference" in proc.stdout


def test_committed_schema_docs_are_current():
    root = Path(__file__).resolve().parent.parent
    sys.path.insert(0, str(root / "tools"))
    try:
        import gen_docs
    finally:
        sys.path.pop(0)
    for path, text in gen_docs.outputs().items():
        assert path.read_text(encoding="utf-8") == text, f"{path.name} is stale; run tools/gen_docs.py"
    assert (root / "docs" / "schema.txt").read_text(encoding="utf-8") == schema_text()
