"""CLI contract: flags, outputs, exit codes, determinism."""

import json

import pytest

from qpso.cli import main


def _read_csv_rows(path):
    lines = path.read_text().splitlines()
    assert lines[0] == "#schema=1"
    assert lines[1].startswith("#config=")
    return lines[2], lines[3:]


def test_bench_happy_path(tmp_path, capsys):
    out = tmp_path / "res"
    code = main(["bench", "--problem", "sphere", "--algo", "qpso-cd",
                 "--algo", "pso", "--pop", "6", "--dim", "3", "--iters", "20",
                 "--runs", "2", "--seed", "7", "--out", str(out)])
    assert code == 0
    header, rows = _read_csv_rows(out / "runs.csv")
    assert header == "experiment,algorithm,problem,P,D,G,seed,final_value,evals_to_region"
    assert len(rows) == 4  # 2 algorithms x 2 runs
    summary = json.loads((out / "summary.json").read_text())
    assert summary["schema"] == 1
    assert summary["master_seed"] == 7
    assert {c["algorithm"] for c in summary["cells"]} == {"qpso-cd", "pso"}
    printed = capsys.readouterr().out
    assert "bench sphere qpso-cd" in printed


def test_bench_rejects_tiny_population(tmp_path, capsys):
    code = main(["bench", "--problem", "sphere", "--pop", "1",
                 "--out", str(tmp_path)])
    assert code == 2
    assert "population must be >= 2" in capsys.readouterr().err


def test_unknown_problem_is_usage_error(tmp_path):
    with pytest.raises(SystemExit) as err:
        main(["bench", "--problem", "nope", "--out", str(tmp_path)])
    assert err.value.code == 2


def test_bench_byte_identical_reruns(tmp_path):
    out = tmp_path / "res"
    args = ["bench", "--problem", "rastrigin", "--pop", "5", "--dim", "3",
            "--iters", "15", "--runs", "2", "--seed", "3", "--out", str(out)]
    assert main(args) == 0
    first_csv = (out / "runs.csv").read_bytes()
    first_json = (out / "summary.json").read_bytes()
    assert main(args) == 0
    assert (out / "runs.csv").read_bytes() == first_csv
    assert (out / "summary.json").read_bytes() == first_json


def test_bench_worker_pool_is_deterministic(tmp_path):
    base = ["bench", "--problem", "sphere", "--pop", "5", "--dim", "3",
            "--iters", "15", "--runs", "4", "--seed", "3"]
    out1, out2 = tmp_path / "w1", tmp_path / "w2"
    assert main(base + ["--workers", "1", "--out", str(out1)]) == 0
    assert main(base + ["--workers", "2", "--out", str(out2)]) == 0
    rows1 = (out1 / "runs.csv").read_text().splitlines()[2:]
    rows2 = (out2 / "runs.csv").read_text().splitlines()[2:]
    assert rows1 == rows2


def test_bench_plot_emission(tmp_path):
    out = tmp_path / "res"
    code = main(["bench", "--problem", "sphere", "--pop", "5", "--dim", "2",
                 "--iters", "10", "--runs", "2", "--seed", "1",
                 "--out", str(out), "--plot"])
    assert code == 0
    svg = out / "plots" / "bench_sphere.svg"
    text = svg.read_text()
    assert text.lstrip().startswith("<?xml")
    assert "<!-- config:" in text


def test_engineer_reports_design_row(tmp_path, capsys):
    out = tmp_path / "res"
    code = main(["engineer", "--problem", "truss", "--pop", "10",
                 "--iters", "150", "--runs", "2", "--seed", "5",
                 "--out", str(out)])
    assert code == 0
    summary = json.loads((out / "summary.json").read_text())
    best = summary["best"]["qpso-cd"]
    assert len(best["x"]) == 2 and len(best["g"]) == 3
    assert isinstance(best["feasible"], bool)
    printed = capsys.readouterr().out
    assert "engineer truss qpso-cd: f=" in printed
    assert "g1=" in printed


def test_engineer_rejects_unconstrained_problem(tmp_path):
    with pytest.raises(SystemExit) as err:
        main(["engineer", "--problem", "sphere", "--out", str(tmp_path)])
    assert err.value.code == 2


def test_timecomplexity_table(tmp_path, capsys):
    out = tmp_path / "res"
    code = main(["timecomplexity", "--dims", "2..3", "--runs", "2",
                 "--pop", "8", "--seed", "2", "--out", str(out)])
    assert code == 0
    summary = json.loads((out / "summary.json").read_text())
    assert len(summary["rows"]) == 4  # 2 algorithms x 2 dimensions
    for row in summary["rows"]:
        if row["n_runs"] > 1:
            assert abs(row["se"] - row["sd"] / (2 ** 0.5)) < 1e-12
    printed = capsys.readouterr().out
    assert "mean/dim" in printed
    assert "pearson qpso-cd" in printed


def test_timecomplexity_single_dimension_correlation_undefined(tmp_path, capsys):
    out = tmp_path / "res"
    code = main(["timecomplexity", "--dims", "3..3", "--runs", "2",
                 "--pop", "8", "--seed", "2", "--out", str(out)])
    assert code == 0
    summary = json.loads((out / "summary.json").read_text())
    assert summary["pearson"]["qpso-cd"] is None
    assert "undefined" in capsys.readouterr().out


def test_timecomplexity_rejects_bad_range(tmp_path, capsys):
    code = main(["timecomplexity", "--dims", "5", "--out", str(tmp_path)])
    assert code == 2
    assert "A..B" in capsys.readouterr().err


def test_config_file_precedence(tmp_path):
    config = tmp_path / "conf.json"
    config.write_text(json.dumps({"runs": 2, "pop": 5, "dim": 3,
                                  "iters": 10, "seed": 9}))
    out = tmp_path / "res"
    # flag --runs overrides the config file; pop comes from the file
    code = main(["bench", "--problem", "sphere", "--config", str(config),
                 "--runs", "3", "--out", str(out)])
    assert code == 0
    _, rows = _read_csv_rows(out / "runs.csv")
    assert len(rows) == 3
    assert all(",5,3,10," in row for row in rows)


def test_config_file_unknown_key(tmp_path, capsys):
    config = tmp_path / "conf.json"
    config.write_text(json.dumps({"bogus": 1}))
    code = main(["bench", "--problem", "sphere", "--config", str(config),
                 "--out", str(tmp_path / "res")])
    assert code == 2
    assert "unknown config keys" in capsys.readouterr().err


def test_selection_flag_zero_disables_replacement(tmp_path):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    base = ["bench", "--problem", "sphere", "--pop", "6", "--dim", "3",
            "--iters", "20", "--runs", "1", "--seed", "4", "--pr", "0"]
    assert main(base + ["--selection", "0", "--out", str(out1)]) == 0
    assert main(base + ["--algo", "qpso", "--out", str(out2)]) == 0
    rows1 = (out1 / "runs.csv").read_text().splitlines()[3]
    rows2 = (out2 / "runs.csv").read_text().splitlines()[3]
    assert rows1.split(",")[7] == rows2.split(",")[7]  # same final value
