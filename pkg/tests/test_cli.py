import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from nkbench import enumerate_optimum, evaluate, generate_instance, load_instance
from nkbench.cli import main
from nkbench.harness import read_aggregates_csv, read_results_csv


def test_generate_writes_valid_deterministic_instance(tmp_path, capsys):
    out1 = tmp_path / "a.json"
    out2 = tmp_path / "b.json"
    assert main(["generate", "--n", "20", "--k", "2", "--seed", "1", "--out", str(out1)]) == 0
    assert main(["generate", "--n", "20", "--k", "2", "--seed", "1", "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    inst = load_instance(out1)
    obj = json.loads(out1.read_text())
    assert obj["format_version"] == 1 and obj["n"] == 20 and obj["k"] == 2
    # file round-trip preserves evaluation semantics
    in_memory = generate_instance(20, 2, 1)
    zeros = np.zeros(20, dtype=np.uint8)
    assert evaluate(inst, zeros) == pytest.approx(evaluate(in_memory, zeros), abs=1e-9)


def test_generate_rejects_bad_parameters(tmp_path):
    code = main(["generate", "--n", "5", "--k", "9", "--seed", "1", "--out", str(tmp_path / "x")])
    assert code == 2


def test_solve_exact_matches_enumeration(tmp_path, capsys):
    path = tmp_path / "inst.json"
    main(["generate", "--n", "14", "--k", "3", "--seed", "7", "--out", str(path)])
    capsys.readouterr()
    assert main(["solve-exact", str(path)]) == 0
    payload = json.loads(capsys.readouterr().out)
    inst = load_instance(path)
    _, best = enumerate_optimum(inst)
    assert payload["certified"] is True
    assert payload["optimum_value"] == best
    assert payload["seed_value"] <= payload["optimum_value"]
    assert evaluate(inst, np.array(payload["optimum_bits"], dtype=np.uint8)) == best


def test_solve_exact_k0_analytic(tmp_path, capsys):
    path = tmp_path / "inst.json"
    main(["generate", "--n", "10", "--k", "0", "--seed", "3", "--out", str(path)])
    capsys.readouterr()
    assert main(["solve-exact", str(path)]) == 0
    payload = json.loads(capsys.readouterr().out)
    inst = load_instance(path)
    assert payload["optimum_value"] == pytest.approx(
        float(inst.tables.max(axis=1).sum()), abs=1e-9
    )


def test_solve_exact_node_limit_exit_code(tmp_path, capsys):
    path = tmp_path / "inst.json"
    main(["generate", "--n", "16", "--k", "4", "--seed", "5", "--out", str(path)])
    capsys.readouterr()
    code = main(["solve-exact", str(path), "--node-limit", "1"])
    payload = json.loads(capsys.readouterr().out)
    assert code == 3
    assert payload["certified"] is False
    assert "incumbent_value" in payload and "nodes_expanded" in payload


def test_solve_exact_missing_file_is_invalid_input(capsys):
    assert main(["solve-exact", "/nonexistent/path.json"]) == 2


def _write_sweep_config(tmp_path, out_dir, algorithms=("ga-uniform",), instances=2):
    config = {
        "format_version": 1,
        "grid": {"2": [14]},
        "instances_per_cell": instances,
        "algorithms": list(algorithms),
        "master_seed": 11,
        "output_dir": str(out_dir),
    }
    path = tmp_path / "config.json"
    path.write_text(json.dumps(config))
    return path


def test_sweep_compare_export_pipeline(tmp_path, capsys):
    out_dir = tmp_path / "out"
    config = _write_sweep_config(tmp_path, out_dir, algorithms=("ga-uniform", "ga-nocrossover"))
    assert main(["sweep", "--config", str(config), "--workers", "1"]) == 0
    capsys.readouterr()
    results = out_dir / "results.csv"
    aggregates = out_dir / "aggregates.csv"
    manifest = json.loads((out_dir / "manifest.json").read_text())
    assert manifest["complete"] is True
    stats = read_results_csv(results)
    assert len(stats) == 2 * 2 * 10

    ratio_out = tmp_path / "ratio.csv"
    code = main([
        "compare", "--a", str(results), "--b", str(results),
        "--algorithm-a", "ga-nocrossover", "--algorithm-b", "ga-uniform",
        "--out", str(ratio_out),
    ])
    assert code == 0
    header, *rows = ratio_out.read_text().strip().split("\n")
    assert header == "n,k,algorithm_a,algorithm_b,instances,evaluations_ratio,dhc_flips_ratio"
    assert rows and rows[0].startswith("14,2,ga-nocrossover,ga-uniform,2,")

    # self comparison is exactly 1
    self_out = tmp_path / "self.csv"
    main([
        "compare", "--a", str(results), "--b", str(results),
        "--algorithm-a", "ga-uniform", "--algorithm-b", "ga-uniform",
        "--out", str(self_out),
    ])
    row = self_out.read_text().strip().split("\n")[1].split(",")
    assert row[5] == "1.0" and row[6] == "1.0"

    plot_out = tmp_path / "plot.csv"
    assert main(["export-plotdata", "--in", str(aggregates), "--out", str(plot_out)]) == 0
    lines = plot_out.read_text().strip().split("\n")
    assert lines[0] == "algorithm,statistic,k,n,value"
    aggs = read_aggregates_csv(aggregates)
    by_key = {}
    for line in lines[1:]:
        algorithm, statistic, k, n, value = line.split(",")
        by_key[(algorithm, statistic, int(k), int(n))] = float(value)
    for a in aggs:
        assert by_key[(a.algorithm, "evaluations", a.k, a.n)] == a.mean_evaluations


def test_compare_mismatched_instance_sets_fails(tmp_path, capsys):
    out_a = tmp_path / "a"
    out_b = tmp_path / "b"
    cfg_a = _write_sweep_config(tmp_path, out_a, instances=2)
    assert main(["sweep", "--config", str(cfg_a), "--workers", "1"]) == 0
    cfg_b_path = tmp_path / "config_b.json"
    cfg_b = json.loads(cfg_a.read_text())
    cfg_b["master_seed"] = 12  # different instances
    cfg_b["output_dir"] = str(out_b)
    cfg_b_path.write_text(json.dumps(cfg_b))
    assert main(["sweep", "--config", str(cfg_b_path), "--workers", "1"]) == 0
    capsys.readouterr()
    code = main([
        "compare",
        "--a", str(out_a / "results.csv"),
        "--b", str(out_b / "results.csv"),
        "--out", str(tmp_path / "ratio.csv"),
    ])
    assert code == 2


def test_export_plotdata_empty_aggregates(tmp_path):
    empty = tmp_path / "aggregates.csv"
    empty.write_text(
        "n,k,algorithm,instances,runs,mean_population_size,std_population_size,"
        "mean_generations,std_generations,mean_evaluations,std_evaluations,"
        "mean_dhc_flips,std_dhc_flips\n"
    )
    out = tmp_path / "plot.csv"
    assert main(["export-plotdata", "--in", str(empty), "--out", str(out)]) == 0
    assert out.read_text() == "algorithm,statistic,k,n,value\n"


def test_sweep_rejects_bad_config(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"format_version": 1, "grid": {"16": [14]},
                               "instances_per_cell": 1, "algorithms": ["ga-uniform"],
                               "master_seed": 1}))
    assert main(["sweep", "--config", str(bad)]) == 2


def test_console_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "nkbench.cli", "generate", "--n", "8", "--k", "1",
         "--seed", "2", "--out", "/dev/null"],
        capture_output=True,
    )
    assert proc.returncode == 0
