"""End-to-end command-line tests, run in-process through main()."""

import json

import pytest

from ramseylab.cli import main
from ramseylab.colorings import load_file
from ramseylab.sat import parse_dimacs
from ramseylab.semigroups import format_table, table_from_rows

SCHUR = "{x, y, x+y}"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


def test_find_reports_least_instance(capsys):
    code, report = run_json(
        capsys, "find", "--pattern", SCHUR,
        "--generator", "parity", "--n", "8", "--colors", "2")
    assert code == 0
    assert report["schema_version"] == 1
    assert report["verdict"] == "found"
    assert report["witness"] == {"assignment": {"x": 2, "y": 2}, "color": 0}
    assert report["stats"]["time_ms"] == 0.0  # timing off by default
    assert report["query"]["pattern"] == SCHUR


def test_find_all_lists_instances(capsys):
    code, report = run_json(
        capsys, "find", "--pattern", SCHUR, "--all", "--max-witnesses", "5",
        "--generator", "constant", "--n", "6", "--colors", "2",
        "--param", "0")
    assert code == 0
    assert report["verdict"] == "found"
    assert len(report["witness"]) == 5


def test_find_none_verdict(capsys):
    code, report = run_json(
        capsys, "find", "--pattern", SCHUR,
        "--generator", "blocks", "--n", "4", "--colors", "2",
        "--param", "1,2")
    # width cycle (1, 2) lays down [0, 1, 1, 0], the sum-free coloring
    assert code == 0
    assert report["verdict"] == "none"
    assert report["witness"] is None


def test_find_requires_one_coloring_source(capsys, tmp_path):
    code, report = run_json(capsys, "find", "--pattern", SCHUR)
    assert code == 1 and report["verdict"] == "error"
    path = tmp_path / "c.txt"
    path.write_text("1 4 2\n0 1 1 0\n")
    code, report = run_json(
        capsys, "find", "--pattern", SCHUR, "--coloring-file", str(path),
        "--generator", "parity", "--n", "4", "--colors", "2")
    assert code == 1 and report["verdict"] == "error"
    assert "not both" in report["error"]


def test_find_reports_pattern_syntax_error(capsys):
    code, report = run_json(
        capsys, "find", "--pattern", "{x, y",
        "--generator", "parity", "--n", "4", "--colors", "2")
    assert code == 1
    assert report["verdict"] == "error"
    assert "offset" in report["error"]


def test_usage_errors_exit_one(capsys):
    # argparse failures are remapped from its default exit status 2,
    # which is reserved for exhausted budgets
    assert main(["find"]) == 1
    assert main(["no-such-command"]) == 1
    capsys.readouterr()


def test_avoid_writes_coloring(capsys, tmp_path):
    out = tmp_path / "avoid.txt"
    code, report = run_json(
        capsys, "avoid", "--pattern", SCHUR, "--n", "4", "--colors", "2",
        "--coloring-out", str(out))
    assert code == 0
    assert report["verdict"] == "sat"
    assert report["witness"] == {"cells": [0, 1, 1, 0]}
    assert list(load_file(out).cells) == [0, 1, 1, 0]


def test_avoid_unsat_at_threshold(capsys):
    for engine in ("backtracking", "sat", "exhaustive"):
        code, report = run_json(
            capsys, "avoid", "--pattern", SCHUR, "--n", "5", "--colors", "2",
            "--engine", engine)
        assert code == 0
        assert report["verdict"] == "unsat"
        assert report["witness"] is None


def test_avoid_budget_exhaustion_exits_two(capsys):
    code, report = run_json(
        capsys, "avoid", "--pattern", SCHUR, "--n", "13", "--colors", "3",
        "--max-nodes", "5")
    assert code == 2
    assert report["verdict"] == "unknown"


def test_threshold_with_csv(capsys, tmp_path):
    csv = tmp_path / "rows.csv"
    code, report = run_json(
        capsys, "threshold", "--pattern", SCHUR, "--colors", "2",
        "--n-max", "8", "--csv", str(csv))
    assert code == 0
    assert report["verdict"] == "found"
    assert report["witness"]["threshold"] == 5
    assert report["witness"]["certificate"] == [0, 1, 1, 0]
    lines = csv.read_text().splitlines()
    assert lines[0] == "N,verdict,nodes,time_ms"
    assert [l.split(",")[1] for l in lines[1:]] == [
        "sat", "sat", "sat", "sat", "unsat"]


def test_encode_then_solve_round_trip(capsys, tmp_path):
    cnf = tmp_path / "s4.cnf"
    code, report = run_json(
        capsys, "encode", "--pattern", SCHUR, "--n", "4", "--colors", "2",
        "--out-cnf", str(cnf))
    assert code == 0
    assert report["verdict"] == "encoded"
    assert report["witness"]["vars"] == 8
    assert report["witness"]["clauses"] == 16
    formula = parse_dimacs(cnf.read_text())
    assert formula.var_count == 8

    model = tmp_path / "model.txt"
    code, report = run_json(
        capsys, "solve", str(cnf), "--n", "4", "--colors", "2",
        "--model-out", str(model))
    assert code == 0
    assert report["verdict"] == "sat"
    assert report["witness"]["cells"] == [0, 1, 1, 0]
    assert model.read_text().startswith("s SATISFIABLE")


def test_solve_unknown_exits_two(capsys, tmp_path):
    cnf = tmp_path / "s5.cnf"
    run_json(capsys, "encode", "--pattern", SCHUR, "--n", "5",
             "--colors", "2", "--out-cnf", str(cnf))
    code, report = run_json(
        capsys, "solve", str(cnf), "--max-conflicts", "0")
    assert code == 2
    assert report["verdict"] == "unknown"


def test_fs_witness_then_verify(capsys, tmp_path):
    record_path = tmp_path / "w.json"
    code, report = run_json(
        capsys, "fs-witness", "--k", "2",
        "--generator", "parity", "--n", "8", "--colors", "2",
        "--witness-out", str(record_path))
    assert code == 0
    assert report["verdict"] == "found"
    assert report["witness"] == {"generators": [2, 2], "color": 0}

    code, report = run_json(capsys, "verify", str(record_path))
    assert code == 0
    assert report["verdict"] == "valid"
    assert report["query"]["kind"] == "fs"

    # the same record against a hostile coloring must fail
    bad = tmp_path / "bad.txt"
    bad.write_text("1 8 2\n0 1 0 1 0 1 0 1\n")
    code, report = run_json(
        capsys, "verify", str(record_path), "--coloring-file", str(bad))
    assert code == 0
    assert report["verdict"] == "invalid"


def test_grid_witness(capsys):
    code, report = run_json(
        capsys, "grid-witness", "--length", "3", "--blocks", "2",
        "--generator", "parity", "--n", "8", "--colors", "2")
    assert code == 0
    assert report["witness"] == {"sequence": [2, 2, 2], "d": 2, "color": 0}


def test_composed_witness_check(capsys):
    code, report = run_json(
        capsys, "composed-witness", "--sequence", "2,2", "--cuts", "0,1,2",
        "--generator", "parity", "--n", "8", "--colors", "2")
    assert code == 0
    assert report["verdict"] == "valid"
    assert report["witness"] == {"color": 0}
    assert report["query"]["op"] == {"kind": "multiplication-capped", "n": 8}


def test_composed_witness_profile(capsys):
    code, report = run_json(
        capsys, "composed-witness", "--sequence", "2,2",
        "--profile-depth", "2",
        "--generator", "parity", "--n", "8", "--colors", "2")
    assert code == 0
    assert report["verdict"] == "profiled"
    assert [row["ok"] for row in report["witness"]["profile"]] == [True, True]


def test_composed_witness_depth_set(capsys):
    code, report = run_json(
        capsys, "composed-witness", "--sequence", "1,2,2,2",
        "--depth-set-m0", "1",
        "--generator", "parity", "--n", "8", "--colors", "2")
    assert code == 0
    assert report["verdict"] == "valid"


def test_composed_witness_needs_a_mode(capsys):
    code, report = run_json(
        capsys, "composed-witness", "--sequence", "2,2",
        "--generator", "parity", "--n", "8", "--colors", "2")
    assert code == 1
    assert "--cuts" in report["error"]


def test_composed_witness_explicit_table(capsys, tmp_path):
    op = tmp_path / "op.txt"
    op.write_text("8\n" + "\n".join(
        " ".join(str(min(i * j, 8)) for j in range(1, 9))
        for i in range(1, 9)) + "\n")
    code, report = run_json(
        capsys, "composed-witness", "--sequence", "2,2", "--cuts", "0,1,2",
        "--op-table", str(op),
        "--generator", "parity", "--n", "8", "--colors", "2")
    assert code == 0
    assert report["verdict"] == "valid"


def test_bundle_commands(capsys, tmp_path):
    record_path = tmp_path / "b14.json"
    code, report = run_json(
        capsys, "bundle14", "--k", "2",
        "--generator", "parity", "--n", "20", "--colors", "2",
        "--witness-out", str(record_path))
    assert code == 0
    assert report["witness"] == {"lam": 1, "a_set": [2, 4, 6], "b_set": [2],
                                 "k": 2, "color": 0}
    code, report = run_json(capsys, "verify", str(record_path))
    assert code == 0 and report["verdict"] == "valid"

    code, report = run_json(
        capsys, "bundle15", "--k", "2",
        "--generator", "parity", "--n", "20", "--colors", "2")
    assert code == 0
    assert report["witness"] == {"lam": 2, "a_set": [2, 4, 6, 8],
                                 "b_set": [2], "k": 2, "color": 0}


def test_bundle_corollary_mode(capsys):
    code, report = run_json(
        capsys, "bundle14", "--corollary",
        "--generator", "constant", "--n", "6", "--colors", "2",
        "--param", "0")
    assert code == 0
    assert report["verdict"] == "found"
    assert report["witness"]["assignment"] == {"a": 1, "x": 1, "y": 1}


def test_semigroup_report(capsys, tmp_path):
    path = tmp_path / "z3.txt"
    path.write_text(format_table(table_from_rows(
        ((0, 1, 2), (1, 2, 0), (2, 0, 1)))))
    code, report = run_json(
        capsys, "semigroup", "--table", str(path),
        "--central-subset", "0,1", "--translate-by", "2")
    assert code == 0
    assert report["verdict"] == "analyzed"
    w = report["witness"]
    assert w["idempotents"] == [0]
    assert w["minimal_left_ideals"] == [[0, 1, 2]]
    assert w["central"] is True
    assert w["translate"] == [1, 2]


def test_semigroup_translate_needs_subset(capsys, tmp_path):
    path = tmp_path / "z3.txt"
    path.write_text("3\n0 1 2\n1 2 0\n2 0 1\n")
    code, report = run_json(
        capsys, "semigroup", "--table", str(path), "--translate-by", "1")
    assert code == 1
    assert "--central-subset" in report["error"]


def test_out_file_matches_stdout(capsys, tmp_path):
    out = tmp_path / "report.json"
    code, stdout = run(
        capsys, "find", "--pattern", SCHUR,
        "--generator", "parity", "--n", "8", "--colors", "2",
        "--out", str(out))
    assert code == 0
    assert out.read_text() == stdout


def test_workers_env_override(capsys, monkeypatch, tmp_path):
    argv = ("find", "--pattern", SCHUR,
            "--generator", "random", "--n", "40", "--colors", "2",
            "--seed", "9")
    code, base = run(capsys, *argv)
    assert code == 0
    monkeypatch.setenv("RAMSEY_WORKERS", "4")
    code, with_env = run(capsys, *argv)
    assert code == 0
    assert with_env == base  # worker count never changes the report
    monkeypatch.setenv("RAMSEY_WORKERS", "many")
    code, report = run_json(capsys, *argv)
    assert code == 1
    assert "RAMSEY_WORKERS" in report["error"]


def test_timing_flag_populates_time(capsys):
    code, report = run_json(
        capsys, "find", "--pattern", SCHUR, "--timing",
        "--generator", "parity", "--n", "8", "--colors", "2")
    assert code == 0
    assert report["stats"]["time_ms"] > 0.0


def test_suite_single_criterion(capsys):
    code, out = run(capsys, "suite", "--ids", "1")
    assert code == 0
    assert out.splitlines()[0].startswith("criterion 1 [")
    assert "PASS" in out.splitlines()[0]
    assert out.splitlines()[-1] == "1/1 criteria passed"
