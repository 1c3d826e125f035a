import json
import subprocess
import sys

import pytest

from ratmaps.cli import EXIT_BUDGET, EXIT_FAIL, EXIT_INPUT, EXIT_OK, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--output", "json")
    return code, json.loads(out)


def test_count_both_agree(capsys):
    code, rep = run_json(capsys, "count", "--space", "poly", "--d", "3", "--n", "2", "--m", "1", "--field", "3")
    assert code == EXIT_OK
    assert set(rep) == {"inputs", "results", "checks", "timing"}
    assert rep["results"]["formula"] == rep["results"]["brute"] == 18
    assert rep["results"]["agree"] is True


def test_count_pconf(capsys):
    code, rep = run_json(capsys, "count", "--space", "pconf", "--r", "3", "--exclude", "0,1", "--field", "5")
    assert code == EXIT_OK and rep["results"]["brute"] == 6


def test_count_empty_space(capsys):
    code, rep = run_json(capsys, "count", "--space", "poly", "--d", "1", "--n", "1", "--m", "1", "--field", "7")
    assert code == EXIT_OK and rep["results"]["formula"] == rep["results"]["brute"] == 0


@pytest.mark.parametrize(
    "space,extra",
    [
        ("rat", ["--d", "1", "--n", "2"]),
        ("m0m-star", ["--m", "4", "--n", "1", "--d", "1"]),
        ("m0m", ["--m", "3", "--n", "1", "--d", "1"]),
        ("stratum", ["--d", "4", "--n", "2", "--m", "1", "--k", "1"]),
    ],
)
def test_count_other_spaces_agree(capsys, space, extra):
    code, rep = run_json(capsys, "count", "--space", space, *extra, "--field", "3")
    assert code == EXIT_OK and rep["results"]["agree"]


def test_count_extension_field(capsys):
    code, rep = run_json(capsys, "count", "--space", "poly", "--d", "3", "--n", "2", "--m", "2", "--field", "2^2")
    assert code == EXIT_OK and rep["results"]["brute"] == 4**6 - 4**3


def test_budget_exit(capsys):
    code, _, err = run(capsys, "count", "--space", "poly", "--d", "9", "--n", "2", "--m", "2", "--field", "5", "--cap", "100")
    assert code == EXIT_BUDGET
    assert str(5**18) in err


@pytest.mark.parametrize(
    "argv",
    [
        ["count", "--space", "poly", "--d", "3", "--n", "2", "--m", "1", "--field", "6"],
        ["count", "--space", "poly", "--d", "3", "--n", "0", "--m", "1", "--field", "3"],
        ["count", "--space", "poly", "--d", "3", "--m", "1", "--field", "3"],
        ["motive", "--space", "m0m-star", "--m", "2", "--n", "1", "--d", "1"],
        ["count", "--space", "poly", "--d", "3", "--n", "2", "--m", "1", "--field", "3", "--cap", "0"],
        ["count", "--space", "poly", "--d", "3", "--n", "2", "--m", "1", "--field", "3", "--workers", "0"],
        ["tables", "--space", "stratum", "--d", "2", "--n", "1", "--m", "1", "--k", "1"],
        ["bogus"],
    ],
)
def test_invalid_input_exit(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == EXIT_INPUT


def test_motive_examples(capsys):
    _, rep = run_json(capsys, "motive", "--space", "rat", "--d", "1", "--n", "2")
    assert rep["results"]["coefficients"] == {"1": -1, "3": 1}
    _, rep = run_json(capsys, "motive", "--space", "m0m-star", "--m", "4", "--n", "1", "--d", "1")
    assert rep["results"]["coefficients"] == {"1": 2, "2": -3, "3": 1}
    _, rep = run_json(capsys, "motive", "--space", "stratum", "--d", "2", "--n", "2", "--m", "1", "--k", "1")
    assert rep["results"]["coefficients"] == {"1": 1}


def test_tables_examples(capsys):
    code, rep = run_json(capsys, "tables", "--space", "poly", "--d", "3", "--n", "2", "--m", "1")
    assert code == EXIT_OK
    assert rep["results"]["weights"]["entries"] == {"5": [{"twist": -2, "mult": 1}], "6": [{"twist": -3, "mult": 1}]}
    code, rep = run_json(capsys, "tables", "--space", "pconf", "--m", "5")
    assert rep["results"]["betti"]["ordinary"] == {"0": 1, "1": 5, "2": 6}
    code, rep = run_json(capsys, "tables", "--space", "m0m-star", "--m", "3", "--n", "1", "--d", "1")
    assert code == EXIT_OK
    assert {"weights", "weights_literal", "diff"} <= set(rep["results"])
    assert rep["results"]["diff"]["differences"]


def test_tables_csv_rows(capsys):
    code, out, _ = run(capsys, "tables", "--space", "m0m-star", "--m", "4", "--n", "1", "--d", "1", "--output", "csv")
    rows = out.strip().splitlines()
    assert rows[0] == "table,degree,twist,mult"
    assert "weights,5,-2,3" in rows


@pytest.mark.parametrize(
    "argv",
    [
        ["--check", "recursion", "--max-d", "30"],
        ["--check", "rat-poly", "--max", "10"],
        ["--check", "stratification", "--d", "4", "--n", "2", "--m", "1", "--field", "3"],
        ["--check", "pconf", "--field", "7"],
        ["--check", "psi", "--m", "3", "--field", "3"],
        ["--check", "trace"],
    ],
)
def test_verify_checks_pass(capsys, argv):
    code, rep = run_json(capsys, "verify", *argv)
    assert code == EXIT_OK
    assert rep["checks"] and all(c["passed"] for c in rep["checks"])


def test_verify_budget_reported_per_check(capsys):
    code, rep = run_json(
        capsys, "verify", "--check", "stratification", "--d", "6", "--n", "2", "--m", "2", "--field", "5", "--cap", "10"
    )
    assert code == EXIT_FAIL
    assert rep["checks"][0]["details"]["budget_exceeded"]


def test_verify_csv(capsys):
    code, out, _ = run(capsys, "verify", "--check", "recursion", "--max-d", "5", "--output", "csv")
    assert code == EXIT_OK
    assert out.splitlines()[1].startswith("recursion,True")


def test_report_content_independent_of_workers(capsys):
    base = ["count", "--space", "poly", "--d", "4", "--n", "2", "--m", "2", "--field", "3", "--method", "brute"]
    _, a = run_json(capsys, *base, "--workers", "1")
    _, b = run_json(capsys, *base, "--workers", "2")
    a.pop("timing"), b.pop("timing")
    assert a == b


def test_json_has_no_floats(capsys):
    _, out, _ = run(capsys, "tables", "--space", "m0m-star", "--m", "5", "--n", "1", "--d", "1", "--output", "json")

    def walk(x):
        if isinstance(x, float):
            raise AssertionError(x)
        if isinstance(x, dict):
            for v in x.values():
                walk(v)
        if isinstance(x, list):
            for v in x:
                walk(v)

    walk(json.loads(out))


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "ratmaps", "motive", "--space", "rat", "--d", "1", "--n", "1"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "L^2 - L" in proc.stdout
