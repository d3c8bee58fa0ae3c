import csv
import io
import json
import subprocess
import sys

import pytest

from rsfield import census
from rsfield.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def csv_rows(text):
    body = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(body))))


def test_field(capsys):
    code, out, _ = run(capsys, "field", "--p", "3", "--r", "2")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("# config: ")
    assert "p=3 r=2 modulus=[1,0,1]" in lines
    assert "dual=[[2,0],[0,1]]" in lines

    code, out, _ = run(capsys, "field", "--p", "5", "--r", "1")
    assert code == 0 and "p=5 r=1 modulus=[0,1]" in out

    code, out, err = run(capsys, "field", "--p", "4", "--r", "2")
    assert code == 2 and "p not prime" in err


def test_field_json_and_modulus_override(capsys):
    code, out, _ = run(capsys, "field", "--p", "3", "--r", "2", "--modulus", "2,2,1", "--format", "json")
    body = json.loads(out)
    assert code == 0 and body["modulus"] == [2, 2, 1] and body["config"]["modulus"] == [2, 2, 1]
    code, _, err = run(capsys, "field", "--p", "3", "--r", "2", "--modulus", "2,0,1")
    assert code == 2 and "reducible" in err


def test_count_examples(capsys):
    code, out, _ = run(capsys, "count", "--p", "3", "--r", "2", "--f", "X^2", "--kind", "R")
    assert code == 0
    assert [int(r["count"]) for r in csv_rows(out)] == [9, 0, 0]
    assert out.startswith("# config: ")

    code, out, _ = run(capsys, "count", "--p", "3", "--r", "4", "--f", "X", "--kind", "R")
    assert [int(r["count"]) for r in csv_rows(out)] == [33, 24, 24]

    code, out, _ = run(capsys, "count", "--kind", "T", "--f", "X^2", "--p", "5", "--r", "3")
    assert code == 0 and "# ds13_check: pass" in out


def test_count_filter_json_and_inapplicable(capsys):
    code, out, _ = run(capsys, "count", "--p", "5", "--r", "3", "--d", "2", "--c", "1", "--format", "json")
    body = json.loads(out)
    assert code == 0 and [row["c"] for row in body["rows"]] == [1]
    assert body["config"]["f"] == "X^2" and body["config"]["modulus"] == [1, 1, 0, 1]
    code, out, _ = run(capsys, "count", "--p", "3", "--r", "4", "--f", "X^3+[0,1,0,0]*X", "--kind", "T")
    assert code == 0 and "inapplicable" in out


def test_count_exit_codes(capsys, monkeypatch):
    code, _, err = run(capsys, "count", "--p", "5", "--r", "4", "--d", "2", "--budget", "10")
    assert code == 3 and "625" in err
    code, _, err = run(capsys, "count", "--p", "5", "--r", "4")
    assert code == 2
    code, _, _ = run(capsys, "count", "--p", "5", "--r", "4", "--f", "X^^2")
    assert code == 2
    with pytest.raises(SystemExit) as e:
        main(["count", "--p", "5"])
    assert e.value.code == 2
    monkeypatch.setattr(census, "ds13_check", lambda rep: False)
    code, out, _ = run(capsys, "count", "--p", "5", "--r", "3", "--d", "2", "--kind", "T")
    assert code == 4 and "FAIL" in out


def test_lift_examples(capsys):
    code, out, _ = run(capsys, "lift", "--p", "5", "--r", "2", "--f", "X^2")
    assert code == 0 and "deg F = 4" in out
    assert "value identity: yes" in out and "phi(F)=F: yes" in out

    code, out, _ = run(capsys, "lift", "--p", "3", "--r", "4", "--basis", "special-dual", "--f", "X^2")
    assert code == 0 and "a_{j,j}=0: yes" in out
    code, _, err = run(capsys, "lift", "--p", "2", "--r", "6", "--basis", "special-dual", "--f", "X")
    assert code == 2 and "degenerate" in err

    code, out, _ = run(capsys, "lift", "--p", "3", "--r", "2", "--f", "X^5")
    assert code == 0 and "out of Lemma hypothesis" in out and "deg F = 2d: skipped" in out

    code, _, err = run(capsys, "lift", "--p", "3", "--r", "4", "--f", "X^6", "--budget", "100")
    assert code == 3


def test_census_singular(capsys):
    code, out, _ = run(capsys, "census-singular", "--p", "5", "--r", "3", "--d", "2",
                       "--system", "thue-morse", "--c", "1")
    assert code == 0
    rows = [ln.split(",") for ln in out.splitlines()[2:] if not ln.startswith("#")]
    assert [row[-1] for row in rows] == ["0", "0"]

    code, out, _ = run(capsys, "census-singular", "--p", "7", "--r", "4", "--d", "2",
                       "--basis", "special-dual", "--system", "Q2d", "--m-max", "1")
    assert code == 0
    assert int(out.splitlines()[-1].split(",")[-1]) >= 4 * 6

    code, out, _ = run(capsys, "census-singular", "--p", "3", "--r", "3", "--d", "1", "--c", "1")
    assert code == 0 and out.splitlines()[2].endswith(",1,0")

    code, _, _ = run(capsys, "census-singular", "--p", "7", "--r", "4", "--d", "2", "--budget", "100")
    assert code == 3


def test_sweep(capsys, tmp_path):
    code, out, _ = run(capsys, "sweep", "--primes", "3,5,7,11,13", "--r", "4", "--d", "2")
    assert code == 0 and out.rstrip().endswith("-> decreasing")
    code, out, _ = run(capsys, "sweep", "--primes", "3,5,7", "--r", "4", "--d", "1")
    for row in csv_rows(out):
        assert int(row["count"]) == census.permutation_formula(int(row["p"]), 4, int(row["c"]))
    code, out, _ = run(capsys, "sweep", "--primes", "7", "--r", "3", "--d", "2")
    assert "no verdict" in out
    code, _, err = run(capsys, "sweep", "--primes", "3,4", "--r", "3", "--d", "2")
    assert code == 2


def test_output_is_deterministic(capsys, tmp_path):
    out = tmp_path / "run.csv"
    base = ["count", "--p", "7", "--r", "3", "--f-policy", "random", "--d", "3", "--basis", "seeded-random",
            "--seed", "5", "--out", str(out)]
    assert main(base) == 0
    first_bytes = out.read_bytes()
    assert main(base + ["--jobs", "3"]) == 0
    assert out.read_bytes() == first_bytes
    first = out.read_text().splitlines()[0]
    cfg = json.loads(first[len("# config: "):])
    assert cfg["seed"] == 5 and cfg["modulus"] and cfg["basis_policy"] == "seeded-random"


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "rsfield.cli", "field", "--p", "2", "--r", "2"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "modulus=[1,1,1]" in res.stdout
