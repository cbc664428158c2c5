import json
import subprocess
import sys

import pytest
from gen import worked_example_trace

from sstl.cli import main


@pytest.fixture
def example_csv(tmp_path):
    path = tmp_path / "example.csv"
    path.write_text(worked_example_trace().to_csv())
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_check_bounded_until_rows(capsys, example_csv):
    code, out, _ = run(capsys, "check", "--formula", "(x1 >= 0) U[5,10] (x2 >= 0)", "--trace", example_csv, "--json")
    report = json.loads(out)
    assert report["verdicts"] == ["True"] * 5 + ["False"] * 6
    assert code == 1


def test_check_true_everywhere(capsys, example_csv):
    code, out, _ = run(capsys, "check", "--formula", "true", "--trace", example_csv)
    assert code == 0
    assert out.count(": True") == 11


def test_check_single_tick_and_dump(capsys, example_csv, tmp_path):
    dump = tmp_path / "eval.csv"
    code, out, _ = run(
        capsys,
        "check",
        "--formula",
        "F[0,2] (x2 >= 0)",
        "--trace",
        example_csv,
        "--tick",
        "5",
        "--dump-eval",
        str(dump),
    )
    assert code == 0 and "tick 5: True" in out
    lines = dump.read_text().splitlines()
    assert lines[0] == "tick,verdict" and lines[1] == "0,False" and len(lines) == 12


def test_check_inconclusive_is_not_success(capsys, example_csv):
    code, _, _ = run(capsys, "check", "--formula", "F[20,30] (x2 >= 0)", "--trace", example_csv, "--tick", "0")
    assert code == 1


def test_formula_from_file(capsys, example_csv, tmp_path):
    f = tmp_path / "phi.sstl"
    f.write_text("(x1 >= 0) U (x2 >= 0)\n")
    code, out, _ = run(capsys, "check", "--formula", str(f), "--trace", example_csv, "--tick", "0")
    assert code == 0


def test_dt_rules(capsys, example_csv):
    code, _, err = run(capsys, "check", "--formula", "F[1,2] x1 > 0", "--trace", example_csv, "--dt", "0.1")
    assert code == 2 and "--dt" in err
    code, _, err = run(capsys, "translate", "--formula", "F[0.1,0.2] x > 0", "--dialect", "stl")
    assert code == 2 and "--dt" in err


def test_usage_errors_exit_2(capsys, example_csv, tmp_path):
    assert run(capsys, "check", "--formula", "x >", "--trace", example_csv)[0] == 2
    assert run(capsys, "check", "--formula", "true", "--trace", str(tmp_path / "missing.csv"))[0] == 2
    assert run(capsys, "verify", "--model", "nope", "--formula", "true")[0] == 2
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 2


def test_translate_both_encodings(capsys):
    code, out, _ = run(capsys, "translate", "--formula", "(x1 >= 0) U[5,10] (x2 >= 0)", "--encoding", "conceptual")
    assert code == 0 and out.strip() == "(x1 >= 0) U@1 (x2 >= 0 && within[5,10]@1)"
    _, out, _ = run(capsys, "translate", "--formula", "(x1 >= 0) U[5,10] (x2 >= 0)")
    assert out.strip() == "(x1 >= 0 && j<=j0@1+9) U@1 (x2 >= 0 && j>=j0@1+5)"


def test_translate_stl_with_dt(capsys):
    code, out, _ = run(
        capsys, "translate", "--dialect", "stl", "--dt", "0.001", "--formula", "F[0.180,0.240] (V > 80)", "--json"
    )
    report = json.loads(out)
    assert code == 0 and report["details"]["sstl"] == "F[180,240] (V > 80)"
    assert report["details"]["obligation_bound"] == 61


def test_verify_satisfied_and_violated(capsys, tmp_path):
    code, out, _ = run(capsys, "verify", "--model", "traffic_light", "--formula", "G !(NS_green = 1 && EW_green = 1)")
    assert code == 0 and "Satisfied" in out
    cex = tmp_path / "cex.json"
    code, out, _ = run(
        capsys, "verify", "--model", "traffic_light", "--formula", "G F (NS_green = 1)", "--out", str(cex), "--json"
    )
    report = json.loads(out)
    assert code == 1 and report["verdicts"] == ["Violated"]
    assert report["counterexample"] == str(cex)
    lasso = json.loads(cex.read_text())
    assert lasso["cycle"] and lasso["loop_start"] == len(lasso["prefix"])


def test_verify_resource_limit(capsys):
    code, out, _ = run(
        capsys, "verify", "--model", "traffic_light", "--formula", "G F (NS_green = 1)", "--max-states", "4"
    )
    assert code == 3 and "ResourceLimit" in out


def test_verify_stl_needs_matching_dt(capsys):
    args = ["verify", "--model", "heart", "--dialect", "stl", "--formula", "F (V_EGM > 80)"]
    assert run(capsys, *args)[0] == 2
    assert run(capsys, *args, "--dt", "0.002")[0] == 2
    assert run(capsys, *args, "--dt", "0.001")[0] == 0


def test_report_json_is_byte_stable(capsys):
    args = ["verify", "--model", "pedestrian_crossing", "--formula", "G (waiting_peds >= 2 -> F (walk_signal = 1))"]
    _, a, _ = run(capsys, *args, "--json")
    _, b, _ = run(capsys, *args, "--json")
    assert a == b and "wall_time" not in a
    _, c, _ = run(capsys, *args, "--json", "--timing")
    assert "wall_time" in json.loads(c)


def test_simulate_writes_csv(capsys, tmp_path):
    out = tmp_path / "run.csv"
    assert (
        run(capsys, "simulate", "--model", "pedestrian_crossing", "--ticks", "7", "--seed", "2", "--out", str(out))[0]
        == 0
    )
    lines = out.read_text().splitlines()
    assert lines[0] == "tick,cars_green,walk_signal,waiting_peds,timer" and len(lines) == 8
    _, again, _ = run(capsys, "simulate", "--model", "pedestrian_crossing", "--ticks", "7", "--seed", "2")
    assert again == out.read_text()


def test_simulated_heart_trace_checks(capsys, tmp_path):
    out = tmp_path / "heart.csv"
    run(capsys, "simulate", "--model", "heart", "--ticks", "3000", "--out", str(out))
    code, text, _ = run(
        capsys,
        "check",
        "--dialect",
        "stl",
        "--dt",
        "0.001",
        "--formula",
        "A_EGM >= 80 -> F[0.180,0.240] (V_EGM >= 80)",
        "--trace",
        str(out),
        "--json",
    )
    verdicts = json.loads(text)["verdicts"]
    assert set(verdicts) <= {"True", "Inconclusive"} and verdicts[0] == "True"


def test_table(capsys):
    code, out, _ = run(capsys, "table")
    assert code == 0
    assert "27/27 verdicts as expected" in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "sstl", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0 and "verify" in proc.stdout
