import json
import subprocess
import sys

import pytest

from tensordrazin.cli import main
from tensordrazin.example import example_A, example_B, example_C, example_D, expected
from tensordrazin.modified.generate import generate_free_instance
from tensordrazin.tensor import EinsteinTensor, identity, load_tensor, save_tensor, zero


@pytest.fixture
def quad(tmp_path):
    paths = []
    for name, T in zip("ABCD", (example_A(), example_B(), example_C(), example_D())):
        p = tmp_path / f"{name}.json"
        save_tensor(T, p)
        paths.append(str(p))
    return paths


def test_drazin_command(tmp_path, capsys):
    src, out = tmp_path / "a.json", tmp_path / "ad.json"
    save_tensor(example_A(), src)
    assert main(["drazin", str(src), "--out", str(out)]) == 0
    assert load_tensor(out) == expected("AD")
    assert "index: 1" in capsys.readouterr().out


def test_drazin_identity_and_nilpotent(tmp_path, capsys):
    p = tmp_path / "i.json"
    save_tensor(identity((2, 2)), p)
    assert main(["drazin", str(p), "--report", "structured"]) == 0
    rec = json.loads(capsys.readouterr().out)
    assert rec["index"] == 0
    save_tensor(EinsteinTensor([[0, 1], [0, 0]], (2,), (2,)), p)
    out = tmp_path / "n.json"
    assert main(["drazin", str(p), "--out", str(out)]) == 0
    assert load_tensor(out) == zero(((2,), (2,)))


def test_modified_thm33a(quad, tmp_path):
    out = tmp_path / "sd.json"
    assert main(["modified", *quad, "--formula", "thm33a", "--out", str(out)]) == 0
    assert load_tensor(out) == expected("SD")


def test_modified_float(quad, capsys):
    assert main(["modified", *quad, "--formula", "thm33a", "--domain", "float64"]) == 0
    assert "formula: thm33a" in capsys.readouterr().out


def test_modified_hypothesis_violation(tmp_path, capsys):
    from tensordrazin.modified.conditions import condition_holds
    from tensordrazin.modified.problem import derive
    for seed in range(50):
        p = generate_free_instance(seed, "singular")
        if not condition_holds(derive(p), "cond_SApiYAe_zero"):
            break
    paths = []
    for name in "ABCD":
        path = tmp_path / f"{name}.json"
        save_tensor(getattr(p, name), path)
        paths.append(str(path))
    assert main(["modified", *paths, "--formula", "thm31a"]) == 2
    assert "S∗A^π∗Y∗A^e ≠ 0" in capsys.readouterr().err


def test_modified_auto_zero_c(quad, tmp_path, capsys):
    save_tensor(zero(example_C().shape), quad[2])
    assert main(["modified", *quad]) == 0
    assert "formula: zero_update" in capsys.readouterr().out


def test_check_lists_thm33a(quad, capsys):
    assert main(["check", *quad]) == 0
    out = capsys.readouterr().out
    applicable = out.strip().splitlines()[-1]
    assert "thm33a" in applicable and applicable.endswith("direct")


def test_bad_input_exit_code(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    assert main(["drazin", str(p)]) == 1
    assert main(["drazin", str(tmp_path / "missing.json")]) == 1
    save_tensor(zero(((2,), (3,))), p)
    assert main(["drazin", str(p)]) == 1


def test_unknown_formula_exit(quad):
    assert main(["modified", *quad, "--formula", "nope"]) == 1


def test_example_command_reports_printed_erratum(capsys):
    code = main(["example"])
    out = capsys.readouterr()
    assert "36 + 36 + 36 + 36 entries verified, 1 mismatches" in out.out
    assert "DD[2, 1, 3, 2]" in out.err
    assert code == 3


def test_perturb_command(tmp_path, capsys):
    csv = tmp_path / "t.csv"
    args = ["perturb", "--trials", "1", "--epsilons", "10,1e-3", "--seed", "3", "--out", str(csv)]
    assert main(args) == 0
    first = capsys.readouterr().out
    assert main(args) == 0
    assert capsys.readouterr().out == first
    assert len(csv.read_text().splitlines()) == 1 + 2 * 2 * 2


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "tensordrazin", "--version"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.strip()
