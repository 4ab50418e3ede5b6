import io
import json

import numpy as np
import pandas as pd
import pytest

import main
from spectral import codec


def run(capsys, *argv):
    code = main.main(list(argv))
    return code, capsys.readouterr().out


def test_zeros_fourth_roots(capsys):
    code, out = run(capsys, "zeros", "--alpha-const", "0", "--n", "4", "--beta", "[1, 0]")
    assert code == 0
    zeros = np.array([complex(*z) for z in json.loads(out)["zeros"]])
    np.testing.assert_allclose(zeros, [1, 1j, -1, -1j], atol=1e-12)
    assert json.loads(out)["coefficients"] == [[-1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [1.0, 0.0]]


def test_zeros_from_file_as_csv(capsys, tmp_path):
    path = tmp_path / "alphas.json"
    path.write_text("[[0.5, 0]]")
    code, out = run(capsys, "zeros", "--alphas", str(path), "--beta", "1", "--format", "csv")
    assert code == 0
    frame = pd.read_csv(io.StringIO(out))
    assert list(frame.columns) == ["index", "re", "im", "arg"]
    np.testing.assert_allclose(frame["re"], [1, -1], atol=1e-12)


def test_zeros_rotated_family(capsys):
    lam, n = np.exp(0.3j), 5
    beta = codec.dumps(codec.encode_complex(np.conj(lam) ** n))
    code, out = run(capsys, "zeros", "--alpha-const", "0", "--n", str(n), "--beta", beta)
    assert code == 0
    zeros = np.array([complex(*z) for z in json.loads(out)["zeros"]])
    np.testing.assert_allclose(zeros**n, lam**n, atol=1e-12)


def test_zeros_bad_input_exits_2(capsys):
    assert main.main(["zeros", "--alpha-const", "1+2j", "--n", "3"]) == 2
    assert main.main(["zeros", "--alpha-const", "[1.5, 0]", "--n", "3"]) == 2
    assert main.main(["zeros", "--alpha-const", "0"]) == 2


def test_unknown_flag_exits_2():
    with pytest.raises(SystemExit) as info:
        main.main(["verify", "--theorem", "9.9"])
    assert info.value.code == 2


def test_verify_is_deterministic(capsys):
    argv = ["verify", "--theorem", "1.3", "--trials", "8", "--seed", "7", "--n-max", "8"]
    code, first = run(capsys, *argv)
    assert code == 0
    _, second = run(capsys, *argv)
    assert first == second
    report = json.loads(first)
    assert report["theorem"] == "1.3" and report["seed"] == 7 and report["failures"] == []


def test_verify_zero_trials(capsys):
    code, out = run(capsys, "verify", "--theorem", "1.4", "--trials", "0")
    assert code == 0
    assert json.loads(out)["trials"] == 0


def test_verify_printed_lambda_fails_with_witness(capsys):
    code, out = run(
        capsys, "verify", "--theorem", "1.4", "--trials", "20", "--seed", "4", "--n-min", "2", "--n-max", "6",
        "--lambda-rule", "printed",
    )
    assert code == 1
    failure = json.loads(out)["failures"][0]
    assert "word" in failure["instance"] and "reason" in failure["witness"]


def test_verify_section_2(capsys, tmp_path):
    out = tmp_path / "report.json"
    code, stdout = run(capsys, "verify", "--theorem", "2.x", "--trials", "2", "--n-max", "5", "--out", str(out))
    assert code == 0 and stdout == ""
    assert json.loads(out.read_text())["theorem"] == "2.x"


def test_verify_bad_config_exits_2():
    assert main.main(["verify", "--theorem", "1.2", "--n-min", "5", "--n-max", "3"]) == 2


def test_common_zero_rotated_family(capsys):
    code, out = run(capsys, "common-zero", "--lambda", "[0.955336489125606, 0.29552020666134]", "--alpha-const", "0", "--n-max", "6")
    assert code == 0
    data = json.loads(out)
    lam = np.exp(0.3j)
    betas = np.array([complex(*b) for b in data["betas"]])
    np.testing.assert_allclose(betas, np.conj(lam) ** np.arange(1, 7), atol=1e-12)
    assert data["max_residual"] <= 1e-9


def test_common_zero_at_one(capsys):
    code, out = run(capsys, "common-zero", "--lambda", "[1, 0]", "--alpha-const", "0", "--n-max", "4")
    assert code == 0
    np.testing.assert_allclose(json.loads(out)["betas"], [[1, 0]] * 4, atol=1e-15)


def test_common_zero_random_file(capsys, tmp_path):
    rng = np.random.default_rng(3)
    word = 0.8 * np.sqrt(rng.uniform(size=9)) * np.exp(2j * np.pi * rng.uniform(size=9))
    path = tmp_path / "alphas.json"
    path.write_text(codec.dumps(codec.encode_array(word)))
    code, out = run(capsys, "common-zero", "--lambda", "[0, 1]", "--alphas", str(path), "--n-max", "10")
    assert code == 0
    assert all(r <= 1e-9 for r in json.loads(out)["residuals"])


def test_common_zero_off_circle_exits_2():
    assert main.main(["common-zero", "--lambda", "[2, 0]", "--alpha-const", "0"]) == 2


def test_schur_two_atoms(capsys):
    code, out = run(capsys, "schur", "--alpha-const", "0", "--n", "2", "--beta", "[1, 0]", "--grid", "20")
    assert code == 0
    frame = pd.read_csv(io.StringIO(out))
    assert list(frame.columns) == ["re", "im", "ReF", "ImF", "Ref", "Imf"]
    np.testing.assert_allclose(frame["Ref"], frame["re"], atol=1e-10)
    np.testing.assert_allclose(frame["Imf"], frame["im"], atol=1e-10)
    assert frame.loc[0, "ReF"] == pytest.approx(1) and frame.loc[0, "ImF"] == pytest.approx(0)


def test_schur_values_lie_in_the_disk(capsys):
    code, out = run(capsys, "schur", "--alpha-const", "[0.3, 0.4]", "--n", "6", "--beta", "[0, 1]", "--grid", "30")
    assert code == 0
    frame = pd.read_csv(io.StringIO(out))
    assert np.all(np.hypot(frame["Ref"], frame["Imf"]) < 1)
    assert np.all(frame["ReF"] > 0)
