import json

from yangian_eval.cli import main


def test_usage_errors(capsys):
    assert main(["verify", "--n", "1"]) == 2
    assert main(["verify", "--suite", "minimalistic", "--n", "2"]) == 2
    assert main(["verify", "--suite", "nope"]) == 2
    assert main(["verify", "--order", "3", "--rsmax", "3"]) == 2
    assert main(["verify", "--param", "hbar=0"]) == 2
    assert main(["bogus"]) == 2
    capsys.readouterr()


def test_expand_not_in_paper(capsys):
    assert main(["expand", "--gen", "H", "--i", "0", "--r", "1"]) == 1
    assert "not-in-paper" in capsys.readouterr().err


def test_expand_template(capsys):
    assert main(["expand", "--gen", "T", "--i", "1", "--j", "2", "--r", "2", "--format", "template"]) == 0
    out = capsys.readouterr().out.strip().splitlines()
    assert out == ["coef=hbar weight=h_0((z1+1)*c) :: sum[x1,z1>=0] E[1,x1]t^(-z1-1) E[x1,2]t^(z1+1)"]


def test_expand_matrix_is_deterministic(capsys):
    args = ["expand", "--gen", "x+", "--i", "1", "--r", "3", "--order", "6", "--format", "matrix",
            "--depth", "1", "--seed", "3"]
    assert main(args) == 0
    first = capsys.readouterr().out
    assert main(args) == 0
    assert capsys.readouterr().out == first
    assert "## block depth 1 -> depth 1 (9 x 9)" in first


def test_verify_writes_report(tmp_path, capsys):
    out = tmp_path / "report.json"
    summary = tmp_path / "summary.txt"
    code = main(["verify", "--suite", "ga,omega", "--n", "3", "--depth", "1", "--rmax", "2", "--trials", "1",
                 "--output", str(out), "--summary", str(summary)])
    assert code == 0
    data = json.loads(out.read_text())
    assert data["config"]["suites"] == ["ga", "omega"]
    assert "TOTAL" in summary.read_text()
    capsys.readouterr()
