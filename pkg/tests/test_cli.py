import json

import pytest

from rkhs_adjoint import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    return code, json.loads(out)


def test_solve_hardy(capsys):
    code, p = run_json(capsys, "solve", "--op", "Mz D Mz", "-N", "8")
    assert code == 0
    assert p["status"] == "unique" and p["identified"]["family"] == "hardy"
    assert p["normal_form"] == "1·Mz^2 D^1 + 1·Mz^1"
    assert p["pde"] == "dv k = w^2 dw k + w k"


def test_solve_h_alpha_with_param(capsys):
    code, p = run_json(capsys, "solve", "--op", "Mz D Mz - (1 - alpha) Mz", "--param", "alpha=2", "-N", "8")
    assert code == 0
    assert p["identified"] == {"family": "h_alpha", "scale": "1", "alpha": "2"}


def test_solve_dirichlet_pde(capsys):
    code, p = run_json(capsys, "solve", "--pde", "dv^2 k = w^2 dv dw k", "--pin", "c11=1", "-N", "8")
    assert code == 0
    assert p["identified"]["family"] == "dirichlet"
    assert p["normal_form"] is None


def test_solve_degenerate_exit_2(capsys):
    code, p = run_json(capsys, "solve", "--op", "Mz Mz", "-N", "8")
    assert code == 2 and p["status"] == "degenerate"


def test_solve_inconsistent_exit_2(capsys):
    code, p = run_json(capsys, "solve", "--op", "Mz D Mz", "--pin", "c00=1", "--pin", "c22=3", "-N", "4")
    assert code == 2 and p["status"] == "inconsistent"


def test_solve_text_report(capsys):
    code, out, _ = run(capsys, "solve", "--op", "Mz", "-N", "5")
    assert code == 0
    assert "status:       unique" in out
    assert "diagonal:     1, 1, 1/2, 1/6, 1/24, 1/120" in out
    assert "identified:   fock, scale 1" in out


def test_sweep(capsys):
    code, ps = run_json(capsys, "solve", "--op", "Mz D Mz - (1 - alpha) Mz", "--sweep", "alpha=1,2,3", "-N", "6")
    assert code == 0
    assert [p["identified"]["alpha"] for p in ps] == [None, "2", "3"]
    assert ps[0]["identified"]["family"] == "hardy"


@pytest.mark.parametrize("argv", [
    ["solve", "--op", "Mz D +"],
    ["solve", "--op", "Mz D Mz - (1 - alpha) Mz"],
    ["solve", "--op", "Mz", "-N", "1"],
    ["solve", "--op", "Mz", "--pin", "x=1"],
    ["solve", "--pde", "dv k = "],
    ["verify", "--family", "h_alpha", "--op", "Mz"],
    ["weights", "--weights", "1,0,2", "-N", "3"],
    ["weights", "--weights", "1,2", "-N", "5"],
    ["weights", "--weights", "n^2"],
])
def test_input_errors_exit_1(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 1
    assert err.startswith("error:")


def test_parse_error_has_position(capsys):
    _, _, err = run(capsys, "solve", "--op", "Mz D\n  Mz )")
    assert "line 2, column 6" in err


@pytest.mark.parametrize("family, op", [("hardy", "Mz D Mz"), ("fock", "Mz")])
def test_verify_matched(capsys, family, op):
    code, out = run_json(capsys, "verify", "--family", family, "--op", op, "-N", "12")
    assert code == 0
    assert out["pde_residual"] == "0" and out["adjoint"]["residual"] == "0"


def test_verify_mismatch(capsys):
    code, out = run_json(capsys, "verify", "--family", "hardy", "--op", "Mz", "-N", "12")
    assert code == 2
    assert out["adjoint"]["residual"] != "0"
    assert out["adjoint"]["first_violation"] == [1, 2]
    code, text, _ = run(capsys, "verify", "--family", "hardy", "--op", "Mz", "-N", "12")
    assert "first violation at (n, m) = (1, 2)" in text


def test_verify_pde_only(capsys):
    code, out = run_json(capsys, "verify", "--family", "dirichlet", "--pde", "dv^2 k = w^2 dv dw k")
    assert code == 0 and out["adjoint"] is None


def test_pde_command(capsys):
    for op, expected in [
        ("Mz D Mz", "dv k = w^2 dw k + w k"),
        ("Mz", "dv k = w k"),
        ("D Mz", "dv k = w dw k + k"),
    ]:
        code, out, _ = run(capsys, "pde", "--op", op)
        assert code == 0
        assert out.strip().splitlines()[-1] == expected


@pytest.mark.parametrize("args, family, alpha", [
    (["--weights", "n"], "hardy", None),
    (["--weights", "1"], "fock", None),
    (["--weights", "n+1"], "h_alpha", "2"),
])
def test_weights(capsys, args, family, alpha):
    code, out = run_json(capsys, "weights", *args, "-N", "16")
    assert code == 0
    assert out["identified"]["family"] == family
    assert out["identified"]["alpha"] == alpha
    if family == "fock":
        assert out["radius"]["infinite"]
    if family == "hardy":
        assert out["radius"]["radius"] == pytest.approx(1.0, abs=0.01)


def test_weights_file(tmp_path, capsys):
    f = tmp_path / "w.txt"
    f.write_text("# a_1 first\n" + "\n".join(str(n) for n in range(1, 9)) + "\n")
    code, out = run_json(capsys, "weights", "--weights-file", str(f), "-N", "8")
    assert code == 0 and out["identified"]["family"] == "hardy"


@pytest.mark.parametrize("op, params", [
    ("Mz D Mz", []),
    ("Mz", []),
    ("Mz D Mz - (1 - alpha) Mz", ["--param", "alpha=3/2"]),
])
def test_solve_json_round_trip(tmp_path, capsys, op, params):
    report = tmp_path / "report.json"
    code, _, _ = run(capsys, "solve", "--op", op, *params, "-N", "10", "--format", "json", "-o", str(report))
    assert code == 0
    code, out = run_json(capsys, "verify", "--kernel", str(report), "--op", op, *params, "-N", "10")
    assert code == 0
    assert out["pde_residual"] == "0" and out["adjoint"]["residual"] == "0"


def test_env_default_order(monkeypatch, capsys):
    monkeypatch.setenv(cli.ENV_ORDER, "5")
    _, p = run_json(capsys, "solve", "--op", "Mz")
    assert p["order"] == 5
    monkeypatch.setenv(cli.ENV_ORDER, "five")
    code, _, err = run(capsys, "solve", "--op", "Mz")
    assert code == 1 and cli.ENV_ORDER in err
