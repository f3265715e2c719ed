import json
import subprocess
import sys

import pytest

from thetak.cli import main
from thetak.comodule import fixture_names
from thetak.expr import evaluate


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out.strip()


def test_einvariant(capsys):
    assert run(capsys, "einvariant", "2", "--p", "2") == (0, "order 8, generator Theta[1]")
    assert run(capsys, "einvariant", "1") == (0, "order 2, generator Theta[0]")
    assert run(capsys, "--p", "3", "einvariant", "2")[1].startswith("order 3,")


def test_apply(capsys):
    assert run(capsys, "apply", "q", "1") == (0, "0")
    assert run(capsys, "apply", "q", "w") == (0, "1/2*w - 1/2*w^2")
    assert run(capsys, "apply", "qtilde", "Theta1")[1] == str(evaluate("Theta1"))
    assert run(capsys, "apply", "chi", "w^2") == (0, "w^-2")
    assert run(capsys, "apply", "coproduct", "w") == (0, "w1*w2")
    assert run(capsys, "apply", "psi", "3", "w") == (0, "1/3*w")


def test_coaction(capsys):
    assert run(capsys, "coaction", "eta", "Q(x2)") == (0, "w*Q(x2) + w*Theta0*x2^2 - w*Theta0*x2 + Theta1")
    assert run(capsys, "coaction", "nu", "x4") == (0, "w^2*x4 + 2*Theta1")


def test_eval_theta_expand(capsys):
    assert run(capsys, "eval", "(1-w)/2", "at", "5") == (0, "-2")
    assert run(capsys, "theta", "1") == (0, "1/8 - 1/8*w^2")
    assert run(capsys, "expand", "(1-w^4)/16") == (0, "8*Theta[2] - 3*Theta[1]")
    assert run(capsys, "is-numerical", "(1-w)/4") == (0, "no: value -1/2 at 3")
    assert run(capsys, "is-numerical", "(1-w^2)/8") == (0, "yes")


@pytest.mark.parametrize("argv", [
    ["apply", "q", "Theta[1]"], ["apply", "psi", "5", "w^2 - Theta2"], ["apply", "coproduct", "Theta0"],
    ["coaction", "eta", "Q(Q(x2))"], ["theta", "3"], ["eval", "psi[3](w) + chi(w)"],
])
def test_json_values_reparse(capsys, argv):
    code, out = run(capsys, "--format", "json", *argv)
    assert code == 0
    data = json.loads(out)
    v = evaluate(data["value"])
    assert str(v) == data["value"]


def test_ko_and_comodule(capsys, tmp_path):
    code, out = run(capsys, "ko", "check-basis")
    assert code == 0 and "consistent candidates: literal-1" in out
    from thetak.comodule import shipped_fixture

    path = tmp_path / "weight1.json"
    path.write_text(json.dumps(shipped_fixture("weight1").to_json()))
    assert run(capsys, "comodule", "to-action", str(path)) == (0, str(pow(3, -1, 256)))
    assert run(capsys, "comodule", "invariants", str(path)) == (0, "128")


def test_verify_exit_codes(capsys):
    code, out = run(capsys, "verify", "einvariant")
    assert code == 0 and "FAIL" not in out
    code, out = run(capsys, "verify", "digits")
    assert code == 1 and "FAIL" in out
    code, out = run(capsys, "verify", "hopf", "--trials", "5", "--seed", "3", "--format", "json")
    again = run(capsys, "verify", "hopf", "--trials", "5", "--seed", "3", "--format", "json")[1]
    strip = lambda s: [(c["name"], c["passed"], c["detail"]) for c in json.loads(s)["checks"]]  # noqa: E731
    assert code == 0 and strip(out) == strip(again)


@pytest.mark.parametrize("argv", [["verify", "nope"], ["--bogus", "einvariant", "1"], ["frobnicate"]])
def test_usage_errors(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code != 0
    assert "usage:" in capsys.readouterr().err


def test_syntax_error_exit(capsys):
    assert main(["eval", "(1 - w"]) == 2
    assert "line 1, column 7" in capsys.readouterr().err


def test_env_default_prime(monkeypatch, capsys):
    monkeypatch.setenv("THETAK_DEFAULT_P", "3")
    assert run(capsys, "apply", "q", "w") == (0, "1/3*w - 1/3*w^3")


def test_console_script():
    out = subprocess.run([sys.executable, "-m", "thetak.cli", "apply", "q", "1"], capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.strip() == "0"
