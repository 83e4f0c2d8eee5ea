import json
import subprocess
import sys

import pytest

from lamkit.cli import main
from lamkit.delta import sample_delta
from lamkit.serialize import delta_to_json, srs_to_json, trace_to_json
from lamkit.cbn import left_trace
from lamkit.notation import parse_term

X = r"(\x1. x1 x1) ((\x. x) #c)"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out.strip(), err.strip()


@pytest.fixture
def delta_file(tmp_path):
    p = tmp_path / "delta.json"
    p.write_text(json.dumps(delta_to_json(sample_delta(3))))
    return str(p)


def test_parse_styles(capsys):
    assert run(capsys, "parse", r"\x.x")[:2] == (0, r"\x. x")
    assert run(capsys, "parse", "--style", "debruijn", r"\x. \y. x")[1] == r"\. \. 1"
    code, out, _ = run(capsys, "parse", "--json", "#c")
    assert json.loads(out) == {"ct": "c"}


def test_parse_error_exit_code(capsys):
    code, _, err = run(capsys, "parse", r"\x")
    assert code == 2
    assert "line 1, column 3" in err


def test_reduce(capsys):
    assert run(capsys, "reduce", X)[:2] == (0, "#c #c")
    code, out, err = run(capsys, "reduce", "--max-steps", "1", X)
    assert code == 1 and "stopped" in err
    code, out, _ = run(capsys, "reduce", "--json", X)
    obj = json.loads(out)
    assert obj["steps"] == 3 and obj["stopped"] is True


def test_reduce_with_delta(capsys, delta_file):
    assert run(capsys, "reduce", "--delta", delta_file, "#succ (#succ #num:0)")[:2] == (0, "#num:2")


def test_trace(capsys):
    code, out, _ = run(capsys, "trace", X)
    assert code == 0
    assert out.splitlines()[1].strip().startswith("--beta@top-->")
    code, out, _ = run(capsys, "trace", "--json", X)
    assert json.loads(out) == trace_to_json(left_trace(parse_term(X)))


def test_cdev(capsys):
    assert run(capsys, "cdev", X)[:2] == (0, "#c #c")
    obj = json.loads(run(capsys, "cdev", "--json", X)[1])
    assert obj["derivation"]["label"] == 3


def test_join(capsys):
    code, out, _ = run(capsys, "join", X, r"((\x. x) #c) ((\x. x) #c)", r"(\x1. x1 x1) #c")
    assert code == 0 and out.splitlines()[0] == "join: #c #c"
    code, _, err = run(capsys, "join", X, "#d", "#c #c")
    assert code == 1 and "not reachable" in err


def test_join_cbv(capsys):
    code, out, _ = run(capsys, "join", "--calculus", "cbv", X, r"(\x1. x1 x1) #c", r"(\x1. x1 x1) #c")
    assert code == 0 and out.splitlines()[0] == "join: #c #c"


def test_standardize(capsys, tmp_path):
    code, out, _ = run(capsys, "standardize", X, "#c #c")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == X and lines[-1] == "#c #c"
    p = tmp_path / "trace.json"
    p.write_text(json.dumps(trace_to_json(left_trace(parse_term(X)))))
    code, out, _ = run(capsys, "standardize", "--json", "--trace-file", str(p))
    assert code == 0 and len(json.loads(out)["terms"]) == 4
    assert run(capsys, "standardize", X)[0] == 2


def test_check_srs(capsys, tmp_path):
    assert run(capsys, "check-srs", X, r"((\x. x) #c) ((\x. x) #c)")[:2] == (0, "standard")
    assert run(capsys, "check-srs", "#c #c", "x")[:2] == (1, "not standard")
    p = tmp_path / "srs.json"
    p.write_text(json.dumps(srs_to_json([parse_term("x")])))
    assert run(capsys, "check-srs", "--file", str(p))[0] == 0
    assert run(capsys, "check-srs")[0] == 2


def test_nbe(capsys):
    assert run(capsys, "nbe", r"\x. (\y. y) x")[:2] == (0, r"\x. x")
    assert run(capsys, "nbe", "--fuel", "50", r"(\x. x x) (\x. x x)")[:2] == (1, "indeterminate")
    assert run(capsys, "nbe", "--calculus", "cbv", "x")[0] == 2


def test_enc_dec(capsys):
    code, out, _ = run(capsys, "enc", r"(\x. x) y")
    assert code == 0 and out == r"#ctapp (#ctlm \x. x) y"
    assert run(capsys, "dec", out)[:2] == (0, r"(\x. x) y")
    assert run(capsys, "dec", "#ctapp x")[:2] == (1, "not an encoding")
    assert run(capsys, "enc", "#ctapp")[0] == 2


def test_adequacy_check(capsys, delta_file):
    code, out, _ = run(capsys, "adequacy-check", r"(\x. x) y")
    assert code == 0 and out.startswith("confirmed")
    assert run(capsys, "adequacy-check", "--delta", delta_file, "#succ #num:0", "#num:1")[0] == 0
    assert run(capsys, "adequacy-check", "x")[0] == 1
    assert run(capsys, "adequacy-check", r"(\x. x) y", "z")[0] == 2


def test_suite_commands(capsys):
    code, out, _ = run(capsys, "suite", "--list")
    assert code == 0 and "diamond-cbn" in out
    code, out, _ = run(capsys, "suite", "operators", "--max-nodes", "3")
    assert code == 0 and out.startswith("PASS operators")
    code, out, _ = run(capsys, "suite", "--json", "commute", "--seed", "3")
    rep = json.loads(out)[0]
    assert rep["suite"] == "commute" and rep["passed"] and rep["failures"] == []
    assert run(capsys, "suite", "nope")[0] == 2
    assert run(capsys, "suite")[0] == 2


def test_bad_inputs(capsys, tmp_path):
    assert run(capsys, "reduce", "--delta", str(tmp_path / "missing.json"), "x")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text('[{"left": "a", "right": "b", "result": {"app": [{"ct": "a"}, {"ct": "b"}]}}]')
    assert run(capsys, "reduce", "--calculus", "cbv", "--delta", str(bad), "x")[0] == 2
    with pytest.raises(SystemExit) as info:
        main(["reduce"])
    assert info.value.code == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "lamkit", "parse", r"\x. x"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == r"\x. x"
