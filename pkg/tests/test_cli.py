import io
import json
import sys

import pytest

from hqe.cli import main
from hqe.decomp import Piece
from hqe.field import Field


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_eval(capsys):
    code, out, _ = run_cli(capsys, "eval", "t * t^-1")
    assert code == 0
    assert out.strip() == "1 (v=0)"


def test_eval_json_reparses(capsys):
    code, out, _ = run_cli(capsys, "--json", "eval", "(1 + t)^2")
    data = json.loads(out)
    field = Field.laurent()
    assert field.parse(data["value"]) == field.parse("1 + 2*t + t^2")


def test_rv_command(capsys):
    code, out, _ = run_cli(capsys, "rv", "3*t^2 + t^3", "--order", "1")
    assert code == 0
    assert out.strip() == "rv[1]{v=2; unit=3,1}"


def test_lift_command(capsys):
    code, out, _ = run_cli(capsys, "lift", "--poly", "x^2 - (1 + t)", "--from", "1", "--sep", "0")
    assert code == 0
    assert "iterations" in out and "root" in out


def test_decompose_json_roundtrip(capsys):
    code, out, _ = run_cli(capsys, "--json", "decompose", "--poly", "x^2 - t^2")
    assert code == 0
    data = json.loads(out)
    field = Field.laurent()
    pieces = [Piece.from_json(field, p) for p in data["pieces"]]
    assert len(pieces) == 5
    t = field.uniformizer()
    assert sum(1 for p in pieces if p.contains(t)) == 1


def test_decide_commands(capsys):
    code, out, _ = run_cli(capsys, "decide", "EX y:K. y^2 - t^2 = 0")
    assert (code, out.strip()) == (0, "TRUE")
    code, out, _ = run_cli(capsys, "decide", "EX y:K. y^2 - 2*t^2 = 0")
    assert (code, out.strip()) == (0, "FALSE")
    code, out, _ = run_cli(capsys, "--field", "padic", "--p", "2", "decide", "EX y:K. y^2 = 17")
    assert (code, out.strip()) == (0, "TRUE")


def test_qe_command(capsys):
    code, out, _ = run_cli(capsys, "qe", "EX y:K. y^2 = t^2")
    assert code == 0
    assert out.strip() == "true"


def test_normal_form_command(capsys):
    code, out, _ = run_cli(capsys, "normal-form", "x^2 = t^2", "--var", "x")
    assert code == 0
    assert "D:" in out and "rv[0]" in out


def test_exit_codes(capsys):
    code, _, err = run_cli(capsys, "decide", "EX y:K. y^2 = ")
    assert code == 1
    code, _, err = run_cli(capsys, "qe", "EX y:K. y^2 = c")
    assert code == 3
    code, _, err = run_cli(capsys, "lift", "--poly", "x^2 - t", "--from", "1")
    assert code == 4
    code, _, err = run_cli(capsys, "eval", "O(t^5)^-1")
    assert code == 2


def test_deterministic_output(capsys):
    a = run_cli(capsys, "--json", "decompose", "--poly", "x^3 - t*x")
    b = run_cli(capsys, "--json", "decompose", "--poly", "x^3 - t*x")
    assert a == b


def test_selftest_single_suite(capsys):
    code, out, _ = run_cli(capsys, "selftest", "--suite", "linear-elimination", "--seed", "1")
    assert code == 0
    assert out.startswith("PASS linear-elimination")


def test_rv_decompose_json_roundtrip(capsys):
    code, out, _ = run_cli(capsys, "--json", "decompose", "--poly", "x^2 - t^2", "--rv-order", "0")
    assert code == 0
    from hqe.decomp import RVDecomposition

    field = Field.laurent()
    dec = RVDecomposition.from_json(field, json.loads(out))
    t = field.uniformizer()
    cell = dec.cell_of(t + t**3)
    from hqe.rv import rv
    from hqe.poly import Poly

    f = Poly(field, [-(t * t), field.zero(), field.one()])
    assert cell.pieces[0].eval_rv(t + t**3, 0) == rv(f(t + t**3), 0)


def test_selftest_stdout_deterministic(capsys):
    a = run_cli(capsys, "selftest", "--suite", "rv-equivalence", "--seed", "5")
    b = run_cli(capsys, "selftest", "--suite", "rv-equivalence", "--seed", "5")
    assert a[0] == b[0] == 0
    assert a[1] == b[1]
