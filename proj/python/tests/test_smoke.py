import os
import pathlib

import pytest

import loopm

CORPUS = pathlib.Path(os.environ.get("LOOPM_CORPUS_DIR", pathlib.Path(__file__).resolve().parents[2] / "corpus"))


def load(name):
    return loopm.Program.parse((CORPUS / f"{name}.prob").read_text())


def test_closed_forms():
    walk = load("walk2d")
    assert walk.parameters == ["p"]
    assert str(loopm.closed_form(walk, "E(x**2)")) == "2*n*(1 - p)"
    assert loopm.closed_form(walk, "E(y**2)").at(3, {"p": "1/3"}) == "2"


def test_invariants():
    assert loopm.invariants(load("geometric"), ["E(count)", "E(stop)"]) == ["E(count) - 2*E(stop) = 0"]


def test_sensitivity():
    cf = loopm.sensitivity(load("walk2d"), "V(x)", "p")
    assert str(cf) == "-2*n"


def test_unsolvable():
    prog = load("squares_coupled")
    assert prog.defective() == {"x", "y"}
    [cand] = loopm.combinations(prog, 1)
    assert cand["combination"] == "x + y"
    assert cand["lambda"] == "2"
    assert loopm.Program.parse(cand["loop"]).variables[0] == "s"


def test_errors_carry_kind():
    with pytest.raises(loopm.AnalysisError) as info:
        loopm.closed_form(load("nonlinear_cycle"), "E(u)")
    assert info.value.kind == "DefectiveDependency"
    with pytest.raises(loopm.AnalysisError):
        loopm.Program.parse("x = \n")


def test_simulation_is_reproducible():
    prog = load("geometric")
    a = loopm.simulate(prog, "E(count)", 10, samples=2000, seed=1)
    b = loopm.simulate(prog, "E(count)", 10, samples=2000, seed=1)
    assert a == b
    exact = loopm.closed_form(prog, "E(count)").at_float(10)
    assert abs(a[0] - exact) < 4 * a[1]


def test_cli():
    code, out, err = loopm.run_cli([str(CORPUS / "geometric.prob"), "--goals", "E(count)", "--after_loop"])
    assert code == 0
    assert out == "E(count) [after loop] = 2\n"
    assert err == ""
