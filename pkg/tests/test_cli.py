import json

import pytest

from qci.algebra import homogeneous, sigma
from qci.cli import RunConfig, main, render, run
from qci.errors import ConfigError
from qci.modules import cyclic_quotient, regular_module
from qci.scalars import PrimeField


def run_cli(capsys, *args):
    code = main(list(args))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_lemmas_exit_zero(capsys):
    code, out, _ = run_cli(capsys, "verify-lemmas", "--n", "3", "--a", "2", "--field", "p:5", "--trials", "100", "--seed", "7")
    assert code == 0
    rep = json.loads(out)
    assert rep["schema_version"] == 1 and rep["config"]["seed"] == 7
    assert {c["id"] for c in rep["checks"]} >= {"lincomb-i", "lincomb-ii", "openset", "factoring-diagrams"}


def test_missing_root_is_config_error(capsys):
    code, _, err = run_cli(capsys, "verify-lemmas", "--field", "p:7", "--a", "4")
    assert code == 2 and "4 does not divide 6" in err


def test_n_zero_is_config_error(capsys):
    code, _, err = run_cli(capsys, "verify-lemmas", "--n", "0")
    assert code == 2 and "--n" in err


def test_unknown_command(capsys):
    code, _, _ = run_cli(capsys, "frobnicate")
    assert code == 2


def test_sweep_needs_even_n(capsys):
    code, _, _ = run_cli(capsys, "sweep-membership", "--n", "3")
    assert code == 2


def test_sweep_n2_all_outside(capsys):
    code, out, _ = run_cli(capsys, "sweep-membership", "--n", "2", "--a", "3", "--trials", "30", "--seed", "2")
    assert code == 0
    rows = json.loads(out)["rows"]
    assert all(not r["member"] for r in rows if r["alpha"][0] != "0")


def test_sweep_csv(capsys):
    code, out, _ = run_cli(capsys, "sweep-membership", "--n", "4", "--trials", "5", "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "alpha,member,lambda_coefficient,degree" and len(lines) == 6


def test_ghost_with_module_file(capsys, tmp_path):
    p = homogeneous(4, 2, PrimeField(5), q=-1)
    path = tmp_path / "m.json"
    path.write_text(json.dumps(cyclic_quotient(p, sigma(p, [1, 2, 3, 4])).to_dict()))
    code, out, _ = run_cli(capsys, "ghost", "--n", "4", "--a", "2", "--module", str(path), "--trials", "10")
    assert code == 0 and json.loads(out)["lower_bound"] == 5


def test_ghost_projective_module(capsys, tmp_path):
    p = homogeneous(2, 2, PrimeField(5), q=-1)
    path = tmp_path / "m.json"
    path.write_text(json.dumps(regular_module(p).to_dict()))
    code, out, _ = run_cli(capsys, "ghost", "--n", "2", "--module", str(path), "--trials", "10")
    rep = json.loads(out)
    assert code == 0 and rep["witness"]["composition_stably_nonzero"]


def test_ghost_bad_module_file(capsys, tmp_path):
    path = tmp_path / "m.json"
    path.write_text("{not json")
    code, _, _ = run_cli(capsys, "ghost", "--module", str(path))
    assert code == 2


def test_ghost_wrong_presentation(capsys, tmp_path):
    p = homogeneous(2, 3, PrimeField(7))
    path = tmp_path / "m.json"
    path.write_text(json.dumps(regular_module(p).to_dict()))
    code, _, _ = run_cli(capsys, "ghost", "--n", "2", "--a", "2", "--module", str(path))
    assert code == 2


def test_upper_refuses_prime_field(capsys):
    code, _, _ = run_cli(capsys, "upper", "--n", "1", "--field", "p:5")
    assert code == 2


def test_upper_n1(capsys):
    code, out, _ = run_cli(capsys, "upper", "--n", "1", "--a", "2")
    rep = json.loads(out)
    assert code == 0 and rep["bracket"] == [2, 2]
    up = rep["upper"]
    assert {"dim_M", "dim_End", "graded", "simples_one_dimensional", "gldim", "bound_2n", "satisfied"} <= set(up)


def test_tower_exponents(capsys):
    code, out, _ = run_cli(capsys, "tower", "--exponents", "2,3,2,3", "--field", "p:7")
    assert code == 0 and json.loads(out)["checks"][0]["passed"]


def test_tower_explicit_commutators(capsys):
    code, _, _ = run_cli(capsys, "tower", "--exponents", "2,2,2", "--commutators", "2,3,4", "--field", "p:5")
    assert code == 0


def test_periodicity(capsys):
    code, out, _ = run_cli(capsys, "periodicity", "--n", "2", "--a", "3", "--trials", "10")
    assert code == 0 and json.loads(out)["passed"]


def test_window_flag(capsys):
    code, _, _ = run_cli(capsys, "ghost", "--window", "1,0")
    assert code == 2
    code, _, _ = run_cli(capsys, "ghost", "--window", "x")
    assert code == 2


def test_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("QCI_SEED", "13")
    code, out, _ = run_cli(capsys, "verify-lemmas", "--trials", "3")
    assert code == 0 and json.loads(out)["config"]["seed"] == 13


def test_out_file(capsys, tmp_path):
    path = tmp_path / "r.json"
    code, out, _ = run_cli(capsys, "verify-lemmas", "--trials", "3", "--out", str(path))
    assert code == 0 and out == "" and json.loads(path.read_text())["passed"]


def test_config_validation():
    with pytest.raises(ConfigError):
        RunConfig("verify-lemmas", trials=-1).validate()
    with pytest.raises(ConfigError):
        RunConfig("nope").validate()


def test_render_is_stable():
    rep, code = run(RunConfig("verify-lemmas", n=2, trials=5, seed=1))
    assert code == 0
    assert render(rep, "json") == render(json.loads(render(rep, "json")), "json")
