import json

import pytest

from etanormal import cli, specfile
from test_specfile import SASAKIAN


@pytest.fixture
def heis(tmp_path):
    path = tmp_path / "h.mfd"
    path.write_text(SASAKIAN)
    return path


def test_validate_and_classify_pass(heis, tmp_path, capsys):
    assert cli.main(["validate", str(heis)]) == cli.EXIT_PASS
    out = tmp_path / "c.json"
    assert cli.main(["classify", str(heis), "--points", "20", "--json", str(out)]) == cli.EXIT_PASS
    doc = json.loads(out.read_text())
    assert "Sasakian" in doc["labels"]["classes"]
    assert doc["seed"] == 42 and len(doc["input_sha256"]) == 64
    assert "timings" not in doc


def test_timings_only_on_request(heis, tmp_path):
    out = tmp_path / "t.json"
    cli.main(["validate", str(heis), "--points", "10", "--timings", "--json", str(out)])
    assert "timings" in json.loads(out.read_text())


def test_perturbed_affinor_exits_one(heis):
    heis.write_text(SASAKIAN.replace("0, y, 0", "0, 1.2 * y, 0"))
    assert cli.main(["validate", str(heis), "--points", "10"]) == cli.EXIT_FAIL


def test_wrong_component_count_exits_two(heis, capsys):
    heis.write_text(SASAKIAN.replace("0, 0, 1\n\n[eta]", "0, 1\n\n[eta]"))
    assert cli.main(["validate", str(heis)]) == cli.EXIT_INPUT
    assert "entries" in capsys.readouterr().err


def test_missing_file_exits_two(tmp_path):
    assert cli.main(["validate", str(tmp_path / "nope.mfd")]) == cli.EXIT_INPUT


@pytest.mark.parametrize("suite", cli.SUITES)
def test_identity_suites_pass_on_sasakian(heis, suite):
    assert cli.main(["identities", str(heis), "--suite", suite, "--points", "20"]) == cli.EXIT_PASS


@pytest.mark.parametrize("args", [["heisenberg", "--n", "2", "--a", "1,0;0,-1"], ["alpha_sasakian", "--alpha", "-2"],
                                  ["para_cosymplectic", "--dim", "5"], ["para_kenmotsu"], ["para_sasakian"],
                                  ["kappa_mu", "--mu", "0.5"]])
def test_examples_round_trip_through_validate(args, tmp_path):
    path = tmp_path / "e.mfd"
    assert cli.main(["example", *args, "-o", str(path)]) == cli.EXIT_PASS
    spec = specfile.load(path)
    if args[0] in ("para_sasakian", "kappa_mu"):
        assert spec.certification["certified"] == "True"
    assert cli.main(["validate", str(path), "--points", "20"]) == cli.EXIT_PASS
    assert cli.main(["connection", str(path), "--points", "20"]) == cli.EXIT_PASS


def test_bileg_command(tmp_path):
    path = tmp_path / "p.mfd"
    cli.main(["example", "para_sasakian", "-o", str(path)])
    out = tmp_path / "b.json"
    assert cli.main(["bileg", str(path), "--points", "20", "--json", str(out)]) == cli.EXIT_PASS
    assert json.loads(out.read_text())["labels"]["flatness"] == "flat"


def test_bileg_rejects_acm_input(heis):
    assert cli.main(["bileg", str(heis)]) == cli.EXIT_INPUT


@pytest.mark.parametrize("args", [["heisenberg", "--a", "1,2;3,4", "--n", "2"], ["heisenberg", "--a", "x"],
                                  ["kappa_mu", "--n", "2"], ["heisenberg", "--dim", "4"]])
def test_example_input_errors(args):
    assert cli.main(["example", *args]) == cli.EXIT_INPUT


def test_json_is_deterministic(heis, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    cli.main(["identities", str(heis), "--points", "20", "--json", str(a)])
    cli.main(["identities", str(heis), "--points", "20", "--json", str(b)])
    assert a.read_bytes() == b.read_bytes()
