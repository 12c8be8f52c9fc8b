import json
from importlib import resources

import jsonschema
import pytest

from mp2newforms.cli import main


@pytest.fixture(scope="module")
def schema():
    text = resources.files("mp2newforms").joinpath("schema/report_v1.json").read_text()
    return json.loads(text)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_dims_table(capsys, schema):
    code, out, _ = run(capsys, "table", "dims", "--repr", "ps:0:0", "--m-max", "3")
    assert code == 0
    data = json.loads(out)
    jsonschema.validate(data, schema)
    assert [r[1] for r in data["rows"]] == [1, 2, 4, 6]


def test_dims_table_csv_and_md(capsys):
    _, out, _ = run(capsys, "table", "dims", "--repr", "even:1", "--m-max", "5", "--format", "csv")
    assert out.splitlines() == ["m,dim", "0,1", "1,1", "2,2", "3,2", "4,3", "5,3"]
    _, out, _ = run(capsys, "table", "dims", "--repr", "even:1", "--m-max", "1", "--format", "md")
    assert out == "| m | dim |\n|---|---|\n| 0 | 1 |\n| 1 | 1 |\n"


def test_newform_table_steinberg_both_ramified(capsys, schema):
    code, out, _ = run(capsys, "table", "newforms", "--repr", "st:varpi", "--p", "5")
    data = json.loads(out)
    jsonschema.validate(data, schema)
    assert [r[1] for r in data["rows"]] == [2, 1]


def test_conductor_table_even_weil(capsys, schema):
    from mp2newforms.characters import UnitCharacter, chi_from_squareclass
    from mp2newforms.exact import SquareClass

    for cls in SquareClass:
        code, out, _ = run(capsys, "table", "conductors", "--repr", f"even:{cls.value}", "--p", "5")
        data = json.loads(out)
        jsonschema.validate(data, schema)
        chi = chi_from_squareclass(5, cls).unit_part()
        for label, _, cond in data["rows"]:
            eta = UnitCharacter(5, *map(int, label.split(":")))
            if eta.sign() != chi.sign():
                assert cond == "inf"
            else:
                assert cond == 2 * (eta * chi).conductor() + chi.conductor()


def test_conductor_command(capsys):
    code, out, _ = run(capsys, "conductor", "--repr", "sc:1:2:1:+1", "--p", "3")
    data = json.loads(out)
    assert code == 0 and data["conductor_min"] == 3 and data["conductor"] == 3


def test_weil_oracle_command(capsys):
    code, out, _ = run(capsys, "oracle", "weil", "--p", "3", "--eps", "0", "--chi", "varpi", "--eta-conductor", "1",
                       "--eta-exp", "1", "--m", "4")
    assert code == 0
    assert json.loads(out) == {"dim_oracle": 2, "dim_formula": 2, "match": True}


def test_coset_oracle_command(capsys):
    code, out, _ = run(capsys, "oracle", "cosets", "--p", "3", "--m", "2")
    data = json.loads(out)
    assert code == 0 and data["count"] == 4 and data["verified"]
    assert data["reps"]["0"] == ["1", "w", "nop(3)", "nop(6)"]


def test_gauss_eval(capsys):
    code, out, _ = run(capsys, "gauss", "eval", "--variant", "g", "--p", "3", "--chi", "1:1", "--psi", "1")
    data = json.loads(out)
    assert code == 0 and data["mag_sq"] == "1/3" and data["zero"] is False
    chi = json.dumps({"kind": "unit", "p": 3, "level": 0, "exponent": 0})
    code, out, _ = run(capsys, "gauss", "eval", "--variant", "h", "--chi", chi, "--psi", "0")
    assert json.loads(out)["mag_sq"] == "4/9"


@pytest.mark.parametrize("suite", ["gauss", "hilbert", "cosets", "theta", "rs-sum", "weil"])
def test_check_suites_pass_and_validate(capsys, schema, suite):
    code, out, _ = run(capsys, "check", suite, "--p", "3", "--grid", "small")
    data = json.loads(out)
    jsonschema.validate(data, schema)
    assert code == 0
    assert data["summary"]["failed"] == 0 and data["summary"]["total"] > 0
    keys = [c["key"] for c in data["cases"]]
    assert keys == sorted(keys)


def test_check_sampled_suites_record_seed(capsys, schema):
    code, out, _ = run(capsys, "check", "cocycle", "--p", "5", "--samples", "200", "--seed", "9")
    data = json.loads(out)
    jsonschema.validate(data, schema)
    assert code == 0 and data["config"]["seed"] == 9 and data["config"]["samples"] == 200


def test_check_cosets_single_level(capsys):
    code, out, _ = run(capsys, "check", "cosets", "--p", "3", "--m", "2")
    data = json.loads(out)
    assert code == 0 and len(data["cases"]) == 1 and data["cases"][0]["actual"]["count"] == 4


def test_theta_rows_include_documented_exception(capsys):
    code, out, _ = run(capsys, "check", "theta", "--grid", "small")
    data = json.loads(out)
    assert code == 0
    exceptions = [c for c in data["cases"] if c["inputs"]["exception"]]
    assert exceptions and all(not c["actual"] and c["pass"] for c in exceptions)
    assert {"repr", "c_eps_1", "theta_conductor", "match", "exception"} <= set(data["cases"][0]["inputs"])
    assert data["notes"] == {"wd_composite_preserves_conductor": False}


def test_byte_determinism(capsys, monkeypatch):
    _, first, _ = run(capsys, "check", "rs-sum", "--grid", "small")
    monkeypatch.setenv("MP2_THREADS", "2")
    _, second, _ = run(capsys, "check", "rs-sum", "--grid", "small")
    assert first == second
    _, a, _ = run(capsys, "table", "conductors", "--repr", "ps:1:1:1/2", "--format", "csv")
    _, b, _ = run(capsys, "table", "conductors", "--repr", "ps:1:1:1/2", "--format", "csv")
    assert a == b


def test_timing_is_opt_in(capsys):
    _, out, _ = run(capsys, "check", "hilbert", "--p", "3")
    assert "elapsed" not in json.loads(out)
    _, out, _ = run(capsys, "check", "hilbert", "--p", "3", "--timing")
    assert "elapsed" in json.loads(out)


@pytest.mark.parametrize("argv", [
    ["table", "dims", "--repr", "bogus:1"],
    ["table", "dims", "--repr", "ps:0:0:1/2:1/2"],
    ["conductor", "--repr", "sc:0:1:1:+1"],
    ["table", "dims", "--repr", "ps:0:0", "--eta", "x"],
    ["check", "gauss", "--p", "4"],
    ["check", "gauss", "--N", "2"],
    ["check", "gauss", "--grid", "huge"],
])
def test_invalid_input_exit_code(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("error:")


def test_unknown_suite_rejected_by_parser(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["check", "nonsense"])
    assert exc.value.code == 2


def test_resource_limit_exit_code(capsys, schema):
    code, out, _ = run(capsys, "check", "cosets", "--p", "5", "--m", "4")
    assert code == 3
    data = json.loads(out)
    jsonschema.validate(data, schema)
    assert data["summary"]["truncated"] is True
    code, _, _ = run(capsys, "oracle", "cosets", "--p", "7", "--m", "4")
    assert code == 3


def test_gauss_eval_irrational_magnitude(capsys):
    code, out, _ = run(capsys, "gauss", "eval", "--variant", "h", "--p", "5", "--chi", "1:2", "--psi", "1")
    data = json.loads(out)
    assert code == 0 and isinstance(data["mag_sq"], dict) and not data["zero"]
