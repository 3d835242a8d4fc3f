import json
from fractions import Fraction
from pathlib import Path

import pytest

from main import main
from src.cli.parser import Command, parse_args
from src.errors import ParseError, UsageError
from src.orchestrator import EXIT_FAILURE, EXIT_OK, EXIT_USAGE, run

SCHEMAS = Path(__file__).resolve().parents[1] / "docs" / "schemas"


def _required(name):
    return set(json.loads((SCHEMAS / f"{name}.json").read_text())["required"])


def _run(argv, capsys):
    code = run(parse_args(argv))
    return code, capsys.readouterr().out


def test_parse_lpoly():
    config = parse_args(["lpoly", "--q", "5", "--D", "T^3+T"])
    assert config.command is Command.LPOLY
    assert str(config.D) == "T^3+T"
    assert config.budget >= 1 and config.threads >= 1


def test_parse_keeps_exact_sigma():
    config = parse_args(["bounds", "right-threshold", "--q", "5", "--sigma", "2"])
    assert config.sigma == Fraction(2)
    assert parse_args(["bounds", "right-threshold", "--q", "5", "--sigma", "2.5"]).sigma == 2.5


@pytest.mark.parametrize(
    "argv,flag",
    [
        (["field", "--q", "6"], "--q"),
        (["field", "--q", "2^100000000"], "--q"),
        (["field", "--q", "9", "--modulus", "T^2+2*T+1"], "--modulus"),
        (["bounds", "genus-cap", "--q", "9", "--s", "0"], "--B"),
        (["bounds", "genus-cap", "--q", "9", "--s", "0", "--B=-1"], "--B"),
        (["northcott", "--q", "5", "--s", "0", "--B", "1", "--genus-min", "3", "--genus-max", "1"], "--genus-min"),
    ],
)
def test_usage_errors_name_the_flag(argv, flag):
    with pytest.raises(UsageError) as info:
        parse_args(argv)
    assert info.value.flag == flag


def test_unknown_command_is_a_usage_error():
    with pytest.raises(UsageError):
        parse_args(["frobnicate", "--q", "5"])


def test_malformed_polynomial_is_a_parse_error():
    with pytest.raises(ParseError):
        parse_args(["lpoly", "--q", "5", "--D", "T^3+*T"])


def test_lpoly_output(capsys):
    code, out = _run(["lpoly", "--q", "5", "--D", "T^3+T"], capsys)
    assert code == EXIT_OK
    data = json.loads(out)
    assert _required("lpoly") <= set(data)
    assert data["L"] == [1, -2, 5] and data["h"] == 4


def test_field_output(capsys):
    code, out = _run(["field", "--q", "9"], capsys)
    data = json.loads(out)
    assert code == EXIT_OK
    assert _required("field") <= set(data)
    assert (data["p"], data["e"], data["modulus"], data["squares"]) == (3, 2, "T^2+1", 4)


def test_right_threshold_output(capsys):
    code, out = _run(["bounds", "right-threshold", "--q", "5", "--sigma", "2"], capsys)
    data = json.loads(out)
    assert code == EXIT_OK
    assert _required("bounds") <= set(data)
    assert data["exact"] == "625/384"


def test_classify_output(capsys):
    code, out = _run(["classify", "--q", "5", "--s", "0"], capsys)
    data = json.loads(out)
    assert _required("classify") <= set(data)
    assert (data["kind"], data["provenance"]) == ("Northcott", "(a)")


def test_empty_csv_still_has_a_header(capsys):
    code, out = _run(["central-zeros", "--q", "5", "--max-deg", "3", "--format", "csv"], capsys)
    assert code == EXIT_OK
    assert out == "D,genus,value,exact_zero,property\n"


def test_plot_data_is_csv(capsys):
    code, out = _run(["classify", "--q", "5", "--emit-plot-data", "--grid-steps", "3"], capsys)
    lines = out.splitlines()
    assert lines[0] == "q,sigma,tau,kind,provenance,threshold_B"
    assert any(",0.0,0.0,Northcott,(a)," in line for line in lines[1:])


def test_out_writes_a_file(tmp_path, capsys):
    target = tmp_path / "nested" / "lpoly.json"
    code = run(parse_args(["lpoly", "--q", "5", "--D", "T^3+T", "--out", str(target)]))
    assert code == EXIT_OK
    assert capsys.readouterr().out == ""
    assert json.loads(target.read_text())["h"] == 4


def test_computation_failure_emits_an_error_object(capsys):
    code, out = _run(["central-zeros", "--q", "3", "--max-deg", "3"], capsys)
    data = json.loads(out)
    assert code == EXIT_FAILURE
    assert _required("error") <= set(data)
    assert data["error"] == "WRONG_CONGRUENCE"


def test_budget_failure(capsys):
    code, out = _run(["lpoly", "--q", "5", "--D", "T^3+T", "--budget", "10"], capsys)
    assert code == EXIT_FAILURE
    assert json.loads(out)["error"] == "BUDGET_EXCEEDED"


def test_main_exit_codes(capsys):
    assert main(["field", "--q", "6"]) == EXIT_USAGE
    assert json.loads(capsys.readouterr().out)["error"] == "USAGE_ERROR"
    assert main(["lpoly", "--q", "5", "--D", "T^2+"]) == EXIT_USAGE
    assert json.loads(capsys.readouterr().out)["error"] == "PARSE_ERROR"
    assert main(["lpoly", "--q", "5", "--D", "T^3+T"]) == EXIT_OK
