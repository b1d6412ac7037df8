import json
import subprocess
import sys

import pytest
from hypothesis import given, settings, strategies as st

from realterm.cli import main, parse_input, parse_polynomial, run_pipeline
from realterm.errors import ParseError, UnknownVariable
from realterm.jet import Jet


def test_parse_basics():
    F = parse_polynomial("-(x + 2*y)^2 + 3/4*z*t - t**5")
    assert F.coeff((1, 1, 0, 0)) == -4
    assert F.coeff((0, 0, 1, 1)) == 0.75
    assert F.coeff((0, 0, 0, 5)) == -1


def test_order_grows_to_degree():
    assert parse_polynomial("x^2 + t^20").order == 20


@pytest.mark.parametrize("text, col", [("x^2 + w", 7), ("x^^2", 3), ("(x + y", 7)])
def test_parse_errors_have_position(text, col):
    with pytest.raises(ParseError) as err:
        parse_polynomial(text)
    assert err.value.line == 1
    assert err.value.column == col


def test_unknown_variable():
    with pytest.raises(UnknownVariable):
        parse_polynomial("x + q")
    with pytest.raises(ParseError):
        parse_polynomial("2 x")


def test_quotient_clause():
    spec = parse_input("x^2+y^2+z^2-t^3 quotient: 1/2(1,1,1,0)")
    assert str(spec.action) == "1/2(1,1,1,0)"


@settings(max_examples=50, deadline=None)
@given(st.dictionaries(st.tuples(*[st.integers(0, 3)] * 4),
                       st.fractions(-9, 9, max_denominator=5).filter(bool), max_size=6))
def test_to_str_roundtrip(terms):
    F = Jet(terms, order=12)
    assert parse_polynomial(F.to_str()) == F


def test_pipeline_report():
    report, code = run_pipeline(parse_input("x^2 + y^2 - z^2 - t^2"), "link")
    assert code == 0 and report["version"] == "v1"
    assert report["link"]["link"]["name"] == "T2"
    assert report["transform_log"]["steps"] >= 0


@pytest.mark.parametrize("argv, code", [
    (["classify", "x^2 + y^2 + z^2 + t^3"], 0),
    (["classify", "x^3 + y^3 + z^3 + t^3"], 2),
    (["link", "x^2 + y^2*z + y*t^3 + z^4"], 3),
    (["classify", "x^2 + @"], 4),
    (["link", "x^2+y^2+z^3*t", "--quotient", "1/2(1,1,1,0)"], 2),
])
def test_exit_codes(argv, code, capsys):
    assert main(argv) == code


def test_json_and_verify(capsys):
    assert main(["verify", "x^2+y^2+z^2-t^2", "--json", "--resolution", "32"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["oracle"]["agrees"] is True


def test_companion_command(capsys):
    assert main(["companion", "x^2+y^2+z^2+t^3", "--quotient", "1/2(1,1,1,0)", "--json"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["companion"]["polynomial"] == parse_polynomial("x^2+y^2+z^2-t^3").to_str()


def test_batch_parallel(tmp_path, capsys):
    f = tmp_path / "in.txt"
    f.write_text("# comment\nx^2+y^2+z^2-t^2\nx^2-y^2+z^3+t^4\n")
    assert main(["link", "--batch", str(f), "--jobs", "2", "--json"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert [json.loads(ln)["link"]["link"]["name"] for ln in lines] == ["2S2", "S2"]


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "realterm", "link", "x^2+y^2+z^2-t^2"],
                         capture_output=True, text=True, check=True)
    assert "link: 2S2" in out.stdout
