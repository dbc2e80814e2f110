"""Command-line contract: flags, exit codes, schemas, determinism."""

import json

import pytest

from kncubic.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


class TestTable:
    def test_two_point_entry(self, capsys):
        obj = run_json(capsys, "table", "--case", "two", "--window", "2")
        assert obj["case"] == "two" and obj["window"] == 2
        entry = next(e for e in obj["entries"] if (e["n"], e["m"]) == (0, 2))
        assert entry["terms"] == [{"index": 3, "coeff": "2"}]

    def test_numeric_params(self, capsys):
        obj = run_json(capsys, "table", "--case", "three-s", "--window", "1",
                       "--params", "e1=1,e2=2,a=7")
        assert obj["params"] == {"e1": "1", "e2": "2", "a": "7"}
        entry = next(e for e in obj["entries"] if (e["n"], e["m"]) == (1, 0))
        coeffs = {t["index"]: t["coeff"] for t in entry["terms"]}
        assert coeffs[2] == "-1"

    def test_bad_window(self, capsys):
        code, _, err = run(capsys, "table", "--case", "two", "--window", "0")
        assert code == 2 and "window" in err

    def test_unknown_flag(self, capsys):
        code, _, _ = run(capsys, "table", "--case", "two", "--window", "1",
                         "--bogus")
        assert code == 2

    def test_unknown_param_key(self, capsys):
        code, _, err = run(capsys, "table", "--case", "two", "--window", "1",
                           "--params", "a=3")
        assert code == 2 and "unknown parameter" in err

    def test_determinism(self, capsys):
        one = run(capsys, "table", "--case", "three-s", "--window", "2")
        two = run(capsys, "table", "--case", "three-s", "--window", "2")
        assert one == two

    def test_csv(self, capsys):
        code, out, _ = run(capsys, "table", "--case", "two", "--window", "1",
                           "--format", "csv")
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "case,window,n,m,index,coeff"
        assert any(line.startswith("two,1,0,1,") for line in lines)

    def test_out_file(self, capsys, tmp_path):
        path = tmp_path / "table.json"
        code, out, _ = run(capsys, "table", "--case", "two", "--window", "1",
                           "--out", str(path))
        assert code == 0 and out == ""
        assert json.loads(path.read_text())["window"] == 1


class TestBracket:
    def test_match(self, capsys):
        obj = run_json(capsys, "bracket", "--case", "two",
                       "--n", "1", "--m", "0")
        assert obj["match"] is True
        assert {t["index"] for t in obj["engine"]} == {-2, 2}

    def test_diagonal_empty(self, capsys):
        obj = run_json(capsys, "bracket", "--case", "two",
                       "--n", "3", "--m", "3")
        assert obj["engine"] == [] and obj["fixture"] == []

    def test_three_point_comparison_record(self, capsys):
        obj = run_json(capsys, "bracket", "--case", "three-s",
                       "--n", "1", "--m", "0")
        assert obj["match"] is True and len(obj["engine"]) == 3


class TestVerify:
    def test_jacobi_pass(self, capsys):
        code, out, _ = run(capsys, "verify", "--suite", "jacobi",
                           "--window", "3")
        assert code == 0
        assert json.loads(out)["status"] == "pass"

    def test_unknown_suite(self, capsys):
        code, _, _ = run(capsys, "verify", "--suite", "bogus")
        assert code == 2

    def test_prop2(self, capsys):
        code, out, _ = run(capsys, "verify", "--suite", "prop2")
        assert code == 0
        obj = json.loads(out)
        assert all(c["status"] == "pass" for c in obj["checks"])


class TestDegenerate:
    def test_cuspidal(self, capsys):
        obj = run_json(capsys, "degenerate", "--kind", "cuspidal",
                       "--case", "two", "--window", "3")
        fate = obj["marking_fate"]
        assert (fate["count_before"], fate["count_after"]) == (2, 2)
        entry = next(e for e in obj["table"]["entries"]
                     if (e["n"], e["m"]) == (0, 1))
        assert entry["terms"] == [{"index": 2, "coeff": "1"}]

    def test_nodal_subcase_1(self, capsys):
        obj = run_json(capsys, "degenerate", "--kind", "nodal",
                       "--subcase", "1", "--window", "3")
        fate = obj["marking_fate"]
        assert (fate["count_before"], fate["count_after"]) == (2, 3)
        assert fate["singular_hit"] is True

    def test_nodal_subcase_5(self, capsys):
        obj = run_json(capsys, "degenerate", "--kind", "nodal",
                       "--subcase", "5", "--window", "3")
        fate = obj["marking_fate"]
        assert (fate["count_before"], fate["count_after"]) == (3, 3)
        assert fate["markings"] == ["inf", "roots(t^2+3e)"]

    def test_invalid_combination(self, capsys):
        code, _, _ = run(capsys, "degenerate", "--kind", "nodal",
                         "--window", "3")
        assert code == 2
        code, _, _ = run(capsys, "degenerate", "--kind", "cuspidal",
                         "--subcase", "1", "--window", "3")
        assert code == 2
        code, _, _ = run(capsys, "degenerate", "--kind", "nodal",
                         "--subcase", "1", "--case", "three-s",
                         "--window", "3")
        assert code == 2


class TestPullback:
    def test_cuspidal_field(self, capsys):
        obj = run_json(capsys, "pullback", "--kind", "cuspidal",
                       "--n", "0", "--lambda", "-1")
        assert obj["result"] == "t^2 d/dt"
        assert obj["match"] is True

    def test_nodal_differential(self, capsys):
        obj = run_json(capsys, "pullback", "--kind", "nodal", "--subcase",
                       "2", "--n", "0", "--lambda", "1")
        assert obj["coeff"] == "(1)/(t^2 - 3*e)"
        assert obj["match"] is True

    def test_case5_field(self, capsys):
        obj = run_json(capsys, "pullback", "--kind", "nodal", "--subcase",
                       "5", "--n", "2", "--lambda", "-1")
        assert obj["coeff"] == "t^4 - 9*e^2"
        assert obj["match"] is True

    def test_no_fixture_for_general_weight(self, capsys):
        obj = run_json(capsys, "pullback", "--kind", "cuspidal",
                       "--n", "2", "--lambda", "3")
        assert obj["fixture"] is None and obj["match"] is None


class TestDivisor:
    def test_two_point(self, capsys):
        obj = run_json(capsys, "divisor", "--case", "two", "--n", "2")
        assert obj["divisor"] == "-2*[inf] + 2*[E1]"
        assert obj["degree_zero"] is True

    def test_constant(self, capsys):
        obj = run_json(capsys, "divisor", "--case", "two", "--n", "0")
        assert obj["divisor"] == "0" and obj["orders"] == {}

    def test_three_point_odd(self, capsys):
        obj = run_json(capsys, "divisor", "--case", "three-s", "--n", "3")
        assert obj["orders"] == {"inf": -3, "E1": 1, "E2": 1, "E3": 1}


class TestVerbRequired:
    def test_no_verb(self, capsys):
        assert run(capsys, )[0] == 2
