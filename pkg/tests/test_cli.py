"""Batch front-end: dispatch, output formats, exit codes, determinism."""

import json
import math

import pytest

from genint import cli, specfun

from conftest import rel_err


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestEval:
    def test_regular_family_at_one(self, capsys):
        code, out, _ = run_cli(capsys, "eval", "--fn", "gegenbauer-s",
                               "--alpha", "0.3", "--lambda", "0.7i", "--w", "1")
        assert code == 0
        rec = json.loads(out)
        assert rel_err(rec["value"], 1.0 / specfun.gamma(1.3)) < 1e-13

    def test_bessel(self, capsys):
        code, out, _ = run_cli(capsys, "eval", "--fn", "bessel-k",
                               "--alpha", "0.5", "--x", "1.0")
        rec = json.loads(out)
        want = math.sqrt(math.pi / 2.0) * math.exp(-1.0)
        assert code == 0 and rel_err(rec["value"], want) < 1e-13

    def test_gamma(self, capsys):
        code, out, _ = run_cli(capsys, "eval", "--fn", "gamma", "--z", "0.5")
        assert rel_err(json.loads(out)["value"], math.sqrt(math.pi)) < 1e-14


class TestIntegrate:
    def test_gamma_power(self, capsys):
        code, out, _ = run_cli(capsys, "integrate", "--fn", "gamma-power",
                               "--p", "-1.5")
        rec = json.loads(out)
        assert code == 0
        assert rel_err(rec["value"], -2.0 * math.sqrt(math.pi)) < 1e-10
        assert rec["anomaly"] == 0.0
        assert rec["tolerance_achieved"] < 1e-9

    def test_bessel_product(self, capsys):
        code, out, _ = run_cli(capsys, "integrate", "--fn", "bessel-product",
                               "--alpha", "1.5", "--a", "1", "--b", "1")
        rec = json.loads(out)
        assert rel_err(rec["value"], -1.5 * math.pi) < 1e-9


class TestTable:
    def test_mac_bilinear_sweep(self, capsys):
        code, out, _ = run_cli(capsys, "table", "--formula", "mac-bilinear",
                               "--alpha", "0.4", "--a", "1.5:3.0:3", "--b", "1.0")
        lines = out.strip().split("\n")
        assert code == 0
        assert lines[0] == "alpha,a,b,closed_form,quadrature,rel_diff"
        assert len(lines) == 4
        for line in lines[1:]:
            assert float(line.split(",")[-1]) < 1e-9

    def test_generalized_column_uses_finite_part(self, capsys):
        code, out, _ = run_cli(capsys, "table", "--formula", "mac-square",
                               "--alpha", "1.5", "--b", "1.0")
        line = out.strip().split("\n")[1]
        cells = line.split(",")
        assert rel_err(float(cells[2]), -1.5 * math.pi) < 1e-10
        assert float(cells[-1]) < 1e-8


class TestSigmaCommand:
    def test_rows(self, capsys):
        code, out, _ = run_cli(capsys, "sigma", "--dim-range", "1..6",
                               "--beta", "1")
        lines = out.strip().split("\n")
        assert code == 0 and len(lines) == 7
        d3 = lines[3].split(",")
        assert rel_err(float(d3[1]), 1.0 / (4.0 * math.pi)) < 1e-14
        for line in lines[1:]:
            assert float(line.split(",")[-1]) < 1e-4


class TestGreenCommand:
    def test_csv_shape(self, capsys):
        code, out, _ = run_cli(capsys, "green", "--geometry", "euclidean",
                               "--dim", "3", "--beta", "1", "--gamma", "0.5",
                               "--along", "0.2:2.0:5", "--at", "1.0")
        lines = out.strip().split("\n")
        assert code == 0
        assert lines[0] == "arclength,kernel"
        assert len(lines) == 6

    def test_hyperbolic_free(self, capsys):
        code, out, _ = run_cli(capsys, "green", "--geometry", "hyperbolic",
                               "--dim", "3", "--beta", "1", "--gamma", "inf",
                               "--along", "0.4:0.4:1", "--at", "1.0")
        val = float(out.strip().split("\n")[1].split(",")[1])
        want = math.exp(-0.6) / (4.0 * math.pi * math.sinh(0.6))
        assert rel_err(val, want) < 1e-12


class TestVerifyCommand:
    def test_passing_suite(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "--suite", "sigma")
        lines = out.strip().split("\n")
        assert code == 0
        assert lines[0].startswith("suite,name")
        assert all(line.endswith("pass") for line in lines[1:])

    def test_jsonl_format(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "--suite", "sigma",
                               "--format", "jsonl")
        rec = json.loads(out.strip().split("\n")[0])
        assert rec["suite"] == "sigma" and rec["passed"] is True

    def test_determinism(self, capsys):
        _, out1, _ = run_cli(capsys, "verify", "--suite", "gegenbauer")
        _, out2, _ = run_cli(capsys, "verify", "--suite", "gegenbauer")
        assert out1 == out2


class TestErrors:
    def test_usage_error_exit_code(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(["eval", "--fn", "bessel-k", "--no-such-flag", "1"])
        assert exc.value.code == 1

    def test_numeric_error_reported(self, capsys):
        code, out, err = run_cli(capsys, "eval", "--fn", "bessel-k",
                                 "--alpha", "0.5", "--x", "-1.0")
        assert code == 1
        assert "DomainError" in err

    def test_pole_error_reported(self, capsys):
        code, _, err = run_cli(capsys, "eval", "--fn", "gamma", "--z", "-2.0")
        assert code == 1
        assert "pole" in err
