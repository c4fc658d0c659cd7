"""
Testes de integração do CLI
"""

import json
from fractions import Fraction
from unittest.mock import patch

import pytest

from app.cli.commands import HANDLERS
from app.exceptions import InfeasibleMollifierError
from app.main import build_parser, run
from app.models.lemma_models import CSV_HEADER, ComparisonRow

pytestmark = pytest.mark.integration


class TestParser:
    """Testes do parser de argumentos"""

    def test_unknown_command(self):
        with pytest.raises(SystemExit) as exc_info:
            run(["bogus"])
        assert exc_info.value.code == 2

    def test_missing_lemma(self):
        with pytest.raises(SystemExit) as exc_info:
            run(["lemma-check"])
        assert exc_info.value.code == 2

    def test_common_flags(self):
        args = build_parser().parse_args(["lambda", "--r", "3", "--poly", "1,2", "--J", "40", "--scan-max", "3.5"])
        assert (args.r, args.poly, args.J, args.scan_max) == (3, "1,2", 40, "3.5")

    @pytest.mark.parametrize("name", ["verify-paper", "verify-reference"])
    def test_acceptance_command_names(self, name):
        args = build_parser().parse_args([name, "--with-lemmas"])
        assert args.with_lemmas and not args.with_optimizer
        assert HANDLERS[args.command] is HANDLERS["verify-paper"]


class TestConfigErrors:
    """Configuração inválida sai com código 2"""

    @pytest.mark.parametrize(
        "flags",
        [
            ["--eta", "3/4"],
            ["--poly", "1,abc"],
            ["--poly", "0,0"],
            ["--scan-max", "-1"],
        ],
    )
    def test_invalid_config(self, flags, capsys):
        assert run(["lambda", "--r", "1", *flags]) == 2
        assert "erro" in capsys.readouterr().err

    @patch("app.cli.commands.lambda_r")
    def test_infeasible_exit_code(self, mock_lambda, capsys):
        mock_lambda.side_effect = InfeasibleMollifierError("D < 0: mollifier inviável")
        assert run(["lambda", "--r", "1"]) == 1
        assert "inviável" in capsys.readouterr().err


class TestLambdaCommand:
    def test_json_report(self, capsys):
        code = run(["lambda", "--r", "1", "--J", "30", "--prec", "128"])
        payload = json.loads(capsys.readouterr().out)
        assert code == 0
        assert 2.677 <= float(payload["lambda_lower"]) < 2.679
        assert float(payload["margin"]) > 0
        assert payload["certificate"]["r"] == 1
        assert len(payload["certificate"]["coefficients"]) == 30

    def test_out_file(self, tmp_path, capsys):
        target = tmp_path / "lambda.json"
        assert run(["lambda", "--r", "1", "--J", "30", "--prec", "128", "--out", str(target)]) == 0
        assert capsys.readouterr().out == ""
        assert json.loads(target.read_text(encoding="utf-8"))["J"] == 30


class TestConstantsCommand:
    def test_euler_products(self, capsys):
        assert run(["constants", "--r", "1", "--rs", "1", "2", "--cutoff", "1000", "--prec", "128"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert float(payload["euler_products"][0]["a_r"]) == 1
        a2 = payload["euler_products"][1]
        assert abs(float(a2["a_r"]) - 0.6079271018540267) <= float(a2["tail_bound"]) + 1e-12
        assert Fraction(payload["reference_lambda"][3]["lambda_min"]) == Fraction("2.9125")


class TestCtCheckCommand:
    def test_all_zero(self, capsys):
        code = run(["ct-check", "--rs", "1", "2", "--etas", "1/2", "1/3", "--polys", "1", "1,-0.1,100,-0.2"])
        payload = json.loads(capsys.readouterr().out)
        assert code == 0
        assert payload["ok"] is True
        assert len(payload["rows"]) == 8

    @patch("app.cli.commands.ct_consistency", return_value=Fraction(1, 7))
    def test_nonzero_residual(self, mock_ct, capsys):
        assert run(["ct-check", "--rs", "1", "--etas", "1/2"]) == 1
        assert json.loads(capsys.readouterr().out)["rows"][0]["residual"] == "1/7"


class TestLemmaCheckCommand:
    def test_mertens_csv(self, capsys):
        assert run(["lemma-check", "--lemma", "mertens", "--x", "1000", "10000"]) == 0
        lines = capsys.readouterr().out.strip().split("\n")
        assert lines[0] == ",".join(CSV_HEADER)
        assert [line.split(",")[0] for line in lines[1:]] == ["1000", "10000"]

    def test_divpoly(self, capsys):
        assert run(["lemma-check", "--lemma", "divpoly", "--r", "3", "--lam", "2", "--order", "30"]) == 0
        assert json.loads(capsys.readouterr().out)["residual"] == []

    def test_capacity_error(self, capsys):
        code = run(["lemma-check", "--lemma", "fmean", "--r", "2", "--m", "6", "--n", "6", "--x", "100000000"])
        assert code == 2

    def test_csv_to_file(self, tmp_path):
        target = tmp_path / "avcj.csv"
        assert run(["lemma-check", "--lemma", "avcj", "--r", "1", "--j", "1", "--x", "20", "40", "--out", str(target)]) == 0
        assert target.read_text(encoding="utf-8").startswith("x,lhs_re")

    @patch("app.cli.commands.lemma_lab.check_sigma_mean")
    def test_sig2_defaults_to_r2(self, mock_sigma, capsys):
        mock_sigma.return_value = ComparisonRow(x=1000, lhs=1.0, main_term=1.0)
        assert run(["lemma-check", "--lemma", "sig2", "--x", "1000"]) == 0
        assert mock_sigma.call_args.args[0] == 2

    def test_avcj_exact(self, capsys):
        assert run(["lemma-check", "--lemma", "avcj", "--r", "1", "--j", "0", "--x", "30", "--exact"]) == 0
        lines = capsys.readouterr().out.strip().split("\n")
        assert len(lines) == 2
        assert lines[1].startswith("30,")
