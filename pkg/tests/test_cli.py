"""Tests for the markov-fock command line."""

import json
from decimal import Decimal

import pytest

from markov_fock.cli import (
    EXIT_DOMAIN,
    EXIT_FAILED,
    EXIT_OK,
    EXIT_PRECISION,
    EXIT_USAGE,
    build_parser,
    config_from_args,
    main,
)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestUsage:

    def test_unknown_command(self, capsys):
        code, out, err = run(capsys, "bogus")
        assert code == EXIT_USAGE
        assert "invalid choice" in err

    def test_unknown_flag(self, capsys):
        code, _, _ = run(capsys, "markov", "--frac", "1/3", "--bogus")
        assert code == EXIT_USAGE

    def test_missing_required(self, capsys):
        code, _, _ = run(capsys, "markov")
        assert code == EXIT_USAGE

    def test_length_needs_one_target(self, capsys):
        code, _, _ = run(capsys, "length", "--frac", "1/3", "--hole")
        assert code == EXIT_USAGE

    def test_help(self, capsys):
        code, out, _ = run(capsys, "--help")
        assert code == EXIT_OK
        assert "markov-fock" in out

    def test_flags_override_environment(self, monkeypatch):
        monkeypatch.setenv("MARKOV_FOCK_DEPTH", "3")
        monkeypatch.setenv("MARKOV_FOCK_PRECISION", "1e-20")
        args = build_parser().parse_args(["tree", "--depth", "5"])
        config = config_from_args(args)
        assert config.depth == 5
        assert config.precision == "1e-20"


class TestMarkov:

    def test_bare_value(self, capsys):
        assert run(capsys, "markov", "--frac", "1/3") == (EXIT_OK, "5\n", "")

    def test_a_family(self, capsys):
        code, out, _ = run(capsys, "markov", "--a", "2", "--frac", "1/3")
        assert code == EXIT_OK
        assert out == "102\n"

    def test_word(self, capsys):
        code, out, _ = run(capsys, "markov", "--frac", "1/4", "--word")
        assert out == "13\nAAB\n"

    def test_json(self, capsys):
        code, out, _ = run(capsys, "markov", "--frac", "2/7", "--format", "json")
        assert json.loads(out) == {"fraction": "2/7", "surface": "classical", "value": "194"}

    def test_outside_fundamental(self, capsys):
        code, _, err = run(capsys, "markov", "--frac", "3/4")
        assert code == EXIT_DOMAIN
        assert "[0, 1/2]" in err

    def test_unparseable_fraction(self, capsys):
        code, _, _ = run(capsys, "markov", "--frac", "third")
        assert code == EXIT_DOMAIN

    def test_digit_budget(self, capsys):
        code, _, err = run(capsys, "markov", "--frac", "1/200", "--digit-budget", "10")
        assert code == EXIT_PRECISION
        assert "budget of 10" in err


class TestTree:

    def test_json_lines(self, capsys):
        code, out, _ = run(capsys, "tree", "--depth", "1")
        assert code == EXIT_OK
        records = [json.loads(line) for line in out.splitlines()]
        assert [r["fraction"] for r in records] == ["1/3", "1/4", "2/5"]
        assert records[0]["a"] is None

    def test_csv(self, capsys):
        code, out, _ = run(capsys, "tree", "--depth", "1", "--a", "1", "--format", "csv")
        assert out.splitlines()[:2] == ["fraction,X,Y,Z", "1/3,3,6,15"]

    def test_output_file(self, capsys, tmp_path):
        target = tmp_path / "tree.jsonl"
        code, out, _ = run(capsys, "tree", "--depth", "2", "--output", str(target))
        assert code == EXIT_OK
        assert out == ""
        assert len(target.read_text(encoding="utf-8").splitlines()) == 7


class TestFockAndNorm:

    def test_fock(self, capsys):
        code, out, _ = run(capsys, "fock", "--frac", "1/3")
        payload = json.loads(out)
        assert payload["trace"] == "15"
        assert Decimal(payload["psi"]["value"]) > Decimal("0.9")

    def test_fock_csv(self, capsys):
        code, out, _ = run(capsys, "fock", "--frac", "1/2", "--format", "csv")
        assert out.splitlines()[0] == "fraction,surface,trace,psi"

    def test_norm(self, capsys):
        code, out, _ = run(capsys, "norm", "--class", "2,0")
        payload = json.loads(out)
        assert payload["class"] == "(2,0)"
        assert Decimal(payload["norm"]["value"]) > Decimal("3.8")

    def test_zero_class(self, capsys):
        code, _, _ = run(capsys, "norm", "--class", "0,0")
        assert code == EXIT_DOMAIN

    def test_beta(self, capsys):
        code, out, _ = run(capsys, "beta", "--class", "1,0")
        assert code == EXIT_OK
        assert "beta" in json.loads(out)

    def test_hole_length(self, capsys):
        code, out, _ = run(capsys, "length", "--hole", "--a", "2")
        payload = json.loads(out)
        assert payload["surface"] == "a=2"
        assert Decimal(payload["hole_length"]["value"]) > Decimal("11")

    def test_geodesic_length(self, capsys):
        code, out, _ = run(capsys, "length", "--frac", "1/0")
        assert code == EXIT_OK
        assert json.loads(out)["fraction"] == "1/0"

    def test_ball_csv(self, capsys):
        code, out, _ = run(capsys, "ball", "--max-q", "1", "--format", "csv")
        lines = out.splitlines()
        assert lines[0] == "p,q,x,y,x_err,y_err"
        assert len(lines) == 9


class TestDerivatives:

    def test_derivative_csv(self, capsys):
        code, out, _ = run(capsys, "derivative", "--frac", "1/2", "--side", "left",
                           "--depth", "3", "--format", "csv")
        lines = out.splitlines()
        assert lines[0] == "depth,approach_p,approach_q,slope,err"
        assert lines[1].startswith("1,1,3,")
        assert len(lines) == 4

    def test_corner(self, capsys):
        code, out, _ = run(capsys, "corner", "--frac", "1/2", "--depth", "6")
        assert code == EXIT_OK
        payload = json.loads(out)
        assert payload["certified_positive"] is True
        assert Decimal(payload["lower"]) > Decimal("0.23")
        assert payload["left"]["side"] == "left"

    def test_irrational(self, capsys):
        code, out, _ = run(capsys, "irrational", "--cf", "0;2,(1)", "--depth", "5")
        payload = json.loads(out)
        assert [b["depth"] for b in payload["brackets"]] == ["3", "4", "5"]
        assert payload["truncated"] is False

    def test_irrational_finite(self, capsys):
        code, _, err = run(capsys, "irrational", "--cf", "0;2,3")
        assert code == EXIT_DOMAIN
        assert "rational target" in err


class TestVerify:

    def test_fricke_suite(self, capsys):
        code, out, _ = run(capsys, "verify", "--suite", "fricke", "--count", "1000", "--seed", "7")
        assert code == EXIT_OK
        assert out == "fricke: OK (1000 pairs, residuals 0)\n"

    def test_unknown_suite(self, capsys):
        code, _, _ = run(capsys, "verify", "--suite", "nope")
        assert code == EXIT_USAGE


class TestConfigErrors:

    @pytest.mark.parametrize("argv", [
        ("fock", "--frac", "1/3", "--precision", "0"),
        ("tree", "--depth", "-1"),
        ("markov", "--frac", "1/3", "--a", "2", "--fricke-c", "-1", "--seed-triple", "3,3,5.6"),
    ])
    def test_invalid_config(self, capsys, argv):
        code, _, err = run(capsys, *argv)
        assert code == EXIT_DOMAIN
        assert err.startswith("markov-fock:")

    def test_failed_suite_exit_code(self, capsys, monkeypatch):
        from markov_fock import cli
        from markov_fock.verify import SuiteResult, VerifyReport

        monkeypatch.setattr(
            cli, "run_suites", lambda names, config: VerifyReport([SuiteResult("hole", False, "broken")])
        )
        code, out, _ = run(capsys, "verify", "--suite", "hole")
        assert code == EXIT_FAILED
        assert out == "hole: FAIL (broken)\n"
