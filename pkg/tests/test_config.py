"""Tests for the config module."""

import pytest
from markov_fock.config import RunConfig, parse_triple


class TestRunConfig:
    """Tests for RunConfig dataclass."""

    def test_valid_config(self):
        # Should not raise
        RunConfig().validate()

    def test_defaults(self):
        config = RunConfig()
        assert config.precision == "1e-30"
        assert config.seed == 7
        assert config.output_format == "json"
        assert config.a is None

    def test_collects_every_problem(self):
        config = RunConfig(precision="0", threads=0, depth=-1)
        with pytest.raises(ValueError, match="precision must be positive") as exc_info:
            config.validate()
        assert "threads" in str(exc_info.value)
        assert "depth" in str(exc_info.value)

    def test_bad_precision_literal(self):
        with pytest.raises(ValueError, match="not a number"):
            RunConfig(precision="tiny").validate()

    def test_unknown_format(self):
        with pytest.raises(ValueError, match="output_format"):
            RunConfig(output_format="xml").validate()

    def test_a_and_fricke_exclusive(self):
        config = RunConfig(a=2, fricke_c="-1", seed_triple=("3", "3", "5.6"))
        with pytest.raises(ValueError, match="mutually exclusive"):
            config.validate()

    def test_fricke_needs_seed(self):
        with pytest.raises(ValueError, match="given together"):
            RunConfig(fricke_c="-1").validate()

    def test_fricke_c_negative(self):
        with pytest.raises(ValueError, match="fricke_c must be negative"):
            RunConfig(fricke_c="0.5", seed_triple=("3", "3", "5.6")).validate()

    def test_a_positive(self):
        with pytest.raises(ValueError, match="a must be a positive integer"):
            RunConfig(a=0).validate()

    def test_frozen(self):
        config = RunConfig()
        with pytest.raises(AttributeError):
            config.depth = 3


class TestParseTriple:

    def test_strips_entries(self):
        assert parse_triple(" 3, 3 ,5.6") == ("3", "3", "5.6")

    def test_rejects_wrong_length(self):
        with pytest.raises(ValueError, match="three comma-separated"):
            parse_triple("3,3")


class TestLoadConfig:
    """Tests for load_config()."""

    def test_loads_from_env(self, monkeypatch):
        monkeypatch.setenv("MARKOV_FOCK_A", "2")
        monkeypatch.setenv("MARKOV_FOCK_PRECISION", "1e-40")
        monkeypatch.setenv("MARKOV_FOCK_FORMAT", "csv")
        monkeypatch.setenv("MARKOV_FOCK_THREADS", "4")

        from markov_fock.config import load_config
        config = load_config()
        assert config.a == 2
        assert config.precision == "1e-40"
        assert config.output_format == "csv"
        assert config.threads == 4

    def test_seed_triple_from_env(self, monkeypatch):
        monkeypatch.setenv("MARKOV_FOCK_FRICKE_C", "-1")
        monkeypatch.setenv("MARKOV_FOCK_SEED_TRIPLE", "3,3,5.618")

        from markov_fock.config import load_config
        config = load_config()
        assert config.fricke_c == "-1"
        assert config.seed_triple == ("3", "3", "5.618")

    def test_defaults_when_unset(self):
        from markov_fock.config import load_config
        assert load_config() == RunConfig()

    def test_non_integer_env(self, monkeypatch):
        monkeypatch.setenv("MARKOV_FOCK_DEPTH", "deep")

        from markov_fock.config import load_config
        with pytest.raises(ValueError, match="MARKOV_FOCK_DEPTH"):
            load_config()
