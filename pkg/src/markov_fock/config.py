"""
Configuration Module for markov-fock

This module loads run parameters from environment variables (and a .env
file when present). The command line overrides them field by field with
``dataclasses.replace`` before validating.
"""

import os
from dataclasses import dataclass
from dotenv import load_dotenv

from .hpreal import as_mpf, target_bits

# Load environment variables from .env file if it exists
load_dotenv()

OUTPUT_FORMATS = ("json", "csv")
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


@dataclass(frozen=True)
class RunConfig:
    """Parameters shared by the CLI, the verification suites and the MCP tools."""
    a: int | None = None
    fricke_c: str | None = None
    seed_triple: tuple[str, str, str] | None = None
    precision: str = "1e-30"
    digit_budget: int = 200_000
    depth: int = 8
    max_q: int = 12
    output_format: str = "json"
    output: str | None = None
    seed: int = 7
    threads: int = 1
    max_retries: int = 4
    fricke_drift: str = "1e-3"
    fricke_prec: int = 256
    count: int = 10_000
    log_level: str = "WARNING"

    def validate(self) -> None:
        """Check every constraint and report all violations at once.

        Raises:
            ValueError: If any parameter is out of range.
        """
        problems = []
        try:
            if as_mpf(self.precision) <= 0:
                problems.append("precision must be positive")
            else:
                target_bits(self.precision)
        except (ValueError, ZeroDivisionError):
            problems.append(f"precision is not a number: {self.precision!r}")
        if self.digit_budget <= 0:
            problems.append("digit_budget must be positive")
        if self.depth < 0:
            problems.append("depth must be non-negative")
        if self.max_q < 1:
            problems.append("max_q must be at least 1")
        if self.threads < 1:
            problems.append("threads must be at least 1")
        if self.max_retries < 0:
            problems.append("max_retries must be non-negative")
        if self.count < 1:
            problems.append("count must be positive")
        if self.fricke_prec < 64:
            problems.append("fricke_prec must be at least 64 bits")
        if self.output_format not in OUTPUT_FORMATS:
            problems.append(f"output_format must be one of {', '.join(OUTPUT_FORMATS)}")
        if self.log_level.upper() not in LOG_LEVELS:
            problems.append(f"log_level must be one of {', '.join(LOG_LEVELS)}")
        if self.a is not None and self.a < 1:
            problems.append("a must be a positive integer")
        if self.a is not None and self.fricke_c is not None:
            problems.append("a and fricke_c are mutually exclusive")
        if self.fricke_c is not None:
            try:
                if as_mpf(self.fricke_c) >= 0:
                    problems.append("fricke_c must be negative")
            except (ValueError, ZeroDivisionError):
                problems.append(f"fricke_c is not a number: {self.fricke_c!r}")
        if (self.fricke_c is None) != (self.seed_triple is None):
            problems.append("fricke_c and seed_triple must be given together")
        if problems:
            raise ValueError(f"Invalid configuration: {'; '.join(problems)}")


def _env_int(name: str, default: int | None) -> int | None:
    raw = os.getenv(name)
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError as exc:
        raise ValueError(f"Environment variable {name} must be an integer, got {raw!r}") from exc


def parse_triple(text: str) -> tuple[str, str, str]:
    """Split "X,Y,Z" into three stripped entries."""
    parts = tuple(part.strip() for part in text.split(","))
    if len(parts) != 3 or not all(parts):
        raise ValueError(f"Seed triple must have three comma-separated entries, got {text!r}")
    return parts


def load_config() -> RunConfig:
    """Load configuration from MARKOV_FOCK_* environment variables."""
    defaults = RunConfig()
    triple = os.getenv("MARKOV_FOCK_SEED_TRIPLE") or None
    return RunConfig(
        a=_env_int("MARKOV_FOCK_A", None),
        fricke_c=os.getenv("MARKOV_FOCK_FRICKE_C") or None,
        seed_triple=parse_triple(triple) if triple else None,
        precision=os.getenv("MARKOV_FOCK_PRECISION", defaults.precision),
        digit_budget=_env_int("MARKOV_FOCK_DIGIT_BUDGET", defaults.digit_budget),
        depth=_env_int("MARKOV_FOCK_DEPTH", defaults.depth),
        max_q=_env_int("MARKOV_FOCK_MAX_Q", defaults.max_q),
        output_format=os.getenv("MARKOV_FOCK_FORMAT", defaults.output_format),
        output=os.getenv("MARKOV_FOCK_OUTPUT") or None,
        seed=_env_int("MARKOV_FOCK_SEED", defaults.seed),
        threads=_env_int("MARKOV_FOCK_THREADS", defaults.threads),
        max_retries=_env_int("MARKOV_FOCK_MAX_RETRIES", defaults.max_retries),
        fricke_drift=os.getenv("MARKOV_FOCK_FRICKE_DRIFT", defaults.fricke_drift),
        fricke_prec=_env_int("MARKOV_FOCK_FRICKE_PREC", defaults.fricke_prec),
        count=_env_int("MARKOV_FOCK_COUNT", defaults.count),
        log_level=os.getenv("MARKOV_FOCK_LOG_LEVEL", defaults.log_level),
    )
