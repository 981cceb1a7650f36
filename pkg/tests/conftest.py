"""Shared fixtures for markov-fock tests."""

import logging
import pytest

from markov_fock.config import RunConfig
from markov_fock.markov import SurfaceParam, TreeCache


TEST_CONFIG = RunConfig(
    precision="1e-30",
    depth=6,
    max_q=4,
    count=100,
    seed=7,
)

# X = Y = 3 on c = -1; Z is the larger root (9 + sqrt 5) / 2
FRICKE_SEED = ("3", "3", "5.6180339887498948482045868343656381177203091798058")


@pytest.fixture
def logger():
    """Provide a logger instance for tests."""
    return logging.getLogger("test")


@pytest.fixture
def test_config():
    """Provide a shared RunConfig with small test values."""
    return TEST_CONFIG


@pytest.fixture
def classical():
    return SurfaceParam.classical()


@pytest.fixture
def a2():
    return SurfaceParam.a_family(2)


@pytest.fixture
def fricke_surface():
    return SurfaceParam.fricke("-1", FRICKE_SEED, prec=256)


@pytest.fixture
def cache():
    return TreeCache()


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    """Keep MARKOV_FOCK_* variables of the host out of the tests."""
    import os
    for name in list(os.environ):
        if name.startswith("MARKOV_FOCK_"):
            monkeypatch.delenv(name, raising=False)
