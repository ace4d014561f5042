"""Pytest configuration and shared fixtures."""

import json
from pathlib import Path

import numpy as np
import pytest

from multiport_fama.core.verification import random_fama_pair, random_full_rank_pair
from multiport_fama.models import ChannelRealization, SignalMatrixPair

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False,
                     help="run the Monte-Carlo acceptance tests")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running acceptance test (needs --runslow)")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def rng():
    """Fixed-seed generator."""
    return np.random.default_rng(20240101)


@pytest.fixture
def fama_pair(rng):
    """Rank-one 8-port pair with three interferers."""
    return random_fama_pair(rng, 8)


@pytest.fixture
def full_rank_pair(rng):
    """6-port pair with a full-rank numerator."""
    return random_full_rank_pair(rng, 6)


@pytest.fixture
def identity_channels():
    """Two users, two ports, H_k = I for both."""
    eye = np.eye(2, dtype=complex)
    return ChannelRealization.from_user_matrices([eye, eye])


@pytest.fixture
def decoupled_pair():
    """Rank-one pair where port 2 carries no signal and is isolated in B."""
    a = np.array([1.0, 0.5 + 0.5j, 0.0, 0.8j])
    B = np.array([
        [2.0, 0.3, 0.0, 0.1],
        [0.3, 1.5, 0.0, 0.2j],
        [0.0, 0.0, 1.0, 0.0],
        [0.1, -0.2j, 0.0, 1.2],
    ], dtype=complex)
    return SignalMatrixPair.rank_one(a, B)


@pytest.fixture
def smoke_config_path():
    return CONFIG_DIR / "smoke.json"


@pytest.fixture
def write_config(tmp_path):
    """Write a config mapping to a JSON file and return its path."""
    def _write(data, name="config.json"):
        path = tmp_path / name
        path.write_text(json.dumps(data), encoding="utf-8")
        return path
    return _write
